"""
Formats Module
Line-oriented text grammars for descriptors, profiles, diagrams, triangles,
weights and rational literals. Every parser reports errors with line and
column.
"""
import logging
import re
from fractions import Fraction

from dla.branching import HighestWeight
from dla.constructor import DiagramLevel, EmbeddingDiagram, Triangle
from dla.errors import DLAError, InvalidWeight, ParseError
from dla.exhaustions import (
    AlgebraProfile, AlgType, DensityClass, ExhaustionDescriptor, Periodic, PrimeSeq,
    Proportional, RationalInterval, SignatureTriple, SymmetryClass, certify, profile_of,
)
from dla.steinitz import parse_steinitz

logger = logging.getLogger(__name__)

_TRIPLE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")
_POWER = re.compile(r"^\s*(\d+)\s*\^\s*(-?\d+)\s*$")
_FRACTION = re.compile(r"^\s*(-?\d+)\s*/\s*(\d+)\s*$")
_DECIMAL = re.compile(r"^\s*-?\d+(\.\d+)?\s*$")
_INTERVAL = re.compile(r"^\s*\[\s*([^,\]]+?)\s*,\s*([^,\]]+?)\s*\]\s*$")
_INLINE = re.compile(r"\s*(\S+)\s+(\S+)\s+(?:prefix\s+(.*?)\s*)?tail\s+(.+)")


def _logical_lines(text):
    """(line number, column of first char, content) without comments and blank lines."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        if content.strip():
            yield number, len(content) - len(content.lstrip()) + 1, content.strip()


def _key_value(number, column, content):
    if ":" not in content:
        raise ParseError(f"expected 'key: value', got {content!r}", number, column)
    key, value = content.split(":", 1)
    value_column = column + len(key) + 1 + (len(value) - len(value.lstrip()))
    return key.strip(), value.strip(), value_column


def parse_rational(text, line=1, column=1):
    """`p/q`, a decimal such as `0.25`, or a power such as `2^-40`."""
    match = _POWER.match(text)
    if match:
        return Fraction(int(match.group(1))) ** int(match.group(2))
    match = _FRACTION.match(text)
    if match:
        if int(match.group(2)) == 0:
            raise ParseError("zero denominator", line, column)
        return Fraction(int(match.group(1)), int(match.group(2)))
    if _DECIMAL.match(text):
        return Fraction(text.strip())
    raise ParseError(f"malformed rational {text.strip()!r}", line, column)


def parse_value(text, line=1, column=1):
    """Exact rational or `[lo, hi]` interval."""
    match = _INTERVAL.match(text)
    if match:
        lo = parse_rational(match.group(1), line, column)
        hi = parse_rational(match.group(2), line, column)
        if lo > hi:
            raise ParseError(f"empty interval [{lo}, {hi}]", line, column)
        return RationalInterval(lo, hi)
    return parse_rational(text, line, column)


def format_value(value):
    return str(value)


def _triples(text, line, column):
    triples = []
    position = 0
    for match in _TRIPLE.finditer(text):
        if text[position:match.start()].strip():
            raise ParseError(f"unexpected {text[position:match.start()].strip()!r}",
                             line, column + position)
        try:
            triples.append(SignatureTriple(*(int(g) for g in match.groups())))
        except DLAError as e:
            raise ParseError(str(e), line, column + match.start()) from e
        position = match.end()
    if text[position:].strip():
        raise ParseError(f"unexpected {text[position:].strip()!r}", line, column + position)
    return tuple(triples)


def parse_tail(text, line=1, column=1):
    """`periodic (l,r,z) ...` | `primes offset N` | `proportional (l,r,beta)`."""
    words = text.split(None, 1)
    kind = words[0] if words else ""
    rest = words[1] if len(words) > 1 else ""
    rest_column = column + len(text) - len(rest)
    if kind == "periodic":
        triples = _triples(rest, line, rest_column)
        if not triples:
            raise ParseError("periodic tail needs at least one signature", line, rest_column)
        return Periodic(triples)
    if kind == "primes":
        match = re.fullmatch(r"offset\s+(\d+)", rest.strip())
        if not match:
            raise ParseError("expected 'primes offset N'", line, rest_column)
        return _positioned(lambda: PrimeSeq(int(match.group(1))), line, rest_column)
    if kind == "proportional":
        match = _TRIPLE.fullmatch(rest.strip())
        if not match:
            raise ParseError("expected 'proportional (l,r,beta)'", line, rest_column)
        return _positioned(lambda: Proportional(*(int(g) for g in match.groups())), line, rest_column)
    raise ParseError(f"unknown tail kind {kind!r}", line, column)


def _alg_type(text, line, column):
    try:
        return AlgType(text.strip())
    except ValueError:
        raise ParseError(f"type must be A, C or O, got {text.strip()!r}", line, column) from None


def _natural(text, line, column):
    if not text.strip().isdigit():
        raise ParseError(f"expected a natural number, got {text.strip()!r}", line, column)
    return int(text)


def _positioned(build, line, column):
    try:
        return build()
    except DLAError as e:
        raise ParseError(str(e), line, column) from e


def _descriptor(alg_type, n0, tail, prefix, spots):
    """
    Build a descriptor, positioning validation failures at the n0, tail or
    prefix field that caused them. `spots` maps those names to (line, column).
    """
    _positioned(lambda: ExhaustionDescriptor(alg_type, n0, PrimeSeq()), *spots["n0"])
    _positioned(lambda: ExhaustionDescriptor(alg_type, n0, tail), *spots["tail"])
    return _positioned(lambda: ExhaustionDescriptor(alg_type, n0, tail, prefix), *spots["prefix"])


def parse_descriptor(text):
    """
    Parse a descriptor file:

        type: A
        n0: 2
        prefix: (2,1,3) (4,0,0)
        tail: periodic (3,0,2) (5,0,0)
    """
    fields = {}
    for number, column, content in _logical_lines(text):
        key, value, value_column = _key_value(number, column, content)
        if key not in ("type", "n0", "prefix", "tail"):
            raise ParseError(f"unknown descriptor key {key!r}", number, column)
        fields[key] = (value, number, value_column)
    for required in ("type", "n0", "tail"):
        if required not in fields:
            raise ParseError(f"missing '{required}:' line", 1, 1)
    alg_type = _alg_type(*fields["type"])
    n0 = _natural(*fields["n0"])
    prefix = _triples(*fields["prefix"]) if "prefix" in fields else ()
    tail = parse_tail(*fields["tail"])
    spots = {key: fields.get(key, fields["tail"])[1:] for key in ("n0", "prefix", "tail")}
    return _descriptor(alg_type, n0, tail, prefix, spots)


def format_descriptor(d):
    lines = [f"type: {d.alg_type.value}", f"n0: {d.n0}"]
    if d.prefix:
        lines.append("prefix: " + " ".join(str(t) for t in d.prefix))
    lines.append(f"tail: {d.tail}")
    return "\n".join(lines) + "\n"


def parse_inline_descriptor(text, line=1, column=1):
    """`A 2 [prefix (l,r,z) ...] tail <tail>` on a single line."""
    match = _INLINE.fullmatch(text)
    if not match:
        raise ParseError("expected '<type> <n0> [prefix ...] tail ...'", line, column)
    alg_type = _alg_type(match.group(1), line, column + match.start(1))
    n0 = _natural(match.group(2), line, column + match.start(2))
    prefix = _triples(match.group(3), line, column + match.start(3)) if match.group(3) else ()
    tail = parse_tail(match.group(4), line, column + match.start(4))
    spots = {key: (line, column + match.start(group)) for key, group in
             (("n0", 2), ("prefix", 3 if match.group(3) else 4), ("tail", 4))}
    return _descriptor(alg_type, n0, tail, prefix, spots)


def format_inline_descriptor(d):
    prefix = " prefix " + " ".join(str(t) for t in d.prefix) if d.prefix else ""
    return f"{d.alg_type.value} {d.n0}{prefix} tail {d.tail}"


_PROFILE_KEYS = ("type", "S", "C", "density", "delta", "symmetry", "sigma", "finitary")


def parse_profile(text):
    """
    Parse a profile file with keys type, S, C (optional), density, delta,
    symmetry, sigma and finitary (optional). The result is certified.
    """
    fields = {}
    for number, column, content in _logical_lines(text):
        key, value, value_column = _key_value(number, column, content)
        if key not in _PROFILE_KEYS:
            raise ParseError(f"unknown profile key {key!r}", number, column)
        fields[key] = (value, number, value_column)
    for required in ("type", "S", "density", "delta", "symmetry", "sigma"):
        if required not in fields:
            raise ParseError(f"missing '{required}:' line", 1, 1)

    def steinitz(key):
        value, number, column = fields[key]
        try:
            return parse_steinitz(value)
        except ParseError as e:
            raise e.shifted(number, column - 1) from None

    def enum(cls, key):
        value, number, column = fields[key]
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(member.value for member in cls)
            raise ParseError(f"{key} must be one of {names}", number, column) from None

    S = steinitz("S")
    finitary = S.is_finite()
    if "finitary" in fields:
        value, number, column = fields["finitary"]
        if value not in ("true", "false"):
            raise ParseError("finitary must be true or false", number, column)
        finitary = value == "true"
    profile = AlgebraProfile(
        alg_type=_alg_type(*fields["type"]),
        S=S,
        density=enum(DensityClass, "density"),
        delta=parse_value(*fields["delta"]),
        symmetry=enum(SymmetryClass, "symmetry"),
        sigma=parse_value(*fields["sigma"]),
        finitary=finitary,
        C=steinitz("C") if "C" in fields else None,
    )
    return certify(profile)


def format_profile(p):
    lines = [f"type: {p.alg_type.value}", f"S: {p.S}"]
    if p.C is not None:
        lines.append(f"C: {p.C}")
    lines += [f"density: {p.density.value}", f"delta: {format_value(p.delta)}",
              f"symmetry: {p.symmetry.value}", f"sigma: {format_value(p.sigma)}",
              f"finitary: {'true' if p.finitary else 'false'}"]
    return "\n".join(lines) + "\n"


def read_algebra(text, precision, rounds):
    """
    Profile and descriptor of an algebra file: descriptors carry a `tail:`
    line, profiles an `S:` line. The descriptor is None for profile files.
    """
    keys = {_key_value(*parts)[0] for parts in _logical_lines(text) if ":" in parts[2]}
    if "tail" in keys:
        descriptor = parse_descriptor(text)
        return profile_of(descriptor, precision, rounds), descriptor
    if "S" in keys:
        return parse_profile(text), None
    if not _INLINE.fullmatch(text.strip()):
        raise ParseError("neither a descriptor (tail:) nor a profile (S:)", 1, 1)
    descriptor = parse_inline_descriptor(text.strip())
    return profile_of(descriptor, precision, rounds), descriptor


def parse_diagram(text):
    """Header `diagram`, `source:`/`target:` inline descriptors, then `level i k x y u` lines."""
    lines = list(_logical_lines(text))
    if not lines or lines[0][2] != "diagram":
        number, column = (lines[0][0], lines[0][1]) if lines else (1, 1)
        raise ParseError("expected header 'diagram'", number, column)
    source = target = None
    rows = []
    for number, column, content in lines[1:]:
        if content.startswith("level"):
            parts = content.split()
            if len(parts) != 6 or not all(p.isdigit() for p in parts[1:]):
                raise ParseError("expected 'level i k x y u' with natural numbers", number, column)
            rows.append(DiagramLevel(*(int(p) for p in parts[1:])))
            continue
        key, value, value_column = _key_value(number, column, content)
        if key == "source":
            source = parse_inline_descriptor(value, number, value_column)
        elif key == "target":
            target = parse_inline_descriptor(value, number, value_column)
        else:
            raise ParseError(f"unknown diagram line {key!r}", number, column)
    if source is None or target is None:
        raise ParseError("diagram needs 'source:' and 'target:' lines", 1, 1)
    return EmbeddingDiagram(source, target, tuple(rows))


def format_diagram(diagram):
    lines = ["diagram",
             f"source: {format_inline_descriptor(diagram.source)}",
             f"target: {format_inline_descriptor(diagram.target)}"]
    lines += [f"level {r.i} {r.k} {r.x} {r.y} {r.u}" for r in diagram.levels]
    return "\n".join(lines) + "\n"


def _indexed(content, word, number, column):
    match = re.fullmatch(word + r"\s+(\d+)\s*:\s*(.*)", content)
    if not match:
        raise ParseError(f"expected '{word} k: ...'", number, column)
    return int(match.group(1)), match.group(2), column + match.start(2)


def parse_triangle(text):
    """Header `triangle q <q>`, then `group k:`, `row k:`, `b k:` and optional `eps k:` lines."""
    lines = list(_logical_lines(text))
    header = re.fullmatch(r"triangle\s+q\s+(\d+)", lines[0][2]) if lines else None
    if not header:
        number, column = (lines[0][0], lines[0][1]) if lines else (1, 1)
        raise ParseError("expected header 'triangle q <q>'", number, column)
    groups, rows, b, eps = {}, {}, {}, {}
    for number, column, content in lines[1:]:
        word = content.split(None, 1)[0]
        if word not in ("group", "row", "b", "eps"):
            raise ParseError(f"unknown triangle line {word!r}", number, column)
        k, value, value_column = _indexed(content, word, number, column)
        if word == "group":
            groups[k] = _natural(value, number, value_column)
        elif word == "row":
            if not value or not all(p.isdigit() for p in value.split()):
                raise ParseError("row entries must be natural numbers", number, value_column)
            rows[k] = tuple(int(p) for p in value.split())
        elif word == "b":
            b[k] = parse_rational(value, number, value_column)
        else:
            eps[k] = parse_rational(value, number, value_column)
    depth = len(groups)
    for name, table, first in (("group", groups, 1), ("row", rows, 0), ("b", b, 1)):
        if sorted(table) != list(range(first, depth + 1)):
            raise ParseError(f"'{name}' lines must be numbered {first}..{depth}", 1, 1)
    if eps and sorted(eps) != list(range(1, depth + 1)):
        raise ParseError(f"'eps' lines must be numbered 1..{depth}", 1, 1)
    return Triangle(
        q=int(header.group(1)),
        group_sizes=tuple(groups[k] for k in range(1, depth + 1)),
        rows=tuple(rows[k] for k in range(depth + 1)),
        b=tuple(b[k] for k in range(1, depth + 1)),
        eps=tuple(eps[k] for k in range(1, depth + 1)) if eps else (Fraction(0),) * depth,
        constant_path=not eps,
    )


def format_triangle(t):
    lines = [f"triangle q {t.q}"]
    lines += [f"group {k}: {n}" for k, n in enumerate(t.group_sizes, start=1)]
    lines += [f"row {k}: " + " ".join(str(a) for a in row) for k, row in enumerate(t.rows)]
    lines += [f"b {k}: {value}" for k, value in enumerate(t.b, start=1)]
    if not t.constant_path:
        lines += [f"eps {k}: {value}" for k, value in enumerate(t.eps, start=1)]
    return "\n".join(lines) + "\n"


def parse_weight(text, line=1, column=1):
    """`[2,1,0]`"""
    match = re.fullmatch(r"\s*\[\s*(\d+(?:\s*,\s*\d+)*)?\s*\]\s*", text)
    if not match:
        raise ParseError(f"malformed weight {text.strip()!r}", line, column)
    entries = tuple(int(p) for p in match.group(1).split(",")) if match.group(1) else ()
    try:
        return HighestWeight(entries)
    except InvalidWeight as e:
        raise ParseError(str(e), line, column) from e


def parse_signature(text, line=1, column=1):
    """`(l,r,z)`"""
    triples = _triples(text, line, column)
    if len(triples) != 1:
        raise ParseError("expected exactly one signature '(l,r,z)'", line, column)
    return triples[0]
