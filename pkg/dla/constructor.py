"""
Constructor Module
Builds and verifies constructive witnesses: finite-depth commutative embedding
diagrams between two exhaustions, and the exterior-power triangle that embeds
sl(infinity) into a pure one-sided algebra.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, islice
from math import comb
from typing import Tuple

from sympy import sieve

from dla.branching import HighestWeight, gt_branch
from dla.classify import Answer, choose_epsilon, embed_context, embeds
from dla.errors import (
    ConstructionError, EpsilonBoundViolated, NotEmbeddable, TargetTooSmall,
    UnsupportedConstruction, WitnessRejected,
)
from dla.exhaustions import (
    DEFAULT_PRECISION, DEFAULT_REFINEMENT_ROUNDS, AlgType, ExhaustionDescriptor,
    SymmetryClass, as_interval, iter_levels, profile_of, stz_S,
)

logger = logging.getLogger(__name__)

DEFAULT_TARGET_SEARCH_LIMIT = 256


@dataclass(frozen=True)
class DiagramLevel:
    """Source level i maps into target level k with signature (x, y, u)."""
    i: int
    k: int
    x: int
    y: int
    u: int

    def __str__(self):
        return f"LEVEL {self.i} {self.k} {self.x} {self.y} {self.u}"


@dataclass(frozen=True)
class EmbeddingDiagram:
    source: ExhaustionDescriptor
    target: ExhaustionDescriptor
    levels: Tuple[DiagramLevel, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    failures: Tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


class _LevelCache:
    """Random access into the lazily generated levels of one descriptor."""

    def __init__(self, descriptor):
        self._it = iter_levels(descriptor)
        self._levels = []

    def __getitem__(self, index):
        while len(self._levels) <= index:
            self._levels.append(next(self._it))
        return self._levels[index]


def _product(values):
    result = 1
    for v in values:
        result *= v
    return result


def verify_diagram(diagram):
    """
    Check every level of a diagram against the commutativity products, the
    dimension bound and the cross-type parity rules.

    Returns:
        CheckReport: ok flag with one line per failure
    """
    failures = []
    src, tgt = _LevelCache(diagram.source), _LevelCache(diagram.target)
    st, tt = diagram.source.alg_type, diagram.target.alg_type
    self_dual = (AlgType.O, AlgType.C)

    previous = None
    for row in diagram.levels:
        if min(row.i, row.k, row.x, row.y, row.u) < 0:
            failures.append(f"level {row.i}: negative entry")
            previous = row
            continue
        if row.x + row.y < 1:
            failures.append(f"level {row.i}: x + y = 0")
        n, m = src[row.i].n, tgt[row.k].n
        expected_u = m - (row.x + row.y) * n
        if expected_u < 0:
            failures.append(f"level {row.i}: dimension bound m_{row.k}={m} < (x+y)*n_{row.i}")
        if row.u != expected_u:
            failures.append(f"level {row.i}: dimension mismatch u={row.u}, expected {expected_u}")
        if st is AlgType.A and tt in self_dual and row.x != row.y:
            failures.append(f"level {row.i}: parity A->{tt.value} needs x = y")
        if {st, tt} == {AlgType.O, AlgType.C} and row.x % 2:
            failures.append(f"level {row.i}: parity {st.value}->{tt.value} needs even x")
        if st in self_dual and tt in self_dual and row.y:
            failures.append(f"level {row.i}: type {st.value}->{tt.value} needs y = 0")
        if tt is AlgType.C and row.u % 2:
            failures.append(f"level {row.i}: type C target needs an even trivial part")

        if previous is not None:
            if row.i != previous.i + 1:
                failures.append(f"level {row.i}: source levels must be consecutive")
            elif row.k <= previous.k:
                failures.append(f"level {row.i}: k must increase strictly")
            else:
                span = [tgt[j] for j in range(previous.k, row.k)]
                s_i, c_i = src[previous.i].s, src[previous.i].c
                if s_i * (row.x + row.y) != (previous.x + previous.y) * _product(lv.s for lv in span):
                    failures.append(f"level {row.i}: index products differ")
                if c_i * (row.x - row.y) != (previous.x - previous.y) * _product(lv.c for lv in span):
                    failures.append(f"level {row.i}: symmetry products differ")
        previous = row
    return CheckReport(not failures, tuple(failures))


def _quotient_candidates(ctx):
    """Finite divisors R' of the infinite part available to the padded recipe, increasing."""
    prime = ctx.S.smallest_inf_prime() or ctx.R2.smallest_inf_prime()
    if prime is None:
        value, index = 1, 1
        while True:
            p = int(sieve[index])
            if ctx.R2.exponent(p) >= 1:
                value *= p
                yield value
            index += 1
    power = 1
    while True:
        power *= prime
        yield power


def _recipe(branch, p1, p2):
    """Multipliers (a, b) with x = a*q_i, y = b*q_i."""
    st, tt = p1.alg_type, p2.alg_type
    one_sided_target = p2.symmetry is SymmetryClass.ONE_SIDED
    if st is AlgType.A and tt is AlgType.A:
        if branch != "single":
            return 1, 1
        if p1.symmetry is SymmetryClass.ONE_SIDED and one_sided_target:
            return 1, 0
        raise UnsupportedConstruction(
            f"{p1.symmetry.value} into {p2.symmetry.value} needs re-signatured exhaustions")
    if st is AlgType.A:
        return 1, 1
    if tt is AlgType.A:
        if branch == "single":
            if one_sided_target:
                return 1, 0
            raise UnsupportedConstruction(
                f"type {st.value} into a {p2.symmetry.value} type A target needs re-signaturing")
        return (2, 0) if one_sided_target else (1, 1)
    if st is tt and branch == "single":
        return 1, 0
    return 2, 0


def _identity_diagram(d, depth):
    rows = [DiagramLevel(lv.i, lv.i, 1, 0, 0) for lv in islice(iter_levels(d), depth)]
    return EmbeddingDiagram(d, d, rows)


def build_diagram(d1, d2, depth, precision=DEFAULT_PRECISION,
                  rounds=DEFAULT_REFINEMENT_ROUNDS, search_limit=DEFAULT_TARGET_SEARCH_LIMIT):
    """
    Build the first `depth` levels of a commutative diagram embedding the
    first exhaustion's algebra into the second's.

    Args:
        d1, d2 (ExhaustionDescriptor): source and target
        depth (int): number of source levels to realise
        search_limit (int): how far past the previous level k_i is searched

    Returns:
        EmbeddingDiagram: verified diagram

    Raises:
        NotEmbeddable: when the decision is No or Unknown
        UnsupportedConstruction: when the decision is Yes by a branch without a recipe
    """
    if depth < 0:
        raise ValueError(f"depth must be natural, got {depth}")
    if d1 == d2:
        return _identity_diagram(d1, depth)

    p1, p2 = profile_of(d1, precision, rounds), profile_of(d2, precision, rounds)
    verdict = embeds(p1, p2, precision, rounds)
    if verdict.answer is not Answer.YES:
        raise NotEmbeddable(f"embedding decision is {verdict.answer.value}")
    if p1.finitary:
        raise UnsupportedConstruction("finitary sources are realised by build_triangle")

    ctx = embed_context(p1, p2)
    R1 = ctx.R1.to_integer()
    if p2.sparse:
        branch, R = "sparse", 1
    elif not ctx.R2.is_finite() or ctx.S.has_inf_exponent():
        branch = "padded"
        lower = as_interval(p1.delta).lo
        if lower <= 0:
            raise ConstructionError(f"delta1 enclosure {p1.delta} is not bounded away from 0")
        threshold = 2 * R1 / lower
        R = next(c for c in _quotient_candidates(ctx) if c > threshold)
    else:
        epsilon, case_id, _ = choose_epsilon(p1, p2, ctx)
        if epsilon is None:
            raise UnsupportedConstruction(f"epsilon undecided ({case_id})")
        branch = "paired" if epsilon == 2 else "single"
        R = ctx.R2.to_integer()
    a, b = _recipe(branch, p1, p2)
    logger.debug("recipe %s: R=%d, x=%d*q, y=%d*q", branch, R, a, b)

    src, tgt = _LevelCache(d1), _LevelCache(d2)
    # first source level with n0*s_0*...*s_{i-1} divisible by R1
    head, i0 = d1.n0, 0
    while head % R1:
        if i0 > search_limit:
            raise ConstructionError(f"R1={R1} never divides the source products")
        head *= src[i0].s
        i0 += 1

    rows = []
    p_i = head // R1
    k = 0
    target_head = d2.n0
    for level in range(i0, i0 + depth):
        if rows:
            p_i *= src[level - 1].s
        start = k
        while True:
            if k - start > search_limit:
                raise ConstructionError(f"no admissible target level for source level {level}")
            if target_head % (R * p_i) == 0:
                q = target_head // (R * p_i)
                n, m = src[level].n, tgt[k].n
                if m >= (a + b) * q * n:
                    rows.append(DiagramLevel(level, k, a * q, b * q, m - (a + b) * q * n))
                    break
            target_head *= tgt[k].s
            k += 1
        target_head *= tgt[k].s
        k += 1

    diagram = EmbeddingDiagram(d1, d2, rows)
    report = verify_diagram(diagram)
    if not report:
        raise WitnessRejected("built diagram failed verification: " + "; ".join(report.failures))
    return diagram


@dataclass(frozen=True)
class Triangle:
    """
    Rows a_i^k of multiplicities of exterior powers, the grid points b_k and
    the corrections eps_k (all zero on the constant-factor path).
    """
    q: int
    group_sizes: Tuple[int, ...]
    rows: Tuple[Tuple[int, ...], ...]
    b: Tuple[Fraction, ...]
    eps: Tuple[Fraction, ...]
    constant_path: bool = False

    @property
    def depth(self):
        return len(self.group_sizes)


def steinitz_factors(a):
    """Primes whose product is the infinite Steinitz number a, small primes first."""
    if a.is_finite():
        raise TargetTooSmall(f"target {a} is finite")
    used = {}
    stage = 0
    while True:
        stage += 1
        for index in range(1, stage + 1):
            p = int(sieve[index])
            if used.get(p, 0) < a.exponent(p):
                used[p] = used.get(p, 0) + 1
                yield p


def descriptor_factors(d):
    """n0, s_0, s_1, ... with the factors equal to 1 dropped."""
    if stz_S(d).is_finite():
        raise TargetTooSmall("finitary target")
    if d.n0 > 1:
        yield d.n0
    for lv in iter_levels(d):
        if lv.s > 1:
            yield lv.s


def _ceil_to_grid(value, denominator):
    return Fraction(-(-value.numerator * denominator // value.denominator), denominator)


def difference_table(b, order):
    """Iterated differences b^(l)_k = b^(l-1)_k - b^(l-1)_{k+1} for l <= order."""
    table = [list(b)]
    for _ in range(order):
        last = table[-1]
        if len(last) < 2:
            break
        table.append([last[k] - last[k + 1] for k in range(len(last) - 1)])
    return table


def _fill_rows(group_sizes, b):
    rows = [(1,)]
    total = 1
    for k, n_k in enumerate(group_sizes, start=1):
        total *= n_k
        previous = rows[-1]
        top = b[k - 1] * total
        if top.denominator != 1:
            raise ConstructionError(f"b_{k} is not on the 1/{total} grid")
        row = [0] * (k + 1)
        row[k - 1] = int(top)
        row[k] = n_k * previous[k - 1] - row[k - 1]
        for i in range(k - 2, -1, -1):
            row[i] = n_k * previous[i] - row[i + 1]
        if min(row) < 0:
            raise ConstructionError(f"row {k} has a negative entry: {row}")
        rows.append(tuple(row))
    return tuple(rows)


def build_triangle(q, target_factors, depth):
    """
    Build the triangle a_i^k for an embedding of sl(infinity) into the pure
    one-sided algebra with the given factor stream.

    Args:
        q (int): at least 4, or equal to a constant factor n >= 2
        target_factors (iterable): integer factors m_1, m_2, ... of the target
        depth (int): number of rows K beyond the apex

    Raises:
        TargetTooSmall: when the factor stream runs out
        EpsilonBoundViolated: when a correction leaves its bound
    """
    if depth < 0:
        raise ValueError(f"depth must be natural, got {depth}")
    factors = iter(target_factors)
    buffer = list(islice(factors, depth))
    if len(buffer) < depth:
        raise TargetTooSmall("target has too few factors")

    if q >= 2 and all(f == q for f in buffer):
        groups = (q,) * depth
        b = tuple(Fraction(1, q ** k) for k in range(1, depth + 1))
        zeros = (Fraction(0),) * depth
        return Triangle(q, groups, _fill_rows(groups, b), b, zeros, constant_path=True)
    if q < 4:
        raise ValueError(f"q must be at least 4 unless every factor equals q, got {q}")

    stream = chain(buffer, factors)
    groups = []
    total = 1
    for k in range(1, depth + 1):
        threshold = Fraction((q - 1) * q ** (k * k + 1), q - 2)
        group = 1
        while group == 1 or total * group <= threshold:
            factor = next(stream, None)
            if factor is None:
                raise TargetTooSmall(f"factors exhausted while forming group {k}")
            group *= factor
        groups.append(group)
        total *= group

    nodes = [None] + [Fraction(1, q ** i) for i in range(1, depth + 1)]
    coefficients = {}
    b, eps = [], []
    total = 1
    for k in range(1, depth + 1):
        total *= groups[k - 1]
        f_k = Fraction(1, q ** k - 1) + sum(
            (coefficients[(i, j)] * nodes[i] ** k
             for j in range(1, k) for i in range(1, j + 1)), Fraction(0))
        b_k = _ceil_to_grid(f_k, total)
        eps_k = b_k - f_k
        bound = Fraction(q - 2, (q - 1) * q ** (k * k + 1))
        if not 0 <= eps_k < bound:
            raise EpsilonBoundViolated(f"eps_{k} = {eps_k} exceeds {bound}")
        for i in range(1, k + 1):
            denominator = nodes[i]
            for t in range(1, k + 1):
                if t != i:
                    denominator *= nodes[i] - nodes[t]
            coefficients[(i, k)] = eps_k / denominator
        b.append(b_k)
        eps.append(eps_k)
    groups = tuple(groups)
    return Triangle(q, groups, _fill_rows(groups, b), tuple(b), tuple(eps))


def vandermonde_coefficients(t):
    """c_ij = eps_j / (q_i * prod_{t<=j, t!=i}(q_i - q_t)) with q_i = q^-i."""
    nodes = [None] + [Fraction(1, t.q ** i) for i in range(1, t.depth + 1)]
    result = {}
    for j in range(1, t.depth + 1):
        for i in range(1, j + 1):
            denominator = nodes[i]
            for s in range(1, j + 1):
                if s != i:
                    denominator *= nodes[i] - nodes[s]
            result[(i, j)] = t.eps[j - 1] / denominator
    return result


def verify_triangle(t):
    """Check every triangle invariant; used for triangles read back from files."""
    failures = []
    if not t.rows or t.rows[0] != (1,):
        failures.append("apex must be a_0^0 = 1")
    total = 1
    for k in range(1, len(t.rows)):
        row, previous = t.rows[k], t.rows[k - 1]
        if k > len(t.group_sizes):
            failures.append(f"row {k}: no group size")
            break
        n_k = t.group_sizes[k - 1]
        total *= n_k
        if len(row) != k + 1:
            failures.append(f"row {k}: expected {k + 1} entries")
            continue
        if any(not isinstance(a, int) or a < 0 for a in row):
            failures.append(f"row {k}: entries must be nonnegative integers")
        for i in range(k):
            if row[i] + row[i + 1] != n_k * previous[i]:
                failures.append(f"row {k}: branching recurrence fails at i={i}")
        if sum(a * comb(k, i) for i, a in enumerate(row)) != total:
            failures.append(f"row {k}: dimension identity fails")
        if k <= len(t.b) and t.b[k - 1] * total != row[k - 1]:
            failures.append(f"row {k}: b_{k} does not match a_{k - 1}^{k}")
    if sum(t.b, Fraction(0)) > 1:
        failures.append("sum of b_k exceeds 1")
    for level, diffs in enumerate(difference_table(t.b, len(t.b))):
        if any(v < 0 for v in diffs):
            failures.append(f"differences of order {level} are negative")
    if not t.constant_path:
        for k, e in enumerate(t.eps, start=1):
            if not 0 <= e < Fraction(t.q - 2, (t.q - 1) * t.q ** (k * k + 1)):
                failures.append(f"eps_{k} outside its bound")
    return CheckReport(not failures, tuple(failures))


@dataclass(frozen=True)
class LadderLevel:
    """V_k restricted to sl(k): multiplicity a_i^k of the i-th exterior power."""
    k: int
    dimension: int
    components: Tuple[Tuple[int, int, int], ...]
    certificate: Tuple[Tuple[int, int, int], ...]


@dataclass(frozen=True)
class ExteriorLadder:
    levels: Tuple[LadderLevel, ...]

    @property
    def ok(self):
        return all(lhs == rhs for level in self.levels for _, lhs, rhs in level.certificate)


def _exterior_weight(k, i):
    return HighestWeight((1,) * i + (0,) * (k - i))


def _exterior_branching(k, small_rank=6):
    """j -> exterior powers of F_{k-1} inside Lambda^j(F_k) under signature (1,0,1)."""
    if k <= small_rank:
        table = {}
        for j in range(k + 1):
            result = gt_branch(_exterior_weight(k, j))
            table[j] = [sum(w.entries) for w in result.multiplicities]
        return table
    return {j: [i for i in (j, j - 1) if 0 <= i <= k - 1] for j in range(k + 1)}


def triangle_to_diagram(t):
    """
    Ladder sl(k) -> sl(n_1...n_k) with per-level decompositions and the
    branching certificate a_i^k + a_{i+1}^k = n_k a_i^{k-1}.
    """
    result = [LadderLevel(0, 1, ((0, 1, 1),), ())]
    total = 1
    for k in range(1, len(t.rows)):
        total *= t.group_sizes[k - 1]
        row = t.rows[k]
        components = tuple((i, a, comb(k, i)) for i, a in enumerate(row))
        branching = _exterior_branching(k)
        certificate = []
        for i in range(k):
            restricted = sum(row[j] for j in range(k + 1) if i in branching[j])
            certificate.append((i, restricted, t.group_sizes[k - 1] * t.rows[k - 1][i]))
        result.append(LadderLevel(k, total, components, tuple(certificate)))
    return ExteriorLadder(tuple(result))
