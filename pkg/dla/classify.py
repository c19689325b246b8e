"""
Classify Module
Three-valued decision procedures with condition traces: isomorphism,
equivalence, embeddability and universality of diagonal locally simple Lie
algebras given by their profiles.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple, Union

from sympy import factorint

from dla.exhaustions import (
    DEFAULT_PRECISION, DEFAULT_REFINEMENT_ROUNDS, AlgType, DensityClass, RationalInterval,
    SymmetryClass, as_interval, levels, refine_profile,
)
from dla.steinitz import (
    INF, UNIVERSAL, SteinitzNumber, divides, gcd, q_witness, quotst, ratio_contains, valuation,
)

logger = logging.getLogger(__name__)

DEFAULT_ALPHA_SEARCH_BOUND = 64


class Answer(Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


class CondStatus(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    VACUOUS = "VACUOUS"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class TraceEntry:
    cond_id: str
    status: CondStatus
    detail: str

    def __str__(self):
        return f"COND {self.cond_id} {self.status.value} {self.detail}"


@dataclass(frozen=True)
class Verdict:
    answer: Answer
    trace: Tuple[TraceEntry, ...]
    precision_used: Fraction

    def lines(self):
        return [f"RESULT: {self.answer.value}"] + [str(entry) for entry in self.trace]

    def serialize(self):
        return "\n".join(self.lines()) + "\n"

    def status_of(self, cond_id):
        for entry in self.trace:
            if entry.cond_id == cond_id:
                return entry.status
        return None


@dataclass(frozen=True)
class EmbedContext:
    S: SteinitzNumber
    S1: SteinitzNumber
    S2: SteinitzNumber
    R1: SteinitzNumber
    R2: SteinitzNumber
    C: Optional[SteinitzNumber]
    C1: Optional[SteinitzNumber]
    C2: Optional[SteinitzNumber]
    B1: Optional[SteinitzNumber]
    B2: Optional[SteinitzNumber]
    delta1: Union[Fraction, RationalInterval]
    delta2: Union[Fraction, RationalInterval]
    sigma1: Union[Fraction, RationalInterval]
    sigma2: Union[Fraction, RationalInterval]
    epsilon: Optional[int] = None


def embed_context(p1, p2):
    S = gcd(p1.S, p2.S)
    C = B1 = B2 = None
    if p1.C is not None and p2.C is not None:
        C = gcd(p1.C, p2.C)
        B1, B2 = quotst(p1.C, C), quotst(p2.C, C)
    return EmbedContext(S=S, S1=p1.S, S2=p2.S, R1=quotst(p1.S, S), R2=quotst(p2.S, S),
                        C=C, C1=p1.C, C2=p2.C, B1=B1, B2=B2,
                        delta1=p1.delta, delta2=p2.delta, sigma1=p1.sigma, sigma2=p2.sigma)


class _Trace:
    def __init__(self):
        self.entries = []

    def add(self, cond_id, status, detail):
        logger.debug("%s -> %s (%s)", cond_id, status.value, detail)
        self.entries.append(TraceEntry(cond_id, status, detail))
        return status

    def verdict(self, precision):
        statuses = {entry.status for entry in self.entries}
        if CondStatus.FAIL in statuses:
            answer = Answer.NO
        elif CondStatus.UNKNOWN in statuses:
            answer = Answer.UNKNOWN
        else:
            answer = Answer.YES
        return Verdict(answer, tuple(self.entries), precision)


def _status(outcome):
    if outcome is None:
        return CondStatus.UNKNOWN
    return CondStatus.PASS if outcome else CondStatus.FAIL


class _Refiner:
    """
    Re-evaluates a comparison on ever finer delta enclosures until it is
    decided or the round cap is reached.
    """

    def __init__(self, p1, p2, precision, rounds):
        self.p1, self.p2 = p1, p2
        self.precision = Fraction(precision)
        self.rounds = rounds
        self.used = self.precision

    @staticmethod
    def _refinable(p):
        return p.descriptor is not None and isinstance(p.delta, RationalInterval)

    def decide(self, evaluate):
        p1, p2, precision = self.p1, self.p2, self.precision
        for round_ in range(self.rounds + 1):
            outcome = evaluate(p1, p2)
            if outcome is not None or not (self._refinable(p1) or self._refinable(p2)):
                break
            if round_ == self.rounds:
                logger.debug("refinement cap of %d rounds reached", self.rounds)
                break
            precision /= 16
            # each round needs about four more tail periods
            inner = DEFAULT_REFINEMENT_ROUNDS + 4 * (round_ + 1)
            p1 = refine_profile(p1, precision, inner)
            p2 = refine_profile(p2, precision, inner)
        self.used = min(self.used, precision)
        return outcome


def _le(a, b, strict=False):
    """Certain order of two enclosures, or None."""
    if strict:
        if a.hi < b.lo:
            return True
        if a.lo >= b.hi:
            return False
        return None
    if a.hi <= b.lo:
        return True
    if a.lo > b.hi:
        return False
    return None


def _eq(a, b):
    if a.is_exact and b.is_exact:
        return a.lo == b.lo
    if a.hi < b.lo or b.hi < a.lo:
        return False
    return None


def _same_descriptor(p1, p2):
    return p1.descriptor is not None and p1.descriptor == p2.descriptor


def _fmt(value):
    return str(value)


def _delta_ratio(p1, p2):
    if isinstance(p1.delta, Fraction) and isinstance(p2.delta, Fraction):
        return p1.delta / p2.delta
    return as_interval(p1.delta) / as_interval(p2.delta)


def _ratio_membership(ratio, S1, S2, bound):
    """
    Whether a (possibly enclosed) ratio lies in S1/S2. Enclosures are decided
    only when the ratio set is discrete near them.
    """
    if isinstance(ratio, Fraction):
        return ratio_contains(ratio, S1, S2)
    if ratio.is_exact:
        return ratio_contains(ratio.lo, S1, S2)
    q0 = q_witness(S1, S2)
    if q0 is None:
        return False
    if S1.default is INF:
        return None
    primes = S1.inf_primes()
    if not primes:
        return None if ratio.contains(q0) else False
    if len(primes) > 1:
        return None
    p = Fraction(primes[0])
    if any(ratio.contains(q0 * p ** k) for k in range(-bound, bound + 1)):
        return None
    if q0 * p ** -bound < ratio.lo and q0 * p ** bound > ratio.hi:
        return False
    return None


def _density_conditions(trace, refiner, p1, p2, bound):
    """Density type, Q-equivalence of S, density ratio membership."""
    same_density = p1.density is p2.density
    trace.add("density-type", _status(same_density),
              f"{p1.density.value} vs {p2.density.value}")
    witness = q_witness(p1.S, p2.S)
    detail = f"S={p1.S}; S'={p2.S}"
    trace.add("stz-s-equivalent", _status(witness is not None),
              detail + (f"; q={witness}" if witness is not None else ""))
    if not same_density or witness is None:
        trace.add("density-ratio", CondStatus.VACUOUS, "not reached")
        return
    if p1.sparse:
        trace.add("density-ratio", CondStatus.VACUOUS, "sparse: no density ratio")
        return
    if _same_descriptor(p1, p2):
        trace.add("density-ratio", _status(ratio_contains(1, p1.S, p2.S)),
                  "identical exhaustions: delta/delta' = 1")
        return
    outcome = refiner.decide(
        lambda a, b: _ratio_membership(_delta_ratio(a, b), a.S, b.S, bound))
    trace.add("density-ratio", _status(outcome),
              f"delta/delta' = {_fmt(_delta_ratio(p1, p2))} in S/S'"
              if outcome is not None else
              f"delta/delta' enclosure {_delta_ratio(p1, p2)} not separated from S/S'")


def _alpha_search(p1, p2, sigma_ratio, bound):
    """
    Find alpha in S/S' with alpha*sigma/sigma' in C/C'. Returns (outcome, alpha).
    """
    q0 = q_witness(p1.S, p2.S)
    wc = q_witness(p1.C, p2.C)
    candidates = [q0]
    for prime in p1.S.inf_primes():
        for k in range(1, bound + 1):
            candidates.extend((q0 * Fraction(prime) ** k, q0 * Fraction(prime) ** -k))
    for alpha in candidates:
        if ratio_contains(alpha * sigma_ratio, p1.C, p2.C):
            return True, alpha
    # alpha = q0*h with h built from primes where S carries INF
    residue = sigma_ratio * q0 / wc
    primes = set(factorint(residue.numerator)) | set(factorint(residue.denominator))
    alpha = q0
    for prime in sorted(primes):
        s_free = p1.S.exponent(prime) is INF
        c_free = p1.C.exponent(prime) is INF
        if not s_free and not c_free:
            return False, None
        if s_free and not c_free:
            alpha /= Fraction(prime) ** valuation(residue, prime)
    if ratio_contains(alpha * sigma_ratio, p1.C, p2.C):
        return True, alpha
    return None, None


def _symmetry_conditions(trace, p1, p2, bound):
    """Symmetry type, Q-equivalence of C, symmetry ratio for strongly non-symmetric pairs."""
    same = p1.symmetry is p2.symmetry
    trace.add("symmetry-type", _status(same), f"{p1.symmetry.value} vs {p2.symmetry.value}")
    if not same or not p1.symmetry.two_sided_non_symmetric:
        trace.add("stz-c-equivalent", CondStatus.VACUOUS, "not two-sided non-symmetric")
        trace.add("symmetry-ratio", CondStatus.VACUOUS, "not strongly non-symmetric")
        return
    wc = q_witness(p1.C, p2.C)
    trace.add("stz-c-equivalent", _status(wc is not None),
              f"C={p1.C}; C'={p2.C}" + (f"; q={wc}" if wc is not None else ""))
    if p1.symmetry is not SymmetryClass.STRONGLY_NON_SYMMETRIC or wc is None:
        trace.add("symmetry-ratio", CondStatus.VACUOUS, "not strongly non-symmetric")
        return
    if q_witness(p1.S, p2.S) is None:
        trace.add("symmetry-ratio", CondStatus.VACUOUS, "not reached")
        return
    if not (isinstance(p1.sigma, Fraction) and isinstance(p2.sigma, Fraction)):
        trace.add("symmetry-ratio", CondStatus.UNKNOWN, "sigma given only as an enclosure")
        return
    sigma_ratio = p1.sigma / p2.sigma
    if not p1.sparse:
        if not (isinstance(p1.delta, Fraction) and isinstance(p2.delta, Fraction)):
            trace.add("symmetry-ratio", CondStatus.UNKNOWN,
                      "alpha is forced to an enclosed density ratio")
            return
        alpha = p1.delta / p2.delta
        trace.add("symmetry-ratio", _status(ratio_contains(alpha * sigma_ratio, p1.C, p2.C)),
                  f"alpha = delta/delta' = {alpha}")
        return
    outcome, alpha = _alpha_search(p1, p2, sigma_ratio, bound)
    detail = f"alpha = {alpha}" if outcome else "no alpha in S/S' matches C/C'"
    trace.add("symmetry-ratio", _status(outcome), detail)


def isomorphic(p1, p2, precision=DEFAULT_PRECISION, rounds=DEFAULT_REFINEMENT_ROUNDS,
               alpha_bound=DEFAULT_ALPHA_SEARCH_BOUND):
    """
    Decide whether two profiles describe isomorphic Lie algebras.

    Args:
        p1, p2 (AlgebraProfile): certified profiles
        precision (Fraction): starting precision for dense delta enclosures
        rounds (int): refinement rounds before answering Unknown
        alpha_bound (int): |k| bound of the alpha search over q*p^k

    Returns:
        Verdict: answer plus condition trace
    """
    trace = _Trace()
    refiner = _Refiner(p1, p2, precision, rounds)
    t1, t2 = p1.alg_type, p2.alg_type
    if p1.finitary or p2.finitary:
        if p1.finitary and p2.finitary:
            trace.add("finitary", _status(t1 is t2), f"finitary of types {t1.value} and {t2.value}")
        else:
            trace.add("finitary", CondStatus.FAIL, "exactly one algebra is finitary")
        return trace.verdict(refiner.used)

    if t1 is t2:
        _density_conditions(trace, refiner, p1, p2, alpha_bound)
        _symmetry_conditions(trace, p1, p2, alpha_bound)
    elif AlgType.A in (t1, t2):
        a_side, other = (p1, p2) if t1 is AlgType.A else (p2, p1)
        trace.add("cross-type-symmetric",
                  _status(a_side.symmetry is SymmetryClass.TWO_SIDED_SYMMETRIC),
                  f"type A side is {a_side.symmetry.value}")
        trace.add("cross-type-two-power", _status(other.S.exponent(2) is INF),
                  f"2^inf | S of the type {other.alg_type.value} side")
        _density_conditions(trace, refiner, p1, p2, alpha_bound)
    else:
        trace.add("cross-type-two-power",
                  _status(p1.S.exponent(2) is INF and p2.S.exponent(2) is INF),
                  "2^inf divides both S")
        _density_conditions(trace, refiner, p1, p2, alpha_bound)
    return trace.verdict(refiner.used)


_EPSILON_ONE_TYPES = {(AlgType.C, AlgType.C), (AlgType.O, AlgType.O),
                      (AlgType.C, AlgType.A), (AlgType.O, AlgType.A)}


def _symmetry_index_cmp(p1, p2, ctx):
    lhs = as_interval(p1.sigma) * (Fraction(ctx.R1.to_integer(), ctx.B1.to_integer()))
    rhs = as_interval(p2.sigma) * (Fraction(ctx.R2.to_integer(), ctx.B2.to_integer()))
    return lhs, rhs


def choose_epsilon(p1, p2, ctx):
    """
    The epsilon case table. Returns (epsilon or None, case id, detail);
    None when the sigma comparison of the last case stays undecided.
    """
    pair = (p1.alg_type, p2.alg_type)
    if pair in _EPSILON_ONE_TYPES:
        return 1, "eps-type-pair", f"type pair ({pair[0].value},{pair[1].value})"
    if pair != (AlgType.A, AlgType.A):
        return 2, "eps-default", f"type pair ({pair[0].value},{pair[1].value})"
    sym1, sym2 = p1.symmetry, p2.symmetry
    if sym1 is SymmetryClass.ONE_SIDED and sym2 is SymmetryClass.ONE_SIDED:
        return 1, "eps-one-sided", "both one-sided"
    b1_finite = ctx.B1 is not None and ctx.B1.is_finite()
    if b1_finite:
        if (sym1 is SymmetryClass.ONE_SIDED and sym2.two_sided_non_symmetric) or \
                (sym2 is SymmetryClass.WEAKLY_NON_SYMMETRIC and sym1.two_sided_non_symmetric):
            return 1, "eps-symmetry-pattern", f"{sym1.value} into {sym2.value}, B1={ctx.B1}"
        strongly = SymmetryClass.STRONGLY_NON_SYMMETRIC
        if sym1 is strongly and sym2 is strongly:
            if not ctx.B2.is_finite() or ctx.C.has_inf_exponent():
                return 1, "eps-infinite-symmetry-quotient", (
                    f"B2={ctx.B2}, C={ctx.C}; C divisible by an infinite power of some prime")
            if ctx.R1.is_finite() and ctx.R2.is_finite():
                lhs, rhs = _symmetry_index_cmp(p1, p2, ctx)
                outcome = _le(rhs, lhs)
                detail = f"R1*sigma1/B1 = {lhs} vs R2*sigma2/B2 = {rhs}"
                if outcome is None:
                    return None, "eps-symmetry-index", detail + " undecided"
                if outcome:
                    return 1, "eps-symmetry-index", detail
    return 2, "eps-default", f"{sym1.value} into {sym2.value}"


def _index_bound(p1, p2, epsilon, R1, R2, strict):
    # epsilon*R1/delta1 <= R2/delta2  <=>  epsilon*R1*delta2 <= R2*delta1
    lhs = as_interval(p2.delta) * (epsilon * R1)
    rhs = as_interval(p1.delta) * R2
    return _le(lhs, rhs, strict)


def embeds(p1, p2, precision=DEFAULT_PRECISION, rounds=DEFAULT_REFINEMENT_ROUNDS):
    """
    Decide whether the first algebra admits an injective homomorphism into the
    second.

    Returns:
        Verdict: answer plus condition trace
    """
    trace = _Trace()
    refiner = _Refiner(p1, p2, precision, rounds)
    if p1.finitary:
        trace.add("finitary-source", CondStatus.PASS,
                  "finitary algebras embed into every infinite-dimensional diagonal algebra")
        return trace.verdict(refiner.used)
    if p2.finitary:
        trace.add("finitary-target", CondStatus.FAIL,
                  "a non-finitary algebra does not embed into a finitary one")
        return trace.verdict(refiner.used)

    ctx = embed_context(p1, p2)
    trace.add("quotient-finite", _status(ctx.R1.is_finite()), f"R1={ctx.R1}")
    if p1.sparse:
        trace.add("sparse-preserved", _status(p2.sparse),
                  f"sparse source into {p2.density.value} target")
    else:
        trace.add("sparse-preserved", CondStatus.VACUOUS, "source not sparse")

    if p1.sparse or p2.sparse:
        trace.add("index-bound", CondStatus.VACUOUS, "a sparse algebra is involved")
    elif not (ctx.R1.is_finite() and ctx.R2.is_finite()):
        trace.add("index-bound", CondStatus.VACUOUS, f"R1={ctx.R1}, R2={ctx.R2} not both finite")
    elif ctx.S.has_inf_exponent():
        trace.add("index-bound", CondStatus.VACUOUS, f"S={ctx.S} has an infinite exponent")
    else:
        epsilon, case_id, detail = choose_epsilon(p1, p2, ctx)
        trace.add("epsilon-case",
                  CondStatus.UNKNOWN if epsilon is None else CondStatus.PASS,
                  f"{case_id}: epsilon={epsilon if epsilon else '?'}; {detail}")
        R1, R2 = ctx.R1.to_integer(), ctx.R2.to_integer()
        strict = p1.density is DensityClass.PURE and p2.density is DensityClass.DENSE
        if epsilon is not None:
            outcome = refiner.decide(lambda a, b: _index_bound(a, b, epsilon, R1, R2, strict))
        else:
            lower = refiner.decide(lambda a, b: _index_bound(a, b, 1, R1, R2, strict))
            upper = refiner.decide(lambda a, b: _index_bound(a, b, 2, R1, R2, strict))
            outcome = lower if lower == upper else None
        relation = "<" if strict else "<="
        trace.add("index-bound", _status(outcome),
                  f"{epsilon or '?'}*R1/delta1 {relation} R2/delta2 with R1={R1}, R2={R2}")
    return trace.verdict(refiner.used)


def equivalent(p1, p2, precision=DEFAULT_PRECISION, rounds=DEFAULT_REFINEMENT_ROUNDS):
    """
    Decide whether each algebra admits an injective homomorphism into the other.

    Returns:
        Verdict: answer plus condition trace
    """
    trace = _Trace()
    refiner = _Refiner(p1, p2, precision, rounds)
    if p1.finitary or p2.finitary:
        trace.add("finitary-both", _status(p1.finitary and p2.finitary),
                  "finitary algebras are pairwise equivalent")
        return trace.verdict(refiner.used)

    witness = q_witness(p1.S, p2.S)
    trace.add("stz-s-equivalent", _status(witness is not None),
              f"S1={p1.S}; S2={p2.S}" + (f"; q={witness}" if witness is not None else ""))
    trace.add("sparseness-match", _status(p1.sparse == p2.sparse),
              f"{p1.density.value} vs {p2.density.value}")

    S = gcd(p1.S, p2.S)
    if p1.sparse or p2.sparse or witness is None:
        trace.add("index-ratio-equal", CondStatus.VACUOUS, "sparse or not Q-equivalent")
        return trace.verdict(refiner.used)
    if S.has_inf_exponent():
        trace.add("index-ratio-equal", CondStatus.VACUOUS, f"S={S} has an infinite exponent")
        return trace.verdict(refiner.used)

    ctx = embed_context(p1, p2)
    R1, R2 = ctx.R1.to_integer(), ctx.R2.to_integer()
    if _same_descriptor(p1, p2):
        trace.add("index-ratio-equal", CondStatus.PASS, "identical exhaustions")
    else:
        outcome = refiner.decide(
            lambda a, b: _eq(as_interval(b.delta) * R1, as_interval(a.delta) * R2))
        trace.add("index-ratio-equal", _status(outcome),
                  f"R1/delta1 = R2/delta2 with R1={R1}, R2={R2}")
    trace.add("density-type", _status(p1.density is p2.density),
              f"{p1.density.value} vs {p2.density.value}")
    trace.add("algebra-type", _status(p1.alg_type is p2.alg_type),
              f"{p1.alg_type.value} vs {p2.alg_type.value}")
    same_symmetry = p1.symmetry is p2.symmetry
    trace.add("symmetry-type", _status(same_symmetry),
              f"{p1.symmetry.value} vs {p2.symmetry.value}")

    if not (same_symmetry and p1.symmetry.two_sided_non_symmetric):
        trace.add("stz-c-equivalent", CondStatus.VACUOUS, "not two-sided non-symmetric")
        return trace.verdict(refiner.used)
    trace.add("stz-c-equivalent", _status(q_witness(p1.C, p2.C) is not None),
              f"C1={p1.C}; C2={p2.C}")
    if p1.symmetry is SymmetryClass.STRONGLY_NON_SYMMETRIC and not ctx.C.has_inf_exponent() \
            and ctx.B1.is_finite() and ctx.B2.is_finite():
        lhs, rhs = _symmetry_index_cmp(p1, p2, ctx)
        trace.add("symmetry-index-equal", _status(_eq(lhs, rhs)),
                  f"R1*sigma1/B1 = {lhs} vs R2*sigma2/B2 = {rhs}")
    else:
        trace.add("symmetry-index-equal", CondStatus.VACUOUS,
                  "not strongly non-symmetric or C has an infinite exponent")
    return trace.verdict(refiner.used)


def is_universal(p):
    """The greatest element: sparse with S = p1^inf p2^inf ..."""
    return p.sparse and p.S == UNIVERSAL


def universality(p):
    """is_universal with a trace; every algebra embeds into the universal one."""
    trace = _Trace()
    trace.add("universal-sparse", _status(p.sparse), p.density.value)
    trace.add("universal-steinitz", _status(p.S == UNIVERSAL), f"S={p.S}")
    return trace.verdict(Fraction(0))


def index_divisibility_check(p1, p2, diagram, depth):
    """
    Check the index products of a diagram's first `depth` levels and the
    Steinitz divisibility S1 | S2*N they imply.
    """
    rows = list(diagram.levels[:depth])
    if depth <= 0 or not rows:
        return True
    first = rows[0]
    source = levels(diagram.source, rows[-1].i + 1)
    target = levels(diagram.target, rows[-1].k + 1)
    M = first.x + first.y
    if M < 1:
        return False
    for row in rows[1:]:
        prod_s = 1
        for lv in source[first.i:row.i]:
            prod_s *= lv.s
        prod_t = 1
        for lv in target[first.k:row.k]:
            prod_t *= lv.s
        if M * prod_t != prod_s * (row.x + row.y) or (M * prod_t) % prod_s:
            logger.debug("index products break at source level %d", row.i)
            return False
    head = diagram.source.n0
    for lv in source[:first.i]:
        head *= lv.s
    return divides(p1.S, p2.S * (M * head))
