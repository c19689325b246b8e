"""
Exhaustions Module
Finite descriptions of exhaustions of diagonal Lie algebras, the sequences
(n_i, s_i, c_i) they generate, density and symmetry classification, and the
algebra profiles consumed by the decision procedures.
"""
import dataclasses
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import islice
from typing import Optional, Tuple, Union

from sympy import factorint, sieve

from dla.errors import DimensionMismatch, InconsistentProfile, InvalidDescriptor
from dla.steinitz import INF, SteinitzNumber

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = Fraction(1, 2 ** 40)
DEFAULT_REFINEMENT_ROUNDS = 64


class AlgType(Enum):
    A = "A"
    C = "C"
    O = "O"


class DensityClass(Enum):
    SPARSE = "sparse"
    DENSE = "dense"
    PURE = "pure"


class SymmetryClass(Enum):
    ONE_SIDED = "one-sided"
    TWO_SIDED_SYMMETRIC = "two-sided-symmetric"
    WEAKLY_NON_SYMMETRIC = "weakly-non-symmetric"
    STRONGLY_NON_SYMMETRIC = "strongly-non-symmetric"

    @property
    def two_sided_non_symmetric(self):
        return self in (SymmetryClass.WEAKLY_NON_SYMMETRIC, SymmetryClass.STRONGLY_NON_SYMMETRIC)


@dataclass(frozen=True)
class SignatureTriple:
    """Signature (l, r, z) of a diagonal inclusion: l copies of V, r of V*, z trivial."""
    l: int
    r: int
    z: int

    def __post_init__(self):
        for name in ("l", "r", "z"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise InvalidDescriptor(f"signature entry {name}={value!r} must be a natural number")
        if self.l < self.r:
            raise InvalidDescriptor(f"signature {self} has l < r")
        if self.l + self.r < 1:
            raise InvalidDescriptor(f"signature {self} has l + r = 0")

    @property
    def s(self):
        return self.l + self.r

    @property
    def c(self):
        return self.l - self.r

    def target_dim(self, n):
        return self.s * n + self.z

    def __str__(self):
        return f"({self.l},{self.r},{self.z})"


@dataclass(frozen=True)
class Periodic:
    triples: Tuple[SignatureTriple, ...]

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(self.triples))
        if not self.triples:
            raise InvalidDescriptor("periodic tail needs at least one signature")

    @property
    def period_product(self):
        product = 1
        for t in self.triples:
            product *= t.s
        return product

    def __str__(self):
        return "periodic " + " ".join(str(t) for t in self.triples)


@dataclass(frozen=True)
class PrimeSeq:
    """Tail (p_{offset+j}, 0, 0) for j = 0, 1, ... with p_1 = 2."""
    offset: int = 1

    def __post_init__(self):
        if self.offset < 1:
            raise InvalidDescriptor(f"prime offset must be >= 1, got {self.offset}")

    def __str__(self):
        return f"primes offset {self.offset}"


@dataclass(frozen=True)
class Proportional:
    """Tail (l, r, beta*n_i) at level i, so n_{i+1} = (l + r + beta)*n_i."""
    l: int
    r: int
    beta: int

    def __post_init__(self):
        SignatureTriple(self.l, self.r, 0)
        if self.beta < 0:
            raise InvalidDescriptor(f"beta must be a natural number, got {self.beta}")

    def __str__(self):
        return f"proportional ({self.l},{self.r},{self.beta})"


TailGenerator = Union[Periodic, PrimeSeq, Proportional]


@dataclass(frozen=True)
class ExhaustionDescriptor:
    alg_type: AlgType
    n0: int
    tail: TailGenerator
    prefix: Tuple[SignatureTriple, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        validate_descriptor(self)


@dataclass(frozen=True)
class LevelData:
    i: int
    n: int
    s: int
    c: int
    delta: Fraction
    sigma: Fraction
    signature: SignatureTriple


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval [lo, hi] of exact rationals enclosing a limit."""
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value):
        return cls(value, value)

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def is_exact(self):
        return self.lo == self.hi

    def contains(self, value):
        return self.lo <= value <= self.hi

    def __mul__(self, other):
        # operands are nonnegative everywhere this is used
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo * other.lo, self.hi * other.hi)
        other = Fraction(other)
        if other < 0:
            raise ValueError("scaling by a negative rational")
        return RationalInterval(self.lo * other, self.hi * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RationalInterval):
            if other.lo <= 0:
                raise ZeroDivisionError("interval divisor must be positive")
            return RationalInterval(self.lo / other.hi, self.hi / other.lo)
        return self * (1 / Fraction(other))

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def as_interval(value):
    """Lift an exact rational to a degenerate interval."""
    if isinstance(value, RationalInterval):
        return value
    return RationalInterval.exact(value)


def validate_descriptor(d):
    """
    Check strict growth of n_i and the type-specific constraints.

    Every generator repeats its shape after the prefix and one period, so the
    signature-level checks below cover all levels.

    Raises:
        InvalidDescriptor: on the first violated constraint
    """
    if not isinstance(d.alg_type, AlgType):
        raise InvalidDescriptor(f"unknown algebra type {d.alg_type!r}")
    if isinstance(d.n0, bool) or not isinstance(d.n0, int) or d.n0 < 2:
        raise InvalidDescriptor(f"n0 must be an integer >= 2, got {d.n0!r}")
    if d.alg_type is AlgType.C and d.n0 % 2:
        raise InvalidDescriptor("type C needs even natural dimensions")

    triples = list(d.prefix)
    if isinstance(d.tail, Periodic):
        triples.extend(d.tail.triples)
    elif isinstance(d.tail, Proportional):
        if d.tail.l + d.tail.r + d.tail.beta < 2:
            raise InvalidDescriptor(f"tail {d.tail} does not increase the dimension")
        if d.alg_type is not AlgType.A and d.tail.r:
            raise InvalidDescriptor(f"type {d.alg_type.value} signatures need r = 0")
    elif not isinstance(d.tail, PrimeSeq):
        raise InvalidDescriptor(f"unknown tail generator {d.tail!r}")

    for t in triples:
        if t.s < 2 and t.z < 1:
            raise InvalidDescriptor(f"signature {t} does not increase the dimension")
        if d.alg_type is not AlgType.A and t.r:
            raise InvalidDescriptor(f"type {d.alg_type.value} signatures need r = 0, got {t}")
        if d.alg_type is AlgType.C and t.z % 2:
            raise InvalidDescriptor(f"type C signature {t} breaks even dimensions")


def signature_at(d, i, n):
    """Signature of the inclusion at level i, where n = n_i."""
    if i < len(d.prefix):
        return d.prefix[i]
    j = i - len(d.prefix)
    tail = d.tail
    if isinstance(tail, Periodic):
        return tail.triples[j % len(tail.triples)]
    if isinstance(tail, PrimeSeq):
        return SignatureTriple(int(sieve[tail.offset + j]), 0, 0)
    return SignatureTriple(tail.l, tail.r, tail.beta * n)


def iter_levels(d):
    """Lazily yield LevelData for i = 0, 1, 2, ..."""
    n = d.n0
    product_s = 1
    sigma = Fraction(1)
    i = 0
    while True:
        sig = signature_at(d, i, n)
        yield LevelData(i, n, sig.s, sig.c, Fraction(d.n0 * product_s, n), sigma, sig)
        product_s *= sig.s
        sigma *= Fraction(sig.c, sig.s)
        n = sig.target_dim(n)
        i += 1


def derive_level(d, i):
    """Exact level data (n_i, s_i, c_i, delta_i, sigma_i) at level i."""
    if i < 0:
        raise ValueError(f"level index must be natural, got {i}")
    return next(islice(iter_levels(d), i, None))


def levels(d, count):
    return list(islice(iter_levels(d), count))


def _inf_at_primes_of(value):
    if value <= 1:
        return SteinitzNumber()
    return SteinitzNumber({p: INF for p in factorint(value)})


def stz_S(d):
    """Steinitz number n0 * s_0 * s_1 * ... of the exhaustion."""
    result = SteinitzNumber.from_int(d.n0)
    for t in d.prefix:
        result = result * t.s
    tail = d.tail
    if isinstance(tail, Periodic):
        return result * _inf_at_primes_of(tail.period_product)
    if isinstance(tail, PrimeSeq):
        skipped = {int(sieve[j]): 0 for j in range(1, tail.offset)}
        return result * SteinitzNumber(skipped, default=1)
    return result * _inf_at_primes_of(tail.l + tail.r)


def stz_C(d):
    """
    Steinitz number n0 * c_0 * c_1 * ... for non-symmetric type A exhaustions.

    When a prefix level has c = 0 the product restarts after the last such
    level, from n at that point. Returns None when the tail has c = 0
    infinitely often (two-sided symmetric), where C is not used.

    Raises:
        InvalidDescriptor: for types C and O
    """
    if d.alg_type is not AlgType.A:
        raise InvalidDescriptor("stz_C is defined for type A only")
    start = max((i + 1 for i, t in enumerate(d.prefix) if t.c == 0), default=0)
    result = SteinitzNumber.from_int(derive_level(d, start).n)
    for t in d.prefix[start:]:
        result = result * t.c
    tail = d.tail
    if isinstance(tail, Periodic):
        if any(t.c == 0 for t in tail.triples):
            return None
        product = 1
        for t in tail.triples:
            product *= t.c
        return result * _inf_at_primes_of(product)
    if isinstance(tail, PrimeSeq):
        skipped = {int(sieve[j]): 0 for j in range(1, tail.offset)}
        return result * SteinitzNumber(skipped, default=1)
    if tail.l == tail.r:
        return None
    return result * _inf_at_primes_of(tail.l - tail.r)


def _tail_start(d):
    return derive_level(d, len(d.prefix))


def _dense_enclosure(d, precision, max_rounds):
    # delta_{i+1} = delta_i / (1 + x_i), x_i = z_i / (s_i n_i); one period
    # later every x_i has shrunk by at least the period product P
    triples = d.tail.triples
    period = len(triples)
    ratio = d.tail.period_product
    it = iter_levels(d)
    window = list(islice(it, len(d.prefix) + period))[-period:]
    interval = None
    for round_ in range(max_rounds + 1):
        head = window[0]
        tail_sum = sum(Fraction(lv.signature.z, lv.s * lv.n) for lv in window)
        bound = tail_sum * ratio / (ratio - 1)
        lo = head.delta * (1 - bound) if bound < 1 else Fraction(0)
        interval = RationalInterval(lo, head.delta)
        if interval.width <= precision:
            break
        if round_ == max_rounds:
            logger.debug("delta enclosure stopped at width %s after %d rounds",
                         float(interval.width), max_rounds)
            break
        window = list(islice(it, period))
    return interval


def classify_density(d, precision=DEFAULT_PRECISION, max_rounds=DEFAULT_REFINEMENT_ROUNDS):
    """
    Classify the density type of an exhaustion.

    Args:
        d (ExhaustionDescriptor): the exhaustion
        precision (Fraction): target width of a dense delta enclosure
        max_rounds (int): refinement rounds, one tail period each

    Returns:
        tuple: (DensityClass, Fraction or RationalInterval)
    """
    tail = d.tail
    if isinstance(tail, Periodic):
        if tail.period_product == 1:
            # n grows linearly, sum of z/(s n) diverges
            return DensityClass.SPARSE, Fraction(0)
        if all(t.z == 0 for t in tail.triples):
            return DensityClass.PURE, _tail_start(d).delta
        return DensityClass.DENSE, _dense_enclosure(d, Fraction(precision), max_rounds)
    if isinstance(tail, Proportional) and tail.beta >= 1:
        return DensityClass.SPARSE, Fraction(0)
    return DensityClass.PURE, _tail_start(d).delta


def classify_symmetry(d):
    """Symmetry type and sigma; types C and O are one-sided with sigma = 1."""
    one_sided = (SymmetryClass.ONE_SIDED, Fraction(1))
    if d.alg_type is not AlgType.A:
        return one_sided
    tail = d.tail
    if isinstance(tail, PrimeSeq):
        return one_sided
    if isinstance(tail, Periodic):
        pairs = [(t.c, t.s) for t in tail.triples]
    else:
        pairs = [(tail.l - tail.r, tail.l + tail.r)]
    if all(c == s for c, s in pairs):
        return one_sided
    if any(c == 0 for c, _ in pairs):
        return SymmetryClass.TWO_SIDED_SYMMETRIC, Fraction(0)
    return SymmetryClass.WEAKLY_NON_SYMMETRIC, Fraction(0)


@dataclass(frozen=True)
class AlgebraProfile:
    """
    Classification data of a diagonal locally simple Lie algebra.

    `descriptor` is set when the profile was derived, which lets dense
    delta enclosures be refined on demand.
    """
    alg_type: AlgType
    S: SteinitzNumber
    density: DensityClass
    delta: Union[Fraction, RationalInterval]
    symmetry: SymmetryClass
    sigma: Union[Fraction, RationalInterval]
    finitary: bool
    C: Optional[SteinitzNumber] = None
    descriptor: Optional[ExhaustionDescriptor] = field(default=None, compare=False, repr=False)

    @property
    def sparse(self):
        return self.density is DensityClass.SPARSE


def _in_unit(value, include_one=True):
    """0 < value <= 1 (or < 1), for exact values and enclosures."""
    if isinstance(value, RationalInterval):
        if value.lo < 0 or value.hi <= 0 or value.hi > 1:
            return False
        return include_one or value.lo < 1
    return 0 < value < 1 or (include_one and value == 1)


def certify(p):
    """
    Validate a profile and return its normal form (one-sided type A gets C = S,
    types C and O drop C).

    Raises:
        InconsistentProfile: naming the violated invariant
    """
    if p.sparse != (p.delta == 0):
        raise InconsistentProfile("density-delta", f"{p.density.value} with delta {p.delta}")
    if p.density is DensityClass.PURE and isinstance(p.delta, RationalInterval):
        raise InconsistentProfile("pure-exact", "pure profiles need an exact delta")
    if not p.sparse and not _in_unit(p.delta):
        raise InconsistentProfile("delta-range", f"delta {p.delta} outside (0, 1]")
    if p.finitary != p.S.is_finite():
        raise InconsistentProfile("finitary", f"finitary={p.finitary} but S = {p.S}")
    if p.finitary and not p.sparse:
        raise InconsistentProfile("finitary-sparse", "finitary algebras are sparse")
    if p.alg_type is not AlgType.A and p.symmetry is not SymmetryClass.ONE_SIDED:
        raise InconsistentProfile("type-symmetry", f"type {p.alg_type.value} is one-sided")

    sigma = p.sigma
    if p.symmetry is SymmetryClass.ONE_SIDED and sigma != 1:
        raise InconsistentProfile("sigma-class", "one-sided profiles have sigma = 1")
    if p.symmetry in (SymmetryClass.TWO_SIDED_SYMMETRIC, SymmetryClass.WEAKLY_NON_SYMMETRIC) \
            and sigma != 0:
        raise InconsistentProfile("sigma-class", f"{p.symmetry.value} needs sigma = 0")
    if p.symmetry is SymmetryClass.STRONGLY_NON_SYMMETRIC:
        if not _in_unit(sigma, include_one=False):
            raise InconsistentProfile("sigma-class", "strongly non-symmetric needs 0 < sigma < 1")
    if p.symmetry is SymmetryClass.TWO_SIDED_SYMMETRIC and p.S.exponent(2) is not INF:
        raise InconsistentProfile("symmetric-two-power", "symmetric tails force 2^inf | S")

    if p.alg_type is not AlgType.A:
        return dataclasses.replace(p, C=None)
    if p.symmetry is SymmetryClass.ONE_SIDED and p.C is None:
        return dataclasses.replace(p, C=p.S)
    if p.symmetry.two_sided_non_symmetric and p.C is None:
        raise InconsistentProfile("c-required", "two-sided non-symmetric profiles need C")
    return p


def profile_of(d, precision=DEFAULT_PRECISION, max_rounds=DEFAULT_REFINEMENT_ROUNDS):
    """Derive and certify the profile of a descriptor."""
    density, delta = classify_density(d, precision, max_rounds)
    symmetry, sigma = classify_symmetry(d)
    S = stz_S(d)
    C = None
    if d.alg_type is AlgType.A and symmetry is not SymmetryClass.TWO_SIDED_SYMMETRIC:
        C = stz_C(d)
    profile = AlgebraProfile(alg_type=d.alg_type, S=S, density=density, delta=delta,
                             symmetry=symmetry, sigma=sigma, finitary=S.is_finite(),
                             C=C, descriptor=d)
    logger.debug("profile of %s: S=%s %s %s", d, S, density.value, symmetry.value)
    return certify(profile)


def refine_profile(p, precision, max_rounds=DEFAULT_REFINEMENT_ROUNDS):
    """Tighter delta enclosure for derived dense profiles; others are returned as is."""
    if p.descriptor is None or not isinstance(p.delta, RationalInterval):
        return p
    return profile_of(p.descriptor, precision, max_rounds)


def compose_signature(sig1, sig2, n1, n2=None, n3=None):
    """
    Signature of sl(n1) -> sl(n2) -> sl(n3) from the two step signatures.

    Raises:
        DimensionMismatch: if given n2 or n3 disagree with the signatures
    """
    expected_n2 = sig1.target_dim(n1)
    if n2 is not None and n2 != expected_n2:
        raise DimensionMismatch(f"{sig1} maps dimension {n1} to {expected_n2}, not {n2}")
    expected_n3 = sig2.target_dim(expected_n2)
    if n3 is not None and n3 != expected_n3:
        raise DimensionMismatch(f"{sig2} maps dimension {expected_n2} to {expected_n3}, not {n3}")
    l = sig1.l * sig2.l + sig1.r * sig2.r
    r = sig1.l * sig2.r + sig1.r * sig2.l
    return SignatureTriple(l, r, expected_n3 - (l + r) * n1)
