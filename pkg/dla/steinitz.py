"""
Steinitz Number Module
Exact arithmetic on Steinitz (supernatural) numbers: formal products of primes
whose exponents are natural numbers or infinity.
"""
import functools
import logging
import re
from fractions import Fraction

from sympy import factorint, isprime, nextprime

from dla.errors import NotDivisible, NotFinite, ParseError

logger = logging.getLogger(__name__)


@functools.total_ordering
class _Infinity:
    """The infinite exponent. Compares above every natural number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("inf")

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = _Infinity()


def _check_exponent(e):
    if e is INF:
        return e
    if isinstance(e, bool) or not isinstance(e, int) or e < 0:
        raise ValueError(f"Exponent must be a natural number or INF, got {e!r}")
    return e


def _exp_add(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def _exp_sub(b, a):
    # inf - inf = 0
    if b is INF:
        return 0 if a is INF else INF
    return b - a


class SteinitzNumber:
    """
    A Steinitz number in canonical form: a finite map of exceptional primes to
    exponents plus a default exponent carried by every other prime.

    Args:
        exceptions (dict, optional): prime -> exponent (int or INF)
        default (int or INF): exponent of every prime not listed
    """

    __slots__ = ("_exceptions", "_default")

    def __init__(self, exceptions=None, default=0):
        default = _check_exponent(default)
        canonical = {}
        for prime, exponent in (exceptions or {}).items():
            if not isprime(prime):
                raise ValueError(f"{prime} is not prime")
            exponent = _check_exponent(exponent)
            if exponent != default:
                canonical[int(prime)] = exponent
        self._exceptions = tuple(sorted(canonical.items()))
        self._default = default

    @classmethod
    def from_int(cls, n):
        """Factor a positive integer into a finite Steinitz number."""
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValueError(f"Expected a positive integer, got {n!r}")
        return cls({p: int(e) for p, e in factorint(n).items()})

    @classmethod
    def prime_power(cls, prime, exponent):
        return cls({prime: exponent})

    @classmethod
    def parse(cls, text):
        return parse_steinitz(text)

    @property
    def default(self):
        return self._default

    @property
    def exceptions(self):
        return dict(self._exceptions)

    def exponent(self, prime):
        for p, e in self._exceptions:
            if p == prime:
                return e
        return self._default

    def exceptional_primes(self):
        return [p for p, _ in self._exceptions]

    def inf_primes(self):
        """Exceptional primes carrying INF (every other prime too when the default is INF)."""
        return [p for p, e in self._exceptions if e is INF]

    def smallest_inf_prime(self):
        """Least prime carrying INF, or None."""
        if self._default is INF:
            prime = 2
            while self.exponent(prime) is not INF:
                prime = nextprime(prime)
            return prime
        inf = self.inf_primes()
        return inf[0] if inf else None

    def has_inf_exponent(self):
        return self._default is INF or any(e is INF for _, e in self._exceptions)

    def is_finite(self):
        return self._default == 0 and not any(e is INF for _, e in self._exceptions)

    def to_integer(self):
        if not self.is_finite():
            raise NotFinite(f"{self} is not a finite Steinitz number")
        value = 1
        for p, e in self._exceptions:
            value *= p ** e
        return value

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = SteinitzNumber.from_int(other)
        if not isinstance(other, SteinitzNumber):
            return NotImplemented
        return stz_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SteinitzNumber):
            return NotImplemented
        return self._default == other._default and self._exceptions == other._exceptions

    def __hash__(self):
        return hash((self._exceptions, self._default))

    def __str__(self):
        terms = [str(p) if e == 1 else f"{p}^{e}" for p, e in self._exceptions]
        body = "*".join(terms)
        if self._default == 0:
            return body or "1"
        return f"{body} default {self._default}" if body else f"default {self._default}"

    def __repr__(self):
        return f"SteinitzNumber('{self}')"


ONE = SteinitzNumber()
UNIVERSAL = SteinitzNumber(default=INF)


def _pointwise(a, b, op):
    primes = set(a.exceptional_primes()) | set(b.exceptional_primes())
    return SteinitzNumber({p: op(a.exponent(p), b.exponent(p)) for p in primes},
                          default=op(a.default, b.default))


def stz_mul(a, b):
    """Pointwise exponent sum; INF absorbs."""
    return _pointwise(a, b, _exp_add)


def divides(a, b):
    """True iff every exponent of a is at most the matching exponent of b."""
    if not a.default <= b.default:
        return False
    primes = set(a.exceptional_primes()) | set(b.exceptional_primes())
    return all(a.exponent(p) <= b.exponent(p) for p in primes)


def quotst(b, a):
    """
    Quotient b / a of Steinitz numbers with inf - inf = 0.

    Raises:
        NotDivisible: if a does not divide b
    """
    if not divides(a, b):
        raise NotDivisible(f"{a} does not divide {b}")
    return _pointwise(b, a, _exp_sub)


def gcd(a, b):
    return _pointwise(a, b, min)


def is_finite(a):
    return a.is_finite()


def to_integer(a):
    return a.to_integer()


def q_witness(a, b):
    """
    Rational q with a = q*b, or None when a and b are not Q-equivalent.

    The witness collects the finite exponent differences; primes where both
    sides carry INF contribute nothing.
    """
    if a.default != b.default:
        return None
    witness = Fraction(1)
    for p in set(a.exceptional_primes()) | set(b.exceptional_primes()):
        ea, eb = a.exponent(p), b.exponent(p)
        if (ea is INF) != (eb is INF):
            return None
        if ea is not INF:
            witness *= Fraction(p) ** (ea - eb)
    return witness


def q_equivalent(a, b):
    return q_witness(a, b) is not None


def valuation(q, prime):
    """p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    return (factorint(abs(q.numerator)).get(prime, 0)
            - factorint(q.denominator).get(prime, 0))


def ratio_contains(q, a, b):
    """
    Decide q in a/b, i.e. whether n*a = n*q*b for some natural n with n*q natural.

    Raises:
        ValueError: if q is not a positive rational
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"Ratio queries need a positive rational, got {q}")
    if a.default != b.default:
        return False
    num, den = factorint(q.numerator), factorint(q.denominator)
    primes = set(a.exceptional_primes()) | set(b.exceptional_primes()) | set(num) | set(den)
    for p in primes:
        ea, eb = a.exponent(p), b.exponent(p)
        if ea is INF and eb is INF:
            continue
        if ea is INF or eb is INF:
            return False
        if num.get(p, 0) - den.get(p, 0) != ea - eb:
            return False
    return True


_TERM = re.compile(r"\s*(\d+)\s*(?:\^\s*(\d+|inf)\s*)?$")
_EXP = re.compile(r"\s*(\d+|inf)\s*$")


def _parse_exponent(token):
    return INF if token == "inf" else int(token)


def parse_steinitz(text):
    """
    Parse `TERM ("*" TERM)* ["default" EXP]` with `TERM := PRIME "^" EXP | PRIME`.

    The bare literal `1` is the empty product; listed exponents are absolute,
    so `2^0 default 1` is every prime once except 2.

    Raises:
        ParseError: with the column of the offending term
    """
    default = 0
    product = text
    match = re.search(r"\bdefault\b", text)
    if match:
        product = text[:match.start()]
        exp_match = _EXP.match(text[match.end():])
        if not exp_match:
            raise ParseError("expected a natural number or 'inf' after 'default'",
                             column=match.end() + 1)
        default = _parse_exponent(exp_match.group(1))

    exceptions = {}
    if product.strip() and product.strip() != "1":
        offset = 0
        for chunk in product.split("*"):
            column = offset + len(chunk) - len(chunk.lstrip()) + 1
            term = _TERM.match(chunk)
            if not term:
                raise ParseError(f"malformed Steinitz term {chunk.strip()!r}", column=column)
            base = int(term.group(1))
            if not isprime(base):
                raise ParseError(f"{base} is not prime", column=column)
            exponent = _parse_exponent(term.group(2)) if term.group(2) else 1
            exceptions[base] = _exp_add(exceptions.get(base, 0), exponent)
            offset += len(chunk) + 1
    elif not product.strip() and not match:
        raise ParseError("empty Steinitz literal")
    return SteinitzNumber(exceptions, default=default)
