import itertools
import random
from fractions import Fraction

import pytest

from dla.errors import NotDivisible, NotFinite, ParseError
from dla.steinitz import (
    INF, ONE, UNIVERSAL, SteinitzNumber, divides, gcd, parse_steinitz, q_equivalent, q_witness,
    quotst, ratio_contains, stz_mul, to_integer, valuation,
)

PRIMES = (2, 3, 5)
EXPONENTS = (0, 1, 2, 3, INF)


def random_steinitz(rng):
    default = rng.choice((0, 0, 0, 1, INF))
    exceptions = {p: rng.choice(EXPONENTS) for p in (2, 3, 5, 7) if rng.random() < 0.6}
    return SteinitzNumber(exceptions, default=default)


@pytest.fixture(scope="module")
def samples():
    rng = random.Random(20240611)
    return [random_steinitz(rng) for _ in range(500)]


def small_support(exponents=EXPONENTS):
    for exps in itertools.product(exponents, repeat=len(PRIMES)):
        yield SteinitzNumber(dict(zip(PRIMES, exps)))


def mixed_defaults():
    for default in (0, 1):
        for exps in itertools.product((0, 1, INF), repeat=len(PRIMES)):
            yield SteinitzNumber(dict(zip(PRIMES, exps)), default=default)


def test_multiplication_laws(samples):
    for a, b, c in zip(samples, samples[1:], samples[2:]):
        assert stz_mul(a, b) == stz_mul(b, a)
        assert stz_mul(stz_mul(a, b), c) == stz_mul(a, stz_mul(b, c))
        assert stz_mul(a, ONE) == a


def test_pairwise_laws_on_small_support():
    values = list(small_support())
    for a, b in itertools.product(values, repeat=2):
        product = stz_mul(a, b)
        assert product == stz_mul(b, a)
        assert gcd(a, b) == gcd(b, a)
        assert divides(a, product) and divides(b, product)
        assert divides(gcd(a, b), a) and divides(gcd(a, b), b)
        if divides(a, b) and divides(b, a):
            assert a == b
        assert divides(a, b) == (gcd(a, b) == a)


def test_triple_laws_on_small_support():
    values = list(small_support((0, 1, 2, INF)))
    for a, b, c in itertools.product(values, repeat=3):
        assert stz_mul(stz_mul(a, b), c) == stz_mul(a, stz_mul(b, c))
        if divides(c, a) and divides(c, b):
            assert divides(c, gcd(a, b))
        if divides(a, b) and divides(b, c):
            assert divides(a, c)


def test_q_equivalence_is_an_equivalence_relation():
    values = list(mixed_defaults())
    related = {(a, b): q_equivalent(a, b) for a, b in itertools.product(values, repeat=2)}
    for a in values:
        assert related[a, a]
    for (a, b), same in related.items():
        assert same == related[b, a]
    for a, b, c in itertools.product(values, repeat=3):
        if related[a, b] and related[b, c]:
            assert related[a, c]


def test_ratio_sets_compose():
    values = list(mixed_defaults())
    candidates = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(6),
                  Fraction(5, 4), Fraction(1, 9))
    contained = {
        (a, b): [q for q in candidates if ratio_contains(q, a, b)]
        for a, b in itertools.product(values, repeat=2)
    }
    checked = 0
    for a, b, c in itertools.product(values, repeat=3):
        for q in contained[a, b]:
            for r in contained[b, c]:
                assert ratio_contains(q * r, a, c)
                checked += 1
    assert checked > 0


def test_quotient_round_trip(samples):
    for a, b in zip(samples, samples[1:]):
        product = stz_mul(a, b)
        assert divides(a, product)
        assert stz_mul(a, quotst(product, a)) == product


def test_infinity_minus_infinity_is_zero():
    a = parse_steinitz("2^inf*3^2")
    b = parse_steinitz("2^inf*3")
    assert quotst(a, b) == SteinitzNumber.from_int(3)


def test_quotst_requires_divisibility():
    with pytest.raises(NotDivisible):
        quotst(SteinitzNumber.from_int(3), SteinitzNumber.from_int(9))


def test_finite_and_integer_conversion():
    assert SteinitzNumber.from_int(12).is_finite()
    assert to_integer(SteinitzNumber.from_int(360)) == 360
    assert not UNIVERSAL.is_finite()
    assert not parse_steinitz("2^inf").is_finite()
    with pytest.raises(NotFinite):
        to_integer(parse_steinitz("default 1"))


def test_universal_number_is_divisible_by_everything(samples):
    for a in samples:
        assert divides(a, UNIVERSAL)


def test_q_equivalence():
    a = parse_steinitz("2^inf*3")
    b = parse_steinitz("2^inf*3^2")
    assert q_witness(a, b) == Fraction(1, 3)
    assert q_equivalent(a, b)
    assert not q_equivalent(parse_steinitz("2^inf"), parse_steinitz("3^inf"))
    assert not q_equivalent(parse_steinitz("default 1"), parse_steinitz("2^inf"))


def test_ratio_contains_uses_slack_at_infinite_primes():
    s = parse_steinitz("2^inf*3")
    t = parse_steinitz("2^inf")
    assert ratio_contains(3, s, t)
    assert ratio_contains(Fraction(3, 8), s, t)
    assert not ratio_contains(1, s, t)
    assert not ratio_contains(5, s, t)
    with pytest.raises(ValueError):
        ratio_contains(0, s, t)


def test_valuation():
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(Fraction(12, 5), 5) == -1
    assert valuation(7, 3) == 0


@pytest.mark.parametrize("text", ["2^inf*3^2 default 0", "1", "default inf", "2^0 default 1",
                                  "5*7^3", "2^inf*3^inf default 1"])
def test_literals_parse_to_their_printed_form(text):
    value = parse_steinitz(text)
    assert parse_steinitz(str(value)) == value


def test_literal_semantics():
    assert parse_steinitz("1") == ONE
    assert parse_steinitz("default inf") == UNIVERSAL
    value = parse_steinitz("2^0 default 1")
    assert value.exponent(2) == 0 and value.exponent(11) == 1
    assert parse_steinitz("2*2") == SteinitzNumber.from_int(4)
    assert str(parse_steinitz("2^inf*3^2 default 0")) == "2^inf*3^2"


def test_non_prime_base_is_rejected_with_column():
    with pytest.raises(ParseError) as excinfo:
        parse_steinitz("2^inf*4^2")
    assert excinfo.value.column == 7


@pytest.mark.parametrize("text", ["", "2^", "2^x", "default", "two"])
def test_malformed_literals(text):
    with pytest.raises(ParseError):
        parse_steinitz(text)


def test_constructor_validation():
    with pytest.raises(ValueError):
        SteinitzNumber({4: 1})
    with pytest.raises(ValueError):
        SteinitzNumber({2: -1})
    with pytest.raises(ValueError):
        SteinitzNumber.from_int(0)


def test_integer_multiplication():
    assert parse_steinitz("2^inf") * 6 == parse_steinitz("2^inf*3")
    assert 3 * SteinitzNumber.from_int(3) == SteinitzNumber.from_int(9)


@pytest.mark.parametrize("text, prime", [
    ("2^inf*5^inf", 2),
    ("3^inf", 3),
    ("2 default inf", 3),
    ("2*3^2*5 default inf", 7),
    ("default inf", 2),
    ("2*3", None),
    ("2^inf default 1", 2),
])
def test_smallest_inf_prime(text, prime):
    assert parse_steinitz(text).smallest_inf_prime() == prime
