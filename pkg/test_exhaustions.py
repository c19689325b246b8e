import random
from fractions import Fraction

import pytest

from conftest import CORPUS
from dla.errors import DimensionMismatch, InconsistentProfile, InvalidDescriptor
from dla.exhaustions import (
    AlgebraProfile, AlgType, DensityClass, ExhaustionDescriptor, Periodic, PrimeSeq, Proportional,
    RationalInterval, SignatureTriple, SymmetryClass, certify, classify_density,
    classify_symmetry, compose_signature, derive_level, levels, profile_of,
    refine_profile, stz_C, stz_S,
)
from dla.steinitz import UNIVERSAL, SteinitzNumber, parse_steinitz


def random_triple(rng, alg_type):
    l = rng.randint(1, 3)
    r = rng.randint(0, l) if alg_type is AlgType.A else 0
    z = rng.choice((0, 2)) if alg_type is AlgType.C else rng.randint(0, 3)
    if l + r < 2 and z == 0:
        z = 2
    return SignatureTriple(l, r, z)


def random_descriptor(rng):
    alg_type = rng.choice(list(AlgType))
    n0 = rng.choice((2, 4, 6)) if alg_type is AlgType.C else rng.randint(2, 6)
    prefix = tuple(random_triple(rng, alg_type) for _ in range(rng.randint(0, 2)))
    kind = rng.choice(("periodic", "proportional", "primes"))
    if kind == "periodic":
        tail = Periodic(tuple(random_triple(rng, alg_type) for _ in range(rng.randint(1, 3))))
    elif kind == "proportional":
        l = rng.randint(1, 3)
        r = rng.randint(0, l) if alg_type is AlgType.A else 0
        tail = Proportional(l, r, rng.randint(0 if l + r > 1 else 1, 2))
    else:
        tail = PrimeSeq(rng.randint(1, 4))
    return ExhaustionDescriptor(alg_type, n0, tail, prefix)


def test_finitary_detection():
    assert profile_of(CORPUS["slfin"]).finitary
    assert not profile_of(CORPUS["sl2"]).finitary
    assert stz_S(CORPUS["slfin"]) == SteinitzNumber.from_int(2)


def test_levels_of_proportional_tail():
    rows = levels(CORPUS["sparse2"], 4)
    assert [lv.n for lv in rows] == [2, 6, 18, 54]
    assert [lv.s for lv in rows] == [2, 2, 2, 2]
    assert rows[2].delta == Fraction(8, 18)
    assert derive_level(CORPUS["sparse2"], 3) == rows[3]


def test_levels_follow_prefix_then_tail():
    d = ExhaustionDescriptor(AlgType.A, 2, Periodic((SignatureTriple(3, 0, 2),)),
                             (SignatureTriple(2, 1, 3),))
    rows = levels(d, 3)
    assert [lv.n for lv in rows] == [2, 9, 29]
    assert rows[0].c == 1 and rows[1].c == 3
    assert rows[1].sigma == Fraction(1, 3)


def test_prime_tail():
    rows = levels(CORPUS["slprimes"], 4)
    assert [lv.s for lv in rows] == [3, 5, 7, 11]
    assert stz_S(CORPUS["slprimes"]) == parse_steinitz("default 1")
    assert stz_S(ExhaustionDescriptor(AlgType.A, 2, PrimeSeq(1))) == \
        parse_steinitz("2^2 default 1")


def test_steinitz_numbers_of_descriptors():
    assert stz_S(CORPUS["sl6"]) == parse_steinitz("2^inf*3")
    assert stz_S(CORPUS["sparse3"]) == parse_steinitz("3^inf")
    assert stz_C(CORPUS["weak3"]) == SteinitzNumber.from_int(3)
    assert stz_C(CORPUS["sym2"]) is None
    with pytest.raises(InvalidDescriptor):
        stz_C(CORPUS["sp2"])


def test_stz_C_restarts_after_a_symmetric_prefix_level():
    d = ExhaustionDescriptor(AlgType.A, 2, Periodic((SignatureTriple(3, 0, 0),)),
                             (SignatureTriple(1, 1, 0), SignatureTriple(3, 0, 0)))
    assert derive_level(d, 1).n == 4
    assert stz_C(d) == parse_steinitz("2^2*3^inf")


@pytest.mark.parametrize("alg_type, n0, tail, prefix", [
    (AlgType.C, 3, Periodic((SignatureTriple(2, 0, 0),)), ()),
    (AlgType.A, 1, Periodic((SignatureTriple(2, 0, 0),)), ()),
    (AlgType.A, 2, Periodic((SignatureTriple(1, 0, 0),)), ()),
    (AlgType.O, 2, Periodic((SignatureTriple(2, 1, 0),)), ()),
    (AlgType.C, 2, Periodic((SignatureTriple(2, 0, 1),)), ()),
    (AlgType.A, 2, Proportional(1, 0, 0), ()),
    (AlgType.O, 2, Proportional(1, 1, 1), ()),
])
def test_invalid_descriptors(alg_type, n0, tail, prefix):
    with pytest.raises(InvalidDescriptor):
        ExhaustionDescriptor(alg_type, n0, tail, prefix)


def test_signature_validation():
    with pytest.raises(InvalidDescriptor):
        SignatureTriple(1, 2, 0)
    with pytest.raises(InvalidDescriptor):
        SignatureTriple(0, 0, 3)
    with pytest.raises(InvalidDescriptor):
        PrimeSeq(0)


def test_density_classes():
    assert classify_density(CORPUS["sl2"]) == (DensityClass.PURE, Fraction(1))
    assert classify_density(CORPUS["sparse2"]) == (DensityClass.SPARSE, Fraction(0))
    assert classify_density(CORPUS["slfin"]) == (DensityClass.SPARSE, Fraction(0))
    density, delta = classify_density(CORPUS["dense2"])
    assert density is DensityClass.DENSE
    assert isinstance(delta, RationalInterval)
    assert delta.contains(Fraction(2, 3))
    assert delta.width <= Fraction(1, 2 ** 40)


def test_pure_density_starts_after_prefix():
    d = ExhaustionDescriptor(AlgType.A, 2, Periodic((SignatureTriple(2, 0, 0),)),
                             (SignatureTriple(1, 0, 1),))
    assert classify_density(d) == (DensityClass.PURE, Fraction(2, 3))


def test_refine_profile_tightens_dense_enclosures():
    coarse = profile_of(CORPUS["dense2"], Fraction(1, 2 ** 8))
    fine = refine_profile(coarse, Fraction(1, 2 ** 30))
    assert fine.delta.width < coarse.delta.width
    assert fine.delta.contains(Fraction(2, 3))
    exact = profile_of(CORPUS["sl2"])
    assert refine_profile(exact, Fraction(1, 2 ** 30)) is exact


def test_symmetry_classes():
    assert classify_symmetry(CORPUS["sl2"]) == (SymmetryClass.ONE_SIDED, Fraction(1))
    assert classify_symmetry(CORPUS["sym2"]) == (SymmetryClass.TWO_SIDED_SYMMETRIC, Fraction(0))
    assert classify_symmetry(CORPUS["weak3"]) == (SymmetryClass.WEAKLY_NON_SYMMETRIC, Fraction(0))
    assert classify_symmetry(CORPUS["so2"]) == (SymmetryClass.ONE_SIDED, Fraction(1))


def test_profile_normal_forms():
    assert profile_of(CORPUS["sl2"]).C == parse_steinitz("2^inf")
    assert profile_of(CORPUS["sp2"]).C is None
    assert profile_of(CORPUS["sym2"]).C is None


def _profile(**overrides):
    fields = dict(alg_type=AlgType.A, S=UNIVERSAL, density=DensityClass.SPARSE,
                  delta=Fraction(0), symmetry=SymmetryClass.ONE_SIDED, sigma=Fraction(1),
                  finitary=False)
    fields.update(overrides)
    return AlgebraProfile(**fields)


@pytest.mark.parametrize("overrides, invariant", [
    (dict(delta=Fraction(1, 2)), "density-delta"),
    (dict(density=DensityClass.PURE, delta=RationalInterval(Fraction(1, 3), Fraction(1, 2))),
     "pure-exact"),
    (dict(density=DensityClass.PURE, delta=Fraction(3, 2)), "delta-range"),
    (dict(finitary=True), "finitary"),
    (dict(S=SteinitzNumber.from_int(4), finitary=True, density=DensityClass.PURE,
          delta=Fraction(1)), "finitary-sparse"),
    (dict(alg_type=AlgType.C, symmetry=SymmetryClass.WEAKLY_NON_SYMMETRIC, sigma=Fraction(0)),
     "type-symmetry"),
    (dict(sigma=Fraction(1, 2)), "sigma-class"),
    (dict(symmetry=SymmetryClass.STRONGLY_NON_SYMMETRIC, sigma=Fraction(1), C=UNIVERSAL),
     "sigma-class"),
    (dict(S=parse_steinitz("3^inf"), symmetry=SymmetryClass.TWO_SIDED_SYMMETRIC,
          sigma=Fraction(0)), "symmetric-two-power"),
    (dict(symmetry=SymmetryClass.WEAKLY_NON_SYMMETRIC, sigma=Fraction(0)), "c-required"),
])
def test_certify_names_the_violated_invariant(overrides, invariant):
    with pytest.raises(InconsistentProfile) as excinfo:
        certify(_profile(**overrides))
    assert excinfo.value.invariant == invariant


def test_certify_fills_one_sided_c():
    assert certify(_profile()).C == UNIVERSAL


def test_compose_signature():
    two = SignatureTriple(2, 0, 0)
    assert compose_signature(two, two, 2) == SignatureTriple(4, 0, 0)
    mixed = SignatureTriple(2, 1, 0)
    assert compose_signature(mixed, mixed, 3, 9, 27) == SignatureTriple(5, 4, 0)
    padded = compose_signature(SignatureTriple(1, 0, 1), SignatureTriple(2, 0, 1), 2)
    assert padded == SignatureTriple(2, 0, 3)
    with pytest.raises(DimensionMismatch):
        compose_signature(two, two, 2, n2=5)


def test_density_and_symmetry_never_increase():
    rng = random.Random(4242)
    for _ in range(50):
        d = random_descriptor(rng)
        previous = None
        for data in levels(d, 20):
            assert 0 < data.delta <= 1
            assert 0 <= data.sigma <= 1
            if previous is not None:
                assert data.n > previous.n
                assert data.delta <= previous.delta
                assert data.sigma <= previous.sigma
            previous = data
