import itertools
from fractions import Fraction

import pytest

from conftest import CONSISTENCY_NAMES, periodic
from dla.classify import (
    Answer, CondStatus, choose_epsilon, embed_context, embeds, equivalent, is_universal,
    isomorphic, universality,
)
from dla.exhaustions import (
    AlgebraProfile, AlgType, DensityClass, SymmetryClass, profile_of,
)
from dla.steinitz import UNIVERSAL, parse_steinitz


def test_worked_isomorphisms(profiles):
    assert isomorphic(profiles["sl2"], profiles["sl4"]).answer is Answer.YES

    verdict = isomorphic(profiles["sl2"], profiles["sl3"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("stz-s-equivalent") is CondStatus.FAIL

    verdict = isomorphic(profiles["sl2"], profiles["sl6"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("stz-s-equivalent") is CondStatus.PASS
    assert verdict.status_of("density-ratio") is CondStatus.FAIL

    verdict = isomorphic(profiles["so2"], profiles["sp2"])
    assert verdict.answer is Answer.YES
    assert verdict.status_of("cross-type-two-power") is CondStatus.PASS


def test_cross_type_with_type_a_needs_symmetric_side(profiles):
    assert isomorphic(profiles["sym2"], profiles["so2"]).answer is Answer.YES
    verdict = isomorphic(profiles["sl2"], profiles["sp2"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("cross-type-symmetric") is CondStatus.FAIL


def test_finitary_isomorphisms(profiles):
    other = profile_of(periodic(AlgType.A, 3, (1, 0, 1)))
    assert isomorphic(profiles["slfin"], other).answer is Answer.YES
    verdict = isomorphic(profiles["slfin"], profiles["sl2"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("finitary") is CondStatus.FAIL


def test_density_types_must_match(profiles):
    verdict = isomorphic(profiles["dense2"], profiles["sl2"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("density-type") is CondStatus.FAIL


def test_enclosed_ratio_on_a_lattice_point_stays_unknown(profiles):
    # both densities are 2/3 but only enclosures are available
    other = profile_of(periodic(AlgType.A, 4, (2, 0, 2)))
    verdict = isomorphic(profiles["dense2"], other, rounds=3)
    assert verdict.answer is Answer.UNKNOWN
    assert verdict.status_of("density-ratio") is CondStatus.UNKNOWN
    assert verdict.precision_used < Fraction(1, 2 ** 40)


def test_worked_embeddings(profiles):
    for name in CONSISTENCY_NAMES:
        assert embeds(profiles["slfin"], profiles[name]).answer is Answer.YES
    verdict = embeds(profiles["sl2"], profiles["slfin"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("finitary-target") is CondStatus.FAIL

    verdict = embeds(profiles["sparse2"], profiles["sl2"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("sparse-preserved") is CondStatus.FAIL
    assert embeds(profiles["sl2"], profiles["sparse2"]).answer is Answer.YES

    verdict = embeds(profiles["slprimes"], profiles["spprimes"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("index-bound") is CondStatus.FAIL
    assert embeds(profiles["spprimes"], profiles["slprimes"]).answer is Answer.YES


def test_epsilon_cases(profiles):
    cases = {
        ("spprimes", "slprimes"): (1, "eps-type-pair"),
        ("slprimes", "spprimes"): (2, "eps-default"),
        ("sl2", "sl4"): (1, "eps-one-sided"),
        ("sym2", "sl2"): (2, "eps-default"),
    }
    for (a, b), expected in cases.items():
        ctx = embed_context(profiles[a], profiles[b])
        epsilon, case_id, _ = choose_epsilon(profiles[a], profiles[b], ctx)
        assert (epsilon, case_id) == expected


def test_quotient_must_be_finite(profiles):
    verdict = embeds(profiles["sl3"], profiles["sl2"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("quotient-finite") is CondStatus.FAIL
    assert embeds(profiles["sl6"], profiles["sl2"]).answer is Answer.YES


def _strong(S, C, sigma, density=DensityClass.SPARSE, delta=Fraction(0)):
    return AlgebraProfile(alg_type=AlgType.A, S=parse_steinitz(S), density=density, delta=delta,
                          symmetry=SymmetryClass.STRONGLY_NON_SYMMETRIC, sigma=sigma,
                          finitary=False, C=parse_steinitz(C))


def test_strongly_non_symmetric_isomorphism():
    p1 = _strong("2^inf*3^inf", "2^inf", Fraction(1, 2))
    p2 = _strong("2^inf*3^inf", "2^inf", Fraction(1, 8))
    verdict = isomorphic(p1, p2)
    assert verdict.answer is Answer.YES
    assert verdict.status_of("symmetry-ratio") is CondStatus.PASS

    p3 = _strong("2^inf*3^inf", "2^inf", Fraction(1, 5))
    verdict = isomorphic(p1, p3)
    assert verdict.answer is Answer.NO
    assert verdict.status_of("symmetry-ratio") is CondStatus.FAIL


def test_pure_strongly_non_symmetric_uses_density_ratio():
    p1 = _strong("2^inf", "2^inf", Fraction(1, 2), DensityClass.PURE, Fraction(1))
    p2 = _strong("2^inf", "2^inf", Fraction(1, 4), DensityClass.PURE, Fraction(1, 2))
    verdict = isomorphic(p1, p2)
    assert verdict.answer is Answer.YES
    assert verdict.status_of("symmetry-ratio") is CondStatus.PASS


def test_universality(profiles):
    universal = AlgebraProfile(alg_type=AlgType.A, S=UNIVERSAL, density=DensityClass.SPARSE,
                               delta=Fraction(0), symmetry=SymmetryClass.ONE_SIDED,
                               sigma=Fraction(1), finitary=False, C=UNIVERSAL)
    assert is_universal(universal)
    assert universality(universal).answer is Answer.YES
    verdict = universality(profiles["sparse2"])
    assert verdict.answer is Answer.NO
    assert verdict.status_of("universal-steinitz") is CondStatus.FAIL
    for name in CONSISTENCY_NAMES:
        assert embeds(profiles[name], universal).answer is Answer.YES


def test_verdict_serialization(profiles):
    text = isomorphic(profiles["sl2"], profiles["sl3"]).serialize()
    lines = text.splitlines()
    assert lines[0] == "RESULT: NO"
    assert all(line.startswith("COND ") for line in lines[1:])
    assert "COND stz-s-equivalent FAIL" in text


def test_isomorphic_implies_equivalent(profiles, corpus_pairs):
    assert len(corpus_pairs) >= 30
    for a, b in corpus_pairs:
        if isomorphic(profiles[a], profiles[b]).answer is Answer.YES:
            assert equivalent(profiles[a], profiles[b]).answer is Answer.YES, (a, b)


def test_equivalent_matches_mutual_embedding(profiles, corpus_pairs):
    for a, b in corpus_pairs:
        forward = embeds(profiles[a], profiles[b]).answer
        backward = embeds(profiles[b], profiles[a]).answer
        both = equivalent(profiles[a], profiles[b]).answer
        if Answer.UNKNOWN in (forward, backward, both):
            continue
        assert (both is Answer.YES) == (forward is Answer.YES and backward is Answer.YES), (a, b)


def test_embedding_is_transitive(profiles):
    answers = {(a, b): embeds(profiles[a], profiles[b]).answer
               for a, b in itertools.product(CONSISTENCY_NAMES, repeat=2)}
    for a, b, c in itertools.product(CONSISTENCY_NAMES, repeat=3):
        if answers[(a, b)] is Answer.YES and answers[(b, c)] is Answer.YES:
            assert answers[(a, c)] is not Answer.NO, (a, b, c)


@pytest.mark.parametrize("decide", [isomorphic, embeds, equivalent])
def test_refinement_never_flips_a_decision(corpus, corpus_pairs, decide):
    coarse = {name: profile_of(d, Fraction(1, 2 ** 10)) for name, d in corpus.items()}
    fine = {name: profile_of(d) for name, d in corpus.items()}
    for a, b in corpus_pairs:
        answers = {decide(coarse[a], coarse[b], Fraction(1, 2 ** 10)).answer,
                   decide(fine[a], fine[b]).answer}
        assert answers != {Answer.YES, Answer.NO}, (a, b)
