import itertools

import pytest

from dla.exhaustions import (
    AlgType, ExhaustionDescriptor, Periodic, PrimeSeq, Proportional, SignatureTriple, profile_of,
)


def periodic(alg_type, n0, *triples, prefix=()):
    return ExhaustionDescriptor(alg_type, n0, Periodic(tuple(SignatureTriple(*t) for t in triples)),
                                tuple(SignatureTriple(*t) for t in prefix))


CORPUS = {
    "sl2": periodic(AlgType.A, 2, (2, 0, 0)),
    "sl4": periodic(AlgType.A, 4, (4, 0, 0)),
    "sl3": periodic(AlgType.A, 3, (3, 0, 0)),
    "sl6": periodic(AlgType.A, 6, (2, 0, 0)),
    "slfin": periodic(AlgType.A, 2, (1, 0, 1)),
    "sparse2": ExhaustionDescriptor(AlgType.A, 2, Proportional(2, 0, 1)),
    "sparse3": ExhaustionDescriptor(AlgType.A, 3, Proportional(3, 0, 1)),
    "dense2": periodic(AlgType.A, 2, (2, 0, 1)),
    "slprimes": ExhaustionDescriptor(AlgType.A, 2, PrimeSeq(2)),
    "spprimes": ExhaustionDescriptor(AlgType.C, 2, PrimeSeq(2)),
    "so2": periodic(AlgType.O, 2, (2, 0, 0)),
    "sp2": periodic(AlgType.C, 2, (2, 0, 0)),
    "sym2": periodic(AlgType.A, 2, (1, 1, 0)),
    "weak3": periodic(AlgType.A, 3, (2, 1, 0)),
}

# pairs whose embedding decision is Yes and whose diagram the constructor builds
BUILDABLE = [
    ("sl2", "sparse2"),
    ("sl2", "sl4"),
    ("sl4", "sl2"),
    ("sl6", "sl2"),
    ("sl2", "sl6"),
    ("sl2", "dense2"),
    ("dense2", "sl2"),
    ("spprimes", "slprimes"),
    ("so2", "sp2"),
    ("sp2", "so2"),
    ("sl2", "sp2"),
    ("sp2", "sl2"),
    ("sym2", "sl2"),
    ("sl2", "sym2"),
]

CONSISTENCY_NAMES = ["sl2", "sl4", "sl3", "sl6", "slfin", "sparse2", "dense2",
                     "slprimes", "spprimes", "so2", "sp2", "sym2", "weak3"]


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


@pytest.fixture(scope="session")
def profiles():
    return {name: profile_of(d) for name, d in CORPUS.items()}


@pytest.fixture(scope="session")
def corpus_pairs():
    """Ordered pairs of distinct corpus algebras (well over thirty)."""
    return list(itertools.permutations(CONSISTENCY_NAMES, 2))
