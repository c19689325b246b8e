"""
Branching Module
Small-rank representation theory of gl(n) and sl(n): Weyl dimensions,
Gelfand-Tsetlin and Littlewood-Richardson branching, a brute-force character
oracle, and Dynkin indices.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict

from sympy.utilities.iterables import partitions

from dla.errors import DimensionMismatch, InvalidWeight, OracleTooLarge

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_MAX_RANK = 6
DEFAULT_ORACLE_MAX_DIM = 5000


@dataclass(frozen=True, order=True)
class HighestWeight:
    """Dominant weight (l_1 >= ... >= l_n >= 0) of gl(n); rank n."""
    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        for value in entries:
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise InvalidWeight(f"weight entries must be natural numbers, got {entries}")
        if any(a < b for a, b in zip(entries, entries[1:])):
            raise InvalidWeight(f"weight {list(entries)} is not weakly decreasing")

    @property
    def rank(self):
        return len(self.entries)

    @property
    def size(self):
        return sum(self.entries)

    def partition(self):
        """Entries without trailing zeros."""
        entries = list(self.entries)
        while entries and entries[-1] == 0:
            entries.pop()
        return tuple(entries)

    def sl_class(self):
        """Representative with last entry 0; equal classes give isomorphic sl(n)-modules."""
        if not self.entries:
            return self
        last = self.entries[-1]
        return HighestWeight(tuple(e - last for e in self.entries))

    @classmethod
    def padded(cls, partition, rank):
        if len(partition) > rank:
            raise InvalidWeight(f"{list(partition)} has more than {rank} parts")
        return cls(tuple(partition) + (0,) * (rank - len(partition)))

    def __str__(self):
        return "[" + ",".join(str(e) for e in self.entries) + "]"


@dataclass(frozen=True)
class BranchingResult:
    multiplicities: Dict[HighestWeight, int] = field(hash=False)
    ambient_rank: int
    target_rank: int

    def dimension(self):
        return sum(m * weyl_dim(w) for w, m in self.multiplicities.items())

    def weights(self):
        return sorted(self.multiplicities, reverse=True)

    def lines(self):
        return [f"{w} x{self.multiplicities[w]}" for w in self.weights()]

    def __str__(self):
        return "\n".join(self.lines())


def weyl_dim(w):
    """prod_{i<j} (l_i - l_j + j - i) / (j - i)"""
    value = Fraction(1)
    entries = w.entries
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            value *= Fraction(entries[i] - entries[j] + j - i, j - i)
    return int(value)


def gt_branch(w):
    """Gelfand-Tsetlin rule gl(n+1) -> gl(n): every interlacing weight once."""
    if w.rank < 1:
        raise InvalidWeight("gt_branch needs a weight of rank at least 1")
    lam = w.entries
    ranges = [range(lam[i + 1], lam[i] + 1) for i in range(len(lam) - 1)]
    result = {HighestWeight(mu): 1 for mu in product(*ranges)}
    return BranchingResult(result, w.rank, w.rank - 1)


@lru_cache(maxsize=None)
def _character(entries):
    if not entries:
        return ((), 1),
    result = Counter()
    total = sum(entries)
    ranges = [range(entries[i + 1], entries[i] + 1) for i in range(len(entries) - 1)]
    for mu in product(*ranges):
        last = total - sum(mu)
        for weight, mult in _character(mu):
            result[weight + (last,)] += mult
    return tuple(sorted(result.items()))


def character(w):
    """Weight multiset of F^w as a Counter of weight tuples (via Gelfand-Tsetlin patterns)."""
    return Counter(dict(_character(w.entries)))


def decompose_by_characters(module_weights, target_rank, weight_map=None,
                            max_rank=DEFAULT_ORACLE_MAX_RANK, max_dim=DEFAULT_ORACLE_MAX_DIM):
    """
    Decompose a weight multiset by pushing it forward along weight_map and
    repeatedly stripping the character of the lexicographically largest weight.

    Weights that are not polynomial are shifted by a common determinant power
    first, so the returned weights are those of the shifted module.

    Raises:
        OracleTooLarge: above max_rank or max_dim
    """
    dimension = sum(module_weights.values())
    if target_rank > max_rank or dimension > max_dim:
        raise OracleTooLarge(f"rank {target_rank}, dimension {dimension} exceeds the oracle limits "
                             f"({max_rank}, {max_dim})")
    pushed = Counter()
    for weight, mult in module_weights.items():
        image = tuple(weight_map(weight)) if weight_map else tuple(weight)
        if len(image) != target_rank:
            raise DimensionMismatch(f"weight {image} does not have rank {target_rank}")
        pushed[image] += mult
    shift = max([0] + [-min(weight) for weight in pushed if weight])
    if shift:
        pushed = Counter({tuple(e + shift for e in weight): m for weight, m in pushed.items()})

    result = {}
    while pushed:
        top = max(pushed)
        mult = pushed[top]
        highest = HighestWeight(top)
        for weight, count in character(highest).items():
            remaining = pushed[weight] - mult * count
            if remaining < 0:
                raise ArithmeticError(f"weight multiset is not a character at {weight}")
            if remaining:
                pushed[weight] = remaining
            else:
                del pushed[weight]
        result[highest] = mult
    return BranchingResult(result, None, target_rank)


def _partitions(size, max_parts, max_part=None):
    """Partitions of size as decreasing tuples, at most max_parts parts."""
    if size == 0:
        yield ()
        return
    if max_parts < 1:
        return
    for p in partitions(size, m=max_parts, k=max_part):
        parts = tuple(sorted((part for part, mult in p.items() for _ in range(mult)), reverse=True))
        if sum(parts) == size:
            yield parts


def _contained(mu, lam):
    return len(mu) <= len(lam) and all(m <= l for m, l in zip(mu, lam))


@lru_cache(maxsize=None)
def _lr(lam, mu, nu):
    """Count Littlewood-Richardson tableaux of shape lam/mu and content nu."""
    if sum(lam) != sum(mu) + sum(nu) or not _contained(mu, lam) or not _contained(nu, lam):
        return 0
    cells = []
    for row, length in enumerate(lam):
        start = mu[row] if row < len(mu) else 0
        cells.extend((row, col) for col in range(length - 1, start - 1, -1))
    filling = {}
    counts = [0] * (len(nu) + 1)

    def place(index):
        if index == len(cells):
            return 1
        row, col = cells[index]
        high = len(nu)
        if (row, col + 1) in filling:
            high = min(high, filling[(row, col + 1)])
        low = filling[(row - 1, col)] + 1 if (row - 1, col) in filling else 1
        total = 0
        for value in range(low, high + 1):
            if counts[value] >= nu[value - 1]:
                continue
            # reading word must stay a lattice word
            if value > 1 and counts[value] + 1 > counts[value - 1]:
                continue
            counts[value] += 1
            filling[(row, col)] = value
            total += place(index + 1)
            counts[value] -= 1
            del filling[(row, col)]
        return total

    return place(0)


def lr_coefficient(mu, nu, lam):
    """Multiplicity of F^lam in F^mu (x) F^nu."""
    return _lr(lam.partition(), mu.partition(), nu.partition())


def _product_distribution(parts, bound):
    """F^{mu_1} (x) ... (x) F^{mu_k} as partition -> multiplicity, restricted to shapes inside bound."""
    current = {(): 1}
    for mu in parts:
        following = Counter()
        for kappa, mult in current.items():
            size = sum(kappa) + sum(mu)
            for nu in _partitions(size, len(bound), bound[0] if bound else 0):
                if not _contained(nu, bound):
                    continue
                coefficient = _lr(nu, kappa, mu)
                if coefficient:
                    following[nu] += mult * coefficient
        current = following
    return current


def generalized_lr(mus, lam):
    """Multiplicity of F^lam in the tensor product of the F^mu; 1 iff lam = mu for one factor."""
    target = lam.partition()
    parts = [mu.partition() for mu in mus]
    if sum(map(sum, parts)) != sum(target):
        return 0
    return _product_distribution(parts, target).get(target, 0)


def restrict_diagonal(lam, k, n):
    """
    Restrict F^lam of gl(kn) along V -> V + ... + V (k copies) to gl(n).

    Raises:
        DimensionMismatch: when rank(lam) != k*n
    """
    if lam.rank != k * n:
        raise DimensionMismatch(f"weight of rank {lam.rank} cannot restrict along {k} copies of rank {n}")
    target = lam.partition()
    size = sum(target)
    pieces = [[mu for mu in _partitions(part, n) if _contained(mu, target)]
              for part in range(size + 1)]
    totals = Counter()
    for sizes in _compositions(size, k):
        for mus in product(*[pieces[s] for s in sizes]):
            outer = generalized_lr([HighestWeight(mu) for mu in mus], lam)
            if not outer:
                continue
            for nu, inner in _product_distribution(mus, _box(n, size)).items():
                totals[nu] += outer * inner
    result = {HighestWeight.padded(nu, n): m for nu, m in totals.items() if m}
    return BranchingResult(result, lam.rank, n)


def _box(rows, width):
    return (width,) * rows if width else ()


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def restrict_signature(lam, sig, n, max_rank=DEFAULT_ORACLE_MAX_RANK, max_dim=DEFAULT_ORACLE_MAX_DIM):
    """
    Restrict F^lam along the diagonal map of signature (l, r, z) into rank n
    through the character oracle. With r > 0 the components are reported as
    sl(n) classes (last entry 0).
    """
    if lam.rank != sig.target_dim(n):
        raise DimensionMismatch(f"signature {sig} maps rank {n} to {sig.target_dim(n)}, not {lam.rank}")

    def weight_map(weight):
        image = [0] * n
        for block in range(sig.l + sig.r):
            sign = 1 if block < sig.l else -1
            for j in range(n):
                image[j] += sign * weight[block * n + j]
        return image

    result = decompose_by_characters(character(lam), n, weight_map, max_rank, max_dim)
    if sig.r == 0:
        return BranchingResult(result.multiplicities, lam.rank, n)
    merged = Counter()
    for w, m in result.multiplicities.items():
        merged[w.sl_class()] += m
    return BranchingResult(dict(merged), lam.rank, n)


def lr_leading_weight(lam, k, n):
    """(l_1 + ... + l_k, l_{k+1} + ... + l_{2k}, ...): always a constituent of restrict_diagonal."""
    if lam.rank != k * n:
        raise DimensionMismatch(f"weight of rank {lam.rank} does not split into {n} blocks of {k}")
    e = lam.entries
    return HighestWeight(tuple(sum(e[j * k:(j + 1) * k]) for j in range(n)))


def dynkin_index_module(w):
    """(dim U / dim sl(n)) * <l, l + 2 rho> for the sl(n) projection of w."""
    n = w.rank
    if n < 2:
        raise InvalidWeight("Dynkin indices need rank at least 2")
    mean = Fraction(w.size, n)
    projected = [e - mean for e in w.entries]
    two_rho = [n - 1 - 2 * i for i in range(n)]
    form = sum(x * (x + r) for x, r in zip(projected, two_rho))
    return Fraction(weyl_dim(w), n * n - 1) * form


def index_of_signature(sig):
    return sig.l + sig.r


def module_index(b):
    """Index of a direct sum: multiplicity-weighted sum over components."""
    return sum((m * dynkin_index_module(w) for w, m in b.multiplicities.items()), Fraction(0))


def d_of(b):
    """max(l_1 - l_n) over the highest weights of a decomposition."""
    if not b.multiplicities:
        raise ValueError("d is undefined for an empty decomposition")
    return max((w.entries[0] - w.entries[-1]) if w.entries else 0 for w in b.multiplicities)


def d_chain(lam, steps, max_rank=DEFAULT_ORACLE_MAX_RANK, max_dim=DEFAULT_ORACLE_MAX_DIM):
    """
    d along a chain of restrictions. steps lists (signature, n) from the rank of
    lam downwards; the result is ordered from the smallest rank up and ends with
    d of lam itself.
    """
    current = BranchingResult({lam: 1}, lam.rank, lam.rank)
    values = [d_of(current)]
    for sig, n in steps:
        if n < 2:
            raise ValueError("d chains need ranks of at least 2")
        merged = Counter()
        for w, m in current.multiplicities.items():
            for v, count in restrict_signature(w, sig, n, max_rank, max_dim).multiplicities.items():
                merged[v] += m * count
        current = BranchingResult(dict(merged), current.target_rank, n)
        values.append(d_of(current))
        logger.debug("d at rank %d: %d", n, values[-1])
    return list(reversed(values))
