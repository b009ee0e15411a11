"""Mutual-information machinery for the quantized-adder testing channel.

Computes output distributions of the noiseless channel by convolution,
the per-split mutual informations and their minimum-rate objective, grid
search over input distributions and quantizers, and the achievability and
converse test-count bounds. All entropies are in bits; 0*log(0) is 0.
"""

from dataclasses import dataclass
from itertools import combinations, product
from math import comb, inf, log2

import numpy as np

from .errors import BadDistribution, BadEta, BadPartition, BadRange, BudgetExceeded

__all__ = [
    "Quantizer",
    "check_distribution",
    "sum_pmf",
    "output_pmf",
    "mutual_information",
    "mutual_information_bruteforce",
    "rate_objective",
    "capacity_search",
    "sufficient_tests",
    "necessary_tests",
    "td_rate_denominator",
]


@dataclass(frozen=True)
class Quantizer:
    """Partition of the sum range 0..top into contiguous nonempty regions.

    edges holds the Q+1 region boundaries: region r covers
    edges[r] .. edges[r+1]-1, with edges[0] == 0 and edges[-1] == top+1.
    """

    edges: tuple[int, ...]

    def __post_init__(self):
        if len(self.edges) < 2 or self.edges[0] != 0:
            raise BadPartition(f"edges must start at 0, got {self.edges}")
        if any(a >= b for a, b in zip(self.edges, self.edges[1:])):
            raise BadPartition(f"edges must strictly increase, got {self.edges}")

    @property
    def Q(self) -> int:
        return len(self.edges) - 1

    @property
    def top(self) -> int:
        return self.edges[-1] - 1

    @classmethod
    def identity(cls, top: int) -> "Quantizer":
        return cls(tuple(range(top + 2)))

    def regions(self) -> list[range]:
        return [range(a, b) for a, b in zip(self.edges, self.edges[1:])]

    def __str__(self) -> str:
        return "".join("{" + ",".join(map(str, r)) + "}" for r in self.regions())


def check_distribution(pt) -> np.ndarray:
    """Coerce to a 1-D probability vector; tolerance 1e-12 on the total."""
    arr = np.asarray(pt, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise BadDistribution(f"expected a 1-D distribution, got shape {arr.shape}")
    if arr.min() < 0 or abs(arr.sum() - 1.0) > 1e-12:
        raise BadDistribution(f"probabilities must be nonnegative and sum to 1")
    return arr


def _convolve_power(pt: np.ndarray, k: int) -> np.ndarray:
    out = np.array([1.0])
    for _ in range(k):
        out = np.convolve(out, pt)
    return out


def sum_pmf(pt, d: int) -> np.ndarray:
    """Distribution of the sum of d i.i.d. sample amounts (d-fold convolution)."""
    if d < 1:
        raise BadRange(f"need d >= 1, got {d}")
    return _convolve_power(check_distribution(pt), d)


def _entropy(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def _bucket(pmf: np.ndarray, quant: Quantizer, shift: int = 0) -> np.ndarray:
    """Quantizer-region masses of pmf placed at offset `shift`."""
    out = np.zeros(quant.Q)
    for r, reg in enumerate(quant.regions()):
        lo = max(reg.start - shift, 0)
        hi = max(reg.stop - shift, 0)
        out[r] = pmf[lo:hi].sum()
    return out


def output_pmf(pt, d: int, quant: Quantizer) -> np.ndarray:
    """Distribution of the quantized test result for d defectives."""
    s = sum_pmf(pt, d)
    if quant.top != len(s) - 1:
        raise BadPartition(
            f"quantizer covers 0..{quant.top} but sums reach {len(s) - 1}"
        )
    return _bucket(s, quant)


def mutual_information(pt, d: int, i: int, quant: Quantizer) -> float:
    """Information one side of an i / d-i defective split shares with the
    other side plus the test result, in the noiseless channel.

    Computed exactly by conditioning on the known side's sum: the result is
    the mean entropy of the quantized (i-sum + b) distribution over b. For
    i = d this is the entropy of the output distribution.
    """
    pt = check_distribution(pt)
    if not 1 <= i <= d:
        raise BadPartition(f"split size must lie in 1..{d}, got {i}")
    if quant.top != (len(pt) - 1) * d:
        raise BadPartition(
            f"quantizer covers 0..{quant.top}, expected 0..{(len(pt) - 1) * d}"
        )
    p_open = _convolve_power(pt, i)
    p_known = _convolve_power(pt, d - i)
    total = 0.0
    for b, pb in enumerate(p_known):
        if pb > 0:
            total += pb * _entropy(_bucket(p_open, quant, shift=b))
    return total


def mutual_information_bruteforce(pt, d: int, i: int, quant: Quantizer) -> float:
    """Same quantity by direct summation over the joint distribution of
    (open symbols, known symbols, result); the independent cross-check."""
    pt = check_distribution(pt)
    if not 1 <= i <= d:
        raise BadPartition(f"split size must lie in 1..{d}, got {i}")
    q = len(pt)
    edges = np.asarray(quant.edges)
    joint: dict[tuple, float] = {}
    p1_m: dict[tuple, float] = {}
    p2z_m: dict[tuple, float] = {}
    for t1 in product(range(q), repeat=i):
        w1 = float(np.prod([pt[s] for s in t1]))
        if w1 == 0.0:
            continue
        for t2 in product(range(q), repeat=d - i):
            w2 = float(np.prod([pt[s] for s in t2]))
            if w2 == 0.0:
                continue
            z = int(np.searchsorted(edges, sum(t1) + sum(t2), side="right") - 1)
            p = w1 * w2
            joint[(t1, t2, z)] = joint.get((t1, t2, z), 0.0) + p
            p1_m[t1] = p1_m.get(t1, 0.0) + p
            p2z_m[(t2, z)] = p2z_m.get((t2, z), 0.0) + p
    return sum(
        p * log2(p / (p1_m[t1] * p2z_m[(t2, z)]))
        for (t1, t2, z), p in joint.items()
    )


def rate_objective(pt, d: int, quant: Quantizer) -> float:
    """Minimum over split sizes i of mutual_information / i.

    By the chain inequality the minimum sits at i = d, but every split is
    evaluated anyway; the value is the per-defective information rate whose
    supremum over (pt, quantizer) is the channel capacity.
    """
    return min(mutual_information(pt, d, i, quant) / i for i in range(1, d + 1))


def _simplex_grid(q: int, resolution: int):
    """Integer compositions of `resolution` into q parts, lexicographic."""

    def rec(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for v in range(remaining + 1):
            yield from rec(prefix + (v,), remaining - v, slots - 1)

    yield from rec((), resolution, q)


def capacity_search(
    d: int,
    q: int,
    Q: int,
    grid_step: float = 0.01,
    budget: int = 10_000_000,
    refine: bool = True,
) -> tuple[tuple[float, ...], Quantizer, float]:
    """Grid-maximize the rate objective over input distributions and all
    contiguous Q-region quantizers of the sum range.

    Returns (distribution, quantizer, bits); a lower bound on the capacity
    by construction. Ties break toward the lexicographically smallest grid
    point and then the first quantizer in boundary order.
    """
    if d < 1 or q < 2 or Q < 1:
        raise BadRange(f"need d >= 1, q >= 2, Q >= 1, got {d}, {q}, {Q}")
    top = (q - 1) * d
    if Q > top + 1:
        raise BadPartition(f"cannot split 0..{top} into {Q} nonempty regions")
    resolution = round(1.0 / grid_step)
    quantizers = [
        Quantizer((0,) + cuts + (top + 1,))
        for cuts in combinations(range(1, top + 1), Q - 1)
    ]
    n_grid = comb(resolution + q - 1, q - 1)
    if n_grid * len(quantizers) > budget:
        raise BudgetExceeded(
            f"{n_grid} grid points x {len(quantizers)} quantizers exceed budget {budget}"
        )

    def eval_point(weights) -> tuple[float, Quantizer, tuple[float, ...]]:
        pt = tuple(wi / resolution for wi in weights)
        best_v, best_q = -1.0, None
        for quant in quantizers:
            v = rate_objective(pt, d, quant)
            if v > best_v:
                best_v, best_q = v, quant
        return best_v, best_q, pt

    best_v, best_q, best_pt = -1.0, None, None
    best_w = None
    for weights in _simplex_grid(q, resolution):
        v, quant, pt = eval_point(weights)
        if v > best_v:
            best_v, best_q, best_pt, best_w = v, quant, pt, weights

    if refine and best_w is not None:
        fine = 10
        offsets = range(-fine, fine + 1)
        base = tuple(w * fine for w in best_w)
        for deltas in product(offsets, repeat=q - 1):
            w = list(base)
            for j, dj in enumerate(deltas):
                w[j] += dj
            w[-1] = resolution * fine - sum(w[:-1])
            if any(x < 0 for x in w):
                continue
            pt = tuple(x / (resolution * fine) for x in w)
            for quant in quantizers:
                v = rate_objective(pt, d, quant)
                if v > best_v:
                    best_v, best_q, best_pt = v, quant, pt
    return best_pt, best_q, best_v


def _bound(n: int, d: int, pt, quant: Quantizer, numerator) -> float:
    if n < d or d < 1:
        raise BadRange(f"need n >= d >= 1, got n={n}, d={d}")
    worst = 0.0
    for i in range(1, d + 1):
        num = numerator(i)
        if num == 0.0:
            continue
        info = mutual_information(pt, d, i, quant)
        worst = max(worst, num / info if info > 0 else inf)
    return worst


def sufficient_tests(n: int, d: int, pt, quant: Quantizer) -> float:
    """Test count above which random designs succeed with vanishing error."""
    return _bound(n, d, pt, quant, lambda i: log2(comb(n - d, i) * comb(d, i)) if comb(n - d, i) * comb(d, i) > 1 else 0.0)


def necessary_tests(n: int, d: int, pt, quant: Quantizer) -> float:
    """Test count below which every design has error bounded away from zero."""
    return _bound(n, d, pt, quant, lambda i: log2(comb(n - d + i, i)) if comb(n - d + i, i) > 1 else 0.0)


def _floor_log2_ratio(a: int, b: int) -> int:
    k = 0
    while b * 2 ** (k + 1) <= a:
        k += 1
    return k


def td_rate_denominator(d: int, eta_t: int) -> float:
    """Rate denominator of probabilistically built single-threshold codes;
    increasing in the threshold, so the smallest threshold wins."""
    if not 2 <= eta_t <= d:
        raise BadEta(f"need 2 <= eta_t <= d, got eta_t={eta_t}, d={d}")
    return (
        (_floor_log2_ratio(d, eta_t) + 1)
        * (d - 1)
        / (eta_t - 1)
        * float(8 * eta_t) ** eta_t
    )
