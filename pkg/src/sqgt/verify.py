"""Brute-force verifiers for every code property the constructions claim.

Each checker either returns None (the property holds) or a Witness naming a
concrete violating configuration. Enumeration runs in a fixed canonical
order (subset sizes ascending, subsets of equal size in colexicographic
order, pivots by position), so the returned witness is deterministic: it is
always the first violation in that order.

These are exponential oracles by design; a configurable budget keeps them at
desk scale.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import BadRange, ExplosionGuard, NotBinary, TooFewColumns
from .model import CodeParams, check_matrix, quantize_sums, validate_params

__all__ = [
    "Witness",
    "DEFAULT_BUDGET",
    "colex_combinations",
    "is_sq_disjunct",
    "is_sq_separable",
    "is_binary_disjunct_cgt",
    "is_binary_separable_cgt",
    "is_binary_separable_qgt",
]

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class Witness:
    """A concrete refutation of a code property.

    kind names the property that failed; sets holds one or two offending
    subject-index sets (1-based); detail spells out the violated count.
    """

    kind: str
    sets: tuple[tuple[int, ...], ...]
    detail: str

    def __str__(self) -> str:
        shown = " vs ".join("{" + ",".join(map(str, s)) + "}" for s in self.sets)
        return f"{self.kind}: {shown}: {self.detail}" if shown else f"{self.kind}: {self.detail}"


def colex_combinations(n: int, k: int):
    """Yield k-subsets of range(n) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for rest in colex_combinations(top, k - 1):
            yield rest + (top,)


def _subset_chunks(n: int, k: int, chunk: int):
    buf = []
    for c in colex_combinations(n, k):
        buf.append(c)
        if len(buf) == chunk:
            yield np.array(buf, dtype=np.int64)
            buf = []
    if buf:
        yield np.array(buf, dtype=np.int64)


def is_sq_disjunct(C, params: CodeParams, budget: int = DEFAULT_BUDGET) -> Witness | None:
    """Check the SQ-disjunct property of C at the bracket parameters.

    For every (d+1)-subset of columns and every pivot column inside it, at
    least 2e+1 coordinates must have the pivot's single-column syndrome
    strictly above the syndrome of the other d columns. Witness rows are
    automatically distinct across pivots of one subset, so only the counts
    are checked here.
    """
    validate_params(params)
    if params.l != 1:
        raise BadRange("SQ-disjunct codes cover defective ranges (1:d); need l == 1")
    C = check_matrix(C, params.q)
    d, e = params.u, params.e
    m, n = C.shape
    if n <= d:
        raise TooFewColumns(f"need n > d, got n={n}, d={d}")
    if 2 * e + 1 > m:
        return Witness("sq-disjunct", (), f"needs {2 * e + 1} witness rows but m={m}")
    if comb(n, d + 1) > budget:
        raise ExplosionGuard(f"C({n},{d + 1}) subsets exceed budget {budget}")

    eta = np.asarray(params.eta, dtype=np.int64)
    single = quantize_sums(C, eta)  # (m, n) syndromes of single columns
    chunk = max(1, (1 << 22) // (m * (d + 1)))
    for subs in _subset_chunks(n, d + 1, chunk):
        cols = C[:, subs]  # (m, B, d+1)
        total = cols.sum(axis=2)
        ok = np.empty((subs.shape[0], d + 1), dtype=bool)
        for p in range(d + 1):
            rest = quantize_sums(total - cols[:, :, p], eta)
            counts = (single[:, subs[:, p]] > rest).sum(axis=0)
            ok[:, p] = counts >= 2 * e + 1
        bad = ~ok.all(axis=1)
        if bad.any():
            b = int(np.argmax(bad))
            p = int(np.argmax(~ok[b]))
            subset = subs[b]
            pivot = int(subset[p])
            rest = quantize_sums(
                C[:, subset].sum(axis=1) - C[:, pivot], eta
            )
            count = int((single[:, pivot] > rest).sum())
            return Witness(
                "sq-disjunct",
                (tuple(int(i) + 1 for i in subset), (pivot + 1,)),
                f"column {pivot + 1} beats the other {d} on {count} coordinates, "
                f"needs {2 * e + 1}",
            )
    return None


def _admissible_sets(n: int, lo: int, hi: int, budget: int) -> list[tuple[int, ...]]:
    total = sum(comb(n, s) for s in range(lo, hi + 1))
    if total > budget:
        raise ExplosionGuard(f"{total} candidate sets exceed budget {budget}")
    sets: list[tuple[int, ...]] = []
    for size in range(lo, hi + 1):
        sets.extend(colex_combinations(n, size))
    return sets


def _syndrome_table(C: np.ndarray, sets, eta) -> np.ndarray:
    """Row i holds the syndrome of sets[i]; grouped per set size for speed."""
    m = C.shape[0]
    out = np.empty((len(sets), m), dtype=np.int64)
    start = 0
    while start < len(sets):
        size = len(sets[start])
        stop = start
        while stop < len(sets) and len(sets[stop]) == size:
            stop += 1
        idx = np.array(sets[start:stop], dtype=np.int64)
        sums = C[:, idx].sum(axis=2) if size else np.zeros((m, stop - start), dtype=np.int64)
        out[start:stop] = quantize_sums(sums, eta).T
        start = stop
    return out


def _first_close_pair(syn: np.ndarray, e: int, pair_budget: int):
    """First pair (i < j) of rows differing in fewer than 2e+1 coordinates.

    Pairs are scanned in colex order on (j, i), matching the canonical set
    order, so the scan finds the canonical first violation.
    """
    N = syn.shape[0]
    if e == 0:
        seen: dict[bytes, int] = {}
        for j in range(N):
            key = syn[j].tobytes()
            if key in seen:
                return seen[key], j, 0
            seen[key] = j
        return None
    if N * (N - 1) // 2 > pair_budget:
        raise ExplosionGuard(f"{N * (N - 1) // 2} set pairs exceed budget {pair_budget}")
    for j in range(1, N):
        diff = (syn[:j] != syn[j]).sum(axis=1)
        bad = diff < 2 * e + 1
        if bad.any():
            i = int(np.argmax(bad))
            return i, j, int(diff[i])
    return None


def is_sq_separable(C, params: CodeParams, budget: int = DEFAULT_BUDGET) -> Witness | None:
    """Check the SQ-separable property of C at the bracket parameters.

    Every pair of distinct subject sets with sizes in l..u must produce
    syndromes differing in at least 2e+1 coordinates.
    """
    validate_params(params)
    C = check_matrix(C, params.q)
    m, n = C.shape
    if params.u > n:
        raise TooFewColumns(f"need n >= u, got n={n}, u={params.u}")
    if 2 * params.e + 1 > m:
        return Witness("sq-separable", (), f"needs {2 * params.e + 1} witness rows but m={m}")
    sets = _admissible_sets(n, params.l, params.u, budget)
    syn = _syndrome_table(C, sets, np.asarray(params.eta, dtype=np.int64))
    hit = _first_close_pair(syn, params.e, budget)
    if hit is None:
        return None
    i, j, dist = hit
    return Witness(
        "sq-separable",
        (tuple(x + 1 for x in sets[i]), tuple(x + 1 for x in sets[j])),
        f"syndromes differ in {dist} coordinates, need {2 * params.e + 1}",
    )


def _as_binary(C) -> np.ndarray:
    C = check_matrix(C)
    if C.max() > 1:
        raise NotBinary("matrix must be binary")
    return C


def _binary_reduction_params(C: np.ndarray, d: int, e: int, adder: bool) -> CodeParams:
    if adder:
        # identity thresholds: bucket(s) == s, so SQ-sum is the arithmetic sum
        return CodeParams(q=2, Q=d + 1, eta=tuple(range(d + 2)), l=1, u=d, e=e)
    # single threshold at 1: bucket(s) == (s >= 1), so SQ-sum is the Boolean OR
    return CodeParams(q=2, Q=2, eta=(0, 1, d + 1), l=1, u=d, e=e)


def is_binary_disjunct_cgt(C, d: int, e: int = 0, budget: int = DEFAULT_BUDGET) -> Witness | None:
    """Classical binary d-disjunct check: 2e+1 private rows per pivot column."""
    C = _as_binary(C)
    return is_sq_disjunct(C, _binary_reduction_params(C, d, e, adder=False), budget)


def is_binary_separable_cgt(
    C, d: int, e: int = 0, budget: int = DEFAULT_BUDGET, min_size: int = 1
) -> Witness | None:
    """Classical binary d-separable check with Boolean-OR syndromes."""
    C = _as_binary(C)
    p = _binary_reduction_params(C, d, e, adder=False)
    return is_sq_separable(C, CodeParams(p.q, p.Q, p.eta, min_size, d, e), budget)


def is_binary_separable_qgt(
    C, d: int, e: int = 0, budget: int = DEFAULT_BUDGET, min_size: int = 1
) -> Witness | None:
    """Binary d-separable check with arithmetic-sum syndromes.

    min_size restricts the admissible set sizes to min_size..d; the default
    1 matches the classical definition, while exact-size codes (for example
    the number-theoretic ones) are checked with min_size=d.
    """
    C = _as_binary(C)
    p = _binary_reduction_params(C, d, e, adder=True)
    return is_sq_separable(C, CodeParams(p.q, p.Q, p.eta, min_size, d, e), budget)
