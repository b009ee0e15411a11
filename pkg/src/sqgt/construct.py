"""Code constructions for the quantized-adder testing model.

Each builder returns a test matrix together with the bracket parameters it
claims (so the verify module can certify the claim), plus any metadata the
matching decoder needs. Scaling constructions accept arbitrary thresholds;
the concatenation, number-theoretic, and recursive constructions assume the
equidistant model and take a scalar threshold step.

Probabilistic builders take an explicit seed and an optional row-count
override or multiplier; their row-count formulas use natural logarithms and
only guarantee the claimed property asymptotically.
"""

from dataclasses import dataclass
from math import ceil, comb, log

import numpy as np

from .errors import (
    AlphabetTooSmall,
    BadDistribution,
    BadKappa,
    BadRange,
    BadThreshold,
    DensityOutOfRange,
    NotPrime,
    Overflow,
)
from .model import CodeParams, check_matrix, validate_params
from .rng import make_rng

__all__ = [
    "ConcatSpec",
    "LindstromSpec",
    "scale_disjunct",
    "scale_separable",
    "row_success_prob",
    "optimize_p0",
    "ratio_vs_single_level",
    "ratio_vs_single_level_limit",
    "random_disjunct",
    "reduce_alphabet",
    "concat_disjunct",
    "concat_separable",
    "bose_chowla",
    "sidon_set_exhaustive",
    "smallest_prime_at_least",
    "bose_chowla_code",
    "binary_row_success_bound",
    "random_binary_separable",
    "lindstrom",
    "ordered_subsets",
]


# ---------------------------------------------------------------------------
# scaling constructions (arbitrary thresholds)
# ---------------------------------------------------------------------------

def _scaled(base, q: int, eta) -> np.ndarray:
    base = check_matrix(base, 2)
    if q - 1 < eta[1]:
        raise AlphabetTooSmall(f"need q-1 >= eta_1, got q-1={q - 1}, eta_1={eta[1]}")
    return (q - 1) * base


def scale_disjunct(base, d: int, e: int, q: int, eta) -> tuple[np.ndarray, CodeParams]:
    """Scale a binary d-disjunct code by q-1; the result is SQ-disjunct."""
    C = _scaled(base, q, eta)
    params = CodeParams(q=q, Q=len(eta) - 1, eta=tuple(eta), l=1, u=d, e=e)
    validate_params(params)
    return C, params


def scale_separable(base, d: int, e: int, q: int, eta, base_kind: str = "cgt") -> tuple[np.ndarray, CodeParams]:
    """Scale a binary d-separable code by q-1; the result is SQ-separable.

    base_kind is "cgt" (Boolean-sum separable base, arbitrary thresholds) or
    "qgt" (arithmetic-sum separable base, which requires the equidistant
    model with q-1 a multiple of the step).
    """
    eta = tuple(eta)
    if base_kind not in ("cgt", "qgt"):
        raise BadRange(f"base_kind must be 'cgt' or 'qgt', got {base_kind!r}")
    if base_kind == "qgt":
        step = eta[1]
        if any(eta[r] != r * step for r in range(len(eta))):
            raise BadThreshold("qgt-separable bases need equidistant thresholds")
        if (q - 1) % step != 0:
            raise AlphabetTooSmall(
                f"q-1={q - 1} must be a multiple of the step {step} for a qgt base"
            )
    C = _scaled(base, q, eta)
    params = CodeParams(q=q, Q=len(eta) - 1, eta=eta, l=1, u=d, e=e)
    validate_params(params)
    return C, params


# ---------------------------------------------------------------------------
# random multi-level construction and its row-success analysis
# ---------------------------------------------------------------------------

def row_success_prob(d: int, levels: int, p0: float) -> float:
    """Probability that one random row isolates a fixed pivot column.

    Entries are 0 with probability p0 and each of `levels` nonzero values
    with probability (1-p0)/levels; success means the pivot entry strictly
    exceeds the sum of d other entries in the row.
    """
    if d < 1 or levels < 1:
        raise BadRange(f"need d >= 1 and levels >= 1, got d={d}, levels={levels}")
    if not 0.0 < p0 < 1.0:
        raise BadDistribution(f"p0 must lie in (0, 1), got {p0}")
    head = (1 - p0) * p0**d
    tail = sum(
        comb(d, k) * (p0 * levels / (1 - p0)) ** k * comb(levels, d - k + 1)
        for k in range(d)
    )
    return head + (1 - p0) ** (d + 1) * levels ** -(d + 1) * tail


def optimize_p0(d: int, levels: int, step: float = 1e-3) -> tuple[float, float]:
    """Grid-maximize row_success_prob over p0; returns (p0, probability)."""
    grid = np.arange(step, 1.0, step)
    vals = [row_success_prob(d, levels, p) for p in grid]
    i = int(np.argmax(vals))
    best_p, best_v = float(grid[i]), vals[i]
    fine = np.arange(max(step / 10, best_p - step), min(1.0 - step / 10, best_p + step), step / 10)
    for p in fine:
        v = row_success_prob(d, levels, float(p))
        if v > best_v:
            best_p, best_v = float(p), v
    return best_p, best_v


def ratio_vs_single_level(d: int, levels: int) -> float:
    """Asymptotic test-count ratio (single level over `levels` levels) at p0 = d/(d+1)."""
    if d < 1 or levels < 1:
        raise BadRange(f"need d >= 1 and levels >= 1, got d={d}, levels={levels}")
    return 1.0 + sum(
        comb(d, j) * comb(levels, j + 1) / (levels ** (j + 1) * d**j)
        for j in range(1, min(levels - 1, d) + 1)
    )


def ratio_vs_single_level_limit(levels: int) -> float:
    """Large-d limit of ratio_vs_single_level."""
    if levels < 1:
        raise BadRange(f"need levels >= 1, got {levels}")
    total = 1.0
    for k in range(levels - 1):
        j = levels - k
        fact = 1.0
        for x in range(2, j):
            fact *= x
        total += comb(levels, k) / (levels**j * fact)
    return total


def random_disjunct(
    n: int,
    d: int,
    levels: int,
    eta_step: int,
    e: int = 0,
    p0: float | None = None,
    p1: float | None = None,
    delta: float = 1.0,
    seed: int = 0,
    q: int | None = None,
    m: int | None = None,
    m_multiplier: float = 1.0,
) -> tuple[np.ndarray, CodeParams]:
    """I.i.d. code over {0, step, ..., levels*step}, claimed SQ-disjunct (1:d).

    The row count follows the union-bound formulas (natural log) unless m is
    given explicitly; m_multiplier adds finite-size headroom on top.
    """
    if n <= d or d < 1:
        raise BadRange(f"need n > d >= 1, got n={n}, d={d}")
    if levels < 1:
        raise BadRange(f"need at least one nonzero level, got {levels}")
    if q is None:
        q = levels * eta_step + 1
    if levels * eta_step > q - 1:
        raise AlphabetTooSmall(
            f"largest level {levels * eta_step} exceeds q-1={q - 1}"
        )
    if p0 is None:
        p0 = d / (d + 1)
    if p1 is None:
        p1 = (1 - p0) / levels
    if not (0 < p0 < 1) or p1 < 0 or abs(p0 + levels * p1 - 1.0) > 1e-12:
        raise BadDistribution(
            f"p0 + levels*p1 must equal 1, got {p0} + {levels}*{p1}"
        )
    pi = row_success_prob(d, levels, p0)
    if m is None:
        if e > 0:
            rows = (2 * (d + 1) / pi + delta) * log(n / d) + 4 * e / pi
        else:
            rows = ((d + 1) / pi + delta) * log(n / d)
        m = max(1, ceil(rows * m_multiplier))
    rng = make_rng(seed)
    symbols = rng.choice(levels + 1, size=(m, n), p=[p0] + [p1] * levels)
    C = symbols.astype(np.int64) * eta_step
    params = CodeParams.equidistant(q, eta_step, 1, d, e)
    return C, params


def reduce_alphabet(C, eta_step: int) -> np.ndarray:
    """Round entries down to multiples of the step; preserves disjunctness."""
    if eta_step < 1:
        raise BadRange(f"eta step must be >= 1, got {eta_step}")
    C = check_matrix(C)
    return (C // eta_step) * eta_step


# ---------------------------------------------------------------------------
# concatenation of scaled binary blocks (equidistant thresholds)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConcatSpec:
    """Metadata for a code built as [s_1*B, s_2*B, ..., s_K*B]."""

    base: np.ndarray
    scales: tuple[int, ...]
    d: int
    e: int
    eta_step: int
    params: CodeParams

    @property
    def blocks(self) -> int:
        return len(self.scales)

    def block_matrix(self, j: int) -> np.ndarray:
        """Matrix of block j (1-based)."""
        return self.scales[j - 1] * self.base


def _concat(base, d: int, e: int, q: int, eta_step: int) -> tuple[np.ndarray, ConcatSpec]:
    base = check_matrix(base, 2)
    if eta_step < 1 or d < 1:
        raise BadRange(f"need eta_step >= 1 and d >= 1, got {eta_step}, {d}")
    budget = (q - 1) // eta_step
    if budget < 1:
        raise AlphabetTooSmall(f"need q-1 >= eta_step, got q-1={q - 1}, step={eta_step}")
    if d == 1:
        # the block-count formula degenerates at d=1; use every multiple of
        # the step, decoding by direct column matching
        multipliers = list(range(1, budget + 1))
    else:
        multipliers = []
        g = 1  # 1 + d + ... + d^(j-1)
        while g <= budget:
            multipliers.append(g)
            g = g * d + 1
    scales = tuple(eta_step * g for g in multipliers)
    C = np.hstack([s * base for s in scales])
    params = CodeParams.equidistant(q, eta_step, 1, d, e)
    spec = ConcatSpec(base=base, scales=scales, d=d, e=e, eta_step=eta_step, params=params)
    return C, spec


def concat_disjunct(base, d: int, e: int, q: int, eta_step: int) -> tuple[np.ndarray, ConcatSpec]:
    """Concatenate scaled copies of a binary d-disjunct code.

    Block j is scaled by eta*(d^j - 1)/(d - 1); the result is SQ-separable
    for 1..d defectives and decodes block by block with the disjunct
    counting decoder.
    """
    return _concat(base, d, e, q, eta_step)


def concat_separable(base, d: int, e: int, q: int, eta_step: int) -> tuple[np.ndarray, ConcatSpec]:
    """Same concatenation applied to a binary d-separable base code."""
    return _concat(base, d, e, q, eta_step)


# ---------------------------------------------------------------------------
# number-theoretic construction (distinct d-sums via finite-field logs)
# ---------------------------------------------------------------------------

def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    f = 2
    while f * f <= x:
        if x % f == 0:
            return False
        f += 1
    return True


def smallest_prime_at_least(n: int) -> int:
    p = max(2, n)
    while not _is_prime(p):
        p += 1
    return p


def _prime_factors(x: int) -> list[int]:
    out = []
    f = 2
    while f * f <= x:
        if x % f == 0:
            out.append(f)
            while x % f == 0:
                x //= f
        f += 1
    if x > 1:
        out.append(x)
    return out


def _poly_mul_mod(a, b, f, L):
    d = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % L
    for i in range(len(prod) - 1, d - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(d):
                prod[i - d + j] = (prod[i - d + j] - c * f[j]) % L
    prod = prod[:d] + [0] * (d - len(prod))
    return tuple(prod[:d])


def _poly_pow_mod(base, exp, f, L):
    d = len(f) - 1
    result = tuple([1] + [0] * (d - 1))
    cur = tuple(base)
    while exp:
        if exp & 1:
            result = _poly_mul_mod(result, cur, f, L)
        cur = _poly_mul_mod(cur, cur, f, L)
        exp >>= 1
    return result


def _poly_gcd(a, b, L):
    a, b = list(a), list(b)

    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, L)
        while len(a) >= len(b):
            c = (a[-1] * inv) % L
            shift = len(a) - len(b)
            for i, bi in enumerate(b):
                a[i + shift] = (a[i + shift] - c * bi) % L
            a = trim(a)
            if not a:
                break
        a, b = b, a
    return a


def _is_irreducible(f, L):
    """Rabin test for a monic polynomial f over GF(L)."""
    d = len(f) - 1
    x = tuple([0, 1] + [0] * (d - 2)) if d >= 2 else (0,)
    xq = _poly_pow_mod(x, L**d, f, L)
    if xq != x:
        return False
    for p in _prime_factors(d):
        h = list(_poly_pow_mod(x, L ** (d // p), f, L))
        h[1] = (h[1] - 1) % L  # h = x^(L^(d/p)) - x
        g = _poly_gcd(h, list(f), L)
        if len(g) != 1:
            return False
    return True


def _find_irreducible(L, d):
    # monic x^d + (low-order coefficients); scan codes deterministically
    for code in range(1, L**d):
        coeffs = []
        c = code
        for _ in range(d):
            coeffs.append(c % L)
            c //= L
        if coeffs[0] == 0:
            continue
        f = tuple(coeffs) + (1,)
        if _is_irreducible(f, L):
            return f
    raise NotPrime(f"no irreducible polynomial of degree {d} found over GF({L})")


def bose_chowla(L: int, d: int) -> tuple[int, ...]:
    """L nonzero integers below L^d whose d-element multiset sums are
    pairwise distinct modulo L^d - 1.

    Realized through discrete logarithms in GF(L^d): with a primitive
    element t, the logs of t+a over all a in GF(L) have the property. L must
    be prime.
    """
    if d < 2:
        raise BadRange(f"need d >= 2, got {d}")
    if not _is_prime(L):
        raise NotPrime(f"{L} is not prime")
    if L**d - 1 > 2**62:
        raise Overflow(f"L^d = {L}^{d} exceeds the safe integer range")
    f = _find_irreducible(L, d)
    order = L**d - 1
    prime_parts = _prime_factors(order)
    one = tuple([1] + [0] * (d - 1))

    theta = None
    for code in range(L, L**d):  # skip constants, start at x
        coeffs = []
        c = code
        for _ in range(d):
            coeffs.append(c % L)
            c //= L
        cand = tuple(coeffs)
        if all(_poly_pow_mod(cand, order // p, f, L) != one for p in prime_parts):
            theta = cand
            break
    if theta is None:
        raise NotPrime(f"no primitive element found in GF({L}^{d})")

    # walk powers of theta; collect exponents of elements theta + a, a in GF(L)
    targets = {}
    for a in range(L):
        shifted = (theta[0] + a) % L
        targets[(shifted,) + theta[1:]] = a
    logs = []
    power = theta
    for i in range(1, order + 1):
        if power in targets:
            logs.append(i)
            if len(logs) == L:
                break
        power = _poly_mul_mod(power, theta, f, L)
    if len(logs) != L:
        raise NotPrime(f"discrete-log walk failed in GF({L}^{d})")
    return tuple(sorted(logs))


def sidon_set_exhaustive(L: int, d: int) -> tuple[int, ...]:
    """Backtracking fallback oracle for small L: the lexicographically first
    L-element subset of 1..L^d-1 with distinct d-element multiset sums
    modulo L^d - 1."""
    from itertools import combinations_with_replacement

    if L > 16:
        raise BadRange(f"exhaustive search is desk-scale only (L <= 16), got {L}")
    mod = L**d - 1

    def sums_ok(chosen):
        seen = set()
        for combo in combinations_with_replacement(chosen, d):
            s = sum(combo) % mod
            if s in seen:
                return False
            seen.add(s)
        return True

    def extend(chosen, start):
        if len(chosen) == L:
            return chosen
        for x in range(start, L**d):
            cand = chosen + [x]
            if sums_ok(cand):
                hit = extend(cand, x + 1)
                if hit:
                    return hit
        return None

    found = extend([], 1)
    if found is None:
        raise BadRange(f"no Sidon-type set of size {L} found for d={d}")
    return tuple(found)


def bose_chowla_code(n: int, d: int, q: int, eta_step: int) -> tuple[np.ndarray, CodeParams]:
    """Code whose columns are scaled base-q' digit vectors of a distinct
    d-sum integer set; claimed SQ-separable for exactly d defectives."""
    if n < 2:
        raise BadRange(f"need n >= 2, got {n}")
    q_prime = (q - 1) // eta_step + 1
    if q_prime < 2:
        raise AlphabetTooSmall(f"need q-1 >= eta_step, got q-1={q - 1}, step={eta_step}")
    L = smallest_prime_at_least(n)
    integers = bose_chowla(L, d)[:n]
    m = 0
    reach = 1
    while reach < L**d:
        reach *= q_prime
        m += 1
    C = np.zeros((m, n), dtype=np.int64)
    for j, val in enumerate(integers):
        for k in range(m):  # little-endian digits
            C[k, j] = val % q_prime
            val //= q_prime
    params = CodeParams.equidistant(q, eta_step, d, d, 0)
    return eta_step * C, params


# ---------------------------------------------------------------------------
# random binary construction for lower-bounded defective counts
# ---------------------------------------------------------------------------

def _floor_log2_ratio(a: int, b: int) -> int:
    """Largest k >= 0 with b * 2^k <= a (requires a >= b >= 1)."""
    if b < 1 or a < b:
        raise BadRange(f"need a >= b >= 1, got a={a}, b={b}")
    k = 0
    while b * 2 ** (k + 1) <= a:
        k += 1
    return k


def binary_row_success_bound(d: int, eta, alpha: int) -> float:
    """Lower bound on the per-row success probability of the stacked binary
    construction; depends on the first alpha thresholds."""
    eta = tuple(eta)
    if not 1 <= alpha < len(eta):
        raise BadRange(f"alpha must index a threshold, got {alpha}")
    if eta[1] < 2:
        raise BadThreshold(f"the bound needs eta_1 >= 2, got {eta[1]}")
    if d < 2 or eta[alpha] > d:
        raise BadRange(f"need 2 <= eta_alpha <= d, got eta_alpha={eta[alpha]}, d={d}")
    mu = (1 - 1 / eta[alpha]) / 8
    return 0.5 * sum(
        (mu / (eta[b] - 1)) ** eta[b] * (eta[b] - 1) / (d - 1)
        for b in range(1, alpha + 1)
    )


def random_binary_separable(
    n: int,
    d: int,
    eta,
    alpha: int,
    e: int = 0,
    delta: float = 1.0,
    seed: int = 0,
    m: int | None = None,
    m_multiplier: float = 1.0,
) -> tuple[np.ndarray, CodeParams]:
    """Stacked Bernoulli binary code, claimed SQ-separable for eta_alpha..d
    defectives. Block i of the stack has density 1 / (2^(i+2) * eta_alpha)."""
    eta = tuple(eta)
    if d > n // 2:
        raise BadRange(f"construction assumes d <= n/2, got d={d}, n={n}")
    rho = binary_row_success_bound(d, eta, alpha)
    r = _floor_log2_ratio(d, eta[alpha]) + 1
    densities = [1.0 / (2 ** (i + 2) * eta[alpha]) for i in range(1, r + 1)]
    if any(not 0.0 < p < 1.0 for p in densities):
        raise DensityOutOfRange(f"block densities out of range: {densities}")
    if m is None:
        if e > 0:
            rows = r * ((4 * d / rho + delta) * log(n / d) + 4 * e / rho)
        else:
            rows = r * (2 * d / rho + delta) * log(n / d)
        m = max(r, ceil(rows * m_multiplier))
    per_block = -(-m // r)  # ceil
    rng = make_rng(seed)
    blocks = [
        (rng.random((per_block, n)) < p).astype(np.int64) for p in densities
    ]
    C = np.vstack(blocks)
    params = CodeParams(q=2, Q=len(eta) - 1, eta=eta, l=eta[alpha], u=d, e=e)
    validate_params(params)
    return C, params


# ---------------------------------------------------------------------------
# recursive construction for arbitrary defective counts
# ---------------------------------------------------------------------------

def ordered_subsets(kappa: int) -> list[frozenset[int]]:
    """Nonempty subsets of {1..kappa} ordered by size, then colexicographically."""
    from .verify import colex_combinations

    out = []
    for size in range(1, kappa + 1):
        for combo in colex_combinations(kappa, size):
            out.append(frozenset(x + 1 for x in combo))
    return out


@dataclass(frozen=True, eq=False)
class LindstromSpec:
    """Metadata for the recursive block construction.

    subsets is the ordered block labeling, chains the nested gate sets used
    for the low-weight columns of each block, widths the retained column
    count per block after truncation, and matrix the unscaled integer code.
    """

    kappa: int
    q: int
    eta_step: int
    q2: int
    subsets: tuple[frozenset[int], ...]
    chains: tuple[tuple[frozenset[int], ...], ...]
    widths: tuple[int, ...]
    matrix: np.ndarray
    params: CodeParams

    @property
    def n(self) -> int:
        return int(sum(self.widths))

    def block_slice(self, i: int) -> slice:
        """Column range of block i (1-based) in the assembled matrix."""
        start = int(sum(self.widths[: i - 1]))
        return slice(start, start + self.widths[i - 1])


def _default_chain(subset: frozenset[int]) -> list[frozenset[int]]:
    chain = []
    cur = sorted(subset)
    while len(cur) > 1:
        cur = cur[:-1]  # drop the largest element
        chain.append(frozenset(cur))
    return chain


def lindstrom(
    kappa: int,
    q: int,
    eta_step: int,
    n: int | None = None,
    chains: dict[int, list] | None = None,
) -> tuple[np.ndarray, LindstromSpec]:
    """Recursive block code identifying any number of defectives up to n.

    One block per nonempty subset of {1..kappa}: the first q2+1 columns of
    block i carry the value 2^(q2-k+1) on rows whose label has odd overlap
    with the block label, and each later column thins the previous one
    through a shrinking gate set. chains optionally overrides the gate sets
    for selected blocks (1-based block index to list of element iterables);
    the default drops the largest element at each step. Truncation to n
    columns drops from the right.
    """
    if kappa < 1:
        raise BadKappa(f"need kappa >= 1, got {kappa}")
    levels = (q - 1) // eta_step
    if levels < 1:
        raise AlphabetTooSmall(f"need q-1 >= eta_step, got q-1={q - 1}, step={eta_step}")
    q2 = levels.bit_length() - 1  # floor(log2(levels))
    m = 2**kappa - 1
    subsets = ordered_subsets(kappa)

    chain_list: list[tuple[frozenset[int], ...]] = []
    for i, S in enumerate(subsets, start=1):
        if chains and i in chains:
            chain = [frozenset(int(x) for x in T) for T in chains[i]]
            expected = [len(S) - k for k in range(1, len(S))]
            if [len(T) for T in chain] != expected:
                raise BadRange(
                    f"chain for block {i} must have set sizes {expected}"
                )
            prev = S
            for T in chain:
                if not T < prev:
                    raise BadRange(f"chain sets for block {i} must strictly nest")
                prev = T
        else:
            chain = _default_chain(S)
        chain_list.append(tuple(chain))

    blocks = []
    for i, S in enumerate(subsets):
        width = q2 + len(S)
        B = np.zeros((m, width), dtype=np.int64)
        odd = np.array([len(S & Sj) % 2 == 1 for Sj in subsets])
        for k in range(1, q2 + 2):
            B[odd, k - 1] = 2 ** (q2 - k + 1)
        for k in range(q2 + 2, width + 1):
            T = chain_list[i][k - (q2 + 2)]
            gate = np.array([len(Sj & T) % 2 == 1 for Sj in subsets])
            B[:, k - 1] = ((B[:, k - 2] > 0) & gate).astype(np.int64)
        blocks.append(B)

    full = np.hstack(blocks)
    full_widths = [q2 + len(S) for S in subsets]
    total = sum(full_widths)
    if n is None:
        n = total
    if not 1 <= n <= total:
        raise BadRange(f"n must lie in 1..{total}, got {n}")
    widths = []
    remaining = n
    for w in full_widths:
        take = min(w, remaining)
        widths.append(take)
        remaining -= take
    matrix = full[:, :n]

    params = CodeParams.equidistant(q, eta_step, 1, n, 0)
    spec = LindstromSpec(
        kappa=kappa,
        q=q,
        eta_step=eta_step,
        q2=q2,
        subsets=tuple(subsets),
        chains=tuple(chain_list),
        widths=tuple(widths),
        matrix=matrix,
        params=params,
    )
    return eta_step * matrix, spec
