"""Decoders: counting, block-concatenation, recursive elimination, exact ML,
and loopy belief propagation.

Decoders return tuples of 1-based subject indices in increasing order. The
BP decoder returns per-subject marginals instead; pair it with one of the
two selection rules to obtain a defective set.
"""

from dataclasses import dataclass
from math import comb, inf

import numpy as np

from .errors import (
    BadD,
    BadRange,
    ExplosionGuard,
    InconsistentSpec,
    NoConsistentSet,
    NonBinaryResidue,
    NumericalUnderflow,
)
from .construct import ConcatSpec, LindstromSpec
from .model import (
    CodeParams,
    NoiseModel,
    channel_matrix,
    check_matrix,
    quantize_sums,
    validate_params,
)
from .verify import colex_combinations

__all__ = [
    "decode_disjunct",
    "decode_concat",
    "decode_lindstrom",
    "block_equation",
    "decode_ml",
    "Marginals",
    "BpConfig",
    "bp_decode",
    "bp_decode_batch",
    "select_threshold",
    "select_topd",
]

_MSG_FLOOR = 1e-300
_VAR_FLOOR = 1e-12  # keeps variable messages interior so loopy over-confidence
                    # cannot zero out a factor's entire sum distribution


def decode_disjunct(C, params: CodeParams, z) -> tuple[int, ...]:
    """Counting decoder for SQ-disjunct codes; exact when z carries at most
    e substitution errors. Subject i is declared defective iff its
    single-column syndrome exceeds z on at most e coordinates."""
    C = check_matrix(C, params.q)
    z = np.asarray(z, dtype=np.int64)
    if z.shape != (C.shape[0],):
        raise BadRange(f"syndrome length {z.shape} does not match m={C.shape[0]}")
    single = quantize_sums(C, np.asarray(params.eta, dtype=np.int64))
    exceed = (single > z[:, None]).sum(axis=0)
    return tuple(int(i) + 1 for i in np.nonzero(exceed <= params.e)[0])


def _decode_concat_single(spec: ConcatSpec, z: np.ndarray) -> tuple[int, ...]:
    # d == 1: each block holds one scaled copy; match columns directly
    C = np.hstack([spec.block_matrix(j + 1) for j in range(spec.blocks)])
    eta = np.asarray(spec.params.eta, dtype=np.int64)
    syn = quantize_sums(C, eta)
    mism = (syn != z[:, None]).sum(axis=0)
    if not z.any() and spec.e == 0:
        return ()
    hits = np.nonzero(mism <= spec.e)[0]
    return tuple(int(i) + 1 for i in hits[:1])


def decode_concat(spec: ConcatSpec, z) -> tuple[int, ...]:
    """Two-step decoder for concatenated scaled-block codes.

    Step 1 peels the syndrome into per-block syndromes by repeated
    divide-and-floor against the block scale ratios; step 2 runs the
    disjunct counting decoder inside every block. Corrects up to e errors
    per block.
    """
    z = np.asarray(z, dtype=np.int64)
    m, nb = spec.base.shape
    if z.shape != (m,):
        raise InconsistentSpec(f"syndrome length {z.shape[0]} does not match m={m}")
    if spec.d == 1:
        return _decode_concat_single(spec, z)
    found: list[int] = []
    y = z.copy()
    for j in range(spec.blocks, 0, -1):
        f = (spec.d**j - 1) // (spec.d - 1)
        yj = f * (y // f)
        y = y - yj
        block_params = CodeParams(
            q=spec.params.q,
            Q=spec.params.Q,
            eta=spec.params.eta,
            l=1,
            u=spec.d,
            e=spec.e,
        )
        for local in decode_disjunct(spec.block_matrix(j), block_params, yj):
            found.append((j - 1) * nb + local)
    return tuple(sorted(found))


def block_equation(spec: LindstromSpec, block: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Elimination equation of one block of a recursive code.

    Returns (odd_rows, even_rows, coefficients): 1-based row indices whose
    results are added and subtracted, and the power-of-two coefficients the
    combination leaves on the block's own columns.
    """
    if not 1 <= block <= len(spec.subsets):
        raise BadRange(f"block must lie in 1..{len(spec.subsets)}, got {block}")
    S = spec.subsets[block - 1]
    odd = tuple(
        j + 1 for j, Sj in enumerate(spec.subsets) if Sj <= S and len(Sj) % 2 == 1
    )
    even = tuple(
        j + 1 for j, Sj in enumerate(spec.subsets) if Sj <= S and len(Sj) % 2 == 0
    )
    width = spec.widths[block - 1]
    full = spec.q2 + len(S)
    coeffs = tuple(2 ** (full - k) for k in range(1, width + 1))
    return odd, even, coeffs


def decode_lindstrom(spec: LindstromSpec, z) -> tuple[int, ...]:
    """Recursive elimination decoder; exact for any defective count 0..n.

    Processes blocks from the last to the first. For each block it combines
    the rows labeled by odd and even subsets of the block label, subtracts
    the contribution of already-decoded subjects, and reads the block's
    indicator bits off the binary representation of the remainder.
    """
    z = np.asarray(z, dtype=np.int64)
    C = spec.matrix
    mrows, n = C.shape
    if z.shape != (mrows,):
        raise InconsistentSpec(f"syndrome length {z.shape[0]} does not match m={mrows}")
    w = np.zeros(n, dtype=np.int64)
    known = np.zeros(n, dtype=bool)
    for i in range(len(spec.subsets), 0, -1):
        if spec.widths[i - 1] == 0:
            continue
        odd, even, coeffs = block_equation(spec, i)
        vec = C[[r - 1 for r in odd]].sum(axis=0) - C[[r - 1 for r in even]].sum(axis=0)
        rhs = int(z[[r - 1 for r in odd]].sum() - z[[r - 1 for r in even]].sum())
        rhs -= int(vec[known] @ w[known])
        sl = spec.block_slice(i)
        if tuple(int(c) for c in vec[sl]) != coeffs:
            raise InconsistentSpec(
                f"block {i} columns do not match the construction rules"
            )
        if rhs < 0:
            raise NonBinaryResidue(f"block {i} leaves a negative remainder {rhs}")
        for offset, c in enumerate(coeffs):
            if rhs >= c:
                w[sl.start + offset] = 1
                rhs -= c
        if rhs != 0:
            raise NonBinaryResidue(f"block {i} leaves remainder {rhs} after all bits")
        known[sl] = True
    return tuple(int(i) + 1 for i in np.nonzero(w)[0])


def decode_ml(
    C,
    params: CodeParams,
    z,
    noise: NoiseModel = NoiseModel(),
    budget: int = 2_000_000,
) -> tuple[int, ...]:
    """Exhaustive maximum-likelihood decoder over all sets of size l..u.

    Serves as the oracle the efficient decoders are compared against. Ties
    break toward the set appearing first in the canonical order (sizes
    ascending, colexicographic within one size).
    """
    validate_params(params)
    C = check_matrix(C, params.q)
    z = np.asarray(z, dtype=np.int64)
    m, n = C.shape
    total = sum(comb(n, s) for s in range(params.l, params.u + 1))
    if total > budget:
        raise ExplosionGuard(f"{total} candidate sets exceed budget {budget}")
    eta = np.asarray(params.eta, dtype=np.int64)
    with np.errstate(divide="ignore"):
        logP = np.log(channel_matrix(params.Q, noise))
    best: tuple[int, ...] | None = None
    best_ll = -inf
    for size in range(params.l, params.u + 1):
        for subset in colex_combinations(n, size):
            y = quantize_sums(C[:, list(subset)].sum(axis=1), eta)
            ll = float(logP[y, z].sum())
            if ll > best_ll:
                best_ll = ll
                best = subset
    if best is None or best_ll == -inf:
        raise NoConsistentSet("no candidate set has positive likelihood")
    return tuple(i + 1 for i in best)


# ---------------------------------------------------------------------------
# belief propagation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BpConfig:
    """Knobs for the loopy sum-product decoder.

    max_iters is the flooding-schedule iteration count; damping mixes the
    previous factor messages into the new ones; prior overrides the default
    per-subject defect probability d/n; tol, when set, stops early once the
    largest message change drops below it.
    """

    max_iters: int = 20
    damping: float = 0.0
    prior: float | None = None
    tol: float | None = None

    def __post_init__(self):
        if self.max_iters < 1:
            raise BadRange(f"need at least one iteration, got {self.max_iters}")
        if not 0.0 <= self.damping < 1.0:
            raise BadRange(f"damping must lie in [0, 1), got {self.damping}")
        if self.prior is not None and not 0.0 < self.prior < 1.0:
            raise BadRange(f"prior must lie in (0, 1), got {self.prior}")


@dataclass(frozen=True, eq=False)
class Marginals:
    """Per-subject posterior defect probabilities and the iterations used."""

    p1: np.ndarray
    iterations: int


def _conv_forward(dist: np.ndarray, v0: np.ndarray, v1: np.ndarray, c: int) -> np.ndarray:
    """Distribution of (partial sum + c * w) for one more neighbor."""
    out = dist * v0[:, None]
    if c:
        out[:, c:] += dist[:, :-c] * v1[:, None]
    else:
        out += dist * v1[:, None]
    return out


def _value_backward(val: np.ndarray, v0: np.ndarray, v1: np.ndarray, c: int) -> np.ndarray:
    """Expected downstream weight after absorbing one more neighbor."""
    out = val * v0[:, None]
    if c:
        out[:, : val.shape[1] - c] += val[:, c:] * v1[:, None]
    else:
        out += val * v1[:, None]
    return out


def bp_decode_batch(
    C,
    params: CodeParams,
    Z,
    noise: NoiseModel = NoiseModel(),
    d: int | None = None,
    cfg: BpConfig = BpConfig(),
) -> Marginals:
    """Sum-product decoding of many result vectors against one code.

    Z has one row per trial. Tests are factor nodes and subjects variable
    nodes; a factor's likelihood depends on the weighted sum of its
    neighbors' indicators, so its outgoing messages are computed by exact
    dynamic programming over that partial-sum distribution rather than by
    enumerating neighbor configurations. Messages are renormalized every
    update; variable-side products run in log domain.

    Returns Marginals with p1 of shape (trials, n).
    """
    validate_params(params)
    C = check_matrix(C, params.q)
    Z = np.asarray(Z, dtype=np.int64)
    if Z.ndim != 2 or Z.shape[1] != C.shape[0]:
        raise BadRange(f"Z must be (trials, m={C.shape[0]}), got {Z.shape}")
    if Z.size and (Z.min() < 0 or Z.max() > params.Q - 1):
        raise BadRange(f"results must lie in 0..{params.Q - 1}")
    m, n = C.shape
    T = Z.shape[0]
    if d is None:
        d = params.u
    p_prior = cfg.prior if cfg.prior is not None else d / n
    if not 0.0 < p_prior < 1.0:
        raise BadRange(f"defect prior must lie in (0, 1), got {p_prior}")
    log_prior = np.log(np.array([1.0 - p_prior, p_prior]))

    trans = channel_matrix(params.Q, noise)  # [y, z]
    eta = np.asarray(params.eta, dtype=np.int64)

    nbr = [np.nonzero(C[t] > 0)[0] for t in range(m)]
    coeffs = [C[t, nbr[t]] for t in range(m)]
    efac = np.concatenate([np.full(len(nbr[t]), t) for t in range(m)]) if m else np.empty(0, int)
    evar = np.concatenate(nbr) if m else np.empty(0, dtype=np.int64)
    E = len(evar)
    starts = np.zeros(m + 1, dtype=np.int64)
    for t in range(m):
        starts[t + 1] = starts[t] + len(nbr[t])

    # per-factor likelihood of each reachable partial sum, fixed across iterations
    weights = []
    for t in range(m):
        S = int(coeffs[t].sum())
        buckets = np.searchsorted(eta, np.arange(S + 1), side="right") - 1
        valid = np.arange(S + 1) < eta[-1]
        w = np.zeros((T, S + 1))
        w[:, valid] = trans[buckets[valid]][:, Z[:, t]].T
        weights.append(w)

    V = np.full((T, E, 2), 0.5)
    F = np.full((T, E, 2), 0.5)
    iterations = 0
    for _ in range(cfg.max_iters):
        iterations += 1
        F_new = np.empty_like(F)
        for t in range(m):
            lo, hi = int(starts[t]), int(starts[t + 1])
            k = hi - lo
            if k == 0:
                continue
            ct = coeffs[t]
            w = weights[t]
            S = w.shape[1] - 1
            Vt = V[:, lo:hi, :]
            # forward-backward over the neighbor chain: prefix[a] is the
            # partial-sum distribution of neighbors < a, back[a] the expected
            # likelihood over neighbors > a as a function of the partial sum
            prefix = np.zeros((T, S + 1))
            prefix[:, 0] = 1.0
            prefixes = [prefix]
            for b in range(k - 1):
                prefixes.append(
                    _conv_forward(prefixes[-1], Vt[:, b, 0], Vt[:, b, 1], int(ct[b]))
                )
            back = w
            backs = [back]
            for b in range(k - 1, 0, -1):
                backs.append(_value_backward(backs[-1], Vt[:, b, 0], Vt[:, b, 1], int(ct[b])))
            backs.reverse()
            for a in range(k):
                combined = prefixes[a] * backs[a]
                ca = int(ct[a])
                msg0 = combined.sum(axis=1)
                msg1 = (prefixes[a][:, : S + 1 - ca] * backs[a][:, ca:]).sum(axis=1)
                F_new[:, lo + a, 0] = msg0
                F_new[:, lo + a, 1] = msg1
        norm = F_new.sum(axis=2)
        if np.any(norm == 0.0):
            raise NumericalUnderflow("a factor message lost all probability mass")
        F_new /= norm[:, :, None]
        F = cfg.damping * F + (1.0 - cfg.damping) * F_new if cfg.damping else F_new

        logF = np.log(np.maximum(F, _MSG_FLOOR))
        acc = np.zeros((n, T, 2))
        np.add.at(acc, evar, logF.transpose(1, 0, 2))
        SV = acc.transpose(1, 0, 2)  # (T, n, 2) sums of incoming logs per variable
        V_log = log_prior + SV[:, evar, :] - logF
        V_log -= V_log.max(axis=2, keepdims=True)
        V_new = np.exp(V_log)
        V_new /= V_new.sum(axis=2, keepdims=True)
        np.clip(V_new, _VAR_FLOOR, None, out=V_new)
        V_new /= V_new.sum(axis=2, keepdims=True)
        delta = np.abs(V_new - V).max() if E else 0.0
        V = V_new
        if cfg.tol is not None and delta < cfg.tol:
            break

    logF = np.log(np.maximum(F, _MSG_FLOOR))
    acc = np.zeros((n, T, 2))
    np.add.at(acc, evar, logF.transpose(1, 0, 2))
    marg_log = log_prior + acc.transpose(1, 0, 2)
    marg_log -= marg_log.max(axis=2, keepdims=True)
    marg = np.exp(marg_log)
    marg /= marg.sum(axis=2, keepdims=True)
    return Marginals(p1=marg[:, :, 1], iterations=iterations)


def bp_decode(
    C,
    params: CodeParams,
    z,
    noise: NoiseModel = NoiseModel(),
    d: int | None = None,
    cfg: BpConfig = BpConfig(),
) -> Marginals:
    """Sum-product decoding of a single result vector; see bp_decode_batch."""
    z = np.asarray(z, dtype=np.int64)
    out = bp_decode_batch(C, params, z[None, :], noise, d=d, cfg=cfg)
    return Marginals(p1=out.p1[0], iterations=out.iterations)


def select_threshold(marginals: Marginals) -> tuple[int, ...]:
    """Subjects whose posterior defect probability strictly exceeds 1/2."""
    return tuple(int(i) + 1 for i in np.nonzero(marginals.p1 > 0.5)[0])


def select_topd(marginals: Marginals, d: int) -> tuple[int, ...]:
    """The d subjects with the largest marginals; ties go to smaller indices."""
    n = marginals.p1.shape[0]
    if not 0 <= d <= n:
        raise BadD(f"d must lie in 0..{n}, got {d}")
    order = np.argsort(-marginals.p1, kind="stable")
    return tuple(sorted(int(i) + 1 for i in order[:d]))
