"""Core domain types and the quantized-adder test channel.

A test matrix is a plain integer ndarray of shape (m, n) with entries in
0..q-1; a syndrome is a length-m integer vector over 0..Q-1. Subjects are
numbered 1..n in every public interface (column j of the matrix belongs to
subject j+1); 0-based indices appear only inside implementation code.

All operations here are pure functions of their inputs. Stochastic ones take
an explicit seed and are bit-reproducible.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadRange,
    LengthMismatch,
    SentinelTooSmall,
    SumOutOfRange,
    ThresholdNotIncreasing,
)
from .rng import make_rng

__all__ = [
    "CodeParams",
    "NoiseModel",
    "NOISELESS",
    "validate_params",
    "check_matrix",
    "quantize_sums",
    "sq_sum",
    "syndrome",
    "includes",
    "apply_noise",
    "channel_matrix",
]


@dataclass(frozen=True)
class CodeParams:
    """Bracket parameters [q; Q; eta; (l:u); e] governing a code.

    q is the test-matrix alphabet size (entries in 0..q-1), Q the output
    alphabet size, eta the Q+1 thresholds eta_0..eta_Q including the
    sentinel, l..u the range of defective counts the code must resolve, and
    e the number of correctable errors in the result vector.
    """

    q: int
    Q: int
    eta: tuple[int, ...]
    l: int = 1
    u: int = 1
    e: int = 0

    @classmethod
    def equidistant(cls, q: int, eta_step: int, l: int, u: int, e: int = 0) -> "CodeParams":
        """Uniform-quantizer parameters with the smallest valid sentinel."""
        if eta_step < 1:
            raise BadRange(f"eta step must be >= 1, got {eta_step}")
        Q = max(2, (q - 1) * u // eta_step + 1)
        return cls(q=q, Q=Q, eta=tuple(r * eta_step for r in range(Q + 1)), l=l, u=u, e=e)

    @property
    def is_equidistant(self) -> bool:
        step = self.eta[1]
        return all(self.eta[r] == r * step for r in range(len(self.eta)))

    @property
    def eta_step(self) -> int | None:
        return self.eta[1] if self.is_equidistant else None

    def __str__(self) -> str:
        eta = ",".join(str(t) for t in self.eta)
        return f"[{self.q};{self.Q};({eta});({self.l}:{self.u});{self.e}]"


def validate_params(p: CodeParams) -> None:
    """Raise unless every CodeParams invariant holds."""
    if p.q < 2 or p.Q < 2:
        raise BadRange(f"alphabet sizes must be >= 2, got q={p.q}, Q={p.Q}")
    if p.e < 0:
        raise BadRange(f"error budget must be >= 0, got e={p.e}")
    if not (1 <= p.l <= p.u):
        raise BadRange(f"need 1 <= l <= u, got l={p.l}, u={p.u}")
    if len(p.eta) != p.Q + 1:
        raise ThresholdNotIncreasing(
            f"expected {p.Q + 1} thresholds for Q={p.Q}, got {len(p.eta)}"
        )
    if p.eta[0] != 0:
        raise ThresholdNotIncreasing(f"eta_0 must be 0, got {p.eta[0]}")
    for r in range(p.Q):
        if p.eta[r + 1] <= p.eta[r]:
            raise ThresholdNotIncreasing(
                f"thresholds must strictly increase, "
                f"eta_{r}={p.eta[r]} vs eta_{r + 1}={p.eta[r + 1]}"
            )
    if p.eta[-1] <= (p.q - 1) * p.u:
        raise SentinelTooSmall(
            f"sentinel eta_Q={p.eta[-1]} must exceed (q-1)*u={(p.q - 1) * p.u}"
        )


@dataclass(frozen=True)
class NoiseModel:
    """Substitution noise on test results: +1 w.p. gamma_p, -1 w.p. gamma_n.

    Boundary values saturate: 0 never moves down and Q-1 never moves up, so
    a result at 0 stays with probability 1 - gamma_p and a result at Q-1
    stays with probability 1 - gamma_n.
    """

    gamma_p: float = 0.0
    gamma_n: float = 0.0

    def __post_init__(self):
        if self.gamma_p < 0 or self.gamma_n < 0 or self.gamma_p + self.gamma_n > 1:
            raise BadRange(
                f"need gamma_p, gamma_n >= 0 and gamma_p + gamma_n <= 1, "
                f"got ({self.gamma_p}, {self.gamma_n})"
            )


NOISELESS = NoiseModel(0.0, 0.0)


def check_matrix(C, q: int | None = None) -> np.ndarray:
    """Coerce to an (m, n) int64 matrix, checking the entry range."""
    arr = np.asarray(C, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise BadRange(f"expected a 2-D matrix with m, n >= 1, got shape {arr.shape}")
    if arr.min() < 0:
        raise BadRange("matrix entries must be nonnegative")
    if q is not None and arr.max() > q - 1:
        raise BadRange(f"matrix entries must be < q={q}, found {arr.max()}")
    return arr


def quantize_sums(sums, eta, strict: bool = True) -> np.ndarray:
    """Map integer sums to threshold buckets: r such that eta_r <= s < eta_{r+1}.

    With strict=True a sum at or above the sentinel raises SumOutOfRange,
    signalling a violated sentinel assumption.
    """
    sums = np.asarray(sums, dtype=np.int64)
    eta_arr = np.asarray(eta, dtype=np.int64)
    if strict and sums.size and sums.max() >= eta_arr[-1]:
        raise SumOutOfRange(
            f"coordinate sum {int(sums.max())} reached sentinel {int(eta_arr[-1])}"
        )
    return np.searchsorted(eta_arr, sums, side="right") - 1


def sq_sum(vectors, eta, m: int | None = None) -> np.ndarray:
    """SQ-sum of a collection of codewords: quantized coordinate-wise sum.

    vectors is an iterable of equal-length integer vectors (possibly empty;
    pass m to fix the length in that case). Coordinate k of the result is
    the bucket r with eta_r <= sum_j x_j(k) < eta_{r+1}. For equidistant
    thresholds this equals floor(sum / eta_step).
    """
    vecs = [np.asarray(v, dtype=np.int64) for v in vectors]
    if not vecs:
        if m is None:
            raise LengthMismatch("empty codeword set needs an explicit length m")
        return np.zeros(m, dtype=np.int64)
    lengths = {v.shape[-1] for v in vecs}
    if len(lengths) != 1 or any(v.ndim != 1 for v in vecs):
        raise LengthMismatch(f"codewords must be 1-D and equal length, got {lengths}")
    if m is not None and vecs[0].shape[0] != m:
        raise LengthMismatch(f"codewords have length {vecs[0].shape[0]}, expected {m}")
    return quantize_sums(np.sum(vecs, axis=0), eta)


def syndrome(C, subjects, eta) -> np.ndarray:
    """Syndrome of a set of subjects (1-based indices) under matrix C."""
    C = np.asarray(C, dtype=np.int64)
    idx = sorted(set(int(s) for s in subjects))
    if idx and (idx[0] < 1 or idx[-1] > C.shape[1]):
        raise BadRange(f"subject indices must lie in 1..{C.shape[1]}, got {idx}")
    if not idx:
        return np.zeros(C.shape[0], dtype=np.int64)
    return quantize_sums(C[:, [i - 1 for i in idx]].sum(axis=1), eta)


def includes(a, b) -> bool:
    """Coordinate-wise inclusion: True iff a(i) <= b(i) for all i."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise LengthMismatch(f"syndromes differ in shape: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b))


def apply_noise(y, Q: int, noise: NoiseModel, seed) -> np.ndarray:
    """Pass a syndrome through the substitution channel; reproducible per seed.

    Each coordinate moves independently: +1 with probability gamma_p, -1
    with probability gamma_n, except that 0 never moves down and Q-1 never
    moves up. The output always stays inside 0..Q-1.
    """
    y = np.asarray(y, dtype=np.int64)
    if y.size and (y.min() < 0 or y.max() > Q - 1):
        raise BadRange(f"syndrome values must lie in 0..{Q - 1}")
    u = make_rng(seed).random(y.shape)
    up = (u < noise.gamma_p) & (y < Q - 1)
    down = (u >= noise.gamma_p) & (u < noise.gamma_p + noise.gamma_n) & (y > 0)
    return y + up.astype(np.int64) - down.astype(np.int64)


def channel_matrix(Q: int, noise: NoiseModel) -> np.ndarray:
    """Transition matrix P with P[y, z] = probability of observing z given y."""
    if Q < 2:
        raise BadRange(f"output alphabet must have Q >= 2, got {Q}")
    P = np.zeros((Q, Q))
    for y in range(Q):
        up = noise.gamma_p if y < Q - 1 else 0.0
        down = noise.gamma_n if y > 0 else 0.0
        P[y, y] = 1.0 - up - down
        if y < Q - 1:
            P[y, y + 1] = up
        if y > 0:
            P[y, y - 1] = down
    return P
