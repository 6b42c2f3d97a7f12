"""Matrix arithmetic for identifiability testing, exact and floating.

Two scalar variants that never mix inside one matrix:

* exact: integers modulo the prime 2^61 - 1, held as plain Python ints in
  lists of lists.  Rank and determinant answers are exact per sample, and
  the probability that a random sample misses the generic value is bounded
  by Schwartz-Zippel.  Every verdict rests on this variant only.
* float: numpy complex128 arrays, used solely to verify the truncated
  power-series expansion of the closed loop, where convergence (spectral
  radius below 1) matters.  Float results never feed a verdict.

The identifiability test is a polynomial identity in the edge values, so
drawing the values from a large prime field instead of the complex numbers
decides the same rank/determinant dichotomy; the field is a test device,
not a model of the signals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .netmodel import NetworkModel, NotSquareError, separate

__all__ = [
    "PRIME",
    "DEFAULT_TRIALS",
    "RESAMPLE_BUDGET",
    "SingularMatrixError",
    "AllSamplesSingularError",
    "Evaluation",
    "random_field_evaluation",
    "random_float_evaluation",
    "network_matrix",
    "closed_loop",
    "neumann_series",
    "inf_norm",
    "sensitivity_matrix",
    "identity_field",
    "mat_mul_field",
    "rank_field",
    "det_field",
    "kernel_field",
    "generic_rank",
    "generic_det_nonzero",
]

PRIME = (1 << 61) - 1
DEFAULT_TRIALS = 5
RESAMPLE_BUDGET = 10


class SingularMatrixError(ArithmeticError):
    """I - G is not invertible at this sample; the caller should resample."""


class AllSamplesSingularError(ArithmeticError):
    """Every trial exhausted its resample budget on singular samples."""


@dataclass(frozen=True)
class Evaluation:
    """A network together with one concrete value per edge.

    Known and unknown edges alike get random values: identifiability is a
    generic property over all nonzero entries, and "known" only means the
    identification procedure is told the value, not that the value is a
    fixed constant of the problem class.
    """

    net: NetworkModel
    values: dict
    mode: str  # "exact" | "float"


def random_field_evaluation(net: NetworkModel, rng: np.random.Generator) -> Evaluation:
    """Draw a nonzero field element for every edge."""
    values = {e: int(rng.integers(1, PRIME)) for e in net.edges}
    return Evaluation(net=net, values=values, mode="exact")


def random_float_evaluation(
    net: NetworkModel, rng: np.random.Generator, norm_bound: float = 0.5
) -> Evaluation:
    """Draw real values, then rescale so the row-sum norm of G stays below ``norm_bound``.

    The row-sum norm dominates the spectral radius, so the bound keeps the
    closed-loop power series convergent without touching the zero pattern.
    """
    values = {e: complex(rng.standard_normal()) for e in net.edges}
    ev = Evaluation(net=net, values=values, mode="float")
    norm = inf_norm(network_matrix(ev))
    while norm > norm_bound:
        # shave a few ulps so rounding in the row sums cannot land back above
        scale = norm_bound / norm * (1.0 - 4e-16)
        values = {e: v * scale for e, v in values.items()}
        ev = Evaluation(net=net, values=values, mode="float")
        norm = inf_norm(network_matrix(ev))
    return ev


def network_matrix(ev: Evaluation):
    """n x n matrix with entry [i, j] = value of edge j->i, 0 where absent.

    Exact mode returns a list of lists of ints; float mode a complex array.
    """
    n = ev.net.n
    if ev.mode == "exact":
        G = [[0] * n for _ in range(n)]
        for e in ev.net.edges:
            G[e.dst][e.src] = ev.values[e] % PRIME
        return G
    G = np.zeros((n, n), dtype=complex)
    for e in ev.net.edges:
        G[e.dst, e.src] = ev.values[e]
    return G


def identity_field(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul_field(A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        Ai = A[i]
        row = out[i]
        for k in range(inner):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(cols):
                    row[j] = (row[j] + a * Bk[j]) % PRIME
    return out


def _invert_field(M: list[list[int]]) -> list[list[int]]:
    """Gauss-Jordan inverse modulo PRIME; raises SingularMatrixError."""
    n = len(M)
    aug = [[x % PRIME for x in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMatrixError("matrix not invertible over the prime field")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, PRIME)
        aug[col] = [(x * inv) % PRIME for x in aug[col]]
        prow = aug[col]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % PRIME for x, y in zip(aug[r], prow)]
    return [row[n:] for row in aug]


def closed_loop(G):
    """(I - G)^{-1} in the scalar variant of G.

    Exact (list of lists): exact field inverse.  Float (ndarray): solved to
    machine precision.  Raises SingularMatrixError when I - G is not
    invertible, a non-generic sample the caller should redraw.
    """
    if isinstance(G, np.ndarray):
        n = G.shape[0]
        A = np.eye(n, dtype=complex) - G
        try:
            T = np.linalg.solve(A, np.eye(n, dtype=complex))
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError(str(exc)) from exc
        if not np.all(np.isfinite(T)):
            raise SingularMatrixError("non-finite entries in closed loop")
        return T
    n = len(G)
    M = [[(-G[i][j]) % PRIME if i != j else (1 - G[i][j]) % PRIME for j in range(n)] for i in range(n)]
    return _invert_field(M)


def neumann_series(G: NDArray, terms: int) -> NDArray:
    """I + G + G^2 + ... + G^terms; converges to the closed loop when the spectral radius is below 1."""
    n = G.shape[0]
    total = np.eye(n, dtype=complex)
    power = np.eye(n, dtype=complex)
    for _ in range(terms):
        power = power @ G
        total = total + power
        if not power.any():
            break
    return total


def inf_norm(G: NDArray) -> float:
    """Row-sum norm; an upper bound on the spectral radius."""
    if G.size == 0:
        return 0.0
    return float(np.abs(G).sum(axis=1).max())


def sensitivity_matrix(net: NetworkModel, T_left, T_right):
    """The derivative of the measured closed-loop map with respect to the unknown edges.

    Rows are (excitation, measurement) pairs at flat index
    b_idx * n_measured + c_idx; columns are the unknown edges in canonical
    edge-list order.  Entry at row (b, c), column for unknown edge a is
    T_left[c, head(a)] * T_right[tail(a), b]: T_left propagates the edge's
    head to the measurement, T_right the excitation to its tail.  The local
    test uses T_left = T_right; the decoupled test feeds two independently
    sampled closed loops.
    """
    unknowns = net.unknown_edges
    exact = not isinstance(T_left, np.ndarray)
    rows = net.n_excited * net.n_measured
    if exact:
        K = [[0] * len(unknowns) for _ in range(rows)]
    else:
        K = np.zeros((rows, len(unknowns)), dtype=complex)
    for bi, b in enumerate(net.excited):
        for ci, c in enumerate(net.measured):
            r = bi * net.n_measured + ci
            for k, e in enumerate(unknowns):
                if exact:
                    K[r][k] = (T_left[c][e.dst] * T_right[e.src][b]) % PRIME
                else:
                    K[r][k] = T_left[c][e.dst] * T_right[e.src][b]
    return K


def rank_field(A: list[list[int]]) -> int:
    """Rank over the prime field by Gaussian elimination."""
    if not A or not A[0]:
        return 0
    rows = [[x % PRIME for x in row] for row in A]
    nrows, ncols = len(rows), len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, PRIME)
        prow = rows[rank]
        for r in range(rank + 1, nrows):
            if rows[r][col]:
                f = (rows[r][col] * inv) % PRIME
                rows[r] = [(x - f * y) % PRIME for x, y in zip(rows[r], prow)]
        rank += 1
        if rank == nrows:
            break
    return rank


def det_field(A: list[list[int]]) -> int:
    """Determinant over the prime field; 0 on singular input."""
    n = len(A)
    if n == 0:
        return 1
    rows = [[x % PRIME for x in row] for row in A]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = PRIME - det
        pivot = rows[col][col]
        det = (det * pivot) % PRIME
        inv = pow(pivot, -1, PRIME)
        prow = rows[col]
        for r in range(col + 1, n):
            if rows[r][col]:
                f = (rows[r][col] * inv) % PRIME
                rows[r] = [(x - f * y) % PRIME for x, y in zip(rows[r], prow)]
    return det % PRIME


def kernel_field(A: list[list[int]]) -> list[list[int]]:
    """Basis of the right null space over the prime field (one vector per free column)."""
    if not A or not A[0]:
        return []
    rows = [[x % PRIME for x in row] for row in A]
    nrows, ncols = len(rows), len(rows[0])
    pivot_cols: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, PRIME)
        rows[rank] = [(x * inv) % PRIME for x in rows[rank]]
        prow = rows[rank]
        for r in range(nrows):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(x - f * y) % PRIME for x, y in zip(rows[r], prow)]
        pivot_cols.append(col)
        rank += 1
    basis = []
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    for free in free_cols:
        vec = [0] * ncols
        vec[free] = 1
        for r, pc in enumerate(pivot_cols):
            vec[pc] = (-rows[r][free]) % PRIME
        basis.append(vec)
    return basis


def _sample_sensitivity(net: NetworkModel, rng: np.random.Generator, decoupled: bool):
    """One exact sample of the sensitivity matrix, resampling singular draws.

    Returns None when the resample budget is exhausted.
    """
    for _ in range(RESAMPLE_BUDGET):
        ev_left = random_field_evaluation(net, rng)
        try:
            T_left = closed_loop(network_matrix(ev_left))
            if decoupled:
                ev_right = random_field_evaluation(net, rng)
                T_right = closed_loop(network_matrix(ev_right))
            else:
                T_right = T_left
        except SingularMatrixError:
            continue
        return sensitivity_matrix(net, T_left, T_right)
    return None


def generic_rank(
    net: NetworkModel,
    *,
    decoupled: bool = False,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> tuple[int, int]:
    """(max rank of the sensitivity matrix over random samples, unknown-edge count).

    The rank of the sensitivity matrix, as a function of the edge values,
    attains its maximum off a proper algebraic subset, so the max over a few
    random field samples is the generic rank except with probability bounded
    by Schwartz-Zippel.  Decoupled mode draws two independent evaluations
    per trial, one per closed-loop factor.  Deterministic in (net, decoupled,
    trials, seed).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    best = -1
    for _ in range(trials):
        K = _sample_sensitivity(net, rng, decoupled)
        if K is not None:
            best = max(best, rank_field(K))
    if best < 0:
        raise AllSamplesSingularError(
            f"all {trials} trials exhausted {RESAMPLE_BUDGET} resamples on singular closed loops"
        )
    return best, net.m_unknown


def generic_det_nonzero(net: NetworkModel, trials: int = DEFAULT_TRIALS, seed: int = 0) -> bool:
    """Whether det of the (square) sensitivity matrix is nonzero at some random sample.

    True means the determinant is generically nonzero; false means it
    vanished at every sample, which by the generic dichotomy makes it
    identically zero up to the Schwartz-Zippel failure probability.
    Requires a separable network with one unknown edge per (excitation,
    measurement) pair.
    """
    separate(net)
    if not net.is_square:
        raise NotSquareError(net)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    sampled = False
    for _ in range(trials):
        K = _sample_sensitivity(net, rng, decoupled=False)
        if K is None:
            continue
        sampled = True
        if det_field(K) != 0:
            return True
    if not sampled:
        raise AllSamplesSingularError(
            f"all {trials} trials exhausted {RESAMPLE_BUDGET} resamples on singular closed loops"
        )
    return False
