"""Identifiability verdicts for the unknown edges of a network.

Three notions, each decided by a randomized exact test on the sensitivity
matrix:

* local-generic: the unknown edges are locally recoverable from the
  excitation-to-measurement map at almost every choice of edge values.
  Decided by the generic rank of the sensitivity matrix (full rank or not,
  a dichotomy).
* decoupled-generic: recoverability when the two closed-loop factors
  surrounding the unknown-edge perturbation vary independently.  A
  necessary condition for the local notion, and exactly what the 2n-node
  decoupled construction turns into a separable problem.
* global-separable: for separable networks the local and global questions
  coincide, and a nonzero generic determinant of the (square) sensitivity
  matrix certifies global identifiability.

Every verdict carries its evidence (rank, trial count, seed, witness), so a
decision can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .netmodel import NetworkModel, NotSquareError, decouple, separate, validate
from .numeric import DEFAULT_TRIALS, generic_det_nonzero, generic_rank

__all__ = [
    "IDENTIFIABLE",
    "NOT_IDENTIFIABLE",
    "INCONCLUSIVE",
    "LOCAL_GENERIC",
    "DECOUPLED_GENERIC",
    "GLOBAL_SEPARABLE",
    "NoUnknownEdgesError",
    "Verdict",
    "local_identifiability",
    "decoupled_identifiability",
    "separable_global_identifiability",
    "check_decoupling_equivalence",
]

IDENTIFIABLE = "identifiable"
NOT_IDENTIFIABLE = "not-identifiable"
INCONCLUSIVE = "inconclusive"

LOCAL_GENERIC = "local-generic"
DECOUPLED_GENERIC = "decoupled-generic"
GLOBAL_SEPARABLE = "global-separable"


class NoUnknownEdgesError(ValueError):
    """Identifiability queries need at least one unknown edge."""

    def __init__(self):
        super().__init__("network has no unknown edges; nothing to identify")


@dataclass(frozen=True)
class Verdict:
    """Decision plus the evidence needed to replay it.

    ``rank`` is set by the rank-based notions, ``max_degree``/``exhaustive``
    by the walk-counting route.  ``witness`` is a small JSON-ready dict:
    structurally zero columns, a surviving monomial with its walks, or the
    unknown edges no walk can serve.
    """

    decision: str
    notion: str
    m_unknown: int
    trials: int | None = None
    seed: int | None = None
    rank: int | None = None
    max_degree: int | None = None
    exhaustive: bool | None = None
    witness: dict | None = None

    def to_dict(self) -> dict:
        out = {"decision": self.decision, "notion": self.notion, "unknown_edges": self.m_unknown}
        for key in ("trials", "seed", "rank", "max_degree", "exhaustive", "witness"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


def _require_unknowns(net: NetworkModel) -> None:
    if net.m_unknown == 0:
        raise NoUnknownEdgesError()


def _structural_zero_columns(net: NetworkModel) -> list[str]:
    """Unknown edges whose sensitivity column is zero for every edge value.

    The column for an unknown edge is a product of two closed-loop entries:
    excitation to the edge's tail, and the edge's head to a measurement.
    Either factor is identically zero exactly when the corresponding walk
    does not exist, so a reachability sweep finds the structural zeros.
    """
    fwd: dict[int, list[int]] = {}
    bwd: dict[int, list[int]] = {}
    for e in net.edges:
        fwd.setdefault(e.src, []).append(e.dst)
        bwd.setdefault(e.dst, []).append(e.src)

    def sweep(starts, adj):
        seen = set(starts)
        stack = list(starts)
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    from_excited = sweep(net.excited, fwd)
    to_measured = sweep(net.measured, bwd)
    return [
        str(e)
        for e in net.unknown_edges
        if e.src not in from_excited or e.dst not in to_measured
    ]


def _rank_verdict(net: NetworkModel, notion: str, rank: int, trials: int, seed: int) -> Verdict:
    m = net.m_unknown
    if rank == m:
        return Verdict(IDENTIFIABLE, notion, m_unknown=m, trials=trials, seed=seed, rank=rank)
    witness = None
    zero_cols = _structural_zero_columns(net)
    if zero_cols:
        witness = {"zero_columns": zero_cols}
    return Verdict(NOT_IDENTIFIABLE, notion, m_unknown=m, trials=trials, seed=seed, rank=rank, witness=witness)


def local_identifiability(net: NetworkModel, trials: int = DEFAULT_TRIALS, seed: int = 0) -> Verdict:
    """Generic local identifiability: full generic rank of the sensitivity matrix.

    The rank is either full for almost all edge values or deficient for all
    of them, so the sampled maximum decides the question outright; there is
    no inconclusive outcome on this route.
    """
    validate(net)
    _require_unknowns(net)
    rank, _ = generic_rank(net, decoupled=False, trials=trials, seed=seed)
    return _rank_verdict(net, LOCAL_GENERIC, rank, trials, seed)


def decoupled_identifiability(net: NetworkModel, trials: int = DEFAULT_TRIALS, seed: int = 0) -> Verdict:
    """Generic decoupled identifiability: the two closed-loop factors sampled independently."""
    validate(net)
    _require_unknowns(net)
    rank, _ = generic_rank(net, decoupled=True, trials=trials, seed=seed)
    return _rank_verdict(net, DECOUPLED_GENERIC, rank, trials, seed)


def separable_global_identifiability(net: NetworkModel, trials: int = DEFAULT_TRIALS, seed: int = 0) -> Verdict:
    """Global identifiability for separable square networks via the generic determinant.

    Refuses non-separable input rather than falling back to the local test:
    the global claim is only licensed by the separable block structure,
    where local and global identifiability coincide.
    """
    validate(net)
    _require_unknowns(net)
    separate(net)
    if not net.is_square:
        raise NotSquareError(net)
    nonzero = generic_det_nonzero(net, trials=trials, seed=seed)
    m = net.m_unknown
    if nonzero:
        return Verdict(IDENTIFIABLE, GLOBAL_SEPARABLE, m_unknown=m, trials=trials, seed=seed)
    witness = None
    zero_cols = _structural_zero_columns(net)
    if zero_cols:
        witness = {"zero_columns": zero_cols}
    return Verdict(NOT_IDENTIFIABLE, GLOBAL_SEPARABLE, m_unknown=m, trials=trials, seed=seed, witness=witness)


def check_decoupling_equivalence(net: NetworkModel, trials: int = DEFAULT_TRIALS, seed: int = 0) -> bool:
    """Whether the decoupled verdict matches the global verdict of the decoupled form.

    The 2n-node decoupled construction is separable and square whenever the
    source network is square, and its sensitivity matrix coincides entry by
    entry with the decoupled-mode sensitivity matrix of the source, so the
    two decisions are expected to agree on every network.
    """
    direct = decoupled_identifiability(net, trials=trials, seed=seed)
    via_construction = separable_global_identifiability(decouple(net), trials=trials, seed=seed)
    return direct.decision == via_construction.decision
