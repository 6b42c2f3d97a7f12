"""Walk enumeration and signed monomial counting for separable networks.

For a separable network with one unknown edge per (excitation, measurement)
pair, the determinant of the sensitivity matrix expands as a signed sum
over collections of excitation-to-measurement walks: one walk through each
unknown edge, no two walks sharing the same (excitation, measurement)
pair.  Each collection contributes the parity of its pairing to the
repetition count of its monomial, the multiset of known edges it
traverses (the unknown edges index the collection and are not factors).
The network is identifiable exactly when some monomial keeps a nonzero
count after all cancellations.

Walks may repeat edges, so cyclic known blocks admit walks of every
length.  Enumeration is therefore bounded by total monomial degree; the
table is exact for every degree it covers, and the verdict is final only
when the enumeration is provably complete (acyclic blocks, or an unknown
edge no walk can reach at all).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .identifiability import (
    DECOUPLED_GENERIC,
    GLOBAL_SEPARABLE,
    IDENTIFIABLE,
    INCONCLUSIVE,
    NOT_IDENTIFIABLE,
    NoUnknownEdgesError,
    Verdict,
)
from .netmodel import (
    Edge,
    NetworkModel,
    NotSquareError,
    SeparableBlocks,
    decouple,
    separate,
    validate,
)

__all__ = [
    "Monomial",
    "monomial_of",
    "monomial_degree",
    "format_monomial",
    "Walk",
    "walk_nodes",
    "format_walk",
    "NotBijectiveError",
    "Assignment",
    "sign_of",
    "PathCollection",
    "collection_assignment",
    "collection_monomial",
    "collection_sign",
    "enumerate_walks",
    "RepetitionTable",
    "repetition_table",
    "exhaustive_degree_bound",
    "verdict_from_table",
    "combinatorial_verdict",
    "necessary_condition_any_topology",
]

# Canonical monomial form: ((edge index, multiplicity), ...) sorted by edge
# index, multiplicities >= 1.  Edge indices refer to net.edges order.
Monomial = tuple[tuple[int, int], ...]


def monomial_of(edge_indices: Iterable[int]) -> Monomial:
    return tuple(sorted(Counter(edge_indices).items()))


def monomial_degree(mu: Monomial) -> int:
    return sum(mult for _, mult in mu)


def format_monomial(net: NetworkModel, mu: Monomial) -> str:
    if not mu:
        return "1"
    parts = []
    for idx, mult in mu:
        e = net.edges[idx]
        factor = f"g({e.src + 1}->{e.dst + 1})"
        parts.append(factor if mult == 1 else f"{factor}^{mult}")
    return "*".join(parts)


@dataclass(frozen=True)
class Walk:
    """One excitation-to-measurement walk through exactly one unknown edge.

    ``edges`` holds indices into net.edges, pivot included at position
    ``pivot_pos``; everything before it lies in the excited known block,
    everything after in the measured known block.  ``degree`` counts the
    known edges only.
    """

    edges: tuple[int, ...]
    start: int
    end: int
    pivot: int
    pivot_pos: int

    @property
    def degree(self) -> int:
        return len(self.edges) - 1

    def known_edge_indices(self) -> tuple[int, ...]:
        return self.edges[: self.pivot_pos] + self.edges[self.pivot_pos + 1 :]


def walk_nodes(net: NetworkModel, walk: Walk) -> list[int]:
    nodes = [walk.start]
    for idx in walk.edges:
        nodes.append(net.edges[idx].dst)
    return nodes


def format_walk(net: NetworkModel, walk: Walk) -> str:
    """1-based node sequence; the unknown edge is drawn as '=>'."""
    nodes = walk_nodes(net, walk)
    out = [str(nodes[0] + 1)]
    for pos, node in enumerate(nodes[1:]):
        out.append("=>" if pos == walk.pivot_pos else "->")
        out.append(str(node + 1))
    return " ".join(out)


class NotBijectiveError(ValueError):
    """The assignment does not pair the unknown edges with all (excitation, measurement) pairs."""


@dataclass(frozen=True)
class Assignment:
    """(excitation slot, measurement slot) per unknown edge, in canonical edge order.

    Slots are positions within the network's excited and measured lists, so
    the flat row index of a pair is excitation_slot * n_measured +
    measurement_slot, matching the sensitivity-matrix row order.
    """

    pairs: tuple[tuple[int, int], ...]
    n_measured: int


def _parity(rows: Sequence[int]) -> int:
    inversions = 0
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if rows[i] > rows[j]:
                inversions += 1
    return 1 if inversions % 2 == 0 else -1


def sign_of(assignment: Assignment) -> int:
    """Permutation parity of the map from canonical unknown-edge order to row order."""
    rows = [b * assignment.n_measured + c for b, c in assignment.pairs]
    if sorted(rows) != list(range(len(rows))):
        raise NotBijectiveError(
            "assignment must hit every (excitation, measurement) pair exactly once"
        )
    return _parity(rows)


@dataclass(frozen=True)
class PathCollection:
    """One walk per unknown edge, in canonical edge order."""

    walks: tuple[Walk, ...]


def collection_assignment(net: NetworkModel, collection: PathCollection) -> Assignment:
    b_slot = {b: i for i, b in enumerate(net.excited)}
    c_slot = {c: i for i, c in enumerate(net.measured)}
    pairs = tuple((b_slot[w.start], c_slot[w.end]) for w in collection.walks)
    return Assignment(pairs=pairs, n_measured=net.n_measured)


def collection_monomial(collection: PathCollection) -> Monomial:
    return monomial_of(
        itertools.chain.from_iterable(w.known_edge_indices() for w in collection.walks)
    )


def collection_sign(net: NetworkModel, collection: PathCollection) -> int:
    return sign_of(collection_assignment(net, collection))


def _adjacency(net: NetworkModel, edges: Iterable[Edge]) -> dict[int, list[tuple[int, int]]]:
    idx_of = {e: i for i, e in enumerate(net.edges)}
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in edges:
        adj.setdefault(e.src, []).append((idx_of[e], e.dst))
    for lst in adj.values():
        lst.sort()
    return adj


def _walks_between(
    adj: dict[int, list[tuple[int, int]]], start: int, goal: int, bound: int
) -> list[tuple[int, ...]]:
    """All edge-index sequences from start to goal of length <= bound; repeats allowed."""
    out: list[tuple[int, ...]] = []
    path: list[int] = []

    def dfs(node: int, remaining: int) -> None:
        if node == goal:
            out.append(tuple(path))
        if remaining == 0:
            return
        for eidx, nxt in adj.get(node, ()):
            path.append(eidx)
            dfs(nxt, remaining - 1)
            path.pop()

    dfs(start, bound)
    return out


def enumerate_walks(
    net: NetworkModel,
    blocks: SeparableBlocks,
    pivot: Edge,
    max_prefix: int,
    max_suffix: int,
) -> list[Walk]:
    """All bounded walks through ``pivot``: excited block prefix, pivot, measured block suffix."""
    idx_of = {e: i for i, e in enumerate(net.edges)}
    pivot_idx = idx_of[pivot]
    adj_b = _adjacency(net, blocks.gb_edges)
    adj_c = _adjacency(net, blocks.gc_edges)
    walks: list[Walk] = []
    for b in net.excited:
        prefixes = _walks_between(adj_b, b, pivot.src, max_prefix)
        if not prefixes:
            continue
        for c in net.measured:
            for suffix in _walks_between(adj_c, pivot.dst, c, max_suffix):
                for prefix in prefixes:
                    walks.append(
                        Walk(
                            edges=prefix + (pivot_idx,) + suffix,
                            start=b,
                            end=c,
                            pivot=pivot_idx,
                            pivot_pos=len(prefix),
                        )
                    )
    return walks


@dataclass(frozen=True)
class RepetitionTable:
    """Signed collection counts per monomial, up to a total-degree bound.

    Entries that cancelled to zero are retained: a cancellation is exactly
    the phenomenon the count is after.  ``exhaustive`` is true only when
    the enumeration provably covered every collection: both known blocks
    acyclic with the bound at least the longest possible collection degree,
    or some unknown edge admitting no walk at any length (so no collection
    exists at all; those edges are listed in ``infeasible_pivots``).
    """

    entries: dict[Monomial, int]
    max_degree: int
    exhaustive: bool
    infeasible_pivots: tuple[int, ...] = ()

    def sorted_items(self) -> list[tuple[Monomial, int]]:
        return sorted(self.entries.items(), key=lambda kv: (monomial_degree(kv[0]), kv[0]))


def _reachable(starts: Iterable[int], adj: dict[int, list[int]]) -> set[int]:
    seen = set(starts)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _topo_order(nodes: Iterable[int], edges: list[Edge]) -> list[int] | None:
    """Kahn topological order of the block subgraph, or None when it has a cycle."""
    nodes = list(nodes)
    indeg = {v: 0 for v in nodes}
    fwd: dict[int, list[int]] = {}
    for e in edges:
        fwd.setdefault(e.src, []).append(e.dst)
        indeg[e.dst] += 1
    ready = sorted(v for v in nodes if indeg[v] == 0)
    order = []
    while ready:
        u = ready.pop()
        order.append(u)
        for v in fwd.get(u, ()):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    return order if len(order) == len(nodes) else None


def _completeness(net: NetworkModel, blocks: SeparableBlocks) -> tuple[tuple[int, ...], int | None]:
    """(unknown edges with no walk at any bound, max collection degree or None if a block is cyclic)."""
    fwd_b: dict[int, list[int]] = {}
    for e in blocks.gb_edges:
        fwd_b.setdefault(e.src, []).append(e.dst)
    bwd_c: dict[int, list[int]] = {}
    for e in blocks.gc_edges:
        bwd_c.setdefault(e.dst, []).append(e.src)
    from_excited = _reachable(net.excited, fwd_b)
    to_measured = _reachable(net.measured, bwd_c)

    idx_of = {e: i for i, e in enumerate(net.edges)}
    infeasible = tuple(
        idx_of[e]
        for e in net.unknown_edges
        if e.src not in from_excited or e.dst not in to_measured
    )

    topo_b = _topo_order(blocks.b_part, list(blocks.gb_edges))
    topo_c = _topo_order(blocks.c_part, list(blocks.gc_edges))
    if topo_b is None or topo_c is None:
        return infeasible, None

    # Longest known-edge walk from an excitation to each node (excited block).
    longest_from = {v: (0 if v in set(net.excited) else None) for v in blocks.b_part}
    adj_b: dict[int, list[int]] = {}
    for e in blocks.gb_edges:
        adj_b.setdefault(e.src, []).append(e.dst)
    for u in topo_b:
        if longest_from[u] is None:
            continue
        for v in adj_b.get(u, ()):
            cand = longest_from[u] + 1
            if longest_from[v] is None or cand > longest_from[v]:
                longest_from[v] = cand

    # Longest known-edge walk from each node to a measurement (measured block).
    longest_to = {v: (0 if v in set(net.measured) else None) for v in blocks.c_part}
    adj_c_rev: dict[int, list[int]] = {}
    for e in blocks.gc_edges:
        adj_c_rev.setdefault(e.dst, []).append(e.src)
    for u in reversed(topo_c):
        if longest_to[u] is None:
            continue
        for v in adj_c_rev.get(u, ()):
            cand = longest_to[u] + 1
            if longest_to[v] is None or cand > longest_to[v]:
                longest_to[v] = cand

    bound = 0
    for e in net.unknown_edges:
        if idx_of[e] in infeasible:
            continue
        bound += longest_from[e.src] + longest_to[e.dst]
    return infeasible, bound


def exhaustive_degree_bound(net: NetworkModel) -> int | None:
    """Smallest degree bound making the table complete, or None when a known block is cyclic.

    Returns 0 when some unknown edge has no walk at all (the empty
    enumeration is already complete).
    """
    blocks = separate(net)
    infeasible, bound = _completeness(net, blocks)
    if infeasible:
        return 0
    return bound


def repetition_table(net: NetworkModel, max_degree: int) -> RepetitionTable:
    """Signed count of bounded walk collections per monomial.

    Depth-first product over per-unknown-edge walk lists with running-degree
    pruning and an incremental one-walk-per-(excitation, measurement)-pair
    check.  Counts for every monomial of degree <= max_degree are exact;
    raising the bound never changes them, it only adds higher entries.
    """
    blocks = separate(net)
    if not net.is_square:
        raise NotSquareError(net)
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")

    pivots = [i for i, e in enumerate(net.edges) if not e.known]
    m = len(pivots)
    walk_lists: list[list[Walk]] = []
    for i in pivots:
        ws = enumerate_walks(net, blocks, net.edges[i], max_degree, max_degree)
        ws = [w for w in ws if w.degree <= max_degree]
        ws.sort(key=lambda w: (w.degree, w.edges))
        walk_lists.append(ws)

    # Minimum attainable degree of the remaining unknown edges, for pruning.
    min_rest = [0] * (m + 1)
    for k in range(m - 1, -1, -1):
        least = walk_lists[k][0].degree if walk_lists[k] else 0
        min_rest[k] = min_rest[k + 1] + least

    b_slot = {b: i for i, b in enumerate(net.excited)}
    c_slot = {c: i for i, c in enumerate(net.measured)}
    n_c = net.n_measured

    entries: dict[Monomial, int] = {}
    rows: list[int] = []
    used: set[int] = set()
    acc: list[int] = []

    def dfs(k: int, degree_used: int) -> None:
        if k == m:
            mu = monomial_of(acc)
            entries[mu] = entries.get(mu, 0) + _parity(rows)
            return
        for w in walk_lists[k]:
            d = degree_used + w.degree
            if d + min_rest[k + 1] > max_degree:
                break
            row = b_slot[w.start] * n_c + c_slot[w.end]
            if row in used:
                continue
            used.add(row)
            rows.append(row)
            acc.extend(w.known_edge_indices())
            dfs(k + 1, d)
            if w.degree:
                del acc[-w.degree :]
            rows.pop()
            used.discard(row)

    if all(walk_lists):
        dfs(0, 0)

    infeasible, complete_bound = _completeness(net, blocks)
    exhaustive = bool(infeasible) or (complete_bound is not None and max_degree >= complete_bound)
    return RepetitionTable(
        entries=entries,
        max_degree=max_degree,
        exhaustive=exhaustive,
        infeasible_pivots=infeasible,
    )


def _witness_collection(
    net: NetworkModel,
    blocks: SeparableBlocks,
    mu: Monomial,
    want_sign: int,
    max_degree: int,
) -> PathCollection | None:
    """Lexicographically smallest collection with monomial mu and the given sign."""
    pivots = [i for i, e in enumerate(net.edges) if not e.known]
    m = len(pivots)
    walk_lists = []
    for i in pivots:
        ws = enumerate_walks(net, blocks, net.edges[i], max_degree, max_degree)
        ws = [w for w in ws if w.degree <= max_degree]
        ws.sort(key=lambda w: w.edges)
        walk_lists.append(ws)

    budget = Counter(dict(mu))
    b_slot = {b: i for i, b in enumerate(net.excited)}
    c_slot = {c: i for i, c in enumerate(net.measured)}
    n_c = net.n_measured
    rows: list[int] = []
    used: set[int] = set()
    chosen: list[Walk] = []

    def fits(w: Walk) -> bool:
        need = Counter(w.known_edge_indices())
        return all(budget[idx] >= cnt for idx, cnt in need.items())

    def dfs(k: int) -> PathCollection | None:
        if k == m:
            if sum(budget.values()) == 0 and _parity(rows) == want_sign:
                return PathCollection(walks=tuple(chosen))
            return None
        for w in walk_lists[k]:
            row = b_slot[w.start] * n_c + c_slot[w.end]
            if row in used or not fits(w):
                continue
            need = Counter(w.known_edge_indices())
            budget.subtract(need)
            used.add(row)
            rows.append(row)
            chosen.append(w)
            found = dfs(k + 1)
            chosen.pop()
            rows.pop()
            used.discard(row)
            budget.update(need)
            if found is not None:
                return found
        return None

    return dfs(0)


def verdict_from_table(net: NetworkModel, table: RepetitionTable) -> Verdict:
    """Decide identifiability from a repetition table, with an explicit witness.

    A surviving monomial proves identifiability outright.  An all-zero
    table refutes it only when the table is exhaustive; otherwise the
    outcome is inconclusive at this bound.
    """
    m = net.m_unknown
    surviving = [(mu, r) for mu, r in table.sorted_items() if r != 0]
    if surviving:
        mu, r = surviving[0]
        blocks = separate(net)
        want = 1 if r > 0 else -1
        coll = _witness_collection(net, blocks, mu, want, table.max_degree)
        witness = {"monomial": format_monomial(net, mu), "repetition": r}
        if coll is not None:
            witness["walks"] = [
                {"nodes": [v + 1 for v in walk_nodes(net, w)], "pivot": str(net.edges[w.pivot])}
                for w in coll.walks
            ]
        return Verdict(
            IDENTIFIABLE,
            GLOBAL_SEPARABLE,
            m_unknown=m,
            max_degree=table.max_degree,
            exhaustive=table.exhaustive,
            witness=witness,
        )
    if table.infeasible_pivots:
        witness = {"no_walk_pivots": [str(net.edges[i]) for i in table.infeasible_pivots]}
        return Verdict(
            NOT_IDENTIFIABLE,
            GLOBAL_SEPARABLE,
            m_unknown=m,
            max_degree=table.max_degree,
            exhaustive=True,
            witness=witness,
        )
    if table.exhaustive:
        return Verdict(
            NOT_IDENTIFIABLE,
            GLOBAL_SEPARABLE,
            m_unknown=m,
            max_degree=table.max_degree,
            exhaustive=True,
        )
    return Verdict(
        INCONCLUSIVE,
        GLOBAL_SEPARABLE,
        m_unknown=m,
        max_degree=table.max_degree,
        exhaustive=False,
    )


def combinatorial_verdict(net: NetworkModel, max_degree: int | None = None) -> Verdict:
    """Identifiability of a separable square network by signed walk counting.

    Default degree bound is 2n, enough to traverse every simple path twice
    over in each block; cyclic blocks may need more before a monomial
    survives, in which case the verdict is inconclusive rather than wrong.
    """
    validate(net)
    if net.m_unknown == 0:
        raise NoUnknownEdgesError()
    if max_degree is None:
        max_degree = 2 * net.n
    table = repetition_table(net, max_degree)
    return verdict_from_table(net, table)


def necessary_condition_any_topology(
    net: NetworkModel, max_degree: int | None = None, seed: int = 0
) -> Verdict:
    """Walk-counting test applied to the decoupled form of an arbitrary network.

    The decoupled form is always separable and square whenever the source
    is square, so the walk count applies to any topology through it.  A
    not-identifiable outcome refutes local identifiability of the source
    (the decoupled notion is necessary for the local one); an identifiable
    outcome certifies the decoupled notion only.
    """
    validate(net)
    decoupled = decouple(net, seed)
    verdict = combinatorial_verdict(decoupled, max_degree)
    return replace(verdict, notion=DECOUPLED_GENERIC)
