"""Network models: directed graphs with known/unknown edges and excitation/measurement sets.

A network is a directed graph on nodes 0..n-1 where each edge carries a
transfer coefficient from its source node to its sink node.  Edges are
partitioned into *known* coefficients (given a priori) and *unknown* ones
(to be recovered from input-output data).  A subset of nodes is excited by
external signals and a subset is measured.

The edge list order is significant: it fixes the canonical column order of
the unknown edges used by every downstream rank, determinant and sign
computation.  Node indices are 0-based in memory and 1-based in files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "Edge",
    "NetworkModel",
    "SeparableBlocks",
    "ValidationError",
    "SelfLoopError",
    "DuplicateEdgeError",
    "IndexOutOfRangeError",
    "DuplicateExcitationError",
    "DuplicateMeasurementError",
    "NotSeparableError",
    "NotSquareError",
    "NetworkFormatError",
    "validate",
    "separate",
    "is_separable",
    "decouple",
    "permute",
    "network_from_dict",
    "network_to_dict",
    "load_network",
    "save_network",
]


class ValidationError(ValueError):
    """A network violates a structural invariant."""


class SelfLoopError(ValidationError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"self-loop at node {node + 1}")


class DuplicateEdgeError(ValidationError):
    def __init__(self, src: int, dst: int):
        self.src, self.dst = src, dst
        super().__init__(f"duplicate edge {src + 1}->{dst + 1}")


class IndexOutOfRangeError(ValidationError):
    def __init__(self, index: int, n: int, where: str):
        self.index, self.n, self.where = index, n, where
        super().__init__(f"node index {index + 1} out of range 1..{n} in {where}")


class DuplicateExcitationError(ValidationError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node + 1} excited twice")


class DuplicateMeasurementError(ValidationError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node + 1} measured twice")


class NotSeparableError(ValueError):
    """The network admits no excited/measured bipartition.

    Carries a witness: either a node that would need to sit in both parts,
    or an edge violating the block structure.
    """

    def __init__(self, reason: str, node: int | None = None, edge: "Edge | None" = None):
        self.reason = reason
        self.node = node
        self.edge = edge
        super().__init__(reason)


class NotSquareError(ValueError):
    """Unknown-edge count does not match the (excitation, measurement) pair count."""

    def __init__(self, net: "NetworkModel"):
        super().__init__(
            "need exactly one unknown edge per (excitation, measurement) pair: "
            f"{net.m_unknown} unknown edges vs {net.n_excited}*{net.n_measured} pairs"
        )


class NetworkFormatError(ValueError):
    """A network file or dict does not match the JSON schema."""


@dataclass(frozen=True)
class Edge:
    """Directed edge src -> dst; ``known`` distinguishes given from unknown coefficients.

    ``value`` is an optional concrete coefficient, present only when a file
    carries an evaluation alongside the topology.
    """

    src: int
    dst: int
    known: bool
    value: float | None = None

    def __str__(self) -> str:
        return f"{self.src + 1}->{self.dst + 1}"


@dataclass(frozen=True)
class NetworkModel:
    """Immutable network: node count, ordered edge list, excited and measured node lists.

    The edge list order is part of the data: the unknown edges, in list
    order, form the canonical column order used by the sensitivity matrix
    and by all permutation-sign bookkeeping.
    """

    n: int
    edges: tuple[Edge, ...]
    excited: tuple[int, ...]
    measured: tuple[int, ...]

    def __init__(self, n, edges, excited, measured):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "excited", tuple(excited))
        object.__setattr__(self, "measured", tuple(measured))

    @property
    def known_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.known)

    @property
    def unknown_edges(self) -> tuple[Edge, ...]:
        """Unknown edges in canonical (edge-list) order."""
        return tuple(e for e in self.edges if not e.known)

    @property
    def m_unknown(self) -> int:
        return sum(1 for e in self.edges if not e.known)

    @property
    def n_excited(self) -> int:
        return len(self.excited)

    @property
    def n_measured(self) -> int:
        return len(self.measured)

    @property
    def is_square(self) -> bool:
        """True when there are exactly as many unknowns as (excitation, measurement) pairs."""
        return self.m_unknown == self.n_excited * self.n_measured


@dataclass(frozen=True)
class SeparableBlocks:
    """A bipartition exhibiting the separable block structure.

    All excited nodes live in ``b_part``, all measured nodes in ``c_part``,
    known edges stay within their part, and every unknown edge crosses from
    ``b_part`` to ``c_part``.  No edge of any kind runs c-to-b.
    """

    b_part: frozenset[int]
    c_part: frozenset[int]
    gb_edges: tuple[Edge, ...]
    gc_edges: tuple[Edge, ...]
    cross_edges: tuple[Edge, ...]


def validate(net: NetworkModel) -> None:
    """Check all structural invariants, raising a specific ValidationError on the first violation.

    Checks: node indices in range, no self-loops, at most one edge per
    ordered pair, excited and measured lists free of repeats.
    """
    n = net.n
    seen: set[tuple[int, int]] = set()
    for e in net.edges:
        if not (0 <= e.src < n):
            raise IndexOutOfRangeError(e.src, n, f"edge {e}")
        if not (0 <= e.dst < n):
            raise IndexOutOfRangeError(e.dst, n, f"edge {e}")
        if e.src == e.dst:
            raise SelfLoopError(e.src)
        if (e.src, e.dst) in seen:
            raise DuplicateEdgeError(e.src, e.dst)
        seen.add((e.src, e.dst))
    for node in net.excited:
        if not (0 <= node < n):
            raise IndexOutOfRangeError(node, n, "excited")
    for node in net.measured:
        if not (0 <= node < n):
            raise IndexOutOfRangeError(node, n, "measured")
    counts: dict[int, int] = {}
    for node in net.excited:
        counts[node] = counts.get(node, 0) + 1
        if counts[node] > 1:
            raise DuplicateExcitationError(node)
    counts = {}
    for node in net.measured:
        counts[node] = counts.get(node, 0) + 1
        if counts[node] > 1:
            raise DuplicateMeasurementError(node)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def separate(net: NetworkModel) -> SeparableBlocks:
    """Find a separable bipartition, or raise NotSeparableError with a witness.

    Components of the undirected closure of the known edges must be labeled
    as a whole.  A component is forced into the excited part when it holds
    an excited node or the tail of an unknown edge, and into the measured
    part when it holds a measured node or the head of an unknown edge.  A
    component forced both ways is the witness of non-separability.
    Unconstrained components default to the excited part, which makes the
    output deterministic.
    """
    uf = _UnionFind(net.n)
    for e in net.edges:
        if e.known:
            uf.union(e.src, e.dst)

    # Why each component was forced: node -> human-readable cause, kept for witnesses.
    b_cause: dict[int, str] = {}
    c_cause: dict[int, str] = {}

    def force(cause_map: dict[int, str], node: int, cause: str) -> None:
        root = uf.find(node)
        cause_map.setdefault(root, cause)

    for node in net.excited:
        force(b_cause, node, f"node {node + 1} is excited")
    for node in net.measured:
        force(c_cause, node, f"node {node + 1} is measured")
    for e in net.edges:
        if not e.known:
            force(b_cause, e.src, f"node {e.src + 1} is the tail of unknown edge {e}")
            force(c_cause, e.dst, f"node {e.dst + 1} is the head of unknown edge {e}")

    for node in range(net.n):
        root = uf.find(node)
        if root in b_cause and root in c_cause:
            raise NotSeparableError(
                f"conflict at node {node + 1}: {b_cause[root]} but also {c_cause[root]}"
                " (connected by known edges)",
                node=node,
            )

    b_part = frozenset(v for v in range(net.n) if uf.find(v) not in c_cause)
    c_part = frozenset(v for v in range(net.n) if uf.find(v) in c_cause)

    # Structurally guaranteed by the forcing above; kept as a cheap safety net.
    for e in net.edges:
        if e.src in c_part and e.dst in b_part:
            raise NotSeparableError(f"edge {e} runs from the measured part to the excited part", edge=e)
        if not e.known and not (e.src in b_part and e.dst in c_part):
            raise NotSeparableError(f"unknown edge {e} does not cross the bipartition", edge=e)

    gb = tuple(e for e in net.edges if e.known and e.src in b_part)
    gc = tuple(e for e in net.edges if e.known and e.src in c_part)
    cross = tuple(e for e in net.edges if not e.known)
    return SeparableBlocks(b_part=b_part, c_part=c_part, gb_edges=gb, gc_edges=gc, cross_edges=cross)


def is_separable(net: NetworkModel) -> bool:
    """True when the network admits a separable bipartition."""
    try:
        separate(net)
    except NotSeparableError:
        return False
    return True


def decouple(net: NetworkModel, seed: int = 0) -> NetworkModel:
    """Build the 2n-node decoupled network.

    Nodes 0..n-1 are the measured copy and carry every edge of ``net``
    marked known; nodes n..2n-1 are the excited copy and carry a
    topology-identical known edge set.  Each unknown edge j->i of ``net``
    becomes the unknown cross edge (n+j)->i.  Excitations move to the
    excited copy; measurements stay on the measured copy.  The result is
    separable by construction.

    ``seed`` only matters when the input edges carry concrete values: the
    measured copy inherits them and the excited copy gets fresh ones drawn
    from the seed, so the two copies never share coefficient values.
    """
    n = net.n
    has_values = any(e.value is not None for e in net.edges)
    rng = np.random.default_rng(seed) if has_values else None

    edges: list[Edge] = []
    for e in net.edges:
        edges.append(Edge(e.src, e.dst, known=True, value=e.value))
    for e in net.edges:
        fresh = float(rng.standard_normal()) if (rng is not None and e.value is not None) else None
        edges.append(Edge(n + e.src, n + e.dst, known=True, value=fresh))
    for e in net.edges:
        if not e.known:
            edges.append(Edge(n + e.src, e.dst, known=False))

    return NetworkModel(
        n=2 * n,
        edges=edges,
        excited=tuple(n + b for b in net.excited),
        measured=net.measured,
    )


def permute(net: NetworkModel, perm: list[int]) -> NetworkModel:
    """Renumber nodes by ``perm`` (old index -> new index), preserving list orders."""
    return NetworkModel(
        n=net.n,
        edges=tuple(replace(e, src=perm[e.src], dst=perm[e.dst]) for e in net.edges),
        excited=tuple(perm[v] for v in net.excited),
        measured=tuple(perm[v] for v in net.measured),
    )


# -- JSON file format ---------------------------------------------------------
#
# { "nodes": n,
#   "edges": [{"from": j, "to": i, "known": bool, "value": number?}, ...],
#   "excited": [...], "measured": [...] }
#
# Node indices in files are 1-based.


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise NetworkFormatError(msg)


def network_from_dict(data: dict) -> NetworkModel:
    """Parse the JSON dict form, raising NetworkFormatError naming the bad field."""
    _require(isinstance(data, dict), "top level must be an object")
    for key in ("nodes", "edges", "excited", "measured"):
        _require(key in data, f"missing field '{key}'")
    _require(isinstance(data["nodes"], int) and data["nodes"] >= 0, "field 'nodes' must be a non-negative integer")
    _require(isinstance(data["edges"], list), "field 'edges' must be a list")

    edges = []
    for i, raw in enumerate(data["edges"]):
        where = f"edges[{i}]"
        _require(isinstance(raw, dict), f"{where} must be an object")
        for key in ("from", "to", "known"):
            _require(key in raw, f"{where} missing field '{key}'")
        _require(isinstance(raw["from"], int), f"{where}.from must be an integer")
        _require(isinstance(raw["to"], int), f"{where}.to must be an integer")
        _require(isinstance(raw["known"], bool), f"{where}.known must be a boolean")
        value = raw.get("value")
        _require(value is None or isinstance(value, (int, float)), f"{where}.value must be a number")
        edges.append(
            Edge(
                src=raw["from"] - 1,
                dst=raw["to"] - 1,
                known=raw["known"],
                value=None if value is None else float(value),
            )
        )

    for key in ("excited", "measured"):
        _require(isinstance(data[key], list), f"field '{key}' must be a list")
        _require(all(isinstance(v, int) for v in data[key]), f"field '{key}' must hold integers")

    net = NetworkModel(
        n=data["nodes"],
        edges=edges,
        excited=tuple(v - 1 for v in data["excited"]),
        measured=tuple(v - 1 for v in data["measured"]),
    )
    try:
        validate(net)
    except ValidationError as exc:
        raise NetworkFormatError(str(exc)) from exc
    return net


def network_to_dict(net: NetworkModel) -> dict:
    """Serialize to the JSON dict form (1-based node indices)."""
    edges = []
    for e in net.edges:
        entry: dict = {"from": e.src + 1, "to": e.dst + 1, "known": e.known}
        if e.value is not None:
            entry["value"] = e.value
        edges.append(entry)
    return {
        "nodes": net.n,
        "edges": edges,
        "excited": [v + 1 for v in net.excited],
        "measured": [v + 1 for v in net.measured],
    }


def load_network(path: str) -> NetworkModel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return network_from_dict(data)


def save_network(net: NetworkModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(network_to_dict(net), fh, indent=2, sort_keys=True)
        fh.write("\n")
