"""Labelled graphs and nested graph towers.

Vertices are non-negative integer labels.  A graph's vertex tuple fixes the
presentation order used for matrix column layout; equality and hashing ignore
that order and compare the labelled vertex and edge sets.  Edges are stored as
(min, max) pairs and keep their construction order, which downstream
deterministic algorithms (pebble game, chain search) rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError, NestingError


def normalize_edge(v: int, w: int) -> tuple[int, int]:
    if v == w:
        raise InputError(f"loop edge at vertex {v} is not allowed")
    return (v, w) if v < w else (w, v)


def _check_vertices(vertices: Sequence[int]) -> tuple[int, ...]:
    vs = tuple(int(v) for v in vertices)
    seen = set()
    for v in vs:
        if v < 0:
            raise InputError(f"vertex label {v} is negative")
        if v in seen:
            raise InputError(f"vertex label {v} repeated")
        seen.add(v)
    return vs


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    """Finite simple graph with ordered vertex labels."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __init__(self, vertices: Iterable[int], edges: Iterable[Sequence[int]] = ()):
        vs = _check_vertices(tuple(vertices))
        vset = set(vs)
        out: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for e in edges:
            v, w = e
            ne = normalize_edge(int(v), int(w))
            if ne[0] not in vset or ne[1] not in vset:
                raise InputError(f"edge {ne} has an endpoint outside the vertex set")
            if ne in seen:
                raise InputError(f"edge {ne} repeated")
            seen.add(ne)
            out.append(ne)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", tuple(out))

    # ---- basic queries -------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def index_of(self) -> dict[int, int]:
        """Label -> position in the vertex tuple."""
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for v, w in self.edges:
            adj[v].append(w)
            adj[w].append(v)
        return {v: tuple(sorted(ws)) for v, ws in adj.items()}

    def has_edge(self, v: int, w: int) -> bool:
        return normalize_edge(v, w) in self.edge_set

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self.vertex_set == other.vertex_set and self.edge_set == other.edge_set

    def __hash__(self) -> int:
        return hash((self.vertex_set, self.edge_set))

    def __repr__(self) -> str:
        return f"SimpleGraph({self.n_vertices} vertices, {self.n_edges} edges)"

    # ---- derived graphs ------------------------------------------------

    def with_edges(self, new_edges: Iterable[Sequence[int]]) -> "SimpleGraph":
        extra = [normalize_edge(int(v), int(w)) for v, w in new_edges]
        fresh = [e for e in extra if e not in self.edge_set]
        return SimpleGraph(self.vertices, self.edges + tuple(fresh))

    def without_edge(self, v: int, w: int) -> "SimpleGraph":
        e = normalize_edge(v, w)
        if e not in self.edge_set:
            raise InputError(f"edge {e} not present")
        return SimpleGraph(self.vertices, tuple(f for f in self.edges if f != e))

    def with_vertex(self, v: int) -> "SimpleGraph":
        if v in self.vertex_set:
            return self
        return SimpleGraph(self.vertices + (v,), self.edges)

    def without_vertex(self, v: int) -> "SimpleGraph":
        if v not in self.vertex_set:
            raise InputError(f"vertex {v} not present")
        return SimpleGraph(
            tuple(u for u in self.vertices if u != v),
            tuple(e for e in self.edges if v not in e),
        )

    def is_subgraph_of(self, other: "SimpleGraph") -> bool:
        return self.vertex_set <= other.vertex_set and self.edge_set <= other.edge_set


def induced_subgraph(g: SimpleGraph, vertices: Iterable[int]) -> SimpleGraph:
    """Subgraph on the given labels with every edge of g between them.

    Vertex and edge order follow the presentation order of g.
    """
    keep = set(vertices)
    missing = keep - g.vertex_set
    if missing:
        raise InputError(f"vertices {sorted(missing)} not in the graph")
    vs = tuple(v for v in g.vertices if v in keep)
    es = tuple(e for e in g.edges if e[0] in keep and e[1] in keep)
    return SimpleGraph(vs, es)


def graph_union(a: SimpleGraph, b: SimpleGraph) -> SimpleGraph:
    vs = a.vertices + tuple(v for v in b.vertices if v not in a.vertex_set)
    es = a.edges + tuple(e for e in b.edges if e not in a.edge_set)
    return SimpleGraph(vs, es)


def complete_graph(n: int, offset: int = 0) -> SimpleGraph:
    vs = tuple(range(offset, offset + n))
    es = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)]
    return SimpleGraph(vs, es)


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return SimpleGraph(range(n), [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(range(n), [(i, i + 1) for i in range(n - 1)])


def complete_graph_on(labels: Sequence[int]) -> SimpleGraph:
    ls = tuple(labels)
    es = [(ls[i], ls[j]) for i in range(len(ls)) for j in range(i + 1, len(ls))]
    return SimpleGraph(ls, es)


@dataclass(frozen=True, eq=False)
class MultiGraph:
    """Graph with parallel edges; edge identity is positional.

    Loops are rejected: no supported sparsity count admits them.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __init__(self, vertices: Iterable[int], edges: Iterable[Sequence[int]] = ()):
        vs = _check_vertices(tuple(vertices))
        vset = set(vs)
        out = []
        for e in edges:
            v, w = e
            ne = normalize_edge(int(v), int(w))
            if ne[0] not in vset or ne[1] not in vset:
                raise InputError(f"edge {ne} has an endpoint outside the vertex set")
            out.append(ne)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", tuple(out))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @cached_property
    def index_of(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def multiplicity(self, v: int, w: int) -> int:
        e = normalize_edge(v, w)
        return sum(1 for f in self.edges if f == e)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self.vertex_set == other.vertex_set and sorted(self.edges) == sorted(
            other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertex_set, tuple(sorted(self.edges))))

    def __repr__(self) -> str:
        return f"MultiGraph({self.n_vertices} vertices, {self.n_edges} edges)"


GraphLike = SimpleGraph | MultiGraph


@dataclass(frozen=True)
class Tower:
    """Increasing sequence of simple graphs, optionally with a declared target.

    Completeness flags are relative to the target when one is declared and to
    the stage union otherwise (where they hold trivially).
    """

    stages: tuple[SimpleGraph, ...]
    target: SimpleGraph | None = None

    def __init__(self, stages: Iterable[SimpleGraph], target: SimpleGraph | None = None):
        object.__setattr__(self, "stages", tuple(stages))
        object.__setattr__(self, "target", target)
        if not self.stages:
            raise InputError("a tower needs at least one stage")

    @property
    def depth(self) -> int:
        return len(self.stages)

    @cached_property
    def union(self) -> SimpleGraph:
        g = self.stages[0]
        for h in self.stages[1:]:
            g = graph_union(g, h)
        return g

    @cached_property
    def reference(self) -> SimpleGraph:
        """Graph the completeness flags are measured against."""
        return self.target if self.target is not None else self.union

    @property
    def vertex_complete(self) -> bool:
        return self.union.vertex_set == self.reference.vertex_set

    @property
    def edge_complete(self) -> bool:
        return self.union.edge_set == self.reference.edge_set


def validate_tower(t: Tower) -> None:
    """Check stage nesting (and target containment when declared).

    Raises NestingError carrying the index of the first stage that fails to
    contain its predecessor.
    """
    for k in range(t.depth - 1):
        if not t.stages[k].is_subgraph_of(t.stages[k + 1]):
            raise NestingError(
                k + 1, f"stage {k + 1} does not contain stage {k}"
            )
    if t.target is not None and not t.stages[-1].is_subgraph_of(t.target):
        raise NestingError(t.depth - 1, "final stage is not contained in the target")
