"""(k, l)-sparsity counting via the pebble game, with a brute-force oracle.

A graph is (k, l)-sparse when every subgraph on at least two vertices spans at
most k|V| - l edges, and tight when it is sparse and meets the count globally.
The pebble game decides this for any count with l < 2k, covering the (2, 3),
(2, 2) and (k, k) instances used elsewhere; parallel edges are handled, so the
same engine serves multigraphs.

Determinism: edges are inserted in input order, pebble searches run depth
first visiting lower labels first, and failure witnesses are the reachability
closure of the rejected edge's endpoints in the pebble digraph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AlgorithmError, InputError, UnsupportedCountError
from .graphs import GraphLike, MultiGraph, normalize_edge


@dataclass(frozen=True)
class SparsityCount:
    """Pair (k, l) with 0 <= l < 2k."""

    k: int
    l: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise UnsupportedCountError(f"k must be positive, got {self.k}")
        if not 0 <= self.l < 2 * self.k:
            raise UnsupportedCountError(
                f"count ({self.k},{self.l}) outside the supported range l < 2k"
            )

    @classmethod
    def parse(cls, text: str) -> "SparsityCount":
        parts = text.split(",")
        if len(parts) != 2:
            raise UnsupportedCountError(f"cannot parse sparsity count {text!r}")
        try:
            k, l = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise UnsupportedCountError(f"cannot parse sparsity count {text!r}") from exc
        return cls(k, l)

    def target(self, n_vertices: int) -> int:
        return self.k * n_vertices - self.l

    def __str__(self) -> str:
        return f"({self.k},{self.l})"


LAMAN = SparsityCount(2, 3)
QNORM_2D = SparsityCount(2, 2)


@dataclass(frozen=True)
class SparsityReport:
    """Verdict of a sparsity check.

    The witness is some subgraph violating the count; it is present exactly
    when the graph is not sparse.  Violation certificates are not unique, so
    the witness does not take part in equality comparisons.
    """

    sparse: bool
    tight: bool
    witness: GraphLike | None = field(compare=False, default=None)


class _PebbleGame:
    """Directed pebble digraph for one (k, l) run."""

    def __init__(self, vertices: tuple[int, ...], count: SparsityCount):
        self.k = count.k
        self.l = count.l
        self.pebbles = {v: count.k for v in vertices}
        self.out: dict[int, list[int]] = {v: [] for v in vertices}

    def _find_pebble(self, root: int, blocked: set[int]) -> bool:
        """Pull one free pebble to root along a directed path, if any.

        Vertices in `blocked` neither give up pebbles nor restart the search;
        during insertion these are the two endpoints, whose pebbles are
        already counted.
        """
        parent: dict[int, int] = {root: root}
        stack = [root]
        found = None
        while stack and found is None:
            v = stack.pop()
            for w in sorted(set(self.out[v])):
                if w in parent:
                    continue
                parent[w] = v
                if self.pebbles[w] > 0 and w not in blocked:
                    found = w
                    break
                stack.append(w)
        if found is None:
            return False
        # Reverse the arcs along the path, carrying the pebble to the root.
        w = found
        while w != root:
            v = parent[w]
            self.out[v].remove(w)
            self.out[w].append(v)
            w = v
        self.pebbles[found] -= 1
        self.pebbles[root] += 1
        return True

    def gather(self, u: int, w: int) -> bool:
        """Collect at least l + 1 pebbles on the pair {u, w}."""
        need = self.l + 1
        blocked = {u, w}
        while self.pebbles[u] + self.pebbles[w] < need:
            if not (self._find_pebble(u, blocked) or self._find_pebble(w, blocked)):
                return False
        return True

    def insert(self, u: int, w: int) -> bool:
        """Try to add edge uw; keeps the digraph invariant on success."""
        if not self.gather(u, w):
            return False
        tail, head = (u, w) if self.pebbles[u] > 0 else (w, u)
        self.pebbles[tail] -= 1
        self.out[tail].append(head)
        return True

    def reach_closure(self, u: int, w: int) -> tuple[int, ...]:
        seen = {u, w}
        stack = [w, u]
        while stack:
            v = stack.pop()
            for x in sorted(set(self.out[v])):
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return tuple(sorted(seen))


def _induced(g: GraphLike, keep: tuple[int, ...]) -> GraphLike:
    ks = set(keep)
    vs = tuple(v for v in g.vertices if v in ks)
    es = tuple(e for e in g.edges if e[0] in ks and e[1] in ks)
    return type(g)(vs, es)


def is_sparse(g: GraphLike, count: SparsityCount) -> SparsityReport:
    """Run the pebble game over the edges of g in input order."""
    game = _PebbleGame(g.vertices, count)
    for u, w in g.edges:
        if not game.insert(u, w):
            closure = game.reach_closure(u, w)
            witness = _induced(g, closure)
            return SparsityReport(sparse=False, tight=False, witness=witness)
    tight = g.n_edges == count.target(g.n_vertices)
    return SparsityReport(sparse=True, tight=tight, witness=None)


def brute_force_sparse(g: GraphLike, count: SparsityCount) -> SparsityReport:
    """Check every vertex subset directly.  Oracle for small graphs only."""
    n = g.n_vertices
    if n > 12:
        raise InputError(f"brute force capped at 12 vertices, got {n}")
    vs = g.vertices
    witness = None
    for mask in range(1, 1 << n):
        size = mask.bit_count()
        if size < 2:
            continue
        keep = {vs[i] for i in range(n) if mask >> i & 1}
        m = sum(1 for e in g.edges if e[0] in keep and e[1] in keep)
        if m > count.k * size - count.l:
            witness = _induced(g, tuple(sorted(keep)))
            break
    if witness is not None:
        return SparsityReport(sparse=False, tight=False, witness=witness)
    tight = g.n_edges == count.target(n)
    return SparsityReport(sparse=True, tight=tight, witness=None)


def sparsity_rank(g: GraphLike, count: SparsityCount) -> int:
    """Size of the maximal independent edge subset found greedily."""
    game = _PebbleGame(g.vertices, count)
    return sum(1 for u, w in g.edges if game.insert(u, w))


def tight_spanning_subgraph(g: GraphLike, count: SparsityCount) -> GraphLike | None:
    """Maximal independent edge subset on the full vertex set, if tight.

    Edges are offered in input order; the accepted set is a basis of the
    sparsity matroid restricted to g, so the result is independent of which
    maximal set would be needed, only of whether one reaches the tight count.
    """
    game = _PebbleGame(g.vertices, count)
    accepted = [e for e in g.edges if game.insert(*e)]
    if len(accepted) != count.target(g.n_vertices):
        return None
    return type(g)(g.vertices, accepted)


def independent_edge_indices(g: GraphLike, count: SparsityCount) -> tuple[int, ...]:
    """Positions of the greedy sparsity-matroid basis within g.edges.

    Positional form of independent_restriction for graphs whose parallel
    edges make the (v, w) pair an ambiguous identity.
    """
    game = _PebbleGame(g.vertices, count)
    return tuple(i for i, e in enumerate(g.edges) if game.insert(*e))


def independent_restriction(g: GraphLike, count: SparsityCount) -> GraphLike:
    """Greedy basis of the sparsity matroid on the full vertex set.

    Keeps each edge independent of the earlier kept ones, so within every
    dependency the latest-offered edge is the one dropped.  Dropping only
    dependent edges preserves the row space of any rigidity matrix built on
    the surviving graph, hence its kernel.
    """
    keep = set(independent_edge_indices(g, count))
    return type(g)(g.vertices, tuple(e for i, e in enumerate(g.edges) if i in keep))


def extend_to_tight_spanning(
    g: GraphLike, count: SparsityCount, seed_edges: tuple[tuple[int, int], ...] = ()
) -> GraphLike | None:
    """Tight spanning subgraph whose edge set contains the given seeds.

    The seeds are inserted first, then the remaining edges greedily, so any
    independent seed set extends to a basis by the matroid exchange property.
    Returns None when g has no tight spanning subgraph at all; seeds that are
    missing from g or mutually dependent raise InputError.
    """
    pool = list(g.edges)
    seeds = [normalize_edge(u, w) for u, w in seed_edges]
    for e in seeds:
        try:
            pool.remove(e)
        except ValueError:
            raise InputError(f"seed edge {e} is not an edge of the graph") from None
    game = _PebbleGame(g.vertices, count)
    accepted = []
    for e in seeds:
        if not game.insert(*e):
            raise InputError("seed edges are not independent for this count")
        accepted.append(e)
    accepted.extend(e for e in pool if game.insert(*e))
    if len(accepted) != count.target(g.n_vertices):
        return None
    return type(g)(g.vertices, tuple(accepted))


def blocking_tight_subgraph(
    g: GraphLike, count: SparsityCount, v: int, w: int
) -> GraphLike | None:
    """Decide whether adding vw keeps g sparse.

    Returns None when the addition stays sparse, otherwise the tight subgraph
    containing both endpoints that blocks it.  Precondition: g sparse.
    """
    if v == w:
        raise InputError("blocking query needs two distinct vertices")
    if v not in g.vertex_set or w not in g.vertex_set:
        raise InputError(f"vertices ({v}, {w}) not both in the graph")
    game = _PebbleGame(g.vertices, count)
    for e in g.edges:
        if not game.insert(*e):
            raise InputError(f"graph is not {count}-sparse")
    if game.gather(v, w):
        return None
    blocker = _induced(g, game.reach_closure(v, w))
    m = len(blocker.edges)
    if m != count.target(len(blocker.vertices)):
        raise AlgorithmError("pebble closure failed to produce a tight subgraph")
    return blocker


_MIN_AUGMENT_VERTICES = {
    # Below these sizes no tight completion exists for the listed counts.
    (2, 3): 2,
}


def augment_to_tight(g: GraphLike, count: SparsityCount) -> GraphLike:
    """Grow a sparse graph to a tight one by adding admissible edges.

    Scans vertex pairs in lexicographic label order and restarts after every
    insertion.  Simple graphs only gain fresh edges; multigraphs may gain
    parallel ones.
    """
    report = is_sparse(g, count)
    if not report.sparse:
        raise InputError(f"graph is not {count}-sparse")
    allow_parallel = isinstance(g, MultiGraph)
    minimum = _MIN_AUGMENT_VERTICES.get((count.k, count.l))
    if minimum is None and count.k == count.l and not allow_parallel:
        # k*n - k edges never fit in a simple graph below 2k vertices
        minimum = 2 * count.k
    if minimum is not None and g.n_vertices < minimum:
        raise InputError(
            f"augmenting under {count} needs at least {minimum} vertices, "
            f"got {g.n_vertices}"
        )
    labels = sorted(g.vertices)
    cur = g
    target = count.target(g.n_vertices)
    while cur.n_edges < target:
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                v, w = labels[i], labels[j]
                if not allow_parallel and normalize_edge(v, w) in cur.edge_set:
                    continue
                if blocking_tight_subgraph(cur, count, v, w) is None:
                    edge = normalize_edge(v, w)
                    cur = type(cur)(cur.vertices, cur.edges + (edge,))
                    break
            else:
                continue
            break
        else:
            raise AlgorithmError(
                f"no admissible edge although {target - cur.n_edges} are missing"
            )
    return cur
