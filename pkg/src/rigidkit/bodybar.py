"""Structures made of rigid bodies linked by disjoint bars.

A multi-body structure is a simple graph partitioned into generically rigid
bodies, with every edge between two bodies acting as a bar; bars are pairwise
vertex-disjoint and no joint carries more than one of them.  Collapsing each
body to a single node turns the bar set into a loop-free multigraph, and that
multigraph alone governs rigidity: the structure is rigid exactly when the
collapsed multigraph contains a (k, k)-tight spanning subgraph, where k is
the rigid-motion dimension of the ambient space, d(d+1)/2 in the Euclidean
case and d otherwise.  Since only the collapsed multigraph matters, bodies
are freely interchangeable, and for the non-Euclidean exponents a concrete
rigid placement can be constructed by threading the bars along a spanning
tree decomposition.  Relative rigidity of one multi-body structure inside
another is equivalent to the presence of a rigid multi-body container in
every dimension, in contrast with the general bar-joint situation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlgorithmError,
    InconsistencyError,
    InputError,
    NestingError,
    PlacementError,
)
from .frameworks import (
    FlexReport,
    NormSpec,
    Placement,
    flex_report,
    is_rigid_generic,
    matrix_rank,
    random_placement,
    rigidity_matrix,
)
from .graphs import MultiGraph, SimpleGraph, induced_subgraph, normalize_edge
from .sparsity import (
    SparsityCount,
    blocking_tight_subgraph,
    extend_to_tight_spanning,
    independent_edge_indices,
    is_sparse,
    tight_spanning_subgraph,
)
from .towers import RelativeRigidityVerdict, relative_rigidity

__all__ = [
    "MultiBodyGraph",
    "BodyBarGraph",
    "TayVerdict",
    "SpecialPlacementResult",
    "MultiBodyTower",
    "BodyBarTowerVerdict",
    "BODYBAR_TOWER_RIGID",
    "BODYBAR_TOWER_MINIMAL",
    "BODYBAR_TOWER_NOT",
    "body_bar_count",
    "validate_multibody",
    "body_bar_graph",
    "labeled_body_bar",
    "tay_decide",
    "spanning_tree_layers",
    "nash_williams_trees",
    "remodel_bodies",
    "special_placement",
    "essentially_independent",
    "relative_rigidity_multibody",
    "rigid_container_multibody",
    "validate_multibody_tower",
    "bodybar_tower_decide",
]

# Above this vertex count the numeric cross-checks are skipped.
_NUMERIC_CHECK_CAP = 36


def body_bar_count(norm: NormSpec) -> int:
    """Sparsity parameter k of the collapsed multigraph for this norm."""
    d = norm.d
    return d * (d + 1) // 2 if norm.euclidean else d


@dataclass(frozen=True)
class MultiBodyGraph:
    """Simple graph partitioned into bodies joined by vertex-disjoint bars.

    Construction enforces the structural rules (bodies partition the vertex
    set, the bars are exactly the edges between distinct bodies, and no
    vertex carries two bars).  Generic rigidity of the bodies depends on the
    ambient norm and is checked by validate_multibody, the intended entry
    point for external data.
    """

    underlying: SimpleGraph
    bodies: tuple[tuple[int, ...], ...]
    inter_body_edges: tuple[tuple[int, int], ...]

    def __init__(
        self,
        underlying: SimpleGraph,
        bodies: Iterable[Iterable[int]],
        inter_body_edges: Iterable[Sequence[int]],
    ):
        bs = tuple(tuple(sorted(int(v) for v in b)) for b in bodies)
        bs = tuple(sorted(bs, key=lambda b: b[0] if b else -1))
        owner: dict[int, int] = {}
        for i, b in enumerate(bs):
            if not b:
                raise InputError(f"body {i} is empty")
            for v in b:
                if v in owner:
                    raise InputError(f"vertex {v} appears in two bodies")
                owner[v] = i
        missing = underlying.vertex_set - owner.keys()
        if missing:
            raise InputError(f"vertices {sorted(missing)} belong to no body")
        extra = owner.keys() - underlying.vertex_set
        if extra:
            raise InputError(f"body vertices {sorted(extra)} are not in the graph")
        bars = tuple(normalize_edge(*e) for e in inter_body_edges)
        cross = tuple(e for e in underlying.edges if owner[e[0]] != owner[e[1]])
        if set(bars) != set(cross) or len(bars) != len(cross):
            raise InputError(
                "inter-body edges must be exactly the edges between distinct bodies"
            )
        used: set[int] = set()
        for v, w in bars:
            for end in (v, w):
                if end in used:
                    raise InputError(f"vertex {end} meets two inter-body bars")
                used.add(end)
        object.__setattr__(self, "underlying", underlying)
        object.__setattr__(self, "bodies", bs)
        object.__setattr__(self, "inter_body_edges", cross)

    @property
    def n_bodies(self) -> int:
        return len(self.bodies)

    @cached_property
    def body_of(self) -> dict[int, int]:
        """Vertex label -> index into the body tuple."""
        return {v: i for i, b in enumerate(self.bodies) for v in b}

    @cached_property
    def body_index(self) -> dict[frozenset[int], int]:
        return {frozenset(b): i for i, b in enumerate(self.bodies)}

    @cached_property
    def body_subgraphs(self) -> tuple[SimpleGraph, ...]:
        return tuple(induced_subgraph(self.underlying, b) for b in self.bodies)

    def __repr__(self) -> str:
        return (
            f"MultiBodyGraph({self.n_bodies} bodies, "
            f"{len(self.inter_body_edges)} bars)"
        )


def validate_multibody(
    g: SimpleGraph, bodies: Iterable[Iterable[int]], norm: NormSpec
) -> MultiBodyGraph:
    """Build a multi-body structure, reporting every violated rule at once.

    The partition and bar rules are checked first; only a structurally sound
    input proceeds to the per-body generic rigidity checks, which sample
    random placements through the usual rank machinery.
    """
    bs = tuple(tuple(sorted(int(v) for v in b)) for b in bodies)
    problems: list[str] = []
    owner: dict[int, int] = {}
    for i, b in enumerate(bs):
        if not b:
            problems.append(f"body {i} is empty")
        for v in b:
            if v in owner:
                problems.append(f"vertex {v} appears in bodies {owner[v]} and {i}")
            owner[v] = i
    missing = g.vertex_set - owner.keys()
    if missing:
        problems.append(f"vertices {sorted(missing)} belong to no body")
    extra = owner.keys() - g.vertex_set
    if extra:
        problems.append(f"body vertices {sorted(extra)} are not in the graph")
    if not problems:
        seen: set[int] = set()
        for v, w in g.edges:
            if owner[v] != owner[w]:
                for end in (v, w):
                    if end in seen:
                        problems.append(f"vertex {end} meets two inter-body bars")
                    seen.add(end)
    if problems:
        raise InputError("; ".join(problems))
    for i, b in enumerate(bs):
        part = induced_subgraph(g, b)
        if not is_rigid_generic(part, norm).rigid:
            problems.append(
                f"body {i} on vertices {list(b)} is not generically rigid for {norm}"
            )
    if problems:
        raise InputError("; ".join(problems))
    bars = tuple(e for e in g.edges if owner[e[0]] != owner[e[1]])
    return MultiBodyGraph(g, bs, bars)


@dataclass(frozen=True)
class BodyBarGraph:
    """Collapsed multigraph together with the bar it records per edge.

    graph.edges[i] joins the body indices at the two ends of bars[i]; the
    positional alignment is what downstream constructions rely on, since
    parallel edges are indistinguishable as vertex pairs.
    """

    graph: MultiGraph
    bars: tuple[tuple[int, int], ...]


def body_bar_graph(m: MultiBodyGraph) -> BodyBarGraph:
    """Collapse bodies to single nodes, one multigraph edge per bar."""
    owner = m.body_of
    edges = tuple((owner[v], owner[w]) for v, w in m.inter_body_edges)
    return BodyBarGraph(
        MultiGraph(range(m.n_bodies), edges), tuple(m.inter_body_edges)
    )


def labeled_body_bar(m: MultiBodyGraph) -> MultiGraph:
    """Collapsed multigraph on stable labels (the least vertex of each body).

    Body indices shift as a structure grows, so nested-stage work needs the
    label that survives: bodies keep their least vertex across stages.
    """
    owner = m.body_of
    names = [b[0] for b in m.bodies]
    return MultiGraph(
        names, tuple((names[owner[v]], names[owner[w]]) for v, w in m.inter_body_edges)
    )


# ---- finite rigidity decision --------------------------------------------


@dataclass(frozen=True)
class TayVerdict:
    """Combinatorial rigidity verdict for a multi-body structure."""

    rigid: bool
    count: SparsityCount
    witness: MultiGraph | None = field(compare=False, default=None)
    cross_checked: bool = False


def tay_decide(m: MultiBodyGraph, norm: NormSpec, seed: int = 0) -> TayVerdict:
    """Decide rigidity through the collapsed multigraph's sparsity.

    Rigid exactly when the collapsed multigraph has a (k, k)-tight spanning
    subgraph, returned as the witness.  At small sizes in dimension two or
    three the verdict is cross-checked against the numeric rank of the full
    structure; a disagreement would mean a broken invariant and escalates.
    """
    if m.n_bodies < 2:
        raise InputError(f"need at least 2 bodies, got {m.n_bodies}")
    k = body_bar_count(norm)
    count = SparsityCount(k, k)
    witness = tight_spanning_subgraph(body_bar_graph(m).graph, count)
    rigid = witness is not None
    checked = False
    if norm.d <= 3 and m.underlying.n_vertices <= _NUMERIC_CHECK_CAP:
        numeric = is_rigid_generic(m.underlying, norm, seed=seed)
        if numeric.rigid != rigid:
            raise InconsistencyError(
                "collapsed-count and numeric multi-body verdicts disagree"
            )
        checked = True
    return TayVerdict(rigid, count, witness, checked)


# ---- spanning tree decomposition -----------------------------------------


def _forest_path(adj: dict[int, list[tuple[int, int]]], src: int, dst: int):
    """Edge indices along the unique src-dst path, or None if disconnected."""
    if src == dst:
        return []
    prev: dict[int, tuple[int, int]] = {src: (-1, -1)}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y, e in adj[x]:
            if y not in prev:
                prev[y] = (x, e)
                if y == dst:
                    path = []
                    at = dst
                    while at != src:
                        back, via = prev[at]
                        path.append(via)
                        at = back
                    return path
                queue.append(y)
    return None


def spanning_tree_layers(gb: MultiGraph, d: int) -> tuple[int, ...]:
    """Assign every edge of a (d, d)-tight multigraph to one of d trees.

    Edges are inserted one at a time into whichever forest keeps them
    acyclic; when none does, a breadth-first search over blocking cycles
    finds a chain of relocations that makes room.  Tightness guarantees the
    process fills d spanning trees, which a final audit confirms.
    """
    if not is_sparse(gb, SparsityCount(d, d)).tight:
        raise InputError("multigraph is not (d, d)-tight")
    edges = gb.edges
    forests: list[dict[int, list[tuple[int, int]]]] = [
        {v: [] for v in gb.vertices} for _ in range(d)
    ]
    home: dict[int, int] = {}

    def add(layer: int, idx: int) -> None:
        v, w = edges[idx]
        forests[layer][v].append((w, idx))
        forests[layer][w].append((v, idx))
        home[idx] = layer

    def drop(idx: int) -> int:
        layer = home.pop(idx)
        v, w = edges[idx]
        forests[layer][v] = [(y, e) for y, e in forests[layer][v] if e != idx]
        forests[layer][w] = [(y, e) for y, e in forests[layer][w] if e != idx]
        return layer

    for idx, (u, v) in enumerate(edges):
        direct = next(
            (i for i in range(d) if _forest_path(forests[i], u, v) is None), None
        )
        if direct is not None:
            add(direct, idx)
            continue
        parent: dict[int, int] = {}
        seen = {idx}
        queue = deque([idx])
        goal = None
        while queue and goal is None:
            x = queue.popleft()
            ux, vx = edges[x]
            for i in range(d):
                path = _forest_path(forests[i], ux, vx)
                if path is None:
                    goal = (x, i)
                    break
                for y in path:
                    if y not in seen:
                        seen.add(y)
                        parent[y] = x
                        queue.append(y)
        if goal is None:
            raise AlgorithmError("tree decomposition stalled on a tight multigraph")
        # Walk the chain backwards: each edge moves into the forest its
        # successor vacated, and the new edge takes the last gap.
        x, target = goal
        while x != idx:
            vacated = drop(x)
            add(target, x)
            target = vacated
            x = parent[x]
        add(target, idx)
    n = gb.n_vertices
    for i in range(d):
        comp = {v: v for v in gb.vertices}

        def find(a: int) -> int:
            while comp[a] != a:
                comp[a] = comp[comp[a]]
                a = comp[a]
            return a

        merges = 0
        for e, lay in home.items():
            if lay != i:
                continue
            ra, rb = find(edges[e][0]), find(edges[e][1])
            if ra == rb:
                raise AlgorithmError("tree decomposition produced a cycle")
            comp[ra] = rb
            merges += 1
        if merges != n - 1:
            raise AlgorithmError("tree decomposition audit failed")
    return tuple(home[i] for i in range(len(edges)))


def nash_williams_trees(gb: MultiGraph, d: int) -> tuple[MultiGraph, ...]:
    """Partition a (d, d)-tight multigraph into d edge-disjoint spanning trees."""
    layers = spanning_tree_layers(gb, d)
    return tuple(
        MultiGraph(
            gb.vertices, tuple(e for e, lay in zip(gb.edges, layers) if lay == i)
        )
        for i in range(d)
    )


# ---- body remodeling and the special placement ---------------------------


def remodel_bodies(m: MultiBodyGraph, size: int) -> MultiBodyGraph:
    """Replace every body by a complete graph on `size` fresh vertices.

    The collapsed multigraph is unchanged up to isomorphism, which leaves the
    nontrivial freedom of the structure as it was, so numerical work may
    assume uniform complete bodies.  Labels are canonical: body i occupies
    size*i .. size*i + size - 1 and bar endpoints take slots in bar order.
    Choosing a size large enough for the active norm's rigidity threshold is
    the caller's business; hosting all bars of a body is checked here.
    """
    if size < 2:
        raise InputError("bodies need at least 2 vertices")
    slots = [0] * m.n_bodies
    owner = m.body_of
    bars = []
    for v, w in m.inter_body_edges:
        a, b = owner[v], owner[w]
        if slots[a] >= size or slots[b] >= size:
            crowded = a if slots[a] >= size else b
            raise InputError(f"size {size} cannot host the bars at body {crowded}")
        bars.append((a * size + slots[a], b * size + slots[b]))
        slots[a] += 1
        slots[b] += 1
    edges = [
        (i * size + s, i * size + t)
        for i in range(m.n_bodies)
        for s in range(size)
        for t in range(s + 1, size)
    ]
    g = SimpleGraph(range(m.n_bodies * size), edges + bars)
    bodies = tuple(tuple(range(i * size, (i + 1) * size)) for i in range(m.n_bodies))
    return MultiBodyGraph(g, bodies, tuple(bars))


@dataclass(frozen=True)
class SpecialPlacementResult:
    """Constructed rigid placement of a remodeled multi-body structure.

    The model carries canonical labels (bodies of uniform size in blocks), so
    the placement indexes the model, not the structure that was passed in.
    Layers give the spanning tree each bar was threaded along.
    """

    model: MultiBodyGraph
    placement: Placement = field(compare=False)
    report: FlexReport
    eps: float
    layers: tuple[int, ...]


def special_placement(
    m: MultiBodyGraph, norm: NormSpec, eps: float = 1e-2, seed: int = 0
) -> SpecialPlacementResult:
    """Explicit rigid placement for a tight structure, non-Euclidean norms.

    All bodies are remodeled to one complete graph and placed on a single
    generic template so that the two endpoints of every bar coincide; the
    collapsed multigraph is split into d spanning trees, and each bar's far
    endpoint is then pushed by eps along the coordinate axis of its tree.
    Each bar row of the resulting rigidity matrix is supported on one
    coordinate only, which forces the kernel down to the d translations.  A
    too-large eps can spoil the rank; it is halved up to six times before
    giving up.  eps = 0 would leave bar endpoints coincident, which is not a
    placement, and the construction has no Euclidean analogue; both are
    rejected up front.
    """
    if norm.euclidean:
        raise InputError("the special placement exists for non-Euclidean norms only")
    if not eps > 0:
        raise InputError("eps must be positive: coincident bar endpoints")
    d = norm.d
    bb = body_bar_graph(m)
    layers = spanning_tree_layers(bb.graph, d)
    n_bars = len(bb.bars)
    size = max(2 * d + 1, n_bars)
    bars = [
        (a * size + t, b * size + t) for t, (a, b) in enumerate(bb.graph.edges)
    ]
    edges = [
        (i * size + s, i * size + u)
        for i in range(m.n_bodies)
        for s in range(size)
        for u in range(s + 1, size)
    ]
    g = SimpleGraph(range(m.n_bodies * size), edges + bars)
    bodies = tuple(tuple(range(i * size, (i + 1) * size)) for i in range(m.n_bodies))
    model = MultiBodyGraph(g, bodies, tuple(bars))
    rng = np.random.default_rng(seed)
    template = rng.uniform(-1.0, 1.0, size=(size, d))
    base = {
        i * size + s: tuple(template[s]) for i in range(m.n_bodies) for s in range(size)
    }
    current = eps
    for _ in range(7):
        coords = dict(base)
        for t, (a, b) in enumerate(bb.graph.edges):
            shifted = template[t].copy()
            shifted[layers[t]] += current
            coords[b * size + t] = tuple(shifted)
        p = Placement(d, coords)
        report = flex_report(g, p, norm)
        if report.nullity == d:
            return SpecialPlacementResult(model, p, report, current, layers)
        current /= 2
    raise PlacementError(
        "special placement stayed rank deficient after six halvings of eps; "
        "reseed or start smaller"
    )


# ---- independence ---------------------------------------------------------


def _independence_threshold(norm: NormSpec) -> int:
    return norm.d * (norm.d + 1) if norm.euclidean else 2 * norm.d


def essentially_independent(m: MultiBodyGraph, norm: NormSpec, seed: int = 0) -> bool:
    """Whether the bar rows sit in direct sum with the body rows.

    Holds exactly when the collapsed multigraph is (k, k)-sparse.  At small
    sizes the verdict is cross-checked by ranks at a random placement: the
    full rank must equal the body ranks plus one per bar, bar rows being
    automatically independent thanks to their disjoint supports.
    """
    need = _independence_threshold(norm)
    n = m.underlying.n_vertices
    if n < need:
        raise InputError(f"needs at least {need} vertices for {norm}, got {n}")
    k = body_bar_count(norm)
    verdict = is_sparse(body_bar_graph(m).graph, SparsityCount(k, k)).sparse
    if n <= _NUMERIC_CHECK_CAP:
        p = random_placement(m.underlying, norm, seed)
        total = matrix_rank(rigidity_matrix(m.underlying, p, norm).matrix)
        split = len(m.inter_body_edges)
        for part in m.body_subgraphs:
            split += matrix_rank(
                rigidity_matrix(part, p.restrict(part.vertices), norm).matrix
            )
        if (total == split) != verdict:
            raise InconsistencyError(
                "sparsity and direct-sum rank disagree on essential independence"
            )
    return verdict


# ---- relative rigidity and containers ------------------------------------


def _check_sub_multibody(g: MultiBodyGraph, h: MultiBodyGraph, norm: NormSpec) -> None:
    for b in h.bodies:
        if frozenset(b) not in g.body_index:
            raise InputError(f"body {list(b)} of the part is not a body of the host")
    if not h.underlying.is_subgraph_of(g.underlying):
        raise InputError("the part must be a subgraph of the host")
    need = _independence_threshold(norm)
    if h.underlying.n_vertices < need:
        raise InputError(
            f"the anchored part needs at least {need} vertices for {norm}, "
            f"got {h.underlying.n_vertices}"
        )


def relative_rigidity_multibody(
    g: MultiBodyGraph, h: MultiBodyGraph, norm: NormSpec, seed: int = 0
) -> RelativeRigidityVerdict:
    """Relative rigidity of a sub-structure whose bodies are bodies of g."""
    _check_sub_multibody(g, h, norm)
    return relative_rigidity(g.underlying, h.underlying, norm, seed=seed)


def rigid_container_multibody(
    g: MultiBodyGraph, h: MultiBodyGraph, norm: NormSpec
) -> MultiBodyGraph | None:
    """Rigid multi-body subgraph of g containing h, or None when none exists.

    The collapsed multigraph is thinned to an independent bar set, which
    preserves the structure's freedom; every pair of h's bodies must then be
    linked, by a surviving bar or by the tight collapsed subgraph blocking
    the pair's insertion.  A pair with neither decides the negative, and by
    the multi-body equivalence that is exactly the failure of relative
    rigidity, in any dimension and for either norm family.
    """
    _check_sub_multibody(g, h, norm)
    k = body_bar_count(norm)
    count = SparsityCount(k, k)
    bb = body_bar_graph(g)
    keep = independent_edge_indices(bb.graph, count)
    thin = MultiGraph(bb.graph.vertices, tuple(bb.graph.edges[i] for i in keep))
    bar_pos = {e: t for t, e in enumerate(g.inter_body_edges)}
    chosen_bodies = {g.body_index[frozenset(b)] for b in h.bodies}
    chosen_bars = {bar_pos[e] for e in h.inter_body_edges}
    anchors = sorted(chosen_bodies)
    for a, b in combinations(anchors, 2):
        # Probing with one more parallel bar is legitimate for every pair,
        # adjacent or not, so each pair must be inside a tight subgraph.
        blocker = blocking_tight_subgraph(thin, count, a, b)
        if blocker is None:
            return None
        inside = set(blocker.vertices)
        chosen_bodies |= inside
        for pos, e in enumerate(thin.edges):
            if e[0] in inside and e[1] in inside:
                chosen_bars.add(keep[pos])
    bodies = tuple(g.bodies[i] for i in sorted(chosen_bodies))
    bars = set(g.inter_body_edges[t] for t in sorted(chosen_bars))
    keep_vs = {v for b in bodies for v in b}
    owner = g.body_of
    vs = tuple(v for v in g.underlying.vertices if v in keep_vs)
    es = tuple(
        e
        for e in g.underlying.edges
        if e in bars
        or (e[0] in keep_vs and e[1] in keep_vs and owner[e[0]] == owner[e[1]])
    )
    return MultiBodyGraph(SimpleGraph(vs, es), bodies, tuple(sorted(bars)))


# ---- towers of multi-body structures -------------------------------------


@dataclass(frozen=True)
class MultiBodyTower:
    """Increasing sequence of multi-body structures, optionally targeted."""

    stages: tuple[MultiBodyGraph, ...]
    target: MultiBodyGraph | None = None

    def __init__(
        self, stages: Iterable[MultiBodyGraph], target: MultiBodyGraph | None = None
    ):
        object.__setattr__(self, "stages", tuple(stages))
        object.__setattr__(self, "target", target)
        if not self.stages:
            raise InputError("a tower needs at least one stage")

    @property
    def depth(self) -> int:
        return len(self.stages)

    @property
    def reference(self) -> MultiBodyGraph:
        return self.target if self.target is not None else self.stages[-1]


def validate_multibody_tower(t: MultiBodyTower) -> None:
    """Stage k+1 must contain stage k and carry every one of its bodies."""

    def check(small: MultiBodyGraph, large: MultiBodyGraph, idx: int, what: str) -> None:
        for b in small.bodies:
            if frozenset(b) not in large.body_index:
                raise NestingError(
                    idx, f"{what} does not carry body {list(b)} of its predecessor"
                )
        if not small.underlying.is_subgraph_of(large.underlying):
            raise NestingError(idx, f"{what} does not contain its predecessor")

    for k in range(t.depth - 1):
        check(t.stages[k], t.stages[k + 1], k + 1, f"stage {k + 1}")
    if t.target is not None:
        check(t.stages[-1], t.target, t.depth - 1, "the target")


BODYBAR_TOWER_RIGID = "Rigid"
BODYBAR_TOWER_MINIMAL = "EssentiallyMinimallyRigid"
BODYBAR_TOWER_NOT = "NotCertified"


@dataclass(frozen=True)
class BodyBarTowerVerdict:
    """Outcome of the staged multi-body decision.

    tight_witness holds the nested tight collapsed subgraphs on stable body
    labels when the direct extraction succeeds; container_witness holds the
    per-pair rigid containers when the decision had to fall back on relative
    rigidity.  At most one of the two is present.
    """

    status: str
    tight_witness: tuple[MultiGraph, ...] | None = None
    container_witness: tuple[MultiBodyGraph, ...] | None = None


def bodybar_tower_decide(
    t: MultiBodyTower, norm: NormSpec, seed: int = 0
) -> BodyBarTowerVerdict:
    """Certify a staged multi-body presentation through its collapsed graphs.

    Mirrors the planar tower decision: each stage's collapsed multigraph must
    admit a (k, k)-tight spanning subgraph extending the previous witness.  A
    witness covering every body certifies Rigid, and EssentiallyMinimallyRigid
    when it also exhausts the reference bars, so that no bar could be spared.
    When some stage has no tight spanning subgraph the decision falls back on
    rigid containers of consecutive pairs, which certify Rigid exactly when
    relative rigidity holds stage by stage and the containers reach every
    body.
    """
    validate_multibody_tower(t)
    k = body_bar_count(norm)
    count = SparsityCount(k, k)
    ref = t.reference
    ref_lab = labeled_body_bar(ref)
    witness: list[MultiGraph] = []
    prev: tuple[tuple[int, int], ...] = ()
    extracted = True
    for stage in t.stages:
        tight = extend_to_tight_spanning(labeled_body_bar(stage), count, prev)
        if tight is None:
            extracted = False
            break
        witness.append(tight)
        prev = tight.edges
    if extracted:
        # nesting makes the last witness the union of them all
        if set(witness[-1].vertices) != set(ref_lab.vertices):
            return BodyBarTowerVerdict(BODYBAR_TOWER_NOT, tight_witness=tuple(witness))
        status = (
            BODYBAR_TOWER_MINIMAL
            if sorted(witness[-1].edges) == sorted(ref_lab.edges)
            else BODYBAR_TOWER_RIGID
        )
        return BodyBarTowerVerdict(status, tight_witness=tuple(witness))
    if t.depth == 1:
        return BodyBarTowerVerdict(BODYBAR_TOWER_NOT)
    containers: list[MultiBodyGraph] = []
    for i in range(t.depth - 1):
        small, large = t.stages[i], t.stages[i + 1]
        try:
            c = rigid_container_multibody(large, small, norm)
            if c is None:
                check = relative_rigidity_multibody(
                    large, small, norm, seed=seed + 17 * i
                )
                if check.relatively_rigid:
                    raise InconsistencyError(
                        f"stage {i + 1}: relatively rigid but no container found"
                    )
                return BodyBarTowerVerdict(BODYBAR_TOWER_NOT)
        except InputError:
            return BodyBarTowerVerdict(BODYBAR_TOWER_NOT)
        containers.append(c)
    covered: set[frozenset[int]] = set()
    for c in containers:
        covered.update(frozenset(b) for b in c.bodies)
    if covered != {frozenset(b) for b in ref.bodies}:
        return BodyBarTowerVerdict(
            BODYBAR_TOWER_NOT, container_witness=tuple(containers)
        )
    return BodyBarTowerVerdict(
        BODYBAR_TOWER_RIGID, container_witness=tuple(containers)
    )
