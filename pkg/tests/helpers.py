"""Seeded random generators shared across test modules."""

import random

from rigidkit.bodybar import body_bar_count, validate_multibody
from rigidkit.graphs import SimpleGraph, normalize_edge
from rigidkit.moves import (
    EdgeMove,
    VertexExtension,
    VertexTo4Cycle,
    VertexToK4,
    apply_move,
)


def random_graph(n: int, p: float, seed: int) -> SimpleGraph:
    rng = random.Random(seed)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return SimpleGraph(range(n), edges)


def _grow_step(g, mode, rng, protected, n_target):
    nxt = max(g.vertices) + 1
    verts = list(g.vertices)
    removable = [e for e in g.edges if e not in protected]
    options = []
    if g.n_vertices >= 2:
        options.append(("ext", 40))
    if g.n_vertices >= 3 and removable:
        options.append(("edge", 25))
    if mode == "qnorm":
        if g.n_vertices == 1 or g.n_vertices + 3 <= n_target:
            options.append(("k4", 20))
        if any(g.degree(v) >= 2 for v in verts):
            options.append(("cycle", 15))
    kind = rng.choices([k for k, _ in options], [w for _, w in options])[0]
    if kind == "ext":
        a, b = rng.sample(verts, 2)
        move = VertexExtension(nxt, (a, b))
    elif kind == "edge":
        a, b = rng.choice(removable)
        c = rng.choice([v for v in verts if v not in (a, b)])
        move = EdgeMove((a, b), nxt, (a, b, c))
    elif kind == "k4":
        base = rng.choice(verts)
        added = (nxt, nxt + 1, nxt + 2)
        reassigned = tuple(
            (x, rng.choice(added))
            for x in g.neighbors(base)
            if normalize_edge(base, x) not in protected and rng.random() < 0.5
        )
        move = VertexToK4(base, added, reassigned)
    else:
        base = rng.choice([v for v in verts if g.degree(v) >= 2])
        na, nb = rng.sample(list(g.neighbors(base)), 2)
        moved = tuple(
            w
            for w in g.neighbors(base)
            if w not in (na, nb)
            and normalize_edge(base, w) not in protected
            and rng.random() < 0.5
        )
        move = VertexTo4Cycle(base, (na, nb), nxt, moved)
    return apply_move(g, move)


def grow_tight_graph(mode, n_target, seed, start=None, protected=()):
    """Random tight graph built by forward moves: from K2 under (2,3)
    (mode "euclidean") or from K1 under (2,2) (mode "qnorm").  Edges in
    `protected` are never removed or reassigned, so a protected start
    stays a subgraph of the result."""
    rng = random.Random(seed)
    if start is None:
        start = (
            SimpleGraph([0, 1], [(0, 1)])
            if mode == "euclidean"
            else SimpleGraph([0], [])
        )
    fixed = {normalize_edge(*e) for e in protected}
    g = start
    while g.n_vertices < n_target:
        g = _grow_step(g, mode, rng, fixed, n_target)
    return g


def random_multibody(n_bodies, norm, seed, n_bars=None):
    """Random multi-body structure with complete bodies and disjoint bars.

    Bodies are sized so they are rigid for the norm and can host as many
    bars as the governing count asks for.  The default bar budget spreads
    around the tight count, so suites mix rigid, flexible and overbraced
    instances; the realized number can fall short when joints run out."""
    rng = random.Random(seed)
    k = body_bar_count(norm)
    base = norm.d + 1 if norm.euclidean else 2 * norm.d
    sizes = [max(base, k) + rng.randrange(2) for _ in range(n_bodies)]
    bodies = []
    label = 0
    for s in sizes:
        bodies.append(tuple(range(label, label + s)))
        label += s
    if n_bars is None:
        n_bars = max(1, k * (n_bodies - 1) + rng.randrange(-k, k + 1))
    free = {i: list(b) for i, b in enumerate(bodies)}
    bars = []
    for _ in range(60 * n_bars):
        if len(bars) == n_bars:
            break
        a, b = rng.sample(range(n_bodies), 2)
        if not free[a] or not free[b]:
            continue
        u = free[a].pop(rng.randrange(len(free[a])))
        w = free[b].pop(rng.randrange(len(free[b])))
        bars.append((u, w))
    within = [
        (b[i], b[j]) for b in bodies for i in range(len(b)) for j in range(i + 1, len(b))
    ]
    return validate_multibody(SimpleGraph(range(label), within + bars), bodies, norm)


def solve_exact(rows, rhs):
    """Unique rational solution of a linear system, or AssertionError.

    Asserts full column rank and consistency so a test using it also pins
    down uniqueness of the solution it freezes.
    """
    from fractions import Fraction

    aug = [
        [Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)
    ]
    n_cols = len(aug[0]) - 1
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        assert piv is not None, f"column {c} is free: solution not unique"
        aug[r], aug[piv] = aug[piv], aug[r]
        scale = aug[r][c]
        aug[r] = [v / scale for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        r += 1
    for row in aug[r:]:
        assert not row[-1], "inconsistent system"
    return [aug[i][-1] for i in range(n_cols)]
