"""Bar-joint frameworks in (R^d, lq): matrices, flexes, tracking.

The rigidity matrix of a framework has one row per edge vw with the signed
power (p_v - p_w)^(q-1) in the v block and its negation in the w block, where
x^(e) acts componentwise as sgn(x)|x|^e.  For q = 2 this is the classical
Euclidean matrix up to scale.  Rows are orientation-independent because the
signed power is odd.

Numeric rank uses the SVD cutoff  sigma > eps * sigma_max * max(rows, cols)
with eps = 1e-9 by default.  For integer q an exact rational/integer oracle
(fraction-free elimination) is available and is used to confirm rank
decisions where the public API says so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    ContinuationError,
    InconsistencyError,
    InputError,
    PlacementError,
    SamplingError,
)
from .graphs import SimpleGraph
from . import sparsity
from .sparsity import LAMAN, QNORM_2D

RANK_EPS = 1e-9

QValue = int | float | Fraction


@dataclass(frozen=True)
class NormSpec:
    """Ambient space: dimension d >= 2 and norm exponent q in (1, inf)."""

    d: int
    q: QValue

    def __post_init__(self) -> None:
        if self.d < 2:
            raise InputError(f"dimension must be at least 2, got {self.d}")
        qf = float(self.q)
        if not math.isfinite(qf) or qf <= 1.0:
            raise InputError(f"norm exponent must lie in (1, inf), got {self.q}")

    @property
    def euclidean(self) -> bool:
        return float(self.q) == 2.0

    @property
    def q_is_integer(self) -> bool:
        if isinstance(self.q, int):
            return True
        if isinstance(self.q, Fraction):
            return self.q.denominator == 1
        return float(self.q).is_integer()

    @property
    def q_int(self) -> int:
        if not self.q_is_integer:
            raise InputError(f"norm exponent {self.q} is not an integer")
        return int(self.q)

    @property
    def trivial_dim_generic(self) -> int:
        """Dimension of the rigid-motion space at placements in general position."""
        if self.euclidean:
            return self.d * (self.d + 1) // 2
        return self.d

    @classmethod
    def parse(cls, text: str) -> "NormSpec":
        d = None
        q: QValue | None = None
        for part in text.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "d":
                d = int(value)
            elif key == "q":
                if "/" in value:
                    q = Fraction(value)
                else:
                    q = int(value) if value.lstrip("+-").isdigit() else float(value)
            else:
                raise InputError(f"unknown norm field {key!r}")
        if d is None or q is None:
            raise InputError(f"norm spec {text!r} must give both d and q")
        return cls(d, q)

    def __str__(self) -> str:
        return f"d={self.d},q={self.q}"


@dataclass(frozen=True)
class Placement:
    """Assignment of a point in R^d to each vertex label."""

    dim: int
    coords: dict[int, tuple[float, ...]]

    def __init__(self, dim: int, coords: Mapping[int, Sequence[float]]):
        fixed = {}
        for v, pt in coords.items():
            pt = tuple(float(x) for x in pt)
            if len(pt) != dim:
                raise PlacementError(
                    f"vertex {v} has a {len(pt)}-coordinate point in dimension {dim}"
                )
            fixed[int(v)] = pt
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coords", fixed)

    def __contains__(self, v: int) -> bool:
        return v in self.coords

    def __getitem__(self, v: int) -> tuple[float, ...]:
        return self.coords[v]

    def array_for(self, g: SimpleGraph) -> np.ndarray:
        missing = [v for v in g.vertices if v not in self.coords]
        if missing:
            raise PlacementError(f"placement misses vertices {missing}")
        return np.array([self.coords[v] for v in g.vertices], dtype=float)

    def restrict(self, labels: Iterable[int]) -> "Placement":
        keep = set(labels)
        return Placement(self.dim, {v: p for v, p in self.coords.items() if v in keep})

    @classmethod
    def from_array(cls, g: SimpleGraph, arr: np.ndarray) -> "Placement":
        arr = np.asarray(arr, dtype=float)
        if arr.shape[0] != g.n_vertices:
            raise PlacementError("array row count does not match the vertex count")
        return cls(arr.shape[1], {v: tuple(arr[i]) for i, v in enumerate(g.vertices)})


VelocityField = dict[int, np.ndarray]


def signed_power(x: np.ndarray, e: float) -> np.ndarray:
    return np.sign(x) * np.abs(x) ** e


@dataclass(frozen=True)
class RigidityMatrix:
    matrix: np.ndarray
    vertex_order: tuple[int, ...]
    edge_order: tuple[tuple[int, int], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def rigidity_matrix(g: SimpleGraph, p: Placement, norm: NormSpec) -> RigidityMatrix:
    """One row per edge in input order, d columns per vertex in graph order."""
    if p.dim != norm.d:
        raise PlacementError(f"placement dimension {p.dim} != norm dimension {norm.d}")
    pts = p.array_for(g)
    d = norm.d
    e = float(norm.q) - 1.0
    m = np.zeros((g.n_edges, d * g.n_vertices))
    idx = g.index_of
    for r, (a, b) in enumerate(g.edges):
        ia, ib = idx[a], idx[b]
        row = signed_power(pts[ia] - pts[ib], e)
        m[r, d * ia : d * ia + d] = row
        m[r, d * ib : d * ib + d] = -row
    return RigidityMatrix(m, g.vertices, g.edges)


def _rank_from_singulars(s: np.ndarray, shape: tuple[int, int], eps: float) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    cutoff = eps * s[0] * max(shape)
    return int(np.sum(s > cutoff))


def matrix_rank(m: np.ndarray, eps: float = RANK_EPS) -> int:
    if min(m.shape) == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return _rank_from_singulars(s, m.shape, eps)


def kernel_basis(m: np.ndarray, eps: float = RANK_EPS) -> np.ndarray:
    """Orthonormal rows spanning the kernel."""
    cols = m.shape[1]
    if m.shape[0] == 0 or cols == 0:
        return np.eye(cols)
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    r = _rank_from_singulars(s, m.shape, eps)
    return vt[r:]


def trivial_motion_basis(
    g: SimpleGraph, p: Placement, norm: NormSpec, eps: float = RANK_EPS
) -> np.ndarray:
    """Orthonormal basis of the evaluated rigid-motion space.

    Generators are the d coordinate translations plus, in the Euclidean case,
    the d(d-1)/2 infinitesimal rotations.  Their evaluations at p can be
    dependent (few vertices, degenerate positions), so the dimension is the
    rank of the evaluated set, never assumed maximal.
    """
    pts = p.array_for(g)
    n, d = g.n_vertices, norm.d
    gens = []
    for i in range(d):
        f = np.zeros((n, d))
        f[:, i] = 1.0
        gens.append(f.ravel())
    if norm.euclidean:
        for i in range(d):
            for j in range(i + 1, d):
                f = np.zeros((n, d))
                f[:, i] = -pts[:, j]
                f[:, j] = pts[:, i]
                gens.append(f.ravel())
    gmat = np.array(gens)
    if gmat.size == 0:
        return np.zeros((0, n * d))
    u, s, vt = np.linalg.svd(gmat, full_matrices=False)
    r = _rank_from_singulars(s, gmat.shape, eps)
    return vt[:r]


@dataclass(frozen=True)
class FlexReport:
    """Rank/nullity bookkeeping of one framework at one placement."""

    rank: int
    nullity: int
    trivial_dim: int
    flex_dim: int
    vertex_order: tuple[int, ...]
    nontrivial_flex_basis: tuple[np.ndarray, ...] = field(compare=False, default=())

    @property
    def rigid(self) -> bool:
        return self.flex_dim == 0

    @property
    def classification(self) -> str:
        return "Rigid" if self.rigid else "Flexible"

    def flex_field(self, i: int = 0) -> VelocityField:
        arr = self.nontrivial_flex_basis[i]
        return {v: arr[j].copy() for j, v in enumerate(self.vertex_order)}


def flex_report(
    g: SimpleGraph, p: Placement, norm: NormSpec, tol: float = RANK_EPS
) -> FlexReport:
    d, n = norm.d, g.n_vertices
    rm = rigidity_matrix(g, p, norm)
    kern = kernel_basis(rm.matrix, tol)
    rank = d * n - kern.shape[0]
    nullity = kern.shape[0]
    triv = trivial_motion_basis(g, p, norm, tol)
    trivial_dim = triv.shape[0]
    flex_dim = nullity - trivial_dim
    basis: tuple[np.ndarray, ...] = ()
    if flex_dim > 0:
        # Remove the trivial component from each kernel vector, then take an
        # orthonormal set of what is left.
        residual = kern - (kern @ triv.T) @ triv
        u, s, vt = np.linalg.svd(residual, full_matrices=False)
        r = _rank_from_singulars(s, residual.shape, tol)
        basis = tuple(vt[i].reshape(n, d) for i in range(min(r, flex_dim)))
    return FlexReport(
        rank=rank,
        nullity=nullity,
        trivial_dim=trivial_dim,
        flex_dim=flex_dim,
        vertex_order=g.vertices,
        nontrivial_flex_basis=basis,
    )


# ---- placement sampling ------------------------------------------------


def _off_variety(pts: np.ndarray, g: SimpleGraph) -> bool:
    idx = g.index_of
    for a, b in g.edges:
        if np.any(pts[idx[a]] == pts[idx[b]]):
            return False
    return True


def random_placement(
    g: SimpleGraph,
    norm: NormSpec,
    seed: int,
    scale: float = 1.0,
    max_attempts: int = 100,
) -> Placement:
    """Uniform in [-scale, scale]^d, resampled while any edge has an equal
    coordinate pair (keeps the placement off the degenerate variety)."""
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        pts = rng.uniform(-scale, scale, size=(g.n_vertices, norm.d))
        if _off_variety(pts, g):
            return Placement.from_array(g, pts)
    raise SamplingError(f"no admissible placement in {max_attempts} attempts")


def random_integer_points(
    g: SimpleGraph, norm: NormSpec, seed: int, bound: int = 10**6, max_attempts: int = 100
) -> dict[int, tuple[int, ...]]:
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        pts = rng.integers(-bound, bound + 1, size=(g.n_vertices, norm.d))
        if _off_variety(pts, g):
            return {v: tuple(int(x) for x in pts[i]) for i, v in enumerate(g.vertices)}
    raise SamplingError(f"no admissible integer placement in {max_attempts} attempts")


# ---- exact rational oracle ---------------------------------------------


def _signed_power_exact(x: Fraction, e: int) -> Fraction:
    if x > 0:
        return x**e
    if x < 0:
        return -((-x) ** e)
    return Fraction(0)


def rigidity_matrix_exact(
    g: SimpleGraph, points: Mapping[int, Sequence[int | Fraction]], norm: NormSpec
) -> list[list[Fraction]]:
    """Exact matrix entries; requires an integer norm exponent."""
    e = norm.q_int - 1
    d = norm.d
    idx = g.index_of
    pts = [tuple(Fraction(x) for x in points[v]) for v in g.vertices]
    rows = []
    for a, b in g.edges:
        pa, pb = pts[idx[a]], pts[idx[b]]
        row = [Fraction(0)] * (d * g.n_vertices)
        for i in range(d):
            val = _signed_power_exact(pa[i] - pb[i], e)
            row[d * idx[a] + i] = val
            row[d * idx[b] + i] = -val
        rows.append(row)
    return rows


def exact_rank(rows: Sequence[Sequence[int | Fraction]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    work: list[list[int]] = []
    for row in rows:
        fracs = [Fraction(x) for x in row]
        denom = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
        work.append([int(f * denom) for f in fracs])
    if not work or not work[0]:
        return 0
    m, n = len(work), len(work[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, m) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        for r in range(row + 1, m):
            for c in range(col + 1, n):
                work[r][c] = (work[row][col] * work[r][c] - work[r][col] * work[row][c]) // prev
            work[r][col] = 0
        prev = work[row][col]
        row += 1
        rank += 1
        if row == m:
            break
    return rank


def exact_generic_rank(g: SimpleGraph, norm: NormSpec, seed: int = 0) -> int:
    pts = random_integer_points(g, norm, seed)
    return exact_rank(rigidity_matrix_exact(g, pts, norm))


# ---- generic-rank decisions --------------------------------------------


def generic_rank(
    g: SimpleGraph,
    norm: NormSpec,
    trials: int = 5,
    seed: int = 0,
    exact_confirm: bool = False,
) -> int:
    """Maximum rigidity-matrix rank over seeded random placements.

    With exact_confirm and an integer exponent the value is checked against
    fraction-free elimination at random integer placements; a persistent
    disagreement raises InconsistencyError.
    """
    if trials < 1:
        raise InputError("generic_rank needs at least one trial")
    best = 0
    for t in range(trials):
        p = random_placement(g, norm, seed + t)
        best = max(best, matrix_rank(rigidity_matrix(g, p, norm).matrix))
    if exact_confirm and norm.q_is_integer:
        exact = max(exact_generic_rank(g, norm, seed + t) for t in range(3))
        if exact != best:
            raise InconsistencyError(
                f"numeric generic rank {best} disagrees with exact rank {exact}"
            )
    return best


def _rigid_2d_combinatorial(g: SimpleGraph, norm: NormSpec) -> bool:
    if g.n_vertices <= 1:
        return True
    count = LAMAN if norm.euclidean else QNORM_2D
    return sparsity.tight_spanning_subgraph(g, count) is not None


@dataclass(frozen=True)
class GenericRigidityVerdict:
    rigid: bool
    report: FlexReport = field(compare=False)
    placement: Placement = field(compare=False)
    combinatorial: bool | None = field(compare=False, default=None)

    @property
    def classification(self) -> str:
        return "Rigid" if self.rigid else "Flexible"


def is_rigid_generic(
    g: SimpleGraph, norm: NormSpec, trials: int = 5, seed: int = 0
) -> GenericRigidityVerdict:
    """Generic rigidity from the best of several random placements.

    In the plane the verdict is cross-checked against the tight-spanning
    combinatorial characterization; disagreement means the numeric tolerance
    failed and raises InconsistencyError.
    """
    if trials < 1:
        raise InputError("is_rigid_generic needs at least one trial")
    best: FlexReport | None = None
    best_p: Placement | None = None
    for t in range(trials):
        p = random_placement(g, norm, seed + t)
        rep = flex_report(g, p, norm)
        if best is None or rep.rank > best.rank:
            best, best_p = rep, p
    assert best is not None and best_p is not None
    comb: bool | None = None
    if norm.d == 2:
        comb = _rigid_2d_combinatorial(g, norm)
        if comb != best.rigid:
            raise InconsistencyError(
                f"combinatorial verdict {comb} disagrees with numeric "
                f"verdict {best.rigid} (rank {best.rank})"
            )
    return GenericRigidityVerdict(
        rigid=best.rigid, report=best, placement=best_p, combinatorial=comb
    )


# ---- flex extension -----------------------------------------------------


@dataclass(frozen=True)
class ExtensionResult:
    extends: bool
    residual: float
    flex: VelocityField | None = field(compare=False, default=None)


def _field_to_vec(g: SimpleGraph, u: Mapping[int, Sequence[float]], d: int) -> np.ndarray:
    out = np.zeros((g.n_vertices, d))
    for i, v in enumerate(g.vertices):
        if v not in u:
            raise InputError(f"velocity field misses vertex {v}")
        vec = np.asarray(u[v], dtype=float)
        if vec.shape != (d,):
            raise InputError(f"velocity of vertex {v} is not {d}-dimensional")
        out[i] = vec
    return out


def flex_extends(
    g_small: SimpleGraph,
    g_large: SimpleGraph,
    p: Placement,
    u: Mapping[int, Sequence[float]],
    norm: NormSpec,
    tol: float = 1e-8,
) -> ExtensionResult:
    """Least-squares extension of a flex of the small framework to the large.

    The input must be a flex of (g_small, p) already; velocities for the new
    vertices are solved for, and the extension succeeds when the combined
    residual over all edges of g_large drops below tol (relative to the input
    speed scale).
    """
    if not g_small.is_subgraph_of(g_large):
        raise InputError("first graph is not a subgraph of the second")
    d = norm.d
    u_small = _field_to_vec(g_small, u, d)
    rm_small = rigidity_matrix(g_small, p.restrict(g_small.vertices), norm)
    scale = max(1.0, float(np.max(np.abs(u_small))) if u_small.size else 1.0)
    if rm_small.matrix.size:
        pre = float(np.max(np.abs(rm_small.matrix @ u_small.ravel())))
        if pre > tol * scale * 10:
            raise InputError(
                f"input is not a flex of the small framework (residual {pre:.3e})"
            )
    rm = rigidity_matrix(g_large, p, norm)
    new_vertices = [v for v in g_large.vertices if v not in g_small.vertex_set]
    idx = g_large.index_of
    known_cols = np.zeros(d * g_large.n_vertices, dtype=bool)
    full = np.zeros((g_large.n_vertices, d))
    for v in g_small.vertices:
        known_cols[d * idx[v] : d * idx[v] + d] = True
        full[idx[v]] = u_small[g_small.index_of[v]]
    if new_vertices:
        a = rm.matrix[:, ~known_cols]
        b = -rm.matrix[:, known_cols] @ full.ravel()[known_cols]
        w, *_ = np.linalg.lstsq(a, b, rcond=None)
        full.ravel()[~known_cols] = w
    resid_vec = rm.matrix @ full.ravel() if rm.matrix.size else np.zeros(0)
    residual = float(np.max(np.abs(resid_vec))) if resid_vec.size else 0.0
    ok = residual <= tol * scale
    flex = {v: full[idx[v]].copy() for v in g_large.vertices} if ok else None
    return ExtensionResult(extends=ok, residual=residual, flex=flex)


# ---- continuation ------------------------------------------------------


def _pinned_coordinates(g: SimpleGraph, norm: NormSpec) -> list[int]:
    """Flat coordinate indices held fixed while tracking.

    Vertex 0 is pinned fully; Euclidean tracking pins further leading
    coordinates of the following vertices until d(d+1)/2 are held.
    """
    want = norm.trivial_dim_generic
    if g.n_vertices * norm.d < want:
        raise InputError("too few vertices to pin the rigid motions")
    pins = []
    for pos in range(g.n_vertices):
        for i in range(norm.d):
            if len(pins) == want:
                return pins
            pins.append(pos * norm.d + i)
    return pins


def _lq_lengths(pts: np.ndarray, g: SimpleGraph, qf: float) -> np.ndarray:
    idx = g.index_of
    out = np.zeros(g.n_edges)
    for r, (a, b) in enumerate(g.edges):
        diff = pts[idx[a]] - pts[idx[b]]
        out[r] = np.sum(np.abs(diff) ** qf) ** (1.0 / qf)
    return out


def _length_jacobian(pts: np.ndarray, g: SimpleGraph, qf: float) -> np.ndarray:
    """Jacobian of the edge-length map; rows are unit-scaled matrix rows."""
    idx = g.index_of
    d = pts.shape[1]
    jac = np.zeros((g.n_edges, pts.size))
    for r, (a, b) in enumerate(g.edges):
        diff = pts[idx[a]] - pts[idx[b]]
        norm_q = np.sum(np.abs(diff) ** qf) ** (1.0 / qf)
        row = signed_power(diff, qf - 1.0) / norm_q ** (qf - 1.0)
        jac[r, d * idx[a] : d * idx[a] + d] = row
        jac[r, d * idx[b] : d * idx[b] + d] = -row
    return jac


def continuation_track(
    g: SimpleGraph,
    p0: Placement,
    norm: NormSpec,
    direction: Mapping[int, Sequence[float]],
    steps: int,
    step_length: float,
    newton_tol: float = 1e-12,
    max_newton: int = 25,
    length_tol: float = 1e-8,
) -> list[Placement]:
    """Euler predictor / Newton corrector path through the configuration set.

    Rigid motions are removed by pinning coordinates (vertex 0 fully, plus
    leading coordinates of later vertices in the Euclidean case).  The input
    direction is projected onto the pinned kernel at the start; a zero
    projection yields a constant path.  Returns the `steps` placements after
    the start; every edge keeps its lq length to within length_tol.
    """
    if steps < 1:
        raise InputError("need at least one step")
    qf = float(norm.q)
    pts = p0.array_for(g)
    lengths0 = _lq_lengths(pts, g, qf)
    if np.any(lengths0 == 0.0):
        raise PlacementError("some edge has coincident endpoints")
    pins = _pinned_coordinates(g, norm)
    free = np.ones(pts.size, dtype=bool)
    free[pins] = False
    dir_full = _field_to_vec(g, direction, norm.d).ravel()
    prev_dir: np.ndarray | None = None
    out: list[Placement] = []
    x = pts.ravel().copy()
    for step in range(steps):
        jac = _length_jacobian(x.reshape(-1, norm.d), g, qf)
        kern = kernel_basis(jac[:, free]) if jac.size else np.eye(int(free.sum()))
        seed_dir = prev_dir if prev_dir is not None else dir_full[free]
        proj = kern.T @ (kern @ seed_dir)
        nrm = float(np.linalg.norm(proj))
        if nrm < 1e-12:
            tangent = np.zeros_like(proj)
        else:
            tangent = proj / nrm
            if prev_dir is not None and float(tangent @ prev_dir) < 0:
                tangent = -tangent
        x_new = x.copy()
        x_new[free] += step_length * tangent
        # Newton corrections on the edge-length equations.
        converged = False
        for _ in range(max_newton):
            resid = _lq_lengths(x_new.reshape(-1, norm.d), g, qf) - lengths0
            worst = float(np.max(np.abs(resid))) if resid.size else 0.0
            if worst < newton_tol:
                converged = True
                break
            jac_c = _length_jacobian(x_new.reshape(-1, norm.d), g, qf)[:, free]
            delta, *_ = np.linalg.lstsq(jac_c, -resid, rcond=None)
            x_new[free] += delta
        if not converged:
            raise ContinuationError(step, f"corrector stalled at step {step}")
        drift = _lq_lengths(x_new.reshape(-1, norm.d), g, qf) - lengths0
        if drift.size and float(np.max(np.abs(drift))) > length_tol:
            raise ContinuationError(step, f"length drift exceeded tolerance at step {step}")
        x = x_new
        prev_dir = tangent if nrm >= 1e-12 else None
        out.append(Placement.from_array(g, x.reshape(-1, norm.d)))
    return out


# ---- growth profiles ---------------------------------------------------


@dataclass(frozen=True)
class FlexGrowthProfile:
    speeds: tuple[float, ...]
    trend: str
    cancellation_stage: int | None = None


def _max_speed(u: Mapping[int, np.ndarray]) -> float:
    return max(float(np.linalg.norm(vec)) for vec in u.values())


def flex_growth_profile(
    stages: Sequence[SimpleGraph],
    placements: Sequence[Placement],
    norm: NormSpec,
    base_flex: Mapping[int, Sequence[float]] | None = None,
    tol: float = 1e-8,
) -> FlexGrowthProfile:
    """Extend a stage-1 nontrivial flex up a nested sequence of frameworks.

    Speeds are per-stage maxima of vertex speed, normalized so stage 1 is 1.
    If some stage refuses the extension the profile stops there and reports
    the cancellation stage.  Without a base flex the first stage's computed
    nontrivial flex is used; a rigid first stage gives an empty profile.
    """
    if len(stages) != len(placements):
        raise InputError("stage and placement counts differ")
    if not stages:
        raise InputError("need at least one stage")
    for k in range(len(stages) - 1):
        if not stages[k].is_subgraph_of(stages[k + 1]):
            raise InputError(f"stage {k + 1} does not contain stage {k}")
        for v in stages[k].vertices:
            a = np.asarray(placements[k][v])
            b = np.asarray(placements[k + 1][v])
            if not np.allclose(a, b, atol=1e-12, rtol=0.0):
                raise InputError(f"placements disagree on vertex {v} at stage {k + 1}")
    if base_flex is None:
        rep = flex_report(stages[0], placements[0].restrict(stages[0].vertices), norm)
        if rep.flex_dim == 0:
            return FlexGrowthProfile(speeds=(), trend="empty")
        u: Mapping[int, np.ndarray] = rep.flex_field(0)
    else:
        u = {v: np.asarray(vec, dtype=float) for v, vec in base_flex.items()}
    speeds = [_max_speed({v: u[v] for v in stages[0].vertices})]
    if speeds[0] == 0.0:
        raise InputError("base flex is identically zero on stage 1")
    cancellation = None
    for k in range(1, len(stages)):
        ext = flex_extends(stages[k - 1], stages[k], placements[k], u, norm, tol=tol)
        if not ext.extends:
            cancellation = k
            break
        assert ext.flex is not None
        u = ext.flex
        speeds.append(_max_speed(u))
    base = speeds[0]
    rel = tuple(s / base for s in speeds)
    diffs = [rel[i + 1] - rel[i] for i in range(len(rel) - 1)]
    if not diffs:
        trend = "constant"
    elif all(abs(x) <= 1e-9 for x in diffs):
        trend = "constant"
    elif all(x > 0 for x in diffs):
        trend = "increasing"
    elif all(x < 0 for x in diffs):
        trend = "decreasing"
    else:
        trend = "mixed"
    return FlexGrowthProfile(speeds=rel, trend=trend, cancellation_stage=cancellation)
