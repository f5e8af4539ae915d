import random

import numpy as np
import pytest

from helpers import grow_tight_graph
from rigidkit.errors import InputError
from rigidkit.frameworks import (
    NormSpec,
    flex_report,
    is_rigid_generic,
    random_placement,
    rigidity_matrix,
    trivial_motion_basis,
)
from rigidkit.graphs import (
    SimpleGraph,
    Tower,
    complete_graph,
    cycle_graph,
    graph_union,
    induced_subgraph,
)
from rigidkit.sparsity import (
    LAMAN,
    QNORM_2D,
    extend_to_tight_spanning,
    independent_restriction,
    is_sparse,
)
from rigidkit.towers import (
    LAMAN_TOWER_MINIMAL,
    LAMAN_TOWER_NOT,
    LAMAN_TOWER_RIGID,
    TOWER_FLEXIBLE,
    TOWER_RIGID,
    TOWER_UNDECIDED,
    exhaustive_rigid_container,
    laman_tower_decide,
    relative_rigidity,
    relatively_rigid_subsequence,
    rigid_container_2d,
    sequential_rigidity_2d,
    tower_rigidity,
)

EUCLID2 = NormSpec(2, 2)
CUBIC2 = NormSpec(2, 3)
C4 = cycle_graph(4)
# The two ends of a C4 diagonal: no edge between them, so the mechanism
# stretches the pair and relative rigidity fails.
DIAGONAL = SimpleGraph([0, 2], [])


# ---- sparsity additions --------------------------------------------------


def test_independent_restriction_drops_latest_dependent_edge():
    k4 = complete_graph(4)
    thin = independent_restriction(k4, LAMAN)
    assert thin.edges == k4.edges[:5]
    assert is_sparse(thin, LAMAN).tight


def test_extend_to_tight_spanning_honors_seeds():
    k4 = complete_graph(4)
    tight = extend_to_tight_spanning(k4, LAMAN, ((2, 3),))
    assert tight is not None
    assert tight.has_edge(2, 3)
    assert is_sparse(tight, LAMAN).tight
    with pytest.raises(InputError):
        extend_to_tight_spanning(k4, LAMAN, ((0, 4),))


def test_extend_to_tight_spanning_none_when_underbraced():
    assert extend_to_tight_spanning(C4, LAMAN) is None


# ---- relative rigidity ---------------------------------------------------


def test_k3_relatively_rigid_in_k4():
    verdict = relative_rigidity(complete_graph(4), complete_graph(3), EUCLID2)
    assert verdict.relatively_rigid
    assert verdict.witness_flex is None
    assert verdict.nullity_graph == verdict.nullity_anchored == 3


def test_diagonal_pair_not_relatively_rigid_in_c4():
    verdict = relative_rigidity(C4, DIAGONAL, EUCLID2, seed=3)
    assert not verdict.relatively_rigid
    assert verdict.nullity_graph == 4
    assert verdict.nullity_anchored == 3
    assert verdict.witness_flex is not None


def test_edge_anchor_is_trivially_relatively_rigid():
    """An actual bar has no nontrivial flexes of its own to extend."""
    bar = SimpleGraph([0, 1], [(0, 1)])
    assert relative_rigidity(C4, bar, EUCLID2).relatively_rigid


def test_witness_flex_is_a_unit_nontrivial_kernel_element():
    verdict = relative_rigidity(C4, DIAGONAL, EUCLID2, seed=3)
    u = verdict.witness_flex
    vec = np.concatenate([u[v] for v in C4.vertices])
    rm = rigidity_matrix(C4, verdict.placement, EUCLID2)
    assert np.max(np.abs(rm.matrix @ vec)) < 1e-10
    assert np.linalg.norm(vec) == pytest.approx(1.0)
    triv = trivial_motion_basis(C4, verdict.placement, EUCLID2)
    residual = vec - triv.T @ (triv @ vec)
    assert np.linalg.norm(residual) > 1e-6


@pytest.mark.parametrize(
    "h",
    [
        SimpleGraph([0], []),
        SimpleGraph([0, 99], [(0, 99)]),
    ],
)
def test_relative_rigidity_input_errors(h):
    with pytest.raises(InputError):
        relative_rigidity(complete_graph(4), h, EUCLID2)


def test_relative_rigidity_nonEuclidean_needs_four_anchors():
    with pytest.raises(InputError):
        relative_rigidity(complete_graph(4), complete_graph(3), CUBIC2)
    verdict = relative_rigidity(complete_graph(5), complete_graph(4), CUBIC2)
    assert verdict.relatively_rigid


# ---- rigid containers in the plane ---------------------------------------


def test_container_for_k3_in_k4():
    container = rigid_container_2d(complete_graph(4), complete_graph(3), 2)
    assert container is not None
    assert complete_graph(3).is_subgraph_of(container)
    assert container.is_subgraph_of(complete_graph(4))
    assert is_rigid_generic(container, EUCLID2).rigid


def test_no_container_for_diagonal_in_c4():
    assert rigid_container_2d(C4, DIAGONAL, 2) is None


def test_container_under_cubic_count():
    container = rigid_container_2d(complete_graph(4), C4, 3)
    assert container is not None
    assert is_rigid_generic(container, CUBIC2).rigid


def test_container_survives_dependent_edges():
    """Redundant edges must be thinned away before the pebble queries run."""
    g = graph_union(complete_graph(4), complete_graph(4, offset=2))
    assert not is_sparse(g, LAMAN).sparse
    container = rigid_container_2d(g, SimpleGraph([0, 5], []), 2)
    assert container is not None
    assert is_rigid_generic(container, EUCLID2).rigid


def _random_suite(idx: int):
    """Graph, anchor and exponent for one equivalence trial."""
    rng = random.Random(idx)
    q = (2, 3, 2.5)[idx % 3]
    norm = NormSpec(2, q)
    mode = "euclidean" if q == 2 else "qnorm"
    n = rng.randint(5, 9)
    g = grow_tight_graph(mode, n, seed=idx * 17 + 1)
    if idx % 2:
        # Half the suites lose an edge so relative rigidity can fail.
        g = g.without_edge(*rng.choice(g.edges))
    low = 2 if q == 2 else 4
    size = rng.randint(low, min(n, low + 2))
    anchor_vertices = rng.sample(sorted(g.vertex_set), size)
    h = induced_subgraph(g, sorted(anchor_vertices))
    return g, h, q, norm


@pytest.mark.parametrize("idx", range(100))
def test_planar_container_matches_relative_rigidity(idx):
    g, h, q, norm = _random_suite(idx)
    verdict = relative_rigidity(g, h, norm, seed=idx)
    container = rigid_container_2d(g, h, q, seed=idx)
    assert verdict.relatively_rigid == (container is not None)
    if container is not None:
        assert h.is_subgraph_of(container)
        assert is_rigid_generic(container, norm, seed=idx).rigid
    else:
        u = verdict.witness_flex
        vec = np.concatenate([u[v] for v in g.vertices])
        rm = rigidity_matrix(g, verdict.placement, norm)
        assert np.max(np.abs(rm.matrix @ vec)) < 1e-10
        triv = trivial_motion_basis(g, verdict.placement, norm)
        assert np.linalg.norm(vec - triv.T @ (triv @ vec)) > 1e-6


# ---- tower certification -------------------------------------------------


def test_nested_complete_graphs_certify_rigid():
    t = Tower([complete_graph(4), complete_graph(5), complete_graph(6)])
    verdict = tower_rigidity(t, EUCLID2)
    assert verdict.status == TOWER_RIGID
    assert verdict.relatively_rigid_prefix == 3


def test_constant_c4_tower_certifies_flexible():
    verdict = tower_rigidity(Tower([C4, C4]), EUCLID2)
    assert verdict.status == TOWER_FLEXIBLE
    assert verdict.relatively_rigid_prefix == 1


def test_truncated_tower_stays_undecided():
    t = Tower([C4, C4], target=complete_graph(4))
    verdict = tower_rigidity(t, EUCLID2)
    assert verdict.status == TOWER_UNDECIDED
    assert not verdict.vertex_complete or verdict.relatively_rigid_prefix == 1


def test_vertex_incomplete_tower_stays_undecided():
    t = Tower([complete_graph(3)], target=complete_graph(4))
    verdict = tower_rigidity(t, EUCLID2)
    assert verdict.status == TOWER_UNDECIDED
    assert not verdict.vertex_complete


def test_flexible_stage_inside_rigid_successor_certifies():
    """A flexible stage is fine as long as the next stage pins it."""
    t = Tower([C4, complete_graph(4)])
    verdict = tower_rigidity(t, EUCLID2)
    assert verdict.status == TOWER_RIGID


def test_single_stage_tower_checks_the_stage_itself():
    assert tower_rigidity(Tower([complete_graph(4)]), EUCLID2).status == TOWER_RIGID
    assert tower_rigidity(Tower([C4]), EUCLID2).status == TOWER_FLEXIBLE


def test_undersized_stage_reports_its_index():
    t = Tower([SimpleGraph([0], []), complete_graph(3)])
    with pytest.raises(InputError, match="stage 1"):
        tower_rigidity(t, EUCLID2)


def _tight_tower(mode: str, sizes, seed: int) -> Tower:
    stages = []
    g = None
    for n in sizes:
        kept = g.edges if g is not None else ()
        g = grow_tight_graph(mode, n, seed=seed, start=g, protected=kept)
        stages.append(g)
    return Tower(stages)


def test_sequential_witness_for_tight_tower():
    t = _tight_tower("euclidean", (4, 6, 8), seed=11)
    witness = sequential_rigidity_2d(t, 2, seed=11)
    assert witness is not None
    assert len(witness) == 2
    for k, h in enumerate(witness):
        assert t.stages[k].is_subgraph_of(h)
        assert h.is_subgraph_of(t.stages[k + 1])
        assert is_rigid_generic(h, EUCLID2).rigid
    # A sequential certificate forces the union itself to be rigid.
    union = t.union
    assert flex_report(union, random_placement(union, EUCLID2, 5), EUCLID2).flex_dim == 0


def test_sequential_witness_under_cubic_count():
    t = _tight_tower("qnorm", (4, 6, 8), seed=23)
    witness = sequential_rigidity_2d(t, 3, seed=23)
    assert witness is not None
    for h in witness:
        assert is_rigid_generic(h, CUBIC2).rigid


def test_sequential_rigidity_refuses_flexible_tower():
    assert sequential_rigidity_2d(Tower([C4, C4]), 2) is None


def test_sequential_witness_inside_successor():
    """Stage misses an edge restored later; the container lives in between."""
    t = Tower([C4, complete_graph(4), complete_graph(5)])
    witness = sequential_rigidity_2d(t, 2)
    assert witness is not None
    assert C4.is_subgraph_of(witness[0])
    assert is_rigid_generic(witness[0], EUCLID2).rigid


# ---- tight tower extraction ----------------------------------------------


def test_tight_tower_is_its_own_minimal_witness():
    t = _tight_tower("euclidean", (4, 6, 8), seed=31)
    verdict = laman_tower_decide(t, 2)
    assert verdict.status == LAMAN_TOWER_MINIMAL
    assert verdict.witness == t.stages


def test_rigid_tower_yields_nested_tight_witness():
    t = Tower([complete_graph(4), complete_graph(5), complete_graph(6)])
    verdict = laman_tower_decide(t, 2)
    assert verdict.status == LAMAN_TOWER_RIGID
    for k, w in enumerate(verdict.witness):
        assert set(w.vertices) == set(t.stages[k].vertices)
        assert is_sparse(w, LAMAN).tight
        if k:
            assert verdict.witness[k - 1].is_subgraph_of(w)


def test_flexible_union_not_certified():
    assert laman_tower_decide(Tower([C4]), 2).status == LAMAN_TOWER_NOT


def test_tight_tower_cubic_count():
    t = _tight_tower("qnorm", (4, 6), seed=37)
    verdict = laman_tower_decide(t, 3)
    assert verdict.status == LAMAN_TOWER_MINIMAL
    for w in verdict.witness:
        assert is_sparse(w, QNORM_2D).tight


def test_vertex_incomplete_witness_not_certified():
    t = Tower([complete_graph(4)], target=complete_graph(5))
    assert laman_tower_decide(t, 2).status == LAMAN_TOWER_NOT


# ---- exhaustive container search -----------------------------------------


def test_exhaustive_search_finds_smallest_container():
    found = exhaustive_rigid_container(complete_graph(4), complete_graph(3), EUCLID2)
    assert found == complete_graph(3)


def test_exhaustive_search_reports_absence():
    assert exhaustive_rigid_container(C4, DIAGONAL, EUCLID2) is None


def test_exhaustive_search_caps_vertex_count():
    with pytest.raises(InputError):
        exhaustive_rigid_container(complete_graph(13), complete_graph(3), EUCLID2)


def test_greedy_subsequence_on_nested_complete_graphs():
    t = Tower([complete_graph(4), complete_graph(5), complete_graph(6)])
    assert relatively_rigid_subsequence(t, EUCLID2) == (0, 1, 2)


def test_greedy_subsequence_skips_unpinned_stage():
    pendant = SimpleGraph([0, 4], [(0, 4)])
    t = Tower(
        [C4, graph_union(C4, pendant), graph_union(complete_graph(4), pendant)]
    )
    assert relatively_rigid_subsequence(t, EUCLID2) == (0, 2)
