import pytest

from helpers import grow_tight_graph
from rigidkit.errors import InputError, MoveError
from rigidkit.frameworks import NormSpec, flex_report, random_placement
from rigidkit.graphs import SimpleGraph, complete_graph, path_graph
from rigidkit.moves import (
    ChainReport,
    ConstructionChain,
    EdgeMove,
    VertexExtension,
    VertexSplit3D,
    VertexTo4Cycle,
    VertexToK4,
    apply_move,
    chain_limit,
    concatenate_chains,
    count_for_mode,
    find_chain,
    inverse_candidates,
    verify_chain,
)
from rigidkit.sparsity import LAMAN, QNORM_2D, is_sparse

K1 = SimpleGraph([0], [])
K2 = SimpleGraph([0, 1], [(0, 1)])


def test_vertex_extension_k2_to_k3():
    out = apply_move(K2, VertexExtension(2, (0, 1)))
    assert out == complete_graph(3)


def test_vertex_to_k4_on_k1():
    out = apply_move(K1, VertexToK4(0, (1, 2, 3)))
    assert out == complete_graph(4)
    assert is_sparse(out, QNORM_2D).tight


def test_edge_move_on_k3():
    out = apply_move(complete_graph(3), EdgeMove((0, 1), 3, (0, 1, 2)))
    assert out.n_vertices == 4 and out.n_edges == 5
    assert not out.has_edge(0, 1)
    assert is_sparse(out, LAMAN).tight


def test_vertex_to_4cycle_moves_edges():
    g = complete_graph(4)
    out = apply_move(g, VertexTo4Cycle(base=0, pair=(1, 2), vertex=4, moved=(3,)))
    assert out.n_vertices == 5 and out.n_edges == 8
    assert not out.has_edge(0, 3)
    assert out.has_edge(4, 1) and out.has_edge(4, 2) and out.has_edge(4, 3)
    assert is_sparse(out, QNORM_2D).tight


@pytest.mark.parametrize(
    "graph,move",
    [
        (K2, VertexExtension(2, (0, 0))),
        (K2, VertexExtension(1, (0,))),
        (K2, VertexExtension(2, (0, 5))),
        (complete_graph(3), EdgeMove((0, 3), 4, (0, 1, 2))),
        (complete_graph(3), EdgeMove((0, 1), 3, (0, 2))),
        (complete_graph(4), VertexTo4Cycle(0, (1, 1), 4)),
        (complete_graph(4), VertexTo4Cycle(0, (1, 2), 4, moved=(1,))),
        (complete_graph(4), VertexToK4(0, (4, 5, 6), ((3, 9),))),
        (complete_graph(4), VertexToK4(0, (1, 4, 5))),
        (complete_graph(4), VertexSplit3D(0, (1, 1), 4)),
    ],
)
def test_malformed_moves_rejected(graph, move):
    with pytest.raises(MoveError):
        apply_move(graph, move)


def test_inverse_of_degree_two_vertex_is_deletion():
    g = apply_move(complete_graph(3), VertexExtension(3, (0, 2)))
    cands = inverse_candidates(g, LAMAN, 3)
    assert cands == [VertexExtension(3, (0, 2))]
    reduced = g.without_vertex(3)
    assert apply_move(reduced, cands[0]) == g


def test_inverse_of_degree_three_vertex_restores_triangle():
    g = apply_move(complete_graph(3), EdgeMove((0, 1), 3, (0, 1, 2)))
    cands = inverse_candidates(g, LAMAN, 3)
    assert len(cands) >= 1
    m = cands[0]
    assert isinstance(m, EdgeMove) and m.removed == (0, 1)
    reduced = g.without_vertex(3).with_edges([m.removed])
    assert reduced == complete_graph(3)
    assert apply_move(reduced, m) == g


def test_inverse_rejects_out_of_range_degree():
    with pytest.raises(InputError):
        inverse_candidates(path_graph(3), LAMAN, 0)


def test_find_chain_k2_to_k3():
    chain = find_chain(K2, complete_graph(3), "euclidean")
    assert len(chain.moves) == 1
    assert isinstance(chain.moves[0], VertexExtension)
    assert chain.final == complete_graph(3)


def test_find_chain_k1_to_k4():
    chain = find_chain(K1, complete_graph(4), "qnorm")
    assert len(chain.moves) == 1
    assert isinstance(chain.moves[0], VertexToK4)


def test_find_chain_identical_graphs_is_empty():
    chain = find_chain(K2, K2, "euclidean")
    assert chain.moves == ()
    assert chain_limit(chain) == K2


def test_find_chain_validates_inputs():
    with pytest.raises(InputError):
        find_chain(K2, path_graph(4), "euclidean")
    other = SimpleGraph([5, 6], [(5, 6)])
    with pytest.raises(InputError):
        find_chain(other, complete_graph(3), "euclidean")
    with pytest.raises(InputError):
        find_chain(K2, complete_graph(3), "spherical")


def test_find_chain_forces_both_contraction_kinds():
    g = apply_move(complete_graph(4), VertexTo4Cycle(base=1, pair=(2, 3), vertex=4))
    chain = find_chain(K1, g, "qnorm")
    kinds = {type(m) for m in chain.moves}
    assert kinds == {VertexToK4, VertexTo4Cycle}
    report = verify_chain(chain, "qnorm")
    assert report.ok


@pytest.mark.parametrize("seed", range(6))
def test_find_chain_euclidean_random_targets(seed):
    n = 5 + seed % 4
    target = grow_tight_graph("euclidean", n, seed, protected=[(0, 1)])
    chain = find_chain(K2, target, "euclidean")
    assert chain.final == target
    assert len(chain.moves) == n - 2
    report = verify_chain(chain, "euclidean")
    assert report.ok, report.reason


@pytest.mark.parametrize("seed", range(6))
def test_find_chain_qnorm_random_targets(seed):
    n = 6 + seed % 5
    target = grow_tight_graph("qnorm", n, seed)
    chain = find_chain(K1, target, "qnorm")
    assert chain.final == target
    report = verify_chain(chain, "qnorm")
    assert report.ok, report.reason
    added = sum(len(m.vertices_added) for m in chain.moves)
    assert added == n - 1


@pytest.mark.parametrize("mode,base_n", [("euclidean", 5), ("qnorm", 6)])
def test_chain_concatenation(mode, base_n):
    start = K2 if mode == "euclidean" else K1
    mid = grow_tight_graph(mode, base_n, 31, protected=[(0, 1)] if mode == "euclidean" else [])
    big = grow_tight_graph(mode, base_n + 3, 32, start=mid, protected=mid.edges)
    first = find_chain(start, mid, mode)
    second = find_chain(mid, big, mode)
    joined = concatenate_chains(first, second)
    assert joined.final == big
    assert verify_chain(joined, mode).ok


def test_concatenation_rejects_mismatched_chains():
    a = find_chain(K2, complete_graph(3), "euclidean")
    with pytest.raises(InputError):
        concatenate_chains(a, a)


def test_verify_chain_reports_malformed_move():
    chain = ConstructionChain(K2, (VertexExtension(2, (0, 0)),))
    report = verify_chain(chain, "euclidean")
    assert not report.ok
    assert report.failure_stage == 1
    assert report.reason


def test_verify_chain_rejects_foreign_kind_in_euclidean_mode():
    chain = ConstructionChain(K2, (VertexToK4(0, (2, 3, 4)),))
    report = verify_chain(chain, "euclidean")
    assert not report.ok
    assert "not allowed" in report.reason


def test_verify_chain_rejects_untight_start():
    report = verify_chain(ConstructionChain(path_graph(3), ()), "euclidean")
    assert not report.ok and report.failure_stage == 0


@pytest.mark.parametrize("mode,seed", [("euclidean", 3), ("euclidean", 8), ("qnorm", 3), ("qnorm", 8)])
def test_growth_keeps_every_prefix_tight(mode, seed):
    count = count_for_mode(mode)
    g = grow_tight_graph(mode, 9, seed)
    assert is_sparse(g, count).tight


def _flex_dims(g, qs, seed=0):
    out = []
    for q in qs:
        norm = NormSpec(3, q)
        best = None
        for t in range(3):
            rep = flex_report(g, random_placement(g, norm, seed + t), norm)
            if best is None or rep.flex_dim < best:
                best = rep.flex_dim
        out.append(best)
    return out


def test_vertex_split_3d_preserves_flex_dimensions():
    g = complete_graph(4)
    assert _flex_dims(g, [2, 3]) == [0, 3]
    split = apply_move(g, VertexSplit3D(split=0, anchors=(1, 2), vertex=4, moved=(3,)))
    assert split.n_vertices == 5 and split.n_edges == 9
    assert _flex_dims(split, [2, 3]) == [0, 3]
    again = apply_move(split, VertexSplit3D(split=4, anchors=(1, 3), vertex=5))
    assert again.n_edges == 3 * again.n_vertices - 6
    assert _flex_dims(again, [2, 3]) == [0, 3]
