from fractions import Fraction as F
import random
import warnings

import numpy as np
import pytest

from kronsplit.circular import CircularOrder, CircularPair, circular_minor, positive_pairs
from kronsplit.errors import InconsistentMatchingError, PipelineError
from kronsplit.kalmanson import WeightedSplit, WeightedSplitSystem, split_decomposition, split_metric
from kronsplit.matkernel import Arith
from kronsplit.network import (
    UNKNOWN,
    StrandMatching,
    enumerate_connections,
    medial_strand_matching,
    random_circular_planar,
    response_matrix,
)
from kronsplit.reconstruct import (
    CutFrame,
    PipelineConfig,
    blob_submatrix,
    decompose,
    format_plan,
    matching_to_graph,
    max_respected,
    network_dot,
    num_terminals,
    reconstruct_from,
    reconstruct_pipeline,
    reentrants_of,
    strand_matching_from_response,
    strands_from_reentrants,
    verify_bridge,
)
from kronsplit.response import m_from_w, w_from_m

from conftest import BIG_ARITH, cut_vertex_net, load, single_edge

MATS_MATCHING = {frozenset(p) for p in ({1, 7}, {2, 8}, {3, 5}, {4, 9}, {6, 10})}
F6 = Arith(False, 1e-6)


def _s():
    return load("big_s.txt", exact=False).relabel(range(1, 7))


# -- cut frame and counts -----------------------------------------------------------
def test_cut_frame_sides():
    fr = CutFrame(3)
    assert fr.inside(1, 6) == [1, 2]  # x_6 sits on terminal 3, which does not count
    assert fr.outside(3, 5) == [1, 3]
    assert [fr.stub_terminal(t) for t in range(1, 7)] == [1, 1, 2, 2, 3, 3]


def test_num_terminals_rows():
    nt = num_terminals(6)
    assert list(nt[0]) == [0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5]
    assert list(nt[1]) == [0, 0, 0, 0, 1, 1, 2, 2, 3, 3, 4, 4]
    assert list(num_terminals(2)[0]) == [0, 0, 1, 1]
    assert list(num_terminals(6, quoted_shift=True)[1]) == list(nt[1])
    # the quoted shift drifts from the count from row 4 on
    assert list(nt[3][:8]) == [0, 0, 0, 0, 0, 0, 1, 1]
    assert list(num_terminals(6, quoted_shift=True)[3][:8]) != list(nt[3][:8])


def test_max_respected_on_s():
    s = _s()
    mr = max_respected(s, arith=F6)
    assert (mr[0, 6], mr[1, 7], mr[2, 8]) == (3, 2, 2)
    nt = num_terminals(6)
    assert np.all(np.triu(mr, 1) <= np.triu(nt, 1))


def test_s_witness_minors():
    s = load("big_s.txt").relabel(range(1, 7))
    v = circular_minor(s, CircularPair((1, 2, 3), (6, 5, 4)))
    # printed S is rounded, so the quoted value holds to display precision
    assert v == pytest.approx(F(16, 18659), rel=1e-5)
    assert circular_minor(s, CircularPair((2, 3), (6, 5))) > 0


def test_max_respected_single_edge():
    m = response_matrix(single_edge())
    mr = max_respected(m)
    assert set(np.unique(mr)) <= {0, 1}
    fr = CutFrame(2)
    for i in range(1, 5):
        for j in range(i + 1, 5):
            separates = bool(fr.inside(i, j)) and bool(fr.outside(i, j))
            assert mr[i - 1, j - 1] == int(separates)


# -- strands ------------------------------------------------------------------------------
def test_strands_examples(mats_m):
    assert strand_matching_from_response(mats_m).as_sets() == MATS_MATCHING
    assert strand_matching_from_response(response_matrix(single_edge())).as_sets() == {
        frozenset({1, 3}), frozenset({2, 4})}


def test_strands_big_blobs():
    s_match = strand_matching_from_response(_s(), arith=F6)
    assert len(s_match.pairs) == 6
    assert not any(p[1] - p[0] == 1 for p in s_match.pairs)
    t = load("big_t.txt", exact=False).relabel(range(1, 5))
    assert strand_matching_from_response(t, arith=F6).as_sets() == {
        frozenset({1, 5}), frozenset({2, 6}), frozenset({3, 7}), frozenset({4, 8})}


def test_inconsistent_reentrants_flagged(mats_m):
    re = reentrants_of(strand_matching_from_response(mats_m)).copy()
    re[0, 5] += 1
    with pytest.raises(InconsistentMatchingError):
        strands_from_reentrants(re)


def test_forward_inverse_on_critical_networks():
    done = 0
    for seed in range(80):
        net = random_circular_planar(3 + seed % 4, interior=seed % 5, seed=seed)
        med, lens = medial_strand_matching(net)
        if lens:
            continue
        done += 1
        assert strand_matching_from_response(response_matrix(net)).as_sets() == med.as_sets()
    assert done >= 15


# -- matching to graph -------------------------------------------------------------------
def test_matching_to_graph_examples(mats_m):
    g = matching_to_graph(StrandMatching.from_pairs(2, [(1, 3), (2, 4)]))
    assert g.n == 2 and list(g.edges) == [(1, 2)]
    g = matching_to_graph(StrandMatching.from_pairs(2, [(1, 2), (3, 4)]))
    assert not g.edges
    g = matching_to_graph(StrandMatching.from_pairs(5, [(1, 7), (2, 8), (3, 5), (4, 9), (6, 10)]))
    assert set(enumerate_connections(g)) == positive_pairs(mats_m)


def test_matching_to_graph_rejects_non_critical():
    # two strands joining the same pair of gaps cross twice in any drawing
    with pytest.raises(InconsistentMatchingError):
        matching_to_graph(StrandMatching.from_pairs(2, [(1, 4), (2, 3)]))


def test_spikes_put_terminal_on_pendant_edge(mats_m):
    match = strand_matching_from_response(mats_m)
    g = matching_to_graph(match, spikes=[2])
    assert g.degree(2) == 1
    assert set(enumerate_connections(g)) == positive_pairs(mats_m)


# -- bridges and blobs -------------------------------------------------------------------
def test_verify_bridge_big(big_m, big_w):
    m = big_m.to_float()
    s = split_decomposition(big_w.to_float(), None, BIG_ARITH)
    d = decompose(s)
    for part in ({2, 3, 4}, {5, 6, 7}):
        chk = verify_bridge(m, s.order, s.get(part), d, BIG_ARITH)
        assert chk.verified and chk.checked > 0
    # the two minors quoted as evidence are positive
    assert circular_minor(big_m, CircularPair((1, 2, 5), (9, 8, 7))) > 0
    assert circular_minor(big_m, CircularPair((10, 1, 2), (8, 7, 4))) > 0


def test_verify_bridge_rejects_cut_vertex():
    net = cut_vertex_net()
    m = response_matrix(net)
    s = split_decomposition(w_from_m(m), CircularOrder(net.boundary))
    cand = s.get({1, 2})
    chk = verify_bridge(m, s.order, cand)
    assert not chk.verified
    assert chk.blocked == CircularPair((2, 3, 4), (1, 6, 5))
    assert circular_minor(m, chk.blocked) == 0
    assert chk.blocked not in set(enumerate_connections(net))


def test_blob_submatrices_match_printed(big_w):
    s = split_decomposition(big_w.to_float(), None, BIG_ARITH)
    d = decompose(s)
    got = {}
    for b in d.blobs:
        sub, mapping = blob_submatrix(big_w, b, s.order)
        got[tuple(mapping.values())] = sub
    p = got[(1, 2, 5, 8, 9, 10)]
    q = got[(1, 5, 6, 7)]
    assert p.entry(1, 2) == F(2414, 813)
    assert q.entry(2, 3) == F(47, 154)
    assert p.labels == (1, 2, 3, 4, 5, 6)


def test_blob_submatrix_whole_set(mats_w):
    s = split_decomposition(mats_w)
    d = decompose(s)
    sub, mapping = blob_submatrix(mats_w, d.blobs[0], s.order)
    assert set(mapping.values()) <= set(mats_w.labels)
    assert sub == mats_w.restrict(list(mapping.values())).relabel(range(1, len(mapping) + 1))


# -- pipeline -------------------------------------------------------------------------------
def _same_connections(net, m, arith=None):
    conns = set(enumerate_connections(net, max_nodes=len(net.nodes)))
    return conns == positive_pairs(m, CircularOrder(net.boundary), arith)


def test_pipeline_mats(mats_m):
    plan = reconstruct_pipeline(mats_m)
    assert plan.order.seq == (1, 2, 3, 4, 5)
    assert [s.side for s in plan.verified_bridges] == [frozenset({2, 3})]
    assert _same_connections(plan.network, mats_m)


def test_pipeline_counterexample_stops_at_planarity(counter_m):
    with pytest.raises(PipelineError) as exc:
        reconstruct_pipeline(counter_m)
    assert exc.value.step == 2
    assert exc.value.witness == CircularPair((1, 2), (4, 3))


def test_pipeline_big_from_m_stops_at_validation(big_m):
    with pytest.raises(PipelineError) as exc:
        reconstruct_pipeline(big_m.to_float(), PipelineConfig(arith=BIG_ARITH))
    assert exc.value.step == 1 and "row sums" in exc.value.reason


def test_pipeline_big_paired(big_m, big_w):
    m = big_m.to_float()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        plan = reconstruct_from(m, big_w.to_float(), PipelineConfig(arith=BIG_ARITH))
    assert {s.side for s in plan.verified_bridges} >= {frozenset({2, 3, 4}), frozenset({5, 6, 7})}
    assert sorted(pc.terminals for pc in plan.pieces) == [(1, 2, 5, 8, 9, 10), (1, 5, 6, 7)]
    assert _same_connections(plan.network, m, BIG_ARITH)


def test_tree_only_system_recovers_weights():
    taxa = range(1, 7)
    parts = [{1}, {2}, {3}, {4}, {5}, {6}, {1, 2}, {5, 6}, {1, 2, 3}]
    weights = [F(1), F(2), F(1, 3), F(3, 2), F(5), F(1, 4), F(2, 3), F(7), F(1, 2)]
    sys = WeightedSplitSystem([WeightedSplit.of(p, taxa, w) for p, w in zip(parts, weights)], taxa)
    w = split_metric(sys)
    plan = reconstruct_pipeline(m_from_w(w))
    assert not plan.pieces
    assert all(c is not UNKNOWN for c in plan.network.edges.values())
    assert w_from_m(response_matrix(plan.network)) == w


def test_single_blob_plan_keeps_graph():
    net = random_circular_planar(5, interior=2, seed=1)
    m = response_matrix(net)
    plan = reconstruct_pipeline(m)
    if len(plan.pieces) == 1 and not plan.tree_edges:
        assert plan.network.edges.keys() == {
            tuple(sorted(e)) for e in plan.pieces[0].graph.edges}
    assert _same_connections(plan.network, m)


def test_pipeline_random_networks():
    rng = random.Random(5)
    for seed in range(40):
        n = rng.randint(3, 6)
        net = random_circular_planar(n, interior=rng.randint(0, 5), seed=seed)
        m = response_matrix(net)
        plan = reconstruct_pipeline(m)
        assert _same_connections(plan.network, m), seed


def test_format_plan_and_dot(mats_m):
    plan = reconstruct_pipeline(mats_m)
    text = format_plan(plan)
    for head in ("ORDER", "SPLITS", "BRIDGES", "BLOB 1", "TREE EDGES", "NETWORK"):
        assert "\n" + head in "\n" + text
    assert "verified" in text and "matching {" in text
    assert format_plan(reconstruct_pipeline(mats_m)) == text
    dot = network_dot(plan.network)
    assert dot.startswith("graph network {") and dot.count(" -- ") == len(plan.network.edges)
