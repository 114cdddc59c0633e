from fractions import Fraction as F
import itertools
import warnings

import numpy as np
import pytest

from kronsplit.errors import NotResistanceMetricError
from kronsplit.matkernel import Arith, SquareMatrix, schur_complement
from kronsplit.network import random_circular_planar, resistance_matrix, response_matrix
from kronsplit.response import (
    kron_graph,
    m_from_w,
    restrict_resistance,
    symmetrize,
    validate_resistance,
    validate_response,
    w_from_m,
)

from conftest import BIG_ARITH


def test_validate_mats_cut_point(mats_m):
    rep = validate_response(mats_m)
    assert rep.valid and rep.connected
    assert set(rep.cut_points) == {3}
    assert (2,) in rep.cut_points[3]


def test_validate_big_row_sums(big_m):
    # the printed entries are rounded, so rows do not sum to zero (see notes)
    rep = validate_response(big_m)
    assert rep.symmetric and rep.sign_pattern and rep.connected
    assert rep.cut_points == {}
    assert rep.reasons == ("row sums",)
    assert rep.max_row_sum > 1


def test_validate_positive_diagonal():
    m = SquareMatrix([[1, -1], [-1, 1]])
    rep = validate_response(m)
    assert not rep.valid
    assert "sign pattern" in rep.reasons


def test_validate_disconnected():
    m = SquareMatrix([[-1, 1, 0], [1, -1, 0], [0, 0, 0]])
    rep = validate_response(m)
    assert not rep.connected and "disconnected" in rep.reasons


def test_kron_graph_edges(mats_m):
    g = kron_graph(mats_m)
    assert g.number_of_edges() == 7
    assert not g.has_edge(1, 2)


def test_w_from_m_examples(mats_m, mats_w):
    w = w_from_m(mats_m)
    assert w == mats_w
    assert w.entry(1, 5) == F(17, 12)
    c = F(5, 2)
    assert w_from_m(SquareMatrix([[-c, c], [c, -c]])).entry(1, 2) == 1 / c


def test_w_from_m_big_display_precision(big_m, big_w):
    w = w_from_m(big_m.to_float(), BIG_ARITH, check=False)
    assert np.allclose(w.data, big_w.to_float().data, atol=1e-5)
    assert round(w.entry(2, 3), 5) == 1.5
    assert round(w.entry(2, 4), 5) == round(31 / 30, 5)


def test_m_from_w_examples(mats_m, mats_w, counter_m, counter_w):
    assert m_from_w(mats_w) == mats_m
    m = m_from_w(counter_w)
    assert m == counter_m
    assert m.entry(1, 2) == 2


def test_m_from_w_rejects_non_resistance():
    w = SquareMatrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    with pytest.raises(NotResistanceMetricError):
        m_from_w(w)


def test_round_trip_random_networks():
    for seed in range(15):
        net = random_circular_planar(3 + seed % 4, interior=seed % 4, seed=seed)
        m = response_matrix(net)
        assert m_from_w(w_from_m(m)) == m


def test_restrict_resistance_examples(mats_net, mats_w):
    r = resistance_matrix(mats_net)
    assert restrict_resistance(r, [1, 2, 3, 4, 5]) == mats_w
    assert restrict_resistance(mats_w, mats_w.labels) == mats_w


def test_restriction_commutes_with_kron():
    for seed in range(6):
        net = random_circular_planar(5, interior=2, seed=seed)
        w = w_from_m(response_matrix(net))
        m = m_from_w(w)
        for k in (2, 3, 4):
            for sub in itertools.combinations(w.labels, k):
                assert m_from_w(restrict_resistance(w, sub)) == schur_complement(m, sub)


def test_w_satisfies_triangle_inequality_and_cut_point_equality(mats_m):
    w = w_from_m(mats_m)
    assert validate_resistance(w) == ()
    # terminal 3 is a cut point separating 2, so paths from 2 pass through 3 exactly
    for j in (1, 4, 5):
        assert w.entry(2, j) == w.entry(2, 3) + w.entry(3, j)


def test_symmetrize_warns_in_float_mode():
    m = SquareMatrix([[-1.0, 1.0], [0.999, -1.0]])
    with pytest.warns(UserWarning):
        s = symmetrize(m, Arith(False))
    assert s.is_symmetric()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        symmetrize(SquareMatrix([[-1.0, 1.0], [1.0, -1.0]]))
