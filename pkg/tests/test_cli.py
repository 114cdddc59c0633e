from fractions import Fraction as F

import pytest

from kronsplit.cli import main
from kronsplit.kalmanson import parse_split_system, split_decomposition
from kronsplit.matkernel import SquareMatrix, format_matrix, read_matrix
from kronsplit.network import read_network, response_matrix
from kronsplit.response import w_from_m

from conftest import DATA


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_writes_files(tmp_path, capsys, mats_m, mats_w):
    code, _, err = run(capsys, "simulate", DATA / "mats.net", "--out", tmp_path, "--self-check")
    assert code == 0 and "reproduces W" in err
    assert read_matrix(tmp_path / "M.txt") == mats_m
    assert read_matrix(tmp_path / "W.txt") == mats_w
    assert read_matrix(tmp_path / "R.txt").entry(1, 2) == F(11, 4)
    s = parse_split_system((tmp_path / "splits.txt").read_text())
    assert s == split_decomposition(mats_w)
    assert (tmp_path / "splits.dot").read_text().startswith("graph splits {")


def test_simulate_is_deterministic(tmp_path, capsys):
    run(capsys, "simulate", DATA / "mats.net", "--out", tmp_path / "a")
    run(capsys, "simulate", DATA / "mats.net", "--out", tmp_path / "b")
    for name in ("M.txt", "W.txt", "R.txt", "splits.txt", "splits.dot"):
        assert (tmp_path / "a" / name).read_text() == (tmp_path / "b" / name).read_text()


def test_simulate_emit_table_only(tmp_path, capsys):
    run(capsys, "simulate", DATA / "mats.net", "--out", tmp_path, "--emit", "table")
    assert (tmp_path / "splits.txt").exists() and not (tmp_path / "splits.dot").exists()


def test_analyze_mats(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "mats_m.txt")
    assert code == 0
    assert "order: 1 2 3 4 5" in out and "Kalmanson: yes" in out and "planar: yes" in out
    assert "splits: 7" in out
    assert "bridge candidate {2,3}|{1,4,5} weight 1/2: verified" in out
    assert "no obstruction of this form" in out


def test_analyze_counterexample(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "counter_m.txt")
    assert code == 12
    assert "planar: no, witness (1,2;4,3)" in out


def test_analyze_big_paired(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "big_m.txt", "--mode", "float", "--tol", "1e-5",
                       "--resistance", DATA / "big_w.txt")
    assert code == 0
    assert "order: 1 2 3 4 5 6 7 8 9 10" in out
    assert "splits: 24" in out
    assert "{2,3,4}|{1,5,6,7,8,9,10}" in out and "{5,6,7}|{1,2,3,4,8,9,10}" in out
    assert "unverified" not in out


def test_analyze_big_alone_fails_validation(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "big_m.txt", "--mode", "float", "--tol", "1e-5")
    assert code == 11 and "row sums" in out


def test_analyze_resistance_input(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "mats_w.txt", "--kind", "W")
    assert code == 0 and "splits: 7" in out


def test_non_kalmanson_order_exits_at_step_two(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "mats_w.txt", "--kind", "W", "--order", "1,4,2,3,5")
    assert code == 12 and "Kalmanson: no" in out
    code, _, err = run(capsys, "reconstruct", DATA / "mats_w.txt", "--kind", "W", "--order", "1,4,2,3,5")
    assert code == 12 and "not Kalmanson" in err


def test_invalid_resistance_exits_at_step_one(tmp_path, capsys):
    w = SquareMatrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    path = tmp_path / "w.txt"
    path.write_text(format_matrix(w))
    code, out, _ = run(capsys, "analyze", path, "--kind", "W")
    assert code == 11 and "resistance matrix fails" in out


def test_reconstruct_mats(tmp_path, capsys):
    code, _, _ = run(capsys, "reconstruct", DATA / "mats_m.txt", "--out", tmp_path)
    assert code == 0
    plan = (tmp_path / "plan.txt").read_text()
    assert plan.startswith("ORDER\n  1 2 3 4 5\n")
    assert "BLOB 1" in plan and "NETWORK" in plan
    assert (tmp_path / "network.dot").read_text().startswith("graph network {")


def test_reconstruct_tree_w(tmp_path, capsys):
    # a caterpillar metric: every conductance comes back as 1/weight
    w = SquareMatrix([[0, 3, 4, 5], [3, 0, 5, 6], [4, 5, 0, 3], [5, 6, 3, 0]])
    path = tmp_path / "tree.txt"
    path.write_text(format_matrix(w))
    code, out, _ = run(capsys, "reconstruct", path, "--kind", "W", "--emit", "table")
    assert code == 0
    assert "BLOB" not in out and "?" not in out.split("NETWORK")[1]


def test_reconstruct_counterexample(capsys):
    code, _, err = run(capsys, "reconstruct", DATA / "counter_m.txt")
    assert code == 12
    assert "step 2 failed" in err and "(1,2;4,3)" in err


def test_reconstruct_is_deterministic(capsys):
    first = run(capsys, "reconstruct", DATA / "mats_m.txt", "--emit", "table")[1]
    assert run(capsys, "reconstruct", DATA / "mats_m.txt", "--emit", "table")[1] == first


def test_one_terminal_rejected(tmp_path, capsys):
    path = tmp_path / "one.txt"
    path.write_text("1\n0\n")
    code, _, err = run(capsys, "analyze", path)
    assert code == 2 and "n >= 2" in err


def test_malformed_input(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2\n1 x\n0 1\n")
    assert run(capsys, "analyze", path)[0] == 2
    assert run(capsys, "analyze", tmp_path / "missing.txt")[0] == 1


def test_bad_order_flag(capsys):
    with pytest.raises(SystemExit):
        main(["analyze", str(DATA / "mats_m.txt"), "--order", "1,1,2"])


def test_generate_round_trip(tmp_path, capsys):
    out = tmp_path / "g.net"
    assert run(capsys, "generate", "--n", 5, "--interior", 2, "--seed", 3, "--out", out)[0] == 0
    net = read_network(out)
    assert net.n == 5
    code, text, _ = run(capsys, "generate", "--n", 5, "--interior", 2, "--seed", 3)
    assert text == out.read_text()
    m = response_matrix(net)
    assert w_from_m(m).n == 5
