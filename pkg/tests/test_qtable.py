import numpy as np
import pytest

from growth1324.errors import CoverageError, InputParseError
from growth1324.qtable import HEADER, build_q_table, load_q_table, pair_count, save_q_table, shell_count
from growth1324.patterns import q_count


def test_shell_counts():
    assert [shell_count(s) for s in range(3, 9)] == [1, 4, 14, 48, 165, 572]
    assert pair_count(14) == 1_641_028
    assert pair_count(8) == 804


def test_shell_count_matches_enumeration():
    table = build_q_table(7)
    shells = table.tree_size + table.forest_size
    for s in range(3, 8):
        assert (shells == s).sum() == shell_count(s)


def test_round_trip(tmp_path, q8_table):
    p = tmp_path / "t.csv"
    save_q_table(q8_table, p)
    again = load_q_table(p)
    assert again == q8_table and again.n == 8
    text = p.read_text()
    assert text.startswith(HEADER + "\n(()),(),2\n") and "\r" not in text


def test_records_are_sorted_and_bounded(q8_table):
    shells = q8_table.tree_size + q8_table.forest_size
    keys = list(zip(shells, q8_table.tree, q8_table.forest))
    assert keys == sorted(keys)
    assert (q8_table.q >= 2).all()


def test_get_and_restrict(q8_table):
    assert q8_table.get("((()()))", "()(())") == 15
    assert q8_table.get("()", "()()") == 1
    assert q8_table.get("((()))", "") == 1
    with pytest.raises(CoverageError):
        q8_table.get("((((((()))))))", "()()")
    small = q8_table.restrict(5)
    assert len(small) == pair_count(5)
    small.check_coverage()
    with pytest.raises(CoverageError):
        q8_table.restrict(9)


def test_groups_partition(q8_table):
    groups = q8_table.groups()
    assert sum(len(v) for v in groups.values()) == len(q8_table)
    assert all(1 <= h <= m for (_, m, h) in groups)


def test_spot_check_against_naive(q8_table):
    rng = np.random.default_rng(1)
    for i in rng.choice(len(q8_table), 60, replace=False):
        assert q_count(q8_table.tree[i], q8_table.forest[i], "naive") == q8_table.q[i]


@pytest.mark.parametrize("body,lineno", [
    ("(()),(),2\n(()),()\n", 3),
    ("(()),(),x\n", 2),
    ("(()),(),0\n", 2),
    ("(()(),(),2\n", 2),
])
def test_parse_errors_name_the_line(tmp_path, body, lineno):
    p = tmp_path / "bad.csv"
    p.write_text(HEADER + "\n" + body)
    with pytest.raises(InputParseError, match=f":{lineno}:"):
        load_q_table(p)


def test_bad_header_and_missing_file(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("a,b,c\n")
    with pytest.raises(InputParseError, match=":1:"):
        load_q_table(p)
    with pytest.raises(InputParseError):
        load_q_table(tmp_path / "absent.csv")


def test_missing_pair_is_coverage_error(tmp_path, q8_path):
    lines = q8_path.read_text().splitlines(keepends=True)
    p = tmp_path / "gap.csv"
    p.write_text("".join(lines[:5] + lines[6:]))
    with pytest.raises(CoverageError, match="missing pair"):
        load_q_table(p)
    with pytest.raises(CoverageError):
        load_q_table(q8_path, require_n=9)


def test_numpy_fallback_builds_same_table():
    assert build_q_table(8, use_numba=False) == build_q_table(8, use_numba=True)
