import pytest
from hypothesis import given, settings, strategies as st

from cdproof.proof_calc import AxiomAssignment, Interval, SizeOracle
from cdproof.properties import (
    COLUMNS, format_rows, property_table, rounded_median, rows_from_json, rows_to_json,
)

EXACT = ["DT", "DC", "DH", "DKL", "DKR", "DD", "DR", "TT", "TC", "TH", "TV",
         "ITU", "ITM", "IHU", "IHM"]


@pytest.fixture(scope="module")
def rows(mer):
    oracle = SizeOracle(AxiomAssignment.of_proof(mer), 14, 6)
    return property_table(mer, oracle=oracle)


def _interval(text):
    lo, _, hi = text.partition("-")
    return Interval(int(lo), int(hi or lo))


def test_row_count_and_labels(rows, table1):
    assert len(rows) == 34
    assert [r.label for r in rows] == [g["label"] for g in table1]


@pytest.mark.parametrize("column", EXACT)
def test_numeric_columns_match(rows, table1, column):
    got = [getattr(r, column) for r in rows]
    want = [int(g[column]) for g in table1]
    assert got == want


def test_flag_columns_match(rows, table1):
    for r, g in zip(rows, table1):
        assert r.DP == (g["DP"] == "•"), r.row
        assert r.RC == (g["RC"] == "•"), r.row
        assert {"•": "organic", "gray": "weak", "-": "no"}[g["TO"]] == r.TO, r.row


def test_ds_and_m_columns_match(rows, table1):
    for r, g in zip(rows, table1):
        assert r.DS == g["DS"], r.row
        assert (str(r.M) if r.M is not None else ".") == g["M"], r.row


def test_minimal_sizes_are_consistent(rows, table1):
    for r, g in zip(rows, table1):
        for col in ("MT", "MC"):
            ours, theirs = getattr(r, col), _interval(g[col])
            hi = ours.high if ours.high is not None else 10**9
            # the intervals must overlap, exact values must agree
            assert ours.low <= theirs.high and theirs.low <= hi, (r.row, col)
            if ours.exact and theirs.exact:
                assert ours.low == theirs.low, (r.row, col)


@pytest.mark.parametrize("row,mt,mc", [(2, 1, 1), (34, 7, 6), (26, 8, 6), (19, 14, None)])
def test_small_minimal_sizes_by_enumeration(rows, row, mt, mc):
    r = rows[row - 1]
    assert r.MT.exact and r.MT.low == mt
    if mc is not None:
        assert r.MC.exact and r.MC.low == mc


def test_json_round_trip(rows):
    back = rows_from_json(rows_to_json(rows))
    assert back == rows


def test_json_schema_is_checked():
    with pytest.raises(ValueError):
        rows_from_json('{"schema": "other", "rows": []}')


def test_format_rows_columns(rows):
    text = format_rows(rows, ["DT", "DC"])
    lines = text.splitlines()
    assert lines[0].split() == ["#", "D-term", "DT", "DC"]
    assert lines[-1].split() == ["34.", "D10.10", "19", "10"]
    assert len(format_rows(rows).splitlines()[0].split()) == len(COLUMNS) + 2


@pytest.mark.parametrize("values,expected", [
    ([1], 1), ([1, 2], 2), ([1, 2, 3, 4], 3), ([5, 5, 6, 6], 6), ([2, 3], 3), ([1, 3], 2),
])
def test_rounded_median(values, expected):
    assert rounded_median(values) == expected


@settings(max_examples=1000, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=40))
def test_rounded_median_against_sorting(values):
    s = sorted(values)
    n = len(s)
    twice = s[n // 2] * 2 if n % 2 else s[n // 2 - 1] + s[n // 2]
    # half up: ceil(twice / 2)
    assert rounded_median(values) == (twice + 1) // 2
