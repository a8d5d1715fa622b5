import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpconsensus import FeasibleSet, NormSystem, comparison_table, residual_stats, solve_reweighted, solve_single, sweep
from lpconsensus.report import CSV_COLUMNS, describe, fmt, parse_csv, sweep_table

from instances import INF, SCALAR, saaty_document, society_system

FREE1 = FeasibleSet.unconstrained(1)


def test_scalar_residual_stats():
    r = residual_stats([1], SCALAR)
    assert (r.min, r.max, r.count) == (0, 4, 3)
    assert math.isclose(r.mean, 5 / 3, rel_tol=1e-15)
    assert math.isclose(r.variance, 26 / 9, rel_tol=1e-15)
    assert math.isclose(residual_stats([1], SCALAR, ddof=1).variance, 13 / 3, rel_tol=1e-15)


def test_zero_residuals():
    sys = NormSystem.from_points([1, 2], [[3, 3], [3, 3]])
    r = residual_stats([3, 3], sys)
    assert all(v == 0 for k, v in r.to_dict().items() if k != "count")


def test_quartile_convention():
    r = describe([1, 2, 3, 4])
    assert (r.q1, r.median, r.q3) == (1.75, 2.5, 3.25)


def test_tukey_whiskers():
    r = describe([1, 2, 3, 4, 100])
    # q1=2, q3=4, fences at -1 and 7
    assert (r.whisker_lo, r.whisker_hi) == (1, 4)
    assert r.max == 100


def test_describe_empty():
    with pytest.raises(ValueError):
        describe([])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9))
def test_stats_order_variance_and_permutation(seed):
    rng = np.random.default_rng(seed)
    doc = saaty_document(rng, n=4, m=3)
    _, sys, _ = society_system(doc)
    x = rng.uniform(0.2, 5, 9)
    r = residual_stats(x, sys)
    assert r.min <= r.q1 <= r.median <= r.q3 <= r.max
    assert r.min <= r.whisker_lo <= r.whisker_hi <= r.max
    assert r.count == 4 * (9 - 3)
    raw = np.abs((x - sys.targets) * sys.weights[:, None])[:, ~sys.diagonal_mask()]
    assert math.isclose(r.variance, float(np.var(raw)), rel_tol=1e-12, abs_tol=1e-300)
    doc["individuals"] = [doc["individuals"][i] for i in rng.permutation(4)]
    _, shuffled, _ = society_system(doc)
    assert residual_stats(x, shuffled) == r


def test_diagonal_can_be_included():
    _, sys, _ = society_system(saaty_document(np.random.default_rng(0), n=2, m=3))
    x = np.ones(9)
    assert residual_stats(x, sys, include_diagonal=True).count == 18


def test_sweep_examples():
    rows = sweep(SCALAR, FREE1, [1, 2, INF])
    assert [r.label for r in rows] == ["1", "2", "inf"]
    np.testing.assert_allclose([r.report.max for r in rows], [4, 3, 2.5], atol=1e-6)
    np.testing.assert_allclose([r.eta for r in rows], [5, math.sqrt(14), 2.5], rtol=1e-8)
    one = sweep(NormSystem.from_points([2], [[1.5]]), FREE1, [2])
    assert len(one) == 1
    assert all(v == 0 for k, v in one[0].report.to_dict().items() if k != "count")


def test_sweep_keeps_going_after_a_bad_row():
    rows = sweep(SCALAR, FREE1, [1, 0.5, INF])
    assert rows[1].error and rows[1].report is None
    assert rows[2].eta == pytest.approx(2.5)


def test_fmt():
    assert fmt(math.sqrt(14)) == "3.7416574"
    assert fmt(INF) == "inf" and fmt(-0.0) == "0" and fmt(None) == ""
    assert fmt(1e-20) == "1e-20"


def scalar_table():
    single = solve_single(SCALAR, FREE1, 1)
    rew = solve_reweighted(SCALAR, FREE1, [1, INF])
    return comparison_table([
        ("{1}", single, residual_stats(single.x, SCALAR)),
        ("{1} again", single, residual_stats(single.x, SCALAR)),
        ("{1,inf} reweighted", rew, residual_stats(rew.x, SCALAR)),
    ])


def test_table_rows():
    recs = scalar_table().records()
    assert recs[0]["psi"] == 0
    assert {**recs[0], "label": ""} == {**recs[1], "label": ""}
    assert recs[2]["psi"] == pytest.approx(0.0225, rel=1e-5)
    assert recs[2]["eta"] == [5, 2.5]


def test_csv_and_json_carry_identical_values():
    table = scalar_table()
    text = table.to_csv()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert parse_csv(text) == json.loads(table.to_json())


def test_sweep_table_has_zero_psi():
    t = sweep_table(sweep(SCALAR, FREE1, [1, 2]))
    assert [r["psi"] for r in t.records()] == [0, 0]


def test_empty_comparison_table():
    with pytest.raises(ValueError):
        comparison_table([])
