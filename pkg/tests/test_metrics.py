import itertools
import random

import numpy as np
import pytest
import statsmodels.api as sm
from scipy import stats

from stepdet import ContractViolation, DegenerateInput
from stepdet.errors import DivisionUndefined
from stepdet.metrics import (
    ComparisonRow,
    instance_rivw,
    lsd_intervals,
    lsd_significant,
    rivh,
    rivw,
    rpd,
    tally,
)


def test_rpd():
    assert rpd(110, 100) == pytest.approx(10.0)
    assert rpd(100, 100) == 0.0
    with pytest.raises(DivisionUndefined):
        rpd(5, 0)


def test_rivw():
    assert rivw(75, 100, 50) == pytest.approx(25.0)
    assert rivw(40, 40, 40) == 0.0
    assert rivw(100, 100, 50) == 0.0
    with pytest.raises(ContractViolation):
        rivw(120, 100, 50)
    with pytest.raises(ContractViolation):
        rivw(40, 100, 50)


def test_rivh():
    assert rivh(100, 80) == pytest.approx(20.0)
    assert rivh(7, 7) == 0.0
    assert rivh(5, 0) == pytest.approx(100.0)
    with pytest.raises(ContractViolation):
        rivh(5, 6)


def test_negative_objective_rejected():
    with pytest.raises(ContractViolation):
        ComparisonRow("x", {"A": -1})


def test_tally_identical():
    rows = [ComparisonRow(str(k), {"A": z, "B": z}) for k, z in enumerate([3, 0, 9])]
    t = tally(rows, ["A", "B"])
    for a in "AB":
        assert t.summaries[a].num_best == 3
        assert t.summaries[a].mean_rivw == 0.0
        assert t.summaries[a].mean_rivh is None


def test_tally_mean_rivw():
    rows = [
        ComparisonRow("1", {"A": 10, "B": 20}),
        ComparisonRow("2", {"A": 20, "B": 20}),
        ComparisonRow("3", {"A": 30, "B": 30}),
    ]
    t = tally(rows, ["A", "B"])
    assert t.summaries["A"].mean_rivw == pytest.approx(50 / 3)
    assert t.summaries["A"].num_best == 3
    assert t.summaries["B"].num_best == 2


def test_pairwise_counts():
    rows = [ComparisonRow(str(k), {"CA": 10, "CA_PS": 10 - (k < 7)}) for k in range(10)]
    h = tally(rows, ["CA_PS", "CA"], pairs=[("CA_PS", "CA")]).pairwise[("CA_PS", "CA")]
    assert (h.num_better, h.num_equal, h.num_worse) == (7, 3, 0)


def test_tally_with_optimum():
    rows = [ComparisonRow("1", {"A": 10, "B": 8}, 8), ComparisonRow("2", {"A": 5, "B": 5}, 4)]
    s = tally(rows, ["A", "B"]).summaries
    assert s["A"].mean_rivh == pytest.approx((20 + 20) / 2)
    assert s["B"].num_opt == 1 and s["A"].num_opt == 0


def test_rivw_bounds_and_extremes():
    rng = random.Random(1)
    for _ in range(200):
        row = ComparisonRow("x", {a: rng.randint(0, 50) for a in "ABCD"})
        per = instance_rivw(row, "ABCD")
        zs = row.objectives
        best = min(zs, key=zs.get)
        worst = max(zs, key=zs.get)
        assert all(0 <= v <= 100 for v in per.values())
        assert per[best] == max(per.values())
        assert per[worst] == 0.0


def test_tally_order_invariant():
    rng = random.Random(2)
    rows = [ComparisonRow(str(k), {a: rng.randint(0, 30) for a in "ABC"}, 0) for k in range(30)]
    base = tally(rows, "ABC")
    shuffled = rows[:]
    rng.shuffle(shuffled)
    again = tally(shuffled, "ABC")
    for a in "ABC":
        assert again.summaries[a].mean_rivw == pytest.approx(base.summaries[a].mean_rivw)
        assert again.summaries[a].num_best == base.summaries[a].num_best
        assert again.summaries[a].mean_rivh == pytest.approx(base.summaries[a].mean_rivh)


def test_lsd_two_groups_worked():
    out = {i.algorithm: i for i in lsd_intervals({"A": [1, 2, 3], "B": [4, 5, 6]})}
    lsd = stats.t.ppf(0.975, 4) * np.sqrt(2 / 3)
    assert lsd == pytest.approx(2.267, abs=1e-3)
    assert out["A"].half_width == pytest.approx(lsd / 2)
    assert lsd_significant(out["A"], out["B"])


def test_lsd_shifted_group():
    rng = np.random.default_rng(3)
    samples = {"A": rng.normal(0, 1, 30), "B": rng.normal(0.1, 1, 30), "C": rng.normal(10, 1, 30)}
    out = {i.algorithm: i for i in lsd_intervals(samples)}
    assert lsd_significant(out["C"], out["A"]) and lsd_significant(out["C"], out["B"])


def test_lsd_zero_mse_differing_means():
    out = lsd_intervals({"A": [1, 1, 1], "B": [2, 2, 2]})
    assert all(i.half_width == 0 for i in out)


@pytest.mark.parametrize("samples", [
    {"A": [1, 2, 3]},
    {"A": [1, 2, 3], "B": [1, 2]},
    {"A": [1], "B": [2]},
    {"A": [4, 4], "B": [4, 4]},
])
def test_lsd_degenerate(samples):
    with pytest.raises(DegenerateInput):
        lsd_intervals(samples)


def oracle_significant(samples, a, b, alpha=0.05):
    names = list(samples)
    y = np.concatenate([np.asarray(samples[n], float) for n in names])
    x = np.zeros((len(y), len(names)))
    row = 0
    for k, n in enumerate(names):
        x[row: row + len(samples[n]), k] = 1
        row += len(samples[n])
    fit = sm.OLS(y, x).fit()
    c = np.zeros(len(names))
    c[names.index(a)], c[names.index(b)] = 1, -1
    return float(fit.t_test(c).pvalue) < alpha


def test_lsd_matches_statsmodels():
    rng = np.random.default_rng(4)
    decisions = 0
    for _ in range(25):
        k, m = int(rng.integers(2, 6)), int(rng.integers(3, 25))
        samples = {f"G{g}": rng.normal(rng.uniform(0, 2), rng.uniform(0.5, 2), m) for g in range(k)}
        out = {i.algorithm: i for i in lsd_intervals(samples)}
        for a, b in itertools.combinations(samples, 2):
            assert lsd_significant(out[a], out[b]) == oracle_significant(samples, a, b)
            decisions += 1
    assert decisions >= 25
