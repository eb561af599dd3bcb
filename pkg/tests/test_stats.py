import numpy as np
import pytest

from blockcumulants import ValidationError
from blockcumulants.stats import element_std_bound, estimator_spread_test, std_bound


class TestStdBound:
    def test_simple_value(self):
        assert std_bound(1.0, 100) == pytest.approx(0.1)

    def test_unit_normal_order2(self):
        # fourth moment of the unit normal is 3
        assert std_bound(3.0, 10_000) == pytest.approx(0.01732, abs=1e-5)

    def test_rejects_negative(self):
        with pytest.raises(ValidationError):
            std_bound(-1.0, 10)


class TestElementBound:
    def test_matches_manual_formula(self, rng):
        x = rng.standard_normal((500, 3))
        x = x - x.mean(axis=0)
        y = x[:, 0] * x[:, 1]
        want = 5.0 * np.sqrt(np.mean(y**2) / 500)
        assert element_std_bound(x, (1, 2)) == pytest.approx(want, rel=1e-12)


class TestSpreadTest:
    def test_normal_order2_within_bound(self):
        report = estimator_spread_test(2, 5_000, replicates=120, seed=3)
        # the true spread of the variance estimator sits below the bound
        assert report["within_bound"]
        assert report["passed"]
        assert report["ratio"] < 1.0

    def test_report_fields(self):
        report = estimator_spread_test(3, 1_000, replicates=40, seed=1)
        for field in ("empirical_std", "bound", "ratio", "passed", "within_bound",
                      "order", "t", "replicates", "safety_factor"):
            assert field in report
        # order-3 on a symmetric distribution: spread close to the bound, so
        # only the safety-factored assertion is stable
        assert report["passed"]

    def test_needs_replicates(self):
        with pytest.raises(ValidationError):
            estimator_spread_test(2, 100, replicates=1)
