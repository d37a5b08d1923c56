"""
Unit tests for the Granger causality module.
"""

import unittest

import numpy as np

from analysis.granger import (
    GrangerConfig,
    GrangerResult,
    LagSelection,
    bidirectional,
    difference,
    granger_test,
    lag_columns,
    max_feasible_lag,
    select_lag,
)
from common.errors import CollinearityError, ConfigError, DataError, DegenerateSeriesError
from synth.var import VarSpec, gen_var


class TestDifference(unittest.TestCase):
    """Test cases for difference"""

    def test_ramp(self):
        np.testing.assert_array_equal(difference([1, 2, 3, 4]), [1, 1, 1])

    def test_constant(self):
        np.testing.assert_array_equal(difference([5.0] * 6), np.zeros(5))

    def test_lag_two(self):
        np.testing.assert_array_equal(difference([1, 2, 4, 8], lag=2), [3, 6])

    def test_too_short(self):
        with self.assertRaises(DegenerateSeriesError):
            difference([1.0], 1)
        with self.assertRaises(ConfigError):
            difference([1.0, 2.0], 0)


class TestGrangerTest(unittest.TestCase):
    """Test cases for granger_test"""

    def setUp(self):
        self.x, self.y = gen_var(VarSpec(300, a_xx=0.3, a_yy=0.2, a_xy=0.4, seed=21))

    def test_lag_columns(self):
        cols = lag_columns(np.arange(6.0), 2, 2)
        np.testing.assert_array_equal(cols, [[1, 0], [2, 1], [3, 2], [4, 3]])

    def test_perfect_lagged_copy(self):
        x = np.random.default_rng(2).standard_normal(100)
        y = np.concatenate([[0.0], x[:-1]])
        f_stat, p = granger_test(x, y, 1)
        self.assertGreater(f_stat, 1e6)
        self.assertLess(p, 1e-12)

    def test_coupled_direction_detected(self):
        self.assertLess(granger_test(self.x, self.y, 1).p_value, 0.005)

    def test_statistics_in_range(self):
        for k in (1, 2, 4):
            for a, b in ((self.x, self.y), (self.y, self.x)):
                f_stat, p = granger_test(a, b, k)
                self.assertGreaterEqual(f_stat, 0.0)
                self.assertTrue(0.0 <= p <= 1.0)

    def test_affine_invariance(self):
        reference = granger_test(self.x, self.y, 3)
        for a, b, c, d in ((2.0, 1.0, -3.0, 7.0), (-0.5, 100.0, 0.01, -1.0)):
            with self.subTest(a=a, c=c):
                f_stat, p = granger_test(a * self.x + b, c * self.y + d, 3)
                self.assertAlmostEqual(f_stat, reference.f_stat, places=8)
                self.assertAlmostEqual(p, reference.p_value, places=10)

    def test_degrees_of_freedom_guard(self):
        """T - k must exceed 2k + 1"""
        x = np.random.default_rng(4).standard_normal(10)
        y = np.random.default_rng(5).standard_normal(10)
        granger_test(x, y, 2)
        with self.assertRaises(DegenerateSeriesError):
            granger_test(x, y, 3)

    def test_identical_series_are_collinear(self):
        with self.assertRaises(CollinearityError):
            granger_test(self.x, self.x, 2)

    def test_unequal_lengths(self):
        with self.assertRaises(DataError):
            granger_test(self.x, self.y[:-1], 1)


class TestLagSelection(unittest.TestCase):
    """Test cases for select_lag"""

    def test_single_candidate(self):
        x, y = gen_var(VarSpec(50, a_xy=0.5, seed=1))
        self.assertEqual(select_lag(x, y, 1), 1)

    def test_max_feasible_lag(self):
        self.assertEqual(max_feasible_lag(26), 8)
        self.assertEqual(max_feasible_lag(4), 0)

    def test_lag_one_coupling(self):
        choices = [select_lag(*gen_var(VarSpec(400, a_xx=0.2, a_yy=0.2, a_xy=0.5, seed=s)), 8) for s in range(25)]
        self.assertEqual(max(set(choices), key=choices.count), 1)

    def test_lag_three_coupling(self):
        choices = [select_lag(*gen_var(VarSpec(400, a_xy=0.8, coupling_lag=3, seed=s)), 8) for s in range(25)]
        self.assertEqual(max(set(choices), key=choices.count), 3)

    def test_symmetric_in_arguments(self):
        x, y = gen_var(VarSpec(200, a_xx=0.4, a_yx=0.3, seed=8))
        self.assertEqual(select_lag(x, y, 6), select_lag(y, x, 6))

    def test_too_short_for_max_lag(self):
        x, y = gen_var(VarSpec(20, seed=3))
        with self.assertRaises(DegenerateSeriesError):
            select_lag(x, y, 8)


class TestBidirectional(unittest.TestCase):
    """Test cases for bidirectional"""

    def setUp(self):
        self.x, self.y = gen_var(VarSpec(500, a_xx=0.2, a_yy=0.2, a_xy=0.5, seed=17))

    def test_anti_symmetry_is_exact(self):
        forward = bidirectional(self.x, self.y)
        backward = bidirectional(self.y, self.x)
        self.assertEqual((forward.lag, forward.n_obs), (backward.lag, backward.n_obs))
        self.assertEqual((forward.f_xy, forward.p_xy), (backward.f_yx, backward.p_yx))
        self.assertEqual((forward.f_yx, forward.p_yx), (backward.f_xy, backward.p_xy))

    def test_direction(self):
        result = bidirectional(self.x, self.y)
        self.assertLess(result.p_xy, 0.005)
        self.assertEqual(result.n_obs, len(self.x) - 1 - result.lag)

    def test_fixed_lag(self):
        result = bidirectional(self.x, self.y, GrangerConfig(max_lag=4, lag_selection=LagSelection.FIXED, fixed_lag=4))
        self.assertEqual(result.lag, 4)
        self.assertEqual(result.n_obs, 499 - 4)

    def test_lag_search_is_capped_for_short_series(self):
        """20 points difference to 19, which allows lags up to 5"""
        result = bidirectional(self.x[:20], self.y[:20], GrangerConfig(max_lag=8))
        self.assertLessEqual(result.lag, 5)

    def test_integrated_pair_keeps_lag_one(self):
        """Differences of a summed VAR(1) are a VAR(1): no long lag search, no reverse leakage"""
        results = [bidirectional(*gen_var(VarSpec(500, a_xx=0.2, a_yy=0.2, a_xy=0.5, seed=s, integrated=True)))
                   for s in range(30)]
        lags = [r.lag for r in results]
        self.assertEqual(max(set(lags), key=lags.count), 1)
        self.assertTrue(all(r.p_xy < 0.005 for r in results))
        self.assertLessEqual(sum(r.p_yx < 0.005 for r in results), 2)

    def test_too_short_for_any_lag(self):
        with self.assertRaises(DegenerateSeriesError):
            bidirectional(self.x[:4], self.y[:4])

    def test_identical_series(self):
        with self.assertRaises(CollinearityError):
            bidirectional(self.x, self.x)

    def test_config_validation(self):
        with self.assertRaises(ConfigError):
            GrangerConfig(max_lag=0)
        with self.assertRaises(ConfigError):
            GrangerConfig(alpha=1.5)
        with self.assertRaises(ConfigError):
            GrangerConfig(lag_selection=LagSelection.FIXED)

    def test_to_dict_writes_infinite_f_as_null(self):
        result = GrangerResult(lag=1, f_xy=float('inf'), p_xy=0.0, f_yx=0.5, p_yx=0.48, n_obs=10)
        document = result.to_dict()
        self.assertIsNone(document['f_xy'])
        self.assertEqual(document['f_yx'], 0.5)


if __name__ == '__main__':
    unittest.main()
