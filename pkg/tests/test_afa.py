"""
Unit tests for adaptive fractal analysis.
"""

import unittest
from unittest.mock import patch

import numpy as np

from analysis.afa import (
    AfaConfig,
    blend_weights,
    default_window_sizes,
    estimate_hurst,
    fluctuation,
    global_trend,
    min_window_size,
    to_random_walk,
)
from common.errors import ConfigError, DegenerateSeriesError
from synth.fgn import FgnSpec, gen_fgn, gen_random_walk


class TestRandomWalk(unittest.TestCase):
    """Test cases for to_random_walk"""

    def test_constant_series(self):
        np.testing.assert_array_equal(to_random_walk([1.0] * 8), np.zeros(8))

    def test_partial_sums_of_deviations(self):
        walk = to_random_walk([1, 2, 3, 2, 1, 2, 3, 2])
        np.testing.assert_allclose(walk, [-1, -1, 0, 0, -1, -1, 0, 0])

    def test_ends_near_zero(self):
        walk = to_random_walk(np.random.default_rng(1).standard_normal(1000))
        self.assertAlmostEqual(walk[-1], 0.0, places=9)

    def test_too_short(self):
        with self.assertRaises(DegenerateSeriesError):
            to_random_walk([1, 2, 3])


class TestGlobalTrend(unittest.TestCase):
    """Test cases for the overlap-blended trend and the fluctuation function"""

    def test_blend_weight_endpoints(self):
        w1, w2 = blend_weights(4)
        self.assertEqual((w1[0], w2[0]), (1.0, 0.0))
        self.assertEqual((w1[-1], w2[-1]), (0.0, 1.0))
        np.testing.assert_allclose(w1 + w2, np.ones(5))

    def test_linear_walk_is_reproduced(self):
        """Includes a trailing partial segment: 40 points, w = 9"""
        walk = 0.5 * np.arange(40) - 3.0
        for w in (5, 9, 11):
            np.testing.assert_allclose(global_trend(walk, w, 1), walk, atol=1e-10)
            self.assertLess(fluctuation(walk, w, 1), 1e-10)

    def test_quadratic_walk_with_order_two(self):
        i = np.arange(60, dtype=float)
        walk = 0.01 * i ** 2 - i
        np.testing.assert_allclose(global_trend(walk, 9, 2), walk, atol=1e-9)

    def test_zero_walk(self):
        self.assertEqual(fluctuation(np.zeros(30), 5, 1), 0.0)

    def test_trend_has_no_jumps(self):
        i = np.arange(200, dtype=float)
        walk = 10 * np.sin(2 * np.pi * i / 50) + 0.1 * i
        trend = global_trend(walk, 9, 1)
        self.assertLessEqual(np.max(np.abs(np.diff(trend))), 2 * np.max(np.abs(np.diff(walk))))

    def test_window_checks(self):
        walk = np.arange(20, dtype=float)
        with self.assertRaises(ConfigError):
            global_trend(walk, 6, 1)
        with self.assertRaises(ConfigError):
            global_trend(walk, 5, 2)
        with self.assertRaises(DegenerateSeriesError):
            global_trend(walk, 21, 1)


class TestAfaConfig(unittest.TestCase):
    """Test cases for AfaConfig and the window schedule"""

    def test_default_schedule(self):
        self.assertEqual(default_window_sizes(50), (5, 9, 11))

    def test_schedule_is_odd_increasing_and_bounded(self):
        windows = default_window_sizes(8192)
        self.assertTrue(all(w % 2 == 1 for w in windows))
        self.assertTrue(all(b > a for a, b in zip(windows, windows[1:])))
        self.assertGreaterEqual(windows[0], 5)
        self.assertLessEqual(windows[-1], 8192 / 4)

    def test_min_window_grows_with_order(self):
        self.assertEqual(min_window_size(1), 5)
        self.assertEqual(min_window_size(3), 9)

    def test_invalid_configs(self):
        for kwargs in ({'poly_order': 0}, {'window_sizes': (5, 8, 11)}, {'window_sizes': (3, 5, 7)},
                       {'window_sizes': (9, 7, 11)}, {'poly_order': 2, 'window_sizes': (5, 7, 9)},
                       {'fit_range': (0, 2)}, {'fit_range': (-1, 4)}):
            with self.subTest(kwargs=kwargs), self.assertRaises(ConfigError):
                AfaConfig(**kwargs)

    def test_windows_for_short_series(self):
        with self.assertRaises(DegenerateSeriesError):
            AfaConfig().windows_for(20)

    def test_explicit_window_too_large(self):
        with self.assertRaises(DegenerateSeriesError):
            AfaConfig(window_sizes=(5, 7, 9, 31)).windows_for(100)


class TestEstimateHurst(unittest.TestCase):
    """Test cases for estimate_hurst"""

    @classmethod
    def setUpClass(cls):
        cls.fgn07 = gen_fgn(FgnSpec(8192, 0.7, seed=5))

    def test_result_shape(self):
        result = estimate_hurst(self.fgn07)
        self.assertEqual(len(result.log2_w), len(result.log2_F))
        self.assertGreaterEqual(len(result.log2_w), 3)
        self.assertTrue(0.0 <= result.r_squared <= 1.0)
        self.assertGreater(result.slope_stderr, 0.0)
        low, high = result.ci95()
        self.assertLess(low, result.hurst)
        self.assertGreater(high, result.hurst)

    def test_fgn_slope(self):
        self.assertAlmostEqual(estimate_hurst(self.fgn07).hurst, 0.7, delta=0.15)

    def test_white_noise(self):
        noise = gen_fgn(FgnSpec(8192, 0.5, seed=9))
        self.assertAlmostEqual(estimate_hurst(noise).hurst, 0.5, delta=0.15)

    def test_summed_noise_is_non_stationary(self):
        self.assertAlmostEqual(estimate_hurst(gen_random_walk(8192, 4)).hurst, 1.5, delta=0.15)

    def test_scale_and_shift_invariance(self):
        x = self.fgn07[:1024]
        reference = estimate_hurst(x).hurst
        for a, b in ((3.0, 1.0), (-0.01, 50.0), (1e4, -2.0)):
            with self.subTest(a=a, b=b):
                self.assertAlmostEqual(estimate_hurst(a * x + b).hurst, reference, places=9)

    def test_fit_range(self):
        full = estimate_hurst(self.fgn07)
        partial = estimate_hurst(self.fgn07, AfaConfig(fit_range=(2, 6)))
        self.assertEqual(partial.window_sizes, full.window_sizes[2:6])

    def test_explicit_windows(self):
        result = estimate_hurst(self.fgn07[:512], AfaConfig(window_sizes=(5, 9, 17, 33, 65)))
        self.assertEqual(result.window_sizes, (5, 9, 17, 33, 65))
        np.testing.assert_allclose(result.log2_w, np.log2([5, 9, 17, 33, 65]))

    def test_constant_series(self):
        with self.assertRaises(DegenerateSeriesError):
            estimate_hurst(np.full(100, 0.25))

    def test_zero_fluctuation_windows_are_excluded(self):
        x = self.fgn07[:1024]
        windows = AfaConfig().windows_for(len(x))
        real = fluctuation

        def fake(walk, w, poly_order):
            return 0.0 if w == windows[0] else real(walk, w, poly_order)

        with patch('analysis.afa.fluctuation', side_effect=fake), \
                self.assertLogs('analysis.afa', level='WARNING') as logs:
            result = estimate_hurst(x)
        self.assertEqual(result.excluded_windows, (windows[0],))
        self.assertNotIn(windows[0], result.window_sizes)
        self.assertIn("zero fluctuation", logs.output[0])

    def test_too_few_usable_windows(self):
        with patch('analysis.afa.fluctuation', return_value=0.0):
            with self.assertRaises(DegenerateSeriesError):
                estimate_hurst(self.fgn07[:1024])

    def test_to_dict(self):
        document = estimate_hurst(self.fgn07[:1024]).to_dict()
        self.assertEqual(set(document), {'hurst', 'slope_stderr', 'r_squared', 'intercept', 'window_sizes',
                                         'log2_w', 'log2_F', 'excluded_windows'})


if __name__ == '__main__':
    unittest.main()
