"""
Unit tests for the synthetic signal generators.
"""

import tempfile
import unittest
from unittest.mock import patch
from datetime import date
from pathlib import Path

import numpy as np

from analysis.regression import ols
from common.errors import ConfigError, NumericalError
from ingest.documents import Discourse, read_corpus
from ingest.keywords import KeywordSpec, doc_relative_frequency
from synth.corpus import synthetic_documents, write_synthetic_corpus
from synth.fgn import FgnSpec, circulant_eigenvalues, fgn_autocovariance, gen_fgn, gen_random_walk
from synth.var import VarSpec, gen_var


class TestFgn(unittest.TestCase):
    """Test cases for fractional Gaussian noise"""

    def test_deterministic_per_seed(self):
        a = gen_fgn(FgnSpec(1024, 0.7, seed=42))
        b = gen_fgn(FgnSpec(1024, 0.7, seed=42))
        np.testing.assert_array_equal(a, b)
        self.assertFalse(np.array_equal(a, gen_fgn(FgnSpec(1024, 0.7, seed=43))))

    def test_length_and_moments(self):
        x = gen_fgn(FgnSpec(8192, 0.5, seed=3))
        self.assertEqual(len(x), 8192)
        self.assertAlmostEqual(float(x.mean()), 0.0, delta=0.05)
        self.assertAlmostEqual(float(x.var()), 1.0, delta=0.06)

    def test_white_noise_lag_one_autocorrelation(self):
        x = gen_fgn(FgnSpec(8192, 0.5, seed=8))
        r1 = float(np.corrcoef(x[:-1], x[1:])[0, 1])
        self.assertLess(abs(r1), 3 / np.sqrt(8192))

    def test_autocovariance_formula(self):
        self.assertEqual(fgn_autocovariance(np.array([0]), 0.8)[0], 1.0)
        np.testing.assert_allclose(fgn_autocovariance(np.arange(1, 5), 0.5), np.zeros(4), atol=1e-15)
        self.assertAlmostEqual(fgn_autocovariance(np.array([1]), 0.8)[0], 0.5 * (2 ** 1.6 - 2), places=14)

    def test_sample_autocovariance(self):
        """Mean over 100 seeds of the lag 1..10 sample autocovariance, H = 0.8"""
        n = 1024
        lags = np.arange(1, 11)
        acov = np.zeros(len(lags))
        for seed in range(100):
            x = gen_fgn(FgnSpec(n, 0.8, seed=seed))
            acov += [np.dot(x[:-k], x[k:]) / (n - k) for k in lags]
        acov /= 100
        np.testing.assert_allclose(acov, fgn_autocovariance(lags, 0.8), atol=0.06)

    def test_circulant_eigenvalues_non_negative(self):
        for hurst in (0.1, 0.5, 0.9, 0.99):
            eigenvalues = circulant_eigenvalues(1024, hurst)
            self.assertGreater(eigenvalues.min(), -1e-10 * eigenvalues.max())

    def test_negative_eigenvalues_are_rejected(self):
        with patch('synth.fgn.circulant_eigenvalues', return_value=np.array([1.0, -0.5, 1.0, 1.0])):
            with self.assertRaises(NumericalError):
                gen_fgn(FgnSpec(64, 0.7))

    def test_spec_validation(self):
        for kwargs in ({'n': 100, 'hurst': 0.5}, {'n': 32, 'hurst': 0.5}, {'n': 64, 'hurst': 1.0},
                       {'n': 64, 'hurst': 0.5, 'seed': -1}):
            with self.subTest(kwargs=kwargs), self.assertRaises(ConfigError):
                FgnSpec(**kwargs)

    def test_metadata_names_generator(self):
        self.assertEqual(FgnSpec(64, 0.3, 7).metadata()['rng'], "PCG64")

    def test_random_walk(self):
        walk = gen_random_walk(100, 1)
        self.assertEqual(len(walk), 100)
        np.testing.assert_array_equal(walk, gen_random_walk(100, 1))


class TestVar(unittest.TestCase):
    """Test cases for coupled autoregressions"""

    def test_deterministic_per_seed(self):
        spec = VarSpec(200, a_xx=0.3, a_xy=0.4, seed=5)
        for a, b in zip(gen_var(spec), gen_var(spec)):
            np.testing.assert_array_equal(a, b)

    def test_decoupled_pair_is_uncorrelated(self):
        x, y = gen_var(VarSpec(5000, a_xx=0.5, a_yy=0.5, seed=2))
        self.assertLess(abs(float(np.corrcoef(x, y)[0, 1])), 0.06)

    def test_decoupled_matches_recursion(self):
        """The filtered decoupled path and the explicit recursion agree"""
        x_fast, _ = gen_var(VarSpec(100, a_xx=0.5, a_yy=0.1, seed=9))
        x_loop, _ = gen_var(VarSpec(100, a_xx=0.5, a_yy=0.1, a_xy=1e-300, seed=9))
        np.testing.assert_allclose(x_fast, x_loop, rtol=1e-10)

    def test_ols_recovers_coupling(self):
        x, y = gen_var(VarSpec(5000, a_yy=0.2, a_xy=0.8, seed=4))
        design = np.column_stack([np.ones(4999), y[:-1], x[:-1]])
        coefficients = ols(design, y[1:]).coefficients
        self.assertAlmostEqual(coefficients[2], 0.8, delta=0.05)
        self.assertAlmostEqual(coefficients[1], 0.2, delta=0.05)

    def test_unstable_coefficients(self):
        with self.assertRaises(NumericalError):
            gen_var(VarSpec(100, a_xx=1.0))
        with self.assertRaises(NumericalError):
            gen_var(VarSpec(100, a_xx=0.5, a_yy=0.5, a_xy=0.9, a_yx=0.9))

    def test_spectral_radius_with_coupling_lag(self):
        spec = VarSpec(10, a_xy=0.5, a_yx=0.5, coupling_lag=2)
        self.assertEqual(spec.companion().shape, (4, 4))
        self.assertAlmostEqual(spec.spectral_radius(), 0.5 ** 0.5, places=12)

    def test_spec_validation(self):
        for kwargs in ({'n': 0}, {'n': 5, 'noise_sd': 0.0}, {'n': 5, 'common_sd': -1.0},
                       {'n': 5, 'coupling_lag': 0}):
            with self.subTest(kwargs=kwargs), self.assertRaises(ConfigError):
                VarSpec(**kwargs)

    def test_integrated_differences_follow_the_var(self):
        stationary = gen_var(VarSpec(300, a_xx=0.2, a_xy=0.5, seed=6))
        integrated = gen_var(VarSpec(300, a_xx=0.2, a_xy=0.5, seed=6, integrated=True))
        for level, summed in zip(stationary, integrated):
            self.assertEqual(summed[0], level[0])
            np.testing.assert_allclose(np.diff(summed), level[1:], atol=1e-9)

    def test_metadata(self):
        metadata = VarSpec(10, a_xy=0.5, seed=3).metadata()
        self.assertEqual((metadata['a_xy'], metadata['burn_in'], metadata['rng']), (0.5, 500, "PCG64"))
        self.assertFalse(metadata['integrated'])


class TestSyntheticCorpus(unittest.TestCase):
    """Test cases for corpora following given series"""

    def test_frequencies_follow_series(self):
        ads = np.array([0.0, 5.0, -5.0])
        art = np.array([1.0, 1.0, 1.0])
        docs = synthetic_documents({"radio": (ads, art)}, date(1950, 1, 1), base=0.1, scale=0.02,
                                   tokens_per_doc=200)
        self.assertEqual(len(docs), 6)
        spec = KeywordSpec.of("radio")
        ad_freqs = [doc_relative_frequency(d, spec) for d in docs if d.discourse is Discourse.ADVERTISEMENT]
        art_freqs = [doc_relative_frequency(d, spec) for d in docs if d.discourse is Discourse.ARTICLE]
        np.testing.assert_allclose(ad_freqs, [0.1, 0.2, 0.0])
        np.testing.assert_allclose(art_freqs, [0.12] * 3)
        self.assertEqual(docs[2].date, date(1950, 1, 2))

    def test_written_corpus_is_readable(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "corpus.jsonl"
            count = write_synthetic_corpus(path, {"fiets": ([0.0] * 4, [1.0] * 4)}, date(1960, 1, 1))
            self.assertEqual(count, 8)
            self.assertEqual(len(read_corpus(path)), 8)

    def test_invalid_inputs(self):
        for pairs in ({}, {"radio": ([0.0], [0.0, 1.0])}, {"de": ([0.0], [0.0])}, {"Radio": ([0.0], [0.0])}):
            with self.subTest(pairs=pairs), self.assertRaises(ConfigError):
                synthetic_documents(pairs, date(1950, 1, 1))

    def test_counts_must_fit(self):
        with self.assertRaises(ConfigError):
            synthetic_documents({"radio": ([0.0], [0.0]), "fiets": ([0.0], [0.0])}, date(1950, 1, 1), base=0.6)


if __name__ == '__main__':
    unittest.main()
