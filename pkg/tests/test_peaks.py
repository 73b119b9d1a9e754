#!/usr/bin/env python3

# pylint: disable=missing-docstring
import math
import unittest
from typing import Optional  # pylint: disable=unused-import

import numpy as np

from macromic import mutual_info
from macromic import peaks
from macromic import pointers

import tests.common


class TestLog2Hyperfactorial(unittest.TestCase):
    def test_small(self):
        self.assertEqual(0.0, peaks.log2_hyperfactorial(0))
        self.assertEqual(0.0, peaks.log2_hyperfactorial(1))
        self.assertAlmostEqual(2.0 + 3.0 * math.log2(3.0), peaks.log2_hyperfactorial(3), places=12)


class TestOutcomeClassProbs(unittest.TestCase):
    def test_two_peaks(self):
        np.testing.assert_allclose([1.0, 0.0], peaks.outcome_class_probs(r=0.5, k=1), atol=1e-15)
        np.testing.assert_allclose([0.5, 0.5], peaks.outcome_class_probs(r=1.0, k=1), atol=1e-15)

    def test_five_peaks(self):
        np.testing.assert_allclose([0.4, 0.6, 0.0, 0.0, 0.0], peaks.outcome_class_probs(r=0.2, k=4), atol=1e-12)

    def test_window_edges_on_peaks(self):
        np.testing.assert_allclose([0.2, 0.8, 0.0, 0.0, 0.0], peaks.outcome_class_probs(r=0.25, k=4), atol=1e-12)
        np.testing.assert_allclose([2.0 / 15.0, 4.0 / 15.0, 0.6, 0.0, 0.0],
                                   peaks.outcome_class_probs(r=0.375, k=4),
                                   atol=1e-12)
        np.testing.assert_allclose([1.0, 0.0, 0.0], peaks.outcome_class_probs(r=0.25, k=2), atol=1e-12)

    def test_against_cell_counting(self):
        for r, k in [(0.125, 4), (0.2, 4), (0.3, 3), (0.45, 7), (0.05, 12), (0.7, 5), (1.3, 2), (0.61, 9)]:
            np.testing.assert_allclose(
                tests.common.cell_counting_probs(r=r, k=k),
                peaks.outcome_class_probs(r=r, k=k),
                atol=1e-12,
                err_msg="r={}, k={}".format(r, k))

    def test_normalized(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            r = float(rng.uniform(0.01, 2.0))
            k = int(rng.integers(1, 30))
            self.assertAlmostEqual(1.0, float(np.sum(peaks.outcome_class_probs(r=r, k=k))), places=12)


class TestPeaksMi(unittest.TestCase):
    def test_two_peaks(self):
        self.assertAlmostEqual(0.5, peaks.peaks_mi(delta=2.0, span=1.0, k=1), places=12)
        self.assertAlmostEqual(1.0, peaks.peaks_mi(delta=0.5, span=1.0, k=1), places=12)

    def test_single_peak(self):
        self.assertEqual(0.0, peaks.peaks_mi(delta=0.1, span=1.0, k=0))

    def test_against_square_pointer(self):
        for k in range(1, 13):
            family = peaks.PeaksFamily(k=k, span=1.0)
            ensemble = family.ensemble()
            for delta in np.linspace(0.02, 3.0, 20):
                expected = mutual_info.mutual_information(
                    ensemble, pointers.PointerModel(pointers.PointerKind.SQUARE, float(delta))).bits
                self.assertAlmostEqual(
                    expected, family.mutual_information(float(delta)), delta=1e-9, msg="k={}, delta={}".format(
                        k, delta))

    def test_non_increasing_in_width(self):
        for k in [1, 3, 7]:
            previous = math.inf
            for delta in np.linspace(0.01, 4.0, 200):
                bits = peaks.peaks_mi(delta=float(delta), span=1.0, k=k)
                self.assertLessEqual(bits, previous + 1e-12)
                previous = bits


class TestPeaksMic(unittest.TestCase):
    def test_two_peaks(self):
        self.assertAlmostEqual(4.0, peaks.peaks_mic(b=0.5, span=2.0, k=1), delta=4.0 * 1e-8)

    def test_above_capacity(self):
        self.assertEqual(0.0, peaks.peaks_mic(b=1.2, span=1.0, k=1))
        self.assertEqual(0.0, peaks.peaks_mic(b=0.5, span=1.0, k=0))


class TestPeaksBestMic(unittest.TestCase):
    def test_at_most_one_bit(self):
        best = peaks.peaks_best_mic(b=0.5, span=10.0)
        self.assertEqual(20.0, best.delta)
        self.assertEqual(1, best.k)
        self.assertFalse(best.extrapolated)

        self.assertEqual(5.0, peaks.peaks_best_mic(b=1.0, span=5.0).delta)

    def test_log_of_peak_count(self):
        best = peaks.peaks_best_mic(b=2.0, span=9.0)
        self.assertAlmostEqual(3.0, best.delta, places=9)
        self.assertEqual(3, best.k)
        self.assertFalse(best.extrapolated)

    def test_extrapolated(self):
        best = peaks.peaks_best_mic(b=1.5, span=1.0)
        self.assertTrue(best.extrapolated)
        self.assertGreater(best.delta, 0.0)
        self.assertGreaterEqual(best.k, 1)
        self.assertGreaterEqual(peaks.peaks_mi(delta=best.delta, span=1.0, k=best.k) + 1e-9, 1.5)

    def test_no_other_member_does_better(self):
        for k in [1, 2, 3, 7]:
            b = math.log2(k + 1)
            best = peaks.peaks_best_mic(b=b, span=1.0)
            for other in range(1, 17):
                self.assertLessEqual(
                    peaks.peaks_mic(b=b, span=1.0, k=other), best.delta * (1.0 + 1e-6), msg="k={}, other={}".format(
                        k, other))

    def test_repr(self):
        self.assertEqual("PeaksMic(delta=3.0, k=3, extrapolated=False)", repr(peaks.PeaksMic(3.0, 3, False)))


class TestCalibrationSpan(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(9.0, peaks.calibration_span(mic_value=3.0, b_k=2.0))
        self.assertEqual(0.0, peaks.calibration_span(mic_value=0.0, b_k=0.5))

    def test_inverts_best_mic(self):
        for b in [0.25, 0.5, 1.0, 2.0, 3.0]:
            best = peaks.peaks_best_mic(b=b, span=7.0)
            self.assertAlmostEqual(7.0, peaks.calibration_span(mic_value=best.delta, b_k=b), places=9)

    def test_not_a_peak_count(self):
        valerr = None  # type: Optional[ValueError]
        try:
            _ = peaks.calibration_span(mic_value=1.0, b_k=1.5)
        except ValueError as err:
            valerr = err

        self.assertEqual("Expected calibration bits of the form log2(k+1) for an integer k, but got: 1.5", str(valerr))


class TestPeaksEnsemble(unittest.TestCase):
    def test_equally_spaced(self):
        ens = peaks.peaks_ensemble(k=2, span=4.0)
        np.testing.assert_allclose([0.0, 2.0, 4.0], ens.spectrum.eigenvalues)
        np.testing.assert_allclose([1.0 / 3.0] * 3, ens.weights)


if __name__ == '__main__':
    unittest.main()
