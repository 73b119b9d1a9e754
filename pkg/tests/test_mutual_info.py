#!/usr/bin/env python3

# pylint: disable=missing-docstring
import math
import unittest
from typing import Optional  # pylint: disable=unused-import

import numpy as np

from macromic import mutual_info
from macromic import pointers
from macromic import spectra

import tests.common


def two_peaks(span: float = 1.0) -> spectra.BranchEnsemble:
    return spectra.BranchEnsemble([0.5, 0.5], spectra.ObservableSpectrum([0.0, span]))


def square(delta: float) -> pointers.PointerModel:
    return pointers.PointerModel(pointers.PointerKind.SQUARE, delta)


def gaussian(delta: float) -> pointers.PointerModel:
    return pointers.PointerModel(pointers.PointerKind.GAUSSIAN, delta)


class TestDiscreteMutualInformation(unittest.TestCase):
    def test_perfectly_correlated(self):
        self.assertAlmostEqual(1.0, mutual_info.discrete_mutual_information(np.diag([0.5, 0.5])), places=12)

    def test_independent(self):
        joint = np.outer([0.3, 0.7], [0.5, 0.25, 0.25])
        self.assertAlmostEqual(0.0, mutual_info.discrete_mutual_information(joint), places=12)


class TestSquareCells(unittest.TestCase):
    def test_overlapping_windows(self):
        lengths, covered = mutual_info.square_cells(two_peaks(), delta=2.0)
        np.testing.assert_allclose([1.0, 1.0, 1.0], lengths)
        np.testing.assert_array_equal([[True, False], [True, True], [False, True]], covered)


class TestMutualInformation(unittest.TestCase):
    def test_square_resolving(self):
        result = mutual_info.mutual_information(two_peaks(), square(1.0))
        self.assertAlmostEqual(1.0, result.bits, places=12)
        self.assertEqual(mutual_info.Method.CLOSED_FORM, result.method)
        self.assertEqual(0.0, result.est_abs_error)

    def test_square_half_overlap(self):
        self.assertAlmostEqual(0.5, mutual_info.mutual_information(two_peaks(), square(2.0)).bits, places=12)

    def test_square_overlap_is_inverse_width(self):
        for delta in [1.5, 3.0, 10.0]:
            self.assertAlmostEqual(
                1.0 / delta, mutual_info.mutual_information(two_peaks(), square(delta)).bits, places=12)

    def test_single_branch(self):
        ens = spectra.BranchEnsemble([1.0, 0.0], spectra.ObservableSpectrum([0.0, 1.0]))
        for model in [square(0.1), gaussian(0.1)]:
            result = mutual_info.mutual_information(ens, model)
            self.assertEqual(0.0, result.bits)
            self.assertEqual(mutual_info.Method.CLOSED_FORM, result.method)

    def test_gaussian_against_grid(self):
        cases = [
            ([0.5, 0.5], [0.0, 1.0], 1.0),
            ([0.5, 0.5], [0.0, 1.0], 0.3),
            ([0.2, 0.5, 0.3], [0.0, 0.4, 1.0], 0.25),
        ]
        for weights, levels, delta in cases:
            ens = spectra.BranchEnsemble(weights, spectra.ObservableSpectrum(levels))
            result = mutual_info.mutual_information(ens, gaussian(delta))
            self.assertEqual(mutual_info.Method.QUADRATURE, result.method)
            self.assertLess(result.est_abs_error, mutual_info.MI_ABS_TOLERANCE)
            self.assertAlmostEqual(
                tests.common.grid_gaussian_mi(weights, levels, delta), result.bits, delta=1e-6,
                msg="weights={}, levels={}, delta={}".format(weights, levels, delta))

    def test_gaussian_well_separated(self):
        ens = spectra.BranchEnsemble.equal_peaks(k=3, span=1000.0)
        result = mutual_info.mutual_information(ens, gaussian(1.0))
        self.assertAlmostEqual(2.0, result.bits, places=6)

    def test_scale_invariance(self):
        ens = spectra.BranchEnsemble([0.2, 0.5, 0.3], spectra.ObservableSpectrum([0.0, 0.4, 1.0]))
        scaled = spectra.BranchEnsemble(ens.weights, ens.spectrum.scaled(7.5))
        for kind in [pointers.PointerKind.SQUARE, pointers.PointerKind.GAUSSIAN]:
            original = mutual_info.mutual_information(ens, pointers.PointerModel(kind, 0.6)).bits
            stretched = mutual_info.mutual_information(scaled, pointers.PointerModel(kind, 0.6 * 7.5)).bits
            self.assertAlmostEqual(original, stretched, delta=1e-9)

    def test_monotone_in_width(self):
        ens = spectra.BranchEnsemble([0.2, 0.5, 0.3], spectra.ObservableSpectrum([0.0, 0.4, 1.0]))
        previous = math.inf
        for delta in [0.05, 0.1, 0.3, 1.0, 3.0]:
            bits = mutual_info.mutual_information(ens, gaussian(delta)).bits
            self.assertLessEqual(bits, previous + 1e-9)
            previous = bits

    def test_result_repr(self):
        result = mutual_info.MiResult(bits=0.5, method=mutual_info.Method.CLOSED_FORM, est_abs_error=0.0)
        self.assertEqual("MiResult(bits=0.5, method=ClosedForm, est_abs_error=0.0)", repr(result))


class TestMic(unittest.TestCase):
    def test_two_peaks_square(self):
        for b, expected in [(0.25, 4.0), (0.5, 2.0), (1.0, 1.0)]:
            self.assertAlmostEqual(
                expected,
                mutual_info.mic(two_peaks(), pointers.PointerKind.SQUARE, b),
                delta=expected * 1e-8,
                msg="b={}".format(b))

    def test_scales_with_span(self):
        self.assertAlmostEqual(
            6.0, mutual_info.mic(two_peaks(span=3.0), pointers.PointerKind.SQUARE, 0.5), delta=6.0 * 1e-8)

    def test_above_entropy(self):
        self.assertEqual(0.0, mutual_info.mic(two_peaks(), pointers.PointerKind.SQUARE, 1.5))

    def test_four_peaks(self):
        ens = spectra.BranchEnsemble.equal_peaks(k=3, span=1.0)
        self.assertAlmostEqual(1.0 / 3.0, mutual_info.mic(ens, pointers.PointerKind.SQUARE, 2.0), delta=1e-8)

    def test_single_branch(self):
        ens = spectra.BranchEnsemble([1.0], spectra.ObservableSpectrum([0.0]))
        self.assertEqual(0.0, mutual_info.mic(ens, pointers.PointerKind.GAUSSIAN, 0.1))

    def test_gaussian_inverts_mutual_information(self):
        ens = spectra.BranchEnsemble([0.3, 0.7], spectra.ObservableSpectrum([0.0, 2.0]))
        delta_star = mutual_info.mic(ens, pointers.PointerKind.GAUSSIAN, 0.2)
        self.assertGreater(delta_star, 0.0)
        self.assertAlmostEqual(
            0.2, mutual_info.mutual_information(ens, gaussian(delta_star)).bits, delta=1e-6)

    def test_non_positive_bits(self):
        for b in [0.0, -1.0]:
            valerr = None  # type: Optional[ValueError]
            try:
                _ = mutual_info.mic(two_peaks(), pointers.PointerKind.SQUARE, b)
            except ValueError as err:
                valerr = err

            self.assertEqual("Expected a positive number of bits b, but got: {!r}".format(b), str(valerr))


class TestVarianceUpperBound(unittest.TestCase):
    def test_two_peaks(self):
        self.assertAlmostEqual(
            1.0 / (8.0 * math.log(2.0)), mutual_info.variance_upper_bound(two_peaks(), delta=1.0), places=12)

    def test_bound_tightens_for_wide_pointers(self):
        ens = spectra.BranchEnsemble([0.2, 0.5, 0.3], spectra.ObservableSpectrum([0.0, 0.4, 1.0]))

        previous = math.inf
        for delta in [5.0, 10.0, 30.0]:
            bits = mutual_info.mutual_information(ens, gaussian(delta)).bits
            bound = mutual_info.variance_upper_bound(ens, delta)
            self.assertLessEqual(bits, bound)

            gap = 1.0 - bits / bound
            self.assertLess(gap, previous)
            previous = gap

        self.assertLess(previous, 0.01)


class TestGuessing(unittest.TestCase):
    def test_square(self):
        self.assertAlmostEqual(0.75, mutual_info.guessing_probability(two_peaks(), square(2.0)), places=12)

    def test_gaussian(self):
        self.assertAlmostEqual(0.691462, mutual_info.guessing_probability(two_peaks(), gaussian(1.0)), places=6)

    def test_gaussian_unequal_weights(self):
        ens = spectra.BranchEnsemble([0.8, 0.2], spectra.ObservableSpectrum([0.0, 1.0]))

        def cdf(t: float) -> float:
            return 0.5 * (1.0 + math.erf(t / math.sqrt(2.0)))

        # the decision boundary sits where 0.8 g(u) = 0.2 g(u − 1)
        boundary = 0.5 + math.log(4.0)
        expected = 0.8 * cdf(boundary) + 0.2 * (1.0 - cdf(boundary - 1.0))
        self.assertAlmostEqual(expected, mutual_info.guessing_probability(ens, gaussian(1.0)), places=7)

    def test_single_branch(self):
        ens = spectra.BranchEnsemble([1.0], spectra.ObservableSpectrum([0.0]))
        self.assertEqual(1.0, mutual_info.guessing_probability(ens, gaussian(1.0)))

    def test_bounds_bracket_mutual_information(self):
        low, high = mutual_info.guessing_mi_bounds(0.75)
        self.assertAlmostEqual(1.0 - tests.common.binary_entropy(0.75), low, places=12)
        self.assertAlmostEqual(0.5, high, places=12)

        bits = mutual_info.mutual_information(two_peaks(), square(2.0)).bits
        self.assertLessEqual(low, bits)
        self.assertLessEqual(bits, high + 1e-12)

    def test_bounds_attained_by_extremal_channels(self):
        low, high = mutual_info.guessing_mi_bounds(2.0 / 3.0)

        # every outcome equally ambiguous
        symmetric = np.array([[1.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 3.0]])
        # an outcome is either conclusive or carries no information
        conclusive_or_blank = np.array([[1.0 / 6.0, 0.0, 1.0 / 3.0], [0.0, 1.0 / 6.0, 1.0 / 3.0]])

        for joint, bound, rounded in [(symmetric, low, 0.082), (conclusive_or_blank, high, 0.333)]:
            self.assertAlmostEqual(2.0 / 3.0, float(np.sum(np.max(joint, axis=0))), places=12)

            bits = mutual_info.discrete_mutual_information(joint)
            self.assertAlmostEqual(bound, bits, places=3)
            self.assertEqual(rounded, round(bits, 3))

    def test_bounds_bracket_gaussian(self):
        for delta in [0.3, 1.0, 3.0]:
            p_correct = mutual_info.guessing_probability(two_peaks(), gaussian(delta))
            low, high = mutual_info.guessing_mi_bounds(p_correct)
            bits = mutual_info.mutual_information(two_peaks(), gaussian(delta)).bits
            self.assertLessEqual(low, bits + 1e-7)
            self.assertLessEqual(bits, high + 1e-7)


if __name__ == '__main__':
    unittest.main()
