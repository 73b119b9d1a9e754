#!/usr/bin/env python3

# pylint: disable=missing-docstring
import math
import unittest
from typing import Optional  # pylint: disable=unused-import

import hypothesis
import hypothesis.strategies as st
import numpy as np

from macromic import spectra


class TestObservableSpectrum(unittest.TestCase):
    def test_span_and_scale(self):
        spectrum = spectra.ObservableSpectrum([-1.0, 0.5, 2.0])
        self.assertEqual(3.0, spectrum.span)
        self.assertEqual(3.0, spectrum.scale)
        self.assertEqual(1.0, spectra.ObservableSpectrum([4.0]).scale)

    def test_degenerate(self):
        valerr = None  # type: Optional[ValueError]
        try:
            _ = spectra.ObservableSpectrum([0.0, 0.0])
        except ValueError as err:
            valerr = err

        self.assertEqual("Expected strictly increasing (non-degenerate) eigenvalues, but got: [0.0, 0.0]", str(valerr))

    def test_equally_spaced(self):
        np.testing.assert_allclose([0.0, 0.5, 1.0, 1.5], spectra.ObservableSpectrum.equally_spaced(4, 1.5).eigenvalues)

    def test_scaled(self):
        np.testing.assert_allclose([0.0, 3.0], spectra.ObservableSpectrum([0.0, 1.0]).scaled(3.0).eigenvalues)


class TestBranchEnsemble(unittest.TestCase):
    def test_not_normalized(self):
        valerr = None  # type: Optional[ValueError]
        try:
            _ = spectra.BranchEnsemble([0.5, 0.6], spectra.ObservableSpectrum([0.0, 1.0]))
        except ValueError as err:
            valerr = err

        self.assertIsNotNone(valerr)
        self.assertTrue(str(valerr).startswith("Expected the branch weights to sum to 1"), str(valerr))

    def test_count_mismatch(self):
        valerr = None  # type: Optional[ValueError]
        try:
            _ = spectra.BranchEnsemble([1.0], spectra.ObservableSpectrum([0.0, 1.0]))
        except ValueError as err:
            valerr = err

        self.assertEqual("Expected as many weights as eigenvalues (2), but got 1 weights", str(valerr))

    def test_mean_and_variance(self):
        ens = spectra.BranchEnsemble([0.99, 0.01], spectra.ObservableSpectrum([0.0, 100.0]))
        self.assertAlmostEqual(1.0, ens.mean(), places=12)
        self.assertAlmostEqual(99.0, ens.variance(), places=10)

    def test_support(self):
        ens = spectra.BranchEnsemble([0.0, 0.5, 0.5], spectra.ObservableSpectrum([0.0, 1.0, 2.0]))
        support = ens.support()
        self.assertEqual(2, len(support))
        np.testing.assert_allclose([1.0, 2.0], support.spectrum.eigenvalues)

    def test_equal_peaks(self):
        ens = spectra.BranchEnsemble.equal_peaks(k=3, span=6.0)
        np.testing.assert_allclose([0.25] * 4, ens.weights)
        np.testing.assert_allclose([0.0, 2.0, 4.0, 6.0], ens.spectrum.eigenvalues)


class TestShannonEntropy(unittest.TestCase):
    def test_uniform_two(self):
        self.assertEqual(1.0, spectra.shannon_entropy([0.5, 0.5]))

    def test_deterministic(self):
        self.assertEqual(0.0, spectra.shannon_entropy([1.0, 0.0]))

    def test_uniform_four(self):
        self.assertEqual(2.0, spectra.shannon_entropy([0.25] * 4))

    def test_normalize(self):
        self.assertAlmostEqual(1.0, spectra.shannon_entropy([2.0, 2.0], normalize=True), places=12)

    def test_negative(self):
        valerr = None  # type: Optional[ValueError]
        try:
            _ = spectra.shannon_entropy([-0.5, 1.5])
        except ValueError as err:
            valerr = err

        self.assertEqual("Expected non-negative probabilities, but got: [-0.5, 1.5]", str(valerr))


class TestBinaryEntropy(unittest.TestCase):
    @hypothesis.given(p=st.floats(min_value=0.0, max_value=1.0))
    def test_symmetric_and_bounded(self, p: float) -> None:
        value = spectra.binary_entropy(p)
        self.assertGreaterEqual(value, 0.0)
        self.assertLessEqual(value, 1.0 + 1e-12)
        self.assertAlmostEqual(value, spectra.binary_entropy(1.0 - p), places=12)

    def test_out_of_range(self):
        with self.assertRaises(ValueError):
            _ = spectra.binary_entropy(1.5)


class TestDensityMatrix(unittest.TestCase):
    def test_non_hermitian(self):
        valerr = None  # type: Optional[ValueError]
        try:
            _ = spectra.DensityMatrix([[0.5, 0.5], [0.0, 0.5]])
        except ValueError as err:
            valerr = err

        self.assertEqual("Expected a Hermitian matrix, but the largest deviation is: 0.5", str(valerr))

    def test_not_positive(self):
        valerr = None  # type: Optional[ValueError]
        try:
            _ = spectra.DensityMatrix([[1.5, 0.0], [0.0, -0.5]])
        except ValueError as err:
            valerr = err

        self.assertEqual("Expected a positive semi-definite matrix, but got an eigenvalue: -0.5", str(valerr))

    def test_trace(self):
        valerr = None  # type: Optional[ValueError]
        try:
            _ = spectra.DensityMatrix([[0.5, 0.0], [0.0, 0.25]])
        except ValueError as err:
            valerr = err

        self.assertEqual("Expected a unit trace, but got: 0.75", str(valerr))

    def test_rank_and_purity(self):
        pure = spectra.PureState.normalized([1.0, 1.0j]).density_matrix()
        self.assertTrue(pure.is_pure())
        self.assertEqual(1, pure.rank())

        mixed = spectra.DensityMatrix.maximally_mixed(3)
        self.assertFalse(mixed.is_pure())
        self.assertEqual(3, mixed.rank())

    def test_mixture(self):
        first = spectra.PureState([1.0, 0.0]).density_matrix()
        second = spectra.PureState([0.0, 1.0]).density_matrix()
        mixed = spectra.DensityMatrix.mixture([0.5, 0.5], [first, second])
        np.testing.assert_allclose(np.eye(2) / 2.0, mixed.entries)


class TestVonNeumannEntropy(unittest.TestCase):
    def test_maximally_mixed(self):
        self.assertAlmostEqual(1.0, spectra.von_neumann_entropy(spectra.DensityMatrix.maximally_mixed(2)), places=12)

    def test_pure(self):
        state = spectra.PureState.normalized([1.0, 2.0, 3.0j])
        self.assertAlmostEqual(0.0, spectra.von_neumann_entropy(state.density_matrix()), places=12)

    def test_diagonal(self):
        self.assertAlmostEqual(0.468996, spectra.von_neumann_entropy(np.diag([0.9, 0.1])), places=6)

    def test_hermitian_entropy_of_unnormalized_matrix(self):
        self.assertAlmostEqual(1.0, spectra.hermitian_entropy(np.diag([0.5, 0.5, 0.0])), places=12)


class TestSuperpositionState(unittest.TestCase):
    def test_equal(self):
        state = spectra.superposition_state(spectra.BranchEnsemble([0.5, 0.5], spectra.ObservableSpectrum([0, 1])))
        np.testing.assert_allclose([1.0 / math.sqrt(2.0)] * 2, state.amplitudes, atol=1e-15)

    def test_deterministic(self):
        state = spectra.superposition_state(spectra.BranchEnsemble([1.0, 0.0], spectra.ObservableSpectrum([0, 1])))
        np.testing.assert_allclose([1.0, 0.0], state.amplitudes)

    def test_square_roots(self):
        state = spectra.superposition_state(spectra.BranchEnsemble([0.25, 0.75], spectra.ObservableSpectrum([0, 1])))
        np.testing.assert_allclose([0.5, math.sqrt(3.0) / 2.0], state.amplitudes, atol=1e-15)


class TestDephaseFully(unittest.TestCase):
    def test_diagonal_is_fixed(self):
        rho = spectra.DensityMatrix(np.diag([0.2, 0.3, 0.5]))
        np.testing.assert_allclose(rho.entries, spectra.dephase_fully(rho).entries)

    def test_equal_superposition(self):
        rho = spectra.PureState.normalized([1.0, 1.0]).density_matrix()
        np.testing.assert_allclose(np.eye(2) / 2.0, spectra.dephase_fully(rho).entries, atol=1e-15)

    def test_coherence_erased(self):
        rho = spectra.DensityMatrix(0.5 * np.array([[1.0, 0.6], [0.6, 1.0]]))
        np.testing.assert_allclose(np.diag([0.5, 0.5]), spectra.dephase_fully(rho).entries)


class TestMicroMacroState(unittest.TestCase):
    def test_branch_density_matrix(self):
        state = spectra.MicroMacroState([0.25, 0.75], spectra.ObservableSpectrum([0.0, 1.0]))
        expected = np.array([[0.25, math.sqrt(0.25 * 0.75)], [math.sqrt(0.25 * 0.75), 0.75]])
        np.testing.assert_allclose(expected, state.branch_density_matrix().entries, atol=1e-15)


if __name__ == '__main__':
    unittest.main()
