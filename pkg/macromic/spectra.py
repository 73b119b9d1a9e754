#!/usr/bin/env python3
"""Define the value types (spectra, branch ensembles, states) and the entropy primitives shared by all measures."""
import math
from typing import Sequence, Union  # pylint: disable=unused-import

import icontract
import numpy as np
import scipy.special
from typing_extensions import Final  # pylint: disable=unused-import

from macromic import numerics

#: Tolerance on the normalization of weights, amplitudes and traces.
NORMALIZATION_TOLERANCE = 1e-12  # type: Final

#: Tolerance on the Hermiticity of density matrices.
HERMITICITY_TOLERANCE = 1e-12  # type: Final

_LN2 = math.log(2.0)


def _readonly(array: np.ndarray) -> np.ndarray:
    """Mark the array as immutable and return it."""
    array.setflags(write=False)
    return array


class ObservableSpectrum:
    """
    Represent the non-degenerate spectrum of the reference observable A.

    The eigenvalues are expected in strictly increasing order; branches are referenced by their index.

    :ivar eigenvalues: read-only array of eigenvalues a_ℓ

    >>> spectrum = ObservableSpectrum([0.0, 1.0, 3.0])
    >>> len(spectrum), spectrum.span
    (3, 3.0)
    """

    def __init__(self, eigenvalues: Sequence[float]) -> None:
        """
        Initialize with the given eigenvalues.

        :param eigenvalues: eigenvalues of A, strictly increasing
        :raise ValueError: if the eigenvalues are empty, not finite or not strictly increasing
        """
        values = np.array(eigenvalues, dtype=float)

        if values.ndim != 1 or values.size == 0:
            raise ValueError("Expected a non-empty sequence of eigenvalues, but got: {!r}".format(eigenvalues))

        if not np.all(np.isfinite(values)):
            raise ValueError("Expected finite eigenvalues, but got: {}".format(values.tolist()))

        if np.any(np.diff(values) <= 0.0):
            raise ValueError("Expected strictly increasing (non-degenerate) eigenvalues, but got: {}".format(
                values.tolist()))

        self.eigenvalues = _readonly(values)

    def __len__(self) -> int:
        """Return the number of eigenvalues."""
        return int(self.eigenvalues.size)

    @property
    def span(self) -> float:
        """Return the distance between the largest and the smallest eigenvalue."""
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    @property
    def scale(self) -> float:
        """Return the natural width scale of the spectrum (its span, or 1 for a single eigenvalue)."""
        span = self.span
        return span if span > 0.0 else 1.0

    def operator(self) -> np.ndarray:
        """Return A as a diagonal matrix in its own eigenbasis."""
        return np.diag(self.eigenvalues.astype(complex))

    def scaled(self, factor: float) -> 'ObservableSpectrum':
        """Return the spectrum of ``factor * A`` for a positive factor."""
        if factor <= 0.0:
            raise ValueError("Expected a positive scaling factor, but got: {}".format(factor))

        return ObservableSpectrum(self.eigenvalues * factor)

    @staticmethod
    def equally_spaced(count: int, span: float) -> 'ObservableSpectrum':
        """
        Create ``count`` equally spaced eigenvalues on [0, span].

        :param count: number of eigenvalues
        :param span: distance between the extreme eigenvalues (ignored if ``count`` is 1)
        :return: the spectrum
        """
        if count < 1:
            raise ValueError("Expected at least one eigenvalue, but got count: {}".format(count))

        if count == 1:
            return ObservableSpectrum([0.0])

        if span <= 0.0:
            raise ValueError("Expected a positive span, but got: {}".format(span))

        return ObservableSpectrum(np.linspace(0.0, span, count))

    def __repr__(self) -> str:
        """Represent the spectrum for debugging."""
        return "ObservableSpectrum({})".format(self.eigenvalues.tolist())


def _check_probabilities(weights: np.ndarray, what: str) -> None:
    """Raise a ValueError if the weights are not a normalized probability vector."""
    if weights.ndim != 1 or weights.size == 0:
        raise ValueError("Expected a non-empty vector of {}, but got shape: {}".format(what, weights.shape))

    if not np.all(np.isfinite(weights)):
        raise ValueError("Expected finite {}, but got: {}".format(what, weights.tolist()))

    if np.any(weights < 0.0):
        raise ValueError("Expected non-negative {}, but got: {}".format(what, weights.tolist()))

    total = float(np.sum(weights))
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise ValueError("Expected the {} to sum to 1, but they sum to {!r}: {}".format(what, total, weights.tolist()))


class BranchEnsemble:
    """
    Represent the weights p_ℓ attached to the eigenvalues of the observable.

    :ivar weights: read-only array of probabilities p_ℓ
    :ivar spectrum: spectrum of the observable, one eigenvalue per weight
    """

    def __init__(self, weights: Sequence[float], spectrum: ObservableSpectrum) -> None:
        """
        Initialize with the given values.

        :param weights: probabilities of the branches
        :param spectrum: eigenvalues of the branches
        :raise ValueError: if the weights are not normalized or their count differs from the spectrum
        """
        values = np.array(weights, dtype=float)
        _check_probabilities(weights=values, what="branch weights")

        if values.size != len(spectrum):
            raise ValueError("Expected as many weights as eigenvalues ({}), but got {} weights".format(
                len(spectrum), values.size))

        self.weights = _readonly(values)
        self.spectrum = spectrum

    def __len__(self) -> int:
        """Return the number of branches."""
        return int(self.weights.size)

    def mean(self) -> float:
        """Compute the expectation of A over the branches."""
        return float(np.dot(self.weights, self.spectrum.eigenvalues))

    def variance(self) -> float:
        """Compute the variance V = Σ p_ℓ a_ℓ² − (Σ p_ℓ a_ℓ)² of A over the branches."""
        centered = self.spectrum.eigenvalues - self.mean()
        return float(np.dot(self.weights, centered * centered))

    def support(self) -> 'BranchEnsemble':
        """Return the ensemble restricted to the branches with non-zero weight."""
        mask = self.weights > 0.0
        if np.all(mask):
            return self

        weights = self.weights[mask]
        return BranchEnsemble(weights=weights / np.sum(weights), spectrum=ObservableSpectrum(
            self.spectrum.eigenvalues[mask]))

    @staticmethod
    def equal_peaks(k: int, span: float) -> 'BranchEnsemble':
        """
        Create k+1 equally weighted, equally spaced branches on [0, span].

        :param k: number of gaps between the peaks
        :param span: distance between the outermost peaks
        :return: the ensemble
        """
        if k < 0:
            raise ValueError("Expected a non-negative number of gaps k, but got: {}".format(k))

        return BranchEnsemble(weights=np.full(k + 1, 1.0 / (k + 1)),
                              spectrum=ObservableSpectrum.equally_spaced(count=k + 1, span=span))

    def __repr__(self) -> str:
        """Represent the ensemble for debugging."""
        return "BranchEnsemble(weights={}, spectrum={!r})".format(self.weights.tolist(), self.spectrum)


class PureState:
    """
    Represent a pure state by its amplitudes in the eigenbasis of the observable.

    :ivar amplitudes: read-only complex vector of amplitudes c_ℓ
    """

    def __init__(self, amplitudes: Sequence[complex]) -> None:
        """
        Initialize with the given amplitudes.

        :param amplitudes: amplitudes over the eigenbasis
        :raise ValueError: if the amplitudes are not normalized
        """
        values = np.array(amplitudes, dtype=complex)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("Expected a non-empty vector of amplitudes, but got shape: {}".format(values.shape))

        norm = float(np.vdot(values, values).real)
        if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError("Expected normalized amplitudes, but the squared norm is {!r}".format(norm))

        self.amplitudes = _readonly(values)

    @property
    def dimension(self) -> int:
        """Return the dimension of the state space."""
        return int(self.amplitudes.size)

    def probabilities(self) -> np.ndarray:
        """Return the populations |c_ℓ|² of the branches."""
        return np.abs(self.amplitudes)**2

    def density_matrix(self) -> 'DensityMatrix':
        """Return the projector onto the state."""
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    @staticmethod
    def normalized(vector: Sequence[complex]) -> 'PureState':
        """Normalize a non-zero vector and wrap it as a state."""
        values = np.array(vector, dtype=complex)
        norm = float(np.linalg.norm(values))
        if norm == 0.0:
            raise ValueError("Expected a non-zero vector, but got: {}".format(values.tolist()))

        return PureState(values / norm)

    def __repr__(self) -> str:
        """Represent the state for debugging."""
        return "PureState({})".format(self.amplitudes.tolist())


class DensityMatrix:
    """
    Represent a mixed state in the eigenbasis of the observable.

    The entries are stored symmetrized, (ρ + ρ†)/2, after validation.

    :ivar entries: read-only complex square matrix

    >>> rho = DensityMatrix.maximally_mixed(2)
    >>> rho.dimension
    2
    """

    def __init__(self, entries: Union[np.ndarray, Sequence[Sequence[complex]]]) -> None:
        """
        Initialize with the given entries.

        :param entries: square complex matrix
        :raise ValueError: if the matrix is not square, not Hermitian, not positive semi-definite or not of unit trace
        """
        matrix = np.array(entries, dtype=complex)

        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
            raise ValueError("Expected a non-empty square matrix, but got shape: {}".format(matrix.shape))

        if not np.all(np.isfinite(matrix)):
            raise ValueError("Expected finite entries in the density matrix")

        asymmetry = float(np.max(np.abs(matrix - matrix.conj().T)))
        if asymmetry > HERMITICITY_TOLERANCE:
            raise ValueError("Expected a Hermitian matrix, but the largest deviation is: {!r}".format(asymmetry))

        matrix = 0.5 * (matrix + matrix.conj().T)

        trace = float(np.trace(matrix).real)
        if abs(trace - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError("Expected a unit trace, but got: {!r}".format(trace))

        smallest = float(np.linalg.eigvalsh(matrix)[0])
        if smallest < -numerics.EIGENVALUE_THRESHOLD:
            raise ValueError("Expected a positive semi-definite matrix, but got an eigenvalue: {!r}".format(smallest))

        self.entries = _readonly(matrix)

    @property
    def dimension(self) -> int:
        """Return the dimension of the state space."""
        return int(self.entries.shape[0])

    def eigenvalues(self) -> np.ndarray:
        """Return the eigenvalues in ascending order, clipped at 0."""
        return np.clip(np.linalg.eigvalsh(self.entries), 0.0, None)

    def diagonal(self) -> np.ndarray:
        """Return the populations of the eigenbasis of the observable."""
        return np.clip(np.diag(self.entries).real, 0.0, None)

    def is_pure(self) -> bool:
        """Check whether the state is pure up to the eigenvalue threshold."""
        return bool(self.eigenvalues()[-1] >= 1.0 - numerics.EIGENVALUE_THRESHOLD)

    def rank(self) -> int:
        """Count the eigenvalues above the threshold."""
        return int(np.sum(self.eigenvalues() > numerics.EIGENVALUE_THRESHOLD))

    @staticmethod
    def maximally_mixed(dimension: int) -> 'DensityMatrix':
        """Create the maximally mixed state of the given dimension."""
        if dimension < 1:
            raise ValueError("Expected a positive dimension, but got: {}".format(dimension))

        return DensityMatrix(np.eye(dimension, dtype=complex) / dimension)

    @staticmethod
    def mixture(weights: Sequence[float], states: Sequence['DensityMatrix']) -> 'DensityMatrix':
        """
        Mix the states with the given probabilities.

        :param weights: probabilities of the states
        :param states: states of equal dimension
        :return: Σ w_k ρ_k
        """
        if len(weights) != len(states) or not states:
            raise ValueError("Expected as many weights as states and at least one of each, but got {} and {}".format(
                len(weights), len(states)))

        result = np.zeros_like(states[0].entries)
        for weight, state in zip(weights, states):
            if state.dimension != states[0].dimension:
                raise ValueError("Expected states of equal dimension {}, but got: {}".format(
                    states[0].dimension, state.dimension))
            result = result + weight * state.entries

        return DensityMatrix(result)

    def __repr__(self) -> str:
        """Represent the state for debugging."""
        return "DensityMatrix({})".format(self.entries.tolist())


class MicroMacroState:
    """
    Represent the micro-macro entangled state Σ √p_ℓ |ℓ⟩_m |A_ℓ⟩_M.

    :ivar ensemble: weights and eigenvalues of the macroscopic branches
    """

    def __init__(self, weights: Sequence[float], spectrum: ObservableSpectrum) -> None:
        """
        Initialize with the given values.

        :param weights: probabilities of the branches
        :param spectrum: eigenvalues of the macroscopic branches
        """
        self.ensemble = BranchEnsemble(weights=weights, spectrum=spectrum)

    @property
    def weights(self) -> np.ndarray:
        """Return the branch probabilities."""
        return self.ensemble.weights

    @property
    def spectrum(self) -> ObservableSpectrum:
        """Return the spectrum of the macroscopic observable."""
        return self.ensemble.spectrum

    def branch_density_matrix(self) -> DensityMatrix:
        """
        Return |Ψ⟩⟨Ψ| for Ψ = Σ √p_ℓ |ℓ⟩ in the branch basis.

        Both the register and the macroscopic reductions of channels acting on A-eigenstates are
        maximally correlated, so the state is tracked on a single copy of the branch basis.
        """
        return superposition_state(self.ensemble).density_matrix()

    def __repr__(self) -> str:
        """Represent the state for debugging."""
        return "MicroMacroState(weights={}, spectrum={!r})".format(self.weights.tolist(), self.spectrum)


def shannon_entropy(probs: Union[np.ndarray, Sequence[float]], normalize: bool = False) -> float:
    """
    Compute the Shannon entropy in bits.

    Sub-normalized vectors are accepted as conditional slices.

    :param probs: probabilities
    :param normalize: if set, rescale the probabilities to unit sum before computing the entropy
    :return: −Σ p log₂ p with 0·log 0 = 0
    :raise ValueError: if an entry is negative beyond the tolerance or the sum exceeds 1

    >>> shannon_entropy([0.5, 0.5])
    1.0
    """
    values = np.asarray(probs, dtype=float)

    if np.any(values < -NORMALIZATION_TOLERANCE):
        raise ValueError("Expected non-negative probabilities, but got: {}".format(values.tolist()))

    values = np.clip(values, 0.0, None)

    total = float(np.sum(values))
    if normalize:
        if total <= 0.0:
            raise ValueError("Expected a positive total probability to normalize, but got: {!r}".format(total))
        values = values / total

    elif total > 1.0 + 1e-9:
        raise ValueError("Expected the probabilities to sum to at most 1, but they sum to: {!r}".format(total))

    return float(np.sum(scipy.special.entr(values)) / _LN2)


def hermitian_entropy(matrix: np.ndarray) -> float:
    """
    Compute −tr M log₂ M of a Hermitian positive semi-definite matrix of arbitrary trace.

    :param matrix: Hermitian matrix
    :return: Shannon entropy (in bits) of the clipped eigenvalues
    """
    eigenvalues = np.clip(np.linalg.eigvalsh(matrix), 0.0, None)
    return float(np.sum(scipy.special.entr(eigenvalues)) / _LN2)


def von_neumann_entropy(rho: Union[DensityMatrix, np.ndarray]) -> float:
    """
    Compute the von Neumann entropy in bits.

    :param rho: density matrix; plain arrays are validated as density matrices first
    :return: Shannon entropy of the eigenvalues
    :raise ValueError: if a plain array is not a valid density matrix

    >>> von_neumann_entropy(DensityMatrix.maximally_mixed(2))
    1.0
    """
    state = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)

    return float(np.sum(scipy.special.entr(state.eigenvalues())) / _LN2)


def binary_entropy(p: float) -> float:
    """
    Compute h₂(p) = −p log₂ p − (1 − p) log₂ (1 − p).

    >>> binary_entropy(0.5)
    1.0
    """
    if p < 0.0 or p > 1.0:
        raise ValueError("Expected a probability in [0, 1], but got: {!r}".format(p))

    return float((scipy.special.entr(p) + scipy.special.entr(1.0 - p)) / _LN2)


@icontract.ensure(lambda ens, result: np.allclose(np.abs(result.amplitudes)**2, ens.weights, rtol=0.0, atol=1e-12),
                  enabled=icontract.SLOW)
def superposition_state(ens: BranchEnsemble) -> PureState:
    """
    Build the superposition Σ √p_ℓ |A_ℓ⟩ of the branches.

    :param ens: branch ensemble
    :return: pure state with real non-negative amplitudes
    """
    amplitudes = np.sqrt(ens.weights).astype(complex)

    # renormalize against the rounding of the square roots
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    return PureState(amplitudes)


def dephase_fully(rho: DensityMatrix) -> DensityMatrix:
    """
    Erase all coherences between the eigenstates of the observable.

    :param rho: density matrix
    :return: the diagonal part of ``rho``
    """
    return DensityMatrix(np.diag(np.diag(rho.entries)))
