#!/usr/bin/env python3
"""
Measure the quantumness of a state by the entropy the unread pointer measurement adds, C_Δ = S(Φ^Δ(ρ)) − S(ρ).

The same quantity is the quantum mutual information between the system and a Gaussian pointer after their
interaction minus its classical part. The pointer is represented exactly on the span of its shifted wave functions,
so every entropy reduces to an eigenvalue problem of a d×d or d²×d² matrix.
"""
import math
from typing import List, Sequence, Tuple  # pylint: disable=unused-import

import icontract
import numpy as np

from macromic import numerics
from macromic import pointers
from macromic import spectra

#: Eigenvalues of the second argument of a relative entropy below this threshold count as zero.
_SUPPORT_THRESHOLD = 1e-12


class PointerGram:
    """
    Represent the overlaps G_ij = ⟨ξ_Δ(· − a_j)|ξ_Δ(· − a_i)⟩ = exp(−(a_i − a_j)²/(8Δ²))
    of the shifted Gaussian pointers.

    :ivar gram: read-only real symmetric positive semi-definite matrix with unit diagonal
    """

    def __init__(self, gram: np.ndarray) -> None:
        """
        Initialize with the given Gram matrix.

        :raise ValueError: if the matrix is not symmetric with unit diagonal and positive semi-definite
        """
        matrix = np.array(gram, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("Expected a square Gram matrix, but got shape: {}".format(matrix.shape))

        if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12):
            raise ValueError("Expected a symmetric Gram matrix")

        if not np.allclose(np.diag(matrix), 1.0, rtol=0.0, atol=1e-12):
            raise ValueError("Expected a unit diagonal of the Gram matrix, but got: {}".format(
                np.diag(matrix).tolist()))

        smallest = float(np.linalg.eigvalsh(matrix)[0])
        if smallest < -numerics.EIGENVALUE_THRESHOLD:
            raise ValueError("Expected a positive semi-definite Gram matrix, but got an eigenvalue: {!r}".format(
                smallest))

        matrix.setflags(write=False)
        self.gram = matrix

    @property
    def dimension(self) -> int:
        """Return the number of pointer wave functions."""
        return int(self.gram.shape[0])

    def embedding(self) -> np.ndarray:
        """
        Represent the pointer wave functions as vectors v_ℓ with ⟨v_i|v_j⟩ = G_ij.

        :return: matrix with the vectors as columns
        """
        eigenvalues, vectors = np.linalg.eigh(self.gram)
        roots = np.sqrt(np.clip(eigenvalues, 0.0, None))

        # (v_ℓ)_k = √λ_k conj(U_ℓk)
        return (vectors.conj() * roots[np.newaxis, :]).T

    def __repr__(self) -> str:
        """Represent the Gram matrix for debugging."""
        return "PointerGram({})".format(self.gram.tolist())


def pointer_gram(spectrum: spectra.ObservableSpectrum, delta: float) -> PointerGram:
    """Compute the overlaps of the Gaussian pointers shifted by the eigenvalues."""
    return PointerGram(pointers.dephasing_factors(spectrum=spectrum, delta=delta))


def _check_dimension(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum) -> None:
    """Raise a ValueError if the state does not live on the eigenbasis of the spectrum."""
    if rho.dimension != len(spectrum):
        raise ValueError("Expected the density matrix of dimension {} to match the number of eigenvalues {}".format(
            rho.dimension, len(spectrum)))


@icontract.require(lambda delta: delta > 0.0)
@icontract.ensure(lambda result: result >= 0.0)
def c_delta(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum, delta: float) -> float:
    """
    Compute C_Δ(ρ, A) = S(Φ^Δ(ρ)) − S(ρ) in bits.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param delta: width of the Gaussian pointer
    :return: the entropy increase, floored at 0
    :raise ValueError: on dimension mismatch
    """
    _check_dimension(rho=rho, spectrum=spectrum)

    dephased = pointers.apply_partial_dephasing(rho=rho, spectrum=spectrum, delta=delta)
    return max(0.0, spectra.von_neumann_entropy(dephased) - spectra.von_neumann_entropy(rho))


def post_interaction_state(rho: np.ndarray, gram: PointerGram) -> np.ndarray:
    """
    Build the joint state Σ ρ_ij |i⟩⟨j| ⊗ |v_i⟩⟨v_j| of system and pointer after the interaction.

    :param rho: matrix of the system state in the eigenbasis of the observable
    :param gram: overlaps of the shifted pointers
    :return: d²×d² matrix, the system index being the slow one
    """
    dimension = gram.dimension
    embedding = gram.embedding()

    isometry = np.zeros((dimension * dimension, dimension), dtype=complex)
    for i in range(dimension):
        isometry[:, i] = np.kron(np.eye(dimension)[i], embedding[:, i])

    return isometry @ rho @ isometry.conj().T


def quantum_mutual_information(joint: np.ndarray, dimension: int) -> float:
    """
    Compute S(ρ_M) + S(ρ_P) − S(ρ) of a bipartite state of two d-dimensional parts.

    :param joint: d²×d² matrix, the first part being the slow index
    :param dimension: dimension d of each part
    :return: quantum mutual information in bits
    """
    tensor = joint.reshape(dimension, dimension, dimension, dimension)
    system = np.einsum('ikjk->ij', tensor)
    pointer = np.einsum('ikil->kl', tensor)

    return (spectra.hermitian_entropy(system) + spectra.hermitian_entropy(pointer) -
            spectra.hermitian_entropy(joint))


@icontract.require(lambda delta: delta > 0.0)
def c_delta_via_qmi(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum, delta: float) -> float:
    """
    Compute C_Δ as the quantum mutual information between system and pointer minus its classical part.

    The classical part is the mutual information after the system has been fully dephased beforehand.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param delta: width of the Gaussian pointer
    :return: the difference of the two mutual informations in bits
    :raise ValueError: on dimension mismatch
    """
    _check_dimension(rho=rho, spectrum=spectrum)

    gram = pointer_gram(spectrum=spectrum, delta=delta)
    dimension = rho.dimension

    quantum = quantum_mutual_information(joint=post_interaction_state(rho=rho.entries, gram=gram), dimension=dimension)
    classical = quantum_mutual_information(
        joint=post_interaction_state(rho=spectra.dephase_fully(rho).entries, gram=gram), dimension=dimension)

    return quantum - classical


def _cross_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """
    Compute −tr ρ log₂ σ, infinite if ρ has weight outside the support of σ.

    :param rho: Hermitian positive semi-definite matrix
    :param sigma: Hermitian positive semi-definite matrix
    :return: the cross entropy in bits
    """
    eigenvalues, vectors = np.linalg.eigh(sigma)
    overlaps = np.einsum('ij,ik,kj->j', vectors.conj(), rho, vectors).real

    inside = eigenvalues > _SUPPORT_THRESHOLD
    if np.any(overlaps[~inside] > numerics.EIGENVALUE_THRESHOLD):
        return math.inf

    return -float(np.dot(overlaps[inside], np.log2(eigenvalues[inside])))


def quantum_relative_entropy(rho: spectra.DensityMatrix, sigma: spectra.DensityMatrix) -> float:
    """
    Compute S(ρ‖σ) = tr ρ (log₂ ρ − log₂ σ).

    :param rho: first state
    :param sigma: second state
    :return: the relative entropy in bits, ``math.inf`` if the support of ρ is not within the support of σ
    :raise ValueError: if the dimensions differ
    """
    if rho.dimension != sigma.dimension:
        raise ValueError("Expected states of equal dimension, but got {} and {}".format(rho.dimension,
                                                                                       sigma.dimension))

    cross = _cross_entropy(rho=rho.entries, sigma=sigma.entries)
    if math.isinf(cross):
        return math.inf

    return max(0.0, cross - spectra.von_neumann_entropy(rho))


@icontract.require(lambda delta: delta > 0.0)
def relative_entropy_lower_bound(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum,
                                 delta: float) -> float:
    """
    Compute S(ρ‖Φ^{Δ/√2}(ρ)), a lower bound on C_Δ(ρ, A).

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param delta: width of the Gaussian pointer
    :return: the relative entropy in bits (``math.inf`` on support mismatch)
    """
    _check_dimension(rho=rho, spectrum=spectrum)
    dephased = pointers.apply_partial_dephasing(rho=rho, spectrum=spectrum, delta=delta / math.sqrt(2.0))
    return quantum_relative_entropy(rho=rho, sigma=dephased)


@icontract.require(lambda delta: delta > 0.0)
@icontract.require(lambda nodes: nodes >= 1)
def c_delta_via_unitary_average(rho: spectra.DensityMatrix,
                                spectrum: spectra.ObservableSpectrum,
                                delta: float,
                                nodes: int = 80) -> float:
    """
    Compute C_Δ as the kernel-weighted average of S(e^{−ikA} ρ e^{ikA} ‖ Φ^Δ(ρ)) over k.

    The kernel is discretized by Gauss–Hermite quadrature with the given number of nodes.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param delta: width of the Gaussian pointer
    :param nodes: number of quadrature nodes
    :return: the average relative entropy in bits
    """
    _check_dimension(rho=rho, spectrum=spectrum)

    dephased = pointers.apply_partial_dephasing(rho=rho, spectrum=spectrum, delta=delta).entries
    entropy = spectra.von_neumann_entropy(rho)

    total = 0.0
    for k, weight in pointers.unitary_mixture(delta=delta, nodes=nodes):
        phases = np.exp(-1j * k * spectrum.eigenvalues)
        rotated = phases[:, np.newaxis] * rho.entries * phases.conj()[np.newaxis, :]
        total += weight * (_cross_entropy(rho=rotated, sigma=dephased) - entropy)

    return max(0.0, total)


def mic_tilde(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum, b: float) -> float:
    """
    Find the largest pointer width Δ with C_Δ(ρ, A) ≥ b.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param b: bits
    :return: Δ*, or 0 if even the full dephasing adds less than ``b`` bits
    :raise ValueError: if ``b`` is not positive or on dimension mismatch
    """
    if not b > 0.0:
        raise ValueError("Expected a positive number of bits b, but got: {!r}".format(b))

    _check_dimension(rho=rho, spectrum=spectrum)

    coherence = spectra.von_neumann_entropy(spectra.dephase_fully(rho)) - spectra.von_neumann_entropy(rho)
    if coherence + numerics.BITS_TOLERANCE < b:
        return 0.0

    def condition(delta: float) -> bool:
        return c_delta(rho=rho, spectrum=spectrum, delta=delta) + numerics.BITS_TOLERANCE >= b

    return numerics.largest_satisfying(condition=condition, scale=spectrum.scale).value


@icontract.ensure(lambda result: result >= 0.0)
def weak_limit_coefficient(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum) -> float:
    """
    Compute ¼ tr(ρA² − P_ρ A ρ A), the coefficient of h(Δ⁻²) = −Δ⁻² log₂ Δ⁻² in C_Δ for large Δ.

    P_ρ projects onto the support of ρ. The coefficient is V/4 for pure states and 0 for full-rank states.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :return: the coefficient
    """
    _check_dimension(rho=rho, spectrum=spectrum)

    eigenvalues, vectors = np.linalg.eigh(rho.entries)
    support = vectors[:, eigenvalues > numerics.EIGENVALUE_THRESHOLD]
    projector = support @ support.conj().T

    observable = spectrum.operator()
    second_moment = np.trace(rho.entries @ observable @ observable)
    value = second_moment - np.trace(projector @ observable @ rho.entries @ observable)
    return max(0.0, 0.25 * float(value.real))


def _h(t: float) -> float:
    """Compute −t log₂ t."""
    return -t * math.log2(t)


@icontract.require(lambda delta_1, delta_2: 0.0 < delta_1 < delta_2)
def weak_limit_slope(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum, delta_1: float,
                     delta_2: float) -> float:
    """
    Estimate the coefficient of h(Δ⁻²) in C_Δ from two large widths.

    C_Δ/t with t = Δ⁻² is affine in log₂ t up to o(1); the difference quotient removes the constant term which
    otherwise makes C_Δ/h(t) converge only logarithmically.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param delta_1: smaller width
    :param delta_2: larger width
    :return: the estimated coefficient
    """
    t_1 = delta_1**-2
    t_2 = delta_2**-2

    ratio_1 = c_delta(rho=rho, spectrum=spectrum, delta=delta_1) / t_1
    ratio_2 = c_delta(rho=rho, spectrum=spectrum, delta=delta_2) / t_2

    return (ratio_1 - ratio_2) / (math.log2(t_2) - math.log2(t_1))


def weak_limit_ratio(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum, delta: float) -> float:
    """
    Compute C_Δ/(coefficient · h(Δ⁻²)), which tends to 1 as Δ grows.

    :raise ValueError: if the coefficient vanishes (full-rank states)
    """
    coefficient = weak_limit_coefficient(rho=rho, spectrum=spectrum)
    if coefficient <= 0.0:
        raise ValueError("Expected a state with a positive weak-limit coefficient, e.g., a rank-deficient one")

    return c_delta(rho=rho, spectrum=spectrum, delta=delta) / (coefficient * _h(delta**-2))


def covariant_kraus_operators(spectrum: spectra.ObservableSpectrum, shifts: Sequence[float],
                              coefficients: Sequence[np.ndarray]) -> List[np.ndarray]:
    """
    Build the Kraus operators K_μ = Σ_{a_i − a_j = δ_μ} c^μ_ij |A_i⟩⟨A_j| commuting with e^{−itA} up to a phase.

    :param spectrum: eigenvalues of the observable
    :param shifts: eigenvalue shift δ_μ of each operator
    :param coefficients: d×d coefficient matrix of each operator; entries outside its shift must vanish
    :return: the operators
    :raise ValueError: if a coefficient lies outside its shift or the counts differ
    """
    if len(shifts) != len(coefficients) or not shifts:
        raise ValueError("Expected as many shifts as coefficient matrices and at least one, but got {} and {}".format(
            len(shifts), len(coefficients)))

    values = spectrum.eigenvalues
    dimension = len(spectrum)
    tolerance = 1e-9 * max(1.0, spectrum.span)
    differences = values[:, np.newaxis] - values[np.newaxis, :]

    result = []  # type: List[np.ndarray]
    for index, (shift, coefficient) in enumerate(zip(shifts, coefficients)):
        matrix = np.array(coefficient, dtype=complex)
        if matrix.shape != (dimension, dimension):
            raise ValueError("Expected the coefficient matrix {} of shape {}, but got: {}".format(
                index, (dimension, dimension), matrix.shape))

        mask = np.abs(differences - shift) <= tolerance
        outside = float(np.max(np.abs(matrix[~mask]), initial=0.0))
        if outside > 1e-12:
            raise ValueError("Expected the coefficients {} to connect only eigenvalues shifted by {!r}, "
                             "but got a weight of {!r} elsewhere".format(index, shift, outside))

        result.append(np.where(mask, matrix, 0.0))

    return result


def covariant_kraus_apply(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum, shifts: Sequence[float],
                          coefficients: Sequence[np.ndarray]) -> List[Tuple[float, spectra.DensityMatrix]]:
    """
    Apply a covariant instrument to the state.

    Outcomes of probability below 1e-14 are dropped since their post-states are undefined.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param shifts: eigenvalue shift δ_μ of each Kraus operator
    :param coefficients: coefficient matrix of each Kraus operator
    :return: the outcome probabilities w_μ with the normalized post-states K_μ ρ K_μ†/w_μ
    :raise ValueError: if the Kraus operators are not covariant or Σ K_μ†K_μ differs from the identity
    """
    _check_dimension(rho=rho, spectrum=spectrum)

    operators = covariant_kraus_operators(spectrum=spectrum, shifts=shifts, coefficients=coefficients)

    completeness = sum(operator.conj().T @ operator for operator in operators)
    deviation = float(np.max(np.abs(completeness - np.eye(rho.dimension))))
    if deviation > 1e-10:
        raise ValueError("Expected the Kraus operators to satisfy Σ K†K = 1, but the deviation is: {!r}".format(
            deviation))

    result = []  # type: List[Tuple[float, spectra.DensityMatrix]]
    for operator in operators:
        image = operator @ rho.entries @ operator.conj().T
        weight = float(np.trace(image).real)
        if weight < 1e-14:
            continue

        image = image / weight
        image = 0.5 * (image + image.conj().T)
        result.append((weight, spectra.DensityMatrix(image / np.trace(image).real)))

    return result


def average_state(outcomes: Sequence[Tuple[float, spectra.DensityMatrix]]) -> spectra.DensityMatrix:
    """Mix the post-states of an instrument into the channel output Σ_μ w_μ ρ_μ."""
    total = sum(weight for weight, _ in outcomes)
    return spectra.DensityMatrix.mixture(
        weights=[weight / total for weight, _ in outcomes], states=[state for _, state in outcomes])
