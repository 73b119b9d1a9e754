#!/usr/bin/env python3
"""Model the pointer of the readout (square or Gaussian) and the partial dephasing induced by an unread measurement."""
import enum
import math
from typing import Callable, Union

import icontract
import numpy as np
import numpy.polynomial.hermite

from macromic import spectra

Real = Union[float, np.ndarray]


class PointerKind(enum.Enum):
    """Enumerate the shapes of the pointer wave function."""

    SQUARE = 'square'
    GAUSSIAN = 'gaussian'


class PointerModel:
    """
    Represent a readout whose pointer has the given shape and width.

    :ivar kind: shape of the pointer
    :ivar delta: resolution width Δ (same units as the eigenvalues)
    """

    @icontract.require(lambda delta: delta > 0.0 and math.isfinite(delta))
    def __init__(self, kind: PointerKind, delta: float) -> None:
        """Initialize with the given values."""
        self.kind = kind
        self.delta = float(delta)

    def __repr__(self) -> str:
        """Represent the model for debugging."""
        return "PointerModel(kind={}, delta={!r})".format(self.kind, self.delta)


def povm_density(model: PointerModel, x: Real, a: Real) -> Real:
    """
    Evaluate the density of outcome ``x`` given the branch with eigenvalue ``a``.

    The square window is half-open: the branch is compatible with ``x`` iff a − Δ/2 ≤ x < a + Δ/2.

    :param model: pointer model
    :param x: outcome(s)
    :param a: eigenvalue(s)
    :return: 1/Δ inside the window (square) or the normal density with standard deviation Δ (Gaussian)

    >>> povm_density(PointerModel(PointerKind.SQUARE, 2.0), 0.0, 0.0)
    0.5
    """
    delta = model.delta
    shift = np.subtract(x, a)

    if model.kind == PointerKind.SQUARE:
        inside = np.logical_and(shift >= -0.5 * delta, shift < 0.5 * delta)
        result = np.where(inside, 1.0 / delta, 0.0)

    elif model.kind == PointerKind.GAUSSIAN:
        result = np.exp(-0.5 * (shift / delta)**2) / (math.sqrt(2.0 * math.pi) * delta)

    else:
        raise NotImplementedError("Unhandled pointer kind: {}".format(model.kind))

    if np.ndim(result) == 0:
        return float(result)

    return result


def pointer_amplitude(model: PointerModel, x: Real, a: Real) -> Real:
    """
    Evaluate the pointer wave function ξ_Δ(x − a), whose square is :func:`povm_density`.

    :param model: pointer model
    :param x: position(s)
    :param a: eigenvalue(s)
    :return: amplitude(s)
    """
    density = povm_density(model=model, x=x, a=a)
    if isinstance(density, float):
        return math.sqrt(density)

    return np.sqrt(density)


def response_distribution(model: PointerModel, ens: spectra.BranchEnsemble) -> Callable[[Real], Real]:
    """
    Build the density p(x) = Σ_ℓ p_ℓ ξ_Δ²(x − a_ℓ) of the pointer outcome.

    :param model: pointer model
    :param ens: branch ensemble
    :return: the density, vectorized over ``x``
    """
    weights = np.array(ens.weights)
    eigenvalues = np.array(ens.spectrum.eigenvalues)

    def density(x: Real) -> Real:
        """Evaluate the response density at ``x``."""
        xs = np.asarray(x, dtype=float)
        values = povm_density(model=model, x=xs[..., np.newaxis], a=eigenvalues)
        result = np.sum(weights * values, axis=-1)
        if np.ndim(result) == 0:
            return float(result)
        return result

    return density


@icontract.require(lambda delta: delta > 0.0)
@icontract.ensure(lambda result: 0.0 <= result <= 1.0)
def dephasing_factor(delta: float, a_i: float, a_j: float) -> float:
    """
    Compute the damping exp(−(a_i − a_j)²/(8Δ²)) of the coherence between two eigenstates.

    >>> dephasing_factor(1.0, 0.0, 0.0)
    1.0
    """
    ratio = (a_i - a_j) / delta
    return math.exp(-ratio * ratio / 8.0)


@icontract.require(lambda delta: delta > 0.0)
def dephasing_factors(spectrum: spectra.ObservableSpectrum, delta: float) -> np.ndarray:
    """Compute the matrix of damping factors for all pairs of eigenvalues."""
    values = spectrum.eigenvalues
    ratio = (values[:, np.newaxis] - values[np.newaxis, :]) / delta
    return np.exp(-ratio * ratio / 8.0)


def _check_dimension(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum) -> None:
    """Raise a ValueError if the state does not live on the eigenbasis of the spectrum."""
    if rho.dimension != len(spectrum):
        raise ValueError("Expected the density matrix of dimension {} to match the number of eigenvalues {}".format(
            rho.dimension, len(spectrum)))


class DephasingChannel:
    """
    Represent the partial dephasing Φ^Δ, the back-action of an unread Gaussian measurement of width Δ.

    :ivar delta: width of the Gaussian pointer
    """

    @icontract.require(lambda delta: delta > 0.0)
    def __init__(self, delta: float) -> None:
        """Initialize with the given width."""
        self.delta = float(delta)

    def apply(self, rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum) -> spectra.DensityMatrix:
        """
        Damp every coherence ρ_ij by :func:`dephasing_factor`.

        :param rho: density matrix in the eigenbasis of the observable
        :param spectrum: eigenvalues of the observable
        :return: the dephased state
        :raise ValueError: on dimension mismatch
        """
        _check_dimension(rho=rho, spectrum=spectrum)
        return spectra.DensityMatrix(rho.entries * dephasing_factors(spectrum=spectrum, delta=self.delta))

    def __repr__(self) -> str:
        """Represent the channel for debugging."""
        return "DephasingChannel(delta={!r})".format(self.delta)


def apply_partial_dephasing(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum,
                            delta: float) -> spectra.DensityMatrix:
    """
    Apply Φ^Δ to the state.

    :param rho: density matrix in the eigenbasis of the observable
    :param spectrum: eigenvalues of the observable
    :param delta: width of the Gaussian pointer
    :return: Φ^Δ(ρ)
    :raise ValueError: on dimension mismatch
    """
    return DephasingChannel(delta=delta).apply(rho=rho, spectrum=spectrum)


@icontract.require(lambda delta: delta > 0.0)
def dephasing_kernel(delta: float, k: Real) -> Real:
    """
    Evaluate the weight f_Δ(k) = √(2/π) Δ exp(−2Δ²k²) of the unitary e^{−ikA} in the mixture representing Φ^Δ.

    The kernel is the normal density with variance 1/(4Δ²).
    """
    result = math.sqrt(2.0 / math.pi) * delta * np.exp(-2.0 * delta * delta * np.square(k))
    if np.ndim(result) == 0:
        return float(result)
    return result


@icontract.require(lambda delta: delta > 0.0)
@icontract.require(lambda nodes: nodes >= 1)
def unitary_mixture(delta: float, nodes: int = 80) -> np.ndarray:
    """
    Discretize the kernel of Φ^Δ by Gauss–Hermite quadrature.

    :param delta: width of the Gaussian pointer
    :param nodes: number of quadrature nodes
    :return: array of shape (nodes, 2): the parameters k_j and their weights (summing to 1)
    """
    roots, weights = numpy.polynomial.hermite.hermgauss(nodes)

    # ∫ N(0, 1/(4Δ²))(k) h(k) dk = Σ_j w_j/√π h(u_j/(√2 Δ))
    ks = roots / (math.sqrt(2.0) * delta)
    return np.stack([ks, weights / math.sqrt(math.pi)], axis=1)


def apply_dephasing_as_unitary_mixture(rho: spectra.DensityMatrix,
                                       spectrum: spectra.ObservableSpectrum,
                                       delta: float,
                                       nodes: int = 80) -> spectra.DensityMatrix:
    """
    Apply Φ^Δ as the kernel-weighted mixture of the unitaries e^{−ikA} discretized by Gauss–Hermite quadrature.

    The result converges to :func:`apply_partial_dephasing` as the number of nodes grows.

    :param rho: density matrix in the eigenbasis of the observable
    :param spectrum: eigenvalues of the observable
    :param delta: width of the Gaussian pointer
    :param nodes: number of quadrature nodes
    :return: Σ_j w_j U_{k_j} ρ U_{k_j}†
    """
    _check_dimension(rho=rho, spectrum=spectrum)

    values = spectrum.eigenvalues
    result = np.zeros_like(rho.entries)
    for k, weight in unitary_mixture(delta=delta, nodes=nodes):
        phases = np.exp(-1j * k * values)
        result = result + weight * (phases[:, np.newaxis] * rho.entries * phases.conj()[np.newaxis, :])

    # the weights sum to 1 only up to rounding
    result = result / np.trace(result).real
    return spectra.DensityMatrix(result)
