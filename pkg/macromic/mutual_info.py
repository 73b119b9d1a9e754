#!/usr/bin/env python3
"""Compute the information a pointer readout reveals about the branch label, and the size MIC derived from it."""
import enum
import logging
import math
from typing import List, Tuple  # pylint: disable=unused-import

import icontract
import numpy as np
import scipy.integrate
import scipy.special
from typing_extensions import Final  # pylint: disable=unused-import

from macromic import numerics
from macromic import pointers
from macromic import spectra

LOGGER = logging.getLogger(__name__)

_LN2 = math.log(2.0)

#: Required accuracy of the quadrature in bits.
MI_ABS_TOLERANCE = 1e-7  # type: Final

#: Gaussian tails beyond this many widths are dropped (their mass is below 1e-15).
GAUSSIAN_TRUNCATION = 8.0  # type: Final


class Method(enum.Enum):
    """Enumerate how a mutual information was evaluated."""

    CLOSED_FORM = 'ClosedForm'
    QUADRATURE = 'Quadrature'


class MiResult:
    """
    Represent an evaluated mutual information.

    :ivar bits: mutual information in bits
    :ivar method: how the value was obtained
    :ivar est_abs_error: estimated absolute error in bits
    """

    @icontract.require(lambda bits: bits >= 0.0)
    @icontract.require(lambda est_abs_error: est_abs_error >= 0.0)
    def __init__(self, bits: float, method: Method, est_abs_error: float) -> None:
        """Initialize with the given values."""
        self.bits = bits
        self.method = method
        self.est_abs_error = est_abs_error

    def __repr__(self) -> str:
        """Represent the result for debugging."""
        return "MiResult(bits={!r}, method={}, est_abs_error={!r})".format(self.bits, self.method.value,
                                                                        self.est_abs_error)


def discrete_mutual_information(joint: np.ndarray) -> float:
    """
    Compute the mutual information (in bits) of a joint distribution given as a matrix.

    :param joint: non-negative matrix summing to 1, rows and columns indexing the two variables
    :return: Σ J log₂ (J / (row marginal · column marginal))
    """
    matrix = np.clip(np.asarray(joint, dtype=float), 0.0, None)
    rows = np.sum(matrix, axis=1, keepdims=True)
    columns = np.sum(matrix, axis=0, keepdims=True)

    # rel_entr treats 0·log(0/q) as 0
    return max(0.0, float(np.sum(scipy.special.rel_entr(matrix, rows * columns)) / _LN2))


def square_cells(ens: spectra.BranchEnsemble, delta: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Partition the outcome axis of a square pointer into cells where p(ℓ|x) is constant.

    :param ens: branch ensemble
    :param delta: width of the square window
    :return: cell lengths, and the boolean matrix (cell × branch) of windows covering each cell
    """
    eigenvalues = ens.spectrum.eigenvalues
    half = 0.5 * delta

    breakpoints = np.unique(np.concatenate([eigenvalues - half, eigenvalues + half]))
    lengths = np.diff(breakpoints)
    midpoints = 0.5 * (breakpoints[:-1] + breakpoints[1:])

    covered = np.logical_and(eigenvalues[np.newaxis, :] - half <= midpoints[:, np.newaxis],
                             midpoints[:, np.newaxis] < eigenvalues[np.newaxis, :] + half)

    return lengths, covered


def _square_joint(ens: spectra.BranchEnsemble, delta: float) -> np.ndarray:
    """Compute the joint distribution (cell × branch) for a square pointer."""
    lengths, covered = square_cells(ens=ens, delta=delta)
    return covered * (lengths[:, np.newaxis] / delta) * ens.weights[np.newaxis, :]


def _merged_intervals(centers: np.ndarray, half_width: float) -> List[Tuple[float, float, List[float]]]:
    """Merge the intervals [c − h, c + h] and return each merged interval with the centers it contains."""
    result = []  # type: List[Tuple[float, float, List[float]]]
    for center in np.sort(centers):
        start, end = float(center - half_width), float(center + half_width)
        if result and start <= result[-1][1]:
            prev_start, _, prev_centers = result[-1]
            result[-1] = (prev_start, end, prev_centers + [float(center)])
        else:
            result.append((start, end, [float(center)]))

    return result


def _gaussian_mutual_information(ens: spectra.BranchEnsemble, delta: float) -> MiResult:
    """
    Integrate Σ_ℓ p_ℓ ∫ g_ℓ(x) log₂ (g_ℓ(x)/p(x)) dx in units of Δ.

    This equals H(p(x)) − ½ log₂(2πeΔ²); the form is chosen so that the integrand is computed stably by
    log-sum-exp even when the branches are far apart compared to Δ.
    """
    support = ens.support()
    if len(support) == 1:
        return MiResult(bits=0.0, method=Method.CLOSED_FORM, est_abs_error=0.0)

    weights = support.weights
    log_weights = np.log(weights)
    centers = support.spectrum.eigenvalues / delta

    def integrand(u: float) -> float:
        log_kernels = -0.5 * (u - centers)**2
        log_mixture = np.logaddexp.reduce(log_kernels + log_weights)
        kernels = np.exp(log_kernels) / math.sqrt(2.0 * math.pi)
        return float(np.dot(weights * kernels, log_kernels - log_mixture))

    total = 0.0
    error = 0.0
    messages = []  # type: List[str]
    for start, end, inner in _merged_intervals(centers=centers, half_width=GAUSSIAN_TRUNCATION):
        points = [point for point in inner if start < point < end]

        # quad accepts at most limit - 1 break points
        limit = max(200, 2 * len(points) + 50)
        value, abserr, _, *rest = scipy.integrate.quad(
            integrand, start, end, points=points or None, epsabs=1e-11, epsrel=1e-10, limit=limit, full_output=1)
        total += value
        error += abserr
        if rest:
            messages.append(str(rest[0]))

    bits = total / _LN2
    error /= _LN2

    if error > MI_ABS_TOLERANCE:
        raise numerics.ConvergenceError(
            "The quadrature of the mutual information did not converge (estimated error {:.3g} bits): {}".format(
                error, "; ".join(messages)),
            partial=max(bits, 0.0),
            abs_error=error)

    entropy = spectra.shannon_entropy(weights)
    return MiResult(bits=min(max(bits, 0.0), entropy), method=Method.QUADRATURE, est_abs_error=error)


def mutual_information(ens: spectra.BranchEnsemble, model: pointers.PointerModel) -> MiResult:
    """
    Compute the mutual information I_Δ(A:ℓ) between the branch label and the pointer outcome.

    The square pointer is evaluated exactly by enumerating the cells between the window edges. The Gaussian
    pointer is integrated by adaptive Gauss–Kronrod quadrature over the branch supports extended by 8Δ.

    :param ens: branch ensemble
    :param model: pointer model
    :return: the mutual information
    :raise numerics.ConvergenceError: if the quadrature misses its accuracy

    >>> ens = spectra.BranchEnsemble([0.5, 0.5], spectra.ObservableSpectrum([0.0, 1.0]))
    >>> mutual_information(ens, pointers.PointerModel(pointers.PointerKind.SQUARE, 1.0)).bits
    1.0
    """
    if len(ens.support()) == 1:
        return MiResult(bits=0.0, method=Method.CLOSED_FORM, est_abs_error=0.0)

    if model.kind == pointers.PointerKind.SQUARE:
        bits = discrete_mutual_information(_square_joint(ens=ens, delta=model.delta))
        return MiResult(bits=bits, method=Method.CLOSED_FORM, est_abs_error=0.0)

    if model.kind == pointers.PointerKind.GAUSSIAN:
        return _gaussian_mutual_information(ens=ens, delta=model.delta)

    raise NotImplementedError("Unhandled pointer kind: {}".format(model.kind))


def mic(ens: spectra.BranchEnsemble, kind: pointers.PointerKind, b: float) -> float:
    """
    Find the largest pointer width Δ for which the readout still reveals ``b`` bits about the branch.

    :param ens: branch ensemble
    :param kind: shape of the pointer
    :param b: required information in bits
    :return: Δ*, or 0 if even the sharpest pointer does not reveal ``b`` bits
    :raise ValueError: if ``b`` is not positive
    """
    if not b > 0.0:
        raise ValueError("Expected a positive number of bits b, but got: {!r}".format(b))

    support = ens.support()
    if len(support) == 1:
        return 0.0

    if b > spectra.shannon_entropy(support.weights) + numerics.BITS_TOLERANCE:
        return 0.0

    def condition(delta: float) -> bool:
        info = mutual_information(ens=support, model=pointers.PointerModel(kind=kind, delta=delta))
        return info.bits + numerics.BITS_TOLERANCE >= b

    bracketed = numerics.largest_satisfying(condition=condition, scale=support.spectrum.scale)
    LOGGER.debug("MIC at b=%g for %r: %r", b, support, bracketed)

    if kind == pointers.PointerKind.SQUARE and bracketed.value > 0.0 and not condition(0.5 * bracketed.value):
        LOGGER.warning("The square-pointer mutual information is not monotone in the width for %r around %g", support,
                       bracketed.value)

    return bracketed.value


@icontract.require(lambda delta: delta > 0.0)
@icontract.ensure(lambda result: result >= 0.0)
def variance_upper_bound(ens: spectra.BranchEnsemble, delta: float) -> float:
    """
    Bound the Gaussian-pointer mutual information by V/((2 ln 2) Δ²).

    The bound becomes tight for widths large compared to the spectral span.

    >>> ens = spectra.BranchEnsemble([0.5, 0.5], spectra.ObservableSpectrum([0.0, 1.0]))
    >>> round(variance_upper_bound(ens, 1.0), 4)
    0.1803
    """
    return ens.variance() / (2.0 * _LN2 * delta * delta)


def guessing_probability(ens: spectra.BranchEnsemble, model: pointers.PointerModel) -> float:
    """
    Compute the probability of guessing the branch correctly from the outcome, ∫ max_ℓ p_ℓ p(x|ℓ) dx.

    :param ens: branch ensemble
    :param model: pointer model
    :return: the optimal guessing probability
    """
    support = ens.support()
    if len(support) == 1:
        return 1.0

    if model.kind == pointers.PointerKind.SQUARE:
        return float(np.sum(np.max(_square_joint(ens=support, delta=model.delta), axis=1)))

    order = np.argsort(support.spectrum.eigenvalues)
    centers = support.spectrum.eigenvalues[order] / model.delta
    weights = support.weights[order]

    # the maximizing branch changes where the weighted likelihoods of neighbours are equal
    crossings = [
        0.5 * (first + second) + math.log(first_weight / second_weight) / (second - first)
        for first, second, first_weight, second_weight in zip(centers[:-1], centers[1:], weights[:-1], weights[1:])
    ]

    def integrand(u: float) -> float:
        return float(np.max(weights * np.exp(-0.5 * (u - centers)**2))) / math.sqrt(2.0 * math.pi)

    total = 0.0
    for start, end, inner in _merged_intervals(centers=centers, half_width=GAUSSIAN_TRUNCATION):
        points = [float(point) for point in inner + crossings if start < point < end]
        value, _ = scipy.integrate.quad(integrand, start, end, points=sorted(points) or None, limit=400)
        total += value

    return min(total, 1.0)


@icontract.require(lambda p_correct: 0.5 <= p_correct <= 1.0)
@icontract.ensure(lambda result: result[0] <= result[1] + 1e-15)
def guessing_mi_bounds(p_correct: float) -> Tuple[float, float]:
    """
    Bound the mutual information of two equal branches that are guessed correctly with probability ``p_correct``.

    The lower end, 1 − h₂(P_c), is attained when every outcome is equally ambiguous. The upper end, 2P_c − 1, is
    attained when an outcome is either conclusive or completely ambiguous.

    >>> low, high = guessing_mi_bounds(2.0 / 3.0)
    >>> round(low, 3), round(high, 3)
    (0.082, 0.333)
    """
    return 1.0 - spectra.binary_entropy(p_correct), 2.0 * p_correct - 1.0
