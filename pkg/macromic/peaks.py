#!/usr/bin/env python3
"""Provide the closed forms for k+1 equally weighted, equally spaced peaks read out by a square pointer."""
import logging
import math

import icontract
import numpy as np
from typing_extensions import Final  # pylint: disable=unused-import

from macromic import numerics
from macromic import spectra

LOGGER = logging.getLogger(__name__)

#: Largest peak count scanned when b is not of the form log₂(k+1).
MAX_SCANNED_K = 64  # type: Final

#: Tolerance to recognize b = log₂(k+1).
_INTEGER_TOLERANCE = 1e-9


class PeaksFamily:
    """
    Represent k+1 equally weighted peaks at 0, N/k, ..., N.

    :ivar k: number of gaps between the peaks
    :ivar span: distance N between the outermost peaks
    """

    @icontract.require(lambda k: k >= 0)
    @icontract.require(lambda span: span > 0.0)
    def __init__(self, k: int, span: float) -> None:
        """Initialize with the given values."""
        self.k = k
        self.span = float(span)

    def ratio(self, delta: float) -> float:
        """Return the ratio r = Δ/(2N) of the pointer width to twice the span."""
        return delta / (2.0 * self.span)

    def ensemble(self) -> spectra.BranchEnsemble:
        """Build the branch ensemble of the family."""
        return spectra.BranchEnsemble.equal_peaks(k=self.k, span=self.span)

    def mutual_information(self, delta: float) -> float:
        """Compute the square-pointer mutual information at width ``delta``."""
        return peaks_mi(delta=delta, span=self.span, k=self.k)

    def __repr__(self) -> str:
        """Represent the family for debugging."""
        return "PeaksFamily(k={}, span={!r})".format(self.k, self.span)


def log2_hyperfactorial(k: int) -> float:
    """
    Compute log₂ H!(k) = Σ_{n=1}^k n log₂ n.

    >>> log2_hyperfactorial(2)
    2.0
    """
    if k < 0:
        raise ValueError("Expected a non-negative k, but got: {}".format(k))

    ns = np.arange(1, k + 1, dtype=float)
    return float(np.sum(ns * np.log2(ns)))


@icontract.require(lambda r: r > 0.0)
@icontract.require(lambda k: k >= 1)
@icontract.ensure(lambda result: abs(float(np.sum(result)) - 1.0) <= 1e-12, enabled=icontract.SLOW)
def outcome_class_probs(r: float, k: int) -> np.ndarray:
    """
    Compute the probability P_n that an outcome is compatible with exactly n of the peaks.

    :param r: ratio Δ/(2N) of the window width to twice the span
    :param k: number of gaps between the peaks
    :return: vector P_1, ..., P_{k+1}
    """
    ns = np.arange(1, k + 2, dtype=float)
    result = np.zeros(k + 1)

    if r >= 0.5:
        # every window covers at least one neighbour's position
        result[:k] = ns[:k] / (k * (k + 1) * r)
        result[k] = 1.0 - 1.0 / (2.0 * r)
        return result

    width = 2.0 * r
    c = int(math.floor(width * k))
    denominator = (k + 1) * width

    if c >= 2:
        result[:c - 1] = 2.0 * ns[:c - 1] / (k * denominator)

    if c >= 1:
        result[c - 1] = (c * (k - c) * ((c + 1.0) / k - width) + 2.0 * c / k) / denominator

    # c < k since r < 1/2, hence the index c is within bounds
    result[c] = (c + 1) * (k - c + 1) * (width - float(c) / k) / denominator

    return result


@icontract.require(lambda delta: delta > 0.0)
@icontract.require(lambda span: span > 0.0)
@icontract.require(lambda k: k >= 0)
@icontract.ensure(lambda k, result: 0.0 <= result <= math.log2(k + 1) + 1e-12)
def peaks_mi(delta: float, span: float, k: int) -> float:
    """
    Compute the square-pointer mutual information of the (k+1)-peak family.

    :param delta: width of the square window
    :param span: distance between the outermost peaks
    :param k: number of gaps between the peaks
    :return: mutual information in bits

    >>> peaks_mi(delta=2.0, span=1.0, k=1)
    0.5
    """
    if k == 0:
        return 0.0

    if delta >= span:
        return (span / delta) * (math.log2(k + 1) - 2.0 * log2_hyperfactorial(k) / (k * (k + 1)))

    probs = outcome_class_probs(r=delta / (2.0 * span), k=k)
    ns = np.arange(1, k + 2, dtype=float)
    value = math.log2(k + 1) - float(np.dot(probs, np.log2(ns)))
    return min(max(value, 0.0), math.log2(k + 1))


class PeaksMic:
    """
    Represent the largest MIC reachable within the peak family.

    :ivar delta: the size Δ*
    :ivar k: number of gaps of the maximizing family member
    :ivar extrapolated: True if b is not of the form log₂(k+1) and the maximum was found by scanning k
    """

    def __init__(self, delta: float, k: int, extrapolated: bool) -> None:
        """Initialize with the given values."""
        self.delta = delta
        self.k = k
        self.extrapolated = extrapolated

    def __repr__(self) -> str:
        """Represent the result for debugging."""
        return "PeaksMic(delta={!r}, k={}, extrapolated={})".format(self.delta, self.k, self.extrapolated)


def _as_peak_count(b: float) -> int:
    """Return k if b = log₂(k+1) for an integer k ≥ 1, and 0 otherwise."""
    candidate = 2.0**b - 1.0
    nearest = int(round(candidate))
    if nearest >= 1 and abs(candidate - nearest) <= _INTEGER_TOLERANCE * max(1.0, candidate):
        return nearest

    return 0


@icontract.require(lambda b: b > 0.0)
@icontract.require(lambda span: span > 0.0)
@icontract.require(lambda k: k >= 0)
def peaks_mic(b: float, span: float, k: int) -> float:
    """
    Find the largest window width for which the (k+1)-peak family still reveals ``b`` bits.

    :param b: required information in bits
    :param span: distance between the outermost peaks
    :param k: number of gaps between the peaks
    :return: the width, or 0 if ``b`` exceeds log₂(k+1)
    """
    if k == 0 or b > math.log2(k + 1) + numerics.BITS_TOLERANCE:
        return 0.0

    def condition(delta: float) -> bool:
        return peaks_mi(delta=delta, span=span, k=k) + numerics.BITS_TOLERANCE >= b

    return numerics.largest_satisfying(condition=condition, scale=span).value


@icontract.require(lambda b: b > 0.0)
@icontract.require(lambda span: span > 0.0)
def peaks_best_mic(b: float, span: float) -> PeaksMic:
    """
    Find the member of the peak family with the largest MIC at ``b`` bits.

    The maximum is N/b at k = 1 for b ≤ 1 and N/(2^b − 1) at k = 2^b − 1 for b = log₂(k+1). Any other b > 1 is
    handled by scanning k up to :data:`MAX_SCANNED_K` and the result is flagged as extrapolated.

    >>> peaks_best_mic(b=2.0, span=9.0).delta
    3.0
    """
    if b <= 1.0:
        return PeaksMic(delta=span / b, k=1, extrapolated=False)

    k = _as_peak_count(b)
    if k > 0:
        return PeaksMic(delta=span / k, k=k, extrapolated=False)

    best = PeaksMic(delta=0.0, k=0, extrapolated=True)
    for candidate in range(1, MAX_SCANNED_K + 1):
        delta = peaks_mic(b=b, span=span, k=candidate)
        if delta > best.delta:
            best = PeaksMic(delta=delta, k=candidate, extrapolated=True)

    LOGGER.debug("Scanned the peak family for b=%g: %r", b, best)
    return best


@icontract.require(lambda mic_value: mic_value >= 0.0)
@icontract.ensure(lambda result: result >= 0.0)
def calibration_span(mic_value: float, b_k: float) -> float:
    """
    Find the span N of the peak family whose best MIC equals ``mic_value``.

    Any b ≤ 1 is accepted; above 1 the bits must be of the form log₂(k+1).

    :param mic_value: size to calibrate
    :param b_k: bits at which the size was measured
    :return: N = mic · b for b ≤ 1, N = mic · (2^b − 1) otherwise
    :raise ValueError: if ``b_k`` is not positive or is above 1 and not of the form log₂(k+1)

    >>> calibration_span(mic_value=3.0, b_k=2.0)
    9.0
    """
    if not b_k > 0.0:
        raise ValueError("Expected positive calibration bits, but got: {!r}".format(b_k))

    if b_k <= 1.0:
        return mic_value * b_k

    k = _as_peak_count(b_k)
    if k == 0:
        raise ValueError("Expected calibration bits of the form log2(k+1) for an integer k, but got: {!r}".format(b_k))

    return mic_value * k


def peaks_ensemble(k: int, span: float) -> spectra.BranchEnsemble:
    """Build the explicit (k+1)-peak branch ensemble."""
    return PeaksFamily(k=k, span=span).ensemble()
