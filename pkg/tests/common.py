#!/usr/bin/env python3
"""Provide independent oracles the tests compare the measures against."""

# pylint: disable=missing-docstring

import math
from typing import Sequence  # pylint: disable=unused-import

import numpy as np
import scipy.optimize
import scipy.special

_LN2 = math.log(2.0)


def bloch_rho(x: float, z: float) -> np.ndarray:
    """Build ½(1 + x σ_x + z σ_z)."""
    return 0.5 * np.array([[1.0 + z, x], [x, 1.0 - z]], dtype=complex)


def binary_entropy(p: float) -> float:
    return float((scipy.special.entr(p) + scipy.special.entr(1.0 - p)) / _LN2)


def two_peak_information(x: float) -> float:
    """Information a sharp readout reveals about a pure two-peak state with coherence x."""
    root = math.sqrt(max(0.0, 1.0 - x * x))
    return binary_entropy(0.5 * (1.0 - root))


def cell_counting_probs(r: float, k: int) -> np.ndarray:
    """
    Count, cell by cell, how many square windows of width 2r cover an outcome for k+1 peaks on [0, 1].

    :return: probabilities P_1, ..., P_{k+1} that an outcome is compatible with exactly n peaks
    """
    delta = 2.0 * r
    centers = np.arange(k + 1) / k
    edges = np.unique(np.concatenate([centers - 0.5 * delta, centers + 0.5 * delta]))

    result = np.zeros(k + 1)
    for start, end in zip(edges[:-1], edges[1:]):
        middle = 0.5 * (start + end)
        count = int(np.sum(np.logical_and(centers - 0.5 * delta <= middle, middle < centers + 0.5 * delta)))
        if count > 0:
            result[count - 1] += (end - start) * count / ((k + 1) * delta)

    return result


def grid_gaussian_mi(weights: Sequence[float], levels: Sequence[float], delta: float, points: int = 400001) -> float:
    """Integrate Σ p_ℓ g_ℓ log₂(g_ℓ/p) by the trapezoidal rule on a fine grid."""
    probs = np.array(weights, dtype=float)
    centers = np.array(levels, dtype=float)

    xs = np.linspace(centers[0] - 12.0 * delta, centers[-1] + 12.0 * delta, points)
    kernels = np.exp(-0.5 * ((xs[:, np.newaxis] - centers[np.newaxis, :]) / delta)**2) / (math.sqrt(2.0 * math.pi) *
                                                                                       delta)
    mixture = kernels @ probs

    integrand = np.sum(probs[np.newaxis, :] * scipy.special.rel_entr(kernels, mixture[:, np.newaxis]), axis=1)
    return float(np.trapz(integrand, xs) / _LN2)


def nx_max_by_bisection(x: float, z: float, r: float) -> float:
    """
    Find the largest n such that the pure states at x = r and x = n mix into a state reaching |z| at coherence x.

    The mixture with weight Q = (x − r)/(n − r) on the outer pair reaches |z| ≤ (1 − Q)√(1 − r²) + Q√(1 − n²).
    """

    def reach(n: float) -> float:
        weight = (x - r) / (n - r)
        return (1.0 - weight) * math.sqrt(1.0 - r * r) + weight * math.sqrt(max(0.0, 1.0 - n * n)) - abs(z)

    if reach(1.0) >= 0.0:
        return 1.0

    return float(scipy.optimize.brentq(reach, x, 1.0, xtol=1e-14))


def grid_roof_mic(x: float, z: float, b: float, span: float = 1.0, steps: int = 20000) -> float:
    """Minimize the average size of the four-element ensembles on a grid of outer coherences."""
    r = float(scipy.optimize.brentq(lambda n: two_peak_information(n) - b, 1e-9, 1.0 - 1e-15, xtol=1e-15))
    if x <= r:
        return 0.0

    upper = nx_max_by_bisection(x=x, z=z, r=r)

    ns = np.linspace(x, upper, steps + 1)
    probs = 0.5 * (1.0 - np.sqrt(np.clip(1.0 - ns * ns, 0.0, None)))
    information = (scipy.special.entr(probs) + scipy.special.entr(1.0 - probs)) / _LN2
    sizes = np.where(information > b, span * information / b, 0.0)

    return float(np.min((x - r) / (ns - r) * sizes))


def random_rank_one_povm(rng: np.random.Generator, dimension: int, count: int) -> Sequence[np.ndarray]:
    """Draw a rank-one POVM by whitening random vectors."""
    vectors = rng.normal(size=(dimension, count)) + 1j * rng.normal(size=(dimension, count))
    frame = vectors @ vectors.conj().T
    eigenvalues, basis = np.linalg.eigh(frame)
    inverse_root = (basis / np.sqrt(eigenvalues)[np.newaxis, :]) @ basis.conj().T
    whitened = inverse_root @ vectors
    return [np.outer(whitened[:, i], whitened[:, i].conj()) for i in range(count)]
