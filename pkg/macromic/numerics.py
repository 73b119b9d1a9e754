#!/usr/bin/env python3
"""Provide the numerical plumbing shared by the measures: errors, monotone bracketing and worker configuration."""
import logging
import math
import os
from typing import Callable, Mapping, Optional

import icontract
from typing_extensions import Final  # pylint: disable=unused-import

LOGGER = logging.getLogger(__name__)

#: Absolute slack used when comparing an information value against the requested number of bits.
BITS_TOLERANCE = 1e-12  # type: Final

#: Eigenvalues below this threshold are treated as zero (rank decisions, PSD checks, entropies).
EIGENVALUE_THRESHOLD = 1e-10  # type: Final


class ConvergenceError(RuntimeError):
    """
    Signal that a numerical procedure did not reach the requested accuracy.

    :ivar partial: best estimate available when the procedure gave up
    :ivar abs_error: estimated absolute error of ``partial``
    """

    def __init__(self, message: str, partial: float, abs_error: float) -> None:
        """
        Initialize with the message and the partial estimate.

        :param message: human-readable description of the failure
        :param partial: best estimate available when the procedure gave up
        :param abs_error: estimated absolute error of ``partial``
        """
        super().__init__(message)
        self.partial = partial
        self.abs_error = abs_error


class Bracketed:
    """
    Represent the outcome of a search for the largest width satisfying a monotone condition.

    :ivar value: largest width found to satisfy the condition (0 if even the smallest probed width fails)
    :ivar capped: True if the condition still held at the upper cap of the bracket
    :ivar evaluations: number of times the condition was evaluated
    """

    def __init__(self, value: float, capped: bool, evaluations: int) -> None:
        """Initialize with the given values."""
        self.value = value
        self.capped = capped
        self.evaluations = evaluations

    def __repr__(self) -> str:
        """Represent the bracket outcome for debugging."""
        return "Bracketed(value={!r}, capped={!r}, evaluations={!r})".format(self.value, self.capped, self.evaluations)


@icontract.require(lambda scale: scale > 0.0)
@icontract.require(lambda rtol: 0.0 < rtol < 1.0)
@icontract.ensure(lambda result: result.value >= 0.0)
def largest_satisfying(condition: Callable[[float], bool],
                       scale: float,
                       rtol: float = 1e-9,
                       lower_factor: float = 1e-9,
                       upper_factor: float = 10.0,
                       cap_exponent: int = 60) -> Bracketed:
    """
    Find the largest width for which a condition decreasing in the width still holds.

    The lower end of the bracket is ``lower_factor * scale``; if the condition fails there, the width is 0.
    The upper end starts at ``upper_factor * scale`` and doubles until the condition fails or
    ``2**cap_exponent * scale`` is reached, in which case the cap is returned and flagged.

    The bisection keeps the invariant "condition holds at ``lo`` and fails at ``hi``", so ties between
    the condition and its threshold are resolved toward the larger width.

    :param condition: monotone predicate on the width (True for small widths, False for large ones)
    :param scale: natural scale of the problem (e.g., the spectral span)
    :param rtol: relative tolerance on the returned width
    :param lower_factor: smallest probed width relative to ``scale``
    :param upper_factor: first upper bracket relative to ``scale``
    :param cap_exponent: the bracket never grows beyond ``2**cap_exponent * scale``
    :return: outcome of the search
    """
    # pylint: disable=too-many-arguments
    evaluations = 0

    lo = lower_factor * scale
    evaluations += 1
    if not condition(lo):
        return Bracketed(value=0.0, capped=False, evaluations=evaluations)

    cap = math.ldexp(scale, cap_exponent)

    hi = upper_factor * scale
    while True:
        evaluations += 1
        if not condition(hi):
            break

        lo = hi
        if hi >= cap:
            LOGGER.warning("The condition still holds at the cap of the bracket %g; returning the cap.", cap)
            return Bracketed(value=cap, capped=True, evaluations=evaluations)

        hi = min(2.0 * hi, cap)

    while hi - lo > rtol * hi:
        # geometric steps while the bracket spans decades, arithmetic afterwards
        mid = math.sqrt(lo * hi) if hi > 4.0 * lo else 0.5 * (lo + hi)

        evaluations += 1
        if condition(mid):
            lo = mid
        else:
            hi = mid

    return Bracketed(value=lo, capped=False, evaluations=evaluations)


def worker_count(environ: Optional[Mapping[str, str]] = None) -> int:
    """
    Determine how many worker threads parameter sweeps may use.

    The count is capped by the environment variable ``MACROMIC_THREADS``. If the variable is unset, empty or
    non-positive, all available CPUs are used.

    :param environ: environment to inspect; ``os.environ`` if not given
    :return: number of worker threads, at least 1
    :raise ValueError: if ``MACROMIC_THREADS`` is not an integer
    """
    env = os.environ if environ is None else environ

    available = os.cpu_count() or 1

    text = env.get('MACROMIC_THREADS', '').strip()
    if text == '':
        return available

    try:
        requested = int(text)
    except ValueError as err:
        raise ValueError("Expected an integer in the environment variable MACROMIC_THREADS, but got: {!r}".format(
            text)) from err

    if requested <= 0:
        return available

    return requested
