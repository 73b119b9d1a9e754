#!/usr/bin/env python3
"""Check the inequalities and identities between the measures on seeded random inputs."""
import collections
import concurrent.futures
import logging
import math
from typing import Callable, List, Mapping, MutableMapping, Sequence, Tuple  # pylint: disable=unused-import

import icontract
import numpy as np

from macromic import discord
from macromic import fragility
from macromic import mutual_info
from macromic import pointers
from macromic import roof
from macromic import spectra

LOGGER = logging.getLogger(__name__)

Slacks = List[float]


class Report:
    """
    Summarize a verification suite.

    :ivar suite: name of the suite
    :ivar trials: number of random trials
    :ivar failures: number of checks with negative slack
    :ivar worst_slack: smallest slack over all checks (negative if a check failed)
    """

    def __init__(self, suite: str, trials: int, failures: int, worst_slack: float) -> None:
        """Initialize with the given values."""
        self.suite = suite
        self.trials = trials
        self.failures = failures
        self.worst_slack = worst_slack

    def passed(self) -> bool:
        """Return True if no check failed."""
        return self.failures == 0

    def to_mapping(self) -> MutableMapping[str, object]:
        """Convert the report to a JSON-able mapping with a fixed key order."""
        return collections.OrderedDict([('suite', self.suite), ('trials', self.trials), ('failures', self.failures),
                                        ('worst_slack', self.worst_slack)])

    def __repr__(self) -> str:
        """Represent the report for debugging."""
        return "Report(suite={!r}, trials={}, failures={}, worst_slack={!r})".format(
            self.suite, self.trials, self.failures, self.worst_slack)


##
# Random inputs
##


@icontract.require(lambda dimension: dimension >= 1)
def random_spectrum(rng: np.random.Generator, dimension: int, span: float = 1.0) -> spectra.ObservableSpectrum:
    """Draw strictly increasing eigenvalues from 0 to ``span`` with random gaps."""
    if dimension == 1:
        return spectra.ObservableSpectrum([0.0])

    gaps = rng.uniform(0.1, 1.0, size=dimension - 1)
    values = np.concatenate([[0.0], np.cumsum(gaps)])
    return spectra.ObservableSpectrum(values * (span / values[-1]))


@icontract.require(lambda dimension: dimension >= 1)
def random_pure_state(rng: np.random.Generator, dimension: int) -> spectra.PureState:
    """Draw a pure state from the unitarily invariant distribution."""
    return spectra.PureState.normalized(rng.normal(size=dimension) + 1j * rng.normal(size=dimension))


@icontract.require(lambda dimension: dimension >= 1)
def random_density_matrix(rng: np.random.Generator, dimension: int, rank: int = 0) -> spectra.DensityMatrix:
    """
    Draw a density matrix G G†/tr(G G†) from a complex Ginibre matrix G.

    :param rng: random generator
    :param dimension: dimension of the state
    :param rank: number of columns of G; 0 means full rank
    :return: the state
    """
    columns = dimension if rank <= 0 else rank
    ginibre = rng.normal(size=(dimension, columns)) + 1j * rng.normal(size=(dimension, columns))
    matrix = ginibre @ ginibre.conj().T
    matrix = 0.5 * (matrix + matrix.conj().T)
    return spectra.DensityMatrix(matrix / np.trace(matrix).real)


@icontract.require(lambda count: count >= 1)
def random_ensemble(rng: np.random.Generator, count: int, span: float = 1.0) -> spectra.BranchEnsemble:
    """Draw Dirichlet-distributed weights on a random spectrum."""
    weights = rng.dirichlet(np.ones(count))
    weights = weights / np.sum(weights)
    return spectra.BranchEnsemble(weights=weights, spectrum=random_spectrum(rng=rng, dimension=count, span=span))


@icontract.require(lambda dimension: dimension >= 1)
@icontract.require(lambda count: count >= 1)
def random_kraus_channel(rng: np.random.Generator, dimension: int, count: int) -> fragility.KrausChannel:
    """Draw a channel by slicing a random isometry into ``count`` Kraus operators."""
    ginibre = (rng.normal(size=(count * dimension, dimension)) + 1j * rng.normal(size=(count * dimension, dimension)))
    isometry, _ = np.linalg.qr(ginibre)
    return fragility.KrausChannel([isometry[index * dimension:(index + 1) * dimension, :] for index in range(count)])


def random_covariant_kraus(rng: np.random.Generator, dimension: int = 3,
                           step: float = 1.0) -> Tuple[spectra.ObservableSpectrum, List[float], List[np.ndarray]]:
    """
    Draw a covariant instrument on ``dimension`` equally spaced levels.

    Every shift between the levels gets one Kraus operator with random coefficients; the set is normalized by
    right-multiplying with (Σ K†K)^{-1/2}, which is diagonal for covariant operators.

    :return: the spectrum, the shifts and the coefficient matrices
    """
    spectrum = spectra.ObservableSpectrum.equally_spaced(count=dimension, span=step * (dimension - 1))
    values = spectrum.eigenvalues
    differences = values[:, np.newaxis] - values[np.newaxis, :]

    shifts = [step * offset for offset in range(-(dimension - 1), dimension)]
    operators = []  # type: List[np.ndarray]
    for shift in shifts:
        mask = np.abs(differences - shift) <= 1e-9 * max(1.0, spectrum.span)
        coefficients = rng.normal(size=mask.shape) + 1j * rng.normal(size=mask.shape)
        operators.append(np.where(mask, coefficients, 0.0))

    completeness = np.real(np.diag(sum(operator.conj().T @ operator for operator in operators)))
    normalization = np.diag(1.0 / np.sqrt(completeness))

    return spectrum, shifts, [operator @ normalization for operator in operators]


##
# Suites
##


def _dephasing_semigroup(rng: np.random.Generator, trials: int) -> Slacks:
    """Check Φ^α ∘ Φ^β = Φ^γ with γ⁻² = α⁻² + β⁻²."""
    slacks = []  # type: Slacks
    for _ in range(trials):
        dimension = int(rng.integers(2, 5))
        spectrum = random_spectrum(rng=rng, dimension=dimension, span=float(rng.uniform(0.5, 5.0)))
        rho = random_density_matrix(rng=rng, dimension=dimension)
        alpha, beta = rng.uniform(0.1, 3.0, size=2) * spectrum.span
        gamma = 1.0 / math.sqrt(alpha**-2 + beta**-2)

        inner = pointers.apply_partial_dephasing(rho=rho, spectrum=spectrum, delta=beta)
        composed = pointers.apply_partial_dephasing(rho=inner, spectrum=spectrum, delta=alpha)
        direct = pointers.apply_partial_dephasing(rho=rho, spectrum=spectrum, delta=gamma)

        slacks.append(1e-12 - float(np.max(np.abs(composed.entries - direct.entries))))

    return slacks


def _dephasing_scale(rng: np.random.Generator, trials: int) -> Slacks:
    """Check that rescaling the eigenvalues and the width together leaves Φ^Δ unchanged."""
    slacks = []  # type: Slacks
    for _ in range(trials):
        dimension = int(rng.integers(2, 5))
        spectrum = random_spectrum(rng=rng, dimension=dimension)
        rho = random_density_matrix(rng=rng, dimension=dimension)
        delta = float(rng.uniform(0.1, 3.0))
        factor = float(rng.uniform(0.1, 10.0))

        scaled = pointers.apply_partial_dephasing(rho=rho, spectrum=spectrum.scaled(factor), delta=factor * delta)
        plain = pointers.apply_partial_dephasing(rho=rho, spectrum=spectrum, delta=delta)

        slacks.append(1e-12 - float(np.max(np.abs(scaled.entries - plain.entries))))

    return slacks


def _dephasing_commutation(rng: np.random.Generator, trials: int) -> Slacks:
    """Check 𝒢 ∘ Φ^Δ = Φ^Δ ∘ 𝒢 = 𝒢."""
    slacks = []  # type: Slacks
    for _ in range(trials):
        dimension = int(rng.integers(2, 5))
        spectrum = random_spectrum(rng=rng, dimension=dimension)
        rho = random_density_matrix(rng=rng, dimension=dimension)
        delta = float(rng.uniform(0.05, 5.0))

        full = spectra.dephase_fully(rho).entries
        after = spectra.dephase_fully(pointers.apply_partial_dephasing(rho=rho, spectrum=spectrum, delta=delta)).entries
        before = pointers.apply_partial_dephasing(rho=spectra.dephase_fully(rho), spectrum=spectrum,
                                                  delta=delta).entries

        slacks.append(1e-12 - max(float(np.max(np.abs(after - full))), float(np.max(np.abs(before - full)))))

    return slacks


#: Widths of the variance-bound suite relative to the span.
VARIANCE_BOUND_WIDTHS = (0.25, 0.5, 1.0, 2.0, 5.0)


def _variance_bound(rng: np.random.Generator, trials: int) -> Slacks:
    """Check that the Gaussian-pointer information never exceeds V/((2 ln 2) Δ²)."""
    slacks = []  # type: Slacks
    for _ in range(trials):
        ens = random_ensemble(rng=rng, count=int(rng.integers(2, 5)))
        for factor in VARIANCE_BOUND_WIDTHS:
            delta = factor * ens.spectrum.span
            info = mutual_info.mutual_information(
                ens=ens, model=pointers.PointerModel(kind=pointers.PointerKind.GAUSSIAN, delta=delta))
            bound = mutual_info.variance_upper_bound(ens=ens, delta=delta)
            slacks.append(bound - info.bits + mutual_info.MI_ABS_TOLERANCE)

    return slacks


#: Widths of the discord suites relative to the span.
DISCORD_WIDTHS = (0.1, 0.5, 1.0, 3.0)


def _discord_equivalence(rng: np.random.Generator, trials: int) -> Slacks:
    """Check that the entropy-gain and the mutual-information forms of C_Δ agree."""
    slacks = []  # type: Slacks
    for _ in range(trials):
        dimension = int(rng.integers(2, 4))
        spectrum = random_spectrum(rng=rng, dimension=dimension)
        rho = random_density_matrix(rng=rng, dimension=dimension, rank=int(rng.integers(1, dimension + 1)))
        for factor in DISCORD_WIDTHS:
            delta = factor * spectrum.span
            gain = discord.c_delta(rho=rho, spectrum=spectrum, delta=delta)
            via_qmi = discord.c_delta_via_qmi(rho=rho, spectrum=spectrum, delta=delta)
            slacks.append(1e-9 - abs(gain - via_qmi))

    return slacks


def _discord_pure_ordering(rng: np.random.Generator, trials: int) -> Slacks:
    """Check C_Δ ≥ I_Δ for pure states and the Gaussian pointer."""
    slacks = []  # type: Slacks
    for _ in range(trials):
        dimension = int(rng.integers(2, 4))
        spectrum = random_spectrum(rng=rng, dimension=dimension)
        state = random_pure_state(rng=rng, dimension=dimension)
        ens = spectra.BranchEnsemble(weights=state.probabilities(), spectrum=spectrum)
        for factor in DISCORD_WIDTHS:
            delta = factor * spectrum.span
            gain = discord.c_delta(rho=state.density_matrix(), spectrum=spectrum, delta=delta)
            info = mutual_info.mutual_information(
                ens=ens, model=pointers.PointerModel(kind=pointers.PointerKind.GAUSSIAN, delta=delta))
            slacks.append(gain - info.bits + mutual_info.MI_ABS_TOLERANCE)

    return slacks


#: Bits of the QFI suite.
QFI_BITS = (0.05, 0.1, 0.3)


def random_coherent_qubit(rng: np.random.Generator, min_coherence: float = 0.2) -> roof.BlochStateXZ:
    """Draw a qubit state in the XZ plane with |x| ≥ ``min_coherence``."""
    while True:
        x_rho, z_rho = rng.uniform(-1.0, 1.0, size=2)
        if abs(x_rho) >= min_coherence and x_rho * x_rho + z_rho * z_rho <= 1.0:
            return roof.BlochStateXZ(x_rho=abs(float(x_rho)), z_rho=float(z_rho))


def _qfi_bound(rng: np.random.Generator, trials: int) -> Slacks:
    """Check MIC' ≤ √(F/((8 ln 2) b)) for the Gaussian pointer on random qubits."""
    slacks = []  # type: Slacks
    for _ in range(trials):
        state = random_coherent_qubit(rng=rng)
        rho = state.density_matrix()
        spectrum = state.spectrum()
        for b in QFI_BITS:
            size = roof.mic_prime(rho=rho, spectrum=spectrum, kind=pointers.PointerKind.GAUSSIAN, b=b)
            bound = roof.qfi_size_bound(rho=rho, spectrum=spectrum, b=b)
            slacks.append(bound * (1.0 + 1e-6) - size)

    return slacks


def _ef_decay(rng: np.random.Generator, trials: int) -> Slacks:
    """Check that the average branch entanglement after a random channel stays below H(p_ℓ) − I(P:ℓ)."""
    slacks = []  # type: Slacks
    for _ in range(trials):
        ens = random_ensemble(rng=rng, count=3)
        state = spectra.MicroMacroState(weights=ens.weights, spectrum=ens.spectrum)
        channel = random_kraus_channel(rng=rng, dimension=3, count=5)
        check = fragility.ef_decay_bound_check(state=state, channel=channel)
        slacks.append(check.slack + fragility.DECAY_TOLERANCE)

    return slacks


def _distillable_chain(rng: np.random.Generator, trials: int) -> Slacks:
    """Check E_D(Φ^Δ(Ψ)) = C_R(Φ^Δ(Ψ)) = C_R(Ψ) − C_Δ(Ψ) for micro-macro states."""
    slacks = []  # type: Slacks
    for _ in range(trials):
        ens = random_ensemble(rng=rng, count=int(rng.integers(2, 5)))
        state = spectra.MicroMacroState(weights=ens.weights, spectrum=ens.spectrum)
        delta = float(rng.uniform(0.05, 5.0)) * ens.spectrum.span

        rho = state.branch_density_matrix()
        distillable = fragility.distillable_after_dephasing(state=state, delta=delta)
        coherence = fragility.relative_entropy_coherence(
            pointers.apply_partial_dephasing(rho=rho, spectrum=state.spectrum, delta=delta))
        difference = (fragility.relative_entropy_coherence(rho) -
                      discord.c_delta(rho=rho, spectrum=state.spectrum, delta=delta))

        slacks.append(1e-10 - max(abs(distillable - coherence), abs(distillable - difference)))

    return slacks


class Suite:
    """
    Represent a named verification suite.

    :ivar name: name used on the command line
    :ivar check: function mapping a generator and a trial count to the slacks of all checks
    :ivar default_trials: number of trials if none is requested
    """

    def __init__(self, name: str, check: Callable[[np.random.Generator, int], Slacks], default_trials: int) -> None:
        """Initialize with the given values."""
        self.name = name
        self.check = check
        self.default_trials = default_trials

    def __repr__(self) -> str:
        """Represent the suite for debugging."""
        return "Suite(name={!r}, default_trials={})".format(self.name, self.default_trials)


SUITES = collections.OrderedDict([(suite.name, suite) for suite in [
    Suite('dephasing-semigroup', _dephasing_semigroup, 100),
    Suite('dephasing-scale', _dephasing_scale, 100),
    Suite('dephasing-commutation', _dephasing_commutation, 100),
    Suite('variance-bound', _variance_bound, 1000),
    Suite('discord-equivalence', _discord_equivalence, 100),
    Suite('discord-pure-ordering', _discord_pure_ordering, 100),
    Suite('qfi-bound', _qfi_bound, 200),
    Suite('ef-decay', _ef_decay, 500),
    Suite('distillable-chain', _distillable_chain, 100),
]])  # type: Mapping[str, Suite]


def run_suite(name: str, trials: int = 0, seed: int = 0) -> Report:
    """
    Run a verification suite.

    :param name: name of the suite, see :data:`SUITES`
    :param trials: number of random trials; 0 selects the default of the suite
    :param seed: seed of the random generator
    :return: the report
    :raise ValueError: if the suite is unknown or ``trials`` is negative
    """
    if name not in SUITES:
        raise ValueError("Expected a suite among {}, but got: {!r}".format(", ".join(SUITES.keys()), name))

    if trials < 0:
        raise ValueError("Expected a non-negative number of trials, but got: {}".format(trials))

    suite = SUITES[name]
    count = trials if trials > 0 else suite.default_trials

    slacks = suite.check(np.random.default_rng(seed), count)

    failures = sum(1 for slack in slacks if slack < 0.0)
    worst = min(slacks) if slacks else 0.0

    if failures > 0:
        LOGGER.warning("The suite %s failed %d of %d checks (worst slack %g).", name, failures, len(slacks), worst)
    else:
        LOGGER.debug("The suite %s passed %d checks (worst slack %g).", name, len(slacks), worst)

    return Report(suite=name, trials=count, failures=failures, worst_slack=worst)


def run_suites(names: Sequence[str], trials: int = 0, seed: int = 0, workers: int = 1) -> List[Report]:
    """
    Run several verification suites, in worker threads if ``workers`` is above 1.

    Every suite draws from its own generator seeded with ``seed``, so a report does not depend on which suites run
    alongside it.

    :param names: names of the suites, see :data:`SUITES`
    :param trials: number of random trials of every suite; 0 selects the defaults of the suites
    :param seed: seed of the random generators
    :param workers: number of worker threads
    :return: the reports in the order of ``names``
    :raise ValueError: if a suite is unknown or ``trials`` is negative
    """
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ValueError("Expected suites among {}, but got: {}".format(", ".join(SUITES.keys()), unknown))

    def run(name: str) -> Report:
        return run_suite(name=name, trials=trials, seed=seed)

    if workers > 1 and len(names) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=min(workers, len(names))) as executor:
            return list(executor.map(run, names))

    return [run(name) for name in names]
