#!/usr/bin/env python3
"""
Bound how fast micro-macro entanglement decays when an environment learns about the macroscopic branch.

The micro-macro state Σ √p_ℓ |ℓ⟩_m |A_ℓ⟩_M is tracked on the branch basis. A channel acts on the macroscopic part
through a finite list of Kraus operators; continuous-outcome channels are discretized by quadrature nodes.
"""
import math
from typing import List, Sequence  # pylint: disable=unused-import

import icontract
import numpy as np
import numpy.polynomial.hermite
import scipy.special
from typing_extensions import Final  # pylint: disable=unused-import

from macromic import mutual_info
from macromic import pointers
from macromic import spectra

#: Allowed deviation of Σ K†K from the identity.
COMPLETENESS_TOLERANCE = 1e-10  # type: Final

#: Slack granted to the decay bound to absorb rounding.
DECAY_TOLERANCE = 1e-10  # type: Final


class KrausChannel:
    """
    Represent a channel on the macroscopic system by its Kraus operators K_x.

    :ivar operators: read-only complex matrices of equal shape
    """

    def __init__(self, operators: Sequence[np.ndarray]) -> None:
        """
        Initialize with the given operators.

        :param operators: Kraus operators in the eigenbasis of the observable
        :raise ValueError: if the operators are not square matrices of equal shape or Σ K†K differs from the identity
        """
        if not operators:
            raise ValueError("Expected at least one Kraus operator")

        matrices = []  # type: List[np.ndarray]
        for index, operator in enumerate(operators):
            matrix = np.array(operator, dtype=complex)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValueError("Expected the Kraus operator {} to be a square matrix, but got shape: {}".format(
                    index, matrix.shape))

            if matrices and matrix.shape != matrices[0].shape:
                raise ValueError("Expected the Kraus operator {} of shape {}, but got: {}".format(
                    index, matrices[0].shape, matrix.shape))

            matrix.setflags(write=False)
            matrices.append(matrix)

        completeness = sum(matrix.conj().T @ matrix for matrix in matrices)
        deviation = float(np.max(np.abs(completeness - np.eye(matrices[0].shape[0]))))
        if deviation > COMPLETENESS_TOLERANCE:
            raise ValueError("Expected the Kraus operators to satisfy Σ K†K = 1, but the deviation is: {!r}".format(
                deviation))

        self.operators = matrices

    @property
    def dimension(self) -> int:
        """Return the dimension of the system the channel acts on."""
        return int(self.operators[0].shape[0])

    def __len__(self) -> int:
        """Return the number of Kraus operators."""
        return len(self.operators)

    def effects(self) -> List[np.ndarray]:
        """Compute the effects E_x = K_x† K_x of the environment's outcomes."""
        return [operator.conj().T @ operator for operator in self.operators]

    def apply(self, rho: spectra.DensityMatrix) -> spectra.DensityMatrix:
        """
        Apply the channel to a state.

        :param rho: state of matching dimension
        :return: Σ K_x ρ K_x†
        :raise ValueError: on dimension mismatch
        """
        if rho.dimension != self.dimension:
            raise ValueError("Expected a state of dimension {}, but got: {}".format(self.dimension, rho.dimension))

        result = sum(operator @ rho.entries @ operator.conj().T for operator in self.operators)
        result = 0.5 * (result + result.conj().T)
        return spectra.DensityMatrix(result / np.trace(result).real)

    def __repr__(self) -> str:
        """Represent the channel for debugging."""
        return "KrausChannel(dimension={}, operators={})".format(self.dimension, len(self.operators))


def identity_channel(dimension: int) -> KrausChannel:
    """Create the channel that leaves the system alone."""
    return KrausChannel([np.eye(dimension, dtype=complex)])


def projective_channel(dimension: int) -> KrausChannel:
    """Create the channel that measures the observable sharply, |A_ℓ⟩⟨A_ℓ| for every ℓ."""
    return KrausChannel([np.diag(np.eye(dimension)[index]).astype(complex) for index in range(dimension)])


@icontract.require(lambda delta: delta > 0.0)
@icontract.require(lambda nodes: nodes >= 2)
def gaussian_pointer_channel(spectrum: spectra.ObservableSpectrum, delta: float, nodes: int = 64) -> KrausChannel:
    """
    Discretize the Gaussian pointer readout of width ``delta`` into diagonal Kraus operators.

    The outcome axis is sampled at Gauss–Hermite nodes centered on the spectrum and spread by
    √(Δ² + (span/2)²). The effects are normalized per branch so that the channel stays trace preserving.

    :param spectrum: eigenvalues of the observable
    :param delta: width of the Gaussian pointer
    :param nodes: number of quadrature nodes (one Kraus operator each)
    :return: the discretized channel, dephasing the state as the continuous readout does
    """
    values = spectrum.eigenvalues
    center = 0.5 * (values[0] + values[-1])
    spread = math.sqrt(delta * delta + (0.5 * spectrum.span)**2)

    roots, weights = numpy.polynomial.hermite.hermgauss(nodes)
    outcomes = center + math.sqrt(2.0) * spread * roots
    log_widths = np.log(math.sqrt(2.0) * spread * weights) + roots * roots

    model = pointers.PointerModel(kind=pointers.PointerKind.GAUSSIAN, delta=delta)
    densities = pointers.povm_density(model=model, x=outcomes[:, np.newaxis], a=values[np.newaxis, :])
    effects = np.exp(log_widths)[:, np.newaxis] * np.asarray(densities)
    effects = effects / np.sum(effects, axis=0, keepdims=True)

    return KrausChannel([np.diag(np.sqrt(effect)).astype(complex) for effect in effects])


@icontract.require(lambda dimension: dimension >= 1)
@icontract.require(lambda eta: 0.0 <= eta <= 1.0)
def loss_channel(dimension: int, eta: float) -> KrausChannel:
    """
    Create the bosonic loss channel of transmissivity ``eta`` restricted to the number states 0, ..., d − 1.

    K_k = Σ_{n ≥ k} √(C(n, k) η^{n−k} (1 − η)^k) |n − k⟩⟨n| removes k excitations.

    >>> len(loss_channel(3, 0.5))
    3
    """
    operators = []  # type: List[np.ndarray]
    for lost in range(dimension):
        operator = np.zeros((dimension, dimension), dtype=complex)
        for number in range(lost, dimension):
            amplitude = scipy.special.comb(number, lost) * eta**(number - lost) * (1.0 - eta)**lost
            operator[number - lost, number] = math.sqrt(amplitude)
        operators.append(operator)

    return KrausChannel(operators)


def _check_channel(state: spectra.MicroMacroState, channel: KrausChannel) -> None:
    """Raise a ValueError if the channel does not act on the branches of the state."""
    if channel.dimension != len(state.weights):
        raise ValueError("Expected a channel of dimension {} to match the number of branches, but got: {}".format(
            len(state.weights), channel.dimension))


@icontract.ensure(lambda result: result >= 0.0)
def ef_micro_macro(state: spectra.MicroMacroState) -> float:
    """
    Compute the entanglement of formation of the micro-macro state, the Shannon entropy of the branch weights.

    >>> ef_micro_macro(spectra.MicroMacroState([0.25] * 4, spectra.ObservableSpectrum([0, 1, 2, 3])))
    2.0
    """
    return spectra.shannon_entropy(state.weights)


@icontract.ensure(lambda state, result: 0.0 <= result <= ef_micro_macro(state) + 1e-12)
def environment_mi(state: spectra.MicroMacroState, channel: KrausChannel) -> float:
    """
    Compute the information I(P:ℓ) the Kraus index reveals about the branch.

    :param state: micro-macro state
    :param channel: channel on the macroscopic part in the eigenbasis of the observable
    :return: mutual information of p(x, ℓ) = p_ℓ ⟨A_ℓ|E_x|A_ℓ⟩ in bits
    :raise ValueError: on dimension mismatch
    """
    _check_channel(state=state, channel=channel)

    weights = state.weights
    joint = np.array([weights * np.clip(np.diag(effect).real, 0.0, None) for effect in channel.effects()])
    return mutual_info.discrete_mutual_information(joint)


class DecayBound:
    """
    Represent the comparison of the average branch entanglement after a channel with its upper bound.

    :ivar avg_branch_entropy: Σ_x p(x) S(ρ_x^m) over the pure states the Kraus operators induce
    :ivar bound: H(p_ℓ) − I(P:ℓ)
    :ivar holds: True if the average does not exceed the bound
    :ivar slack: bound minus average
    """

    def __init__(self, avg_branch_entropy: float, bound: float) -> None:
        """Initialize with the given values and derive the verdict."""
        self.avg_branch_entropy = avg_branch_entropy
        self.bound = bound
        self.slack = bound - avg_branch_entropy
        self.holds = avg_branch_entropy <= bound + DECAY_TOLERANCE

    def __repr__(self) -> str:
        """Represent the comparison for debugging."""
        return "DecayBound(avg_branch_entropy={!r}, bound={!r}, holds={}, slack={!r})".format(
            self.avg_branch_entropy, self.bound, self.holds, self.slack)


def ef_decay_bound_check(state: spectra.MicroMacroState, channel: KrausChannel) -> DecayBound:
    """
    Check that the entanglement left after the channel decays at least by what the environment learned.

    Every Kraus operator leaves the micro-macro state pure, with the micro reduction
    ρ_x^m = D E_x^T D / p(x), D = diag(√p_ℓ). The average entanglement over this decomposition bounds the
    entanglement of formation of the output from above.

    :param state: micro-macro state
    :param channel: channel on the macroscopic part
    :return: the average, the bound H(p_ℓ) − I(P:ℓ) and the verdict
    :raise ValueError: on dimension mismatch
    """
    _check_channel(state=state, channel=channel)

    roots = np.sqrt(state.weights)
    average = 0.0
    for effect in channel.effects():
        reduced = roots[:, np.newaxis] * effect.T * roots[np.newaxis, :]
        probability = float(np.trace(reduced).real)
        if probability <= 0.0:
            continue

        average += probability * spectra.hermitian_entropy(reduced / probability)

    bound = ef_micro_macro(state) - environment_mi(state=state, channel=channel)
    return DecayBound(avg_branch_entropy=average, bound=bound)


@icontract.ensure(lambda result: result >= 0.0)
def relative_entropy_coherence(rho: spectra.DensityMatrix) -> float:
    """
    Compute the relative entropy of coherence C_R(ρ) = S(𝒢(ρ)) − S(ρ).

    >>> relative_entropy_coherence(spectra.DensityMatrix([[0.5, 0.5], [0.5, 0.5]]))
    1.0
    """
    return max(0.0, spectra.von_neumann_entropy(spectra.dephase_fully(rho)) - spectra.von_neumann_entropy(rho))


@icontract.require(lambda delta: delta > 0.0)
@icontract.ensure(lambda state, result: 0.0 <= result <= ef_micro_macro(state) + 1e-12)
def distillable_after_dephasing(state: spectra.MicroMacroState, delta: float) -> float:
    """
    Compute the distillable entanglement left after the macroscopic part is dephased with width ``delta``.

    The output is maximally correlated, so its distillable entanglement equals its relative entropy of coherence,
    S(𝒢(ρ)) − S(Φ^Δ(ρ)) = C_R(Ψ) − C_Δ(Ψ).

    :param state: micro-macro state
    :param delta: width of the Gaussian pointer
    :return: the distillable entanglement in bits
    """
    rho = state.branch_density_matrix()
    dephased = pointers.apply_partial_dephasing(rho=rho, spectrum=state.spectrum, delta=delta)

    return max(0.0, spectra.von_neumann_entropy(spectra.dephase_fully(rho)) - spectra.von_neumann_entropy(dephased))
