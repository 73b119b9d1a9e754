#!/usr/bin/env python3
"""
Extend the information-based size to mixed states by convex roofs.

The module provides the analytic roof of two-peak qubit states restricted to the XZ plane of the Bloch ball,
the direct roof of the mutual information (analytic for qubits, a multistart search over ρ-distortions of rank-one
POVMs for dimensions up to 4) together with the size MIC' built on it, and the quantum Fisher information which
bounds that size from above.
"""
import concurrent.futures
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple  # pylint: disable=unused-import

import icontract
import numpy as np
import scipy.optimize
from typing_extensions import Final  # pylint: disable=unused-import

from macromic import mutual_info
from macromic import numerics
from macromic import pointers
from macromic import spectra

LOGGER = logging.getLogger(__name__)

#: Largest dimension handled by the numerical roof search.
MAX_SEARCH_DIMENSION = 4  # type: Final

_LN2 = math.log(2.0)


class BlochStateXZ:
    """
    Represent a two-peak qubit state ½(1 + x σ_x + z σ_z) with peaks at 0 and N.

    :ivar x_rho: x component of the Bloch vector (the coherence)
    :ivar z_rho: z component of the Bloch vector (the population imbalance)
    :ivar span: distance N between the peaks
    """

    @icontract.require(lambda x_rho, z_rho: x_rho * x_rho + z_rho * z_rho <= 1.0 + 1e-12)
    @icontract.require(lambda span: span > 0.0)
    def __init__(self, x_rho: float, z_rho: float, span: float = 1.0) -> None:
        """Initialize with the given values."""
        self.x_rho = float(x_rho)
        self.z_rho = float(z_rho)
        self.span = float(span)

    def spectrum(self) -> spectra.ObservableSpectrum:
        """Return the two eigenvalues 0 and N."""
        return spectra.ObservableSpectrum([0.0, self.span])

    def density_matrix(self) -> spectra.DensityMatrix:
        """Build the density matrix in the eigenbasis of the observable."""
        return spectra.DensityMatrix(_bloch_matrix(x=self.x_rho, z=self.z_rho))

    @staticmethod
    def from_density_matrix(rho: spectra.DensityMatrix, span: float = 1.0) -> 'BlochStateXZ':
        """
        Rotate a qubit state about the z axis into the XZ plane with a non-negative x.

        The rotation is generated by the observable itself, so it changes none of the sizes.
        """
        if rho.dimension != 2:
            raise ValueError("Expected a qubit state, but got dimension: {}".format(rho.dimension))

        x = min(2.0 * abs(complex(rho.entries[0, 1])), 1.0)
        z = float((rho.entries[0, 0] - rho.entries[1, 1]).real)
        norm = math.hypot(x, z)
        if norm > 1.0:
            x, z = x / norm, z / norm

        return BlochStateXZ(x_rho=x, z_rho=z, span=span)

    def __repr__(self) -> str:
        """Represent the state for debugging."""
        return "BlochStateXZ(x_rho={!r}, z_rho={!r}, span={!r})".format(self.x_rho, self.z_rho, self.span)


def _bloch_matrix(x: float, z: float) -> np.ndarray:
    """Build ½(1 + x σ_x + z σ_z)."""
    return 0.5 * np.array([[1.0 + z, x], [x, 1.0 - z]], dtype=complex)


def _bloch_pure_state(x: float, z: float) -> spectra.PureState:
    """Build the pure state on the XZ circle at the given z, with the sign of x."""
    z = min(max(z, -1.0), 1.0)
    upper = math.sqrt(0.5 * (1.0 + z))
    lower = math.sqrt(0.5 * (1.0 - z))
    return spectra.PureState.normalized([upper, math.copysign(lower, x)])


class EnsembleDecomposition:
    """
    Represent a decomposition of a state into a weighted mixture of states.

    :ivar weights: read-only probabilities q_k
    :ivar states: states ρ_k of equal dimension (pure for pure-state ensembles)
    """

    def __init__(self, weights: Sequence[float], states: Sequence[spectra.DensityMatrix]) -> None:
        """
        Initialize with the given values.

        :raise ValueError: if the weights are not a probability vector or do not match the states
        """
        values = np.array(weights, dtype=float)
        if values.ndim != 1 or values.size == 0 or values.size != len(states):
            raise ValueError("Expected as many weights as states and at least one, but got {} weights and {} states".
                             format(values.size, len(states)))

        if np.any(values < 0.0) or abs(float(np.sum(values)) - 1.0) > 1e-10:
            raise ValueError("Expected the weights to be a probability vector, but got: {}".format(values.tolist()))

        dimensions = {state.dimension for state in states}
        if len(dimensions) != 1:
            raise ValueError("Expected the states to be of equal dimension, but got: {}".format(sorted(dimensions)))

        values.setflags(write=False)
        self.weights = values
        self.states = list(states)

    def __len__(self) -> int:
        """Return the number of elements."""
        return len(self.states)

    def mixture(self) -> np.ndarray:
        """Compute Σ_k q_k ρ_k."""
        result = np.zeros_like(self.states[0].entries)
        for weight, state in zip(self.weights, self.states):
            result = result + weight * state.entries
        return result

    def is_pure(self) -> bool:
        """Check whether all elements are pure states."""
        return all(state.is_pure() for state in self.states)

    def pure_states(self) -> List[spectra.PureState]:
        """
        Return the elements as state vectors.

        :raise ValueError: if an element is not pure
        """
        result = []  # type: List[spectra.PureState]
        for i, state in enumerate(self.states):
            if not state.is_pure():
                raise ValueError("Expected the element {} of the ensemble to be pure".format(i))

            _, vectors = np.linalg.eigh(state.entries)
            result.append(spectra.PureState.normalized(vectors[:, -1]))

        return result

    def average(self, function: Callable[[spectra.DensityMatrix], float]) -> float:
        """Compute Σ_k q_k f(ρ_k) over the elements with positive weight."""
        return float(sum(weight * function(state) for weight, state in zip(self.weights, self.states) if weight > 0.0))

    def __repr__(self) -> str:
        """Represent the ensemble for debugging."""
        return "EnsembleDecomposition(weights={}, states={!r})".format(self.weights.tolist(), self.states)


##
# Two-peak qubit states
##


@icontract.require(lambda x: -1.0 - 1e-12 <= x <= 1.0 + 1e-12)
@icontract.ensure(lambda result: 0.0 <= result <= 1.0)
def zero_width_mi_2peak(x: float) -> float:
    """
    Compute Ĩ_0(x), the information a sharp readout reveals about the two peaks of a pure state with coherence x.

    Ĩ_0(x) = h₂((1 − √(1 − x²))/2), the binary entropy of the populations of the pure state.

    >>> zero_width_mi_2peak(1.0)
    1.0
    """
    x = min(abs(x), 1.0)
    root = math.sqrt(max(0.0, 1.0 - x * x))

    # (1 − √(1 − x²))/2 without the cancellation at small x
    smaller = x * x / (2.0 * (1.0 + root))
    return spectra.binary_entropy(smaller)


@icontract.require(lambda x: -1.0 - 1e-12 <= x <= 1.0 + 1e-12)
@icontract.require(lambda delta: delta > 0.0)
@icontract.require(lambda span: span > 0.0)
def pure_mi_2peak(x: float, delta: float, span: float) -> float:
    """
    Compute the square-pointer information Ĩ_L(x) = Ĩ_0(x) · min(N/Δ, 1) of a pure two-peak state.

    :param x: coherence (x component of the Bloch vector)
    :param delta: width of the square window
    :param span: distance N between the peaks
    :return: information in bits
    """
    return zero_width_mi_2peak(x) * min(span / delta, 1.0)


@icontract.require(lambda b: b > 0.0)
@icontract.ensure(lambda result: 0.0 < result <= 1.0)
def inverse_pure_mi_2peak(b: float) -> float:
    """
    Find the coherence r = Ĩ_0⁻¹(b) below which a pure two-peak state cannot reveal ``b`` bits.

    :param b: bits; values of at least 1 give r = 1
    :return: r in (0, 1]
    """
    if b >= 1.0:
        return 1.0

    return float(scipy.optimize.bisect(lambda x: zero_width_mi_2peak(x) - b, 1e-12, 1.0, xtol=1e-10, rtol=1e-14))


@icontract.require(lambda x: -1.0 - 1e-12 <= x <= 1.0 + 1e-12)
@icontract.require(lambda b: b > 0.0)
@icontract.require(lambda span: span > 0.0)
@icontract.ensure(lambda result: result >= 0.0)
def pure_mic_2peak(x: float, b: float, span: float) -> float:
    """
    Compute the square-pointer size of a pure two-peak state, N Ĩ_0(x)/b if Ĩ_0(x) > b and 0 otherwise.

    >>> pure_mic_2peak(x=1.0, b=0.5, span=1.0)
    2.0
    """
    information = zero_width_mi_2peak(x)
    if information > b:
        return span * information / b

    return 0.0


@icontract.require(lambda r: 0.0 < r < 1.0)
@icontract.require(lambda x_rho, z_rho: x_rho * x_rho + z_rho * z_rho <= 1.0 + 1e-12)
@icontract.ensure(lambda x_rho, result: abs(x_rho) - 1e-9 <= result <= 1.0)
def nx_max(x_rho: float, z_rho: float, r: float) -> float:
    """
    Compute the largest coherence n_x of the outer pair of a four-element ensemble that still reproduces the state.

    The ensemble mixes the two pure states with x = r and the two pure states with x = n_x. The bound is where the
    line through the upper state at x = r and the state meets the circle again.

    :param x_rho: coherence of the state
    :param z_rho: population imbalance of the state (only its magnitude matters)
    :param r: coherence Ĩ_0⁻¹(b) of the inner pair
    :return: n_x^max in [|x_ρ|, 1]
    """
    x = abs(x_rho)
    z = abs(z_rho)

    if z <= (1.0 - x) * math.sqrt((1.0 + r) / (1.0 - r)):
        return 1.0

    s = math.sqrt(1.0 - r * r)
    x2 = x * x
    z2 = z * z

    numerator = (2.0 * r * r * x * (x2 + z2 + 1.0) + r * (2.0 * x2 * (s * z - 3.0) + (z2 - 1.0) *
                                                        (2.0 * s * z + z2 + 1.0) - x2 * x2) - 2.0 * x *
                 (x2 * (s * z - 1.0) + (z2 - 1.0) * (s * z + 1.0)))

    denominator = (2.0 * z2 * (2.0 * r * r - 2.0 * r * x + x2 - 1.0) + (-2.0 * r * x + x2 + 1.0)**2 + z2 * z2)

    return min(max(numerator / denominator, x), 1.0)


def _roof_objective(x: float, r: float, b: float, span: float) -> Callable[[float], float]:
    """Build the average size (x − r)/(n − r) · MIC(n) of the four-element ensembles."""

    def objective(n: float) -> float:
        return (x - r) / (n - r) * pure_mic_2peak(x=min(n, 1.0), b=b, span=span)

    return objective


def _optimal_outer_coherence(state: BlochStateXZ, b: float) -> Tuple[float, float]:
    """
    Minimize the average size of the four-element ensembles over the outer coherence.

    :return: the minimizing n_x and the minimal average size
    """
    r = inverse_pure_mi_2peak(b)
    x = abs(state.x_rho)

    upper = nx_max(x_rho=x, z_rho=state.z_rho, r=r)
    objective = _roof_objective(x=x, r=r, b=b, span=state.span)

    candidates = [(objective(x), x), (objective(upper), upper)]
    if upper - x > 1e-8:
        middle = 0.5 * (x + upper)
        candidates.append((objective(middle), middle))

        for start, end in [(x, middle), (middle, upper)]:
            found = scipy.optimize.minimize_scalar(objective, bounds=(start, end), method='bounded',
                                                   options={'xatol': 1e-8})
            candidates.append((float(found.fun), float(found.x)))

    value, n_x = min(candidates)
    return n_x, value


@icontract.require(lambda b: b > 0.0)
@icontract.ensure(lambda state, b, result: result <= pure_mic_2peak(x=state.x_rho, b=b, span=state.span) + 1e-9)
def roof_mic_2peak(state: BlochStateXZ, b: float) -> float:
    """
    Compute the convex roof of the square-pointer size of a two-peak qubit state.

    :param state: state in the XZ plane
    :param b: bits
    :return: the smallest average size over the decompositions of the state, 0 if |x_ρ| ≤ Ĩ_0⁻¹(b)
    """
    r = inverse_pure_mi_2peak(b)
    if abs(state.x_rho) <= r:
        return 0.0

    _, value = _optimal_outer_coherence(state=state, b=b)
    return max(value, 0.0)


def vertical_decomposition(state: BlochStateXZ) -> EnsembleDecomposition:
    """
    Decompose the state into the two pure states with the same coherence x_ρ.

    :param state: state in the XZ plane
    :return: the (at most) two-element decomposition
    """
    x = state.x_rho
    root = math.sqrt(max(0.0, 1.0 - x * x))
    if root <= 1e-15:
        return EnsembleDecomposition(weights=[1.0], states=[_bloch_pure_state(x=x, z=0.0).density_matrix()])

    upper_weight = min(max(0.5 * (1.0 + state.z_rho / root), 0.0), 1.0)
    return EnsembleDecomposition(
        weights=[upper_weight, 1.0 - upper_weight],
        states=[_bloch_pure_state(x=x, z=root).density_matrix(),
                _bloch_pure_state(x=x, z=-root).density_matrix()])


@icontract.require(lambda b: b > 0.0)
def optimal_ensemble_2peak(state: BlochStateXZ, b: float) -> EnsembleDecomposition:
    """
    Construct a decomposition whose average size attains :func:`roof_mic_2peak`.

    The decomposition mixes the pure states at x = ±r with those at x = n_x (the minimizer); for |x_ρ| ≤ r the
    vertical decomposition, whose elements have zero size, is returned.

    :param state: state in the XZ plane
    :param b: bits
    :return: at most four pure states
    """
    r = inverse_pure_mi_2peak(b)
    x = abs(state.x_rho)
    if x <= r:
        return vertical_decomposition(state)

    n_x, _ = _optimal_outer_coherence(state=state, b=b)
    if n_x - x <= 1e-12:
        return vertical_decomposition(state)

    outer_weight = (x - r) / (n_x - r)

    inner_root = math.sqrt(1.0 - r * r)
    outer_root = math.sqrt(max(0.0, 1.0 - n_x * n_x))
    reach = (1.0 - outer_weight) * inner_root + outer_weight * outer_root
    tilt = 0.0 if reach <= 0.0 else min(max(state.z_rho / reach, -1.0), 1.0)

    sign = 1.0 if state.x_rho >= 0.0 else -1.0
    weights = [(1.0 - outer_weight) * 0.5 * (1.0 + tilt), (1.0 - outer_weight) * 0.5 * (1.0 - tilt),
               outer_weight * 0.5 * (1.0 + tilt), outer_weight * 0.5 * (1.0 - tilt)]
    states = [
        _bloch_pure_state(x=sign * r, z=inner_root).density_matrix(),
        _bloch_pure_state(x=sign * r, z=-inner_root).density_matrix(),
        _bloch_pure_state(x=sign * n_x, z=outer_root).density_matrix(),
        _bloch_pure_state(x=sign * n_x, z=-outer_root).density_matrix()
    ]

    kept = [(weight, element) for weight, element in zip(weights, states) if weight > 0.0]
    return EnsembleDecomposition(weights=[weight for weight, _ in kept], states=[element for _, element in kept])


##
# General states
##


def _matrix_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Compute the square root of a Hermitian positive semi-definite matrix."""
    eigenvalues, vectors = np.linalg.eigh(matrix)
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (vectors * roots[np.newaxis, :]) @ vectors.conj().T


def rho_distortion_ensemble(rho: spectra.DensityMatrix, povm: Sequence[np.ndarray]) -> EnsembleDecomposition:
    """
    Map a POVM {E_i} to the decomposition ρ = Σ tr(ρE_i) · √ρ E_i √ρ / tr(ρE_i).

    Outcomes of zero probability are dropped. Rank-one elements give pure states.

    :param rho: state to decompose
    :param povm: positive semi-definite elements summing to the identity
    :return: the decomposition
    :raise ValueError: if an element is not Hermitian positive semi-definite or the elements do not sum to identity
    """
    dimension = rho.dimension
    total = np.zeros((dimension, dimension), dtype=complex)

    elements = []  # type: List[np.ndarray]
    for i, element in enumerate(povm):
        matrix = np.array(element, dtype=complex)
        if matrix.shape != (dimension, dimension):
            raise ValueError("Expected the POVM element {} of shape {}, but got: {}".format(
                i, (dimension, dimension), matrix.shape))

        if float(np.max(np.abs(matrix - matrix.conj().T))) > numerics.EIGENVALUE_THRESHOLD:
            raise ValueError("Expected the POVM element {} to be Hermitian".format(i))

        smallest = float(np.linalg.eigvalsh(matrix)[0])
        if smallest < -numerics.EIGENVALUE_THRESHOLD:
            raise ValueError("Expected the POVM element {} to be positive semi-definite, but got an eigenvalue: {!r}".
                             format(i, smallest))

        total = total + matrix
        elements.append(matrix)

    deviation = float(np.max(np.abs(total - np.eye(dimension))))
    if deviation > numerics.EIGENVALUE_THRESHOLD:
        raise ValueError("Expected the POVM elements to sum to the identity, but the deviation is: {!r}".format(
            deviation))

    root = _matrix_sqrt(rho.entries)

    weights = []  # type: List[float]
    states = []  # type: List[spectra.DensityMatrix]
    for matrix in elements:
        weight = float(np.trace(rho.entries @ matrix).real)
        if weight <= 1e-14:
            continue

        distorted = root @ matrix @ root / weight
        distorted = 0.5 * (distorted + distorted.conj().T)
        distorted = distorted / np.trace(distorted).real
        weights.append(weight)
        states.append(spectra.DensityMatrix(distorted))

    weights_array = np.array(weights) / np.sum(weights)
    return EnsembleDecomposition(weights=weights_array, states=states)


def _pure_state_mi(populations: np.ndarray, spectrum: spectra.ObservableSpectrum,
                   model: pointers.PointerModel) -> float:
    """Compute the information of a pure state with the given populations."""
    clipped = np.clip(populations, 0.0, None)
    ensemble = spectra.BranchEnsemble(weights=clipped / np.sum(clipped), spectrum=spectrum)
    return mutual_info.mutual_information(ens=ensemble, model=model).bits


def _is_incoherent(rho: spectra.DensityMatrix) -> bool:
    """Check whether the state is diagonal in the eigenbasis of the observable."""
    off_diagonal = rho.entries - np.diag(np.diag(rho.entries))
    return bool(np.max(np.abs(off_diagonal)) <= 1e-12)


class RoofSearch:
    """
    Represent the outcome of a search for the convex roof of the mutual information.

    :ivar bits: the smallest average information found (an upper bound on the roof unless ``exact``)
    :ivar ensemble: decomposition attaining ``bits``
    :ivar multistarts: number of independent starts of the local descent (0 on analytic paths)
    :ivar evaluations: number of objective evaluations over all starts
    :ivar exact: True if the value is the exact roof (pure, incoherent or qubit states)
    """

    def __init__(self, bits: float, ensemble: Optional[EnsembleDecomposition], multistarts: int, evaluations: int,
                 exact: bool) -> None:
        """Initialize with the given values."""
        # pylint: disable=too-many-arguments
        self.bits = bits
        self.ensemble = ensemble
        self.multistarts = multistarts
        self.evaluations = evaluations
        self.exact = exact

    def __repr__(self) -> str:
        """Represent the search outcome for debugging."""
        return "RoofSearch(bits={!r}, multistarts={}, evaluations={}, exact={})".format(
            self.bits, self.multistarts, self.evaluations, self.exact)


def _povm_vectors(params: np.ndarray, dimension: int, count: int) -> Optional[np.ndarray]:
    """
    Map the real parameters to the vectors v_i of a rank-one POVM {|v_i⟩⟨v_i|}.

    Arbitrary vectors w_i are orthonormalized jointly as v_i = S^{-1/2} w_i with S = Σ |w_i⟩⟨w_i|.

    :return: matrix with the vectors v_i as columns, or None if the vectors do not span the space
    """
    half = dimension * count
    vectors = (params[:half] + 1j * params[half:]).reshape(dimension, count)

    frame = vectors @ vectors.conj().T
    eigenvalues, basis = np.linalg.eigh(frame)
    if eigenvalues[0] <= 1e-12 * max(1.0, eigenvalues[-1]):
        return None

    inverse_root = (basis / np.sqrt(eigenvalues)[np.newaxis, :]) @ basis.conj().T
    return inverse_root @ vectors


class _SearchProblem:
    """Hold what the local descents of a roof search share."""

    def __init__(self, rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum,
                 model: pointers.PointerModel) -> None:
        self.rho = rho
        self.spectrum = spectrum
        self.model = model
        self.root = _matrix_sqrt(rho.entries)
        self.dimension = rho.dimension
        self.count = rho.dimension * rho.dimension

    def distort(self, params: np.ndarray) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """Compute the weights and the (normalized) state vectors of the ρ-distortion."""
        vectors = _povm_vectors(params=params, dimension=self.dimension, count=self.count)
        if vectors is None:
            return None

        distorted = self.root @ vectors
        weights = np.sum(np.abs(distorted)**2, axis=0)
        return weights, distorted

    def objective(self, params: np.ndarray) -> float:
        """Compute the average information of the decomposition encoded by the parameters."""
        outcome = self.distort(params)
        if outcome is None:
            return math.inf

        weights, distorted = outcome
        total = 0.0
        for i in range(self.count):
            if weights[i] <= 1e-14:
                continue
            populations = np.abs(distorted[:, i])**2 / weights[i]
            total += weights[i] * _pure_state_mi(populations=populations, spectrum=self.spectrum, model=self.model)

        return total

    def ensemble(self, params: np.ndarray) -> EnsembleDecomposition:
        """Build the decomposition encoded by the parameters."""
        outcome = self.distort(params)
        assert outcome is not None, "Expected the parameters of a found minimum to span the space"

        weights, distorted = outcome
        kept = [i for i in range(self.count) if weights[i] > 1e-14]
        states = [spectra.PureState.normalized(distorted[:, i]).density_matrix() for i in kept]
        kept_weights = weights[kept]
        return EnsembleDecomposition(weights=kept_weights / np.sum(kept_weights), states=states)

    def spectral_start(self) -> np.ndarray:
        """Encode the eigendecomposition of the state, padded with zero vectors."""
        _, basis = np.linalg.eigh(self.rho.entries)
        vectors = np.zeros((self.dimension, self.count), dtype=complex)
        vectors[:, :self.dimension] = basis
        flat = vectors.reshape(-1)
        return np.concatenate([flat.real, flat.imag])


def search_roof_mi(rho: spectra.DensityMatrix,
                   spectrum: spectra.ObservableSpectrum,
                   model: pointers.PointerModel,
                   multistarts: int = 32,
                   seed: int = 0,
                   max_evaluations: int = 4000,
                   workers: int = 1) -> RoofSearch:
    """
    Search for the convex roof of the mutual information by local descents from random rank-one POVMs.

    Every POVM has d² elements. The first start is the eigendecomposition of the state; the others are drawn from
    independent generators spawned from ``seed``. The starts may run in parallel; the result is the minimum over
    the starts (ties resolved by start index), hence independent of completion order.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param model: pointer model
    :param multistarts: number of starts
    :param seed: seed of the random starts
    :param max_evaluations: budget of objective evaluations per start
    :param workers: number of worker threads
    :return: the best decomposition found (an upper bound on the roof)
    :raise NotImplementedError: if the dimension exceeds :data:`MAX_SEARCH_DIMENSION`
    """
    # pylint: disable=too-many-arguments,too-many-locals
    if rho.dimension != len(spectrum):
        raise ValueError("Expected the density matrix of dimension {} to match the number of eigenvalues {}".format(
            rho.dimension, len(spectrum)))

    if rho.dimension > MAX_SEARCH_DIMENSION:
        raise NotImplementedError("The convex-roof search is supported up to dimension {}, but got: {}".format(
            MAX_SEARCH_DIMENSION, rho.dimension))

    if multistarts < 1:
        raise ValueError("Expected at least one start, but got: {}".format(multistarts))

    problem = _SearchProblem(rho=rho, spectrum=spectrum, model=model)
    generators = [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(multistarts)]

    def descend(index: int) -> Tuple[float, int, np.ndarray, int]:
        if index == 0:
            start = problem.spectral_start()
        else:
            start = generators[index].normal(size=2 * problem.dimension * problem.count)

        found = scipy.optimize.minimize(
            problem.objective,
            start,
            method='Nelder-Mead',
            options={
                'maxfev': max_evaluations,
                'xatol': 1e-7,
                'fatol': 1e-10,
                'adaptive': True
            })

        start_value = problem.objective(start)
        if start_value < found.fun:
            return start_value, index, start, int(found.nfev) + 1

        return float(found.fun), index, np.asarray(found.x), int(found.nfev) + 1

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(descend, range(multistarts)))
    else:
        outcomes = [descend(index) for index in range(multistarts)]

    best_value, best_index, best_params, _ = min(outcomes, key=lambda outcome: (outcome[0], outcome[1]))
    evaluations = sum(outcome[3] for outcome in outcomes)

    LOGGER.debug("Roof search over %d starts: best %g bits from start %d (%d evaluations)", multistarts, best_value,
                 best_index, evaluations)

    return RoofSearch(bits=max(best_value, 0.0), ensemble=problem.ensemble(best_params), multistarts=multistarts,
                      evaluations=evaluations, exact=False)


def _qubit_roof(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum,
                model: pointers.PointerModel) -> RoofSearch:
    """Compute the roof of a qubit state from its vertical decomposition."""
    span = spectrum.span
    state = BlochStateXZ.from_density_matrix(rho=rho, span=span)
    ensemble = vertical_decomposition(state)

    if model.kind == pointers.PointerKind.SQUARE:
        bits = pure_mi_2peak(x=state.x_rho, delta=model.delta, span=span)
    else:
        root = math.sqrt(max(0.0, 1.0 - state.x_rho * state.x_rho))
        bits = _pure_state_mi(
            populations=np.array([0.5 * (1.0 + root), 0.5 * (1.0 - root)]), spectrum=spectrum, model=model)

    return RoofSearch(bits=bits, ensemble=ensemble, multistarts=0, evaluations=0, exact=True)


def direct_roof(rho: spectra.DensityMatrix,
                spectrum: spectra.ObservableSpectrum,
                model: pointers.PointerModel,
                multistarts: int = 32,
                seed: int = 0,
                search_qubits: bool = False,
                workers: int = 1) -> RoofSearch:
    """
    Compute the convex roof of the mutual information together with the decomposition that attains it.

    Pure, incoherent and qubit states are handled exactly. For qubits the state is rotated into the XZ plane and the
    vertical decomposition is used; with ``search_qubits`` the numerical search is run as well and the smaller
    value is kept. Other states up to dimension :data:`MAX_SEARCH_DIMENSION` are searched numerically.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param model: pointer model
    :param multistarts: number of starts of the numerical search
    :param seed: seed of the numerical search
    :param search_qubits: if set, also search numerically for qubits
    :param workers: number of worker threads of the numerical search
    :return: the roof value and its decomposition
    :raise ValueError: on dimension mismatch
    :raise NotImplementedError: if a numerical search would be needed above :data:`MAX_SEARCH_DIMENSION`
    """
    # pylint: disable=too-many-arguments
    if rho.dimension != len(spectrum):
        raise ValueError("Expected the density matrix of dimension {} to match the number of eigenvalues {}".format(
            rho.dimension, len(spectrum)))

    if _is_incoherent(rho):
        ensemble = EnsembleDecomposition(
            weights=rho.diagonal() / np.sum(rho.diagonal()),
            states=[spectra.PureState(np.eye(rho.dimension)[i]).density_matrix() for i in range(rho.dimension)])
        return RoofSearch(bits=0.0, ensemble=ensemble, multistarts=0, evaluations=0, exact=True)

    if rho.is_pure():
        _, vectors = np.linalg.eigh(rho.entries)
        vector = vectors[:, -1]
        bits = _pure_state_mi(populations=np.abs(vector)**2, spectrum=spectrum, model=model)
        return RoofSearch(
            bits=bits,
            ensemble=EnsembleDecomposition(
                weights=[1.0], states=[spectra.PureState.normalized(vector).density_matrix()]),
            multistarts=0,
            evaluations=0,
            exact=True)

    if rho.dimension == 2:
        analytic = _qubit_roof(rho=rho, spectrum=spectrum, model=model)
        if not search_qubits:
            return analytic

        searched = search_roof_mi(
            rho=rho, spectrum=spectrum, model=model, multistarts=multistarts, seed=seed, workers=workers)
        return searched if searched.bits < analytic.bits else analytic

    return search_roof_mi(rho=rho, spectrum=spectrum, model=model, multistarts=multistarts, seed=seed, workers=workers)


def direct_roof_mi(rho: spectra.DensityMatrix,
                   spectrum: spectra.ObservableSpectrum,
                   model: pointers.PointerModel,
                   multistarts: int = 32,
                   seed: int = 0,
                   workers: int = 1) -> float:
    """
    Compute the convex roof min Σ q_k I_Δ(|Ψ_k⟩) of the mutual information over the decompositions of the state.

    Outside pure, incoherent and qubit states the value is the best one found by :func:`search_roof_mi`, an upper
    bound on the roof.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param model: pointer model
    :param multistarts: number of starts of the numerical search
    :param seed: seed of the numerical search
    :param workers: number of worker threads of the numerical search
    :return: information in bits
    """
    # pylint: disable=too-many-arguments
    return direct_roof(
        rho=rho, spectrum=spectrum, model=model, multistarts=multistarts, seed=seed, workers=workers).bits


def mic_prime(rho: spectra.DensityMatrix,
              spectrum: spectra.ObservableSpectrum,
              kind: pointers.PointerKind,
              b: float,
              multistarts: int = 32,
              seed: int = 0,
              workers: int = 1) -> float:
    """
    Find the largest pointer width for which the roof of the mutual information still reaches ``b`` bits.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :param kind: shape of the pointer
    :param b: bits
    :param multistarts: number of starts of the numerical roof search (dimensions 3 and 4)
    :param seed: seed of the numerical roof search
    :param workers: number of worker threads of the numerical roof search
    :return: Δ*, or 0 if even the sharpest pointer does not reach ``b``
    :raise ValueError: if ``b`` is not positive or on dimension mismatch
    """
    # pylint: disable=too-many-arguments
    if not b > 0.0:
        raise ValueError("Expected a positive number of bits b, but got: {!r}".format(b))

    if rho.dimension != len(spectrum):
        raise ValueError("Expected the density matrix of dimension {} to match the number of eigenvalues {}".format(
            rho.dimension, len(spectrum)))

    if rho.dimension == 1 or _is_incoherent(rho):
        return 0.0

    def condition(delta: float) -> bool:
        bits = direct_roof_mi(
            rho=rho,
            spectrum=spectrum,
            model=pointers.PointerModel(kind=kind, delta=delta),
            multistarts=multistarts,
            seed=seed,
            workers=workers)
        return bits + numerics.BITS_TOLERANCE >= b

    return numerics.largest_satisfying(condition=condition, scale=spectrum.scale).value


def quantum_fisher_information(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum) -> float:
    """
    Compute the quantum Fisher information F = 2 Σ (λ_i − λ_j)²/(λ_i + λ_j) |⟨i|A|j⟩|² of the state for A.

    :param rho: state
    :param spectrum: eigenvalues of the observable
    :return: F ≥ 0; four times the variance for pure states
    :raise ValueError: on dimension mismatch
    """
    if rho.dimension != len(spectrum):
        raise ValueError("Expected the density matrix of dimension {} to match the number of eigenvalues {}".format(
            rho.dimension, len(spectrum)))

    eigenvalues, vectors = np.linalg.eigh(rho.entries)
    eigenvalues = np.clip(eigenvalues, 0.0, None)

    observable = vectors.conj().T @ spectrum.operator() @ vectors

    sums = eigenvalues[:, np.newaxis] + eigenvalues[np.newaxis, :]
    differences = eigenvalues[:, np.newaxis] - eigenvalues[np.newaxis, :]

    mask = sums > 1e-12
    terms = np.zeros_like(sums)
    terms[mask] = differences[mask]**2 / sums[mask] * np.abs(observable[mask])**2

    return max(0.0, 2.0 * float(np.sum(terms)))


@icontract.require(lambda b: b > 0.0)
def qfi_size_bound(rho: spectra.DensityMatrix, spectrum: spectra.ObservableSpectrum, b: float) -> float:
    """
    Bound the Gaussian-pointer MIC' from above by √(F/((8 ln 2) b)).

    The bound becomes tight as b → 0.
    """
    return math.sqrt(quantum_fisher_information(rho=rho, spectrum=spectrum) / (8.0 * _LN2 * b))
