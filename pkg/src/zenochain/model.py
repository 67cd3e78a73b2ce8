"""
Hamiltonians of the measured chain.

The chain has `L` sites with on-site energy `ε` on site 0 and hopping
energy `γ` between neighbours. Site 0 is coupled to an `N`-state
apparatus through `g |0⟩⟨0| ⊗ B̂`, where `B̂` is diagonal in the
conjugate basis `{|B_k⟩}` and the apparatus is stored in its pointer
basis `{|A_j⟩}`. The two bases are related by the discrete Fourier
transform

    |B_k⟩ = N^(-1/2) Σ_j exp(2πi jk/N) |A_j⟩

which for `N = 2` is the Hadamard transform.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from zenochain.errors import InvalidParams
from zenochain.linalg import ComplexMatrix, StateVector, kron, hermitian_eig, spectral_propagator, projector


@dataclass(frozen=True)
class ChainParams:
    """Tight-binding chain parameters."""

    sites: int
    """Total number of sites `L`."""
    epsilon: float = 0.0
    """On-site energy of site 0, in units of `gamma`."""
    gamma: float = 1.0
    """Hopping energy."""

    def __post_init__(self):
        if self.sites < 1:
            raise InvalidParams('chain needs at least one site, got sites={sites}', sites=self.sites)
        if not self.gamma > 0:
            raise InvalidParams('gamma must be positive, got gamma={gamma}', gamma=self.gamma)


@dataclass(frozen=True)
class ApparatusParams:
    """Apparatus parameters."""

    g: float
    """Coupling energy during a measurement."""
    delta: float = 0.0
    """Shift of the spectrum of `B̂`. For `delta = 1/2` the spectrum is
    `{0, …, N - 1}`."""
    dim: int = 2
    """Dimension `N` of the apparatus Hilbert space."""

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidParams('apparatus dimension must be at least 2, got dim={dim}', dim=self.dim)
        if self.g < 0:
            raise InvalidParams('coupling must not be negative, got g={g}', g=self.g)

    @property
    def measurement_time(self) -> float:
        return measurement_time(self.g, self.dim)


def build_chain_hamiltonian(p: ChainParams) -> ComplexMatrix:
    """Chain Hamiltonian `ε|0⟩⟨0| - γ Σ (|n⟩⟨n+1| + |n+1⟩⟨n|)`.

    ```pycon
    >>> build_chain_hamiltonian(ChainParams(sites=3, epsilon=2)).real.tolist()
    [[2.0, -1.0, 0.0], [-1.0, 0.0, -1.0], [0.0, -1.0, 0.0]]

    ```
    """
    hopping = np.full(p.sites - 1, -p.gamma)
    hamiltonian = np.diag(hopping, 1) + np.diag(hopping, -1)
    hamiltonian[0, 0] = p.epsilon
    return hamiltonian.astype(np.complex128)


def fourier_matrix(n: int) -> ComplexMatrix:
    """Basis change whose column `k` holds the pointer-basis amplitudes of `|B_k⟩`."""
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing='ij')
    return np.exp(2j * np.pi * j * k / n) / math.sqrt(n)


def build_apparatus_operator_N(n: int) -> ComplexMatrix:
    """Apparatus operator `B̂ = Σ k |B_k⟩⟨B_k|` in the pointer basis."""
    if n < 2:
        raise InvalidParams('apparatus dimension must be at least 2, got N={n}', n=n)
    f = fourier_matrix(n)
    operator = (f * np.arange(n)) @ f.conj().T
    # exactly Hermitian regardless of rounding in the basis change
    return (operator + operator.conj().T) / 2


def build_apparatus_operator_2(delta: float) -> ComplexMatrix:
    """Two-state apparatus operator `B̂ = δ𝟙 - ½|B₀⟩⟨B₀| + ½|B₁⟩⟨B₁|`, which
    in the pointer basis is `δ𝟙 - ½σ_x`.

    ```pycon
    >>> build_apparatus_operator_2(0).real.tolist()
    [[0.0, -0.5], [-0.5, 0.0]]

    ```
    """
    return np.array([[delta, -0.5], [-0.5, delta]], dtype=np.complex128)


def build_apparatus_operator(p: ApparatusParams) -> ComplexMatrix:
    """Shifted apparatus operator for any dimension. The shift is chosen so
    that `delta = 1/2` gives the unshifted spectrum `{0, …, N - 1}`, which
    for `N = 2` coincides with `build_apparatus_operator_2`."""
    if p.dim == 2:
        return build_apparatus_operator_2(p.delta)
    return build_apparatus_operator_N(p.dim) + (p.delta - 0.5) * np.eye(p.dim)


def build_interaction_hamiltonian(n: int) -> ComplexMatrix:
    """Interaction `ŝ ⊗ B̂` between an `n`-level system with observable
    `ŝ = Σ k|s_k⟩⟨s_k|` and an `n`-state apparatus, without any system
    dynamics."""
    return kron(np.diag(np.arange(n)), build_apparatus_operator_N(n))


def measurement_time(g: float, n: int = 2) -> float:
    """Duration `2π/(gN)` of a measurement that maps `|s_j⟩|A₀⟩` to `|s_j⟩|A_j⟩`.

    ```pycon
    >>> measurement_time(math.pi)
    1.0

    ```
    """
    if not g > 0:
        raise InvalidParams('coupling must be positive, got g={g}', g=g)
    return 2 * math.pi / (g * n)


def coupling_for(t_m: float, n: int = 2) -> float:
    """Coupling energy for which a measurement lasts `t_m`; the inverse of
    `measurement_time`."""
    if not t_m > 0:
        raise InvalidParams('measurement time must be positive, got t_m={t_m}', t_m=t_m)
    return 2 * math.pi / (t_m * n)


def hadamard_pair() -> tuple[StateVector, StateVector]:
    """Pointer-basis amplitudes of `|B₀⟩` and `|B₁⟩`."""
    f = fourier_matrix(2)
    return f[:, 0].copy(), f[:, 1].copy()


def pointer_state(dim: int, j: int = 0) -> StateVector:
    state = np.zeros(dim, dtype=np.complex128)
    state[j] = 1.0
    return state


class CompositeModel:
    """Chain and apparatus with the Hamiltonians and propagators of the two
    kinds of segments: free evolution of the chain alone, and measurement
    with the apparatus coupled to site 0.

    Eigendecompositions are computed once per model and reused, so a model
    may be shared between threads once `warm()` has been called."""

    def __init__(self, chain: ChainParams, apparatus: ApparatusParams):
        self.chain = chain
        self.apparatus = apparatus
        self._segment_propagators: dict[tuple[str, float], ComplexMatrix] = {}

    @property
    def sites(self) -> int:
        return self.chain.sites

    @property
    def apparatus_dim(self) -> int:
        return self.apparatus.dim

    @property
    def dim(self) -> int:
        """Dimension `L·N` of the composite space."""
        return self.sites * self.apparatus_dim

    @cached_property
    def free_hamiltonian(self) -> ComplexMatrix:
        return build_chain_hamiltonian(self.chain)

    @cached_property
    def total_hamiltonian(self) -> ComplexMatrix:
        """`H_c ⊗ 𝟙 + g |0⟩⟨0| ⊗ B̂`, the generator of a measurement segment."""
        identity = np.eye(self.apparatus_dim)
        coupling = kron(projector(self.sites, 0), build_apparatus_operator(self.apparatus))
        return kron(self.free_hamiltonian, identity) + self.apparatus.g * coupling

    @cached_property
    def free_spectrum(self) -> tuple[NDArray[np.float64], ComplexMatrix]:
        return hermitian_eig(self.free_hamiltonian)

    @cached_property
    def total_spectrum(self) -> tuple[NDArray[np.float64], ComplexMatrix]:
        return hermitian_eig(self.total_hamiltonian)

    @property
    def measurement_time(self) -> float:
        return self.apparatus.measurement_time

    def free_propagator(self, t: float) -> ComplexMatrix:
        return spectral_propagator(*self.free_spectrum, t)

    def measurement_propagator(self, t: float) -> ComplexMatrix:
        return spectral_propagator(*self.total_spectrum, t)

    def segment_propagator(self, kind: str, t: float) -> ComplexMatrix:
        """Cached propagator for a whole segment of the given `kind`
        (`'M'` or `'F'`) and duration."""
        key = (kind, t)
        if key not in self._segment_propagators:
            if kind == 'M':
                self._segment_propagators[key] = self.measurement_propagator(t)
            else:
                self._segment_propagators[key] = self.free_propagator(t)
        return self._segment_propagators[key]

    def warm(self) -> 'CompositeModel':
        """Compute both eigendecompositions now."""
        _ = self.free_spectrum, self.total_spectrum
        return self


def build_total_hamiltonian(chain: ChainParams, apparatus: ApparatusParams) -> CompositeModel:
    """Build the composite model; its `total_hamiltonian` is the generator of
    a measurement segment."""
    return CompositeModel(chain, apparatus)
