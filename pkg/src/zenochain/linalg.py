"""
Dense complex linear algebra for small composite systems.

All matrices are `numpy` arrays of `complex128`. Composite
system-apparatus spaces use system-major ordering: the basis index of
chain site `n` and apparatus pointer state `A_j` is `n * N_A + j`, so
that tracing out the apparatus is a sum over contiguous blocks.

Natural units are used throughout: ħ = 1, energies in units of the
hopping energy γ and times in units of ħ/γ.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from zenochain.errors import InvalidMatrix, InvalidParams, DimensionError

ComplexMatrix = NDArray[np.complex128]
"""Square or rectangular complex matrix."""
StateVector = NDArray[np.complex128]
"""One-dimensional array of complex amplitudes."""
DensityMatrix = NDArray[np.complex128]
"""Hermitian, unit-trace, positive semidefinite square matrix."""

ALGEBRA_TOLERANCE = 1e-12
"""Tolerance for algebraic identities (Hermiticity, trace, unitarity)."""
POSITIVITY_TOLERANCE = 1e-10
"""Largest magnitude of a negative eigenvalue still accepted as zero."""


def as_matrix(entries: ArrayLike) -> ComplexMatrix:
    """Convert `entries` to a two-dimensional complex array.

    ```pycon
    >>> as_matrix([[0, 1], [1, 0]]).dtype
    dtype('complex128')

    ```
    """
    matrix = np.asarray(entries, dtype=np.complex128)
    if matrix.ndim != 2:
        raise InvalidMatrix(expected='two-dimensional')
    return matrix


def hermiticity_error(matrix: ComplexMatrix) -> float:
    """Largest entrywise deviation `max |H - H†|`."""
    return float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0))


def check_hermitian(matrix: ArrayLike) -> ComplexMatrix:
    matrix = as_matrix(matrix)
    rows, cols = matrix.shape
    if rows != cols:
        raise InvalidMatrix(expected='square, shape is {shape}', shape=matrix.shape)
    if hermiticity_error(matrix) > ALGEBRA_TOLERANCE:
        raise InvalidMatrix(expected='Hermitian')
    return matrix


def hermitian_eig(matrix: ArrayLike) -> tuple[NDArray[np.float64], ComplexMatrix]:
    """Eigendecomposition of a Hermitian matrix.

    Returns the eigenvalues in ascending order and the unitary matrix `V`
    whose columns are the corresponding eigenvectors, so that
    `H @ V == V @ diag(eigenvalues)`.

    ```pycon
    >>> eigenvalues, _ = hermitian_eig([[0, 1], [1, 0]])
    >>> eigenvalues.round(12).tolist()
    [-1.0, 1.0]

    ```
    """
    eigenvalues, eigenvectors = np.linalg.eigh(check_hermitian(matrix))
    return eigenvalues, eigenvectors


def spectral_propagator(eigenvalues: NDArray[np.float64], eigenvectors: ComplexMatrix, t: float) -> ComplexMatrix:
    """Time evolution operator `exp(-i H t)` from the eigendecomposition of `H`."""
    phases = np.exp(-1j * eigenvalues * t)
    return (eigenvectors * phases) @ eigenvectors.conj().T


def unitary_from_hamiltonian(hamiltonian: ArrayLike, t: float) -> ComplexMatrix:
    """Time evolution operator `U(t) = exp(-i H t)` computed spectrally.

    ```pycon
    >>> np.allclose(unitary_from_hamiltonian(np.zeros((2, 2)), 3.0), np.eye(2))
    True

    ```
    """
    if not np.isfinite(t):
        raise InvalidParams('evolution time must be finite, got t={t}', t=t)
    return spectral_propagator(*hermitian_eig(hamiltonian), t)


def kron(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    """Tensor product `A ⊗ B` in system-major ordering:
    `(A ⊗ B)[i * rB + k, j * cB + l] = A[i, j] * B[k, l]`."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace_apparatus(rho: ArrayLike, system_dim: int, apparatus_dim: int) -> DensityMatrix:
    """Trace out the apparatus factor of a composite density matrix.

    ```pycon
    >>> bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    >>> partial_trace_apparatus(np.outer(bell, bell), 2, 2).real.round(12).tolist()
    [[0.5, 0.0], [0.0, 0.5]]

    ```
    """
    rho = as_matrix(rho)
    expected = system_dim * apparatus_dim
    if rho.shape != (expected, expected):
        raise DimensionError(expected=(expected, expected), actual=rho.shape)
    blocks = rho.reshape(system_dim, apparatus_dim, system_dim, apparatus_dim)
    return np.einsum('iaja->ij', blocks)


def trace_distance(rho: ArrayLike, sigma: ArrayLike) -> float:
    """Trace distance `T = ½ Σ |eigenvalues(ρ - σ)|`, a number in `[0, 1]` for
    density matrices."""
    rho = as_matrix(rho)
    sigma = as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(expected=rho.shape, actual=sigma.shape)
    difference = rho - sigma
    # symmetrize away rounding noise before the Hermitian eigensolver
    difference = (difference + difference.conj().T) / 2
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(difference))))


def projector(dim: int, index: int) -> DensityMatrix:
    """Pure-state density matrix `|index⟩⟨index|` of dimension `dim`."""
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[index, index] = 1.0
    return rho


def pure_state(amplitudes: ArrayLike) -> DensityMatrix:
    """Density matrix `|ψ⟩⟨ψ|` of the normalized state vector `ψ`."""
    psi = normalize(amplitudes)
    return np.outer(psi, psi.conj())


def normalize(amplitudes: ArrayLike) -> StateVector:
    psi = np.asarray(amplitudes, dtype=np.complex128)
    norm = np.linalg.norm(psi)
    if psi.ndim != 1 or norm == 0:
        raise InvalidMatrix(expected='a non-zero state vector')
    return psi / norm


def check_density_matrix(rho: ArrayLike) -> DensityMatrix:
    """Raise `InvalidMatrix` unless `rho` is Hermitian, has unit trace, and has
    no eigenvalue below `-POSITIVITY_TOLERANCE`."""
    rho = check_hermitian(rho)
    if abs(np.trace(rho) - 1) > ALGEBRA_TOLERANCE:
        raise InvalidMatrix(expected='of unit trace')
    if np.linalg.eigvalsh(rho)[0] < -POSITIVITY_TOLERANCE:
        raise InvalidMatrix(expected='positive semidefinite')
    return rho
