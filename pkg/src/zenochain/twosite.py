"""
Closed-form results for a two-site chain (`ε = 0`) measured by a
two-state apparatus. They serve as exact references for the numerical
propagation in `zenochain.dynamics`.

The expressions for `T₁`, `T₁′` and the leading-order state contain
factors such as `(2δ - sin πδ)/(1 - 4δ²)` that are `0/0` at `δ = ±½`.
They are evaluated here in a rewritten form built from
`sinc(x) = sin(πx)/(πx)`, which is regular everywhere and equal to the
original expression wherever that is defined. With `x = 2δ - 1` and
`y = 2δ + 1`:

* `(2δ - sin πδ)/(1 - 4δ²) = -(π²/16)·[x·sinc²(x/4) + y·sinc²(y/4)]`
* `cos(πδ)/(1 - 4δ²) = (π/4)·[sinc(x/2) + sinc(y/2)]`
* `(1 ∓ sin πδ)/(2(2δ ∓ 1)²) = (π/4)²·sinc²(x/4)` resp. `(π/4)²·sinc²(y/4)`
* `(1 ∓ i·e^{-iπδ})/(2δ ∓ 1) = (iπ/2)·e^{-iπx/4}·sinc(x/4)` resp. with `y`
"""

import math
from typing import NamedTuple

import numpy as np

from zenochain.errors import InvalidParams
from zenochain.linalg import StateVector, ALGEBRA_TOLERANCE


class TwoSiteSpectrum(NamedTuple):
    """Eigenenergies of the two-site model in the `|B₀⟩` (`n = 0`) and
    `|B₁⟩` (`n = 1`) sectors of the apparatus."""

    E0p: float
    E0m: float
    E1p: float
    E1m: float
    phi0: float
    """Mixing angle in `[0, π)` with `tan φ₀ = -4γ/(g(2δ - 1))`."""
    phi1: float
    """Mixing angle in `[0, π)` with `tan φ₁ = -4γ/(g(2δ + 1))`."""

    @property
    def Omega0(self) -> float:
        return self.E0p - self.E0m

    @property
    def Omega1(self) -> float:
        return self.E1p - self.E1m

    @property
    def energies(self) -> list[float]:
        """All four eigenenergies, ascending."""
        return sorted([self.E0p, self.E0m, self.E1p, self.E1m])


class InitialQubit(NamedTuple):
    """Chain state `c₀|0⟩ + c₁|1⟩`."""

    c0: complex
    c1: complex

    def check(self) -> 'InitialQubit':
        norm = abs(self.c0) ** 2 + abs(self.c1) ** 2
        if abs(norm - 1) > ALGEBRA_TOLERANCE:
            raise InvalidParams('|c0|² + |c1|² must be 1, got {norm}', norm=norm)
        return self

    @property
    def amplitudes(self) -> StateVector:
        return np.array([self.c0, self.c1], dtype=np.complex128)


def _check_gamma(gamma: float):
    if not gamma > 0:
        raise InvalidParams('gamma must be positive, got gamma={gamma}', gamma=gamma)


def _mixing_angle(gamma: float, detuning: float) -> float:
    return math.atan2(-4 * gamma, detuning) % math.pi


def spectrum(g: float, delta: float, gamma: float = 1.0) -> TwoSiteSpectrum:
    """Eigenenergies `E_{n±} = g(2δ ∓ 1)/4 ± (γ² + g²(2δ ∓ 1)²/16)^½`
    of the two-site model with `ε = 0`.

    ```pycon
    >>> spectrum(g=0, delta=0).energies
    [-1.0, -1.0, 1.0, 1.0]

    ```
    """
    _check_gamma(gamma)
    if g < 0:
        raise InvalidParams('coupling must not be negative, got g={g}', g=g)
    shift0 = g * (2 * delta - 1) / 4
    shift1 = g * (2 * delta + 1) / 4
    root0 = math.sqrt(gamma**2 + shift0**2)
    root1 = math.sqrt(gamma**2 + shift1**2)
    return TwoSiteSpectrum(
        E0p=shift0 + root0,
        E0m=shift0 - root0,
        E1p=shift1 + root1,
        E1m=shift1 - root1,
        phi0=_mixing_angle(gamma, 4 * shift0),
        phi1=_mixing_angle(gamma, 4 * shift1),
    )


def eigenstates(g: float, delta: float, gamma: float = 1.0) -> dict[str, StateVector]:
    """Eigenstates `|0±⟩`, `|1±⟩` with energies `E_{n±}`, in the composite
    basis `|n⟩|A_j⟩` (index `2n + j`).

    With hopping `-γ`, the state `cos(φ/2)|0⟩ + sin(φ/2)|1⟩` belongs to the
    lower energy `E_{n-}` and `sin(φ/2)|0⟩ - cos(φ/2)|1⟩` to `E_{n+}`."""
    s = spectrum(g, delta, gamma)
    b0, b1 = np.array([1, 1]) / math.sqrt(2), np.array([1, -1]) / math.sqrt(2)

    def upper(phi, b):
        return np.kron([math.sin(phi / 2), -math.cos(phi / 2)], b).astype(np.complex128)

    def lower(phi, b):
        return np.kron([math.cos(phi / 2), math.sin(phi / 2)], b).astype(np.complex128)

    return {
        '0+': upper(s.phi0, b0),
        '0-': lower(s.phi0, b0),
        '1+': upper(s.phi1, b1),
        '1-': lower(s.phi1, b1),
    }


def survival_loss_exact(t: float, g: float, delta: float, gamma: float = 1.0) -> float:
    """`1 - ρ₀₀ˢ(t)` during a measurement starting from `|0⟩|A₀⟩`, written as
    `2γ² Σ_n sin²(Ω_n t/2)/Ω_n²` to avoid cancellation at short times."""
    s = spectrum(g, delta, gamma)
    return 2 * gamma**2 * sum(math.sin(omega * t / 2) ** 2 / omega**2 for omega in (s.Omega0, s.Omega1))


def survival_exact(t: float, g: float, delta: float, gamma: float = 1.0) -> float:
    """Survival probability `ρ₀₀ˢ(t) = 1 + γ² Σ_n (cos Ω_n t - 1)/Ω_n²` on
    site 0 during a measurement starting from `|0⟩|A₀⟩`.

    ```pycon
    >>> survival_exact(0, g=math.pi, delta=0)
    1.0

    ```
    """
    return 1 - survival_loss_exact(t, g, delta, gamma)


def survival_loss_taylor(t: float, g: float, delta: float, gamma: float = 1.0) -> float:
    """Short-time expansion of `1 - ρ₀₀ˢ(t)` up to fourth order in `t`."""
    _check_gamma(gamma)
    quartic = (1 + g**2 * (4 * delta**2 + 1) / (16 * gamma**2)) / 3
    return gamma**2 * t**2 - quartic * gamma**4 * t**4


def survival_taylor(t: float, g: float, delta: float, gamma: float = 1.0) -> float:
    """Short-time expansion `1 - γ²t² + ⅓(1 + g²(4δ² + 1)/(16γ²))γ⁴t⁴`."""
    return 1 - survival_loss_taylor(t, g, delta, gamma)


def _sinc(x: float) -> float:
    return float(np.sinc(x))


def _shift_ratio(delta: float) -> float:
    """`(2δ - sin πδ)/(1 - 4δ²)`"""
    x, y = 2 * delta - 1, 2 * delta + 1
    return -(math.pi**2 / 16) * (x * _sinc(x / 4) ** 2 + y * _sinc(y / 4) ** 2)


def _phase_ratio(delta: float) -> float:
    """`cos(πδ)/(1 - 4δ²)`"""
    x, y = 2 * delta - 1, 2 * delta + 1
    return (math.pi / 4) * (_sinc(x / 2) + _sinc(y / 2))


def t1_coefficient(q: InitialQubit, delta: float) -> float:
    """Coefficient `T₁` of the trace distance `T = (2γ/g)·T₁ + O(1/g²)`
    between the premeasured and the projectively measured chain state.

    The squares `c₀²`, `c₁²` are of the complex amplitudes, not their moduli.

    ```pycon
    >>> round(t1_coefficient(InitialQubit(1, 0), 0), 12)
    1.0

    ```
    """
    q.check()
    c0, c1 = complex(q.c0), complex(q.c1)
    value = _shift_ratio(delta) * (c0**2 + c1**2) - 1j * _phase_ratio(delta) * (c0**2 - c1**2)
    return abs(value)


def t1_prime(delta: float) -> float:
    """Coefficient `T₁′` of the trace distance `T = (2^{3/2}γ/g)·T₁′ + O(1/g²)`
    between the composite state after a measurement from `|0⟩|A₀⟩` and
    `|0⟩|A₁⟩`."""
    x, y = 2 * delta - 1, 2 * delta + 1
    return (math.pi / 4) * math.sqrt(_sinc(x / 4) ** 2 + _sinc(y / 4) ** 2)


def _resonant_ratio(z: float) -> complex:
    """`(1 - e^{-iπz/2})/z`"""
    return 0.5j * math.pi * complex(np.exp(-0.25j * math.pi * z)) * _sinc(z / 4)


def leading_order_state(g: float, delta: float, gamma: float = 1.0) -> StateVector:
    """Composite state after one measurement from `|0⟩|A₀⟩`, to first order
    in `γ/g`, in the basis `|n⟩|A_j⟩` (index `2n + j`). The `|0⟩|A₀⟩`
    amplitude vanishes at this order."""
    _check_gamma(gamma)
    if not g > 0:
        raise InvalidParams('coupling must be positive, got g={g}', g=g)
    lead = 1j * complex(np.exp(-1j * math.pi * delta))
    p = _resonant_ratio(2 * delta - 1)
    q = _resonant_ratio(2 * delta + 1)
    return np.array([0, lead, gamma / g * (p + q), gamma / g * (p - q)], dtype=np.complex128)
