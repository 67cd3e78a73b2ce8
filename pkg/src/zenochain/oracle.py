"""
Comparison of the numerical propagation against closed-form results.

Each check evaluates the largest deviation between a numerical quantity
and its analytic counterpart over a fixed grid of parameters and compares
it with a tolerance. `run_checks` runs all of them; a non-zero `fault`
adds a perturbation to one entry of the measurement propagator used by
the survival check, to confirm that the suite detects errors.
"""

import logging
import math
from collections.abc import Callable
from typing import NamedTuple

import numpy as np
from scipy.special import jv

from zenochain.dynamics import free_channel, initial_state, occupation, premeasurement_channel
from zenochain.experiments import two_site_model, trace_distance_after_measurement, composite_trace_distance
from zenochain.linalg import kron, unitary_from_hamiltonian, projector, pure_state
from zenochain.model import ChainParams, ApparatusParams, CompositeModel, build_interaction_hamiltonian, pointer_state
from zenochain.twosite import InitialQubit, spectrum, survival_exact, survival_loss_exact, survival_loss_taylor
from zenochain.twosite import t1_coefficient, t1_prime

logger = logging.getLogger(__name__)

COUPLINGS = (0.5, math.pi, 10.0, 100.0)
DETUNINGS = (-1.0, 0.0, 0.25, 0.5, 1.5)


class CheckResult(NamedTuple):
    name: str
    max_error: float
    tolerance: float
    passed: bool

    def __str__(self):
        status = 'PASS' if self.passed else 'FAIL'
        return f'{status} {self.name}: max error {self.max_error:.3e} (tolerance {self.tolerance:.1e})'


def _result(name: str, errors, tolerance: float) -> CheckResult:
    max_error = float(np.max(errors))
    return CheckResult(name=name, max_error=max_error, tolerance=tolerance, passed=max_error <= tolerance)


def free_return_probability(t: float, site: str = 'end', gamma: float = 1.0) -> float:
    """Probability of finding the particle at its starting site after a free
    evolution of duration `t` on a chain long enough that no reflection from
    the far end has returned. Starting at the end of a chain the amplitude is
    `J₁(2γt)/(γt)`; starting in the bulk it is `J₀(2γt)`.

    ```pycon
    >>> free_return_probability(0)
    1.0
    >>> free_return_probability(0, site='bulk')
    1.0

    ```
    """
    x = 2 * gamma * t
    if site == 'bulk':
        return float(jv(0, x) ** 2)
    if site != 'end':
        raise ValueError(f'site must be "end" or "bulk", got {site!r}')
    if x == 0:
        return 1.0
    return float((2 * jv(1, x) / x) ** 2)


def check_spectrum(fault: float = 0.0) -> list[CheckResult]:
    errors = []
    for g in COUPLINGS:
        for delta in DETUNINGS:
            numeric = np.linalg.eigvalsh(two_site_model(g, delta).total_hamiltonian)
            errors.append(np.max(np.abs(numeric - spectrum(g, delta).energies)))
    numeric = np.linalg.eigvalsh(two_site_model(4, 0.5).total_hamiltonian)
    expected = sorted([-1.0, 1.0, 2 - math.sqrt(5), 2 + math.sqrt(5)])
    return [
        _result('two-site spectrum', errors, 1e-12),
        _result('two-site spectrum at g=4, delta=1/2 (E1 = 2 ± √5)', np.abs(numeric - expected), 1e-12),
    ]


def check_survival(fault: float = 0.0) -> list[CheckResult]:
    errors = []
    rho0 = kron(projector(2, 0), projector(2, 0))
    for g in COUPLINGS:
        for delta in DETUNINGS:
            model = two_site_model(g, delta)
            for t in np.linspace(0, model.measurement_time, 50):
                propagator = model.measurement_propagator(t).copy()
                propagator[0, 0] += fault
                rho = propagator @ rho0 @ propagator.conj().T
                numeric = float((rho[0, 0] + rho[1, 1]).real)
                errors.append(abs(numeric - survival_exact(t, g, delta)))
    return [_result('two-site survival during a measurement', errors, 1e-10)]


def check_short_time_order(fault: float = 0.0) -> list[CheckResult]:
    """Halving `t` must reduce the error of the fourth order expansion by a
    factor of at least 50. Reported as the inverse of that factor."""
    inverse_ratios = []
    for g, delta in ((math.pi, 0.0), (math.pi, 1.0), (10.0, 0.5)):

        def error(t, g=g, delta=delta):
            return abs(survival_loss_exact(t, g, delta) - survival_loss_taylor(t, g, delta))

        for t in (0.1, 0.08, 0.04, 0.02):
            inverse_ratios.append(error(t / 2) / error(t))
    return [_result('short-time expansion error scales as t^6', inverse_ratios, 1 / 50)]


def check_projective_limit(fault: float = 0.0) -> list[CheckResult]:
    g = 1e4
    errors = []
    for delta in (0.0, 0.25, 0.5, 1.0):
        q = InitialQubit(1, 0)
        t1 = t1_coefficient(q, delta)
        errors.append(abs(g * trace_distance_after_measurement(q, g, delta) / 2 - t1) / t1)
    results = [_result('trace distance approaches (2γ/g)·T1', errors, 0.01)]

    half = InitialQubit(1 / math.sqrt(2), 1 / math.sqrt(2))
    couplings = np.logspace(2, 4, 9)
    distances = [trace_distance_after_measurement(half, g, 0.0) for g in couplings]
    slope = np.polyfit(np.log(1 / couplings), np.log(distances), 1)[0]
    results.append(_result('trace distance vanishes as 1/g² when T1 = 0', [abs(slope - 2)], 0.05))

    errors = []
    for delta in (0.0, 0.5, 1.5):
        expected = 2**1.5 / g * t1_prime(delta)
        errors.append(abs(composite_trace_distance(g, delta) - expected) / expected)
    results.append(_result('composite trace distance approaches (2^{3/2}γ/g)·T1′', errors, 0.01))
    return results


def check_t1_prime(fault: float = 0.0) -> list[CheckResult]:
    errors = [abs(t1_prime(d) - t1_coefficient(InitialQubit(1, 0), d)) for d in np.linspace(-3, 3, 61)]
    return [_result('T1′ equals T1 for a particle on site 0', errors, 1e-12)]


def check_perfect_measurement(fault: float = 0.0) -> list[CheckResult]:
    """Without chain dynamics a measurement of duration `2π/(gN)` maps
    `|s_j⟩|A₀⟩` to `|s_j⟩|A_j⟩`."""
    g = 1.0
    errors, phases = [], []
    for n in range(2, 9):
        propagator = unitary_from_hamiltonian(g * build_interaction_hamiltonian(n), 2 * math.pi / (g * n))
        for j in range(n):
            before = np.kron(pointer_state(n, j), pointer_state(n, 0))
            after = np.kron(pointer_state(n, j), pointer_state(n, j))
            amplitude = np.vdot(after, propagator @ before)
            errors.append(1 - abs(amplitude) ** 2)
            phases.append(abs(np.angle(amplitude)))
    return [
        _result('perfect measurement for N = 2..8', errors, 1e-12),
        _result('residual phase of the perfect measurement', phases, 1e-10),
    ]


def check_shift_equivalence(fault: float = 0.0) -> list[CheckResult]:
    """Shifting the apparatus spectrum by `-Δ` is the same as raising the
    energy of site 0 by `gΔ` during a measurement."""
    rng = np.random.default_rng(20240613)
    g, delta, epsilon = 10.0, 0.25, 0.5
    reference = CompositeModel(ChainParams(5, epsilon), ApparatusParams(g, delta))
    errors = []
    for shift in rng.uniform(-1, 1, 20):
        shifted = CompositeModel(ChainParams(5, epsilon + g * shift), ApparatusParams(g, delta - shift))
        t = reference.measurement_time
        errors.append(np.max(np.abs(reference.measurement_propagator(t) - shifted.measurement_propagator(t))))
    return [_result('on-site energy ε + gδ during a measurement', errors, 1e-12)]


def check_free_chain(fault: float = 0.0) -> list[CheckResult]:
    chain = ChainParams(61)
    times = np.linspace(0, 10, 101)
    end, bulk = initial_state(61), projector(61, 30)
    end_errors = [abs(occupation(free_channel(end, t, chain)) - free_return_probability(t, 'end')) for t in times]
    bulk_errors = [
        abs(occupation(free_channel(bulk, t, chain), 30) - free_return_probability(t, 'bulk')) for t in times
    ]
    return [
        _result('free chain, start at the end: (J1(2t)/t)²', end_errors, 1e-6),
        _result('free chain, start in the bulk: J0(2t)²', bulk_errors, 1e-6),
    ]


def check_channel(fault: float = 0.0) -> list[CheckResult]:
    """The premeasurement channel of a two-site chain agrees with the survival
    formula at the end of a measurement."""
    errors = []
    for g in COUPLINGS:
        for delta in DETUNINGS:
            model = two_site_model(g, delta)
            rhoS = premeasurement_channel(pure_state([1, 0]), model)
            errors.append(abs(occupation(rhoS) - survival_exact(model.measurement_time, g, delta)))
    return [_result('premeasurement channel at t_m', errors, 1e-10)]


CHECKS: list[Callable[[float], list[CheckResult]]] = [
    check_spectrum,
    check_survival,
    check_channel,
    check_short_time_order,
    check_projective_limit,
    check_t1_prime,
    check_perfect_measurement,
    check_shift_equivalence,
    check_free_chain,
]


def run_checks(fault: float = 0.0) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        for result in check(fault):
            logger.debug(str(result))
            results.append(result)
    return results
