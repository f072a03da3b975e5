"""Thermal decoherence rates and mitigation calculators.

Dynamical decoupling is modelled at the effective-rate level only: with
``U sigma U^dag = -sigma`` the pulsed dissipator equals the undriven one, so
suppression enters through ``Gamma_eff = Gamma_d / (f tau_c)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy import constants
from scipy.integrate import solve_ivp

from . import reference

QEC_MARGIN = 2000.0
QEC_FLOOR = 100.0
GATES_PER_CYCLE = (50, 100)
DD_VALIDITY_FACTOR = 100.0


class NonSuppressiveDD(UserWarning):
    """Pulse rate times correlation time does not exceed one."""


@dataclass(frozen=True)
class ThermalBathSpec:
    nbar: float
    omega: Optional[float] = None
    temperature: Optional[float] = None

    def __post_init__(self):
        if self.nbar < 0:
            raise ValueError(f"nbar must be non-negative, got {self.nbar}")

    @classmethod
    def from_temperature(cls, omega, temperature, convention="angular"):
        return cls(nbar_from_temperature(omega, temperature, convention), omega, temperature)


def crossover_temperature(omega, convention="angular"):
    """``hbar omega / k_B`` in kelvin.

    ``convention="angular"`` reads ``omega`` in rad/s; ``"ordinary"`` reads it
    as a frequency in Hz and uses ``h nu / k_B``.
    """
    if convention == "angular":
        return constants.hbar * omega / constants.k
    if convention == "ordinary":
        return constants.h * omega / constants.k
    raise ValueError(f"convention must be 'angular' or 'ordinary', got {convention!r}")


def nbar_from_temperature(omega, temperature, convention="angular"):
    """Bose-Einstein occupation ``1 / (exp(hbar omega / k_B T) - 1)``; 0 at ``T = 0``."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if temperature < 0:
        raise ValueError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0:
        return 0.0
    x = crossover_temperature(omega, convention) / temperature
    return 1.0 / math.expm1(x) if x < 700 else 0.0


def decoherence_rate(gamma, nbar):
    """``Gamma_d = gamma (1 + 2 nbar)``."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if nbar < 0:
        raise ValueError(f"nbar must be non-negative, got {nbar}")
    return gamma * (1 + 2 * nbar)


def dd_effective_rate(gamma_d, f, tau_c):
    """``Gamma_eff = Gamma_d / (f tau_c)``.

    Warns with :class:`NonSuppressiveDD` when ``f tau_c <= 1``; the value is
    still returned.
    """
    if gamma_d <= 0 or f <= 0 or tau_c <= 0:
        raise ValueError("rates and correlation time must be positive")
    product = f * tau_c
    if product <= 1:
        warnings.warn(f"f * tau_c = {product:g} <= 1: decoupling does not suppress decoherence", NonSuppressiveDD)
    return gamma_d / product


def dd_concurrence(rate, t):
    """Exponential concurrence model ``exp(-rate t)``."""
    return math.exp(-rate * t)


@dataclass(frozen=True)
class MitigationPlan:
    pulse_frequency: Optional[float] = None
    correlation_time: Optional[float] = None
    qec_frequency: Optional[float] = None
    dfs_rate: Optional[float] = None

    def __post_init__(self):
        for name in ("pulse_frequency", "correlation_time", "qec_frequency", "dfs_rate"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")

    def dd_valid(self, gamma, nbar):
        """``f >> gamma (1 + nbar)``, taken as a factor of 100."""
        if self.pulse_frequency is None:
            return False
        return self.pulse_frequency > DD_VALIDITY_FACTOR * gamma * (1 + nbar)


@dataclass(frozen=True)
class QecRecommendation:
    frequency: float
    raw: float
    gates_per_second: tuple[float, float]


def qec_frequency_recommendation(rate, margin_factor=QEC_MARGIN, floor=QEC_FLOOR):
    """Smallest power of ten at or above ``margin_factor * rate``, at least ``floor``.

    ``raw`` keeps the unrounded ``margin_factor * rate``; the gate band
    multiplies the chosen frequency by 50-100 gates per cycle.
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    raw = margin_factor * rate
    exponent = math.ceil(math.log10(raw) - 1e-12)
    freq = max(10.0**exponent, floor)
    lo, hi = GATES_PER_CYCLE
    return QecRecommendation(freq, raw, (lo * freq, hi * freq))


def dfs_feasibility(rate, gamma_dfs):
    """``(rate < gamma_dfs, 1 / gamma_dfs)``."""
    if rate <= 0 or gamma_dfs <= 0:
        raise ValueError("rates must be positive")
    return rate < gamma_dfs, 1.0 / gamma_dfs


@dataclass(frozen=True)
class RateReport:
    gamma_d: float
    lifetime_no_dd: float
    gamma_eff: Optional[float] = None
    lifetime_dd: Optional[float] = None
    qec_recommendation: Optional[float] = None
    qec_recommendation_dd: Optional[float] = None
    dfs_feasible: Optional[bool] = None
    t_dfs: Optional[float] = None


def rate_report(gamma, nbar, plan: MitigationPlan = MitigationPlan()):
    gamma_d = decoherence_rate(gamma, nbar)
    fields = {"gamma_d": gamma_d, "lifetime_no_dd": 1.0 / gamma_d,
              "qec_recommendation": qec_frequency_recommendation(gamma_d).frequency}
    rate = gamma_d
    if plan.pulse_frequency is not None and plan.correlation_time is not None:
        gamma_eff = dd_effective_rate(gamma_d, plan.pulse_frequency, plan.correlation_time)
        fields.update(gamma_eff=gamma_eff, lifetime_dd=1.0 / gamma_eff,
                      qec_recommendation_dd=qec_frequency_recommendation(gamma_eff).frequency)
        rate = gamma_eff
    if plan.dfs_rate is not None:
        feasible, t_dfs = dfs_feasibility(rate, plan.dfs_rate)
        fields.update(dfs_feasible=feasible, t_dfs=t_dfs)
    return RateReport(**fields)


@dataclass(frozen=True)
class LifetimeRow:
    nbar: float
    gamma_d: float
    gamma_eff: float
    lifetime_no_dd: float
    lifetime_dd: float

    def rounded(self):
        """Values at the printed precision.

        Rates are rounded first (2 and 4 decimals) and lifetimes are the
        reciprocals of the rounded rates, to one decimal.
        """
        gd = round(self.gamma_d, 2)
        ge = round(self.gamma_eff, 4)
        return (round(self.nbar, 2), gd, ge, round(1 / gd, 1), round(1 / ge, 1))


def lifetime_table(gamma=reference.TABLE4_GAMMA, nbar_list: Iterable[float] = None,
                   f=reference.TABLE4_PULSE_FREQUENCY, tau_c=reference.TABLE4_CORRELATION_TIME):
    if nbar_list is None:
        nbar_list = [row[0] for row in reference.TABLE4]
    rows = []
    for nbar in nbar_list:
        gd = decoherence_rate(gamma, nbar)
        ge = dd_effective_rate(gd, f, tau_c)
        rows.append(LifetimeRow(nbar, gd, ge, 1 / gd, 1 / ge))
    return rows


# -- rate equations -----------------------------------------------------------------


def thermal_rate_matrix(n, gamma, nbar):
    """Linear generator of the projected rate equations for ``(a0, a1, a2, a3)``."""
    if n < 2:
        raise ValueError(f"rate equations need n >= 2, got {n}")
    e = gamma * (1 + nbar)  # emission
    p = 2 * gamma * nbar * (n - 1)  # thermal pumping out of the ground state
    m = n - 1
    return np.array([
        [-p, 2 * e, 2 * e * m**2, 4 * e * m],
        [p, -2 * e, 0.0, -2 * e * m],
        [p, 0.0, -2 * e * m, -2 * e],
        [0.0, -e, -e * m, -gamma * (1 + 2 * nbar) * n],
    ])


def thermal_rate_equations(n, gamma, nbar):
    """Right-hand side ``rhs(t, a)`` of the thermal rate equations."""
    matrix = thermal_rate_matrix(n, gamma, nbar)

    def rhs(t, a):
        return matrix @ a

    return rhs


def integrate_rate_equations(n, gamma, nbar, times, a0=(0.0, 1.0, 0.0, 0.0)):
    """Integrate the rate equations with an adaptive 8th-order Runge-Kutta scheme."""
    times = np.asarray(times, dtype=float)
    sol = solve_ivp(thermal_rate_equations(n, gamma, nbar), (0.0, float(times[-1])), np.asarray(a0, float),
                    method="DOP853", t_eval=times, rtol=1e-12, atol=1e-14)
    if not sol.success:
        raise RuntimeError(sol.message)
    return sol.y.T


def thermal_closed_form(n, gamma, nbar, t):
    """``(f_n(t), C_kj(t))`` with ``C`` clamped at zero."""
    if t < 0:
        raise ValueError("t must be non-negative")
    f = (1 + nbar) * (1 - math.exp(-n * gamma * (1 + 2 * nbar) * t)) / n
    return f, max(0.0, 2 * f * (1 - f))


def steady_concurrence(n, nbar):
    """``t -> infinity`` limit of the thermal closed form (unclamped)."""
    f = (1 + nbar) / n
    return 2 * f * (1 - f)


def critical_nbar(n):
    """Root of the steady-state closed form: ``nbar = n - 1``."""
    return float(n - 1)
