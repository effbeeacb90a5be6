"""Trap parameters, the effective-oscillator reduction and the energy ladder.

The combined Paul-trap / optical-lattice potential is

    V(x) = m w^2 x^2 / 2 + m w^2 a^2 (k / 4 pi^2) [1 + cos(2 pi x / a)]

and its second-order expansion about x = 0 is a harmonic well of
curvature ``omega_eff = w sqrt(1 - k)`` lifted by the constant
``lam = m w^2 a^2 k / (2 pi^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class DomainError(ValueError):
    """Raised when a physical parameter lies outside its allowed range."""

    def __init__(self, parameter: str, value, reason: str):
        self.parameter = parameter
        self.value = value
        super().__init__(f"{parameter}={value!r}: {reason}")


@dataclass(frozen=True)
class TrapConfig:
    """Physical parameters of the trap. Defaults are natural units."""

    omega: float = 1.0
    kappa: float = 0.0
    mass: float = 1.0
    period: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("omega", "mass", "period", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(name, value, "must be finite and > 0")
        if not (math.isfinite(self.kappa) and 0.0 <= self.kappa < 1.0):
            raise DomainError("kappa", self.kappa, "must satisfy 0 <= kappa < 1")


@dataclass(frozen=True)
class EffectiveOscillator:
    """Harmonic reduction of a :class:`TrapConfig` with cached derived scales."""

    config: TrapConfig
    omega_eff: float = field(init=False)
    offset_lambda: float = field(init=False)
    osc_length: float = field(init=False)

    def __post_init__(self):
        c = self.config
        omega_eff = c.omega * math.sqrt(1.0 - c.kappa)
        lam = c.mass * c.omega**2 * c.period**2 * c.kappa / (2.0 * math.pi**2)
        object.__setattr__(self, "omega_eff", omega_eff)
        object.__setattr__(self, "offset_lambda", lam)
        object.__setattr__(self, "osc_length", math.sqrt(c.hbar / (c.mass * omega_eff)))

    @property
    def mass(self) -> float:
        return self.config.mass

    @property
    def hbar(self) -> float:
        return self.config.hbar

    @property
    def regime_ratio(self) -> float:
        """Oscillator length over lattice period; small means strong confinement."""
        return self.osc_length / self.config.period


def effective_oscillator(config: TrapConfig) -> EffectiveOscillator:
    return EffectiveOscillator(config)


def full_potential(config: TrapConfig, x):
    """Untruncated trap-plus-lattice potential evaluated at ``x``."""
    x = np.asarray(x, dtype=float)
    m, w, k, a = config.mass, config.omega, config.kappa, config.period
    harmonic = 0.5 * m * w**2 * x**2
    if k == 0.0:
        return harmonic
    lattice = m * w**2 * a**2 * (k / (4.0 * math.pi**2)) * (1.0 + np.cos(2.0 * math.pi * x / a))
    return harmonic + lattice


def truncated_potential(eff: EffectiveOscillator, x):
    """Second-order expansion of :func:`full_potential` about the trap centre."""
    x = np.asarray(x, dtype=float)
    harmonic = 0.5 * eff.mass * eff.omega_eff**2 * x**2
    if eff.offset_lambda == 0.0:
        return harmonic
    return harmonic + eff.offset_lambda


def quartic_remainder_coefficient(config: TrapConfig) -> float:
    """Coefficient C of the bound ``0 <= V_full - V_trunc <= C x**4``.

    Follows from ``1 - y**2/2 <= cos y <= 1 - y**2/2 + y**4/24``.
    """
    return config.mass * config.omega**2 * config.kappa * math.pi**2 / (6.0 * config.period**2)


def energy_level(eff: EffectiveOscillator, n: int) -> float:
    if int(n) != n or n < 0:
        raise DomainError("n", n, "quantum number must be a non-negative integer")
    return eff.hbar * eff.omega_eff * (n + 0.5) + eff.offset_lambda


def energy_levels(eff: EffectiveOscillator, count: int) -> np.ndarray:
    n = np.arange(count)
    return eff.hbar * eff.omega_eff * (n + 0.5) + eff.offset_lambda
