"""Position- and momentum-space eigenstates of the effective oscillator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hermite import Integral, adaptive_integrate, hermite_function
from .oscillator import DomainError, EffectiveOscillator

WINDOW_LENGTHS = 12.0
FOURIER_MAX_N = 30


@dataclass(frozen=True)
class Eigenstate:
    eff: EffectiveOscillator
    n: int
    beta_x: float = field(init=False)
    beta_p: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError("n", self.n, "quantum number must be a non-negative integer")
        m, hbar, w = self.eff.mass, self.eff.hbar, self.eff.omega_eff
        object.__setattr__(self, "beta_x", m * w / hbar)
        object.__setattr__(self, "beta_p", 1.0 / (m * hbar * w))

    @property
    def x_window(self) -> float:
        return WINDOW_LENGTHS / math.sqrt(self.beta_x)

    @property
    def p_window(self) -> float:
        return WINDOW_LENGTHS / math.sqrt(self.beta_p)

    def psi(self, x):
        return hermite_function(self.n, x, self.beta_x)[0]

    def dpsi(self, x):
        return hermite_function(self.n, x, self.beta_x)[1]

    def phi_abs(self, p):
        """Real Hermite-function envelope of the momentum amplitude."""
        return hermite_function(self.n, p, self.beta_p)[0]

    def dphi_abs(self, p):
        return hermite_function(self.n, p, self.beta_p)[1]

    def phi(self, p):
        """Momentum amplitude including the (-i)**n Fourier phase."""
        return (-1j) ** self.n * self.phi_abs(p)


def eigenstate(eff: EffectiveOscillator, n: int) -> Eigenstate:
    return Eigenstate(eff, n)


def position_density(state: Eigenstate, x):
    return state.psi(x) ** 2


def momentum_density(state: Eigenstate, p):
    return state.phi_abs(p) ** 2


def count_nodes(state: Eigenstate, half_width_lengths: float = 10.0, num_points: int = 20001) -> int:
    """Sign changes of psi_n on a fine symmetric grid."""
    x = np.linspace(-half_width_lengths, half_width_lengths, num_points) / math.sqrt(state.beta_x)
    values = state.psi(x)
    # the far tails underflow to exact zeros; those are not nodes
    signs = np.sign(values[np.abs(values) > 1e-250])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def fourier_check(state: Eigenstate, p, tol: float = 1e-12):
    """Momentum density from direct quadrature of the Fourier integral.

    Returns ``(density, converged)``; ``p`` may be a scalar or an array.
    """
    if state.n > FOURIER_MAX_N:
        raise DomainError("n", state.n, f"fourier_check is limited to n <= {FOURIER_MAX_N}")
    hbar = state.eff.hbar
    p_arr = np.atleast_1d(np.asarray(p, dtype=float))
    out = np.empty_like(p_arr)
    converged = True
    for i, pi in enumerate(p_arr):
        re = adaptive_integrate(lambda x: state.psi(x) * np.cos(pi * x / hbar), state.x_window, tol)
        im = adaptive_integrate(lambda x: -state.psi(x) * np.sin(pi * x / hbar), state.x_window, tol)
        converged = converged and re.converged and im.converged
        out[i] = (re.value**2 + im.value**2) / (2.0 * math.pi * hbar)
    if np.ndim(p) == 0:
        return float(out[0]), converged
    return out, converged


def normalization(state: Eigenstate, space: str = "x", tol: float = 1e-12) -> Integral:
    if space == "x":
        return adaptive_integrate(lambda x: position_density(state, x), state.x_window, tol)
    return adaptive_integrate(lambda p: momentum_density(state, p), state.p_window, tol)
