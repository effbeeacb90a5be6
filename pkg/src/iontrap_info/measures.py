"""Fisher information, Shannon entropy, moments and Fisher-Shannon complexity.

Every quantity has a closed-form path and a quadrature path. The two never
share intermediate results; :class:`MeasureSet.method_tag` records which
one produced a record.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .eigenstates import Eigenstate, momentum_density, position_density
from .hermite import QuadratureRule, adaptive_integrate, gauss_hermite_rule
from .oscillator import DomainError, EffectiveOscillator

CLOSED = "closed-form"
QUADRATURE = "quadrature"
NUMERIC_MAX_N = 30
BBM_BOUND = 1.0 + math.log(math.pi)


def entropic_bound(hbar: float = 1.0) -> float:
    """Lower bound on ``S_x + S_p`` for entropies taken in units where lengths
    and momenta carry their own dimensions; reduces to ``1 + ln pi`` at hbar = 1."""
    return BBM_BOUND + math.log(hbar)


class SpacePair(NamedTuple):
    x: float
    p: float
    converged: bool = True


class Moments(NamedTuple):
    x2_mean: float
    p2_mean: float
    uncertainty: float
    x_mean: float = 0.0
    p_mean: float = 0.0
    converged: bool = True


@dataclass(frozen=True)
class MeasureSet:
    I_x: float
    I_p: float
    S_x: float | None
    S_p: float | None
    x2_mean: float
    p2_mean: float
    uncertainty: float
    J_x: float | None
    J_p: float | None
    P_x: float | None
    P_p: float | None
    method_tag: str
    converged: bool = True

    @property
    def fisher_product(self) -> float:
        return self.I_x * self.I_p

    @property
    def entropy_sum(self) -> float | None:
        if self.S_x is None or self.S_p is None:
            return None
        return self.S_x + self.S_p

    def as_dict(self) -> dict:
        return asdict(self)


def _check_n(n):
    if int(n) != n or n < 0:
        raise DomainError("n", n, "quantum number must be a non-negative integer")


def _check_numeric(state: Eigenstate):
    if state.n > NUMERIC_MAX_N:
        raise DomainError("n", state.n, f"quadrature paths are limited to n <= {NUMERIC_MAX_N}")


# -- closed forms -----------------------------------------------------------

def fisher_closed(eff: EffectiveOscillator, n: int):
    _check_n(n)
    m, hbar, w = eff.mass, eff.hbar, eff.omega_eff
    return 2.0 * m * w / hbar * (2 * n + 1), 2.0 / (m * hbar * w) * (2 * n + 1)


def moments_closed(eff: EffectiveOscillator, n: int):
    """Return ``(<x^2>, <p^2>, dx*dp)``; first moments vanish by parity."""
    _check_n(n)
    m, hbar, w = eff.mass, eff.hbar, eff.omega_eff
    x2 = hbar / (2.0 * m * w) * (2 * n + 1)
    p2 = m * hbar * w / 2.0 * (2 * n + 1)
    return x2, p2, hbar * (n + 0.5)


def shannon_closed_ground(eff: EffectiveOscillator):
    m, hbar, w = eff.mass, eff.hbar, eff.omega_eff
    s_x = 0.5 * (1.0 + math.log(math.pi * hbar / (m * w)))
    s_p = 0.5 * (1.0 + math.log(math.pi * m * hbar * w))
    return s_x, s_p


def shannon_power(entropy: float) -> float:
    return math.exp(2.0 * entropy) / (2.0 * math.pi * math.e)


def fisher_shannon(measure: MeasureSet):
    """Return ``(J_x, J_p, P_x, P_p)`` for a record with entropies populated."""
    if measure.S_x is None or measure.S_p is None:
        raise ValueError("fisher_shannon needs both entropies; none are available for this record")
    j_x = shannon_power(measure.S_x)
    j_p = shannon_power(measure.S_p)
    return j_x, j_p, j_x * measure.I_x, j_p * measure.I_p


# -- quadrature --------------------------------------------------------------

@lru_cache(maxsize=64)
def _gh_rule(q: int) -> QuadratureRule:
    return gauss_hermite_rule(q)


def _gh_order(n: int) -> int:
    return min(512, n + 32)


def _gh_integrate(f, beta: float, n: int) -> float:
    """Integral of an exp(-beta y**2)-decaying ``f`` by scaled Gauss-Hermite."""
    rule = _gh_rule(_gh_order(n))
    t = rule.nodes
    combined = np.exp(rule.log_weights + t * t)
    root = math.sqrt(beta)
    return float(np.dot(combined, f(t / root))) / root


def fisher_numeric(state: Eigenstate, scheme: str = "gauss", tol: float = 1e-10) -> SpacePair:
    """``4 * integral (d psi)^2`` in both spaces from analytic derivatives."""
    _check_numeric(state)
    fx = lambda x: state.dpsi(x) ** 2
    fp = lambda p: state.dphi_abs(p) ** 2
    if scheme == "gauss":
        return SpacePair(4.0 * _gh_integrate(fx, state.beta_x, state.n),
                         4.0 * _gh_integrate(fp, state.beta_p, state.n))
    if scheme == "trapezoid":
        ix = adaptive_integrate(fx, state.x_window, tol)
        ip = adaptive_integrate(fp, state.p_window, tol)
        return SpacePair(4.0 * ix.value, 4.0 * ip.value, ix.converged and ip.converged)
    raise ValueError(f"unknown scheme {scheme!r}")


def normalization_numeric(state: Eigenstate, scheme: str = "gauss", tol: float = 1e-12) -> SpacePair:
    _check_numeric(state)
    fx = lambda x: position_density(state, x)
    fp = lambda p: momentum_density(state, p)
    if scheme == "gauss":
        return SpacePair(_gh_integrate(fx, state.beta_x, state.n),
                         _gh_integrate(fp, state.beta_p, state.n))
    if scheme == "trapezoid":
        nx = adaptive_integrate(fx, state.x_window, tol)
        np_ = adaptive_integrate(fp, state.p_window, tol)
        return SpacePair(nx.value, np_.value, nx.converged and np_.converged)
    raise ValueError(f"unknown scheme {scheme!r}")


def moments_numeric(state: Eigenstate, scheme: str = "gauss", tol: float = 1e-10) -> Moments:
    _check_numeric(state)
    rho_x = lambda x: position_density(state, x)
    rho_p = lambda p: momentum_density(state, p)
    integrands = [
        (lambda x: x * rho_x(x), state.beta_x, state.x_window),
        (lambda x: x * x * rho_x(x), state.beta_x, state.x_window),
        (lambda p: p * rho_p(p), state.beta_p, state.p_window),
        (lambda p: p * p * rho_p(p), state.beta_p, state.p_window),
    ]
    converged = True
    values = []
    for f, beta, window in integrands:
        if scheme == "gauss":
            values.append(_gh_integrate(f, beta, state.n))
        elif scheme == "trapezoid":
            res = adaptive_integrate(f, window, tol)
            converged = converged and res.converged
            values.append(res.value)
        else:
            raise ValueError(f"unknown scheme {scheme!r}")
    x1, x2, p1, p2 = values
    uncertainty = math.sqrt(max(x2 - x1 * x1, 0.0) * max(p2 - p1 * p1, 0.0))
    return Moments(x2, p2, uncertainty, x1, p1, converged)


def _neg_rho_log_rho(rho):
    positive = rho > 0
    # 0 ln 0 = 0: clamp the integrand, not the density
    return np.where(positive, -rho * np.log(np.where(positive, rho, 1.0)), 0.0)


@lru_cache(maxsize=8)
def _legendre(order: int):
    return leggauss(order)


def _smoothstep(s):
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)), 30.0 * s * s * (1.0 - s) ** 2


def _node_split_entropy(density, beta: float, n: int, window: float, order: int = 48) -> float:
    """Entropy integral split at the zeros of the density.

    The zeros of psi_n are the order-n Gauss-Hermite nodes. Pieces that end
    on a zero go through a smoothstep substitution that flattens the
    ``y**2 log y`` endpoint behaviour before Gauss-Legendre.
    """
    length = 1.0 / math.sqrt(beta)
    zeros = gauss_hermite_rule(n).nodes * length if n > 0 else np.empty(0)
    breaks = np.concatenate(([-window], zeros, [window]))
    s, w = _legendre(order)
    s = 0.5 * (s + 1.0)
    w = 0.5 * w
    u, du = _smoothstep(s)
    total = 0.0
    for k in range(len(breaks) - 1):
        lo, hi = breaks[k], breaks[k + 1]
        pieces = max(1, math.ceil((hi - lo) / length))
        edges = np.linspace(lo, hi, pieces + 1)
        for j in range(pieces):
            a, b = edges[j], edges[j + 1]
            touches_zero = (j == 0 and k > 0) or (j == pieces - 1 and k < len(breaks) - 2)
            if touches_zero:
                x = a + (b - a) * u
                jac = (b - a) * du
            else:
                x = a + (b - a) * s
                jac = np.full_like(s, b - a)
            total += float(np.dot(w * jac, _neg_rho_log_rho(density(x))))
    return total


def shannon_numeric(state: Eigenstate, scheme: str = "trapezoid", tol: float = 1e-10) -> SpacePair:
    """Differential entropies (nats) of the position and momentum densities."""
    _check_numeric(state)
    rho_x = lambda x: position_density(state, x)
    rho_p = lambda p: momentum_density(state, p)
    if scheme == "trapezoid":
        sx = adaptive_integrate(lambda x: _neg_rho_log_rho(rho_x(x)), state.x_window, tol)
        sp = adaptive_integrate(lambda p: _neg_rho_log_rho(rho_p(p)), state.p_window, tol)
        return SpacePair(sx.value, sp.value, sx.converged and sp.converged)
    if scheme == "gauss":
        return SpacePair(_node_split_entropy(rho_x, state.beta_x, state.n, state.x_window),
                         _node_split_entropy(rho_p, state.beta_p, state.n, state.p_window))
    raise ValueError(f"unknown scheme {scheme!r}")


# -- assembled records -------------------------------------------------------

def closed_measures(eff: EffectiveOscillator, n: int) -> MeasureSet:
    i_x, i_p = fisher_closed(eff, n)
    x2, p2, dxdp = moments_closed(eff, n)
    record = MeasureSet(i_x, i_p, None, None, x2, p2, dxdp, None, None, None, None, CLOSED)
    if n != 0:
        return record
    s_x, s_p = shannon_closed_ground(eff)
    record = replace(record, S_x=s_x, S_p=s_p)
    j_x, j_p, p_x, p_p = fisher_shannon(record)
    return replace(record, J_x=j_x, J_p=j_p, P_x=p_x, P_p=p_p)


def quadrature_measures(eff: EffectiveOscillator, n: int, tol: float = 1e-10) -> MeasureSet:
    state = Eigenstate(eff, n)
    fisher = fisher_numeric(state, "gauss")
    mom = moments_numeric(state, "gauss")
    ent = shannon_numeric(state, "trapezoid", tol)
    record = MeasureSet(fisher.x, fisher.p, ent.x, ent.p, mom.x2_mean, mom.p2_mean,
                        mom.uncertainty, None, None, None, None, QUADRATURE,
                        fisher.converged and mom.converged and ent.converged)
    j_x, j_p, p_x, p_p = fisher_shannon(record)
    return replace(record, J_x=j_x, J_p=j_p, P_x=p_x, P_p=p_p)


def compute_measures(eff: EffectiveOscillator, n: int, method: str = CLOSED,
                     tol: float = 1e-10) -> MeasureSet:
    if method == CLOSED:
        return closed_measures(eff, n)
    if method == QUADRATURE:
        return quadrature_measures(eff, n, tol)
    raise ValueError(f"unknown method {method!r}")
