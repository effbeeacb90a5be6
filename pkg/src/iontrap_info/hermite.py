"""Hermite polynomials and functions, Gauss-Hermite rules, adaptive trapezoid.

All recurrences run on mantissas with a separately carried natural-log
scale, so high orders neither overflow (``2**n n!``) nor underflow in the
Gaussian tail before the final recombination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

_RESCALE_ABOVE = 1e150
_LOG_PI = math.log(math.pi)


class QuadratureError(RuntimeError):
    """A quadrature rule could not be constructed to the requested accuracy."""


@dataclass(frozen=True)
class HermiteEval:
    """Physicists' Hermite polynomial H_n(x) = value * exp(log_scale)."""

    n: int
    value: np.ndarray
    derivative: np.ndarray
    log_scale: np.ndarray

    def unscaled(self):
        scale = np.exp(self.log_scale)
        return self.value * scale, self.derivative * scale


def _check_order(n):
    if int(n) != n or n < 0:
        raise ValueError(f"n={n!r}: order must be a non-negative integer")
    return int(n)


def _rescale(cur, prev, log_scale):
    big = np.abs(cur) > _RESCALE_ABOVE
    if np.any(big):
        shift = np.where(big, np.log(np.abs(cur) + (~big)), 0.0)
        factor = np.exp(-shift)
        cur = cur * factor
        prev = prev * factor
        log_scale = log_scale + shift
    return cur, prev, log_scale


def hermite_polynomial(n: int, x) -> HermiteEval:
    """Evaluate H_n and H_n' at ``x`` by the three-term recurrence."""
    n = _check_order(n)
    x = np.asarray(x, dtype=float)
    log_scale = np.zeros_like(x)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(n):
        nxt = 2.0 * x * cur - 2.0 * k * prev
        prev, cur = cur, nxt
        cur, prev, log_scale = _rescale(cur, prev, log_scale)
    return HermiteEval(n, cur, 2.0 * n * prev, log_scale)


def scaled_hermite_functions(n: int, t):
    """Mantissas of the unit-width Hermite functions of orders n and n-1.

    Returns ``(h_n, h_nm1, log_scale)`` with
    ``psi_k(t) = h_k * exp(log_scale)`` and ``psi_k`` orthonormal on the
    real line (Gaussian factor exp(-t**2/2) folded into ``log_scale``).
    """
    n = _check_order(n)
    t = np.asarray(t, dtype=float)
    log_scale = -0.5 * t * t - 0.25 * _LOG_PI
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    for k in range(n):
        nxt = math.sqrt(2.0 / (k + 1)) * t * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        cur, prev, log_scale = _rescale(cur, prev, log_scale)
    return cur, prev, log_scale


def hermite_function(n: int, x, inverse_length_sq: float):
    """Normalized oscillator eigenfunction psi_n(x) and its x-derivative.

    ``inverse_length_sq`` is beta = m * omega_eff / hbar, so that
    psi_n(x) ~ H_n(sqrt(beta) x) exp(-beta x**2 / 2).
    """
    if not inverse_length_sq > 0:
        raise ValueError("inverse_length_sq must be > 0")
    beta = inverse_length_sq
    t = math.sqrt(beta) * np.asarray(x, dtype=float)
    h_n, h_nm1, log_scale = scaled_hermite_functions(n, t)
    scale = np.exp(log_scale) * beta**0.25
    value = h_n * scale
    derivative = math.sqrt(beta) * (math.sqrt(2.0 * n) * h_nm1 - t * h_n) * scale
    return value, derivative


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    kind: str
    log_weights: np.ndarray | None = None

    def integrate(self, values) -> float:
        """Weighted sum of integrand samples taken at ``nodes``."""
        return float(np.dot(self.weights, values))


def gauss_hermite_rule(q: int, max_newton: int = 12) -> QuadratureRule:
    """Nodes and weights for integrals of f(x) exp(-x**2) over the real line.

    Golub-Welsch eigenvalues seed a Newton polish on the scaled Hermite
    functions; weights come from ``exp(-x**2) / (q psi_{q-1}(x)**2)`` in
    log form. For q above ~370 the outermost weights underflow binary64;
    ``log_weights`` stays finite for every node.
    """
    q = _check_order(q)
    if not 1 <= q <= 512:
        raise ValueError(f"q={q}: order must lie in [1, 512]")
    if q == 1:
        return QuadratureRule(np.zeros(1), np.array([math.sqrt(math.pi)]), 1,
                              "gauss-hermite", np.array([0.5 * _LOG_PI]))

    off = np.sqrt(np.arange(1, q) / 2.0)
    t = eigh_tridiagonal(np.zeros(q), off, eigvals_only=True)
    t = np.sort(t)

    for _ in range(max_newton):
        h_q, h_qm1, _scale = scaled_hermite_functions(q, t)
        step = h_q / (math.sqrt(2.0 * q) * h_qm1 - t * h_q)
        t = t - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(t))):
            break
    else:
        raise QuadratureError(f"Newton polish of Gauss-Hermite nodes did not converge for q={q}")

    t = 0.5 * (t - t[::-1])
    if q % 2:
        t[q // 2] = 0.0

    _, h_qm1, log_scale = scaled_hermite_functions(q, t)
    log_w = -t * t - math.log(q) - 2.0 * (np.log(np.abs(h_qm1)) + log_scale)
    log_w = 0.5 * (log_w + log_w[::-1])
    return QuadratureRule(t, np.exp(log_w), q, "gauss-hermite", log_w)


def trapezoid_rule(half_width: float, intervals: int) -> QuadratureRule:
    x = np.linspace(-half_width, half_width, intervals + 1)
    h = 2.0 * half_width / intervals
    w = np.full(intervals + 1, h)
    w[0] = w[-1] = 0.5 * h
    return QuadratureRule(x, w, intervals + 1, "trapezoid")


class Integral(NamedTuple):
    value: float
    error: float
    converged: bool


def adaptive_integrate(f: Callable[[np.ndarray], np.ndarray], half_width: float,
                       tol: float = 1e-10, min_intervals: int = 256,
                       max_doublings: int = 14) -> Integral:
    """Trapezoid on [-half_width, half_width], doubling until estimates agree.

    ``f`` must accept an array. On exhausting the doubling budget the last
    estimate is returned with ``converged=False``.
    """
    if not half_width > 0:
        raise ValueError("half_width must be > 0")
    rule = trapezoid_rule(half_width, min_intervals)
    estimate = rule.integrate(f(rule.nodes))
    h = 2.0 * half_width / min_intervals
    intervals = min_intervals
    diff = math.inf
    for _ in range(max_doublings):
        mid = -half_width + h * (np.arange(intervals) + 0.5)
        refined = 0.5 * estimate + 0.5 * h * float(np.sum(f(mid)))
        diff = abs(refined - estimate)
        estimate = refined
        h *= 0.5
        intervals *= 2
        if diff < tol:
            return Integral(estimate, diff, True)
    return Integral(estimate, diff, False)
