#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# multiplicative_subordination.py - Disk subordination for unitaries and free multiplicative convolution

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from additive_subordination import free_cumulants, noncrossing_partitions, solve_fixed_point
from spectral_measures import (
    CircleMeasure, circle_cauchy, circle_cauchy_derivative, circle_measure, eta_over_w, moments,
)
from subordination import (
    BadParams, DegenerateTransform, Display, Event, NoConvergence, SolverSettings, emit,
)


_MOMENT_ORDER_CAP: int = 16
_FFT_NODES: int = 64
_FFT_RADIUS: float = 0.5
_PROBES: tuple[complex, ...] = (0.5, -0.5, 0.5j, -0.5j)
_CLAMP_FLOOR: float = 0.5
_BACKTRACK: int = 30


@dataclass(frozen=True)
class DiskSubordinationEval:
    """g in the unit disk with K_nu(g) = target."""
    target: complex
    g: complex
    residual: float
    ball_margin: float       # 1 - |g|
    iterations: int = 0


@dataclass
class MultiplicativeConvolution:
    """Moments m_0..m_order of mu boxtimes nu with the solver's certificate."""
    moments: np.ndarray          # complex
    residual: float              # max |eta_mu(omega1) - eta_nu(omega2)| over the nodes
    nodes: int
    radius: float

    def measure(self, grid_size: int = 512) -> CircleMeasure:
        return circle_density_from_moments(self.moments, grid_size)


# ---------------------------------------------------------------------------
# Disk subordination
# ---------------------------------------------------------------------------

def _clamp(candidate: complex, previous: complex) -> complex:
    radius = max(0.95 * abs(previous), _CLAMP_FLOOR)
    return candidate * (radius / abs(candidate))


def disk_subordination_solve(nu: CircleMeasure, target: complex, tol: float = 1e-10,
                             settings: SolverSettings | None = None,
                             display: Display | None = None) -> DiskSubordinationEval:
    """Solve K_nu(g) = target for g in the open unit disk.

    Newton from g = 0 with backtracking. An iterate that would leave the disk is
    pulled back radially to radius max(0.95|g_prev|, 0.5).
    """
    if tol < 1e-12:
        raise BadParams(f"tol must be at least 1e-12, got {tol}")
    settings = settings or SolverSettings()
    target = complex(target)
    base = complex(circle_cauchy(nu, 0.0))
    if max(abs(complex(circle_cauchy(nu, p)) - base) for p in _PROBES) <= tol:
        raise DegenerateTransform(f"K_{nu.name or 'nu'} is constant on the disk; "
                                  "use the Haar check instead of solving")
    g = 0j
    r = base - target
    for it in range(1, settings.max_iter + 1):
        if abs(r) <= tol:
            emit(display, Event("solver_converged", source="multiplicative_subordination",
                                point=g, value=abs(r), count=it - 1))
            return DiskSubordinationEval(target, g, abs(r), 1.0 - abs(g), it - 1)
        slope = complex(circle_cauchy_derivative(nu, g))
        if slope == 0:
            break
        step = -r / slope
        for _ in range(_BACKTRACK):
            cand = g + step
            if abs(cand) >= 1.0:
                cand = _clamp(cand, g)
                emit(display, Event("clamp", source="multiplicative_subordination",
                                    point=cand, value=abs(cand)))
            r_cand = complex(circle_cauchy(nu, cand)) - target
            if abs(r_cand) < abs(r):
                break
            step *= 0.5
        g, r = cand, r_cand
    emit(display, Event("no_convergence", source="multiplicative_subordination",
                        point=target, count=settings.max_iter))
    raise NoConvergence(f"no g in the disk with K(g) = {target} (last residual {abs(r):.3e})",
                        max_iter=settings.max_iter, points=[target], residual=abs(r))


# ---------------------------------------------------------------------------
# Free multiplicative convolution on the circle
# ---------------------------------------------------------------------------

def _eta(nu: CircleMeasure, w: np.ndarray) -> np.ndarray:
    return w * eta_over_w(nu, w)


def free_mult_convolve_unitary(mu: CircleMeasure, nu: CircleMeasure, order: int,
                               settings: SolverSettings | None = None,
                               display: Display | None = None) -> MultiplicativeConvolution:
    """Moments of uv for free unitaries u ~ mu, v ~ nu.

    omega1 is the fixed point of w -> z (eta_nu/w)(z (eta_mu/w)(w)) on a circle
    |z| = 0.5; then eta_{mu boxtimes nu}(z) = eta_mu(omega1) and psi = eta/(1 - eta)
    is the moment series, read off by an FFT.
    """
    if not 0 <= order <= _MOMENT_ORDER_CAP:
        raise BadParams(f"order must lie in [0, {_MOMENT_ORDER_CAP}], got {order}")
    settings = settings or SolverSettings()
    z = _FFT_RADIUS * np.exp(2j * math.pi * np.arange(_FFT_NODES) / _FFT_NODES)

    def phi(w: np.ndarray, zz: np.ndarray) -> np.ndarray:
        return zz * eta_over_w(nu, zz * eta_over_w(mu, w))

    def admissible(w: np.ndarray, zz: np.ndarray) -> np.ndarray:
        return np.abs(w) < 1.0

    fp = solve_fixed_point(phi, z, np.zeros_like(z), settings, admissible)
    if not fp.converged.all():
        bad = [complex(p) for p in z[~fp.converged]]
        raise NoConvergence(f"multiplicative subordination failed at {len(bad)} node(s)",
                            max_iter=settings.max_iter, points=bad,
                            residual=float(fp.step_residual.max()))
    omega1 = fp.w
    omega2 = z * eta_over_w(mu, omega1)
    eta1, eta2 = _eta(mu, omega1), _eta(nu, omega2)
    residual = float(np.max(np.abs(eta1 - eta2)))
    emit(display, Event("grid_done", source="multiplicative_subordination",
                        value=residual, count=_FFT_NODES))
    psi = eta1 / (1.0 - eta1)
    coeffs = np.fft.fft(psi) / _FFT_NODES
    k = np.arange(order + 1)
    m = coeffs[k] / _FFT_RADIUS ** k
    m[0] = 1.0
    return MultiplicativeConvolution(m, residual, _FFT_NODES, _FFT_RADIUS)


def circle_density_from_moments(m: Sequence[complex], grid_size: int = 512) -> CircleMeasure:
    """Fejer-summed density from m_0..m_K, using m_{-k} = conj(m_k)."""
    m = np.asarray(m, dtype=complex)
    K = m.size - 1
    theta = 2.0 * math.pi * np.arange(grid_size) / grid_size
    dens = np.full(grid_size, 1.0 / (2.0 * math.pi))
    for k in range(1, K + 1):
        weight = 1.0 - k / (K + 1)
        dens += weight * (m[k] * np.exp(-1j * k * theta)).real / math.pi
    return circle_measure(samples=np.clip(dens, 0.0, None), name="recovered")


# ---------------------------------------------------------------------------
# Exact oracle
# ---------------------------------------------------------------------------

def kreweras_complement(partition: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    """K(pi) as the cycles of pi^{-1} gamma, gamma = (1 2 ... n); blocks read as cycles in increasing order."""
    perm = {}
    for block in partition:
        ordered = sorted(block)
        for a, b in zip(ordered, ordered[1:] + ordered[:1]):
            perm[a] = b
    inverse = {b: a for a, b in perm.items()}
    k = {i: inverse[i % n + 1] for i in range(1, n + 1)}
    seen: set[int] = set()
    blocks = []
    for start in range(1, n + 1):
        if start in seen:
            continue
        cycle, i = [], start
        while i not in seen:
            seen.add(i)
            cycle.append(i)
            i = k[i]
        blocks.append(tuple(sorted(cycle)))
    return tuple(sorted(blocks))


def exact_circle_moments(mu: CircleMeasure, order: int, limit: int = 10**6) -> list[Fraction]:
    """Real parts of m_0..m_order as Fractions; only meaningful when they are rational."""
    return [Fraction(moments(mu, k).real).limit_denominator(limit) for k in range(order + 1)]


def mult_moments_oracle(m_u: Sequence[Fraction], m_v: Sequence[Fraction], order: int) -> list[Fraction]:
    """tau((uv)^n) for n <= order by summing kappa_pi[u] * m_{K(pi)}[v] over NC(n)."""
    if not 1 <= order <= 8:
        raise BadParams(f"order must lie in [1, 8], got {order}")
    kappa = free_cumulants(list(m_u), order)
    out = [Fraction(1)]
    for n in range(1, order + 1):
        total = Fraction(0)
        for part in noncrossing_partitions(n):
            term = Fraction(1)
            for block in part:
                term *= kappa[len(block) - 1]
            for block in kreweras_complement(part, n):
                term *= m_v[len(block)]
            total += term
        out.append(total)
    return out
