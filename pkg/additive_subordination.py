#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# additive_subordination.py - Free additive convolution through subordination
#
# omega1 is the fixed point of w -> z + h_nu(z + h_mu(w)); then omega2 = z + h_mu(omega1)
# and G_{mu boxplus nu}(z) = G_mu(omega1) = G_nu(omega2). Free cumulants give an
# oracle that never touches the fixed point.

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from spectral_measures import LineMeasure, _cauchy, stieltjes_invert, transform_moments
from subordination import (
    DEFAULT_ETAS, BadParams, Display, DomainError, Event, NoConvergence, SolverSettings, emit,
)


_EPS: float = np.finfo(float).eps
_FD_STEP: float = 1e-7
_CUMULANT_CAP: int = 12


# ---------------------------------------------------------------------------
# Generic damped fixed-point solver
# ---------------------------------------------------------------------------

@dataclass
class FixedPointResult:
    """Outcome of a vectorized fixed-point solve; one entry per point."""
    w: np.ndarray
    iterations: np.ndarray
    step_residual: np.ndarray      # |phi(w) - w| at exit
    converged: np.ndarray


def solve_fixed_point(
    phi: Callable[[np.ndarray, np.ndarray], np.ndarray],
    z: np.ndarray,
    w0: np.ndarray,
    settings: SolverSettings,
    admissible: Callable[[np.ndarray, np.ndarray], np.ndarray],
    stop: float | None = None,
) -> FixedPointResult:
    """Solve w = phi(w, z) pointwise over the array z.

    Damped Picard steps w <- w + damping*(phi(w) - w) until |phi(w) - w| drops
    below settings.handoff, then Newton with a forward-difference derivative.
    A Newton candidate that is not admissible falls back to the damped step.
    """
    stop = settings.tol * 1e-2 if stop is None else stop
    w = np.array(w0, dtype=complex)
    iterations = np.zeros(w.shape, dtype=int)
    residual = np.full(w.shape, np.inf)
    done = np.zeros(w.shape, dtype=bool)
    for _ in range(settings.max_iter):
        active = np.flatnonzero(~done)
        if not active.size:
            break
        wa, za = w[active], z[active]
        pw = phi(wa, za)
        r = pw - wa
        ra = np.abs(r)
        residual[active] = ra
        iterations[active] += 1
        finished = (ra <= stop) | (ra <= 64.0 * _EPS * np.maximum(1.0, np.abs(wa)))
        step = settings.damping * r
        polish = (ra < settings.handoff) & ~finished
        if polish.any():
            wp = wa[polish]
            h = _FD_STEP * np.maximum(1.0, np.abs(wp))
            slope = (phi(wp + h, za[polish]) - pw[polish]) / h - 1.0
            with np.errstate(divide="ignore", invalid="ignore"):
                newton = -r[polish] / slope
            cand = wp + newton
            ok = np.isfinite(cand) & admissible(cand, za[polish])
            step[polish] = np.where(ok, newton, step[polish])
        w[active] = np.where(finished, wa, wa + step)
        done[active] = finished
    return FixedPointResult(w, iterations, residual, done)


# ---------------------------------------------------------------------------
# Scalar subordination
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubordinationEval:
    """Subordination values at one point z of the upper half-plane."""
    z: complex
    omega1: complex
    omega2: complex
    g_conv: complex          # G_{mu boxplus nu}(z) = G_mu(omega1)
    residual: float          # |G_mu(omega1) - G_nu(omega2)|
    iterations: int


@dataclass
class SubordinationTable:
    """Vectorized counterpart of SubordinationEval over an array of points."""
    z: np.ndarray
    omega1: np.ndarray
    omega2: np.ndarray
    g_conv: np.ndarray
    residual: np.ndarray
    iterations: np.ndarray

    def rows(self) -> list[SubordinationEval]:
        return [
            SubordinationEval(complex(z), complex(o1), complex(o2), complex(g), float(r), int(it))
            for z, o1, o2, g, r, it in zip(self.z.ravel(), self.omega1.ravel(), self.omega2.ravel(),
                                           self.g_conv.ravel(), self.residual.ravel(), self.iterations.ravel())
        ]


def _h(mu: LineMeasure, w: np.ndarray) -> np.ndarray:
    return 1.0 / _cauchy(mu, w) - w


def subordination_grid(mu: LineMeasure, nu: LineMeasure, z: np.ndarray | Sequence[complex],
                       settings: SolverSettings | None = None,
                       display: Display | None = None,
                       w0: np.ndarray | Sequence[complex] | None = None) -> SubordinationTable:
    """Solve the subordination pair at every point of z (Im z > 0).

    omega1 starts from w0 when given, else from z + i.
    """
    settings = settings or SolverSettings()
    z = np.asarray(z, dtype=complex)
    if np.any(~(z.imag > 0)):
        raise DomainError("subordination needs Im z > 0 at every point")
    flat = z.ravel()
    emit(display, Event("grid_start", source="additive_subordination", count=flat.size))

    def phi(w: np.ndarray, zz: np.ndarray) -> np.ndarray:
        return zz + _h(nu, zz + _h(mu, w))

    def admissible(w: np.ndarray, zz: np.ndarray) -> np.ndarray:
        return w.imag > 0.5 * zz.imag

    start = flat + 1j if w0 is None else np.asarray(w0, dtype=complex).ravel()
    fp = solve_fixed_point(phi, flat, start, settings, admissible)
    omega1 = fp.w
    omega2 = flat + _h(mu, omega1)
    g1, g2 = _cauchy(mu, omega1), _cauchy(nu, omega2)
    residual = np.abs(g1 - g2)
    failed = ~fp.converged | ~(residual <= settings.tol)
    if failed.any():
        bad = [complex(p) for p in flat[failed]]
        for p, it in zip(bad[:5], fp.iterations[failed][:5]):
            emit(display, Event("no_convergence", source="additive_subordination", point=p, count=int(it)))
        raise NoConvergence(
            f"subordination did not converge at {len(bad)} point(s), first at {bad[0]}; "
            f"raise Im z or max_iter (max_iter={settings.max_iter})",
            max_iter=settings.max_iter, points=bad, residual=float(np.max(residual[failed])))
    emit(display, Event("grid_done", source="additive_subordination",
                        value=float(residual.max()), count=flat.size))
    shape = z.shape
    return SubordinationTable(z, omega1.reshape(shape), omega2.reshape(shape), g1.reshape(shape),
                              residual.reshape(shape), fp.iterations.reshape(shape))


def subordination_pair(mu: LineMeasure, nu: LineMeasure, z: complex, tol: float | None = None,
                       settings: SolverSettings | None = None) -> SubordinationEval:
    """omega1, omega2 and G_{mu boxplus nu} at a single point."""
    settings = (settings or SolverSettings()).with_overrides(tol=tol)
    return subordination_grid(mu, nu, np.array([z]), settings).rows()[0]


def convolved_cauchy(mu: LineMeasure, nu: LineMeasure,
                     settings: SolverSettings | None = None) -> Callable[[np.ndarray], np.ndarray]:
    """z -> G_{mu boxplus nu}(z) for arrays of points in the upper half-plane."""
    def G(z: np.ndarray) -> np.ndarray:
        return subordination_grid(mu, nu, z, settings).g_conv
    return G


def _sum_support(mu: LineMeasure, nu: LineMeasure) -> tuple[float, float]:
    (a, b), (c, d) = mu.support(), nu.support()
    return a + c, b + d


def free_add_convolve(mu: LineMeasure, nu: LineMeasure, lo: float | None = None, hi: float | None = None,
                      n: int = 801, etas: tuple[float, ...] = DEFAULT_ETAS,
                      settings: SolverSettings | None = None,
                      display: Display | None = None) -> LineMeasure:
    """The free additive convolution, densified by Stieltjes inversion of G_mu(omega1(z)).

    Atoms of the result come back smeared by the eta sequence. The default grid
    pads the sum of the supports by a quarter of its width.
    """
    a, b = _sum_support(mu, nu)
    pad = 0.25 * max(b - a, 1.0)
    lo = a - pad if lo is None else lo
    hi = b + pad if hi is None else hi

    warm: dict[str, np.ndarray] = {}

    def G(z: np.ndarray) -> np.ndarray:
        # each eta starts from the omega1 of the previous, larger one
        table = subordination_grid(mu, nu, z, settings, display, warm.get("omega1"))
        warm["omega1"] = table.omega1
        return table.g_conv

    result = stieltjes_invert(G, lo, hi, n, etas)
    return LineMeasure(result.atoms, result.lo, result.hi, result.samples, result.edges,
                       f"{mu.name or 'mu'} boxplus {nu.name or 'nu'}", result.renormalization)


def support_estimate(measure: LineMeasure, rel_threshold: float = 1e-3) -> tuple[float, float]:
    """Interval where the recovered density exceeds rel_threshold times its maximum."""
    if not measure.n:
        return measure.support()
    dens = measure.density_values()
    finite = np.where(np.isfinite(dens), dens, 0.0)
    above = np.flatnonzero(finite > rel_threshold * finite.max())
    t = measure.grid
    return float(t[above[0]]), float(t[above[-1]])


def convolution_moments(mu: LineMeasure, nu: LineMeasure, order: int, about: float = 0.0,
                        nodes: int = 256, settings: SolverSettings | None = None) -> np.ndarray:
    """Moments of mu boxplus nu about a point, from a contour integral of G_mu(omega1(z))."""
    settings = (settings or SolverSettings()).with_overrides(tol=1e-13)
    a, b = _sum_support(mu, nu)
    center, half = 0.5 * (a + b), 0.5 * (b - a)
    return transform_moments(convolved_cauchy(mu, nu, settings), center, 1.25 * half + 0.25,
                             order, nodes, about=about)


def convolution_cumulants(mu: LineMeasure, nu: LineMeasure, order: int,
                          nodes: int = 256, settings: SolverSettings | None = None) -> list[float]:
    """Free cumulants kappa_1..kappa_order of mu boxplus nu, computed about the support center."""
    a, b = _sum_support(mu, nu)
    center = 0.5 * (a + b)
    central = convolution_moments(mu, nu, order, about=center, nodes=nodes, settings=settings)
    kappa = free_cumulants([1.0] + [float(m) for m in central[1:]], order)
    kappa[0] += center
    return kappa


# ---------------------------------------------------------------------------
# Free cumulants
# ---------------------------------------------------------------------------

def _series_powers(m: Sequence, degree: int) -> list[list]:
    """powers[s][j] = [z^j] M(z)^s for M(z) = sum_k m_k z^k, s <= degree."""
    one = m[0] - m[0] + 1
    powers = [[one] + [one - one] * degree]
    for _ in range(degree):
        prev = powers[-1]
        powers.append([sum((prev[i] * m[j - i] for i in range(j + 1)), one - one) for j in range(degree + 1)])
    return powers


def _check_moments(m: Sequence, order: int) -> None:
    if not 1 <= order <= _CUMULANT_CAP:
        raise BadParams(f"order must lie in [1, {_CUMULANT_CAP}], got {order}")
    if len(m) <= order:
        raise BadParams(f"need moments m_0..m_{order}, got {len(m)} values")
    if m[0] != 1:
        raise BadParams(f"m[0] must be 1, got {m[0]!r}")


def free_cumulants(m: Sequence, order: int) -> list:
    """Moments m_0..m_order to free cumulants kappa_1..kappa_order.

    Uses m_n = sum_s kappa_s [z^{n-s}] M(z)^s. Arithmetic follows the input type,
    so Fractions in give exact Fractions out.
    """
    _check_moments(m, order)
    m = list(m[:order + 1])
    powers = _series_powers(m, order)
    kappa = [m[0] - m[0]] * (order + 1)
    for n in range(1, order + 1):
        total = m[n]
        for s in range(1, n):
            total = total - kappa[s] * powers[s][n - s]
        kappa[n] = total
    return kappa[1:]


def moments_from_cumulants(kappa: Sequence, order: int) -> list:
    """Inverse of free_cumulants: kappa_1..kappa_order to m_0..m_order."""
    if not 1 <= order <= _CUMULANT_CAP or len(kappa) < order:
        raise BadParams(f"need kappa_1..kappa_{order} with order <= {_CUMULANT_CAP}")
    one = kappa[0] - kappa[0] + 1
    m = [one]
    for n in range(1, order + 1):
        padded = m + [one - one] * (order + 1 - len(m))
        powers = _series_powers(padded, order)
        m.append(sum((kappa[s - 1] * powers[s][n - s] for s in range(1, n + 1)), one - one))
    return m


def _set_partitions(items: list[int]) -> list[list[list[int]]]:
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for part in _set_partitions(rest):
        out.append([[first]] + part)
        for i in range(len(part)):
            out.append(part[:i] + [[first] + part[i]] + part[i + 1:])
    return out


def is_noncrossing(partition: Sequence[Sequence[int]]) -> bool:
    """No a < b < c < d with a, c in one block and b, d in another."""
    label = {x: i for i, block in enumerate(partition) for x in block}
    for a, b, c, d in itertools.combinations(sorted(label), 4):
        if label[a] == label[c] and label[b] == label[d] and label[a] != label[b]:
            return False
    return True


def noncrossing_partitions(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """Every non-crossing partition of {1, ..., n}, by brute-force enumeration."""
    out = []
    for part in _set_partitions(list(range(1, n + 1))):
        if is_noncrossing(part):
            out.append(tuple(sorted(tuple(sorted(b)) for b in part)))
    return sorted(out)


def moments_by_partitions(kappa: Sequence, n: int) -> object:
    """m_n as the sum over NC(n) of products of cumulants over blocks."""
    total = kappa[0] - kappa[0]
    for part in noncrossing_partitions(n):
        term = kappa[0] - kappa[0] + 1
        for block in part:
            term = term * kappa[len(block) - 1]
        total = total + term
    return total
