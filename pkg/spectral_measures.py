#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# spectral_measures.py - Measures on the line and the circle, and their transforms
#
# A LineMeasure is atoms plus a density on a uniform grid. The density is stored
# as a smooth factor s(t) times the endpoint weight (t-lo)^a (hi-t)^b with a, b
# in {-1/2, 0, 1/2}; quadrature weights are exact for piecewise-linear s against
# that weight, so arcsine and Marchenko-Pastur edges integrate cleanly. After
# construction every measure is a finite set of positive point masses, and all
# transforms are sums over those masses.

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Union

import numpy as np

from subordination import (
    DEFAULT_ETAS, DEFAULT_GRID_SIZE,
    BadParams, DomainError, NonPositiveDensity, UnknownFamily, ZeroTransform,
)


_NORMALIZATION_TOL: float = 1e-9
_ZERO_G: float = 1e-300
_GL_ORDER: int = 8
_CHUNK: int = 1 << 22          # z-points x nodes per vectorized block
_MOMENT_CAP: int = 32
_ALLOWED_EDGES: tuple[float, ...] = (-0.5, 0.0, 0.5)
_TWO_PI: float = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

def _angle(t: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """phi in [0, pi] with t = lo + (hi - lo) sin^2(phi/2), accurate at both ends."""
    length = hi - lo
    left = 2.0 * np.arcsin(np.sqrt(np.clip((t - lo) / length, 0.0, 1.0)))
    right = math.pi - 2.0 * np.arcsin(np.sqrt(np.clip((hi - t) / length, 0.0, 1.0)))
    return np.where(t <= 0.5 * (lo + hi), left, right)


def _product_weights(lo: float, hi: float, n: int, edges: tuple[float, float]) -> np.ndarray:
    """Weights q_j = integral of hat_j(t) (t-lo)^a (hi-t)^b dt on the uniform n-point grid."""
    h = (hi - lo) / (n - 1)
    if edges == (0.0, 0.0):
        w = np.full(n, h)
        w[0] = w[-1] = 0.5 * h
        return w
    alpha, beta = edges
    length = hi - lo
    t = np.linspace(lo, hi, n)
    phi = _angle(t, lo, hi)
    x, gw = np.polynomial.legendre.leggauss(_GL_ORDER)
    mid = 0.5 * (phi[:-1] + phi[1:])
    half = 0.5 * (phi[1:] - phi[:-1])
    ph = mid[:, None] + half[:, None] * x[None, :]
    s, c = np.sin(0.5 * ph), np.cos(0.5 * ph)
    tt = lo + length * s**2
    # w(t) dt/dphi
    dens = length ** (1.0 + alpha + beta) * s ** (2.0 * alpha + 1.0) * c ** (2.0 * beta + 1.0)
    jac = half[:, None] * gw[None, :] * dens
    rising = (tt - t[:-1, None]) / h
    falling = (t[1:, None] - tt) / h
    weights = np.zeros(n)
    weights[:-1] += np.sum(jac * falling, axis=1)
    weights[1:] += np.sum(jac * rising, axis=1)
    return weights


def _blocked_sum(z: np.ndarray, kernel: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 points: np.ndarray, masses: np.ndarray) -> np.ndarray:
    """sum_j masses_j * kernel(z, points_j), evaluated in memory-bounded blocks of z."""
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, _CHUNK // max(1, points.size))
    for start in range(0, flat.size, step):
        block = flat[start:start + step, None]
        out[start:start + step] = kernel(block, points[None, :]) @ masses
    return out.reshape(z.shape)


def _scalar_or_array(value: np.ndarray, like: object) -> complex | np.ndarray:
    return complex(value) if np.ndim(like) == 0 else value


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LineMeasure:
    """Compactly supported probability measure on the real line."""
    atoms: tuple[tuple[float, float], ...] = ()
    lo: float = 0.0
    hi: float = 0.0
    samples: np.ndarray = field(default_factory=lambda: np.zeros(0))   # smooth factor on the grid
    edges: tuple[float, float] = (0.0, 0.0)      # endpoint exponents
    name: str = ""
    renormalization: float = 1.0                 # factor applied by density recovery

    def __post_init__(self) -> None:
        for pos, weight in self.atoms:
            if not (math.isfinite(pos) and 0.0 < weight <= 1.0 + _NORMALIZATION_TOL):
                raise BadParams(f"atom ({pos}, {weight}) needs a finite position and weight in (0, 1]")
        if self.samples.size:
            if self.samples.size < 2 or not self.lo < self.hi:
                raise BadParams(f"density grid needs at least 2 samples on lo < hi, got "
                                f"{self.samples.size} samples on [{self.lo}, {self.hi}]")
            if not np.all(np.isfinite(self.samples)) or np.any(self.samples < 0):
                raise BadParams("density samples must be finite and nonnegative")
        if any(e not in _ALLOWED_EDGES for e in self.edges):
            raise BadParams(f"endpoint exponents must lie in {_ALLOWED_EDGES}, got {self.edges}")
        total = self.total_mass
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise BadParams(f"total mass {total!r} differs from 1")

    @property
    def n(self) -> int:
        return int(self.samples.size)

    @cached_property
    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n) if self.n else np.zeros(0)

    @cached_property
    def quadrature(self) -> np.ndarray:
        return _product_weights(self.lo, self.hi, self.n, self.edges) if self.n else np.zeros(0)

    @cached_property
    def points(self) -> np.ndarray:
        """Positions of every point mass: atoms first, then grid nodes."""
        return np.concatenate([np.array([a[0] for a in self.atoms], dtype=float), self.grid])

    @cached_property
    def masses(self) -> np.ndarray:
        return np.concatenate([np.array([a[1] for a in self.atoms], dtype=float),
                               self.quadrature * self.samples])

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    @property
    def atom_mass(self) -> float:
        return float(sum(w for _, w in self.atoms))

    def density_values(self) -> np.ndarray:
        """Density at the grid nodes; singular endpoints evaluate to inf."""
        t = self.grid
        a, b = self.edges
        with np.errstate(divide="ignore"):
            return self.samples * np.power(t - self.lo, a) * np.power(self.hi - t, b)

    def density_at(self, t: np.ndarray) -> np.ndarray:
        """Density by linear interpolation of the smooth factor; zero off the grid."""
        t = np.asarray(t, dtype=float)
        if not self.n:
            return np.zeros_like(t)
        inside = (t >= self.lo) & (t <= self.hi)
        s = np.interp(t, self.grid, self.samples)
        a, b = self.edges
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.power(np.clip(t - self.lo, 0.0, None), a) * np.power(np.clip(self.hi - t, 0.0, None), b)
        return np.where(inside, s * w, 0.0)

    def support(self) -> tuple[float, float]:
        """Smallest interval holding every atom and the density grid."""
        pts = self.points
        if not pts.size:
            return 0.0, 0.0
        return float(pts.min()), float(pts.max())


@dataclass(frozen=True, eq=False)
class CircleMeasure:
    """Probability measure on the unit circle: atoms plus a periodic density grid."""
    atoms: tuple[tuple[float, float], ...] = ()
    samples: np.ndarray = field(default_factory=lambda: np.zeros(0))   # density at offset + 2*pi*j/n
    offset: float = 0.0
    name: str = ""

    def __post_init__(self) -> None:
        for angle, weight in self.atoms:
            if not (math.isfinite(angle) and 0.0 <= angle < _TWO_PI and 0.0 < weight <= 1.0 + _NORMALIZATION_TOL):
                raise BadParams(f"circle atom ({angle}, {weight}) needs an angle in [0, 2pi) and weight in (0, 1]")
        if self.samples.size and (not np.all(np.isfinite(self.samples)) or np.any(self.samples < 0)):
            raise BadParams("density samples must be finite and nonnegative")
        total = float(np.sum(self.masses))
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise BadParams(f"total mass {total!r} differs from 1")

    @property
    def n(self) -> int:
        return int(self.samples.size)

    @cached_property
    def angles(self) -> np.ndarray:
        grid = (self.offset + _TWO_PI * np.arange(self.n) / self.n) % _TWO_PI if self.n else np.zeros(0)
        return np.concatenate([np.array([a[0] for a in self.atoms], dtype=float), grid])

    @cached_property
    def points(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    @cached_property
    def masses(self) -> np.ndarray:
        dens = self.samples * (_TWO_PI / self.n) if self.n else np.zeros(0)
        return np.concatenate([np.array([a[1] for a in self.atoms], dtype=float), dens])

    def is_haar(self, tol: float = 1e-12) -> bool:
        """True for the uniform law: no atoms and a constant density."""
        return not self.atoms and self.n > 0 and float(np.ptp(self.samples)) <= tol

    def rotated(self, theta: float) -> CircleMeasure:
        """Law of e^{i theta} u when u has this law."""
        atoms = tuple(((a + theta) % _TWO_PI, w) for a, w in self.atoms)
        return CircleMeasure(atoms, self.samples, (self.offset + theta) % _TWO_PI, self.name)


AnyMeasure = Union[LineMeasure, CircleMeasure]


def line_measure(atoms: list[tuple[float, float]] | tuple = (), lo: float = 0.0, hi: float = 0.0,
                 samples: np.ndarray | list[float] | None = None,
                 edges: tuple[float, float] = (0.0, 0.0), name: str = "") -> LineMeasure:
    """Build a LineMeasure, scaling the density part so the total mass is exactly 1."""
    atoms = tuple((float(p), float(w)) for p, w in atoms)
    s = np.asarray(samples if samples is not None else [], dtype=float)
    atom_mass = sum(w for _, w in atoms)
    if s.size:
        if s.size < 2 or not lo < hi:
            raise BadParams(f"density grid needs at least 2 samples on lo < hi, got {s.size} on [{lo}, {hi}]")
        q = _product_weights(float(lo), float(hi), s.size, edges)
        dens_mass = float(np.dot(q, s))
        if dens_mass <= 0:
            raise BadParams("density has no mass")
        s = s * ((1.0 - atom_mass) / dens_mass)
    elif abs(atom_mass - 1.0) > _NORMALIZATION_TOL:
        raise BadParams(f"atom weights sum to {atom_mass!r}, not 1")
    return LineMeasure(atoms, float(lo), float(hi), s, (float(edges[0]), float(edges[1])), name)


def circle_measure(atoms: list[tuple[float, float]] | tuple = (),
                   samples: np.ndarray | list[float] | None = None,
                   offset: float = 0.0, name: str = "") -> CircleMeasure:
    """Build a CircleMeasure, reducing angles mod 2*pi and normalizing the density part."""
    atoms = tuple((float(a) % _TWO_PI, float(w)) for a, w in atoms)
    s = np.asarray(samples if samples is not None else [], dtype=float)
    atom_mass = sum(w for _, w in atoms)
    if s.size:
        dens_mass = float(np.sum(s)) * _TWO_PI / s.size
        if dens_mass <= 0:
            raise BadParams("density has no mass")
        s = s * ((1.0 - atom_mass) / dens_mass)
    elif abs(atom_mass - 1.0) > _NORMALIZATION_TOL:
        raise BadParams(f"atom weights sum to {atom_mass!r}, not 1")
    return CircleMeasure(atoms, s, float(offset) % _TWO_PI, name)


# ---------------------------------------------------------------------------
# Line transforms
# ---------------------------------------------------------------------------

def _check_upper(z: np.ndarray) -> None:
    if np.any(~(z.imag > 0)):
        raise DomainError("the Cauchy transform needs Im z > 0")


def cauchy_transform(mu: LineMeasure, z: complex | np.ndarray) -> complex | np.ndarray:
    """G_mu(z) = integral of 1/(z - t) dmu(t), for Im z > 0 (scalar or array z)."""
    za = np.asarray(z, dtype=complex)
    _check_upper(za)
    return _scalar_or_array(_cauchy(mu, za), z)


def _cauchy(mu: LineMeasure, z: np.ndarray) -> np.ndarray:
    return _blocked_sum(z, lambda zz, t: 1.0 / (zz - t), mu.points, mu.masses)


def _cauchy_derivative(mu: LineMeasure, z: np.ndarray) -> np.ndarray:
    return _blocked_sum(z, lambda zz, t: -1.0 / (zz - t) ** 2, mu.points, mu.masses)


def f_transform(mu: LineMeasure, z: complex | np.ndarray) -> complex | np.ndarray:
    """F_mu = 1/G_mu; Im F_mu(z) >= Im z."""
    za = np.asarray(z, dtype=complex)
    _check_upper(za)
    g = _cauchy(mu, za)
    if np.any(np.abs(g) < _ZERO_G):
        raise ZeroTransform("Cauchy transform vanished in the upper half-plane")
    return _scalar_or_array(1.0 / g, z)


def h_transform(mu: LineMeasure, z: complex | np.ndarray) -> complex | np.ndarray:
    """h_mu = F_mu(z) - z; Im h_mu >= 0."""
    za = np.asarray(z, dtype=complex)
    return _scalar_or_array(np.asarray(f_transform(mu, za)) - za, z)


def transform_moments(G: Callable[[np.ndarray], np.ndarray], center: float, radius: float,
                      order: int, nodes: int = 256, about: float = 0.0) -> np.ndarray:
    """Moments m_0..m_order, taken about the point `about`, of the measure whose Cauchy transform is G.

    Trapezoid rule for (1/2 pi i) * contour integral of z^k G(z) dz on a circle
    around center that encloses the support; G is only evaluated in the upper
    half-plane and mirrored by G(conj z) = conj G(z).
    """
    if nodes % 2:
        raise BadParams(f"nodes must be even, got {nodes}")
    theta = _TWO_PI * (np.arange(nodes // 2) + 0.5) / nodes
    upper = center + radius * np.exp(1j * theta)
    g_up = np.asarray(G(upper), dtype=complex)
    z = np.concatenate([upper, upper.conj()])
    g = np.concatenate([g_up, g_up.conj()])
    k = np.arange(order + 1)
    return ((z - about)[None, :] ** k[:, None] * (g * (z - center))[None, :]).sum(axis=1).real / nodes


# ---------------------------------------------------------------------------
# Circle transforms
# ---------------------------------------------------------------------------

def _check_disk(g: np.ndarray) -> None:
    if np.any(~(np.abs(g) < 1.0)):
        raise DomainError("the circle transforms need |g| < 1")


def circle_cauchy(nu: CircleMeasure, g: complex | np.ndarray) -> complex | np.ndarray:
    """K_nu(g) = integral of 1/(zeta - g) dnu(zeta), for |g| < 1."""
    ga = np.asarray(g, dtype=complex)
    _check_disk(ga)
    return _scalar_or_array(_blocked_sum(ga, lambda w, zeta: 1.0 / (zeta - w), nu.points, nu.masses), g)


def circle_cauchy_derivative(nu: CircleMeasure, g: complex | np.ndarray) -> complex | np.ndarray:
    ga = np.asarray(g, dtype=complex)
    _check_disk(ga)
    return _scalar_or_array(_blocked_sum(ga, lambda w, zeta: 1.0 / (zeta - w) ** 2, nu.points, nu.masses), g)


def psi_transform(nu: CircleMeasure, w: complex | np.ndarray) -> complex | np.ndarray:
    """psi_nu(w) = integral of w zeta / (1 - w zeta) dnu = sum_{k>=1} m_k w^k."""
    wa = np.asarray(w, dtype=complex)
    _check_disk(wa)
    return _scalar_or_array(_blocked_sum(wa, lambda x, zeta: x * zeta / (1.0 - x * zeta), nu.points, nu.masses), w)


def eta_transform(nu: CircleMeasure, w: complex | np.ndarray) -> complex | np.ndarray:
    """eta_nu = psi_nu / (1 + psi_nu)."""
    psi = psi_transform(nu, w)
    return psi / (1.0 + psi)


def eta_over_w(nu: CircleMeasure, w: np.ndarray) -> np.ndarray:
    """eta_nu(w) / w without the removable singularity at 0."""
    w = np.asarray(w, dtype=complex)
    _check_disk(w)
    first = _blocked_sum(w, lambda x, zeta: zeta / (1.0 - x * zeta), nu.points, nu.masses)
    return first / (1.0 + w * first)


def sample_angles(nu: CircleMeasure, count: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Draw count angles from nu.

    Without rng the draw is stratified: the quantiles at (j + 1/2)/count, so an
    atom of weight k/count gets exactly k angles.
    """
    order = np.argsort(nu.angles, kind="stable")
    angles, cdf = nu.angles[order], np.cumsum(nu.masses[order])
    cdf /= cdf[-1]
    u = rng.random(count) if rng is not None else (np.arange(count) + 0.5) / count
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), angles.size - 1)
    return angles[idx]


# ---------------------------------------------------------------------------
# Moments and density recovery
# ---------------------------------------------------------------------------

def moments(mu: AnyMeasure, k: int) -> complex:
    """k-th moment: integral of t^k (line, 0 <= k <= 32) or zeta^k (circle, |k| <= 32)."""
    if isinstance(mu, CircleMeasure):
        if abs(k) > _MOMENT_CAP:
            raise BadParams(f"moment order must satisfy |k| <= {_MOMENT_CAP}, got {k}")
        return complex(np.dot(mu.masses, np.exp(1j * k * mu.angles)))
    if not 0 <= k <= _MOMENT_CAP:
        raise BadParams(f"moment order must lie in [0, {_MOMENT_CAP}], got {k}")
    return complex(np.dot(mu.masses, mu.points ** k))


def stieltjes_invert(G: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, n: int,
                     etas: tuple[float, ...] = DEFAULT_ETAS) -> LineMeasure:
    """Recover a density from a Cauchy transform by -Im G(t + i eta)/pi.

    The values for each eta are extrapolated to eta = 0 by the interpolating
    polynomial in eta. The result is renormalized to mass 1 and the factor kept
    on the measure.

    With two heights a > b the extrapolated Poisson kernel of a point mass at
    distance d is ab(a+b)/((d^2+a^2)(d^2+b^2)) > 0, so the two-height default
    never goes negative, atoms included. Three or more heights can.
    """
    etas = tuple(float(e) for e in etas)
    if not etas or min(etas) < 1e-4 or any(a <= b for a, b in zip(etas, etas[1:])):
        raise BadParams(f"etas must be strictly decreasing and at least 1e-4, got {etas}")
    if n < 2 or not lo < hi:
        raise BadParams(f"grid needs n >= 2 and lo < hi, got n={n} on [{lo}, {hi}]")
    t = np.linspace(lo, hi, n)
    density = np.zeros(n)
    for i, eta in enumerate(etas):
        lagrange = math.prod(e / (e - eta) for j, e in enumerate(etas) if j != i)
        density += lagrange * (-np.asarray(G(t + 1j * eta), dtype=complex).imag / math.pi)
    worst = int(np.argmin(density))
    if density[worst] < -1e-3:
        raise NonPositiveDensity(f"recovered density {density[worst]:.3e} at t={t[worst]:.4f}",
                                 minimum=float(density[worst]), location=float(t[worst]))
    density = np.clip(density, 0.0, None)
    mass = float(np.dot(_product_weights(lo, hi, n, (0.0, 0.0)), density))
    if mass <= 0:
        raise NonPositiveDensity("recovered density has no mass")
    return LineMeasure((), float(lo), float(hi), density / mass, (0.0, 0.0), "recovered", 1.0 / mass)


# ---------------------------------------------------------------------------
# Standard families
# ---------------------------------------------------------------------------

def _param(params: dict | list | tuple | None, name: str, index: int, default: float | None = None) -> float:
    if isinstance(params, dict):
        value = params.get(name, default)
    elif isinstance(params, (list, tuple)) and len(params) > index:
        value = params[index]
    else:
        value = default
    if value is None:
        raise BadParams(f"missing parameter '{name}'")
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise BadParams(f"parameter '{name}' must be a number, got {value!r}") from exc


def _pairs(params: dict | list | tuple | None, label: str) -> list[tuple[float, float]]:
    """Accept [[pos, w], ...], {"atoms": [...]}, or {pos: w}."""
    if isinstance(params, dict):
        params = params.get("atoms", [(k, v) for k, v in params.items()])
    try:
        pairs = [(float(p), float(w)) for p, w in params or []]
    except (TypeError, ValueError) as exc:
        raise BadParams(f"{label} expects (position, weight) pairs, got {params!r}") from exc
    if not pairs:
        raise BadParams(f"{label} needs at least one atom")
    if any(w <= 0 for _, w in pairs):
        raise BadParams(f"{label} weights must be positive")
    return pairs


def make_standard(name: str, params: dict | list | tuple | Callable | None = None,
                  grid_size: int = DEFAULT_GRID_SIZE) -> AnyMeasure:
    """Build one of the named families on the default grid."""
    if grid_size < 3:
        raise BadParams(f"grid_size must be at least 3, got {grid_size}")
    if name == "semicircle":
        center = _param(params, "center", 0, 0.0)
        variance = _param(params, "variance", 1, 1.0)
        if variance <= 0:
            raise BadParams(f"semicircle variance must be positive, got {variance}")
        r = 2.0 * math.sqrt(variance)
        s = np.full(grid_size, 1.0 / (2.0 * math.pi * variance))
        return line_measure((), center - r, center + r, s, (0.5, 0.5), f"semicircle({center:g},{variance:g})")
    if name == "bernoulli_pm1":
        return line_measure([(-1.0, 0.5), (1.0, 0.5)], name="bernoulli_pm1")
    if name == "arcsine":
        scale = _param(params, "scale", 0, 2.0)
        if scale <= 0:
            raise BadParams(f"arcsine scale must be positive, got {scale}")
        s = np.full(grid_size, 1.0 / math.pi)
        return line_measure((), -scale, scale, s, (-0.5, -0.5), f"arcsine({scale:g})")
    if name == "marchenko_pastur":
        lam = _param(params, "ratio", 0, 1.0)
        if lam <= 0:
            raise BadParams(f"Marchenko-Pastur ratio must be positive, got {lam}")
        lo, hi = (1.0 - math.sqrt(lam)) ** 2, (1.0 + math.sqrt(lam)) ** 2
        atoms = [(0.0, 1.0 - 1.0 / lam)] if lam > 1 else []
        label = f"marchenko_pastur({lam:g})"
        if lam == 1.0:
            return line_measure((), 0.0, 4.0, np.full(grid_size, 1.0 / (2.0 * math.pi)), (-0.5, 0.5), label)
        t = np.linspace(lo, hi, grid_size)
        return line_measure(atoms, lo, hi, 1.0 / (2.0 * math.pi * lam * t), (0.5, 0.5), label)
    if name == "atomic":
        return line_measure(_pairs(params, "atomic"), name="atomic")
    if name == "delta":
        return line_measure([(_param(params, "position", 0, 0.0), 1.0)], name="delta")
    if name == "haar_circle":
        return circle_measure(samples=np.ones(grid_size), name="haar_circle")
    if name == "circle_atoms":
        return circle_measure(_pairs(params, "circle_atoms"), name="circle_atoms")
    if name == "wrapped_density":
        if not callable(params):
            raise BadParams("wrapped_density needs a callable theta -> density")
        theta = _TWO_PI * np.arange(grid_size) / grid_size
        values = np.asarray(params(theta), dtype=float)
        if values.shape != theta.shape or np.any(values < 0) or not np.all(np.isfinite(values)):
            raise BadParams("wrapped_density evaluator must return finite nonnegative values per angle")
        return circle_measure(samples=values, name="wrapped_density")
    raise UnknownFamily(f"unknown measure family '{name}'")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def to_json(mu: AnyMeasure) -> dict:
    """JSON-ready dict; floats survive a json round trip bit for bit."""
    if isinstance(mu, CircleMeasure):
        return {
            "type": "circle",
            "name": mu.name,
            "atoms": [[a, w] for a, w in mu.atoms],
            "grid": {"n": mu.n, "offset": mu.offset},
            "density": [float(v) for v in mu.samples],
        }
    return {
        "type": "line",
        "name": mu.name,
        "atoms": [[p, w] for p, w in mu.atoms],
        "grid": {"lo": mu.lo, "hi": mu.hi, "n": mu.n},
        "edges": list(mu.edges),
        "density": [float(v) for v in mu.samples],
        "renormalization": mu.renormalization,
    }


def from_json(obj: dict) -> AnyMeasure:
    """Inverse of to_json; no renormalization is applied."""
    try:
        kind = obj["type"]
        atoms = tuple((float(p), float(w)) for p, w in obj.get("atoms", []))
        density = np.array(obj.get("density", []), dtype=float)
        grid = obj.get("grid", {})
        if kind == "circle":
            return CircleMeasure(atoms, density, float(grid.get("offset", 0.0)), obj.get("name", ""))
        if kind == "line":
            edges = tuple(float(e) for e in obj.get("edges", (0.0, 0.0)))
            if density.size and int(grid.get("n", density.size)) != density.size:
                raise BadParams(f"grid.n={grid.get('n')} does not match {density.size} density samples")
            return LineMeasure(atoms, float(grid.get("lo", 0.0)), float(grid.get("hi", 0.0)), density,
                               edges, obj.get("name", ""), float(obj.get("renormalization", 1.0)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, BadParams):
            raise
        raise BadParams(f"malformed measure JSON: {exc}") from exc
    raise UnknownFamily(f"unknown measure type '{kind}'")
