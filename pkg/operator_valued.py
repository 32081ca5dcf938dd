#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# operator_valued.py - Matrix-valued semicircular Cauchy transforms and the subordination map F
#
# Convention: G_X(b) = E_B((b - X)^{-1}). For a B-semicircular X with covariance
# eta this is the unique solution in H-(B) of g = (b - eta(g))^{-1}.

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as la

from domain_calculus import halfplane_margin, operator_norm
from subordination import (
    OP_N_MAX, BadParams, DimensionMismatch, Display, DomainError, Event, JacobianSingular,
    NoConvergence, SolverSettings, emit,
)


_FD_SCALE: float = 1e-6
_INNER_TOL: float = 1e-13
_BACKTRACK: int = 30
_JACOBIAN_RCOND: float = 1e-12


# ---------------------------------------------------------------------------
# Covariance maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CovarianceMap:
    """eta(b) = sum_j k_j b k_j^*, completely positive by construction."""
    n: int
    kraus: tuple[np.ndarray, ...] = ()

    def __post_init__(self) -> None:
        if not 1 <= self.n <= OP_N_MAX:
            raise DimensionMismatch(f"dimension {self.n} outside [1, {OP_N_MAX}]")
        for k in self.kraus:
            if k.shape != (self.n, self.n):
                raise DimensionMismatch(f"Kraus operator of shape {k.shape} in a map on {self.n}x{self.n}")
            if not np.all(np.isfinite(k)):
                raise BadParams("Kraus operators must be finite")

    @classmethod
    def of(cls, kraus: Sequence[object], n: int | None = None) -> CovarianceMap:
        mats = tuple(np.atleast_2d(np.asarray(k, dtype=complex)) for k in kraus)
        if n is None:
            if not mats:
                raise BadParams("an empty Kraus list needs an explicit n")
            n = mats[0].shape[0]
        return cls(n, mats)

    @classmethod
    def zero(cls, n: int) -> CovarianceMap:
        return cls(n, ())

    def __call__(self, b: np.ndarray) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        for k in self.kraus:
            out += k @ b @ k.conj().T
        return out

    def __add__(self, other: CovarianceMap) -> CovarianceMap:
        if other.n != self.n:
            raise DimensionMismatch(f"cannot add maps on {self.n}x{self.n} and {other.n}x{other.n}")
        return CovarianceMap(self.n, self.kraus + other.kraus)

    def adjoint(self) -> CovarianceMap:
        """eta^*(b) = sum_j k_j^* b k_j."""
        return CovarianceMap(self.n, tuple(k.conj().T for k in self.kraus))

    def symmetrized(self) -> CovarianceMap:
        """(eta + eta^*)/2, the covariance of X = sum_j (k_j (x) C_j + h.c.)/sqrt 2 for circular C_j."""
        s = 1.0 / math.sqrt(2.0)
        return CovarianceMap(self.n, tuple(s * k for k in self.kraus) + tuple(s * k.conj().T for k in self.kraus))

    def to_json(self) -> dict:
        return {"n": self.n,
                "kraus": [[[[float(v.real), float(v.imag)] for v in row] for row in k] for k in self.kraus]}

    @classmethod
    def from_json(cls, obj: dict) -> CovarianceMap:
        try:
            n = int(obj["n"])
            kraus = tuple(np.array([[complex(re, im) for re, im in row] for row in k], dtype=complex)
                          for k in obj.get("kraus", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise BadParams(f"malformed covariance map JSON: {exc}") from exc
        return cls(n, kraus)


@dataclass(frozen=True, eq=False)
class OpCauchyEval:
    b: np.ndarray
    g: np.ndarray
    residual: float
    iterations: int


def _as_matrix(b: object, n: int) -> np.ndarray:
    a = np.atleast_2d(np.asarray(b, dtype=complex))
    if a.shape != (n, n):
        raise DimensionMismatch(f"expected a {n}x{n} matrix, got shape {a.shape}")
    return a


# ---------------------------------------------------------------------------
# Semicircular Cauchy transforms
# ---------------------------------------------------------------------------

def _vec(h: np.ndarray) -> np.ndarray:
    return h.reshape(-1, order="F")


def _unvec(v: np.ndarray, n: int) -> np.ndarray:
    return v.reshape((n, n), order="F")


def _newton_operator(eta: CovarianceMap, A: np.ndarray) -> np.ndarray:
    """Matrix of h -> h - A eta(h) A in column-major vec coordinates."""
    n = eta.n
    L = np.eye(n * n, dtype=complex)
    for k in eta.kraus:
        L -= np.kron((k.conj().T @ A).T, A @ k)
    return L


def op_semicircular_cauchy(eta: CovarianceMap, b: object, tol: float = 1e-10,
                           settings: SolverSettings | None = None,
                           display: Display | None = None) -> OpCauchyEval:
    """Solve g = (b - eta(g))^{-1} in H-(B) for b in H+(B).

    Damped Picard from b^{-1} until the residual drops below the hand-off, then
    Newton on g - (b - eta(g))^{-1}. A Newton step leaving H- is replaced by a
    Picard step.
    """
    settings = (settings or SolverSettings()).with_overrides(tol=tol)
    b = _as_matrix(b, eta.n)
    if halfplane_margin(b) <= 0:
        raise DomainError(f"b must lie in H+ (half-plane margin {halfplane_margin(b):.3e})")
    g = la.inv(b)
    for it in range(1, settings.max_iter + 1):
        A = la.inv(b - eta(g))
        r = g - A
        res = operator_norm(r)
        if res <= settings.tol:
            emit(display, Event("solver_converged", source="operator_valued", value=res, count=it))
            return OpCauchyEval(b, g, res, it)
        picard = g - settings.damping * r
        if res >= settings.handoff:
            g = picard
            continue
        try:
            delta = la.solve(_newton_operator(eta, A), -_vec(r))
        except la.LinAlgError:
            g = picard
            continue
        cand = g + _unvec(delta, eta.n)
        g = cand if halfplane_margin(-cand) > 0 else picard
    raise NoConvergence(f"operator-valued Cauchy transform did not converge in {settings.max_iter} iterations",
                        max_iter=settings.max_iter, residual=res)


def op_add_cauchy(eta_x: CovarianceMap, eta_y: CovarianceMap, b: object, tol: float = 1e-10,
                  settings: SolverSettings | None = None) -> OpCauchyEval:
    """G_{X+Y}(b) for B-free semicirculars: the covariances add."""
    return op_semicircular_cauchy(eta_x + eta_y, b, tol, settings)


def op_cauchy_evaluator(eta: CovarianceMap, tol: float = _INNER_TOL,
                        settings: SolverSettings | None = None) -> Callable[[np.ndarray], np.ndarray]:
    def G(b: np.ndarray) -> np.ndarray:
        return op_semicircular_cauchy(eta, b, tol, settings).g
    return G


# ---------------------------------------------------------------------------
# Subordination map
# ---------------------------------------------------------------------------

def _realify(m: np.ndarray) -> np.ndarray:
    v = _vec(m)
    return np.concatenate([v.real, v.imag])


def _direction(index: int, n: int) -> np.ndarray:
    e = np.zeros(n * n, dtype=complex)
    if index < n * n:
        e[index] = 1.0
    else:
        e[index - n * n] = 1j
    return _unvec(e, n)


def solve_subordination_F(G_X: Callable[[np.ndarray], np.ndarray], g_target: object, b_start: object,
                          tol: float = 1e-10, settings: SolverSettings | None = None,
                          display: Display | None = None) -> np.ndarray:
    """Find F in H+(B) with G_X(F) = g_target, by Newton from b_start.

    The Jacobian is a forward difference over the 2n^2 real coordinates of F.
    Steps are halved until they stay in H+ and reduce the residual.
    """
    settings = (settings or SolverSettings()).with_overrides(tol=tol)
    target = np.atleast_2d(np.asarray(g_target, dtype=complex))
    n = target.shape[0]
    F = _as_matrix(b_start, n).copy()
    if halfplane_margin(-target) <= 0:
        raise DomainError("g_target must lie in H-")
    if halfplane_margin(F) <= 0:
        raise DomainError("b_start must lie in H+")
    r = G_X(F) - target
    res = operator_norm(r)
    for it in range(1, settings.max_iter + 1):
        if res <= settings.tol:
            if halfplane_margin(F) <= 0:
                raise DomainError(f"F(b) left H+ (margin {halfplane_margin(F):.3e})")
            emit(display, Event("solver_converged", source="operator_valued.F", value=res, count=it - 1))
            return F
        h = _FD_SCALE * max(1.0, operator_norm(F))
        base = _realify(r)
        J = np.empty((2 * n * n, 2 * n * n))
        for j in range(2 * n * n):
            J[:, j] = (_realify(G_X(F + h * _direction(j, n)) - target) - base) / h
        s = la.svdvals(J)
        if s[-1] <= _JACOBIAN_RCOND * s[0]:
            raise JacobianSingular(f"G_X is not locally invertible here (Jacobian rcond {s[-1] / s[0]:.3e})")
        step_real = la.solve(J, -base)
        step = _unvec(step_real[:n * n] + 1j * step_real[n * n:], n)
        for _ in range(_BACKTRACK):
            cand = F + step
            if halfplane_margin(cand) > 0:
                r_cand = G_X(cand) - target
                res_cand = operator_norm(r_cand)
                if res_cand < res:
                    break
            step = 0.5 * step
        else:
            break
        F, r, res = cand, r_cand, res_cand
    raise NoConvergence(f"subordination map did not converge (residual {res:.3e})",
                        max_iter=settings.max_iter, residual=res)


def analytic_F_semicircular(eta_y: CovarianceMap, g_sum: np.ndarray, b: np.ndarray) -> np.ndarray:
    """F(b) = b - eta_Y(G_{X+Y}(b)) when Y is B-semicircular."""
    return np.asarray(b, dtype=complex) - eta_y(np.asarray(g_sum, dtype=complex))


def im_growth(F: np.ndarray, b: np.ndarray) -> float:
    """lambda_min(Im F) - lambda_min(Im b); recorded, never asserted."""
    return halfplane_margin(F) - halfplane_margin(b)
