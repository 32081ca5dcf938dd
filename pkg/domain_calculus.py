#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# domain_calculus.py - Half-planes, balls and the Omega set for finite matrices
# Pure functions only: no side effects, no I/O.

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

import numpy as np
import scipy.linalg as la

from subordination import BOUNDARY_BAND, N_MAX, DimensionMismatch, DomainError, SingularMatrix


_SINGULAR_RTOL: float = 1e-13

MarginClass = Literal["inside", "outside", "boundary"]


@dataclass(frozen=True, eq=False)
class OperatorPoint:
    """An n x n complex matrix, the element T of the matrix algebra."""
    entries: np.ndarray

    def __post_init__(self) -> None:
        a = self.entries
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("matrix entries must be finite")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def of(cls, value: object, n_max: int = N_MAX) -> OperatorPoint:
        """Build a point from a scalar, nested list or array; enforces the dimension cap."""
        a = np.atleast_2d(np.asarray(value, dtype=complex))
        point = cls(a.copy())
        if point.dim > n_max:
            raise DimensionMismatch(f"dimension {point.dim} exceeds the cap n_max={n_max}")
        return point


@dataclass(frozen=True)
class DomainMargin:
    """Signed distances of T to H+(A) and to the ball D_R(A)."""
    halfplane_margin: float     # lambda_min(Im T); > 0 iff T in H+
    ball_margin: float          # R - ||T||; > 0 iff T in D_R
    radius: float = 1.0


Matrix = Union[OperatorPoint, np.ndarray]


def _m(T: Matrix) -> np.ndarray:
    if isinstance(T, OperatorPoint):
        return T.entries
    a = np.atleast_2d(np.asarray(T, dtype=complex))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def _hermitize(h: np.ndarray) -> np.ndarray:
    return 0.5 * (h + h.conj().T)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def im_part(T: Matrix) -> np.ndarray:
    """Return (T - T*)/(2i), Hermitian to working precision."""
    a = _m(T)
    return _hermitize((a - a.conj().T) / 2j)


def real_part(T: Matrix) -> np.ndarray:
    """Return (T + T*)/2."""
    a = _m(T)
    return _hermitize((a + a.conj().T) / 2)


def operator_norm(T: Matrix) -> float:
    """Largest singular value."""
    return float(la.svdvals(_m(T))[0])


def halfplane_margin(T: Matrix) -> float:
    """lambda_min(Im T). Positive iff T is in the upper half-plane; use -T for the lower one."""
    return float(la.eigvalsh(im_part(T))[0])


def ball_margin(T: Matrix, radius: float = 1.0) -> float:
    """R - ||T||. Positive iff T lies in the open ball of radius R."""
    return radius - operator_norm(T)


def domain_margin(T: Matrix, radius: float = 1.0) -> DomainMargin:
    return DomainMargin(halfplane_margin(T), ball_margin(T, radius), radius)


def classify_margin(margin: float, band: float = BOUNDARY_BAND) -> MarginClass:
    """Open-set membership with a boundary band: decisions inside the band are never pass/fail."""
    if abs(margin) <= band:
        return "boundary"
    return "inside" if margin > 0 else "outside"


def _smallest_singular(a: np.ndarray) -> float:
    return float(la.svdvals(a)[-1])


def _is_singular(a: np.ndarray) -> bool:
    s = la.svdvals(a)
    return bool(s[-1] <= _SINGULAR_RTOL * max(1.0, s[0]))


def invert_checked(T: Matrix) -> OperatorPoint:
    """Invert T; a half-plane element must land in the opposite half-plane.

    Raises SingularMatrix when T has neither half-plane margin and its smallest
    singular value is below tolerance.
    """
    a = _m(T)
    upper = halfplane_margin(a)
    lower = halfplane_margin(-a)
    if upper <= 0 and lower <= 0 and _is_singular(a):
        raise SingularMatrix(f"matrix is singular (smallest singular value {_smallest_singular(a):.3e})")
    try:
        inv = la.inv(a)
    except la.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    if upper > BOUNDARY_BAND and halfplane_margin(-inv) <= 0:
        raise DomainError("inverse of an H+ element failed to land in H-")
    if lower > BOUNDARY_BAND and halfplane_margin(inv) <= 0:
        raise DomainError("inverse of an H- element failed to land in H+")
    return OperatorPoint(inv)


def _solve(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if _is_singular(lhs):
        raise SingularMatrix(f"cannot solve against a singular matrix "
                             f"(smallest singular value {_smallest_singular(lhs):.3e})")
    return la.solve(lhs, rhs)


def cayley(T: Matrix) -> OperatorPoint:
    """(T - i)(T + i)^{-1}; maps H+(A) into the unit ball D(A)."""
    a = _m(T)
    eye = np.eye(a.shape[0])
    # T - i and (T + i)^{-1} commute
    return OperatorPoint(_solve(a + 1j * eye, a - 1j * eye))


def inverse_cayley(W: Matrix) -> OperatorPoint:
    """i(1 + W)(1 - W)^{-1}, the inverse of cayley."""
    w = _m(W)
    eye = np.eye(w.shape[0])
    return OperatorPoint(1j * _solve(eye - w, eye + w))


def lemma34_margins(x: Matrix) -> tuple[float, float]:
    """Margins of the two equivalent conditions on x.

    cond_i  = 1 - ||x||                          (||x|| < 1)
    cond_ii = lambda_min(2 Re (1 - x)^{-1}) - 1   (2 Re (1-x)^{-1} >= 1 + eps)

    cond_ii is -inf when 1 - x is singular.
    """
    a = _m(x)
    cond_i = 1.0 - operator_norm(a)
    one_minus = np.eye(a.shape[0]) - a
    if _is_singular(one_minus):
        return cond_i, float("-inf")
    resolvent = la.inv(one_minus)
    cond_ii = float(la.eigvalsh(2.0 * real_part(resolvent))[0]) - 1.0
    return cond_i, cond_ii


def lemma34_identity_residual(x: Matrix) -> float:
    """Residual of (1-x)^{-1} + (1-x*)^{-1} - 1 = (1-x)^{-1}(1 - xx*)(1-x*)^{-1}.

    The middle factor is 1 - xx*, not its inverse. The operator norm of the
    difference is returned unscaled.
    """
    a = _m(x)
    eye = np.eye(a.shape[0])
    one_minus = eye - a
    if _is_singular(one_minus):
        raise SingularMatrix("1 - x is singular")
    r = la.inv(one_minus)
    lhs = r + r.conj().T - eye
    rhs = r @ (eye - a @ a.conj().T) @ r.conj().T
    return operator_norm(lhs - rhs)


def omega_margin(a: Matrix, c: Matrix) -> float:
    """1 - ||a^{-1} c|| when a is invertible, else -inf. Positive iff (a, c) is in Omega."""
    am, cm = _m(a), _m(c)
    if am.shape != cm.shape:
        raise DimensionMismatch(f"shapes {am.shape} and {cm.shape} differ")
    if _is_singular(am):
        return float("-inf")
    return 1.0 - operator_norm(la.solve(am, cm))


def omega_psi(a: Matrix, c: Matrix) -> tuple[complex, float]:
    """Trace-level Psi(a, c) = 1 - 1/tau((1 - a^{-1}c)^{-1}) and its disk margin 1 - |Psi|.

    On Omega, tau((1 - a^{-1}c)^{-1}) has real part above 1/2, which places Psi
    strictly inside the unit disk.
    """
    margin = omega_margin(a, c)
    if margin <= 0:
        raise DomainError(f"(a, c) is outside Omega (margin {margin:.3e})")
    am, cm = _m(a), _m(c)
    x = la.solve(am, cm)
    n = x.shape[0]
    tau = complex(np.trace(la.inv(np.eye(n) - x))) / n
    psi = 1.0 - 1.0 / tau
    return psi, 1.0 - abs(psi)
