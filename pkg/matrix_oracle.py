#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# matrix_oracle.py - Seeded random-matrix models and the Monte Carlo subordination experiments
#
# tau is the normalized trace, E_B the partial trace over the N x N factor of
# the block model, and conditional expectations onto the algebra generated by a
# Hermitian matrix are block-scalar projections in its eigenbasis. Every trial
# draws from its own stream SeedSequence(seed, spawn_key=(trial,)).

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np
import scipy.linalg as la
from scipy.optimize import least_squares

from domain_calculus import (
    halfplane_margin, lemma34_identity_residual, lemma34_margins, omega_margin, omega_psi, operator_norm,
)
from multiplicative_subordination import disk_subordination_solve
from operator_valued import (
    CovarianceMap, im_growth, op_add_cauchy, op_cauchy_evaluator, solve_subordination_F,
)
from spectral_measures import CircleMeasure, make_standard, sample_angles
from subordination import (
    BOUNDARY_BAND, MC_TOLERANCE, BadParams, DimensionMismatch, Display, DomainError, Event, emit,
)
from utility import complex_pair, format_float


ExperimentIdentity = Literal["prop32", "prop33", "thm36", "lemma34", "thm31_block"]
Verdict = Literal["pass", "fail", "boundary"]
EnsembleKind = Literal["gue", "haar_unitary", "rotated_deterministic", "phase_unitary"]

IDENTITIES: tuple[str, ...] = ("prop32", "prop33", "thm36", "lemma34", "thm31_block")

_SETUP_STREAM: int = 2 ** 32       # spawn key for fixtures drawn before the trials
_BATCH: int = 16
_MAX_BLOCK_DIM: int = 4096
_MIN_BLOCK_SHIFT: float = 0.5
_LEMMA34_BAND: float = 1e-6
_IDENTITY_TOL: float = 1e-11
_IDENTITY_SAMPLES: int = 1000
_SOLVE_TOL: float = 1e-10
_THM36_NORM_CAP: float = 0.9
_G_MODULUS_CAP: float = 0.99


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------

def ensemble_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Independent, reproducible stream for one trial."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def setup_rng(seed: int) -> np.random.Generator:
    return ensemble_rng(seed, _SETUP_STREAM)


def ginibre(rng: np.random.Generator, N: int) -> np.ndarray:
    """Complex Gaussian N x N matrix with E|c_ij|^2 = 1/N."""
    return (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / math.sqrt(2.0 * N)


def gue(rng: np.random.Generator, N: int) -> np.ndarray:
    """Hermitian, entry variance 1/N; spectral law tends to semicircle(0, 1)."""
    a = ginibre(rng, N)
    return (a + a.conj().T) / math.sqrt(2.0)


def haar_unitary(rng: np.random.Generator, N: int) -> np.ndarray:
    """QR of a complex Gaussian matrix, columns rephased by the diagonal of R."""
    q, r = la.qr(ginibre(rng, N))
    d = np.diag(r)
    return q * (d / np.abs(d))


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    kind: EnsembleKind
    N: int
    seed: int
    trial: int = 0
    spectrum: np.ndarray | None = None        # rotated_deterministic: eigenvalues or a matrix
    angles: CircleMeasure | None = None       # phase_unitary: law of the eigenangles

    def __post_init__(self) -> None:
        if self.N < 2:
            raise BadParams(f"N must be at least 2, got {self.N}")
        if self.kind not in ("gue", "haar_unitary", "rotated_deterministic", "phase_unitary"):
            raise BadParams(f"unknown ensemble kind '{self.kind}'")
        if self.kind == "rotated_deterministic" and self.spectrum is None:
            raise BadParams("rotated_deterministic needs a spectrum")
        if self.kind == "phase_unitary" and self.angles is None:
            raise BadParams("phase_unitary needs an angle law")


def sample(spec: EnsembleSpec) -> np.ndarray:
    """Draw one matrix; identical specs give bit-identical matrices."""
    rng = ensemble_rng(spec.seed, spec.trial)
    N = spec.N
    if spec.kind == "gue":
        return gue(rng, N)
    if spec.kind == "haar_unitary":
        return haar_unitary(rng, N)
    if spec.kind == "rotated_deterministic":
        lam = np.asarray(spec.spectrum, dtype=complex)
        lam = np.diag(lam) if lam.ndim == 1 else lam
        if lam.shape != (N, N):
            raise DimensionMismatch(f"spectrum of shape {lam.shape} for N={N}")
        u = haar_unitary(rng, N)
        return u @ lam @ u.conj().T
    v = haar_unitary(rng, N)
    phases = np.exp(1j * sample_angles(spec.angles, N))
    return (v * phases) @ v.conj().T


def partial_trace(Z: np.ndarray, n: int, N: int) -> np.ndarray:
    """(id_n (x) N^{-1} Tr_N)(Z): entry (i, j) is N^{-1} sum_k Z[(i,k), (j,k)]."""
    Z = np.asarray(Z)
    if Z.shape != (n * N, n * N):
        raise DimensionMismatch(f"matrix of shape {Z.shape} does not factor as {n}x{N}")
    return np.einsum("ikjk->ij", Z.reshape(n, N, n, N)) / N


def pairwise_sum(items: Sequence[np.ndarray]) -> np.ndarray:
    """Sum by recursive halving, so the rounding does not depend on trial order within a batch."""
    if len(items) == 1:
        return np.array(items[0])
    mid = len(items) // 2
    return pairwise_sum(items[:mid]) + pairwise_sum(items[mid:])


def _trial_mean(trial: Callable[[np.random.Generator], np.ndarray], trials: int, seed: int,
                display: Display | None, source: str) -> np.ndarray:
    batches, current = [], []
    for t in range(trials):
        current.append(trial(ensemble_rng(seed, t)))
        if len(current) == _BATCH or t == trials - 1:
            batches.append(pairwise_sum(current))
            current = []
            emit(display, Event("trial_batch", source=source, count=t + 1))
    return pairwise_sum(batches) / trials


# ---------------------------------------------------------------------------
# Conditional expectations onto W*(h)
# ---------------------------------------------------------------------------

class SpectralAlgebra:
    """The algebra generated by a Hermitian h, i.e. block-scalar matrices in its eigenbasis."""

    def __init__(self, h: np.ndarray, rtol: float = 1e-9):
        w, q = la.eigh(h)
        scale = max(1.0, float(np.abs(w).max()))
        self.eigenvalues = w
        self.basis = q
        self.labels = np.concatenate([[0], np.cumsum(np.diff(w) > rtol * scale)])
        self.counts = np.bincount(self.labels)

    def diagonal(self, m: np.ndarray) -> np.ndarray:
        """Eigenbasis diagonal of the projection of m, one entry per eigenvalue."""
        q = self.basis
        d = ((q.conj().T @ m) * q.T).sum(axis=1)
        re = np.bincount(self.labels, weights=d.real) / self.counts
        im = np.bincount(self.labels, weights=d.imag) / self.counts
        return (re + 1j * im)[self.labels]

    def project(self, m: np.ndarray) -> np.ndarray:
        q = self.basis
        return (q * self.diagonal(m)) @ q.conj().T

    def off_norm_sq(self, m: np.ndarray) -> float:
        """Squared normalized Hilbert-Schmidt norm of m minus its projection."""
        total = float(np.sum(np.abs(m) ** 2))
        kept = float(np.sum(np.abs(self.diagonal(m)) ** 2))
        return max(0.0, total - kept) / m.shape[0]

    def debiased_off(self, mean: np.ndarray, squares: Sequence[float], trials: int) -> tuple[float, float]:
        """(debiased, raw) relative mass of the trial mean outside the algebra.

        The debiased value drops the diagonal terms of ||sum_s O_s||^2, which is
        where the Monte Carlo noise floor lives.
        """
        scale = math.sqrt(float(np.sum(np.abs(mean) ** 2)) / mean.shape[0])
        if scale == 0:
            return 0.0, 0.0
        off_sq = self.off_norm_sq(mean)
        raw = math.sqrt(off_sq) / scale
        if trials < 2:
            return raw, raw
        cross = (trials * trials * off_sq - math.fsum(squares)) / (trials * (trials - 1))
        return math.sqrt(max(0.0, cross)) / scale, raw


def off_diagonal(m: np.ndarray) -> float:
    """||m - diag(m)|| / ||m|| in operator norm, 0 for the zero matrix."""
    total = operator_norm(m)
    if total == 0:
        return 0.0
    return operator_norm(m - np.diag(np.diagonal(m))) / total


def _fit_scalar(d: np.ndarray, lam: np.ndarray) -> tuple[complex, float]:
    """Least-squares f with d_k ~ (f - lam_k)^{-1}; returns f and the relative RMS misfit."""
    def misfit(p: np.ndarray) -> np.ndarray:
        r = d - 1.0 / (complex(p[0], p[1]) - lam)
        return np.concatenate([r.real, r.imag])

    f0 = complex(np.mean(1.0 / d + lam))
    sol = least_squares(misfit, [f0.real, f0.imag], xtol=1e-15, ftol=1e-15, gtol=1e-15)
    f = complex(sol.x[0], sol.x[1])
    r = d - 1.0 / (f - lam)
    return f, math.sqrt(float(np.mean(np.abs(r) ** 2)) / float(np.mean(np.abs(d) ** 2)))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class ExperimentReport:
    identity: ExperimentIdentity
    N: int
    trials: int
    seed: int
    estimates: dict[str, complex | float] = field(default_factory=dict)
    residuals: dict[str, float] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)
    verdict: Verdict = "pass"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def judge(residuals: dict[str, float], tolerances: dict[str, float], band: float = BOUNDARY_BAND) -> Verdict:
    """pass iff every residual is within its tolerance; boundary if the worst overshoot is within band."""
    verdict: Verdict = "pass"
    for name, value in residuals.items():
        tol = tolerances[name]
        if not math.isfinite(value) or value > tol + band:
            return "fail"
        if value > tol:
            verdict = "boundary"
    return verdict


def _finish(identity: ExperimentIdentity, N: int, trials: int, seed: int,
            estimates: dict[str, complex | float], residuals: dict[str, float],
            tolerances: dict[str, float], display: Display | None) -> ExperimentReport:
    report = ExperimentReport(identity, N, trials, seed, estimates, residuals, tolerances,
                              judge(residuals, tolerances))
    emit(display, *[Event("estimate", source=identity, message=name, value=abs(v) if isinstance(v, complex) else v)
                    for name, v in estimates.items()])
    emit(display, Event("verdict", source=identity, message=report.verdict))
    return report


def _jsonable(v: complex | float) -> list[float] | float:
    if isinstance(v, complex):
        return complex_pair(v)
    return float(v)


def report_to_json(report: ExperimentReport) -> dict:
    return {
        "identity": report.identity,
        "N": report.N,
        "trials": report.trials,
        "seed": report.seed,
        "estimates": {k: _jsonable(v) for k, v in report.estimates.items()},
        "residuals": dict(report.residuals),
        "tolerances": dict(report.tolerances),
        "verdict": report.verdict,
    }


def reports_to_csv(reports: Sequence[ExperimentReport]) -> str:
    """One row per report: identity,N,trials,seed,residual_*,verdict."""
    names = sorted({name for r in reports for name in r.residuals})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["identity", "N", "trials", "seed"] + [f"residual_{n}" for n in names] + ["verdict"])
    for r in reports:
        cells = [format_float(r.residuals[n]) if n in r.residuals else "" for n in names]
        writer.writerow([r.identity, r.N, r.trials, r.seed] + cells + [r.verdict])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def _square(m: object, N: int | None = None, label: str = "matrix") -> np.ndarray:
    a = np.atleast_2d(np.asarray(m, dtype=complex))
    if a.ndim != 2 or a.shape[0] != a.shape[1] or (N is not None and a.shape[0] != N):
        raise DimensionMismatch(f"{label} has shape {a.shape}, expected square" + (f" of size {N}" if N else ""))
    return a


def _check_run(trials: int, eps: float | None = None) -> None:
    if trials < 1:
        raise BadParams(f"trials must be positive, got {trials}")
    if eps is not None and eps <= 0:
        raise BadParams(f"the imaginary shift must be positive, got {eps}")


def experiment_prop32(lam: Sequence[float] | np.ndarray, a0: np.ndarray, eps: float = 1.0,
                      trials: int = 200, seed: int = 0, tolerance: float = MC_TOLERANCE,
                      display: Display | None = None) -> ExperimentReport:
    """E_{W*(Lambda)} (a - Lambda)^{-1} = (f - Lambda)^{-1} for a = U(a0 + i eps)U*, U Haar.

    The Haar mean of the resolvents is projected onto W*(Lambda) and a scalar f
    is fitted to its diagonal. off_diag is the literal ||M - diag(M)|| / ||M||
    of the mean M; it carries the Monte Carlo noise floor, so the verdict gates
    on off_algebra, the debiased relative mass the mean keeps outside W*(Lambda).
    """
    lam = np.asarray(lam, dtype=float).ravel()
    N = lam.size
    a = _square(a0, N, "a0") + 1j * eps * np.eye(N)
    _check_run(trials, eps)
    emit(display, Event("experiment_start", source="prop32", message=f"prop32 (N={N}, trials={trials})"))
    algebra = SpectralAlgebra(np.diag(lam))
    lam_m = np.diag(lam)
    squares: list[float] = []

    def trial(rng: np.random.Generator) -> np.ndarray:
        u = haar_unitary(rng, N)
        r = la.inv(u @ a @ u.conj().T - lam_m)
        squares.append(algebra.off_norm_sq(r))
        return r

    mean = _trial_mean(trial, trials, seed, display, "prop32")
    off, raw = algebra.debiased_off(mean, squares, trials)
    f, fit = _fit_scalar(algebra.diagonal(mean), algebra.eigenvalues)
    return _finish(
        "prop32", N, trials, seed,
        {"f": f, "im_f": f.imag, "off_diag": off_diagonal(mean), "off_algebra_raw": raw},
        {"off_algebra": off, "fit_residual": fit, "im_f_deficit": 0.5 * eps - f.imag},
        {"off_algebra": tolerance, "fit_residual": tolerance, "im_f_deficit": 0.0},
        display)


def experiment_prop33(A0: np.ndarray, C0: np.ndarray, eps: float = 1.0, trials: int = 200, seed: int = 0,
                      tolerance: float = MC_TOLERANCE, display: Display | None = None) -> ExperimentReport:
    """(E_A (a + c)^{-1})^{-1} - a is a scalar, for a = A0 + i eps and c = U(C0 + i eps)U*."""
    A0 = _square(A0, label="A0")
    N = A0.shape[0]
    C0 = _square(C0, N, "C0")
    _check_run(trials, eps)
    emit(display, Event("experiment_start", source="prop33", message=f"prop33 (N={N}, trials={trials})"))
    eye = np.eye(N)
    a, c0 = A0 + 1j * eps * eye, C0 + 1j * eps * eye
    algebra = SpectralAlgebra(0.5 * (A0 + A0.conj().T))
    squares: list[float] = []

    def trial(rng: np.random.Generator) -> np.ndarray:
        u = haar_unitary(rng, N)
        r = la.inv(a + u @ c0 @ u.conj().T)
        squares.append(algebra.off_norm_sq(r))
        return r

    mean = _trial_mean(trial, trials, seed, display, "prop33")
    off, raw = algebra.debiased_off(mean, squares, trials)
    D = la.inv(algebra.project(mean)) - a
    tau = complex(np.trace(D)) / N
    size = operator_norm(D)
    scalar_dev = operator_norm(D - tau * eye) / size if size > 0 else 0.0
    return _finish(
        "prop33", N, trials, seed,
        {"tau_D": tau, "off_algebra": off, "off_algebra_raw": raw},
        {"scalar_dev": scalar_dev, "im_tau_deficit": 0.4 * eps - tau.imag},
        {"scalar_dev": tolerance, "im_tau_deficit": 0.0},
        display)


def experiment_thm36(theta_law: CircleMeasure, c0: complex | np.ndarray, N: int | None = None,
                     trials: int = 100, seed: int = 0, tolerance: float = MC_TOLERANCE,
                     random_angles: bool = False, display: Display | None = None) -> ExperimentReport:
    """m = tau((u - c)^{-1}) must equal K(g) for some |g| < 1; for Haar u it must vanish.

    u = V diag(e^{i theta}) V* with V Haar. The angles are the stratified
    quantiles of theta_law, or with random_angles a fresh draw from theta_law in
    every trial; the estimates record which. Every trial also records the Omega
    margin of (u, c) and the disk margin of its trace-level Psi.
    """
    if np.ndim(c0) == 0:
        if N is None:
            raise BadParams("a scalar c0 needs N")
        c = complex(c0) * np.eye(N)
    else:
        c = _square(c0, N, "c0")
        N = c.shape[0]
    if operator_norm(c) > _THM36_NORM_CAP:
        raise BadParams(f"||c0|| must be at most {_THM36_NORM_CAP}, got {operator_norm(c):.4f}")
    _check_run(trials)
    emit(display, Event("experiment_start", source="thm36", message=f"thm36 (N={N}, trials={trials})"))
    fixed = None if random_angles else np.exp(1j * sample_angles(theta_law, N))
    omega_margins: list[float] = []
    psi_margins: list[float] = []

    def trial(rng: np.random.Generator) -> np.ndarray:
        v = haar_unitary(rng, N)
        phases = fixed if fixed is not None else np.exp(1j * sample_angles(theta_law, N, rng))
        u = (v * phases) @ v.conj().T
        omega_margins.append(omega_margin(u, c))
        psi_margins.append(omega_psi(u, c)[1])
        return np.array([np.trace(la.inv(u - c)) / N])

    m_hat = complex(_trial_mean(trial, trials, seed, display, "thm36")[0])
    estimates: dict[str, complex | float] = {"m_hat": m_hat, "random_angles": float(random_angles)}
    residuals = {"omega_deficit": -min(omega_margins), "psi_deficit": -min(psi_margins)}
    tolerances = {"omega_deficit": 0.0, "psi_deficit": 0.0}
    if theta_law.is_haar():
        residuals["m_hat_abs"] = abs(m_hat)
        tolerances["m_hat_abs"] = tolerance
    else:
        ev = disk_subordination_solve(theta_law, m_hat, _SOLVE_TOL, display=display)
        estimates.update(g=ev.g, ball_margin=ev.ball_margin)
        residuals.update(solve_residual=ev.residual, g_modulus_excess=abs(ev.g) - _G_MODULUS_CAP)
        tolerances.update(solve_residual=_SOLVE_TOL, g_modulus_excess=0.0)
    return _finish("thm36", N, trials, seed, estimates, residuals, tolerances, display)


def block_semicircular(eta: CovarianceMap, rng: np.random.Generator, N: int) -> np.ndarray:
    """X = sum_j (k_j (x) C_j + k_j^* (x) C_j^*)/sqrt 2 with independent Ginibre C_j.

    Its E_B-distribution tends to the semicircular one with covariance eta.symmetrized().
    """
    n = eta.n
    X = np.zeros((n * N, n * N), dtype=complex)
    for k in eta.kraus:
        blk = np.kron(k, ginibre(rng, N))
        X += blk + blk.conj().T
    return X / math.sqrt(2.0)


def experiment_thm31_block(eta_x: CovarianceMap, eta_y: CovarianceMap, b: np.ndarray,
                           N: int = 512, trials: int = 100, seed: int = 0,
                           tolerance: float = MC_TOLERANCE,
                           display: Display | None = None) -> ExperimentReport:
    """G_{X+Y}(b) = G_X(F(b)) for block models of B-free semicirculars.

    F(b) comes from the solver with the exact G_{X+Y}(b) as target; both sides
    are then estimated by partial traces of block resolvents built from the
    same X samples.
    """
    n = eta_x.n
    if eta_y.n != n:
        raise DimensionMismatch(f"covariance maps act on {n}x{n} and {eta_y.n}x{eta_y.n}")
    b = _square(b, n, "b")
    if n * N > _MAX_BLOCK_DIM:
        raise DimensionMismatch(f"n*N = {n * N} exceeds {_MAX_BLOCK_DIM}")
    if halfplane_margin(b) < _MIN_BLOCK_SHIFT:
        raise DomainError(f"b needs half-plane margin at least {_MIN_BLOCK_SHIFT}, got {halfplane_margin(b):.3e}")
    _check_run(trials)
    emit(display, Event("experiment_start", source="thm31_block",
                        message=f"thm31_block (n={n}, N={N}, trials={trials})"))
    sx, sy = eta_x.symmetrized(), eta_y.symmetrized()
    g_sum = op_add_cauchy(sx, sy, b).g
    F = solve_subordination_F(op_cauchy_evaluator(sx), g_sum, b, display=display)
    eye = np.eye(N)
    bb, fb = np.kron(b, eye), np.kron(F, eye)

    def trial(rng: np.random.Generator) -> np.ndarray:
        X = block_semicircular(eta_x, rng, N)
        Y = block_semicircular(eta_y, rng, N)
        return np.stack([partial_trace(la.inv(bb - X - Y), n, N), partial_trace(la.inv(fb - X), n, N)])

    est = _trial_mean(trial, trials, seed, display, "thm31_block")
    g_sum_hat, g_x_hat = est[0], est[1]
    return _finish(
        "thm31_block", N, trials, seed,
        {"tau_F": complex(np.trace(F)) / n, "im_growth": im_growth(F, b),
         "tau_G_sum": complex(np.trace(g_sum)) / n},
        {"subordination": operator_norm(g_sum_hat - g_x_hat), "solver_gap": operator_norm(g_sum_hat - g_sum)},
        {"subordination": tolerance, "solver_gap": tolerance},
        display)


def _lemma34_sample(rng: np.random.Generator, dims: Sequence[int]) -> np.ndarray:
    d = int(rng.choice(dims))
    kind = int(rng.integers(3))
    if kind == 0:
        m = ginibre(rng, d)
    elif kind == 1:
        m = haar_unitary(rng, d)
    else:
        m = np.triu(ginibre(rng, d))
    return rng.uniform(0.0, 2.0) * m / operator_norm(m)


def experiment_lemma34(dims: Sequence[int] = (1, 2, 3, 4, 5, 6), samples: int = 1000, seed: int = 0,
                       band: float = _LEMMA34_BAND, display: Display | None = None) -> ExperimentReport:
    """||x|| < 1 iff 2 Re (1-x)^{-1} >= 1 + eps, swept over random matrices of norm in [0, 2].

    The unscaled resolvent identity residual is taken over the first
    _IDENTITY_SAMPLES draws.
    """
    if not dims or min(dims) < 1:
        raise BadParams(f"dims must be positive sizes, got {dims}")
    _check_run(samples)
    emit(display, Event("experiment_start", source="lemma34", message=f"lemma34 ({samples} samples)"))
    rng = ensemble_rng(seed)
    fixtures = [np.zeros((dims[0], dims[0]), dtype=complex), 1.5 * haar_unitary(rng, max(dims))]
    violations = skipped = 0
    identity = 0.0
    for i in range(samples):
        x = fixtures[i] if i < len(fixtures) else _lemma34_sample(rng, dims)
        if abs(1.0 - operator_norm(x)) <= band:
            skipped += 1
            continue
        cond_i, cond_ii = lemma34_margins(x)
        if (cond_i > 0) != (cond_ii > 0):
            violations += 1
        if i < _IDENTITY_SAMPLES and math.isfinite(cond_ii):
            identity = max(identity, lemma34_identity_residual(x))
        if (i + 1) % 1000 == 0:
            emit(display, Event("trial_batch", source="lemma34", count=i + 1))
    return _finish(
        "lemma34", max(dims), samples, seed,
        {"tested": float(samples - skipped), "boundary_skipped": float(skipped)},
        {"violations": float(violations), "identity_residual": identity},
        {"violations": 0.0, "identity_residual": _IDENTITY_TOL},
        display)


# ---------------------------------------------------------------------------
# Default runs
# ---------------------------------------------------------------------------

def balanced_signs(N: int) -> np.ndarray:
    return np.where(np.arange(N) % 2 == 0, 1.0, -1.0)


def run_experiment(identity: str, seed: int = 0, N: int | None = None, trials: int | None = None,
                   tolerance: float = MC_TOLERANCE, display: Display | None = None,
                   **overrides: object) -> ExperimentReport:
    """Run one experiment at its default configuration; keyword overrides replace model inputs."""
    if identity == "prop32":
        N = N or 600
        kw = dict(lam=balanced_signs(N), a0=np.diag(balanced_signs(N)), trials=trials or 200)
        kw.update(overrides)
        return experiment_prop32(seed=seed, tolerance=tolerance, display=display, **kw)
    if identity == "prop33":
        N = N or 600
        kw = dict(A0=np.diag(balanced_signs(N)), C0=np.diag(balanced_signs(N)), trials=trials or 200)
        kw.update(overrides)
        return experiment_prop33(seed=seed, tolerance=tolerance, display=display, **kw)
    if identity == "thm36":
        N = N or 600
        kw = dict(theta_law=make_standard("haar_circle"), c0=0.7 * haar_unitary(setup_rng(seed), N),
                  trials=trials or 100)
        kw.update(overrides)
        return experiment_thm36(N=N, seed=seed, tolerance=tolerance, display=display, **kw)
    if identity == "thm31_block":
        kw = dict(eta_x=CovarianceMap.of([[[0.8, 0.4], [0.4, 0.2]]]),
                  eta_y=CovarianceMap.of([[[0.0, 0.6], [0.0, 0.3]]]),
                  b=1j * np.eye(2), trials=trials or 100)
        kw.update(overrides)
        return experiment_thm31_block(N=N or 512, seed=seed, tolerance=tolerance, display=display, **kw)
    if identity == "lemma34":
        kw = dict(samples=trials or 10000)
        kw.update(overrides)
        return experiment_lemma34(seed=seed, display=display, **kw)
    raise BadParams(f"unknown experiment '{identity}'; choose from {', '.join(IDENTITIES)}")


def run_all(seed: int = 0, N: int | None = None, trials: int | None = None,
            tolerance: float = MC_TOLERANCE, display: Display | None = None) -> list[ExperimentReport]:
    """Every experiment at its default configuration, in IDENTITIES order."""
    return [run_experiment(name, seed, N, trials, tolerance, display) for name in IDENTITIES]


def convergence_trend(identity: str, residual: str, sizes: tuple[int, int], seeds: Sequence[int],
                      trials: int | None = None, **overrides: object) -> int:
    """Number of seeds for which the named residual shrinks from the smaller N to the larger."""
    small, large = sizes
    wins = 0
    for seed in seeds:
        a = run_experiment(identity, seed, small, trials, **overrides).residuals[residual]
        b = run_experiment(identity, seed, large, trials, **overrides).residuals[residual]
        wins += b < a
    return wins
