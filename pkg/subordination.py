#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# subordination.py - Shared errors, solver defaults, events and displays

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Literal

if TYPE_CHECKING:
    from matrix_oracle import ExperimentReport


# ---------------------------------------------------------------------------
# Numerical defaults
# ---------------------------------------------------------------------------

DEFAULT_TOL: float = 1e-10
DEFAULT_MAX_ITER: int = 500
DEFAULT_DAMPING: float = 0.5
DEFAULT_HANDOFF: float = 1e-3
DEFAULT_ETAS: tuple[float, ...] = (1e-2, 3e-3)
DEFAULT_GRID_SIZE: int = 2048
BOUNDARY_BAND: float = 1e-9
N_MAX: int = 64         # domain_calculus dimension cap
OP_N_MAX: int = 8       # operator_valued dimension cap
MC_TOLERANCE: float = 0.05


@dataclass(frozen=True)
class SolverSettings:
    """Knobs shared by the scalar fixed-point solvers and density recovery."""
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    damping: float = DEFAULT_DAMPING
    handoff: float = DEFAULT_HANDOFF       # Picard residual below which Newton takes over
    etas: tuple[float, ...] = DEFAULT_ETAS
    grid_size: int = DEFAULT_GRID_SIZE

    def __post_init__(self) -> None:
        if not 0.0 < self.damping <= 1.0:
            raise BadParams(f"damping must lie in (0, 1], got {self.damping}")
        if self.max_iter < 1:
            raise BadParams(f"max_iter must be positive, got {self.max_iter}")
        if self.tol < 1e-14:
            raise BadParams(f"tol must be at least 1e-14, got {self.tol}")

    def with_overrides(self, **changes: object) -> SolverSettings:
        """Return a copy with the non-None keyword values replaced."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class SubordinationError(Exception):
    """Base class for every failure raised by the engine."""


class DomainError(SubordinationError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class SingularMatrix(SubordinationError):
    """A matrix that must be inverted is singular to working tolerance."""


class NoConvergence(SubordinationError):
    """An iterative solve exhausted its budget without meeting its tolerance."""

    def __init__(self, message: str, max_iter: int = 0,
                 points: list[complex] | None = None, residual: float = float("nan")):
        super().__init__(message)
        self.max_iter = max_iter
        self.points = list(points or [])
        self.residual = residual


class DegenerateTransform(SubordinationError):
    """The transform is constant on its domain, so it cannot be inverted."""


class JacobianSingular(SubordinationError):
    """The Newton Jacobian is singular at the current iterate."""


class ZeroTransform(SubordinationError):
    """A Cauchy transform vanished where it must be bounded away from zero."""


class NonPositiveDensity(SubordinationError):
    """Density recovery produced a clearly negative value."""

    def __init__(self, message: str, minimum: float = 0.0, location: float = 0.0):
        super().__init__(message)
        self.minimum = minimum
        self.location = location


class UnknownFamily(SubordinationError, KeyError):
    """The requested standard measure family does not exist."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class BadParams(SubordinationError, ValueError):
    """Parameters are outside the admissible range for the operation."""


class DimensionMismatch(SubordinationError, ValueError):
    """Matrix shapes do not fit together."""


class ConfigError(SubordinationError, ValueError):
    """A run configuration failed validation."""


# ---------------------------------------------------------------------------
# Events
# ---------------------------------------------------------------------------

EventType = Literal[
    "command_start", "grid_start", "grid_done",
    "solver_converged", "no_convergence", "clamp",
    "trial_batch", "experiment_start", "estimate", "verdict",
    "file_written", "config_error",
]


@dataclass
class Event:
    """A discrete engine occurrence passed from numerics to a Display renderer."""
    type: EventType
    source: str = ""                 # module.operation that emitted it
    point: complex | None = None     # evaluation point, when there is one
    value: float = 0.0               # residual, estimate, or margin
    count: int = 0                   # iterations, trials, or grid size
    message: str = ""                # pre-formatted text
    detail: dict[str, float] = field(default_factory=dict)


def emit(display: Display | None, *events: Event) -> None:
    """Push events to display if there is one."""
    if display is not None and events:
        display.show_events(list(events))


# ---------------------------------------------------------------------------
# Displays
# ---------------------------------------------------------------------------

class Display(ABC):
    """Abstract base class for all renderers.

    show_events renders engine events as they happen; show_report renders a
    finished experiment report.
    """

    @abstractmethod
    def show_events(self, events: list[Event]) -> None:
        """Render a list of events."""
        ...

    @abstractmethod
    def show_report(self, report: ExperimentReport) -> None:
        """Render one finished experiment report."""
        ...


def _format_point(z: complex | None) -> str:
    if z is None:
        return ""
    return f"{z.real:+.4f}{z.imag:+.4f}i"


class PlainTextDisplay(Display):
    """Renders events to the terminal via print()."""

    def show_events(self, events: list[Event]) -> None:
        for event in events:
            self._render(event)

    def show_report(self, report: ExperimentReport) -> None:
        print(f"-=-=-= {report.identity}: N={report.N} trials={report.trials} "
              f"seed={report.seed} =-=-=-")
        for name, value in sorted(report.residuals.items()):
            tol = report.tolerances.get(name, float("nan"))
            print(f"  {name:<22} {value:>12.4e}  (tol {tol:.1e})")
        print(f"  verdict: {report.verdict}")

    def _render(self, event: Event) -> None:  # noqa: C901
        t = event.type
        if t == "command_start":
            print(f"-=-=-= {event.message} =-=-=-")
        elif t == "grid_start":
            print(f"{event.source}: evaluating {event.count} points...")
        elif t == "grid_done":
            print(f"{event.source}: max residual {event.value:.3e} over {event.count} points.")
        elif t == "solver_converged":
            print(f"{event.source}: converged at {_format_point(event.point)} "
                  f"in {event.count} iterations (residual {event.value:.3e}).")
        elif t == "no_convergence":
            print(f"{event.source}: no convergence at {_format_point(event.point)} "
                  f"after {event.count} iterations.")
        elif t == "clamp":
            print(f"{event.source}: iterate pulled back inside the disk to radius {event.value:.4f}.")
        elif t == "trial_batch":
            print(f"{event.source}: {event.count} trials done.")
        elif t == "experiment_start":
            print(f"Running {event.message}...")
        elif t == "estimate":
            print(f"  {event.message} = {event.value:.6g}")
        elif t == "verdict":
            print(f"{event.source}: {event.message}")
        elif t == "file_written":
            print(f"Wrote {event.message}")
        elif t == "config_error":
            print(f"Config error: {event.message}")


class NullDisplay(Display):
    """Swallows everything; used for headless runs and tests."""

    def show_events(self, events: list[Event]) -> None:
        pass

    def show_report(self, report: ExperimentReport) -> None:
        pass


class RecordingDisplay(Display):
    """Accumulates events and reports for post-hoc inspection.

    After a run, self.events holds every event in order and self.reports
    every report, which is what the CSV summary is built from.
    """

    def __init__(self) -> None:
        self.events: list[Event] = []
        self.reports: list[ExperimentReport] = []

    def show_events(self, events: list[Event]) -> None:
        self.events.extend(events)

    def show_report(self, report: ExperimentReport) -> None:
        self.reports.append(report)

    def of_type(self, event_type: EventType) -> list[Event]:
        """Return the recorded events with the given type."""
        return [e for e in self.events if e.type == event_type]
