#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# color_display.py - ColorDisplay: rich console renderer for engine events and reports
#
# Requires: pip install rich

from __future__ import annotations

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from matrix_oracle import ExperimentReport
from subordination import Display, Event


_VERDICT_STYLE: dict[str, str] = {"pass": "green", "fail": "bold red", "boundary": "yellow"}


def _point(z: complex | None) -> str:
    return "" if z is None else f"{z.real:+.4f}{z.imag:+.4f}i"


def _event_markup(event: Event) -> str | None:  # noqa: C901
    """Markup for one event, or None if the event is silent here."""
    t = event.type
    src = escape(event.source)
    if t == "command_start":
        return f"[bold]-=-=-= {escape(event.message)} =-=-=-[/bold]"
    if t == "grid_start":
        return f"[dim]{src}: evaluating {event.count} points...[/dim]"
    if t == "grid_done":
        return f"{src}: max residual [cyan]{event.value:.3e}[/cyan] over {event.count} points."
    if t == "solver_converged":
        return None  # per-solve chatter; the grid summary covers it
    if t == "no_convergence":
        return f"[red]{src}: no convergence at {_point(event.point)} after {event.count} iterations.[/red]"
    if t == "clamp":
        return f"[yellow]{src}: iterate pulled back to radius {event.value:.4f}.[/yellow]"
    if t == "trial_batch":
        return f"[dim]{src}: {event.count} trials done.[/dim]"
    if t == "experiment_start":
        return f"[bold]Running {escape(event.message)}...[/bold]"
    if t == "estimate":
        return f"  {escape(event.message)} = {event.value:.6g}"
    if t == "verdict":
        style = _VERDICT_STYLE.get(event.message, "white")
        return f"{src}: [{style}]{escape(event.message)}[/{style}]"
    if t == "file_written":
        return f"[dim]Wrote {escape(event.message)}[/dim]"
    if t == "config_error":
        return f"[bold red]Config error:[/bold red] {escape(event.message)}"
    return None


class ColorDisplay(Display):
    """Renders events as rich markup and reports as tables."""

    def __init__(self, console: Console | None = None) -> None:
        self.console = console or Console()

    def show_events(self, events: list[Event]) -> None:
        for event in events:
            line = _event_markup(event)
            if line is not None:
                self.console.print(line)

    def show_report(self, report: ExperimentReport) -> None:
        style = _VERDICT_STYLE.get(report.verdict, "white")
        table = Table(title=f"{report.identity}  N={report.N}  trials={report.trials}  seed={report.seed}")
        table.add_column("residual")
        table.add_column("value", justify="right")
        table.add_column("tolerance", justify="right")
        for name, value in sorted(report.residuals.items()):
            tol = report.tolerances.get(name, float("nan"))
            cell = f"{value:.4e}" if value <= tol else f"[red]{value:.4e}[/red]"
            table.add_row(name, cell, f"{tol:.1e}")
        self.console.print(table)
        self.console.print(f"verdict: [{style}]{report.verdict}[/{style}]")
