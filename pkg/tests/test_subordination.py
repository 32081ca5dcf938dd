#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# tests/test_subordination.py - Tests for settings, errors, events and displays

import unittest
from unittest.mock import patch

from matrix_oracle import ExperimentReport
from subordination import (
    BadParams, DomainError, Event, NoConvergence, NullDisplay, PlainTextDisplay, RecordingDisplay,
    SolverSettings, SubordinationError, UnknownFamily, emit,
)


class TestSolverSettings(unittest.TestCase):
    """SolverSettings validation and overrides."""

    def test_defaults(self):
        s = SolverSettings()
        self.assertEqual(s.max_iter, 500)
        self.assertEqual(s.damping, 0.5)
        self.assertEqual(s.etas, (1e-2, 3e-3))

    def test_rejects_tiny_tol(self):
        with self.assertRaises(BadParams):
            SolverSettings(tol=1e-15)

    def test_rejects_bad_damping(self):
        for damping in (0.0, -0.1, 1.5):
            with self.subTest(damping=damping):
                with self.assertRaises(BadParams):
                    SolverSettings(damping=damping)

    def test_with_overrides_skips_none(self):
        s = SolverSettings().with_overrides(tol=1e-8, max_iter=None)
        self.assertEqual(s.tol, 1e-8)
        self.assertEqual(s.max_iter, 500)


class TestErrors(unittest.TestCase):
    """Exception hierarchy and payloads."""

    def test_domain_error_is_value_error(self):
        self.assertTrue(issubclass(DomainError, ValueError))
        self.assertTrue(issubclass(DomainError, SubordinationError))

    def test_no_convergence_carries_points(self):
        exc = NoConvergence("stuck", max_iter=7, points=[1j], residual=0.25)
        self.assertEqual(exc.max_iter, 7)
        self.assertEqual(exc.points, [1j])
        self.assertEqual(exc.residual, 0.25)

    def test_unknown_family_message_not_quoted(self):
        """KeyError normally repr()s its argument; the message should read plainly."""
        self.assertEqual(str(UnknownFamily("unknown measure family 'x'")), "unknown measure family 'x'")


class TestDisplays(unittest.TestCase):
    """Event routing through the Display implementations."""

    def _report(self, verdict="pass"):
        return ExperimentReport("lemma34", 6, 10, 3, {}, {"violations": 0.0}, {"violations": 0.0}, verdict)

    def test_emit_without_display_is_silent(self):
        emit(None, Event("grid_start", count=3))

    def test_recording_display_keeps_order(self):
        rec = RecordingDisplay()
        emit(rec, Event("grid_start", count=3), Event("grid_done", value=1e-12, count=3))
        self.assertEqual([e.type for e in rec.events], ["grid_start", "grid_done"])
        self.assertEqual(len(rec.of_type("grid_done")), 1)

    def test_recording_display_keeps_reports(self):
        rec = RecordingDisplay()
        rec.show_report(self._report())
        self.assertEqual(rec.reports[0].identity, "lemma34")

    @patch('builtins.print')
    def test_plain_text_renders_every_event_type(self, mock_print):
        types = ["command_start", "grid_start", "grid_done", "solver_converged", "no_convergence",
                 "clamp", "trial_batch", "experiment_start", "estimate", "verdict", "file_written",
                 "config_error"]
        PlainTextDisplay().show_events([Event(t, source="x", point=1j, message="m") for t in types])
        self.assertEqual(mock_print.call_count, len(types))

    @patch('builtins.print')
    def test_plain_text_report_shows_verdict(self, mock_print):
        PlainTextDisplay().show_report(self._report("boundary"))
        printed = " ".join(str(c.args[0]) for c in mock_print.call_args_list)
        self.assertIn("boundary", printed)
        self.assertIn("violations", printed)

    @patch('builtins.print')
    def test_null_display_prints_nothing(self, mock_print):
        d = NullDisplay()
        d.show_events([Event("grid_start")])
        d.show_report(self._report())
        mock_print.assert_not_called()


if __name__ == "__main__":
    unittest.main()
