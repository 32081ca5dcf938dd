#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# tests/test_utility.py - Tests for number formatting, atomic writes and argument parsing

import json
import os
import tempfile
import unittest
from unittest.mock import patch

import utility


class TestFormatting(unittest.TestCase):
    """format_float, complex_pair and csv_text."""

    def testFormatFloatRoundTrips(self):
        """Verify 17 significant digits survive float() unchanged."""
        for x in (0.1, 1 / 3, -2.5e-300, 12345.678901234567):
            with self.subTest(x=x):
                self.assertEqual(float(utility.format_float(x)), x)

    def testComplexPair(self):
        self.assertEqual(utility.complex_pair(1 - 2j), [1.0, -2.0])
        self.assertEqual(utility.complex_pair(3), [3.0, 0.0])

    def testCsvTextFormatsFloatsOnly(self):
        text = utility.csv_text(["k", "x", "label"], [[1, 0.1, "a,b"]])
        self.assertEqual(text.splitlines(), ["k,x,label", f"1,{utility.format_float(0.1)},\"a,b\""])


class TestAtomicWrites(unittest.TestCase):
    """atomic_write_text and write_json."""

    def testCreatesDirectoriesAndReplaces(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "a", "b", "out.txt")
            utility.atomic_write_text(path, "first")
            utility.atomic_write_text(path, "second")
            with open(path, encoding="utf-8") as fh:
                self.assertEqual(fh.read(), "second")
            self.assertEqual(os.listdir(os.path.dirname(path)), ["out.txt"])

    def testFailedWriteLeavesNoTempFile(self):
        """Verify a failure during rename removes the temp file and keeps the old content."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "out.txt")
            utility.atomic_write_text(path, "old")
            with patch('utility.os.replace', side_effect=OSError("disk full")):
                with self.assertRaises(OSError):
                    utility.atomic_write_text(path, "new")
            self.assertEqual(os.listdir(tmp), ["out.txt"])
            with open(path, encoding="utf-8") as fh:
                self.assertEqual(fh.read(), "old")

    def testWriteJsonLayouts(self):
        with tempfile.TemporaryDirectory() as tmp:
            compact = os.path.join(tmp, "c.json")
            pretty = os.path.join(tmp, "p.json")
            utility.write_json(compact, {"a": [1, 2]}, compact=True)
            utility.write_json(pretty, {"a": [1, 2]})
            with open(compact, encoding="utf-8") as fh:
                self.assertEqual(fh.read(), '{"a":[1,2]}\n')
            with open(pretty, encoding="utf-8") as fh:
                text = fh.read()
            self.assertIn('\n  "a"', text)
            self.assertEqual(json.loads(text), {"a": [1, 2]})


class TestParsing(unittest.TestCase):
    """parse_complex, parse_points, parse_floats and parse_grid."""

    def testParseComplexForms(self):
        cases = {"1+2j": 1 + 2j, "1+2i": 1 + 2j, "2i": 2j, "i": 1j, "-i": -1j, "-0.5-i": -0.5 - 1j,
                 " 3 ": 3 + 0j, "1 + i": 1 + 1j}
        for text, expected in cases.items():
            with self.subTest(text=text):
                self.assertEqual(utility.parse_complex(text), expected)

    def testParseComplexRejects(self):
        for text in ("", "abc", "1+"):
            with self.subTest(text=text):
                with self.assertRaises(ValueError):
                    utility.parse_complex(text)

    def testParsePoints(self):
        self.assertEqual(utility.parse_points("i, 1+0.5i,"), [1j, 1 + 0.5j])

    def testParseFloats(self):
        self.assertEqual(utility.parse_floats("0.1,0.03,0.01"), [0.1, 0.03, 0.01])
        with self.assertRaises(ValueError):
            utility.parse_floats("0.1,x")

    def testParseGrid(self):
        self.assertEqual(utility.parse_grid("-3:3:601"), (-3.0, 3.0, 601))
        for text in ("3:-3:10", "0:1:1", "0:1", "a:b:c", "0:1:2.5"):
            with self.subTest(text=text):
                with self.assertRaises(ValueError):
                    utility.parse_grid(text)


if __name__ == "__main__":
    unittest.main()
