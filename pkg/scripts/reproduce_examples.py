#!/usr/bin/env python3
"""Reproduce the worked examples.

Runs the CLI in-process for each example and compares the structured
report against the known value.
Exit code 0 = all examples reproduced, 1 = failures.

Usage:
    python scripts/reproduce_examples.py [--with-oracle]
"""

import argparse
import contextlib
import io
import json
import sys
from collections.abc import Callable
from typing import Any

from goppa_bounds.main import main as cli_main

Example = tuple[list[str], int, Callable[[dict[str, Any]], Any], Any]


BOUND_EXAMPLES: list[Example] = [
    (["bound", "--q", "2", "--n", "5", "--r", "5"], 0, lambda r: r["extended_bound"], 41),
    (["bound", "--q", "2", "--n", "11", "--r", "5"], 0, lambda r: r["extended_bound"], 76261),
    (["bound", "--q", "2", "--n", "3", "--r", "7"], 0, lambda r: r["extended_bound"], 201),
    (["bound", "--q", "2", "--n", "3", "--r", "7"], 0, lambda r: r["case"]["branch"], "table-derived"),
    (["bound", "--q", "2", "--n", "3", "--r", "5"], 0, lambda r: r["affine_orbit_bound"], 41),
    (["bound", "--q", "3", "--n", "3", "--r", "3"], 0, lambda r: r["extended_bound"], 1),
    (["bound", "--q", "5", "--n", "3", "--r", "3"], 0, lambda r: r["affine_orbit_bound"], 14),
    (["matrices", "--q", "3", "--n", "3", "--k", "7"], 0, lambda r: r["total"], 2106),
    (["matrices", "--q", "2", "--n", "3", "--k", "3"], 0, lambda r: r["total"], 56),
    (["matrices", "--q", "2", "--n", "3", "--k", "7"], 0, lambda r: r["hypotheses_met"], False),
]

ORACLE_EXAMPLES: list[Example] = [
    (["verify", "--q", "2", "--n", "3", "--r", "3"], 0, lambda r: r["status"], "pass"),
    (["verify", "--q", "2", "--n", "3", "--r", "5"], 0, lambda r: r["status"], "pass"),
    (["verify", "--q", "2", "--n", "5", "--r", "3"], 0, lambda r: r["status"], "pass"),
    (["verify", "--q", "2", "--n", "11", "--r", "5"], 2, None, None),
]


def run_example(argv: list[str], expected_status: int, extract, expected) -> bool:
    """Run one example and check its exit status and reported value."""
    label = "goppa-bounds " + " ".join(argv)
    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        status = cli_main([*argv, "--format", "structured"])

    if status != expected_status:
        print(f"[FAIL] {label} -> exit {status} (expected {expected_status})")
        return False
    if extract is None:
        print(f"[OK] {label} -> exit {status}")
        return True

    try:
        value = extract(json.loads(stdout.getvalue()))
    except (KeyError, json.JSONDecodeError) as e:
        print(f"[FAIL] {label} -> unreadable report: {e}")
        return False
    if value != expected:
        print(f"[FAIL] {label} -> {value} (expected {expected})")
        return False
    print(f"[OK] {label} -> {value}")
    return True


def main():
    """Run all examples."""
    parser = argparse.ArgumentParser(description="Reproduce the worked examples")
    parser.add_argument(
        "--with-oracle",
        action="store_true",
        help="also run the exhaustive verifications",
    )
    args = parser.parse_args()

    examples = BOUND_EXAMPLES + (ORACLE_EXAMPLES if args.with_oracle else [])
    print(f"Reproducing {len(examples)} examples")
    print("=" * 60)

    passed = sum(run_example(*example) for example in examples)
    failed = len(examples) - passed

    print("=" * 60)
    print(f"Results: {passed} passed, {failed} failed")
    sys.exit(0 if failed == 0 else 1)


if __name__ == "__main__":
    main()
