"""Goppa Orbit Bounds - command-line entry point.

Computes upper bounds on the number of extended irreducible Goppa codes of
degree r and length q^n + 1, and verifies them by exhaustive orbit
enumeration over explicit finite-field towers:

- ``bound``: fixed-set table, Burnside counts and closed-form branch
- ``verify``: oracle partitions compared exactly with every prediction
- ``matrices``: order-k matrices in GL(2, q^n), closed form and brute force
- ``code``: parity matrix of C(α), extension and equivalence certificates
- ``scan``: integrality and branch agreement over a parameter grid
"""

from collections.abc import Sequence
from typing import Optional

from goppa_bounds.cli import RunConfig, build_parser, dispatch
from goppa_bounds.core.config import get_settings
from goppa_bounds.core.exceptions import handle_exception
from goppa_bounds.core.logging import setup_logging
from goppa_bounds.middleware import run_scope


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command and return its exit status."""
    settings = get_settings()

    # Configure logging based on settings
    setup_logging(settings)

    args = build_parser().parse_args(argv)
    structured = args.format == "structured"

    with run_scope():
        try:
            config = RunConfig.from_args(args, settings)
            return dispatch(config, settings)
        except Exception as exc:
            return handle_exception(exc, structured=structured)
