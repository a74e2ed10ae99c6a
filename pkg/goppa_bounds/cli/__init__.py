"""Command-line front end.

- parser.py: argparse definition and the validated ``RunConfig``
- commands.py: one handler per subcommand, returning an exit status
- rendering.py: report models and their human/structured output
"""

from goppa_bounds.cli.commands import COMMANDS, dispatch
from goppa_bounds.cli.parser import RunConfig, build_parser

__all__ = [
    "COMMANDS",
    "RunConfig",
    "build_parser",
    "dispatch",
]
