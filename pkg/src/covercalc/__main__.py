import sys
from collections.abc import Sequence
from importlib import import_module

from covercalc.core import run
from covercalc.core.cli.parser import make_top_level_parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run `covercalc <command> ...` and return the exit code."""
    args = make_top_level_parser().parse_args(argv)
    command = import_module(f"covercalc.implementations.{args.command}")
    return run(command.main, args.arguments)


if __name__ == "__main__":
    sys.exit(main())
