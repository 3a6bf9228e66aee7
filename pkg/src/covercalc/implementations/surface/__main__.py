import sys
from collections.abc import Sequence

from covercalc.core import exec, run
from covercalc.implementations.surface.parser import SurfaceParser
from covercalc.implementations.surface.report import SurfaceReport


def main(argv: Sequence[str] | None = None) -> str:
    """
    Entry point for the surface command.

    Returns
    -------
        the CSV table, or a summary when it is written to a file.

    """
    return exec(SurfaceParser(), SurfaceReport, argv)


if __name__ == "__main__":
    sys.exit(run(main))
