import sys
from collections.abc import Sequence

from covercalc.core import exec, run
from covercalc.implementations.optimize.parser import OptimizeParser
from covercalc.implementations.optimize.report import OptimizeReport


def main(argv: Sequence[str] | None = None) -> str:
    """
    Entry point for the optimize command.

    Returns
    -------
        the summary of the optimal contracts.

    """
    return exec(OptimizeParser(), OptimizeReport, argv)


if __name__ == "__main__":
    sys.exit(run(main))
