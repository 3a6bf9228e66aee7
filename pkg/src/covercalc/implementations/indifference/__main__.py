import sys
from collections.abc import Sequence

from covercalc.core import exec, run
from covercalc.implementations.indifference.parser import IndifferenceParser
from covercalc.implementations.indifference.report import IndifferenceReport


def main(argv: Sequence[str] | None = None) -> str:
    """
    Entry point for the indifference command.

    Returns
    -------
        the summary of the indifference threshold.

    """
    return exec(IndifferenceParser(), IndifferenceReport, argv)


if __name__ == "__main__":
    sys.exit(run(main))
