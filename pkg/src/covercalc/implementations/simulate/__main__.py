import sys
from collections.abc import Sequence

from covercalc.core import exec, run
from covercalc.implementations.simulate.parser import SimulateParser
from covercalc.implementations.simulate.report import SimulateReport


def main(argv: Sequence[str] | None = None) -> str:
    """
    Entry point for the simulate command.

    Returns
    -------
        the summary of the simulation.

    """
    return exec(SimulateParser(), SimulateReport, argv)


if __name__ == "__main__":
    sys.exit(run(main))
