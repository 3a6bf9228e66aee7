import sys
from collections.abc import Sequence

from covercalc.core import exec, run
from covercalc.implementations.budget.parser import BudgetParser
from covercalc.implementations.budget.report import BudgetReport


def main(argv: Sequence[str] | None = None) -> str:
    """
    Entry point for the budget command.

    Returns
    -------
        the summary of the budget comparison, followed by the sweep table.

    """
    return exec(BudgetParser(), BudgetReport, argv)


if __name__ == "__main__":
    sys.exit(run(main))
