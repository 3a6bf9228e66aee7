from covercalc.core.cli.parser import CoreParser
from covercalc.core.cli.type_parsers import parse_amount, parse_sweep


class BudgetParser(CoreParser):
    """Parser of the `budget` command."""

    _USAGE = (
        "covercalc budget [options] (--budget P | --sweep min:max:steps) "
        "[scenario_path | --baseline]"
    )
    _DESCRIPTION = (
        "Compare the best indemnity and parametric contracts whose premium "
        "fits within a budget."
    )

    def __init__(
        self,
        prog: str = "covercalc budget",
        usage: str = _USAGE,
        description: str = _DESCRIPTION,
        **kwargs,
    ):
        """
        Create a new BudgetParser.

        Args:
        ----
            prog: the name of the program
            usage: the usage message
            description: the description of the program
            **kwargs: other keyword arguments passed to the CoreParser

        """
        super().__init__(
            prog=prog, usage=usage, description=description, **kwargs
        )

        group = self.add_mutually_exclusive_group(required=True)
        group.add_argument(
            "--budget",
            action="store",
            type=parse_amount,
            help="The premium budget per period.",
        )
        group.add_argument(
            "--sweep",
            action="store",
            type=parse_sweep,
            help="A range of budgets as min:max:steps; the table is written "
            "as CSV.",
        )
