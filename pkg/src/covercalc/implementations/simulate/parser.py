from covercalc.core.cli.parser import CoreParser
from covercalc.core.cli.type_parsers import parse_design


class SimulateParser(CoreParser):
    """Parser of the `simulate` command."""

    _USAGE = (
        "covercalc simulate [options] --design {none,indemnity:d,parametric:k} "
        "[--years N] [--seed S] [scenario_path | --baseline]"
    )
    _DESCRIPTION = (
        "Estimate terminal wealth by simulation and compare the estimated "
        "mean-variance value with the closed form."
    )

    def __init__(
        self,
        prog: str = "covercalc simulate",
        usage: str = _USAGE,
        description: str = _DESCRIPTION,
        **kwargs,
    ):
        """
        Create a new SimulateParser.

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

        self.add_argument(
            "-d",
            "--design",
            action="store",
            type=parse_design,
            required=True,
            help="The contract held: none, indemnity:<deductible> or "
            "parametric:<payment per event>.",
        )

        self.add_argument(
            "-n",
            "--years",
            action="store",
            type=int,
            default=1_000_000,
            help="Number of simulated years (default: 1000000).",
        )

        self.add_argument(
            "-s",
            "--seed",
            action="store",
            type=int,
            default=0,
            help="Root seed of the random streams (default: 0).",
        )

        self.add_argument(
            "--antithetic",
            action="store_true",
            help="Pair every year with a mirror year using 1 - U for the "
            "severities.",
        )

        self.add_argument(
            "-w",
            "--workers",
            action="store",
            type=int,
            default=1,
            help="Threads that simulate blocks of years; the result does not "
            "depend on it (default: 1).",
        )
