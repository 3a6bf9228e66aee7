from covercalc.core.cli.parser import CoreParser


class OptimizeParser(CoreParser):
    """Parser of the `optimize` command."""

    _USAGE = "covercalc optimize [options] [scenario_path | --baseline]"
    _DESCRIPTION = (
        "Compute the optimal deductible and parametric payment, their premiums "
        "and mean-variance values, and the duality gap."
    )

    def __init__(
        self,
        prog: str = "covercalc optimize",
        usage: str = _USAGE,
        description: str = _DESCRIPTION,
        **kwargs,
    ):
        """
        Create a new OptimizeParser.

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
            "--check-points",
            action="store",
            type=int,
            default=0,
            help="Also locate both optima by grid search on this many points "
            "(at least 1000; default: 0, no check).",
        )
