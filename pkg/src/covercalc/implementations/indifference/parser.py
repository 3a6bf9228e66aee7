from covercalc.core.cli.parser import CoreParser
from covercalc.core.comparison import IndifferenceMode


class IndifferenceParser(CoreParser):
    """Parser of the `indifference` command."""

    _USAGE = (
        "covercalc indifference [options] --target {gamma,theta} "
        "--mode {optimal,matched} [scenario_path | --baseline]"
    )
    _DESCRIPTION = (
        "Find the indemnity fixed cost or loading at which indemnity and "
        "parametric cover give the same mean-variance value."
    )

    def __init__(
        self,
        prog: str = "covercalc indifference",
        usage: str = _USAGE,
        description: str = _DESCRIPTION,
        **kwargs,
    ):
        """
        Create a new IndifferenceParser.

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
            "-t",
            "--target",
            action="store",
            choices=["gamma", "theta"],
            default="gamma",
            help="Solve for gamma_d or theta_d (default: gamma).",
        )

        self.add_argument(
            "-m",
            "--mode",
            action="store",
            type=IndifferenceMode,
            choices=list(IndifferenceMode),
            default=IndifferenceMode.OPTIMAL_BOTH,
            metavar="{optimal,matched}",
            help="Compare both optimal contracts, or the optimal deductible "
            "with the parametric cover bought for the same premium "
            "(default: optimal).",
        )
