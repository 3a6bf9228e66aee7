from covercalc.core.cli.parser import CoreParser
from covercalc.core.cli.type_parsers import parse_grid
from covercalc.core.comparison import SurfaceKind


class SurfaceParser(CoreParser):
    """Parser of the `surface` command."""

    _USAGE = (
        "covercalc surface [options] --kind {dgamma,thetagamma,budget} "
        "[--grid a1min:a1max:a1steps,a2min:a2max:a2steps] "
        "[scenario_path | --baseline]"
    )
    _DESCRIPTION = (
        "Write MV^(p) - MV^(d) on a two-dimensional grid as CSV with the "
        "columns axis1, axis2, delta_mv, capped, indemnity_infeasible, chosen."
    )

    def __init__(
        self,
        prog: str = "covercalc surface",
        usage: str = _USAGE,
        description: str = _DESCRIPTION,
        **kwargs,
    ):
        """
        Create a new SurfaceParser.

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
            "-k",
            "--kind",
            action="store",
            type=SurfaceKind,
            choices=list(SurfaceKind),
            required=True,
            metavar="{dgamma,thetagamma,budget}",
            help="dgamma: premium-matched over (d, gamma_d); thetagamma: "
            "premium-matched at d*(theta_d) over (theta_d, gamma_d); budget: "
            "budget-constrained over (budget, gamma_d).",
        )

        self.add_argument(
            "-g",
            "--grid",
            action="store",
            type=parse_grid,
            default=None,
            help="Both axes as min:max:steps separated by a comma (default: "
            "201 x 201 points over the standard ranges).",
        )

        self.add_argument(
            "--truncate-zero",
            action="store_true",
            help="Write max(delta_mv, 0), the positive part only.",
        )
