from argparse import ArgumentParser, Namespace
from typing import Any

from covercalc.core.scenario_file import baseline, load_scenario

COMMANDS: tuple[str, ...] = (
    "optimize",
    "indifference",
    "surface",
    "budget",
    "simulate",
)


class CoreParser(ArgumentParser):
    """Parser with the flags every command shares.

    After parsing, the namespace holds the `scenario`, read from the file or
    taken from the baseline.
    """

    def __init__(self, *args: Any, **kwargs: Any):
        """Create a new CoreParser."""
        super().__init__(*args, **kwargs)

        self.add_argument(
            "scenario_path",
            action="store",
            nargs="?",
            default=None,
            help="YAML scenario file. Missing keys take the baseline values.",
        )

        self.add_argument(
            "-b",
            "--baseline",
            action="store_true",
            help="Use the built-in calibration instead of a scenario file.",
        )

        self.add_argument(
            "--per-event-gamma",
            action="store_true",
            help="Read gamma_d and gamma_p as costs per event; they are "
            "multiplied by the expected number of events per period.",
        )

        self.add_argument(
            "-o",
            "--out",
            action="store",
            default=None,
            help="Also write the output to this file.",
        )

        self.add_argument(
            "-j",
            "--json",
            action="store_true",
            help="Send the output as a JSON string to stdout.",
        )

        self.add_argument(
            "-l",
            "--loglevel",
            action="store",
            default="WARNING",
            help="Set the log level.",
            choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        )

    def parse_args(self, *args: Any, **kwargs: Any) -> Namespace:
        """Parse the arguments and load the scenario."""
        parsed_args: Namespace = super().parse_args(*args, **kwargs)

        if parsed_args.baseline and parsed_args.scenario_path:
            self.error("give either a scenario file or --baseline, not both")
        if not (parsed_args.baseline or parsed_args.scenario_path):
            self.error("a scenario file or --baseline is required")

        if parsed_args.baseline:
            parsed_args.scenario = baseline()
        else:
            parsed_args.scenario = load_scenario(
                parsed_args.scenario_path, parsed_args.per_event_gamma
            )
        return parsed_args


def make_top_level_parser() -> ArgumentParser:
    """Create the parser that picks one of the commands."""
    parser = ArgumentParser(
        prog="covercalc",
        description="Compare indemnity and parametric insurance under "
        "mean-variance preferences.",
    )
    parser.add_argument("command", choices=COMMANDS, help="The command to run.")
    parser.add_argument(
        "arguments",
        nargs="...",
        help="Arguments of the command; see `covercalc <command> --help`.",
    )
    return parser
