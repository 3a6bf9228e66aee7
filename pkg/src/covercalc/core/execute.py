import logging
import sys
from argparse import Namespace
from collections.abc import Callable, Sequence
from types import TracebackType

from covercalc.core.cli.parser import CoreParser
from covercalc.core.exceptions import CoreException
from covercalc.core.report import Report


def exec(
    parser: CoreParser, cls: type[Report], argv: Sequence[str] | None = None
) -> str:
    """Compute the report of a command based on the cli arguments.

    Returns
    -------
        The summary of the report, or its JSON form with `--json`.

    """
    sys.excepthook = except_hook
    args: Namespace = parser.parse_args(argv)

    logging.basicConfig(level=args.loglevel)
    logging.debug("Log level is set to %s", args.loglevel)
    logging.debug("Arguments: %s", args)
    logging.debug("Report type: %s", cls.__name__)

    result: Report = cls(**vars(args))
    result.update()
    text: str = result.json(indent=4) if args.json else result.summarize()
    result.write(text)
    return text


def run(
    main: Callable[[Sequence[str] | None], str], argv: Sequence[str] | None = None
) -> int:
    """Print the output of `main` and return the exit code.

    Known exceptions are logged and turned into their `exit_code`; others
    propagate to `except_hook`.
    """
    try:
        print(main(argv))
    except CoreException as error:
        except_hook(type(error), error, error.__traceback__)
        return error.exit_code
    return 0


def except_hook(
    exctype: type[BaseException],
    value: BaseException,
    traceback: TracebackType | None,
) -> None:
    """Handle exceptions and log them.

    Args:
        exctype: the type of the exception.
        value: the exception instance.
        traceback: the traceback object.

    """
    known_exceptions: list[type[BaseException]] = [
        CoreException,
        KeyboardInterrupt,
    ]

    if any(isinstance(value, exception) for exception in known_exceptions):
        logging.error(f"{exctype.__name__}: {value}")
    else:
        logging.critical(
            f"{exctype.__name__}: {value}", exc_info=(exctype, value, traceback)
        )
