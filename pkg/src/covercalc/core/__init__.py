from os.path import dirname, join

static: str = join(dirname(__file__), "static")

from covercalc.core.execute import exec, run  # noqa: E402

__all__ = ["exec", "run", "static"]
