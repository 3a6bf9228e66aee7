from os.path import dirname, join

static: str = join(dirname(__file__), "static")

from covercalc.implementations.budget.__main__ import main  # noqa: E402

__all__ = ["main", "static"]
