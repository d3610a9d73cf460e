"""Python bindings for the finslergeo C++ library."""

from ._finslergeo import *  # noqa: F401,F403
from ._finslergeo import __doc__  # noqa: F401

__version__ = "0.1.0"
