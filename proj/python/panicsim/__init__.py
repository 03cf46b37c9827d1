"""Python bindings for the panicsim C++ core."""

from ._panicsim import *  # noqa: F401,F403
from ._panicsim import __doc__  # noqa: F401

__version__ = "0.1.0"
