"""Kernel regression assisted by first-order growth equations."""

from ._dekreg import *  # noqa: F401,F403
from ._dekreg import __doc__  # noqa: F401
