"""Cross-linked rotatable antenna array simulation and sum-rate optimization."""

from ._clra import *  # noqa: F401,F403
from ._clra import __doc__  # noqa: F401
