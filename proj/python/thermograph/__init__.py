"""Heat conduction on thermodynamic graphs."""

from ._core import *  # noqa: F401,F403
from ._core import ThermographError, __version__  # noqa: F401
