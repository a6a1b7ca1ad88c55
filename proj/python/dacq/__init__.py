"""Budget-constrained data acquisition strategies (EA, SPS) for ML models."""

from dacq._core import *  # noqa: F401,F403
from dacq._core import __version__  # noqa: F401
