"""Performance models for probabilistic receivers of binary coherent states."""

__version__ = "0.1.0"

from .alphabet import (  # noqa: F401
    OperatingPoint,
    SignalAlphabet,
    chefles_min_error,
    helstrom_error,
    overlap,
    usd_inconclusive,
)
from .decisions import Decision  # noqa: F401
from .homodyne import HomodyneConfig, hd_error, hd_inconclusive, hd_threshold_for_inc  # noqa: F401
from .pnr import PnrConfig, optimize_displacement, pnr_error, pnr_inconclusive  # noqa: F401
