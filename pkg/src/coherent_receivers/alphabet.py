"""Binary coherent-state alphabet and the bounds every receiver is measured against."""
import math
import warnings
from dataclasses import dataclass

from .exceptions import BeyondUSDWarning, DomainError

# tolerance for floating-point noise in radicands near the USD point
RADICAND_SLACK = 1e-12


@dataclass(frozen=True)
class SignalAlphabet:
    """The ensemble {|-alpha>, |+alpha>} with priors p1 (for -alpha) and p2."""

    alpha: float
    p1: float = 0.5
    p2: float = 0.5

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise DomainError("alpha", f"must be finite and >= 0, got {self.alpha}")
        for name in ("p1", "p2"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise DomainError(name, f"must lie in [0, 1], got {p}")
        if abs(self.p1 + self.p2 - 1.0) > 1e-12:
            raise DomainError("p1", "priors must sum to 1")

    @classmethod
    def from_mean_photons(cls, alpha_sq, p1=0.5):
        if alpha_sq < 0:
            raise DomainError("alpha_sq", f"must be >= 0, got {alpha_sq}")
        return cls(math.sqrt(alpha_sq), p1, 1.0 - p1)

    @property
    def alpha_sq(self):
        return self.alpha * self.alpha

    @property
    def equal_priors(self):
        return abs(self.p1 - 0.5) < 1e-12

    def attenuated(self, eta):
        """Alphabet seen after loss eta (beam-splitter model)."""
        return SignalAlphabet(math.sqrt(eta) * self.alpha, self.p1, self.p2)


@dataclass(frozen=True)
class OperatingPoint:
    p_error: float
    p_inconclusive: float

    def __post_init__(self):
        if not 0.0 <= self.p_inconclusive <= 1.0:
            raise DomainError("p_inconclusive", f"must lie in [0, 1], got {self.p_inconclusive}")
        if not 0.0 <= self.p_error <= 1.0:
            raise DomainError("p_error", f"must lie in [0, 1], got {self.p_error}")


def overlap(alphabet):
    """|<-alpha|alpha>| = exp(-2 alpha^2) for real alpha."""
    return math.exp(-2.0 * alphabet.alpha_sq)


def helstrom_error(alphabet):
    """Minimum error probability for deterministic discrimination (any priors)."""
    s = overlap(alphabet)
    rad = 1.0 - 4.0 * alphabet.p1 * alphabet.p2 * s * s
    return 0.5 * (1.0 - math.sqrt(max(rad, 0.0)))


def usd_inconclusive(alphabet):
    """Inconclusive rate of optimal unambiguous discrimination (equal priors)."""
    _require_equal_priors(alphabet)
    return overlap(alphabet)


def chefles_min_error(alphabet, p_inc):
    """Least achievable error rate when a fraction p_inc of outcomes is discarded.

    Equal priors only. Past the USD point (p_inc > sigma) the bound is 0 and a
    BeyondUSDWarning is emitted.
    """
    _require_equal_priors(alphabet)
    if not 0.0 <= p_inc <= 1.0:
        raise DomainError("p_inc", f"must lie in [0, 1], got {p_inc}")
    s = overlap(alphabet)
    if p_inc >= s:
        if p_inc > s:
            warnings.warn(f"p_inc={p_inc} exceeds the USD point {s}", BeyondUSDWarning, stacklevel=2)
        return 0.0
    rad = 1.0 - 2.0 * p_inc * (1.0 - s) - s * s
    if rad < 0.0:
        if rad < -RADICAND_SLACK:
            raise DomainError("p_inc", f"negative radicand {rad}")
        rad = 0.0
    return max(0.5 * (1.0 - math.sqrt(rad) / (1.0 - p_inc)), 0.0)


def chefles_bound_or_zero(alphabet, p_inc):
    """chefles_min_error without the beyond-USD warning, for sweeps."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BeyondUSDWarning)
        return chefles_min_error(alphabet, p_inc)


def _require_equal_priors(alphabet):
    if not alphabet.equal_priors:
        raise DomainError("p1", "only equal priors are supported here")
