"""Postselected homodyne receiver.

Quadratures are normalized as x = (a + a^dagger)/sqrt(2): a coherent state
|+-alpha> has a Gaussian marginal with mean +-sqrt(2) alpha and variance 1/2,
and the postselection window in x is (-sqrt(2) B, sqrt(2) B). Loss eta scales
the amplitude by sqrt(eta) and leaves the vacuum noise alone.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfc

from ._solvers import bisect_increasing
from .alphabet import OperatingPoint
from .decisions import Decision
from .exceptions import DomainError, FullyInconclusiveError

SHOT_NOISE_VAR = 0.5
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HomodyneConfig:
    threshold_B: float = 0.0
    efficiency_eta: float = 1.0
    electronic_noise_var: float = 0.0  # additive, in the same units as SHOT_NOISE_VAR

    def __post_init__(self):
        if not (self.threshold_B >= 0 and math.isfinite(self.threshold_B)):
            raise DomainError("threshold_B", f"must be finite and >= 0, got {self.threshold_B}")
        if not 0.0 < self.efficiency_eta <= 1.0:
            raise DomainError("efficiency_eta", f"must lie in (0, 1], got {self.efficiency_eta}")
        if self.electronic_noise_var < 0:
            raise DomainError("electronic_noise_var", "must be >= 0")

    @property
    def quadrature_std(self):
        return math.sqrt(SHOT_NOISE_VAR + self.electronic_noise_var)


def _effective_alpha(alphabet, cfg):
    return math.sqrt(cfg.efficiency_eta) * alphabet.alpha


def outcome_probabilities(state_sign, alphabet, cfg):
    """(P(guess -), P(inconclusive), P(guess +)) for one input state."""
    mean = state_sign * SQRT2 * _effective_alpha(alphabet, cfg)
    edge = SQRT2 * cfg.threshold_B
    scale = SQRT2 * cfg.quadrature_std
    p_minus = 0.5 * erfc((edge + mean) / scale)
    p_plus = 0.5 * erfc((edge - mean) / scale)
    # tails via erfc keep relative precision for tiny rates; the window via erf
    # is exactly 0 at B = 0
    p_inc = 0.5 * (erf((edge - mean) / scale) + erf((edge + mean) / scale))
    return float(p_minus), float(max(p_inc, 0.0)), float(p_plus)


def hd_inconclusive(alphabet, cfg):
    """Average probability that the outcome falls inside the postselection window."""
    _, inc_m, _ = outcome_probabilities(-1, alphabet, cfg)
    _, inc_p, _ = outcome_probabilities(+1, alphabet, cfg)
    return alphabet.p1 * inc_m + alphabet.p2 * inc_p


def hd_error(alphabet, cfg):
    """Error rate among accepted outcomes."""
    m_minus, _, m_plus = outcome_probabilities(-1, alphabet, cfg)
    p_minus, _, p_plus = outcome_probabilities(+1, alphabet, cfg)
    accepted = alphabet.p1 * (m_minus + m_plus) + alphabet.p2 * (p_minus + p_plus)
    if accepted <= 0.0:
        raise FullyInconclusiveError()
    return (alphabet.p1 * m_plus + alphabet.p2 * p_minus) / accepted


def hd_operating_point(alphabet, cfg):
    return OperatingPoint(hd_error(alphabet, cfg), hd_inconclusive(alphabet, cfg))


def hd_threshold_for_inc(alphabet, target_p_inc, eta=1.0, tol=1e-10):
    """Smallest threshold B whose inconclusive rate equals target_p_inc."""
    if not 0.0 <= target_p_inc < 1.0:
        raise DomainError("target_p_inc", f"must lie in [0, 1), got {target_p_inc}")
    if target_p_inc == 0.0:
        return 0.0

    def p_inc(b):
        return hd_inconclusive(alphabet, HomodyneConfig(b, eta))

    return bisect_increasing(p_inc, target_p_inc, 0.0, max(alphabet.alpha, 0.5), ftol=tol)


def hd_decide(x, cfg):
    edge = SQRT2 * cfg.threshold_B
    if x > edge:
        return Decision.GUESS_PLUS
    if x < -edge:
        return Decision.GUESS_MINUS
    return Decision.INCONCLUSIVE


def hd_decide_codes(x, cfg):
    """Vectorized hd_decide returning integer Decision codes."""
    x = np.asarray(x)
    edge = SQRT2 * cfg.threshold_B
    return np.where(x > edge, 1, np.where(x < -edge, -1, 0)).astype(np.int8)


def hd_sample(state_sign, alphabet, cfg, rng, size=None):
    """Draw quadrature outcome(s) for the given input state sign(s)."""
    mean = np.asarray(state_sign) * SQRT2 * _effective_alpha(alphabet, cfg)
    return rng.normal(mean, cfg.quadrature_std, size=size)
