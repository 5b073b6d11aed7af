"""Displacement-controlled photon-number-resolving (PNR) receiver.

Counts n = 0 are read as |-alpha>, n > m as |+alpha>, and 1 <= n <= m are
discarded. After displacement the count for state sign s is Poisson with mean

    eta * (alpha^2 + beta^2 + 2 s V alpha beta) + dark

where V is the interference visibility. With V = 1 this is eta (alpha + s beta)^2;
the term (1 - V^2) beta^2 is the mismatched part of the auxiliary beam reaching
the detector as incoherent background.
"""
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaln, xlogy

from ._solvers import golden_section
from .alphabet import OperatingPoint
from .decisions import Decision
from .exceptions import DomainError, FullyInconclusiveError, MultimodalWarning

# below this mean the upper tail is summed directly instead of as 1 - cdf
_DIRECT_TAIL_MAX_LAMBDA = 1.0


@dataclass(frozen=True)
class PnrConfig:
    displacement_beta: float = 0.0
    threshold_m: int = 0
    efficiency_eta: float = 1.0
    dark_count_mean: float = 0.0
    visibility: float = 1.0

    def __post_init__(self):
        if not (self.displacement_beta >= 0 and math.isfinite(self.displacement_beta)):
            raise DomainError("displacement_beta", f"must be finite and >= 0, got {self.displacement_beta}")
        if int(self.threshold_m) != self.threshold_m or self.threshold_m < 0:
            raise DomainError("threshold_m", f"must be a non-negative integer, got {self.threshold_m}")
        if not 0.0 < self.efficiency_eta <= 1.0:
            raise DomainError("efficiency_eta", f"must lie in (0, 1], got {self.efficiency_eta}")
        if self.dark_count_mean < 0:
            raise DomainError("dark_count_mean", f"must be >= 0, got {self.dark_count_mean}")
        if not 0.0 < self.visibility <= 1.0:
            raise DomainError("visibility", f"must lie in (0, 1], got {self.visibility}")

    @property
    def ideal(self):
        return self.efficiency_eta == 1.0 and self.dark_count_mean == 0.0 and self.visibility == 1.0


def _check_lambda(lam):
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0) or np.any(~np.isfinite(lam)):
        raise DomainError("lambda", "Poisson mean must be finite and >= 0")
    return lam


def _pmf(k, lam):
    # log-space so large means do not underflow exp(-lam)
    return np.exp(xlogy(k, lam) - lam - gammaln(k + 1))


def poisson_cdf(m, lam):
    """P(N <= m) for N ~ Poisson(lam); equals Gamma(m+1, lam) / Gamma(m+1)."""
    lam = _check_lambda(lam)
    total = np.zeros_like(lam)
    for k in range(int(m) + 1):
        total = total + _pmf(k, lam)
    return np.minimum(total, 1.0)[()]


def poisson_sf(m, lam):
    """P(N > m), accurate also when the tail is tiny."""
    lam = _check_lambda(lam)
    out = np.asarray(1.0 - poisson_cdf(m, lam), dtype=float)
    small = lam < _DIRECT_TAIL_MAX_LAMBDA
    if np.any(small):
        ls = lam[small] if lam.ndim else lam
        # terms shrink by at least lam/k < 1/k, so 40 of them reach machine precision
        tail = sum(_pmf(k, ls) for k in range(int(m) + 1, int(m) + 41))
        if lam.ndim:
            out[small] = tail
        else:
            out = np.asarray(tail)
    return np.maximum(out, 0.0)[()]


def poisson_band(m, lam):
    """P(1 <= N <= m) for N ~ Poisson(lam)."""
    lam = _check_lambda(lam)
    if m < 0:
        raise DomainError("m", f"must be >= 0, got {m}")
    if m == 0:
        return np.zeros_like(lam)[()]
    total = np.zeros_like(lam)
    for k in range(1, int(m) + 1):
        total = total + _pmf(k, lam)
    return total[()]


def displaced_mean_photon(state_sign, alphabet, cfg):
    """Mean detected count for the state with the given sign (+1 or -1)."""
    a, b, v = alphabet.alpha, cfg.displacement_beta, cfg.visibility
    coherent = a * a + b * b + 2.0 * state_sign * v * a * b
    return cfg.efficiency_eta * max(coherent, 0.0) + cfg.dark_count_mean


def _means(alpha, beta, cfg):
    """Vectorized (lambda_minus, lambda_plus) over an array of beta."""
    beta = np.asarray(beta, dtype=float)
    v, eta = cfg.visibility, cfg.efficiency_eta
    base = alpha * alpha + beta * beta
    cross = 2.0 * v * alpha * beta
    lm = eta * np.maximum(base - cross, 0.0) + cfg.dark_count_mean
    lp = eta * (base + cross) + cfg.dark_count_mean
    return lm, lp


def _rates(alphabet, beta, cfg):
    """Vectorized (p_error_numerator, p_inc) for weighted priors."""
    lm, lp = _means(alphabet.alpha, beta, cfg)
    m = cfg.threshold_m
    err_joint = alphabet.p1 * poisson_sf(m, lm) + alphabet.p2 * np.exp(-lp)
    p_inc = alphabet.p1 * poisson_band(m, lm) + alphabet.p2 * poisson_band(m, lp)
    return err_joint, p_inc


def pnr_inconclusive(alphabet, cfg):
    _, p_inc = _rates(alphabet, cfg.displacement_beta, cfg)
    return float(p_inc)


def pnr_error(alphabet, cfg):
    """Error rate among accepted outcomes."""
    err_joint, p_inc = _rates(alphabet, cfg.displacement_beta, cfg)
    accepted = 1.0 - float(p_inc)
    if accepted <= 0.0:
        raise FullyInconclusiveError()
    return float(err_joint) / accepted


def pnr_operating_point(alphabet, cfg):
    return OperatingPoint(pnr_error(alphabet, cfg), pnr_inconclusive(alphabet, cfg))


def outcome_probabilities(state_sign, alphabet, cfg):
    """(P(guess -), P(inconclusive), P(guess +)) for one input state."""
    lam = displaced_mean_photon(state_sign, alphabet, cfg)
    m = cfg.threshold_m
    return float(math.exp(-lam)), float(poisson_band(m, lam)), float(poisson_sf(m, lam))


def _error_curve(alphabet, betas, cfg):
    err_joint, p_inc = _rates(alphabet, betas, cfg)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p_inc < 1.0, err_joint / (1.0 - p_inc), np.inf)


@dataclass(frozen=True)
class DisplacementOptimum:
    beta: float
    p_error: float
    p_inconclusive: float
    multimodal: bool = False


def optimize_displacement(alphabet, m, cfg=None, beta_max=None, xtol=1e-8, rel_tol=1e-9):
    """Displacement minimizing the PNR error rate for threshold m.

    A coarse grid (step alpha/50 over [0, alpha + 5]) picks the best basin,
    then golden-section search refines it. If the grid shows a second,
    separated local minimum, MultimodalWarning is emitted and the refined
    global minimum is still returned.
    """
    if alphabet.alpha <= 0:
        raise DomainError("alpha", "displacement optimization needs alpha > 0")
    cfg = replace(cfg or PnrConfig(), threshold_m=m)
    if beta_max is None:
        beta_max = alphabet.alpha + 5.0
    step = min(alphabet.alpha / 50.0, 0.01)
    grid = np.linspace(0.0, beta_max, int(math.ceil(beta_max / step)) + 1)
    curve = _error_curve(alphabet, grid, cfg)
    i = int(np.argmin(curve))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]

    def f(b):
        return float(_error_curve(alphabet, b, cfg))

    beta, err = golden_section(f, lo, hi, xtol=xtol)

    # a genuine dip must clear both neighbours by more than rounding noise
    floor = np.minimum(curve[:-2], curve[2:]) * (1.0 - rel_tol)
    minima = np.flatnonzero(curve[1:-1] < floor) + 1
    multimodal = any(abs(j - i) > 1 for j in minima)
    if multimodal:
        warnings.warn(f"several near-equal minima in beta for alpha={alphabet.alpha}, m={m}",
                      MultimodalWarning, stacklevel=2)
    _, p_inc = _rates(alphabet, beta, cfg)
    return DisplacementOptimum(float(beta), float(err), float(p_inc), multimodal)


def pnr_decide(n, m):
    if n < 0:
        raise DomainError("n", "count must be >= 0")
    if n == 0:
        return Decision.GUESS_MINUS
    if n > m:
        return Decision.GUESS_PLUS
    return Decision.INCONCLUSIVE


def pnr_decide_codes(n, m):
    n = np.asarray(n)
    return np.where(n == 0, -1, np.where(n > m, 1, 0)).astype(np.int8)


def pnr_sample(state_sign, alphabet, cfg, rng, size=None):
    """Draw photon count(s) for the given input state sign(s)."""
    signs = np.asarray(state_sign)
    lm = displaced_mean_photon(-1, alphabet, cfg)
    lp = displaced_mean_photon(+1, alphabet, cfg)
    lam = np.where(signs < 0, lm, lp)
    return rng.poisson(lam, size=size)
