"""Noise-free single-mode Gaussian POVMs with likelihood-ratio postselection.

A POVM in this family is fixed by a squeezing magnitude r and phase phi; its
outcome (u, v) for input |+-alpha> is Gaussian with mean (+-sqrt(2) alpha, 0)
and covariance (Gamma_M + I)/2. The outcome is accepted as |-alpha> when the
likelihood ratio Lambda_1 >= Lambda_B, as |+alpha> when 1/Lambda_1 >= Lambda_B,
and discarded otherwise. Homodyne detection is the corner phi = 0, r -> inf,
which is represented by R_HOMODYNE.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from .exceptions import DomainError, FullyInconclusiveError
from .homodyne import HomodyneConfig, hd_error, hd_threshold_for_inc

R_HOMODYNE = 20.0


@dataclass(frozen=True)
class GaussianPovmParams:
    squeeze_r: float = 0.0
    squeeze_phi: float = 0.0
    lambda_B: float = 1.0

    def __post_init__(self):
        if self.squeeze_r < 0:
            raise DomainError("squeeze_r", f"must be >= 0, got {self.squeeze_r}")
        if self.lambda_B < 1:
            raise DomainError("lambda_B", f"must be >= 1, got {self.lambda_B}")


@dataclass(frozen=True)
class ConditionalRates:
    """Per-state probabilities of a correct guess (s), wrong guess (e), discard (i)."""

    p_s_minus: float
    p_s_plus: float
    p_e_minus: float
    p_e_plus: float
    p_i_minus: float
    p_i_plus: float
    p1: float = 0.5
    p2: float = 0.5

    @property
    def p_inconclusive(self):
        return self.p1 * self.p_i_minus + self.p2 * self.p_i_plus

    @property
    def p_error(self):
        accepted = 1.0 - self.p_inconclusive
        if accepted <= 0:
            raise FullyInconclusiveError()
        return (self.p1 * self.p_e_minus + self.p2 * self.p_e_plus) / accepted


def gaussian_cov(params):
    """2x2 covariance matrix Gamma_M of the noise-free POVM (det = 1)."""
    x = 2 * params.squeeze_r
    c2, s2 = math.cosh(x), math.sinh(x)
    cp, sp = math.cos(params.squeeze_phi), math.sin(params.squeeze_phi)
    # cosh x -+ sinh x cos(phi) rewritten without cancellation when the sign bites
    low = 2 * c2 * math.sin(params.squeeze_phi / 2) ** 2 + math.exp(-x) * cp if cp >= 0 else c2 - s2 * cp
    high = 2 * c2 * math.cos(params.squeeze_phi / 2) ** 2 - math.exp(-x) * cp if cp < 0 else c2 + s2 * cp
    return np.array([[low, s2 * sp], [s2 * sp, high]])


def validate_cov(cov, atol=1e-9):
    """Check a POVM covariance is symmetric, positive definite and has det >= 1."""
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2) or not np.allclose(cov, cov.T, atol=atol):
        raise DomainError("cov", "must be a symmetric 2x2 matrix")
    if np.any(np.linalg.eigvalsh(cov) <= 0):
        raise DomainError("cov", "must be positive definite")
    # relative slack: det is ~1 but entries can be ~e^(2r)
    if np.linalg.det(cov) < 1.0 - atol * max(1.0, float(np.abs(cov).max()) ** 2):
        raise DomainError("cov", "det < 1 violates the uncertainty bound")
    return cov


def abc_coeffs(params):
    """Entries (a, b, c) of (Gamma_M + I)^-1 = [[a, c], [c, b]].

    c carries sinh(2r), as required by inverting Gamma_M + I. The common
    factor sinh(2r) / (2 (cosh(2r) + 1)) is evaluated as tanh(r) / 2, which
    stays finite for large r.
    """
    h = 0.5 * math.tanh(params.squeeze_r)
    cp, sp = math.cos(params.squeeze_phi), math.sin(params.squeeze_phi)
    return 0.5 + h * cp, 0.5 - h * cp, -h * sp


def outcome_pdf(u, v, state_sign, alphabet, params):
    """Density of outcome (u, v) for input |state_sign * alpha>."""
    a, b, c = abc_coeffs(params)
    # det(Gamma_M + I) = det Gamma_M + tr Gamma_M + 1 with det Gamma_M = 1
    det = 2.0 * (math.cosh(2 * params.squeeze_r) + 1.0)
    d = state_sign * math.sqrt(2.0) * alphabet.alpha - np.asarray(u)
    v = np.asarray(v)
    return np.exp(-(d * d * a - 2.0 * d * v * c + v * v * b)) / (math.pi * math.sqrt(det))


def likelihood_ratio(u, v, alphabet, params):
    """Lambda_1 = p1 P(u,v|-) / (p2 P(u,v|+))."""
    if alphabet.p2 <= 0:
        raise DomainError("p2", "must be > 0 for the likelihood ratio")
    a, _, c = abc_coeffs(params)
    k = 4.0 * math.sqrt(2.0) * alphabet.alpha
    return alphabet.p1 / alphabet.p2 * np.exp(-k * (a * np.asarray(u) + c * np.asarray(v)))


def conditional_rates(alphabet, params):
    """Per-state success, error and inconclusive probabilities.

    The decision statistic y = a u + c v is Gaussian with mean +-sqrt(2) alpha a
    and variance a/2, and the rule compares it with (ln(p1/p2) -+ ln Lambda_B)
    / (4 sqrt(2) alpha). The threshold offsets therefore enter the erfc
    arguments divided by sqrt(a); at the homodyne corner (a = 1) this is the
    familiar erfc(sqrt(2) alpha + ln Lambda_B / (4 sqrt(2) alpha)) form.
    """
    alpha = alphabet.alpha
    if alpha <= 0:
        raise DomainError("alpha", "conditional rates need alpha > 0")
    if alphabet.p1 <= 0 or alphabet.p2 <= 0:
        raise DomainError("p1", "both priors must be > 0")
    a, _, _ = abc_coeffs(params)
    # a underflows to 0 at phi = pi, large r: no information, every offset infinite
    root_a = math.sqrt(max(a, 1e-300))
    x = math.sqrt(2.0) * alpha * root_a
    k = 4.0 * math.sqrt(2.0) * alpha * root_a
    log_b = math.log(params.lambda_B)
    log_p = math.log(alphabet.p1 / alphabet.p2)
    d_minus, d_plus = (log_b - log_p) / k, (log_b + log_p) / k
    # "not correct" = error + inconclusive; the window follows without cancellation
    fail_m, fail_p = 0.5 * erfc(x - d_minus), 0.5 * erfc(x - d_plus)
    p_e_m, p_e_p = 0.5 * erfc(x + d_plus), 0.5 * erfc(x + d_minus)
    p_i_m, p_i_p = max(fail_m - p_e_m, 0.0), max(fail_p - p_e_p, 0.0)
    return ConditionalRates(
        float(0.5 * erfc(d_minus - x)), float(0.5 * erfc(d_plus - x)), float(p_e_m), float(p_e_p),
        float(p_i_m), float(p_i_p), alphabet.p1, alphabet.p2,
    )


def lambda_for_threshold(alphabet, threshold_B):
    """Likelihood threshold equivalent to homodyne threshold B: ln Lambda_B = 8 alpha B."""
    return math.exp(8.0 * alphabet.alpha * threshold_B)


def sample_outcomes(state_sign, alphabet, params, rng, size):
    """Draw (u, v) outcomes; returns an array of shape (size, 2)."""
    mean = np.array([state_sign * math.sqrt(2.0) * alphabet.alpha, 0.0])
    cov = 0.5 * (gaussian_cov(params) + np.eye(2))
    return rng.multivariate_normal(mean, cov, size=size, method="cholesky")


def decide_codes(u, v, alphabet, params):
    """-1 / 0 / +1 decisions from the likelihood-ratio rule."""
    lam = likelihood_ratio(u, v, alphabet, params)
    return np.where(lam >= params.lambda_B, -1, np.where(1.0 / lam >= params.lambda_B, 1, 0)).astype(np.int8)


@dataclass
class ScanReport:
    alpha_sq: float
    lambda_B: float
    r_grid: np.ndarray
    phi_grid: np.ndarray
    p_error: np.ndarray  # shape (len(r_grid), len(phi_grid))
    p_inconclusive: np.ndarray
    violations: list = field(default_factory=list)
    # departures from monotone shape; informative, not part of the optimality claim
    shape_notes: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def rows(self):
        for i, r in enumerate(self.r_grid):
            for j, phi in enumerate(self.phi_grid):
                yield (float(r), float(phi), self.lambda_B,
                       float(self.p_error[i, j]), float(self.p_inconclusive[i, j]))


def scan_optimality(alphabet, lambda_B, r_grid, phi_grid, atol=1e-15, rtol=1e-12):
    """Evaluate (p_E, p_inc) over an (r, phi) grid and check homodyne optimality.

    The claim checked is that the point (phi = 0, r = max) attains the minimum
    of both rates; failures go to report.violations. Departures from
    monotonicity (non-increasing in r at phi = 0, non-decreasing in phi on
    [0, pi]) go to report.shape_notes. The conditional error is not monotone
    near phi = pi at large r, where almost every outcome is discarded.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    phi_grid = np.asarray(phi_grid, dtype=float)
    pe = np.empty((r_grid.size, phi_grid.size))
    pi = np.empty_like(pe)
    for i, r in enumerate(r_grid):
        for j, phi in enumerate(phi_grid):
            rates = conditional_rates(alphabet, GaussianPovmParams(r, phi, lambda_B))
            pi[i, j] = rates.p_inconclusive
            try:
                pe[i, j] = rates.p_error
            except FullyInconclusiveError:
                pe[i, j] = np.nan
    report = ScanReport(alphabet.alpha_sq, float(lambda_B), r_grid, phi_grid, pe, pi)

    def slack(x):
        return atol + rtol * abs(x)

    i_best = int(np.argmax(r_grid))
    j_best = int(np.argmin(np.abs(phi_grid)))
    for name, arr in (("p_error", pe), ("p_inconclusive", pi)):
        best = arr[i_best, j_best]
        lo = float(np.nanmin(arr))
        if not best <= lo + slack(lo):
            i, j = np.unravel_index(int(np.nanargmin(arr)), arr.shape)
            report.violations.append(
                (name, "argmin", float(r_grid[i]), float(phi_grid[j]), lo, float(best)))
        order = np.argsort(r_grid)
        col = arr[order, j_best]
        for k in range(1, col.size):
            if col[k] > col[k - 1] + slack(col[k - 1]):
                report.shape_notes.append(
                    (name, "increasing_in_r", float(r_grid[order[k]]), float(phi_grid[j_best]),
                     float(col[k - 1]), float(col[k])))
        porder = np.argsort(phi_grid)
        for i in range(r_grid.size):
            row = arr[i, porder]
            for k in range(1, row.size):
                if phi_grid[porder[k]] > math.pi + 1e-12:
                    break
                if row[k] < row[k - 1] - slack(row[k - 1]):
                    report.shape_notes.append(
                        (name, "decreasing_in_phi", float(r_grid[i]), float(phi_grid[porder[k]]),
                         float(row[k - 1]), float(row[k])))
    return report


def two_step_operating_point(alphabet, transmissivity, llr_threshold):
    """Heterodyne on a tapped fraction, then homodyne on the rest.

    A beam splitter sends sqrt(transmissivity) * alpha to a homodyne detector
    and the remainder to a heterodyne detector. Any conditional strategy on the
    joint record is scored by the total log-likelihood ratio L, which is
    Gaussian with mean +-mu and variance 2 mu, mu = 4 alpha^2 (1 + t). Outcomes
    with |L| < llr_threshold are discarded. Equal priors.
    """
    if not 0.0 <= transmissivity <= 1.0:
        raise DomainError("transmissivity", f"must lie in [0, 1], got {transmissivity}")
    if llr_threshold < 0:
        raise DomainError("llr_threshold", "must be >= 0")
    mu = 4.0 * alphabet.alpha_sq * (1.0 + transmissivity)
    if mu <= 0:
        raise DomainError("alpha", "needs alpha > 0")
    scale = 2.0 * math.sqrt(mu)
    p_err = 0.5 * erfc((llr_threshold + mu) / scale)
    p_ok = 0.5 * erfc((llr_threshold - mu) / scale)
    p_inc = max(1.0 - p_err - p_ok, 0.0)
    return float(p_err / (p_err + p_ok)), float(p_inc)


def conditional_dynamics_spot_check(alphabet, transmissivities, llr_thresholds, tol=1e-12):
    """Compare two-step operating points with direct homodyne at equal p_inc.

    Returns a list of (t, threshold, p_inc, p_err_two_step, p_err_homodyne);
    the direct homodyne receiver is never worse when every p_err_two_step >=
    p_err_homodyne - tol.
    """
    rows = []
    for t in transmissivities:
        for thr in llr_thresholds:
            p_err, p_inc = two_step_operating_point(alphabet, t, thr)
            if p_inc >= 1.0 - 1e-9:
                continue
            b = hd_threshold_for_inc(alphabet, p_inc, tol=1e-13)
            rows.append((float(t), float(thr), p_inc, p_err, hd_error(alphabet, HomodyneConfig(b))))
    return rows
