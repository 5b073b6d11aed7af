"""Trial-level simulation of the discrimination experiment.

Each run is cut into fixed-size chunks. Chunk k draws from its own generator,
seeded by SeedSequence(seed, spawn_key=stream + (k,)), so tallies depend only on
(seed, stream, n_trials) and never on how many workers execute the chunks.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import stats

from . import homodyne, pnr
from .alphabet import OperatingPoint, SignalAlphabet, chefles_bound_or_zero
from .exceptions import DomainError, UndefinedRateError
from .homodyne import HomodyneConfig
from .pnr import PnrConfig

CHUNK_SIZE = 1 << 16
ReceiverConfig = Union[HomodyneConfig, PnrConfig]


@dataclass(frozen=True)
class TrialConfig:
    alphabet: SignalAlphabet
    receiver: ReceiverConfig
    n_trials: int
    seed: int
    stream: tuple = ()

    def __post_init__(self):
        if int(self.n_trials) != self.n_trials or self.n_trials < 1:
            raise DomainError("n_trials", f"must be a positive integer, got {self.n_trials}")
        if not isinstance(self.receiver, (HomodyneConfig, PnrConfig)):
            raise DomainError("receiver", f"unsupported receiver {type(self.receiver).__name__}")


@dataclass(frozen=True)
class EmpiricalRates:
    n_trials: int
    n_accepted: int
    n_errors: int

    @property
    def p_error_hat(self):
        if self.n_accepted == 0:
            raise UndefinedRateError("no accepted trials; error rate undefined")
        return self.n_errors / self.n_accepted

    @property
    def se_error(self):
        p = self.p_error_hat
        return math.sqrt(p * (1.0 - p) / self.n_accepted)

    @property
    def p_inconclusive_hat(self):
        return 1.0 - self.n_accepted / self.n_trials

    @property
    def se_inconclusive(self):
        p = self.p_inconclusive_hat
        return math.sqrt(p * (1.0 - p) / self.n_trials)

    def error_interval(self, level=0.9973):
        """Two-sided interval for the error rate; Clopper-Pearson when n_errors < 10."""
        p = self.p_error_hat
        if self.n_errors < 10:
            lo_q, hi_q = (1 - level) / 2, (1 + level) / 2
            k, n = self.n_errors, self.n_accepted
            lo = 0.0 if k == 0 else float(stats.beta.ppf(lo_q, k, n - k + 1))
            hi = 1.0 if k == n else float(stats.beta.ppf(hi_q, k + 1, n - k))
            return lo, hi
        z = float(stats.norm.ppf((1 + level) / 2))
        return max(p - z * self.se_error, 0.0), min(p + z * self.se_error, 1.0)

    def __add__(self, other):
        return EmpiricalRates(self.n_trials + other.n_trials,
                              self.n_accepted + other.n_accepted,
                              self.n_errors + other.n_errors)


def closed_form(alphabet, receiver):
    if isinstance(receiver, HomodyneConfig):
        return homodyne.hd_operating_point(alphabet, receiver)
    return pnr.pnr_operating_point(alphabet, receiver)


def _chunk_rng(cfg, k):
    return np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=tuple(cfg.stream) + (k,)))


def _run_chunk(cfg, k):
    n = min(CHUNK_SIZE, cfg.n_trials - k * CHUNK_SIZE)
    rng = _chunk_rng(cfg, k)
    signs = np.where(rng.random(n) < cfg.alphabet.p1, -1, 1).astype(np.int8)
    rx = cfg.receiver
    if isinstance(rx, HomodyneConfig):
        codes = homodyne.hd_decide_codes(homodyne.hd_sample(signs, cfg.alphabet, rx, rng), rx)
    else:
        codes = pnr.pnr_decide_codes(pnr.pnr_sample(signs, cfg.alphabet, rx, rng), rx.threshold_m)
    accepted = int(np.count_nonzero(codes))
    errors = int(np.count_nonzero(codes == -signs))
    return EmpiricalRates(n, accepted, errors)


def run_trials(cfg, workers=1):
    """Simulate cfg.n_trials discrimination trials and tally the outcomes."""
    n_chunks = -(-cfg.n_trials // CHUNK_SIZE)
    if workers <= 1:
        parts = [_run_chunk(cfg, k) for k in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda k: _run_chunk(cfg, k), range(n_chunks)))
    total = EmpiricalRates(0, 0, 0)
    for part in parts:
        total = total + part
    return total


@dataclass(frozen=True)
class SweepRow:
    receiver: str
    alpha_sq: float
    parameter: float
    empirical: Optional[EmpiricalRates]
    closed: OperatingPoint
    chefles: float

    def as_record(self):
        emp = self.empirical
        nan = float("nan")
        if emp is not None and emp.n_accepted:
            p_err, se_err = emp.p_error_hat, emp.se_error
        else:
            p_err = se_err = nan
        return {
            "receiver": self.receiver,
            "alpha_sq": self.alpha_sq,
            "parameter": self.parameter,
            "p_err_emp": p_err,
            "se_err": se_err,
            "p_inc_emp": emp.p_inconclusive_hat if emp else nan,
            "se_inc": emp.se_inconclusive if emp else nan,
            "p_err_closed": self.closed.p_error,
            "p_inc_closed": self.closed.p_inconclusive,
            "chefles_bound": self.chefles,
        }


SWEEP_COLUMNS = ("receiver", "alpha_sq", "parameter", "p_err_emp", "se_err",
                 "p_inc_emp", "se_inc", "p_err_closed", "p_inc_closed", "chefles_bound")


def receiver_name(receiver):
    return "homodyne" if isinstance(receiver, HomodyneConfig) else "pnr"


def sweep_operating_curve(alphabet, make_receiver, grid, n_trials, seed, stream=(), workers=1):
    """One row per grid value; make_receiver maps a grid value to a receiver config.

    Point i is simulated on stream + (i,). n_trials = 0 skips the simulation.
    """
    grid = list(grid)
    if not grid:
        raise DomainError("grid", "sweep grid is empty")
    rows = []
    for i, value in enumerate(grid):
        rx = make_receiver(value)
        closed = closed_form(alphabet, rx)
        emp = None
        if n_trials:
            emp = run_trials(TrialConfig(alphabet, rx, n_trials, seed, tuple(stream) + (i,)), workers)
        bound = chefles_bound_or_zero(alphabet, closed.p_inconclusive) if alphabet.equal_priors else float("nan")
        rows.append(SweepRow(receiver_name(rx), alphabet.alpha_sq, float(value), emp, closed, bound))
    return rows


def homodyne_grid_sweep(alpha_sq_values, thresholds, n_trials, seed, eta=1.0, workers=1):
    """Amplitude x threshold sweep; 21 x 41 reproduces the experimental contour grid."""
    rows = []
    for i, a2 in enumerate(alpha_sq_values):
        alphabet = SignalAlphabet.from_mean_photons(a2)
        rows += sweep_operating_curve(alphabet, lambda b: HomodyneConfig(b, eta), thresholds,
                                      n_trials, seed, stream=(i,), workers=workers)
    return rows


@dataclass(frozen=True)
class ComparisonRow:
    alpha_sq: float
    m: int
    beta_opt: float
    threshold_B: float
    p_inc: float
    p_err_pnr: float
    p_err_hd: float
    chefles: float
    empirical_pnr: Optional[EmpiricalRates] = None
    empirical_hd: Optional[EmpiricalRates] = None


def matched_inc_comparison(alphabet, m, eta=1.0, n_trials=0, seed=0, stream=(), workers=1):
    """PNR at optimal displacement vs homodyne tuned to the same inconclusive rate."""
    if alphabet.alpha <= 0:
        raise DomainError("alpha", "comparison needs alpha > 0")
    pnr_cfg = PnrConfig(threshold_m=m, efficiency_eta=eta)
    opt = pnr.optimize_displacement(alphabet, m, pnr_cfg)
    pnr_cfg = PnrConfig(opt.beta, m, eta)
    p_inc = pnr.pnr_inconclusive(alphabet, pnr_cfg)
    b = homodyne.hd_threshold_for_inc(alphabet, p_inc, eta, tol=1e-13) if m > 0 else 0.0
    hd_cfg = HomodyneConfig(b, eta)
    emp_pnr = emp_hd = None
    if n_trials:
        emp_pnr = run_trials(TrialConfig(alphabet, pnr_cfg, n_trials, seed, tuple(stream) + (0,)), workers)
        emp_hd = run_trials(TrialConfig(alphabet, hd_cfg, n_trials, seed, tuple(stream) + (1,)), workers)
    return ComparisonRow(alphabet.alpha_sq, m, opt.beta, b, p_inc,
                         pnr.pnr_error(alphabet, pnr_cfg), homodyne.hd_error(alphabet, hd_cfg),
                         chefles_bound_or_zero(alphabet, p_inc), emp_pnr, emp_hd)
