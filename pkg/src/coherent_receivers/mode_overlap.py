"""Temporal mode seen by a band-limited homodyne detector with window averaging.

The detector output is the quadrature filtered by an impulse response G and
averaged over a window of length T. The resulting weighting of the input is
G_eff = rect_T * G / T. Its overlap with the ideal mode rect_T / T is the
normalized cross-correlation g12.
"""
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

DEFAULT_DT = 1e-9
DEFAULT_LENGTH = 4e-6
ENERGY_CAPTURE = 0.999


@dataclass(frozen=True)
class ImpulseResponse:
    samples: np.ndarray
    dt: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if not self.dt > 0:
            raise DomainError("dt", f"must be > 0, got {self.dt}")
        energy = float(samples @ samples) * self.dt
        if not (math.isfinite(energy) and energy > 0):
            raise DomainError("samples", "impulse response must have finite, non-zero energy")

    @property
    def times(self):
        return np.arange(self.samples.size) * self.dt

    @property
    def dc_gain(self):
        return float(self.samples.sum()) * self.dt

    def normalized(self):
        return ImpulseResponse(self.samples / self.dc_gain, self.dt)


@dataclass(frozen=True)
class WindowSpec:
    duration_T: float = 800e-9
    sample_rate: float = 20e6
    center_tm: float = 0.0

    def __post_init__(self):
        if not self.duration_T > 0:
            raise DomainError("duration_T", f"must be > 0, got {self.duration_T}")
        if not self.sample_rate > 0 or self.sample_rate * self.duration_T < 1 - 1e-9:
            raise DomainError("sample_rate", "window must contain at least one sample")

    @property
    def n_samples(self):
        return int(round(self.sample_rate * self.duration_T))


def resample(g, dt):
    """Linear interpolation of g onto a grid with step dt (same start time)."""
    t_end = g.times[-1]
    new_t = np.arange(int(math.floor(t_end / dt + 1e-9)) + 1) * dt
    scaled = np.interp(new_t, g.times, g.samples)
    return ImpulseResponse(scaled, dt)


def _compatible_dt(g, w):
    """Largest step <= g.dt dividing both T and the sampling period."""
    period = 1.0 / w.sample_rate
    for step in (w.duration_T, period):
        ratio = step / g.dt
        if abs(ratio - round(ratio)) > 1e-6 * max(ratio, 1.0):
            break
    else:
        return g.dt
    k = int(math.ceil(period / g.dt))
    dt = period / k
    if abs(w.duration_T / dt - round(w.duration_T / dt)) > 1e-6 * w.duration_T / dt:
        raise DomainError("duration_T", "window length is not a multiple of the sampling period")
    return dt


def effective_response(g, w, sampled=False):
    """G_eff = (1/T) rect_T convolved with G, on g's time grid.

    With sampled=True the window average is taken over the w.n_samples discrete
    samples instead of continuously. If g.dt does not tile the window, g is
    first resampled by linear interpolation.
    """
    dt = _compatible_dt(g, w)
    if dt != g.dt:
        g = resample(g, dt)
    n_window = int(round(w.duration_T / dt))
    if sampled:
        kernel = np.zeros(n_window)
        stride = n_window // w.n_samples
        kernel[::stride] = 1.0 / (w.n_samples * dt)
    else:
        kernel = np.full(n_window, 1.0 / w.duration_T)
    return ImpulseResponse(np.convolve(g.samples, kernel) * dt, dt)


def ideal_mode(w, dt):
    return ImpulseResponse(np.full(int(round(w.duration_T / dt)), 1.0 / w.duration_T), dt)


def cross_correlation_g12(g_eff, w, align=True):
    """Normalized overlap of G_eff with the ideal window mode.

    align=True takes the maximum over relative delays, so a pure latency of the
    detector chain does not count as mode mismatch. align=False compares with
    the window starting at t = 0.
    """
    x = g_eff.samples
    n_window = int(round(w.duration_T / g_eff.dt))
    if n_window < 1:
        raise DomainError("duration_T", "window shorter than one grid step")
    norm = math.sqrt(float(x @ x) * n_window)
    if norm == 0:
        raise DomainError("g_eff", "zero-energy response")
    if align:
        padded = np.concatenate([np.zeros(n_window - 1), x, np.zeros(n_window - 1)])
        cumsum = np.concatenate([[0.0], np.cumsum(padded)])
        window_sums = cumsum[n_window:] - cumsum[:-n_window]
        best = float(window_sums.max())
    else:
        best = float(x[:n_window].sum())
    return best / norm


def chebyshev_poles(order, cutoff_hz, ripple_db):
    """Poles (rad/s) of a Type-I Chebyshev low-pass with passband edge cutoff_hz."""
    if order < 1:
        raise DomainError("order", f"must be >= 1, got {order}")
    if not cutoff_hz > 0:
        raise DomainError("cutoff_hz", f"must be > 0, got {cutoff_hz}")
    if not ripple_db > 0:
        raise DomainError("ripple_db", f"must be > 0, got {ripple_db}")
    eps = math.sqrt(10.0 ** (ripple_db / 10.0) - 1.0)
    mu = math.asinh(1.0 / eps) / order
    k = np.arange(1, order + 1)
    theta = np.pi * (2 * k - 1) / (2 * order)
    wc = 2.0 * math.pi * cutoff_hz
    return wc * (-math.sinh(mu) * np.sin(theta) + 1j * math.cosh(mu) * np.cos(theta))


def pole_residues(poles):
    """Residues of prod(-p) / prod(s - p), the all-pole transfer with unit DC gain."""
    gain = np.prod(-poles)
    res = np.empty_like(poles)
    for i, p in enumerate(poles):
        others = np.delete(poles, i)
        res[i] = gain / np.prod(p - others)
    return res


def analytic_energy(poles, residues):
    """Integral of h(t)^2 over t >= 0 for h = sum r_k exp(p_k t)."""
    # h is real, so h^2 = h * conj(h)
    num = residues[:, None] * np.conj(residues)[None, :]
    den = -(poles[:, None] + np.conj(poles)[None, :])
    return float(np.real(np.sum(num / den)))


def chebyshev_impulse(order, cutoff_hz, ripple_db=0.5, dt=DEFAULT_DT, n_samples=None, extend=True):
    """Impulse-invariant samples of the analog Chebyshev response, unit DC gain.

    The window must hold at least ENERGY_CAPTURE of the response energy; when
    it does not, the length is doubled (extend=True) or DomainError is raised.
    """
    if n_samples is None:
        n_samples = int(round(DEFAULT_LENGTH / dt))
    poles = chebyshev_poles(order, cutoff_hz, ripple_db)
    res = pole_residues(poles)
    total = analytic_energy(poles, res)
    while True:
        t = np.arange(n_samples) * dt
        h = np.real(np.exp(np.outer(t, poles)) @ res)
        # energy after the window end, closed form
        tail = analytic_energy(poles, res * np.exp(poles * n_samples * dt))
        if tail <= (1.0 - ENERGY_CAPTURE) * total:
            break
        if not extend:
            raise DomainError("n_samples", f"{n_samples} samples capture too little response energy")
        n_samples *= 2
    g = ImpulseResponse(h, dt)
    return g.normalized()


def delta_response(dt=DEFAULT_DT, n_samples=1):
    samples = np.zeros(n_samples)
    samples[0] = 1.0 / dt
    return ImpulseResponse(samples, dt)


def read_impulse_response(path):
    """Two-column delimited text (time_s, amplitude); '#' lines are comments."""
    data = np.loadtxt(path, delimiter=None, comments="#", ndmin=2)
    if data.shape[1] < 2 or data.shape[0] < 2:
        raise DomainError("impulse_file", "need two columns and at least two rows")
    t, amp = data[:, 0], data[:, 1]
    steps = np.diff(t)
    if np.any(steps <= 0):
        raise DomainError("impulse_file", "time column must be strictly increasing")
    dt = float(steps.mean())
    g = ImpulseResponse(amp, dt)
    if np.ptp(steps) > 1e-6 * dt:
        g = ImpulseResponse(np.interp(t[0] + np.arange(int((t[-1] - t[0]) / dt) + 1) * dt, t, amp), dt)
    return g


def write_impulse_response(g, path, t0=0.0):
    """Inverse of read_impulse_response."""
    np.savetxt(path, np.column_stack([t0 + g.times, g.samples]), fmt="%.17g",
               header="time_s amplitude")
