"""Scalar root bracketing and golden-section minimization."""
import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_increasing(f, target, lo=0.0, hi=1.0, ftol=1e-10, xtol=1e-15, max_grow=200):
    """Solve f(x) = target for a non-decreasing f on [lo, inf).

    The upper end is doubled until it brackets the target. Stops once
    |f(x) - target| <= ftol or the bracket is narrower than xtol (relative).
    """
    f_lo = f(lo) - target
    if f_lo >= 0.0:
        return lo
    f_hi = f(hi) - target
    grow = 0
    while f_hi < 0.0:
        lo, f_lo = hi, f_hi
        hi *= 2.0
        f_hi = f(hi) - target
        grow += 1
        if grow > max_grow:
            raise RuntimeError("could not bracket target")
    while True:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid) - target
        if abs(f_mid) <= ftol or (hi - lo) <= xtol * max(1.0, abs(mid)):
            return mid
        if f_mid < 0.0:
            lo = mid
        else:
            hi = mid


def golden_section(f, lo, hi, xtol=1e-8, max_iter=500):
    """Minimize a unimodal f on [lo, hi]. Returns (x, f(x))."""
    ends = (lo, hi)
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    x = 0.5 * (lo + hi)
    fx = f(x)
    # endpoints can win when the minimum sits on the boundary
    for xe in ends:
        fe = f(xe)
        if fe < fx:
            x, fx = xe, fe
    return x, fx
