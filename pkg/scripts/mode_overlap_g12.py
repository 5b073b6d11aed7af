"""g12 of a Chebyshev-filtered, window-averaged homodyne mode.

Scans ripple at the nominal 10 MHz passband edge, then the cutoff at 0.5 dB,
for both the continuous window and the 16-sample average.
"""
import argparse
from dataclasses import dataclass

import numpy as np

from coherent_receivers.mode_overlap import WindowSpec, chebyshev_impulse, cross_correlation_g12, effective_response


@dataclass
class Config:
    order: int = 7
    cutoff_hz: float = 10e6
    ripple_db: float = 0.5
    window_s: float = 800e-9
    sample_rate: float = 20e6


def g12(cfg, cutoff, ripple, sampled=False, align=True):
    w = WindowSpec(cfg.window_s, cfg.sample_rate)
    g_eff = effective_response(chebyshev_impulse(cfg.order, cutoff, ripple), w, sampled=sampled)
    return cross_correlation_g12(g_eff, w, align=align)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=Config.order)
    args = ap.parse_args(argv)
    cfg = Config(order=args.order)
    print("sweep,cutoff_hz,ripple_db,g12,g12_sampled,g12_zero_lag")
    for ripple in np.linspace(0.1, 1.0, 10):
        print(f"ripple,{cfg.cutoff_hz:g},{ripple:.2f},{g12(cfg, cfg.cutoff_hz, ripple):.5f},"
              f"{g12(cfg, cfg.cutoff_hz, ripple, True):.5f},{g12(cfg, cfg.cutoff_hz, ripple, align=False):.5f}")
    for cutoff in np.geomspace(1e6, 100e6, 11):
        print(f"cutoff,{cutoff:.4g},{cfg.ripple_db:.2f},{g12(cfg, cutoff, cfg.ripple_db):.5f},"
              f"{g12(cfg, cutoff, cfg.ripple_db, True):.5f},{g12(cfg, cutoff, cfg.ripple_db, align=False):.5f}")


if __name__ == "__main__":
    main()
