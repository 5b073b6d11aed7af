"""Simulated 21 x 41 homodyne grid (amplitudes x postselection thresholds)."""
import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from coherent_receivers.montecarlo import SWEEP_COLUMNS, homodyne_grid_sweep


@dataclass
class Config:
    alpha_sq_min: float = 0.05
    alpha_sq_max: float = 1.0
    n_alpha: int = 21
    b_max: float = 1.0
    n_b: int = 41
    n_trials: int = 20000
    seed: int = 1
    eta: float = 1.0
    workers: int = 1


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-o", "--output", default="-")
    ap.add_argument("--n-trials", type=int, default=Config.n_trials)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--workers", type=int, default=Config.workers)
    args = ap.parse_args(argv)
    cfg = Config(n_trials=args.n_trials, seed=args.seed, workers=args.workers)
    rows = homodyne_grid_sweep(np.linspace(cfg.alpha_sq_min, cfg.alpha_sq_max, cfg.n_alpha),
                               np.linspace(0.0, cfg.b_max, cfg.n_b), cfg.n_trials, cfg.seed,
                               cfg.eta, cfg.workers)
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    writer = csv.DictWriter(out, SWEEP_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_record())
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
