"""PNR vs homodyne error at equal inconclusive rates, m = 1, 2, 3."""
import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from coherent_receivers import SignalAlphabet
from coherent_receivers.montecarlo import matched_inc_comparison


@dataclass
class Config:
    alpha_sq_min: float = 0.05
    alpha_sq_max: float = 2.0
    points: int = 40
    thresholds: tuple = (1, 2, 3)
    eta: float = 1.0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-o", "--output", default="-")
    ap.add_argument("--eta", type=float, default=Config.eta)
    args = ap.parse_args(argv)
    cfg = Config(eta=args.eta)
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    writer = csv.writer(out)
    writer.writerow(["m", "alpha_sq", "beta_opt", "B", "p_inc", "p_err_pnr", "p_err_hd", "chefles", "pnr_wins"])
    for m in cfg.thresholds:
        for a2 in np.linspace(cfg.alpha_sq_min, cfg.alpha_sq_max, cfg.points):
            row = matched_inc_comparison(SignalAlphabet.from_mean_photons(a2), m, cfg.eta)
            writer.writerow([m, repr(float(a2)), row.beta_opt, row.threshold_B, row.p_inc,
                             row.p_err_pnr, row.p_err_hd, row.chefles, int(row.p_err_pnr < row.p_err_hd)])
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
