"""Scan the squeezed-POVM family and report where each rate is smallest."""
import math
from dataclasses import dataclass, field

import numpy as np

from coherent_receivers import SignalAlphabet
from coherent_receivers.gaussian_povm import R_HOMODYNE, scan_optimality


@dataclass
class Config:
    alpha_sq: tuple = (0.24, 1.0)
    lambdas: tuple = (1.0, 2.0, 8.0)
    r_grid: list = field(default_factory=lambda: list(np.arange(13) * 0.25) + [R_HOMODYNE])
    phi_grid: list = field(default_factory=lambda: list(np.arange(17) * math.pi / 16))


def main():
    cfg = Config()
    for a2 in cfg.alpha_sq:
        alphabet = SignalAlphabet.from_mean_photons(a2)
        for lam in cfg.lambdas:
            rep = scan_optimality(alphabet, lam, cfg.r_grid, cfg.phi_grid)
            i, j = np.unravel_index(int(np.nanargmin(rep.p_error)), rep.p_error.shape)
            print(f"alpha^2={a2} Lambda_B={lam}: min p_E={rep.p_error[i, j]:.6g} at r={rep.r_grid[i]:g} "
                  f"phi={rep.phi_grid[j]:.4f}; violations={len(rep.violations)}")


if __name__ == "__main__":
    main()
