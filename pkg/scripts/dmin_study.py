#!/usr/bin/env python3
# Minimum distance of the receiver constellation as the symbol range Q
# grows, for generic random gains. The typical fitted exponent sits near
# -(M + delta); occasional draws land close to a rational relation and the
# distance plateaus (slope near 0) until Q passes the relevant convergent.
import sys

import numpy as np

from blindjam.constellation import fit_dmin_exponent
from blindjam.experiments import write_dmin_csv

M = int(sys.argv[1]) if len(sys.argv) > 1 else 1
Q_GRID = [2, 4, 8, 16, 32]
DRAWS = 50
SEED = 42

if __name__ == "__main__":
    study = fit_dmin_exponent(M, Q_GRID, DRAWS, SEED)
    print(f"m={M} q_grid={Q_GRID} draws={DRAWS} redraws={study.redraws}")
    print(f"median slope {study.median_slope:.4f}  min {study.min_slope:.4f}  "
          f"max {float(np.max(study.slopes)):.4f}")
    hist, edges = np.histogram(study.slopes, bins=8)
    for count, lo, hi in zip(hist, edges[:-1], edges[1:]):
        print(f"  [{lo:+.2f}, {hi:+.2f}) {'#' * count}")
    write_dmin_csv(study, "dmin_study.csv")
    print("rows -> dmin_study.csv")
