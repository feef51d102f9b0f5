#!/usr/bin/env python3
# Reliability side of the story: legitimate-receiver block SER and the
# eavesdropper's conditional jamming-symbol error rate across the power
# grid. Run with a larger delta than the rate sweeps; the minimum distance
# scales like P^(delta/2), so small deltas keep the error floor flat until
# far beyond desk-scale powers.
import argparse

import numpy as np

from blindjam.channel import default_budget, sample_channel
from blindjam.experiments import sweep_ser, write_ser_csv
from blindjam.receiver import estimate_eve_u_error
from blindjam.schemes import make_blind_scheme
from blindjam.streams import child_seed


def eve_curve(m, delta, p_grid, draws, seed, trials):
    med = []
    for i, p in enumerate(p_grid):
        rates = []
        for d in range(draws):
            ch = sample_channel(m, child_seed(seed, "channel", d))
            cfg = make_blind_scheme(m, p, delta, ch.h,
                                    default_budget(ch, p).c_bar,
                                    child_seed(seed, "alphas", d))
            est = estimate_eve_u_error(cfg, ch, trials,
                                       child_seed(seed, "eveu", d, i),
                                       min_errors=100)
            rates.append(est.rate)
        med.append(float(np.median(rates)))
    return med


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--delta", type=float, default=0.25)
    ap.add_argument("--draws", type=int, default=10)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--trials", type=int, default=100000)
    ap.add_argument("--p", default="1e2,1e3,1e4")
    args = ap.parse_args()
    p_grid = [float(tok) for tok in args.p.split(",")]

    rows = sweep_ser("Blind", args.m, args.delta, p_grid, args.draws, args.seed,
                     trials=args.trials)
    write_ser_csv(rows, "reliability_curve.csv")
    ser_med = [float(np.median([r.rate for r in rows if r.p == p])) for p in p_grid]
    eve_med = eve_curve(args.m, args.delta, p_grid, args.draws, args.seed,
                        args.trials)
    print(f"{'P':>10} {'median SER':>12} {'median eve err|V':>17}")
    for p, s, e in zip(p_grid, ser_med, eve_med):
        print(f"{p:>10g} {s:>12.4f} {e:>17.4f}")
    print("rows -> reliability_curve.csv")


if __name__ == "__main__":
    main()
