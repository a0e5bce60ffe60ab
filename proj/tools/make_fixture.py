#!/usr/bin/env python3
"""Writes the synthetic blood-pressure style fixture used by the tests.

85 subjects, three time points, methods J and R (two observers of the same
reading, small noise) and S (a device with larger noise and a bias).
Values are rounded to whole mmHg like manual readings.
"""
import argparse

import numpy as np


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="tests/data/bp_synthetic_long.csv")
    ap.add_argument("--seed", type=int, default=20201)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n, times = 85, 3
    base = rng.normal(140.0, 25.0, n)
    steps = rng.normal(0.0, 12.0, (n, times - 1))
    truth = np.column_stack([base, base[:, None] + np.cumsum(steps, axis=1)])

    readings = {
        "J": truth + rng.normal(0.0, 2.5, truth.shape),
        "R": truth + rng.normal(0.0, 2.5, truth.shape),
        "S": truth + 5.0 + rng.normal(0.0, 12.0, truth.shape),
    }
    with open(args.out, "w", newline="\n") as f:
        f.write("subject,time,method,value\n")
        for i in range(n):
            for method, values in readings.items():
                for t in range(times):
                    f.write(f"{i + 1},{t + 1},{method},{int(round(values[i, t]))}\n")


if __name__ == "__main__":
    main()
