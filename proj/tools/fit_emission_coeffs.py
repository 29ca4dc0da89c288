#!/usr/bin/env python3
"""Fit the six-coefficient rate polynomial to an emissionsMap table.

Input rows are `v;a;slope;quantity;rate` as written by SUMO's emissionsMap
(rates in mg/s, fuel in mg/s). Only a >= 0 rows enter the fit. Fuel is
converted to ml/s with the diesel density below.

usage: fit_emission_coeffs.py grid.csv CLASS_NAME > class.coef
"""
import collections
import sys

import numpy as np

DIESEL_MG_PER_ML = 836.0
QUANTITIES = ["CO2", "CO", "NOx", "HC", "fuel"]


def main():
    path, name = sys.argv[1], sys.argv[2]
    rows = collections.defaultdict(list)
    with open(path) as fh:
        for line in fh:
            v, a, _slope, q, r = line.strip().split(";")
            rows[q].append((float(v), float(a), float(r)))
    print(f"class {name}")
    for q in QUANTITIES:
        v, a, r = np.array(rows[q]).T
        keep = a >= 0
        X = np.stack([np.ones_like(v), v * a, v * a * a, v, v * v, v ** 3], axis=1)
        c, *_ = np.linalg.lstsq(X[keep], r[keep], rcond=None)
        # drop terms contributing under 1e-4 of the largest rate, then snap
        # c*3.6 to the 4 significant digits of the source table
        scale = np.abs(X[keep]).max(axis=0) * np.abs(c)
        c[scale < 1e-4 * np.abs(r[keep]).max()] = 0.0
        c = np.array([float(f"{x * 3.6:.4g}") / 3.6 for x in c])
        if q == "fuel":
            c = c / DIESEL_MG_PER_ML
        print(q, " ".join(f"{x:.10g}" for x in c))


if __name__ == "__main__":
    main()
