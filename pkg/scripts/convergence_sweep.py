"""Series against local residue for the one-variable Cayley fixture along z1 z2 = t.

The residue is 1/(1 - 4t); the series converges for t < 1/4 and the sweep
shows the gap growing and the partial sums diverging past that point.
"""

import argparse
import math

import numpy as np

from toric_residue.cayley import build_cayley
from toric_residue.critical import local_toric_residue
from toric_residue.errors import DegenerateCriticalPoint
from toric_residue.lattice import sequence_from_A
from toric_residue.poly import Poly
from toric_residue.series import coefficient_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--degree-bound", type=int, default=30)
    parser.add_argument("--points", type=int, default=12)
    parser.add_argument("--tmax", type=float, default=0.4)
    args = parser.parse_args()

    prob = build_cayley(sequence_from_A([[1], [1]]), [[0, 1]])
    table = coefficient_table(prob.under, prob.chamber, prob.theta, Poly.variable(2, 0), args.degree_bound)
    print(f"{'t':>8}{'series':>16}{'residue':>16}{'gap':>12}{'|last term|':>14}")
    for t in np.linspace(0.02, args.tmax, args.points):
        z = [math.sqrt(t), math.sqrt(t)]
        series = table.evaluate(z)
        last = abs(table.terms(z)[-1])
        try:
            res = local_toric_residue(prob.augmented, Poly.variable(3, 0), prob.z_tilde(z), s=prob.cone.s)
            print(f"{t:8.4f}{series.real:16.8g}{res.real:16.8g}{abs(series - res):12.2e}{last:14.2e}")
        except DegenerateCriticalPoint:
            print(f"{t:8.4f}{series.real:16.8g}{'degenerate':>16}{'':>12}{last:14.2e}")


if __name__ == "__main__":
    main()
