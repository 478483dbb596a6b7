"""Gamma(a, a) prior densities at the shapes matching a set of distances.

Prints the a = 1.5 and a = 0.1 tables under both Gamma conventions.
"""

import argparse

from pcweibull.reference_priors import GammaPriorSpec, distance_table

DISTANCES = (0.0, 0.1, 0.5, 0.8, 1.45)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", type=float, nargs="+", default=[1.5, 0.1])
    args = ap.parse_args()
    for a in args.a:
        for conv in ("scale", "rate"):
            print(f"\na={a:g}, {conv} convention")
            print(f"{'d':>6} {'alpha_lo':>9} {'dens_lo':>9} {'alpha_hi':>9} {'dens_hi':>9}")
            for r in distance_table(DISTANCES, GammaPriorSpec(a, conv)):
                print(f"{r.d:6.2f} {r.alpha_lower:9.4f} {r.dens_lower:9.5f} {r.alpha_upper:9.4f} {r.dens_upper:9.5f}")


if __name__ == "__main__":
    main()
