"""Prior densities on the distance scale, one curve per branch, written as CSV.

Columns: distance, then lower/upper branch curves for each Gamma prior and
the PC prior's exponential. Plot externally.
"""

import argparse

import numpy as np

from pcweibull.divergence import Branch
from pcweibull.reference_priors import GammaPriorSpec, prior_on_distance_scale


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figure5_curves.csv")
    ap.add_argument("--theta", type=float, default=2.5)
    ap.add_argument("--d-max", type=float, default=3.0)
    ap.add_argument("--points", type=int, default=301)
    args = ap.parse_args()
    d = np.linspace(0.0, args.d_max, args.points)
    cols, names = [d], ["distance"]
    for a in (1.5, 0.1):
        spec = GammaPriorSpec(a, "scale")
        for br in Branch:
            cols.append(prior_on_distance_scale(spec, br, d)[:, 1])
            names.append(f"gamma{a:g}_{br.value}")
    cols.append(0.5 * args.theta * np.exp(-args.theta * d))
    names.append(f"pc{args.theta:g}_per_branch")
    np.savetxt(args.out, np.column_stack(cols), delimiter=",", header=",".join(names), comments="", fmt="%.6g")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
