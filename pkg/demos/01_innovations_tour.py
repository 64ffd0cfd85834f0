"""Tour of the innovation catalog: laws, truncated second moments, thresholds.

Each catalog law is sampled, its analytic truncated second moment l(x) is
compared with the empirical one, and the threshold sequence eta_j is shown
together with the boundary identity j * l(eta_j) = eta_j^2 that defines it.
The point of the tour: l varies slowly (constant, saturating, logarithmic),
which is exactly the regime the normalization theory is built for.

Run:  python3 demos/01_innovations_tour.py [--quick] [--seed N]
"""

from __future__ import annotations

import argparse

import numpy as np

from longmem import eta_many, make_innovation
from longmem.streams import substream


def empirical_l(samples: np.ndarray, x: float) -> float:
    kept = samples[np.abs(samples) <= x]
    return float(np.sum(kept * kept) / samples.size)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true", help="smaller sample sizes")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()
    draws = 100_000 if args.quick else 2_000_000

    for idx, kind in enumerate(("rademacher", "gaussian", "pareto2")):
        model = make_innovation(kind)
        rng = substream(args.seed, 0, idx)
        samples = np.asarray(model.sample(rng, draws), dtype=float)

        print(f"== {model.kind} (b = {model.b:g})")
        print(f"   {draws} draws: mean {samples.mean():+.4f}")

        # --- analytic vs empirical truncated second moment
        for x in (2.0, 5.0, 20.0, 100.0):
            analytic = float(model.truncated_second_moment(x))
            measured = empirical_l(samples, x)
            print(
                f"   l({x:>5g}) analytic {analytic:8.4f}   "
                f"empirical {measured:8.4f}"
            )

        # --- thresholds and the defining boundary identity
        js = np.array([1, 10, 100, 10_000, 1_000_000])
        etas = eta_many(model, js)
        print("   j, eta_j, j*l(eta_j)/eta_j^2 (1 when the boundary binds):")
        for j, e in zip(js, etas):
            ratio = j * float(model.truncated_second_moment(e)) / (e * e)
            print(f"   {j:>9d}  {e:12.4f}  {ratio:8.5f}")
        print()

    print(
        "Note: for Rademacher the boundary ratio is below 1 at small j because\n"
        "eta_j floors at b + 1 = 2; once eta_j = sqrt(j) > 2 it binds exactly.\n"
        "For the Pareto law with density |x|^-3 the second moment is infinite,\n"
        "yet l grows only like 2 ln x: the law sits in the Gaussian domain of\n"
        "attraction and every statistic downstream relies on that."
    )


if __name__ == "__main__":
    main()
