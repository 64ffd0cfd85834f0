"""Exact fractional Brownian motion and the unit-root statistics it governs.

Two halves. First, the circulant-embedding sampler is checked against the
closed-form covariance (s^2H + t^2H - |t-s|^2H)/2 on a coarse grid, with
errors expressed in Monte Carlo standard errors. Second, an AR(1) with
rho = 1 is driven by long-memory noise and the three studentized
least-squares statistics are compared (two-sample KS) against their limit
laws, which are functionals of fBm with H = 3/2 - alpha:

    stat_a  ->  (c(alpha)/A^2) * int_0^1 W_H^2
    stat_b  ->  (c(alpha)/(2 A^2)) * W_H(1)^2
    stat_c  ->  W_H(1)^2 / (2 int_0^1 W_H^2)      (n times rho_hat - 1)

stat_c is positive in the limit: under long memory the sum of squared
differences is negligible next to y_n^2, so rho_hat approaches 1 from
above. That sign alone separates this regime from the iid-noise case.

Run:  python3 demos/05_fbm_and_unit_root.py [--quick] [--seed N]
"""

from __future__ import annotations

import argparse

import numpy as np

from longmem import (
    EmpiricalDistribution,
    FbmSpec,
    build_table,
    c_alpha,
    fbm_kernel,
    ks_two_sample,
    make_innovation,
    make_scheme,
    reference_distribution,
    sample_fbm,
    simulate_path,
    unit_root_run,
)
from longmem.streams import substream


def covariance_check(hurst: float, replicates: int, seed: int) -> None:
    spec = FbmSpec(hurst=hurst, grid_size=8)
    times = spec.times[1:]
    kern = fbm_kernel(hurst, times[:, None], times[None, :])
    acc = np.zeros_like(kern)
    for r in range(replicates):
        w = sample_fbm(spec, substream(seed, 6, r)).w[1:]
        acc += np.outer(w, w)
    emp = acc / replicates
    diag = np.diag(kern)
    se = np.sqrt((np.outer(diag, diag) + kern**2) / replicates)
    worst = float(np.max(np.abs(emp - kern) / se))
    print(
        f"   H = {hurst:.2f}: max |emp cov - kernel| = "
        f"{float(np.max(np.abs(emp - kern))):.4f} ({worst:.2f} standard errors)"
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true", help="smaller n and R")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()
    cov_r = 1000 if args.quick else 4000
    replicates = 200 if args.quick else 500
    n_list = [512, 2048] if args.quick else [1024, 4096]
    ref_r = 2000 if args.quick else 4000

    print(f"== exact sampler vs closed-form covariance, R = {cov_r}, 8-point grid")
    for hurst in (0.6, 0.9):
        covariance_check(hurst, cov_r, args.seed)

    model = make_innovation("gaussian")
    scheme = make_scheme("farima", d=0.25)
    build_table(model, scheme, n_list)  # warms the eta cache used below
    hurst = 1.5 - scheme.alpha
    scale = c_alpha(scheme.alpha) / scheme.asq_total

    spec = FbmSpec(hurst=hurst, grid_size=512)
    ref_a = EmpiricalDistribution(
        reference_distribution(spec, "integral", ref_r, args.seed).values * scale
    )
    ref_b = EmpiricalDistribution(
        reference_distribution(spec, "w1sq", ref_r, args.seed).values * scale / 2.0
    )
    ref_c = reference_distribution(spec, "ratio", ref_r, args.seed)

    print(
        f"\n== unit-root statistics vs fBm references, H = {hurst:g}, "
        f"{model.kind}, {scheme.label}, R = {replicates}"
    )
    for n in n_list:
        stats = np.empty((replicates, 3))
        for r in range(replicates):
            path = simulate_path(
                model, scheme, n, substream(args.seed, 4, n, r), m_lag=16 * n
            )
            run = unit_root_run(path)
            stats[r] = (run.stat_a, run.stat_b, run.stat_c)
        ks = [
            ks_two_sample(EmpiricalDistribution(stats[:, i]), ref)
            for i, ref in enumerate((ref_a, ref_b, ref_c))
        ]
        print(
            f"   n = {n:>5d}: KS a/b/c = {ks[0]:.4f} / {ks[1]:.4f} / {ks[2]:.4f}   "
            f"median stat_c {float(np.median(stats[:, 2])):.4f} "
            f"(reference {float(np.median(ref_c.values)):.4f})"
        )

    print(
        "\nAt these sizes the last two KS values often coincide exactly:\n"
        "stat_b and stat_c are negative on precisely the paths where\n"
        "rho_hat < 1, their limit laws are positive, and that shared\n"
        "left-tail mass is where both suprema land. The median of\n"
        "n(rho_hat - 1) stays positive; under iid noise the same statistic\n"
        "centres below zero. `longmem unit-root` runs the calibrated\n"
        "comparison at sizes where the negative mass has mostly drained."
    )


if __name__ == "__main__":
    main()
