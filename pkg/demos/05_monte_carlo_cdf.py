"""Distribution of the SNR boost over random channels.

Runs the three fast solvers on the same 500 channels and prints
percentiles and a coarse CDF of the boost. It also shows how the mean
normalized power of APQ approaches the analytic ratio. Pass a number of
worker processes as the first argument to spread the trials out; the
numbers do not change.

    python3 demos/05_monte_carlo_cdf.py [workers]
"""

import sys

import numpy as np

from risbeam import PdaProfile, approx_ratio_uniform, build_coefficient_set, build_phase_set
from risbeam.experiments import ChannelModelConfig, run_monte_carlo

workers = int(sys.argv[1]) if len(sys.argv) > 1 else 1
ws = build_coefficient_set(build_phase_set(3, 2 * np.pi), PdaProfile(0.2, 1.6))
res = run_monte_carlo(
    ChannelModelConfig(n_elements=64, seed=11), ws, ["alg1", "eapq", "apq"], trials=500, workers=workers
)

grid = [100, 300, 1000, 3000, 10000]
# the direct link is Rayleigh too, so a weak one makes the boost very large
print("SNR boost (linear)")
print(f"{'solver':<6}{'mean':>9}{'p1':>9}{'p50':>9}   CDF at " + ", ".join(map(str, grid)))
for algo in res.algorithms:
    agg = res.aggregate(algo, percentiles=(1, 50), cdf_grid=grid)
    p = agg["percentiles"]
    cdf = ", ".join(f"{c:.2f}" for c in agg["cdf"])
    print(f"{algo:<6}{agg['mean']:9.1f}{p[1.0]:9.1f}{p[50.0]:9.1f}   {cdf}")

print(f"\nAPQ mean normalized power {np.mean(res.normalized_power['apq']):.4f}, "
      f"analytic ratio {approx_ratio_uniform(ws).e_pda:.4f}")
