"""What happens when the phase states cover only part of the circle.

Below the uniform threshold the K phases are packed into a range R. The two
edge phases then absorb every ideal phase that falls outside the range, as
the selection probabilities show. The approximation ratio rises with R and
meets the uniform value exactly at the threshold. An empirical check with
the APQ quantizer on a large surface follows.

    python3 demos/04_limited_range.py
"""

import numpy as np

from risbeam import (
    PdaProfile,
    approx_ratio_limited,
    approx_ratio_uniform,
    build_coefficient_set,
    build_phase_set,
    limited_pmf,
    uniform_threshold,
)
from risbeam.experiments import ChannelModelConfig, run_monte_carlo

K = 4
print(f"K={K}: uniform threshold {uniform_threshold(K):.4f} rad")
print("APQ selection probabilities:")
for R in (np.pi / 4, np.pi / 2, np.pi, uniform_threshold(K)):
    print(f"  R={R:6.3f}  p={np.round(limited_pmf(K, R), 4)}")

profile = PdaProfile(0.5, 1.6)
print("\n   R    theory  simulated (N=512, 300 trials)")
for R in np.linspace(0.5, uniform_threshold(K), 5):
    ws = build_coefficient_set(build_phase_set(K, R), profile)
    theory = approx_ratio_limited(ws, R).e_pda
    res = run_monte_carlo(ChannelModelConfig(512, seed=3), ws, ["apq"], trials=300)
    print(f"{R:6.3f}  {theory:.4f}  {np.mean(res.normalized_power['apq']):.4f}")

ws = build_coefficient_set(build_phase_set(K, 2 * np.pi), profile)
print(f"\nuniform ratio for comparison: {approx_ratio_uniform(ws).e_pda:.4f}")
