"""Solve one random channel with every solver and compare the outcomes.

A 16-element surface with four phase states and a strongly attenuating
amplitude curve (beta_min = 0.2). The sweep is optimal for this set, the
two quantizers are cheaper and land somewhat below it.

    python3 demos/01_single_instance.py
"""

import numpy as np

from risbeam import (
    PdaProfile,
    algorithm1_optimize,
    apq_solve,
    build_coefficient_set,
    build_phase_set,
    eapq_solve,
    exhaustive_search,
    ideal_phases,
)
from risbeam.experiments import ChannelModelConfig, generate_channel

ws = build_coefficient_set(build_phase_set(4, 2 * np.pi), PdaProfile(beta_min=0.2, alpha_r=1.6))
print("phases (rad):", np.round(ws.phases, 4))
print("gains       :", np.round(ws.gains, 4))
print("locally convex:", ws.locally_convex)

channel = generate_channel(ChannelModelConfig(n_elements=10, seed=42), trial_index=0)
print(f"\nchannel: N={channel.N}, direct magnitude {channel.beta0:.3f}")
print(f"upper bound with continuous phases and no attenuation: {ideal_phases(channel).max_power:.4f}")

print(f"\n{'solver':<11}{'power':>10}{'SNR boost':>12}  selections")
for solve in (algorithm1_optimize, exhaustive_search, eapq_solve, apq_solve):
    sol = solve(channel, ws)
    print(f"{sol.algorithm:<11}{sol.power:>10.4f}{sol.snr_boost:>12.3f}  {sol.selections.tolist()}")

sweep = algorithm1_optimize(channel, ws)
print(f"\nthe sweep crossed {sweep.steps} of {sweep.n_boundaries} boundaries "
      f"with {sweep.diagnostics['additions']} complex additions")
