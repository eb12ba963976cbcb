"""Average loss against the ideal beamformer for uniform phase sets.

The loss splits into two parts in dB. One part comes from the mean
amplitude of the selectable coefficients and the other from phase
quantization. More phases shrink the quantization part quickly, while
the attenuation part settles at the continuous-phase limit.

    python3 demos/03_loss_table.py
"""

import numpy as np

from risbeam import (
    PdaProfile,
    approx_ratio_continuous,
    approx_ratio_uniform,
    build_coefficient_set,
    build_phase_set,
    loss_db_decomposition,
)

Ks = (2, 3, 4, 6, 8, 16, 64)
print("total loss in dB")
print("beta_min " + "".join(f"{f'K={K}':>8}" for K in Ks) + f"{'cont.':>8}")
for beta_min in (0.2, 0.5, 0.8):
    profile = PdaProfile(beta_min, 1.6)
    losses = [
        approx_ratio_uniform(build_coefficient_set(build_phase_set(K, 2 * np.pi), profile)).loss_db for K in Ks
    ]
    cont = approx_ratio_continuous(profile).loss_db
    print(f"{beta_min:<9}" + "".join(f"{x:8.3f}" for x in losses) + f"{cont:8.3f}")

print("\nsplit for beta_min = 0.5 (attenuation + quantization):")
for K in Ks:
    ws = build_coefficient_set(build_phase_set(K, 2 * np.pi), PdaProfile(0.5, 1.6))
    gain, quant = loss_db_decomposition(ws)
    print(f"  K={K:<3} {gain:6.3f} + {quant:6.3f} = {gain + quant:6.3f} dB")
