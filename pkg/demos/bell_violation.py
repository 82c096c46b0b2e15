"""Singlet correlations, the CHSH combination, and local models that cannot match it."""

import math

import numpy as np

from qfound.bell import (
    TSIRELSON, chsh_optimize, correlation, lhv_chsh, random_deterministic_model,
    random_settings, random_stochastic_model, singlet, stochastic_local_chsh,
)

psi = singlet()

# correlation only depends on the angle between the two analyzers
for deg in (0, 45, 90, 135, 180):
    print(f"theta={deg:3d}  E={correlation(psi, math.radians(deg), 0.0):+.6f}")

opt = chsh_optimize(psi)
print("best settings (rad):", np.round(opt.settings.as_tuple(), 6))
print(f"quantum CHSH = {opt.value:+.12f}   2*sqrt(2) = {TSIRELSON:.12f}")

rng = np.random.default_rng(2024)
det = max(abs(lhv_chsh(random_deterministic_model(rng))) for _ in range(2000))
sto = max(abs(stochastic_local_chsh(random_stochastic_model(rng), random_settings(rng))) for _ in range(2000))
print(f"largest |CHSH| over 2000 deterministic local models: {det}")
print(f"largest |CHSH| over 2000 stochastic local models:    {sto:.6f}")
