"""How often the event forbidden by local reasoning actually happens."""

import math

import numpy as np

from qfound.hardy import P_OPT, hardy_maximize, hardy_prob, hardy_state, verify_exclusions

for theta in np.linspace(0.1, 1.4, 6):
    rep = verify_exclusions(hardy_state(theta))
    print(f"theta={theta:.2f}  p={hardy_prob(theta):.6f}  exclusions hold: {rep.satisfied}")

opt = hardy_maximize()
print(f"\nmaximum p = {opt.p_star:.10f} at theta = {opt.theta_star:.6f}")
print(f"closed form (5*sqrt5 - 11)/2 = {P_OPT:.10f}, sin^2 theta* = {math.sin(opt.theta_star) ** 2:.10f}")
