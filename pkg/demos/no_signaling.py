"""Whatever A measures, B's statistics stay put."""

import math

import numpy as np

from qfound.bell import singlet, spin_along
from qfound.linalg import SX, SZ, random_density, random_hermitian
from qfound.nosignal import no_signaling_check

rep = no_signaling_check(singlet(), [SZ, SX, spin_along(math.radians(37))], SZ)
print("singlet, B measures z, A tries z / x / 37 deg:", [m.round(12).tolist() for m in rep.marginals])

rng = np.random.default_rng(9)
rho = random_density(rng, (2, 4))
rep = no_signaling_check(rho, [random_hermitian(rng, 2) for _ in range(5)], random_hermitian(rng, 4))
print("random 2x4 state, B marginal without any A measurement:", rep.reference.round(6))
print("spread over five choices of A:", rep.max_choice_discrepancy)
print("partial trace vs summed joint probabilities:", rep.max_path_discrepancy)
