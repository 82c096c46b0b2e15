"""Three-spin GHZ parity, then N-spin correlations that need every particle."""

import math

import numpy as np

from qfound.ghz import AllOrNothingState, ghz3, local_realist_parity, product_op_expectation, subsystem_coherence, transverse_correlation

state = ghz3(-1)
for axes in ("yyx", "xyy", "yxy", "xxx"):
    r = product_op_expectation(state, axes)
    print(f"{axes}: eigenvalue {r.eigenvalue:+.0f} (residual {r.residual:.1e})")

parity = local_realist_parity()
print(f"{parity['satisfying_assignments']} of {parity['total_assignments']} local tables obey the three yyx-type rules;")
print(f"every one of them predicts xxx = {parity['xxx_products']}, quantum mechanics says -1")

n, phi = 6, 0.4
aon = AllOrNothingState.with_phase(n, phi)
rng = np.random.default_rng(5)
thetas = rng.uniform(0, 2 * math.pi, size=n)
print(f"\nN={n}: E = {transverse_correlation(aon.vector(), thetas):+.12f}, cos(sum - phi) = {math.cos(thetas.sum() - phi):+.12f}")
for k in range(1, n + 1):
    print(f"  coherence left in the first {k} spins: {subsystem_coherence(aon, k):.3f}")
