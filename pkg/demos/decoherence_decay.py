"""Each scattered photon multiplies the remaining coherence by its overlap."""

from qfound.decoherence import decay_curve, photon_modes, reduced_after_scattering, spin_block
from qfound.ghz import AllOrNothingState

system = AllOrNothingState.with_phase(3, 0.0)
overlaps = [0.9, 0.8j, 0.95, 0.7]
closed = reduced_after_scattering(system.alpha, system.beta, overlaps).matrix
explicit = spin_block(system, [photon_modes(g) for g in overlaps]).matrix
print("closed form off-diagonal:", closed[0, 1])
print("from the full state:     ", explicit[0, 1])

for n, c in decay_curve(0.99, 500)[::100]:
    print(f"{int(n):4d} photons: |off-diagonal| = {c:.6f}")
