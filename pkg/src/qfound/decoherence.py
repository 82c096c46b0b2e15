"""Loss of coherence of an all-or-nothing state through scattered photons.

Each photon is a two-dimensional mode. It scatters into ``|k+⟩`` or
``|k-⟩`` depending on which branch of the spins it met, and only the
overlap ``g = ⟨k-|k+⟩`` matters. In the ``{|+…+⟩, |-…-⟩}`` basis the
reduced spin matrix has off-diagonal element ``(row +, col -)`` equal to
``α β* Π g``.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .ghz import AllOrNothingState
from .linalg import DensityOp, DimensionError, MAX_STATE_DIM, StateVector, partial_trace


def photon_modes(g: complex) -> tuple[np.ndarray, np.ndarray]:
    """Normalised ``(|k+⟩, |k-⟩)`` in a 2-dim mode space with ``⟨k-|k+⟩ = g``."""
    g = complex(g)
    if abs(g) > 1 + 1e-12:
        raise ValueError(f"|g| must not exceed 1, got {abs(g)}")
    k_plus = np.array([1.0, 0.0], dtype=complex)
    k_minus = np.array([g.conjugate(), math.sqrt(max(0.0, 1.0 - abs(g) ** 2))], dtype=complex)
    return k_plus, k_minus


def reduced_after_scattering(alpha: complex, beta: complex, overlaps: Sequence[complex]) -> DensityOp:
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > 1e-12:
        raise ValueError("|alpha|^2 + |beta|^2 must equal 1")
    overlaps = [complex(g) for g in overlaps]
    if any(abs(g) > 1 + 1e-12 for g in overlaps):
        raise ValueError("every overlap must satisfy |g| <= 1")
    factor = complex(np.prod(overlaps)) if overlaps else 1.0
    coh = alpha * np.conj(beta) * factor
    rho = np.array([[abs(alpha) ** 2, coh], [np.conj(coh), abs(beta) ** 2]], dtype=complex)
    return DensityOp(rho)


def entangled_env_state(system: AllOrNothingState, photon_pairs: Sequence[tuple[np.ndarray, np.ndarray]]) -> StateVector:
    """α|+…+⟩⊗|k+⟩|k+'⟩… + β|-…-⟩⊗|k-⟩|k-'⟩…, spins first then photons."""
    total = 2 ** (system.n + len(photon_pairs))
    if total > MAX_STATE_DIM:
        raise DimensionError(f"total dimension {total} exceeds cap {MAX_STATE_DIM}")
    up_branch = np.zeros(2**system.n, dtype=complex)
    up_branch[0] = 1.0
    down_branch = np.zeros(2**system.n, dtype=complex)
    down_branch[-1] = 1.0
    for k_plus, k_minus in photon_pairs:
        k_plus = np.asarray(k_plus, dtype=complex)
        k_minus = np.asarray(k_minus, dtype=complex)
        if k_plus.shape != (2,) or k_minus.shape != (2,):
            raise DimensionError("photon modes must be 2-dim vectors")
        if abs(np.linalg.norm(k_plus) - 1) > 1e-12 or abs(np.linalg.norm(k_minus) - 1) > 1e-12:
            raise ValueError("photon modes must be normalised")
        up_branch = np.kron(up_branch, k_plus)
        down_branch = np.kron(down_branch, k_minus)
    amps = system.alpha * up_branch + system.beta * down_branch
    return StateVector(amps, (2,) * (system.n + len(photon_pairs)))


def spin_block(system: AllOrNothingState, photon_pairs) -> DensityOp:
    """Trace out the photons and keep the ``{|+…+⟩, |-…-⟩}`` block."""
    psi = entangled_env_state(system, photon_pairs)
    red = partial_trace(psi, range(system.n)).matrix
    corners = [0, red.shape[0] - 1]
    return DensityOp(red[np.ix_(corners, corners)])


def decay_curve(g: complex, n_max: int, alpha: complex = 1 / math.sqrt(2), beta: complex = 1 / math.sqrt(2)) -> np.ndarray:
    """Rows ``(n, |off-diagonal|)`` for ``n = 0..n_max`` photons of equal overlap."""
    if abs(g) > 1 + 1e-12:
        raise ValueError("|g| must not exceed 1")
    n = np.arange(n_max + 1)
    return np.column_stack([n, abs(alpha * np.conj(beta)) * abs(g) ** n])
