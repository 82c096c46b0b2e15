"""Hardy's two-spin construction and the probability of its forbidden event."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._optimize import golden_max
from .linalg import StateVector

# basis order: |+,+⟩, |+,-⟩, |-,+⟩, |-,-⟩
PP, PM, MP, MM = range(4)

SIN2_OPT = (3.0 - math.sqrt(5.0)) / 2.0
THETA_OPT = math.asin(math.sqrt(SIN2_OPT))
P_OPT = (5.0 * math.sqrt(5.0) - 11.0) / 2.0


def unprimed_up(theta: float) -> np.ndarray:
    """+1 eigenket of the unprimed measurement, tilted by 2θ from Oz."""
    return np.array([math.cos(theta), math.sin(theta)])


@dataclass(frozen=True, eq=False)
class HardyState:
    """Hardy state at angle ``theta``; ``raw`` keeps the unnormalised amplitudes."""

    theta: float
    raw: np.ndarray

    @property
    def state(self) -> StateVector:
        return StateVector(self.raw, (2, 2)).normalize()

    def norm_squared(self) -> float:
        return float(np.vdot(self.raw, self.raw).real)


def hardy_state(theta: float) -> HardyState:
    """-cosθ(|+,-⟩ + |-,+⟩) + sinθ|+,+⟩, before normalisation."""
    if not 0.0 < theta < math.pi / 2:
        raise ValueError("theta must lie strictly between 0 and pi/2")
    raw = np.zeros(4, dtype=complex)
    raw[PP] = math.sin(theta)
    raw[PM] = raw[MP] = -math.cos(theta)
    return HardyState(theta, raw)


def exclusion_kets(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """The two kets forbidden when exactly one setting is primed."""
    c, s = math.cos(theta), math.sin(theta)
    first = np.zeros(4, dtype=complex)
    first[PP], first[PM] = c, s
    second = np.zeros(4, dtype=complex)
    second[PP], second[MP] = c, s
    return first, second


class ExclusionReport(NamedTuple):
    overlap_first: float
    overlap_second: float
    overlap_minus_minus: float
    satisfied: bool


def verify_exclusions(hs: HardyState, tol: float = 1e-12) -> ExclusionReport:
    psi = hs.state.amps
    first, second = exclusion_kets(hs.theta)
    o1 = float(abs(np.vdot(first, psi)))
    o2 = float(abs(np.vdot(second, psi)))
    o3 = float(abs(psi[MM]))
    return ExclusionReport(o1, o2, o3, max(o1, o2, o3) < tol)


def hardy_prob(theta: float) -> float:
    """sin²θ (1 - sin²θ)² / (2 - sin²θ)."""
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError("theta must lie in [0, pi/2]")
    s2 = math.sin(theta) ** 2
    return s2 * (1.0 - s2) ** 2 / (2.0 - s2)


def hardy_prob_from_state(theta: float) -> float:
    """Squared overlap of the normalised Hardy state with both spins up along the unprimed axis."""
    hs = hardy_state(theta)
    up = unprimed_up(theta)
    both_up = np.kron(up, up)
    return float(abs(np.vdot(both_up, hs.raw)) ** 2 / hs.norm_squared())


class HardyOptimum(NamedTuple):
    theta_star: float
    p_star: float
    p_from_state: float


def hardy_maximize(iters: int = 200) -> HardyOptimum:
    theta, p = golden_max(hardy_prob, 0.0, math.pi / 2, iters)
    return HardyOptimum(theta, p, hardy_prob_from_state(theta))
