"""GHZ states, their local-realist contradiction, and N-spin all-or-nothing states.

Transverse measurements on site ``i`` use the in-plane spin component
``cos(θ) σx + sin(θ) σy``; labels ``'x'``, ``'y'``, ``'z'`` select a Pauli
matrix directly.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .linalg import PAULI, SX, SY, StateVector, apply_local, as_vector, partial_trace

MAX_SPINS = 12

Axis = Union[str, float]


def ghz3(eta: int = -1) -> StateVector:
    """(|+,+,+⟩ + η|-,-,-⟩)/√2; the default η = -1 is the usual GHZ example."""
    if eta not in (-1, 1):
        raise ValueError("eta must be +1 or -1")
    amps = np.zeros(8, dtype=complex)
    amps[0] = 1 / math.sqrt(2)
    amps[7] = eta / math.sqrt(2)
    return StateVector(amps, (2, 2, 2))


def transverse_spin(theta: float) -> np.ndarray:
    return math.cos(theta) * SX + math.sin(theta) * SY


def site_matrix(axis: Axis) -> np.ndarray:
    if isinstance(axis, str):
        try:
            return PAULI[axis.lower()]
        except KeyError:
            raise ValueError(f"unknown axis label {axis!r}") from None
    return transverse_spin(float(axis))


class ProductExpectation(NamedTuple):
    expectation: float
    is_eigen: bool
    eigenvalue: float | None
    residual: float


def product_op_expectation(state: StateVector, axes: Sequence[Axis], tol: float = 1e-12) -> ProductExpectation:
    """⟨Ψ| σ₁ ⊗ σ₂ ⊗ … |Ψ⟩ and whether Ψ is an eigenstate of the product."""
    if len(axes) != len(state.dims):
        raise ValueError(f"{len(axes)} axes given for {len(state.dims)} particles")
    psi = state.amps
    out = apply_local(psi, [site_matrix(ax) for ax in axes], state.dims)
    value = complex(np.vdot(psi, out))
    residual = float(np.linalg.norm(out - value * psi))
    eigen = residual < tol
    return ProductExpectation(value.real, eigen, float(round(value.real)) if eigen else None, residual)


def local_realist_parity() -> dict:
    """Enumerate every ±1 assignment of (A_x, A_y, B_x, B_y, C_x, C_y).

    Keeps the assignments obeying A_y B_y C_x = A_x B_y C_y = A_y B_x C_y = 1
    and records A_x B_x C_x for each.
    """
    satisfying = []
    total = 0
    for ax, ay, bx, by, cx, cy in itertools.product((1, -1), repeat=6):
        total += 1
        if ay * by * cx == 1 and ax * by * cy == 1 and ay * bx * cy == 1:
            satisfying.append(ax * bx * cx)
    quantum = product_op_expectation(ghz3(-1), "xxx")
    return {
        "total_assignments": total,
        "satisfying_assignments": len(satisfying),
        "xxx_products": sorted(set(satisfying)),
        "all_products_plus_one": all(p == 1 for p in satisfying),
        "quantum_xxx_eigenvalue": quantum.eigenvalue,
        "contradiction": all(p == 1 for p in satisfying) and quantum.eigenvalue == -1,
    }


# ---------------------------------------------------------------- all-or-nothing

def _check_coefficients(n: int, alpha: complex, beta: complex) -> None:
    if not 1 <= n <= MAX_SPINS:
        raise ValueError(f"particle count must be in 1..{MAX_SPINS}, got {n}")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > 1e-12:
        raise ValueError("|alpha|^2 + |beta|^2 must equal 1")


@dataclass(frozen=True)
class AllOrNothingState:
    """α|+…+⟩ + β|-…-⟩ on ``n`` spins sharing one quantization axis."""

    n: int
    alpha: complex
    beta: complex

    def __post_init__(self):
        _check_coefficients(self.n, self.alpha, self.beta)

    @classmethod
    def with_phase(cls, n: int, phi: float) -> "AllOrNothingState":
        """α = 1/√2, β = e^{iφ}/√2."""
        return cls(n, 1 / math.sqrt(2), cmath.exp(1j * phi) / math.sqrt(2))

    @property
    def phi(self) -> float:
        return cmath.phase(self.beta / self.alpha) if self.alpha != 0 else 0.0

    def vector(self) -> StateVector:
        return all_or_nothing(self.n, self.alpha, self.beta)


def all_or_nothing(n: int, alpha: complex, beta: complex) -> StateVector:
    _check_coefficients(n, alpha, beta)
    amps = np.zeros(2**n, dtype=complex)
    amps[0] += alpha
    amps[-1] += beta
    return StateVector(amps, (2,) * n)


def product_state(n: int, alpha: complex, beta: complex) -> StateVector:
    """n-fold tensor power of α|+⟩ + β|-⟩."""
    _check_coefficients(n, alpha, beta)
    single = np.array([alpha, beta], dtype=complex)
    amps = np.ones(1, dtype=complex)
    for _ in range(n):
        amps = np.kron(amps, single)
    return StateVector(amps, (2,) * n)


def _outcome_signs(n: int) -> np.ndarray:
    """Product of ±1 results for every basis string (bit 0 = +1)."""
    idx = np.arange(2**n)
    ones = np.array([bin(i).count("1") for i in idx])
    return np.where(ones % 2 == 0, 1.0, -1.0)


def transverse_correlation(state, thetas: Sequence[float]) -> float:
    """Average of the product of all ±1 results, by enumerating 2ⁿ outcomes.

    Each site is rotated into the eigenbasis of ``cos θ σx + sin θ σy``
    (eigenvectors ``(|+⟩ ± e^{iθ}|-⟩)/√2``), the Born probabilities of all
    result strings are formed, and the signed sum is returned.
    """
    amps = as_vector(state)
    n = int(round(math.log2(amps.size)))
    if 2**n != amps.size:
        raise ValueError("state is not an n-qubit vector")
    if len(thetas) != n:
        raise ValueError(f"{len(thetas)} angles for {n} particles")
    to_eigenbasis = []
    for theta in thetas:
        plus = np.array([1, cmath.exp(1j * theta)]) / math.sqrt(2)
        minus = np.array([1, -cmath.exp(1j * theta)]) / math.sqrt(2)
        to_eigenbasis.append(np.stack([plus.conj(), minus.conj()]))
    rotated = apply_local(amps, to_eigenbasis, (2,) * n)
    probs = np.abs(rotated) ** 2
    return float(probs @ _outcome_signs(n))


def subsystem_coherence(state: AllOrNothingState, k: int) -> float:
    """|⟨+…+|ρ_k|-…-⟩| for the first ``k`` spins after tracing out the rest."""
    if not 1 <= k <= state.n:
        raise ValueError(f"k must be in 1..{state.n}")
    vec = state.vector()
    if k == state.n:
        return abs(state.alpha * np.conj(state.beta))
    red = partial_trace(vec, range(k))
    return float(abs(red.matrix[0, -1]))


def certainty_constrained_local_tables(n: int, m: int, phi_index: int = 0) -> np.ndarray:
    """Deterministic local response tables that reproduce every certain result.

    Angles are restricted to the grid ``2πj/m``. Each spin answers ±1 as a
    function of its own angle only, and a table is kept when the product of
    the ``n`` answers is +1 at every angle combination whose sum equals
    ``2π·phi_index/m`` modulo 2π. Returns the kept tables, shape
    ``(count, n, m)``, found by exhaustive enumeration.
    """
    if n * m > 24:
        raise ValueError("enumeration too large")
    tables = np.array(list(itertools.product((1, -1), repeat=n * m)), dtype=np.int8).reshape(-1, n, m)
    keep = np.ones(len(tables), dtype=bool)
    for combo in itertools.product(range(m), repeat=n):
        if sum(combo) % m != phi_index % m:
            continue
        prod = np.ones(len(tables), dtype=np.int8)
        for site, j in enumerate(combo):
            prod = prod * tables[:, site, j]
        keep &= prod == 1
    return tables[keep]


def local_table_correlations(tables: np.ndarray) -> np.ndarray:
    """Product of answers for every grid angle combination, per table."""
    count, n, m = tables.shape
    out = np.ones((count,) + (m,) * n, dtype=np.int8)
    for site in range(n):
        shape = [count] + [1] * n
        shape[1 + site] = m
        out = out * tables[:, site, :].reshape(shape)
    return out
