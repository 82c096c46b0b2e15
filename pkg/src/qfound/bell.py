"""Two-spin singlet statistics, the BCHSH combination and local models.

Measurement directions lie in the plane perpendicular to the propagation
axis and are given by one angle ``a``. The ``+1`` eigenvector along ``a`` is
``cos(a/2)|+⟩ + sin(a/2)|-⟩``, i.e. the observable ``cos(a) σz + sin(a) σx``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._optimize import golden_max
from .linalg import (
    DEFAULT_TOL,
    DensityOp,
    DimensionError,
    StateVector,
    SX,
    SY,
    SZ,
    I2,
    as_matrix,
    ket,
)

TWO_PI = 2.0 * math.pi
TSIRELSON = 2.0 * math.sqrt(2.0)


def reduce_angle(angle: float) -> float:
    r = math.fmod(float(angle), TWO_PI)
    return r + TWO_PI if r < 0 else r


def up_along(a: float) -> np.ndarray:
    return np.array([math.cos(a / 2), math.sin(a / 2)], dtype=complex)


def down_along(a: float) -> np.ndarray:
    return np.array([-math.sin(a / 2), math.cos(a / 2)], dtype=complex)


def spin_along(a: float) -> np.ndarray:
    return math.cos(a) * SZ + math.sin(a) * SX


@dataclass(frozen=True)
class ChshSettings:
    a: float
    a_prime: float
    b: float
    b_prime: float

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            object.__setattr__(self, name, reduce_angle(getattr(self, name)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.a_prime, self.b, self.b_prime)


# Settings at which the singlet reaches |<M>| = 2√2.
OPTIMAL_SINGLET = ChshSettings(0.0, math.pi / 2, 3 * math.pi / 4, -3 * math.pi / 4)


def singlet() -> StateVector:
    """(|+,-⟩ - |-,+⟩)/√2."""
    return StateVector((ket("+", "-").amps - ket("-", "+").amps) / math.sqrt(2), (2, 2))


def _two_qubit_matrix(state) -> np.ndarray:
    if isinstance(state, (StateVector, DensityOp)):
        if state.dims != (2, 2):
            raise DimensionError(f"expected a two-qubit state, got dims {state.dims}")
    m = as_matrix(state)
    if m.shape != (4, 4):
        raise DimensionError(f"expected a two-qubit state, got shape {m.shape}")
    return m


def pair_probs(state, a: float, b: float) -> np.ndarray:
    """Joint probabilities ``(P++, P+-, P-+, P--)`` for settings ``a``, ``b``."""
    rho = _two_qubit_matrix(state)
    out = np.empty(4)
    for k, (u, v) in enumerate(itertools.product((up_along(a), down_along(a)), (up_along(b), down_along(b)))):
        w = np.kron(u, v)
        out[k] = np.vdot(w, rho @ w).real
    return out


def correlation(state, a: float, b: float) -> float:
    p = pair_probs(state, a, b)
    return float(p[0] + p[3] - p[1] - p[2])


def chsh_value(state, settings: ChshSettings) -> float:
    """E(a,b) + E(a,b') - E(a',b) + E(a',b')."""
    a, ap, b, bp = settings.as_tuple()
    return (
        correlation(state, a, b)
        + correlation(state, a, bp)
        - correlation(state, ap, b)
        + correlation(state, ap, bp)
    )


def correlation_tensor(state) -> np.ndarray:
    """2×2 matrix of ⟨σi⊗σj⟩ for i, j in (z, x)."""
    rho = _two_qubit_matrix(state)
    ops = (SZ, SX)
    return np.array([[np.trace(rho @ np.kron(p, q)).real for q in ops] for p in ops])


def singlet_sweep(n_points: int = 360, state=None) -> np.ndarray:
    """Rows ``(theta_deg, p_pp, p_pm, p_mp, p_mm, E)`` with ``a = θ``, ``b = 0``."""
    state = singlet() if state is None else state
    rows = []
    for k in range(n_points):
        theta = TWO_PI * k / n_points
        p = pair_probs(state, theta, 0.0)
        rows.append([math.degrees(theta), *p, p[0] + p[3] - p[1] - p[2]])
    return np.array(rows)


class ChshOptimum(NamedTuple):
    settings: ChshSettings
    value: float
    grid_value: float


def chsh_optimize(state, grid_size: int = 64, refinement_iters: int = 40, sweeps: int = 3) -> ChshOptimum:
    """Settings maximising ``|chsh_value|``.

    Exhaustive search on a ``grid_size``-point angle grid (exact, because the
    combination separates over ``b`` and ``b'`` once ``a, a'`` are fixed),
    followed by coordinate-wise golden-section refinement within one grid
    step. The returned ``value`` keeps the sign of the extremum.
    """
    if grid_size < 8:
        raise ValueError("grid_size must be at least 8")
    t = correlation_tensor(state)
    angles = TWO_PI * np.arange(grid_size) / grid_size
    u = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    e = u @ t @ u.T  # e[i, j] = E(angle_i, angle_j)

    # e[a, b] - e[a', b] and e[a, b'] + e[a', b'] over all (a, a', b)
    diff = e[:, None, :] - e[None, :, :]
    summ = e[:, None, :] + e[None, :, :]
    hi = diff.max(axis=2) + summ.max(axis=2)
    lo = diff.min(axis=2) + summ.min(axis=2)
    if hi.max() >= -lo.min():
        sign = 1.0
        ia, iap = np.unravel_index(np.argmax(hi), hi.shape)
        ib, ibp = np.argmax(diff[ia, iap]), np.argmax(summ[ia, iap])
    else:
        sign = -1.0
        ia, iap = np.unravel_index(np.argmin(lo), lo.shape)
        ib, ibp = np.argmin(diff[ia, iap]), np.argmin(summ[ia, iap])

    def objective(x: Sequence[float]) -> float:
        ua, uap, ub, ubp = (np.array([math.cos(v), math.sin(v)]) for v in x)
        val = ua @ t @ ub + ua @ t @ ubp - uap @ t @ ub + uap @ t @ ubp
        return sign * float(val)

    x = [float(angles[i]) for i in (ia, iap, ib, ibp)]
    grid_value = objective(x)
    best = grid_value
    step = TWO_PI / grid_size
    for _ in range(sweeps):
        for k in range(4):
            def along(v: float, k: int = k) -> float:
                y = list(x)
                y[k] = v
                return objective(y)

            xk, fk = golden_max(along, x[k] - step, x[k] + step, refinement_iters)
            if fk > best:
                x[k], best = xk, fk
    return ChshOptimum(ChshSettings(*x), sign * best, sign * grid_value)


# ---------------------------------------------------------------- local models

@dataclass(frozen=True, eq=False)
class LocalDeterministicModel:
    """Finite hidden-variable ensemble with deterministic ±1 responses.

    ``resp_a[k] = (A(a, λk), A(a', λk))`` and likewise ``resp_b`` for
    ``(b, b')``.
    """

    weights: np.ndarray
    resp_a: np.ndarray
    resp_b: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        ra = np.asarray(self.resp_a, dtype=np.int64)
        rb = np.asarray(self.resp_b, dtype=np.int64)
        if w.ndim != 1 or ra.shape != (w.size, 2) or rb.shape != (w.size, 2):
            raise ValueError("weights must be (k,), responses (k, 2)")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")
        if not (np.isin(ra, (-1, 1)).all() and np.isin(rb, (-1, 1)).all()):
            raise ValueError("responses must be exactly +1 or -1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "resp_a", ra)
        object.__setattr__(self, "resp_b", rb)

    def m_values(self) -> np.ndarray:
        """Integer M(λ) = AB + AB' - A'B + A'B' for every λ."""
        A, Ap = self.resp_a[:, 0], self.resp_a[:, 1]
        B, Bp = self.resp_b[:, 0], self.resp_b[:, 1]
        return A * B + A * Bp - Ap * B + Ap * Bp


def lhv_chsh(model: LocalDeterministicModel) -> float:
    """Ensemble average of M(λ); asserts every M(λ) is ±2."""
    m = model.m_values()
    if not np.isin(m, (-2, 2)).all():
        raise AssertionError(f"M(λ) outside {{-2, +2}}: {sorted(set(m.tolist()))}")
    w_plus = float(model.weights[m == 2].sum())
    w_minus = float(model.weights[m == -2].sum())
    # Written as a ratio so rounding can never push |value| above 2.
    return 2.0 * (w_plus - w_minus) / (w_plus + w_minus)


def deterministic_strategies() -> np.ndarray:
    """All 16 response tables, shape (16, 4) ordered as (A, A', B, B')."""
    return np.array(list(itertools.product((1, -1), repeat=4)), dtype=np.int64)


def uniform_strategy_mixture() -> LocalDeterministicModel:
    tables = deterministic_strategies()
    return LocalDeterministicModel(np.full(16, 1 / 16), tables[:, :2], tables[:, 2:])


def random_deterministic_model(rng: np.random.Generator, max_lambdas: int = 8) -> LocalDeterministicModel:
    k = int(rng.integers(1, max_lambdas + 1))
    w = rng.dirichlet(np.ones(k))
    w /= w.sum()
    resp = rng.choice(np.array([-1, 1]), size=(k, 4))
    return LocalDeterministicModel(w, resp[:, :2], resp[:, 2:])


@dataclass(frozen=True, eq=False)
class StochasticLocalModel:
    """Hidden variable selects a local density operator on each side."""

    weights: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        r1 = np.asarray(self.rho1, dtype=complex)
        r2 = np.asarray(self.rho2, dtype=complex)
        if w.ndim != 1 or r1.shape != (w.size, 2, 2) or r2.shape != (w.size, 2, 2):
            raise ValueError("weights must be (k,), density operators (k, 2, 2)")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")
        for r in (r1, r2):
            _check_density_stack(r)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "rho1", r1)
        object.__setattr__(self, "rho2", r2)


def _check_density_stack(rho: np.ndarray, tol: float = DEFAULT_TOL) -> None:
    if not np.allclose(rho, np.conj(np.swapaxes(rho, 1, 2)), rtol=0, atol=tol):
        raise ValueError("local density operator is not Hermitian")
    if not np.allclose(np.trace(rho, axis1=1, axis2=2), 1.0, rtol=0, atol=tol):
        raise ValueError("local density operator does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("local density operator is not positive semidefinite")


def _local_bias(rho: np.ndarray, angle: float) -> np.ndarray:
    """P₊ - P₋ along ``angle`` for a stack of single-spin density operators."""
    up, down = up_along(angle), down_along(angle)
    p_plus = np.einsum("i,kij,j->k", up.conj(), rho, up).real
    p_minus = np.einsum("i,kij,j->k", down.conj(), rho, down).real
    return p_plus - p_minus


def stochastic_local_chsh(model: StochasticLocalModel, settings: ChshSettings) -> float:
    A = _local_bias(model.rho1, settings.a)
    Ap = _local_bias(model.rho1, settings.a_prime)
    B = _local_bias(model.rho2, settings.b)
    Bp = _local_bias(model.rho2, settings.b_prime)
    return float(model.weights @ (A * B + A * Bp - Ap * B + Ap * Bp))


def _random_qubit_densities(rng: np.random.Generator, k: int) -> np.ndarray:
    g = rng.normal(size=(k, 2, 2)) + 1j * rng.normal(size=(k, 2, 2))
    rho = g @ np.conj(np.swapaxes(g, 1, 2))
    return rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]


def random_stochastic_model(rng: np.random.Generator, max_lambdas: int = 8) -> StochasticLocalModel:
    k = int(rng.integers(1, max_lambdas + 1))
    w = rng.dirichlet(np.ones(k))
    w /= w.sum()
    return StochasticLocalModel(w, _random_qubit_densities(rng, k), _random_qubit_densities(rng, k))


def random_settings(rng: np.random.Generator) -> ChshSettings:
    return ChshSettings(*rng.uniform(0.0, TWO_PI, size=4))


# ---------------------------------------------------------------- product expansions

@dataclass(frozen=True, eq=False)
class SeparableDecomposition:
    """ρ = Σ c · ρ_n(1) ⊗ ρ_p(2) with real, possibly negative, weights."""

    terms: tuple[tuple[float, np.ndarray, np.ndarray], ...]

    def __init__(self, terms):
        object.__setattr__(
            self,
            "terms",
            tuple((float(c), np.asarray(r1, dtype=complex), np.asarray(r2, dtype=complex)) for c, r1, r2 in terms),
        )

    @property
    def weights(self) -> np.ndarray:
        return np.array([c for c, _, _ in self.terms])

    def is_mixture(self) -> bool:
        return bool(np.all(self.weights >= 0))

    def reconstruct(self) -> np.ndarray:
        return sum(c * np.kron(r1, r2) for c, r1, r2 in self.terms)


class SeparableChsh(NamedTuple):
    value: float
    negative_weights: bool


def separable_pair_probs(decomp: SeparableDecomposition, a: float, b: float) -> np.ndarray:
    """``(P++, P+-, P-+, P--)`` assembled term by term from the expansion."""
    vecs_a = (up_along(a), down_along(a))
    vecs_b = (up_along(b), down_along(b))
    out = np.zeros(4)
    for c, r1, r2 in decomp.terms:
        pa = [np.vdot(u, r1 @ u).real for u in vecs_a]
        pb = [np.vdot(v, r2 @ v).real for v in vecs_b]
        out += c * np.array([pa[0] * pb[0], pa[0] * pb[1], pa[1] * pb[0], pa[1] * pb[1]])
    return out


def separable_chsh(decomp: SeparableDecomposition, settings: ChshSettings) -> SeparableChsh:
    def corr(x: float, y: float) -> float:
        p = separable_pair_probs(decomp, x, y)
        return float(p[0] + p[3] - p[1] - p[2])

    a, ap, b, bp = settings.as_tuple()
    value = corr(a, b) + corr(a, bp) - corr(ap, b) + corr(ap, bp)
    return SeparableChsh(value, not decomp.is_mixture())


def product_expansion(state) -> SeparableDecomposition:
    """Expand any two-qubit operator over products of Pauli eigenprojectors.

    Uses ``ρ = ¼ Σ T_ij σi ⊗ σj`` with ``σ0 = I = Π⁺z + Π⁻z`` and
    ``σk = Π⁺k - Π⁻k``; the resulting weights are real but may be negative.
    """
    rho = _two_qubit_matrix(state)
    paulis = (I2, SX, SY, SZ)
    halves = []
    for k, s in enumerate(paulis):
        axis = SZ if k == 0 else s
        plus, minus = (I2 + axis) / 2, (I2 - axis) / 2
        halves.append(((1.0, plus), (1.0, minus)) if k == 0 else ((1.0, plus), (-1.0, minus)))
    terms = []
    for i, si in enumerate(paulis):
        for j, sj in enumerate(paulis):
            tij = np.trace(rho @ np.kron(si, sj)).real / 4.0
            if abs(tij) < 1e-15:
                continue
            for (ci, pi), (cj, pj) in itertools.product(halves[i], halves[j]):
                terms.append((tij * ci * cj, pi, pj))
    return SeparableDecomposition(terms)
