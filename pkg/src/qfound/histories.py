"""Sequential-measurement probabilities and families of histories.

A history picks one projector per time. Its probability is the trace of
``C ρ₀ C†`` with the class operator ``C = P̂ₙ … P̂₂ P̂₁`` built from
Heisenberg-picture projectors ``P̂ = U†(t, t₀) P U(t, t₀)``. A family is
consistent when the off-diagonal elements ``Tr{C_h ρ₀ C_h'†}`` all vanish,
which is what makes probabilities additive under coarse-graining.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .linalg import (
    DensityOp,
    MAX_EIG_DIM,
    as_matrix,
    as_vector,
    check_projector_set,
    eig_hermitian,
    is_projector,
    is_unitary,
    matrix_to_pairs,
    partial_trace,
)

MAX_HISTORIES = 10**6
MAX_PAIR_HISTORIES = 2048
MAX_CLASS_ELEMENTS = 2**22


class FamilySpecError(ValueError):
    """Malformed or unreadable family document."""


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Measurement times and the propagator for each interval.

    ``unitaries[i]`` evolves the system from the previous time (the
    preparation time for ``i = 0``) to ``times[i]``.
    """

    times: tuple[float, ...]
    unitaries: tuple[np.ndarray, ...]

    def __init__(self, times: Sequence[float], unitaries: Sequence[np.ndarray] | None = None, dim: int | None = None):
        times = tuple(float(t) for t in times)
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("times must be strictly increasing")
        if unitaries is None:
            if dim is None:
                raise ValueError("give unitaries or a dimension for identity evolution")
            unitaries = [np.eye(dim)] * len(times)
        unitaries = tuple(np.array(u, dtype=complex) for u in unitaries)
        if len(unitaries) != len(times):
            raise ValueError("need one unitary per time")
        for k, u in enumerate(unitaries):
            if not is_unitary(u, 1e-12):
                raise ValueError(f"unitary {k} is not unitary within 1e-12")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "unitaries", unitaries)

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]

    def __len__(self) -> int:
        return len(self.times)

    def cumulative(self) -> list[np.ndarray]:
        """U(tᵢ, t₀) for every time."""
        out, acc = [], np.eye(self.dim, dtype=complex)
        for u in self.unitaries:
            acc = u @ acc
            out.append(acc)
        return out

    def heisenberg(self, k: int, proj: np.ndarray) -> np.ndarray:
        u = self.cumulative()[k]
        return u.conj().T @ proj @ u


@dataclass(frozen=True, eq=False)
class HistoryFamily:
    """Schrödinger-picture projector sets, one complete set per time."""

    grid: TimeGrid
    projector_sets: tuple[tuple[np.ndarray, ...], ...]
    rho0: DensityOp
    tol: float = field(default=1e-12)

    def __post_init__(self):
        sets = tuple(tuple(np.array(p, dtype=complex) for p in ps) for ps in self.projector_sets)
        if len(sets) != len(self.grid):
            raise ValueError("need one projector set per time")
        for ps in sets:
            check_projector_set(list(ps), self.tol)
        if self.rho0.dim != self.grid.dim:
            raise ValueError("rho0 and evolution dimensions differ")
        object.__setattr__(self, "projector_sets", sets)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(ps) for ps in self.projector_sets)

    def histories(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(n) for n in self.shape)))

    def heisenberg_sets(self) -> list[list[np.ndarray]]:
        cum = self.grid.cumulative()
        return [[u.conj().T @ p @ u for p in ps] for u, ps in zip(cum, self.projector_sets)]


def _check_size(family: HistoryFamily, limit: int = MAX_HISTORIES) -> int:
    count = int(np.prod(family.shape))
    if count > limit:
        raise ValueError(f"{count} histories exceed the limit of {limit}")
    if count * family.grid.dim**2 > MAX_CLASS_ELEMENTS:
        raise ValueError("class operators would not fit in memory")
    return count


def class_operator(grid: TimeGrid, projectors: Sequence[np.ndarray]) -> np.ndarray:
    if len(projectors) != len(grid):
        raise ValueError("need one projector per time")
    c = np.eye(grid.dim, dtype=complex)
    for u, p in zip(grid.cumulative(), projectors):
        p = as_matrix(p)
        if not is_projector(p, 1e-10):
            raise ValueError("history element is not a projector")
        c = (u.conj().T @ p @ u) @ c
    return c


def sequence_prob(rho0, grid: TimeGrid, projectors: Sequence[np.ndarray]) -> float:
    """Tr{… P̂₂ P̂₁ ρ₀ P̂₁ P̂₂ …}."""
    c = class_operator(grid, projectors)
    return float(np.trace(c @ as_matrix(rho0) @ c.conj().T).real)


def sequence_prob_pure(psi0, grid: TimeGrid, projectors: Sequence[np.ndarray]) -> float:
    """Evolve, project, evolve, project …; squared norm of what is left.

    Intermediate slices are never renormalised.
    """
    psi = as_vector(psi0).astype(complex)
    for u, p in zip(grid.unitaries, projectors):
        psi = as_matrix(p) @ (u @ psi)
    return float(np.vdot(psi, psi).real)


def _class_operators(family: HistoryFamily) -> np.ndarray:
    """Class operators for every history, in :meth:`HistoryFamily.histories` order."""
    _check_size(family)
    ops = np.eye(family.grid.dim, dtype=complex)[None]
    for ps in family.heisenberg_sets():
        stack = np.stack(ps)
        ops = np.einsum("jab,hbc->hjac", stack, ops).reshape(-1, *ops.shape[1:])
    return ops


def family_probabilities(family: HistoryFamily) -> dict[tuple[int, ...], float]:
    ops = _class_operators(family)
    probs = np.einsum("hab,bc,hac->h", ops, family.rho0.matrix, ops.conj()).real
    return dict(zip(family.histories(), probs.tolist()))


def decoherence_functional(family: HistoryFamily) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """All ``D[h, h'] = Tr{C_h ρ₀ C_h'†}``; the diagonal holds the probabilities."""
    _check_size(family, MAX_PAIR_HISTORIES)
    ops = _class_operators(family)
    h = len(ops)
    left = (ops @ family.rho0.matrix).reshape(h, -1)
    right = ops.reshape(h, -1)
    return family.histories(), left @ right.conj().T


class ConsistencyReport(NamedTuple):
    max_violation: float
    worst_pair: tuple[tuple[int, ...], tuple[int, ...]] | None
    table: np.ndarray
    histories: list[tuple[int, ...]]
    mode: str


def consistency_matrix(family: HistoryFamily, mode: str = "strong") -> ConsistencyReport:
    """Largest off-diagonal decoherence-functional element.

    ``strong`` measures the complex modulus, ``weak`` only the real part.
    Pairs involving zero-probability histories are included.
    """
    if mode not in ("strong", "weak"):
        raise ValueError("mode must be 'strong' or 'weak'")
    hist, d = decoherence_functional(family)
    off = d - np.diag(np.diag(d))
    mag = np.abs(off) if mode == "strong" else np.abs(off.real)
    if len(hist) < 2:
        return ConsistencyReport(0.0, None, d, hist, mode)
    i, j = np.unravel_index(np.argmax(mag), mag.shape)
    return ConsistencyReport(float(mag[i, j]), (hist[i], hist[j]), d, hist, mode)


def build_consistent_family(rho0, grid: TimeGrid) -> HistoryFamily:
    """Project at every time onto the evolved eigenvectors of ρ₀.

    The Heisenberg projectors are then ``|φₙ⟩⟨φₙ|`` at all times, so only
    histories with the same index at every time carry weight.
    """
    rho = as_matrix(rho0)
    if rho.shape[0] > MAX_EIG_DIM:
        raise ValueError(f"dimension above {MAX_EIG_DIM}")
    _, vecs = eig_hermitian(rho)
    sets = []
    for u in grid.cumulative():
        evolved = u @ vecs
        sets.append(tuple(np.outer(evolved[:, n], evolved[:, n].conj()) for n in range(rho.shape[0])))
    rho_op = rho0 if isinstance(rho0, DensityOp) else DensityOp(rho)
    return HistoryFamily(grid, tuple(sets), rho_op)


def _check_grouping(family: HistoryFamily, grouping) -> list[list[list[int]]]:
    if len(grouping) != len(family.grid):
        raise ValueError("grouping needs one partition per time")
    out = []
    for k, (groups, n) in enumerate(zip(grouping, family.shape)):
        groups = [sorted(int(i) for i in g) for g in groups]
        flat = sorted(i for g in groups for i in g)
        if flat != list(range(n)) or any(len(g) == 0 for g in groups):
            raise ValueError(f"grouping at time {k} is not a partition of 0..{n - 1}")
        out.append(groups)
    return out


def coarse_grain(family: HistoryFamily, grouping) -> HistoryFamily:
    """Merge projectors at each time according to a partition of their indices."""
    groups = _check_grouping(family, grouping)
    sets = tuple(
        tuple(sum(ps[i] for i in g) for g in gs) for ps, gs in zip(family.projector_sets, groups)
    )
    return HistoryFamily(family.grid, sets, family.rho0, family.tol)


class AdditivityRow(NamedTuple):
    history: tuple[int, ...]
    probability: float
    parent_sum: float
    delta: float
    cross_terms: float


def additivity_report(family: HistoryFamily, grouping) -> list[AdditivityRow]:
    """Compare each coarse-grained history with the sum over its parents.

    ``cross_terms`` sums ``Re D(h, h')`` over unordered pairs of distinct
    parents, so ``delta = 2 * cross_terms`` identically.
    """
    groups = _check_grouping(family, grouping)
    daughter = coarse_grain(family, grouping)
    dprobs = family_probabilities(daughter)
    hist, d = decoherence_functional(family)
    index = {h: k for k, h in enumerate(hist)}
    rows = []
    for dh, p in dprobs.items():
        parents = [index[h] for h in itertools.product(*(groups[t][g] for t, g in enumerate(dh)))]
        parent_sum = float(sum(d[k, k].real for k in parents))
        cross = float(sum(d[a, b].real for a, b in itertools.combinations(parents, 2)))
        rows.append(AdditivityRow(dh, p, parent_sum, p - parent_sum, cross))
    return rows


class Interference(NamedTuple):
    amplitude_sum: float
    probability_sum: float
    crossed: float


def degenerate_interference(rho0, pieces: Sequence[np.ndarray], final_projector: np.ndarray, env_states=None) -> Interference:
    """First measurement onto a degenerate subspace spanned by ``pieces``.

    ``amplitude_sum`` uses the full projector ``Σ|φi⟩⟨φi|``,
    ``probability_sum`` adds the rank-1 contributions separately. With
    ``env_states`` each piece is first correlated with its own environment
    ket, the environment is traced out, and the full-projector probability
    is recomputed on what remains.
    """
    rho = as_matrix(rho0)
    phis = [as_vector(p) for p in pieces]
    rank1 = [np.outer(p, p.conj()) for p in phis]
    big = sum(rank1)
    p2 = as_matrix(final_projector)
    prob_sum = float(sum(np.trace(p2 @ q @ rho @ q @ p2).real for q in rank1))
    if env_states is None:
        amp = float(np.trace(p2 @ big @ rho @ big @ p2).real)
        return Interference(amp, prob_sum, amp - prob_sum)

    env = [as_vector(e) for e in env_states]
    if len(env) != len(phis):
        raise ValueError("one environment state per piece")
    d, e = rho.shape[0], env[0].size
    record = sum(np.kron(q, e_k.reshape(e, 1)) for q, e_k in zip(rank1, env))  # (d·e) × d
    joint = record @ rho @ record.conj().T
    proj = np.kron(p2 @ big, np.eye(e))
    after = proj @ joint @ proj.conj().T
    system = partial_trace(DensityOp(after, (d, e)), [0]).matrix
    amp = float(np.trace(system).real)
    return Interference(amp, prob_sum, amp - prob_sum)


# ---------------------------------------------------------------- JSON documents

def _parse_matrix(data, what: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FamilySpecError(f"{what}: not a numeric matrix") from exc
    if arr.ndim == 3 and arr.shape[-1] == 2:
        arr = arr[..., 0] + 1j * arr[..., 1]
    elif arr.ndim != 2:
        raise FamilySpecError(f"{what}: expected a square matrix of numbers or [re, im] pairs")
    if arr.shape[0] != arr.shape[1]:
        raise FamilySpecError(f"{what}: matrix is not square")
    return arr.astype(complex)


def family_from_dict(doc: dict) -> HistoryFamily:
    """Build a family from ``{times, rho0, unitaries?, projector_sets}``."""
    try:
        rho0 = _parse_matrix(doc["rho0"], "rho0")
        times = doc["times"]
        sets = [[_parse_matrix(p, f"projector_sets[{i}][{j}]") for j, p in enumerate(ps)] for i, ps in enumerate(doc["projector_sets"])]
    except KeyError as exc:
        raise FamilySpecError(f"missing key {exc.args[0]!r}") from None
    unitaries = doc.get("unitaries")
    if unitaries is not None:
        unitaries = [_parse_matrix(u, f"unitaries[{i}]") for i, u in enumerate(unitaries)]
    try:
        grid = TimeGrid(times, unitaries, dim=rho0.shape[0])
        return HistoryFamily(grid, tuple(tuple(ps) for ps in sets), DensityOp(rho0).validate(1e-10))
    except ValueError as exc:
        raise FamilySpecError(str(exc)) from exc


def load_family(text: str) -> HistoryFamily:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilySpecError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FamilySpecError("family document must be a JSON object")
    return family_from_dict(doc)


def family_to_dict(family: HistoryFamily) -> dict:
    return {
        "times": list(family.grid.times),
        "rho0": matrix_to_pairs(family.rho0.matrix),
        "unitaries": [matrix_to_pairs(u) for u in family.grid.unitaries],
        "projector_sets": [[matrix_to_pairs(p) for p in ps] for ps in family.projector_sets],
    }


def sigma_x_then_z_family() -> HistoryFamily:
    """Qubit prepared in |0⟩, σx basis at t₁ then σz basis at t₂, no evolution."""
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    x_set = (np.outer(plus, plus).astype(complex), np.outer(minus, minus).astype(complex))
    z_set = (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))
    rho0 = DensityOp(np.diag([1.0, 0.0]))
    return HistoryFamily(TimeGrid([1.0, 2.0], dim=2), (x_set, z_set), rho0)
