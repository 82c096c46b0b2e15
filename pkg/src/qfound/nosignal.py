"""What a distant observer B sees does not depend on what A chose to measure.

B's statistics come from ``ρ_B``, obtained by summing ``⟨θ_k|ρ|θ_k⟩`` over
any orthonormal basis ``{|θ_k⟩}`` of A's space. Choosing the eigenbasis of
A's observable changes nothing, and neither does summing the joint
sequential probabilities over A's results.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .histories import TimeGrid, sequence_prob
from .linalg import (
    DensityOp,
    DimensionError,
    as_matrix,
    eig_hermitian,
    is_hermitian,
    is_unitary,
    partial_trace,
    spectral_projectors,
)


def _bipartite(rho, dims: Sequence[int] | None) -> tuple[np.ndarray, int, int]:
    if dims is None:
        dims = getattr(rho, "dims", None)
    mat = as_matrix(rho)
    if dims is None or len(dims) != 2:
        raise DimensionError("need a bipartite state with dims (d_A, d_B)")
    d_a, d_b = (int(d) for d in dims)
    if d_a * d_b != mat.shape[0]:
        raise DimensionError(f"dims {d_a}x{d_b} do not match a {mat.shape[0]}-dim state")
    return mat, d_a, d_b


def _hermitian(o, d: int, name: str) -> np.ndarray:
    o = as_matrix(o)
    if o.shape != (d, d):
        raise DimensionError(f"{name} has shape {o.shape}, expected ({d}, {d})")
    if not is_hermitian(o, 1e-12):
        raise ValueError(f"{name} is not Hermitian")
    return o


def reduced_by_summation(rho, basis: np.ndarray, dims: Sequence[int] | None = None) -> np.ndarray:
    """ρ_B = Σ_k ⟨θ_k|ρ|θ_k⟩ with the columns of ``basis`` as the |θ_k⟩."""
    mat, d_a, d_b = _bipartite(rho, dims)
    basis = as_matrix(basis)
    if basis.shape != (d_a, d_a):
        raise DimensionError(f"basis must be {d_a}x{d_a}")
    if not is_unitary(basis, 1e-12):
        raise ValueError("basis is not orthonormal within 1e-12")
    blocks = mat.reshape(d_a, d_b, d_a, d_b)
    rho_b = np.zeros((d_b, d_b), dtype=complex)
    for k in range(d_a):
        theta = basis[:, k]
        rho_b += np.einsum("i,ijkl,k->jl", theta.conj(), blocks, theta)
    return rho_b


class Marginal(NamedTuple):
    values: np.ndarray
    probs: np.ndarray


def reduced_probabilities(rho, o_a, o_b, dims: Sequence[int] | None = None) -> Marginal:
    """B's outcome distribution, with ρ_B summed in the eigenbasis of ``o_a``.

    Degenerate eigenvalues of ``o_b`` are grouped within 1e-9.
    """
    _, d_a, d_b = _bipartite(rho, dims)
    o_a = _hermitian(o_a, d_a, "o_a")
    o_b = _hermitian(o_b, d_b, "o_b")
    _, basis = eig_hermitian(o_a)
    rho_b = reduced_by_summation(rho, basis, (d_a, d_b))
    values, projs = spectral_projectors(o_b)
    return Marginal(values, np.array([np.trace(q @ rho_b).real for q in projs]))


def joint_sum_marginal(rho, o_a, o_b, dims: Sequence[int] | None = None) -> Marginal:
    """Measure A then B (no evolution) and sum the joint probabilities over A."""
    mat, d_a, d_b = _bipartite(rho, dims)
    o_a = _hermitian(o_a, d_a, "o_a")
    o_b = _hermitian(o_b, d_b, "o_b")
    _, pa = spectral_projectors(o_a)
    values, pb = spectral_projectors(o_b)
    grid = TimeGrid([1.0, 2.0], dim=d_a * d_b)
    eye_a, eye_b = np.eye(d_a), np.eye(d_b)
    probs = np.array([
        sum(sequence_prob(mat, grid, [np.kron(p, eye_b), np.kron(eye_a, q)]) for p in pa)
        for q in pb
    ])
    return Marginal(values, probs)


class NoSignalReport(NamedTuple):
    marginals: list[np.ndarray]
    max_path_discrepancy: float
    max_choice_discrepancy: float
    reference: np.ndarray
    ok: bool


def no_signaling_check(rho, o_a_choices: Sequence, o_b, dims: Sequence[int] | None = None, tol: float = 1e-12) -> NoSignalReport:
    """B's marginal for each of A's choices, two ways, compared with no measurement at all."""
    if len(o_a_choices) < 2:
        raise ValueError("need at least two choices for o_a")
    mat, d_a, d_b = _bipartite(rho, dims)
    reference_rho = partial_trace(DensityOp(mat, (d_a, d_b)), [1]).matrix
    _, pb = spectral_projectors(_hermitian(o_b, d_b, "o_b"))
    reference = np.array([np.trace(q @ reference_rho).real for q in pb])
    marginals, path_gap, choice_gap = [], 0.0, 0.0
    for o_a in o_a_choices:
        direct = reduced_probabilities(mat, o_a, o_b, (d_a, d_b)).probs
        summed = joint_sum_marginal(mat, o_a, o_b, (d_a, d_b)).probs
        path_gap = max(path_gap, float(np.abs(direct - summed).max()))
        choice_gap = max(choice_gap, float(np.abs(direct - reference).max()))
        marginals.append(direct)
    return NoSignalReport(marginals, path_gap, choice_gap, reference, path_gap < tol and choice_gap < tol)


class BasisReport(NamedTuple):
    reduced: list[np.ndarray]
    max_discrepancy: float
    max_vs_partial_trace: float


def basis_independence(rho, bases: Sequence[np.ndarray], dims: Sequence[int] | None = None) -> BasisReport:
    mat, d_a, d_b = _bipartite(rho, dims)
    reduced = [reduced_by_summation(mat, b, (d_a, d_b)) for b in bases]
    ref = partial_trace(DensityOp(mat, (d_a, d_b)), [1]).matrix
    spread = max((float(np.abs(r - reduced[0]).max()) for r in reduced), default=0.0)
    vs_ref = max((float(np.abs(r - ref).max()) for r in reduced), default=0.0)
    return BasisReport(reduced, spread, vs_ref)


def commutation_defect(ops_a: Sequence[np.ndarray], ops_b: Sequence[np.ndarray]) -> float:
    """Largest ‖PQ - QP‖ between two projector sets on a single system.

    For a delocalized particle, A's and B's regional projectors must commute
    before the marginal argument applies; feed commuting sets to the
    functions above by writing the space as a product.
    """
    worst = 0.0
    for p in ops_a:
        for q in ops_b:
            p, q = as_matrix(p), as_matrix(q)
            worst = max(worst, float(np.abs(p @ q - q @ p).max()))
    return worst
