"""Small-dimension complex linear algebra for finite spin systems.

States and density operators carry the dimensions of their tensor factors.
Factor 0 is always the slowest-varying Kronecker index, so the two-spin ket
``|+,-⟩`` is basis index 1 and ``|-,+⟩`` is index 2. ``|+⟩`` is the
``σz = +1`` eigenvector (index 0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-10
MAX_STATE_DIM = 2**12
MAX_DENSE_DIM = 2**10
MAX_EIG_DIM = 2**6

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SX, "y": SY, "z": SZ}

KET_UP = np.array([1, 0], dtype=complex)
KET_DOWN = np.array([0, 1], dtype=complex)


class DimensionError(ValueError):
    """Raised when a dimension is inconsistent or above the supported cap."""


def _check_factor_dims(dim: int, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionError(f"factor dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != dim:
        raise DimensionError(f"factor dims {dims} do not multiply to {dim}")
    return dims


@dataclass(frozen=True, eq=False)
class StateVector:
    """Ket on a tensor product of finite spaces."""

    amps: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, amps, dims: Sequence[int] | None = None):
        amps = np.array(amps, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        if amps.size == 0:
            raise DimensionError("empty state vector")
        if amps.size > MAX_STATE_DIM:
            raise DimensionError(f"state dimension {amps.size} exceeds cap {MAX_STATE_DIM}")
        dims = (amps.size,) if dims is None else dims
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "dims", _check_factor_dims(amps.size, dims))

    @classmethod
    def qubits(cls, amps) -> "StateVector":
        amps = np.asarray(amps)
        n = int(round(np.log2(amps.size)))
        if 2**n != amps.size:
            raise DimensionError(f"{amps.size} is not a power of two")
        return cls(amps, (2,) * n)

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalize(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amps / nrm, self.dims)

    def inner(self, other: "StateVector") -> complex:
        """⟨self|other⟩."""
        return complex(np.vdot(self.amps, as_vector(other)))

    def to_density(self) -> "DensityOp":
        return DensityOp(np.outer(self.amps, self.amps.conj()), self.dims)

    def __repr__(self) -> str:
        return f"StateVector(dims={self.dims}, amps={np.array2string(self.amps, precision=4)})"


@dataclass(frozen=True, eq=False)
class DensityOp:
    """Density operator with declared tensor factors.

    Construction does not check positivity; call :meth:`validate` for that.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, matrix, dims: Sequence[int] | None = None):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density operator must be square, got shape {m.shape}")
        if m.shape[0] > MAX_DENSE_DIM:
            raise DimensionError(f"operator dimension {m.shape[0]} exceeds cap {MAX_DENSE_DIM}")
        m.setflags(write=False)
        dims = (m.shape[0],) if dims is None else dims
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", _check_factor_dims(m.shape[0], dims))

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> "DensityOp":
        d = int(np.prod(dims))
        return cls(np.eye(d) / d, dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def validate(self, tol: float = DEFAULT_TOL) -> "DensityOp":
        if not is_hermitian(self.matrix, tol):
            raise ValueError("density operator is not Hermitian")
        if abs(self.trace() - 1) > tol:
            raise ValueError(f"density operator trace {self.trace():.6g} != 1")
        lo = float(np.linalg.eigvalsh(self.matrix).min())
        if lo < -tol:
            raise ValueError(f"density operator has negative eigenvalue {lo:.3g}")
        return self

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        try:
            self.validate(tol)
        except ValueError:
            return False
        return True

    def __repr__(self) -> str:
        return f"DensityOp(dims={self.dims})"


def as_vector(x) -> np.ndarray:
    return x.amps if isinstance(x, StateVector) else np.asarray(x, dtype=complex)


def as_matrix(x) -> np.ndarray:
    if isinstance(x, DensityOp):
        return x.matrix
    if isinstance(x, StateVector):
        return np.outer(x.amps, x.amps.conj())
    return np.asarray(x, dtype=complex)


def to_density(state) -> DensityOp:
    if isinstance(state, DensityOp):
        return state
    if isinstance(state, StateVector):
        return state.to_density()
    raise TypeError(f"expected StateVector or DensityOp, got {type(state).__name__}")


# ---------------------------------------------------------------- predicates

def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and np.allclose(m, m.conj().T, rtol=0, atol=tol)


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and np.allclose(m @ m.conj().T, np.eye(m.shape[0]), rtol=0, atol=tol)


def is_projector(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    return is_hermitian(m, tol) and np.allclose(m @ m, m, rtol=0, atol=tol)


def check_projector_set(projs: Sequence[np.ndarray], tol: float = DEFAULT_TOL) -> None:
    """Raise unless ``projs`` are orthogonal projectors resolving the identity."""
    if len(projs) == 0:
        raise ValueError("empty projector set")
    d = projs[0].shape[0]
    for k, p in enumerate(projs):
        if p.shape != (d, d):
            raise DimensionError(f"projector {k} has shape {p.shape}, expected {(d, d)}")
        if not is_projector(p, tol):
            raise ValueError(f"element {k} is not a Hermitian idempotent projector")
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            if not np.allclose(projs[i] @ projs[j], 0, atol=tol):
                raise ValueError(f"projectors {i} and {j} are not orthogonal")
    if not np.allclose(sum(projs), np.eye(d), atol=tol):
        raise ValueError("projectors do not sum to the identity")


# ---------------------------------------------------------------- builders

def ket(*labels: str) -> StateVector:
    """Product ket from ``'+'``/``'-'`` labels, e.g. ``ket('+', '-')``."""
    lookup = {"+": KET_UP, "-": KET_DOWN, "0": KET_UP, "1": KET_DOWN}
    return StateVector(reduce(np.kron, [lookup[s] for s in labels]), (2,) * len(labels))


def projector(v) -> np.ndarray:
    v = as_vector(v)
    return np.outer(v, v.conj())


def tensor(*factors):
    """Kronecker product; the first factor is the slowest-varying index.

    Works on :class:`StateVector`, :class:`DensityOp` or plain arrays and
    returns the same kind as the first argument.
    """
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    head = factors[0]
    if isinstance(head, StateVector):
        if not all(isinstance(f, StateVector) for f in factors):
            raise TypeError("cannot mix StateVector with other kinds")
        dims = sum((f.dims for f in factors), ())
        return StateVector(reduce(np.kron, [f.amps for f in factors]), dims)
    if isinstance(head, DensityOp):
        if not all(isinstance(f, DensityOp) for f in factors):
            raise TypeError("cannot mix DensityOp with other kinds")
        dims = sum((f.dims for f in factors), ())
        return DensityOp(reduce(np.kron, [f.matrix for f in factors]), dims)
    return reduce(np.kron, [np.asarray(f, dtype=complex) for f in factors])


def site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """Embed a single-qubit operator at ``site`` of an ``n``-qubit register."""
    return tensor(*[op if k == site else I2 for k in range(n)])


def apply_local(amps: np.ndarray, ops: Sequence[np.ndarray | None], dims: Sequence[int]) -> np.ndarray:
    """Apply one operator per factor without building the full Kronecker matrix."""
    psi = np.asarray(amps, dtype=complex).reshape(dims)
    for k, op in enumerate(ops):
        if op is None:
            continue
        psi = np.moveaxis(np.tensordot(op, psi, axes=([1], [k])), 0, k)
    return psi.reshape(-1)


# ---------------------------------------------------------------- eigensolver

def eig_hermitian(h, tol: float = 1e-13, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi diagonalisation of a Hermitian matrix.

    Returns ascending real eigenvalues and a unitary whose columns are the
    matching eigenvectors. Iterates until the off-diagonal Frobenius norm is
    below ``tol`` times ``max(1, ||h||)``.
    """
    a = as_matrix(h).astype(complex, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"expected a square matrix, got {a.shape}")
    if n > MAX_EIG_DIM:
        raise DimensionError(f"dimension {n} exceeds eigensolver cap {MAX_EIG_DIM}")
    if not is_hermitian(a, DEFAULT_TOL):
        raise ValueError("eig_hermitian requires a Hermitian matrix")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    def off_norm() -> float:
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    for _ in range(max_sweeps):
        if off_norm() < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                # Rotate the phase away, then a real symmetric Jacobi rotation.
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        if off_norm() >= threshold:
            raise RuntimeError("Jacobi iteration did not converge")

    evals = np.diag(a).real.copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def spectral_projectors(o, tol: float = 1e-9) -> tuple[np.ndarray, list[np.ndarray]]:
    """Distinct eigenvalues of a Hermitian operator and their projectors.

    Eigenvalues closer than ``tol`` to their sorted neighbour share a cluster.
    """
    evals, vecs = eig_hermitian(o)
    groups: list[list[int]] = [[0]]
    for k in range(1, len(evals)):
        if evals[k] - evals[groups[-1][-1]] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    values = np.array([evals[g].mean() for g in groups])
    projs = [vecs[:, g] @ vecs[:, g].conj().T for g in groups]
    return values, projs


def hermitian_function(h, f) -> np.ndarray:
    evals, vecs = eig_hermitian(h)
    return (vecs * f(evals)) @ vecs.conj().T


def evolution_operator(hamiltonian, t: float) -> np.ndarray:
    """``exp(-i H t)`` through the Jacobi eigendecomposition."""
    return hermitian_function(hamiltonian, lambda e: np.exp(-1j * e * t))


# ---------------------------------------------------------------- traces

def partial_trace(state, keep: Iterable[int], dims: Sequence[int] | None = None) -> DensityOp:
    """Reduced density operator on the factors listed in ``keep`` (0-based).

    Accepts a pure :class:`StateVector` (contracted directly, without forming
    the full projector) or a :class:`DensityOp`. Kept factors stay in their
    original order.
    """
    if dims is None:
        if not isinstance(state, (StateVector, DensityOp)):
            raise DimensionError("plain arrays need explicit factor dims")
        dims = state.dims
    dims = tuple(dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must be non-empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"keep {keep} out of range for {n} factors")
    drop = [k for k in range(n) if k not in keep]
    kept_dims = tuple(dims[k] for k in keep)
    dk = int(np.prod(kept_dims))

    pure = isinstance(state, StateVector) or (
        not isinstance(state, DensityOp) and np.ndim(state) == 1
    )
    if pure:
        psi = as_vector(state).reshape(dims)
        psi = np.transpose(psi, keep + drop).reshape(dk, -1)
        return DensityOp(psi @ psi.conj().T, kept_dims)

    rho = as_matrix(state).reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters):
        raise DimensionError("too many factors")
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for k in drop:
        col[k] = row[k]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    red = np.einsum("".join(row) + "".join(col) + "->" + out, rho)
    return DensityOp(red.reshape(dk, dk), kept_dims)


def measure_probs(state, projs: Sequence[np.ndarray], tol: float = DEFAULT_TOL) -> np.ndarray:
    """Born probabilities ``Tr{P ρ P}`` for a complete orthogonal projector set."""
    projs = [np.asarray(p, dtype=complex) for p in projs]
    check_projector_set(projs, tol)
    if isinstance(state, StateVector):
        psi = state.amps
        probs = np.array([np.vdot(p @ psi, p @ psi).real for p in projs])
    else:
        rho = as_matrix(state)
        probs = np.array([np.trace(p @ rho @ p).real for p in projs])
    return probs


def expectation(state, op) -> complex:
    op = as_matrix(op)
    if isinstance(state, StateVector):
        return complex(np.vdot(state.amps, op @ state.amps))
    return complex(np.trace(as_matrix(state) @ op))


# ---------------------------------------------------------------- random draws

def random_state(rng: np.random.Generator, dims: Sequence[int]) -> StateVector:
    d = int(np.prod(dims))
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    return StateVector(z / np.linalg.norm(z), dims)


def random_density(rng: np.random.Generator, dims: Sequence[int], rank: int | None = None) -> DensityOp:
    """Ginibre-ensemble density operator (full rank unless ``rank`` is given)."""
    d = int(np.prod(dims))
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return DensityOp(rho / np.trace(rho).real, dims)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (z + z.conj().T)


# ---------------------------------------------------------------- debug dump

def matrix_to_pairs(m) -> list:
    """Row-major nested list of ``[re, im]`` pairs."""
    m = np.atleast_1d(np.asarray(m, dtype=complex))
    if m.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in m]
    return [matrix_to_pairs(row) for row in m]


def pairs_to_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("expected trailing [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def dump_json(m) -> str:
    return json.dumps(matrix_to_pairs(as_matrix(m) if not isinstance(m, StateVector) else m.amps))
