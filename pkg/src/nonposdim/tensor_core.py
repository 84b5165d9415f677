"""Dense complex linear algebra on tensor-product spaces.

Everything here works with plain square numpy arrays tagged with a tuple of
subsystem dimensions.  The flat-index convention is row-major: the basis
vector |i_1,...,i_p> sits at flat index sum_k i_k * prod_{l>k} d_l, i.e. the
leftmost subsystem is the most significant digit.  This matches numpy's
``kron`` and C-order ``reshape``, so partial traces/transposes are plain axis
manipulations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Relative tolerance for "is Hermitian" checks.
EPS_HERM = 1e-10
# Relative threshold below which an eigenvalue counts as zero in inertia().
EPS_NEG = 1e-9


class DimensionError(ValueError):
    """Subsystem dimensions do not match the operation's requirements."""


class NotHermitianError(ValueError):
    """A Hermitian matrix was required but the input is not Hermitian."""


@dataclass(frozen=True)
class HermOp:
    """A square complex matrix tagged with subsystem dimensions.

    Carrier of density matrices, witnesses, and Choi matrices.  The matrix is
    not required to be Hermitian at construction time (differences of maps
    produce non-Hermitian intermediates); operations that need Hermiticity
    check it themselves.
    """

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if any(d < 1 for d in dims):
            raise DimensionError(f"subsystem dimensions must be >= 1, got {dims}")
        mat = np.asarray(self.mat, dtype=complex)
        total = int(np.prod(dims))
        if mat.shape != (total, total):
            raise DimensionError(
                f"matrix shape {mat.shape} does not match dims {dims} (total {total})"
            )
        object.__setattr__(self, "mat", mat)
        self.mat.setflags(write=False)

    @property
    def total(self) -> int:
        return self.mat.shape[0]

    @property
    def nsub(self) -> int:
        return len(self.dims)

    def is_hermitian(self, eps: float = EPS_HERM) -> bool:
        scale = max(1.0, operator_norm(self.mat))
        return float(np.abs(self.mat - self.mat.conj().T).max()) <= eps * scale

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "re": self.mat.real.tolist(),
            "im": self.mat.imag.tolist(),
        }

    @staticmethod
    def from_json(obj: dict) -> "HermOp":
        mat = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
        return HermOp(tuple(obj["dims"]), mat)


@dataclass(frozen=True)
class Inertia:
    """Eigenvalue sign counts of a Hermitian matrix."""

    n_neg: int
    n_zero: int
    n_pos: int
    tolerance: float

    @property
    def side(self) -> int:
        return self.n_neg + self.n_zero + self.n_pos


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, HermOp):
        return x.mat
    return np.asarray(x, dtype=complex)


def kron(a, b) -> np.ndarray:
    """Kronecker product under the row-major flat-index convention."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def _check_subsystems(op: HermOp, subs: Iterable[int]) -> list[int]:
    subs = sorted(set(int(s) for s in subs))
    for s in subs:
        if not 1 <= s <= op.nsub:
            raise DimensionError(f"subsystem index {s} out of range 1..{op.nsub}")
    return subs


def partial_trace(op: HermOp, keep: Iterable[int]) -> HermOp:
    """Trace out every subsystem not in ``keep`` (1-based indices)."""
    keep = _check_subsystems(op, keep)
    if not keep:
        raise DimensionError("must keep at least one subsystem")
    p = op.nsub
    tensor = op.mat.reshape(op.dims + op.dims)
    # Contract row axis k-1 with column axis p+k-1 for each dropped subsystem.
    dropped = [k for k in range(1, p + 1) if k not in keep]
    for k in sorted(dropped, reverse=True):
        tensor = np.trace(tensor, axis1=k - 1, axis2=tensor.ndim // 2 + k - 1)
    new_dims = tuple(op.dims[k - 1] for k in keep)
    total = int(np.prod(new_dims))
    return HermOp(new_dims, tensor.reshape(total, total))


def partial_transpose(op: HermOp, sub: int) -> HermOp:
    """Transpose the ``sub``-th tensor factor (1-based); an exact involution."""
    if not 1 <= sub <= op.nsub:
        raise DimensionError(f"subsystem index {sub} out of range 1..{op.nsub}")
    p = op.nsub
    tensor = op.mat.reshape(op.dims + op.dims)
    tensor = np.swapaxes(tensor, sub - 1, p + sub - 1)
    return HermOp(op.dims, tensor.reshape(op.total, op.total))


def _require_hermitian(op: HermOp):
    if not op.is_hermitian():
        raise NotHermitianError("matrix is not Hermitian within tolerance")


def herm_eigs(op: HermOp) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    _require_hermitian(op)
    return np.linalg.eigvalsh(op.mat)


def herm_eig_decomp(op: HermOp) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and matching eigenvector columns."""
    _require_hermitian(op)
    return np.linalg.eigh(op.mat)


def inertia(op: HermOp, eps_neg: float = EPS_NEG) -> Inertia:
    """Count eigenvalues below/within/above the relative threshold eps_neg."""
    vals = herm_eigs(op)
    tau = eps_neg * max(1.0, float(np.abs(vals).max(initial=0.0)))
    n_neg = int(np.count_nonzero(vals < -tau))
    n_pos = int(np.count_nonzero(vals > tau))
    return Inertia(n_neg=n_neg, n_zero=len(vals) - n_neg - n_pos, n_pos=n_pos, tolerance=tau)


def trace_norm(m) -> float:
    """Sum of singular values."""
    return float(np.linalg.norm(_as_matrix(m), ord="nuc"))


def operator_norm(m) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(_as_matrix(m), ord=2))


def vec_row_major(a) -> np.ndarray:
    """Concatenate the rows of a matrix into one vector."""
    return _as_matrix(a).reshape(-1)


def projection_from_span(vectors: Sequence[np.ndarray], dims: tuple[int, ...] | None = None) -> HermOp:
    """Orthogonal projection onto the span of the given vectors."""
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if not vecs:
        raise DimensionError("cannot project onto an empty span")
    a = np.column_stack(vecs)
    q, r = np.linalg.qr(a)
    # Drop columns corresponding to (numerically) dependent input vectors.
    keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, float(np.abs(r).max()))
    q = q[:, keep]
    if q.shape[1] == 0:
        raise DimensionError("span of the given vectors is zero-dimensional")
    p = q @ q.conj().T
    if dims is None:
        dims = (p.shape[0],)
    return HermOp(dims, p)


def orthonormal_basis(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Columns forming an orthonormal basis of the span of ``vectors``."""
    a = np.column_stack([np.asarray(v, dtype=complex).reshape(-1) for v in vectors])
    q, r = np.linalg.qr(a)
    keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, float(np.abs(r).max()))
    return q[:, keep]


def random_hermitian(n: int, rng: np.random.Generator) -> HermOp:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermOp((n,), (g + g.conj().T) / 2)
