"""Multipartite NPT subspace of maximal dimension, constructive certificates
of non-positive partial transpose, and decomposable entanglement witnesses
with the maximum number of negative eigenvalues.

The subspace on C^{d_1} (x) ... (x) C^{d_p} consists of all vectors whose
coordinates sum to zero within every "level" I_s = {i : i_1 + ... + i_p = s}.
Its dimension d_1...d_p - d_1 - ... - d_p + p - 1 meets the maximal possible
dimension of an entangled subspace.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .map_catalog import HPMap, apply, from_action
from .sdp_engine import (
    CERT_MARGIN,
    WitnessResult,
    partial_transpose_transform,
    subspace_witness_sdp,
)
from .tensor_core import (
    HermOp,
    DimensionError,
    partial_transpose,
    projection_from_span,
    vec_row_major,
)


class SupportError(ValueError):
    """A state's support leaks outside the required subspace."""


@dataclass(frozen=True)
class SubspaceBasis:
    dims: tuple[int, ...]
    vectors: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def projection(self) -> HermOp:
        return projection_from_span(self.vectors, dims=self.dims)


@dataclass(frozen=True)
class NptCertificate:
    """A 2x2 principal submatrix of a partial transpose with negative determinant.

    ``subsystem`` is the transposed factor (always < p), ``row_index`` and
    ``col_index`` are the multi-indices (a, b) of the submatrix, obtained from
    the level pair (i', j') by swapping their coordinates at ``subsystem``.
    """

    subsystem: int
    level: int
    i_index: tuple[int, ...]
    j_index: tuple[int, ...]
    row_index: tuple[int, ...]
    col_index: tuple[int, ...]
    submatrix: np.ndarray
    determinant: float

    def to_json(self) -> dict:
        return {
            "subsystem": self.subsystem,
            "level": self.level,
            "i": list(self.i_index),
            "j": list(self.j_index),
            "row": list(self.row_index),
            "col": list(self.col_index),
            "submatrix_re": self.submatrix.real.tolist(),
            "submatrix_im": self.submatrix.imag.tolist(),
            "determinant": self.determinant,
        }


def parthasarathy_dim(dims) -> int:
    """Maximal dimension of an entangled subspace: prod(d) - sum(d) + p - 1."""
    dims = tuple(int(d) for d in dims)
    return int(np.prod(dims)) - sum(dims) + len(dims) - 1


def _levels(dims: tuple[int, ...]) -> list[list[tuple[int, ...]]]:
    """All multi-indices grouped by coordinate sum s = 0 .. sum(d_k - 1)."""
    smax = sum(d - 1 for d in dims)
    levels: list[list[tuple[int, ...]]] = [[] for _ in range(smax + 1)]
    for idx in itertools.product(*(range(d) for d in dims)):
        levels[sum(idx)].append(idx)
    return levels


def npt_subspace_basis(dims) -> SubspaceBasis:
    """Orthonormal basis of the level-sum-zero subspace.

    Within each level the difference vectors e_{i_0} - e_{i_t} span the
    zero-sum slice; different levels have disjoint support, so a per-level
    orthonormalization suffices.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise DimensionError("need at least two subsystems")
    if any(d < 2 for d in dims):
        raise DimensionError("every subsystem dimension must be >= 2")
    total = int(np.prod(dims))
    vectors: list[np.ndarray] = []
    for level in _levels(dims):
        if len(level) < 2:
            continue
        flats = [int(np.ravel_multi_index(idx, dims)) for idx in level]
        diffs = np.zeros((total, len(flats) - 1), dtype=complex)
        for t in range(1, len(flats)):
            diffs[flats[0], t - 1] = 1.0
            diffs[flats[t], t - 1] = -1.0
        q, _ = np.linalg.qr(diffs)
        vectors.extend(q[:, i] for i in range(q.shape[1]))
    basis = SubspaceBasis(dims=dims, vectors=tuple(vectors))
    assert basis.dim == parthasarathy_dim(dims)
    return basis


def is_in_subspace(v: np.ndarray, dims, tol: float = 1e-10) -> bool:
    """Check all level sums vanish relative to the vector norm."""
    dims = tuple(int(d) for d in dims)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape[0] != int(np.prod(dims)):
        raise DimensionError("vector length does not match dims")
    norm = float(np.linalg.norm(v))
    if norm == 0:
        return True
    for level in _levels(dims):
        flats = [int(np.ravel_multi_index(idx, dims)) for idx in level]
        if abs(v[flats].sum()) > tol * norm:
            return False
    return True


def npt_certificate(rho: HermOp, dims=None, support_tol: float = 1e-8) -> NptCertificate:
    """Constructive proof that some partial transpose of rho is non-positive.

    Follows the level structure of the subspace: take the spectral ensemble
    of rho, find the lowest occupied level, pick the largest off-diagonal
    entry (i', j') of that level's Gram matrix, and swap one coordinate where
    i' exceeds j' to land on a 2x2 principal submatrix of the partially
    transposed state with determinant -|Gram entry|^2 < 0.
    """
    dims = tuple(int(d) for d in (dims if dims is not None else rho.dims))
    p = len(dims)
    vals, vecs = np.linalg.eigh(rho.mat)
    keep = vals > 1e-12 * max(1.0, float(vals.max()))
    probs = vals[keep]
    ensemble = vecs[:, keep]
    for col in range(ensemble.shape[1]):
        if not is_in_subspace(ensemble[:, col], dims, tol=support_tol):
            raise SupportError("state support leaks outside the zero-level-sum subspace")

    levels = _levels(dims)
    scale = float(np.abs(ensemble).max())
    coord_tol = 1e-10 * max(1.0, scale)
    star = None
    for s, level in enumerate(levels):
        flats = [int(np.ravel_multi_index(idx, dims)) for idx in level]
        if np.abs(ensemble[flats, :]).max() > coord_tol:
            star = s
            break
    if star is None:
        raise SupportError("state has no support at all")

    level = levels[star]
    flats = np.array([int(np.ravel_multi_index(idx, dims)) for idx in level])
    # Level Gram matrix M_ij = sum_a p_a conj(v^a_i) v^a_j.
    block = ensemble[flats, :]
    gram = (block.conj() * probs) @ block.T
    off = np.abs(gram - np.diag(np.diag(gram)))
    if off.max() <= (coord_tol) ** 2:
        raise SupportError("all off-diagonal level Gram entries vanish; invalid input")
    i_pos, j_pos = np.unravel_index(int(off.argmax()), off.shape)
    i_idx, j_idx = level[i_pos], level[j_pos]

    # Need a coordinate k' < p with i'_{k'} > j'_{k'}; swap roles if the only
    # such coordinate is the last one.
    bigger = [k for k in range(p) if i_idx[k] > j_idx[k]]
    if all(k == p - 1 for k in bigger):
        i_idx, j_idx = j_idx, i_idx
        i_pos, j_pos = j_pos, i_pos
        bigger = [k for k in range(p) if i_idx[k] > j_idx[k]]
    k_prime = min(k for k in bigger if k < p - 1) if any(k < p - 1 for k in bigger) else min(bigger)

    a = list(i_idx)
    b = list(j_idx)
    a[k_prime], b[k_prime] = j_idx[k_prime], i_idx[k_prime]
    a, b = tuple(a), tuple(b)

    transposed = partial_transpose(rho, k_prime + 1)
    fa = int(np.ravel_multi_index(a, dims))
    fb = int(np.ravel_multi_index(b, dims))
    sub = transposed.mat[np.ix_([fa, fb], [fa, fb])]
    det = float((sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]).real)
    if det >= 0:
        raise SupportError("certificate construction failed to produce a negative determinant")
    return NptCertificate(
        subsystem=k_prime + 1,
        level=star,
        i_index=i_idx,
        j_index=j_idx,
        row_index=a,
        col_index=b,
        submatrix=sub,
        determinant=det,
    )


def decomposable_witness(dims) -> WitnessResult:
    """Witness SDP over the first p-1 single-system partial transposes.

    Maximizes c subject to T_1(X_1) + ... + T_{p-1}(X_{p-1}) <= I - cP with
    P projecting onto the zero-level-sum subspace.  The optimum exceeds 1 and
    the resulting witness has exactly prod(d) - sum(d) + p - 1 negative
    eigenvalues; anything else is a hard failure.
    """
    dims = tuple(int(d) for d in dims)
    basis = npt_subspace_basis(dims)
    family = [partial_transpose_transform(dims, j) for j in range(1, len(dims))]
    result = subspace_witness_sdp(basis.projection(), family)
    expected = parthasarathy_dim(dims)
    if result.c_opt < CERT_MARGIN:
        raise RuntimeError(
            f"witness SDP optimum {result.c_opt:.8g} did not exceed 1 for dims {dims}"
        )
    if result.neg_count != expected:
        raise RuntimeError(
            f"witness has {result.neg_count} negative eigenvalues, expected {expected}"
        )
    return result


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits))
    v[int(bits, 2)] = 1.0
    return v


def three_qubit_example() -> tuple[HermOp, HermOp, HermOp]:
    """The explicit 3-qubit decomposable witness with integer entries.

    Returns (X_1, X_2, W) with W = T_1(X_1) + T_2(X_2); W has spectrum
    {8, 8, 8, 8, -1, -1, -3, -3}, the maximum of 4 negative eigenvalues.
    """
    dims = (2, 2, 2)
    v1 = _ket("001") + _ket("010") + 2 * _ket("111")
    v2 = _ket("001") + _ket("100") + 2 * _ket("111")
    w1 = _ket("110") + _ket("101") + 2 * _ket("000")
    w2 = _ket("110") + _ket("011") + 2 * _ket("000")
    x1 = HermOp(dims, np.outer(v1, v1) + np.outer(w1, w1))
    x2 = HermOp(dims, np.outer(v2, v2) + np.outer(w2, w2))
    w = partial_transpose(x1, 1).mat + partial_transpose(x2, 2).mat
    return x1, x2, HermOp(dims, w)


def _shift_kraus_ops() -> list[np.ndarray]:
    """The four 5x5 operators spanning a rank >= 4 subspace of matrices."""
    omega = np.exp(2j * np.pi / 5)
    a1 = np.diag(np.ones(4), k=1) / 2
    a2 = np.diag(np.ones(4), k=-1) / 2
    a3 = np.eye(5, dtype=complex) / math.sqrt(5)
    a4 = np.diag(omega ** np.arange(5)) / math.sqrt(5)
    return [a1.astype(complex), a2.astype(complex), a3, a4]


def k_positive_example(c: float) -> tuple[HPMap, HermOp]:
    """A map on M_5 whose Choi matrix is I - cP with rank(P) = 4.

    P projects onto the span of the row-major vectorizations of four
    Hilbert-Schmidt orthonormal matrices, every combination of which has rank
    at least 4; for c > 1 the Choi matrix has exactly 4 negative eigenvalues.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    ops = _shift_kraus_ops()

    def action(x):
        return np.trace(x) * np.eye(5) - c * sum(a @ x @ a.conj().T for a in ops)

    phi = from_action(action, 5, 5, f"rank4_subspace:c={c:g}")
    proj = projection_from_span([vec_row_major(a) for a in ops], dims=(5, 5))
    return phi, proj


def schmidt_rank_probe(vectors, trials: int, rng: np.random.Generator, sv_tol: float = 1e-8) -> int:
    """Minimum matrix rank over random combinations of vectorized matrices."""
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    n = int(round(math.sqrt(len(vecs[0]))))
    if n * n != len(vecs[0]):
        raise DimensionError("vectors must be vectorizations of square matrices")
    best = n
    for _ in range(trials):
        coeffs = rng.standard_normal(len(vecs)) + 1j * rng.standard_normal(len(vecs))
        combo = sum(c * v for c, v in zip(coeffs, vecs)).reshape(n, n)
        sv = np.linalg.svd(combo, compute_uv=False)
        rank = int(np.count_nonzero(sv > sv_tol * sv[0]))
        best = min(best, rank)
    return best
