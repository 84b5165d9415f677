"""Conic-optimization layer: diamond norms, the subspace-to-witness SDP, and
the finer-witness feasibility test.

All problems are stated over complex Hermitian cones; cvxpy handles the
real embedding internally.  Solves are independent of each other and hold no
shared state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import cvxpy as cp
import numpy as np

from .tensor_core import HermOp, DimensionError, inertia, operator_norm
from .map_catalog import HPMap, adjoint, apply, tensor_with_identity

# Target primal/dual residual scale for the backend solver.
EPS_SDP = 1e-8
# Strict margin before claiming c_opt > 1 (and hence a witness).
CERT_MARGIN = 1.0 + 10 * EPS_SDP

_SOLVER = cp.CLARABEL


class SdpSolverError(RuntimeError):
    """The backend solver did not return a usable optimum."""


class SubspaceNotCertifiedError(RuntimeError):
    """The witness SDP did not certify the subspace as non-positive."""


@dataclass(frozen=True)
class SdpResult:
    status: str
    objective: float
    primal: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)


@dataclass(frozen=True)
class WitnessResult:
    """Outcome of the subspace witness SDP.

    ``witness`` is the sum of the transformed PSD components; it satisfies
    witness <= I - c_opt P up to solver tolerance and its negative-eigenvalue
    count is ``neg_count``.
    """

    c_opt: float
    witness: HermOp
    components: list
    neg_count: int
    stats: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FinerResult:
    feasible: bool
    c: float | None = None
    residual: HermOp | None = None
    stats: dict = field(default_factory=dict)


class MatrixTransform:
    """A linear map on N x N matrices with a dense superoperator.

    The superoperator acts on row-major vectorizations, which lets the same
    object be applied to numpy arrays and to cvxpy expressions.
    """

    def __init__(self, superop: np.ndarray, side: int, label: str = ""):
        if superop.shape != (side * side, side * side):
            raise DimensionError("superoperator shape does not match matrix side")
        self.superop = superop
        self.side = side
        self.label = label

    @staticmethod
    def from_callable(fn: Callable[[np.ndarray], np.ndarray], side: int, label: str = "") -> "MatrixTransform":
        sup = np.zeros((side * side, side * side), dtype=complex)
        for i in range(side):
            for j in range(side):
                e = np.zeros((side, side), dtype=complex)
                e[i, j] = 1.0
                sup[:, i * side + j] = np.asarray(fn(e), dtype=complex).reshape(-1)
        return MatrixTransform(sup, side, label)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (self.superop @ np.asarray(x, dtype=complex).reshape(-1)).reshape(self.side, self.side)

    def apply_expr(self, x: cp.Expression) -> cp.Expression:
        flat = cp.reshape(x, (self.side * self.side,), order="C")
        out = cp.reshape(self.superop @ flat, (self.side, self.side), order="C")
        # The map is Hermiticity-preserving; symmetrize so cvxpy sees it.
        return (out + cp.conj(cp.transpose(out))) / 2


def partial_transpose_transform(dims: Sequence[int], sub: int) -> MatrixTransform:
    """The partial transpose on subsystem ``sub`` as a MatrixTransform."""
    from .tensor_core import partial_transpose

    dims = tuple(dims)
    side = int(np.prod(dims))

    def fn(x):
        return partial_transpose(HermOp(dims, x), sub).mat

    return MatrixTransform.from_callable(fn, side, f"T_{sub}")


def tensored_map_transform(phi: HPMap, m: int, use_adjoint: bool = True) -> MatrixTransform:
    """I_m (x) Phi* (or I_m (x) Phi) as a MatrixTransform on side m*n."""
    base = adjoint(phi) if use_adjoint else phi
    if base.n_in != base.n_out:
        raise DimensionError("tensored transform needs a square map")
    side = m * base.n_in

    def fn(x):
        return tensor_with_identity(base, m, HermOp((m, base.n_in), x)).mat

    label = f"I_{m}(x){phi.label or 'map'}" + ("*" if use_adjoint else "")
    return MatrixTransform.from_callable(fn, side, label)


def _solve(problem: cp.Problem, **kwargs) -> dict:
    try:
        problem.solve(solver=_SOLVER, **kwargs)
    except cp.SolverError as exc:
        raise SdpSolverError(f"solver failed: {exc}") from exc
    stats = {
        "solver": str(_SOLVER),
        "status": problem.status,
        "iterations": getattr(problem.solver_stats, "num_iters", None),
    }
    return stats


def diamond_norm(phi: HPMap, tol: float = EPS_SDP) -> float:
    """The completely bounded trace norm of a Hermiticity-preserving map.

    The general SDP minimizes (|Tr_out Y0| + |Tr_out Y1|)/2 over the block
    constraint [[Y0, -J], [-J^dag, Y1]] >= 0.  Here J is Hermitian, so the
    pair can be symmetrized to a single variable Y0 = Y1 = Y, and conjugating
    the block by (1/sqrt(2)) [[I, I], [-I, I]] splits the constraint into
    Y - J >= 0 and Y + J >= 0.  That halves the variable count and replaces
    one PSD cone of side 2nm with two of side nm, which is dramatically
    cheaper for the backend solver.
    """
    n, m = phi.n_in, phi.n_out
    d = n * m
    j = phi.choi.mat
    y = cp.Variable((d, d), hermitian=True)
    t = cp.Variable()
    constraints = [
        y - j >> 0,
        y + j >> 0,
        cp.partial_trace(y, dims=(n, m), axis=1) << t * np.eye(n),
    ]
    problem = cp.Problem(cp.Minimize(t), constraints)
    stats = _solve(problem)
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise SdpSolverError(f"diamond norm solve ended with status {problem.status}: {stats}")
    return max(0.0, float(problem.value))


def diamond_distance(phi1: HPMap, phi2: HPMap) -> float:
    """Diamond-norm distance between two maps of matching dimensions."""
    if (phi1.n_in, phi1.n_out) != (phi2.n_in, phi2.n_out):
        raise DimensionError("maps act on different dimensions")
    return diamond_norm(phi1 - phi2)


def subspace_witness_sdp(
    p: HermOp,
    family: Sequence[MatrixTransform],
    witness_eps: float = 1e-6,
) -> WitnessResult:
    """Maximize c subject to sum_j L_j(X_j) <= I - c P with X_j >= 0.

    ``p`` must be an orthogonal projection; if the optimum exceeds 1 the sum
    of the transformed components is a witness with at least rank(P) negative
    eigenvalues.  ``witness_eps`` is the relative eigenvalue threshold used
    when counting the witness's negative eigenvalues (looser than the desk
    default to absorb solver slack).
    """
    n = p.total
    pm = p.mat
    if operator_norm(pm @ pm - pm) > 1e-8:
        raise DimensionError("P is not an orthogonal projection")
    rank = int(round(np.trace(pm).real))
    if rank == 0:
        raise DimensionError("P = 0 is degenerate")
    for tr in family:
        if tr.side != n:
            raise DimensionError("family member side does not match P")

    c = cp.Variable()
    xs = [cp.Variable((n, n), hermitian=True) for _ in family]
    total = sum(tr.apply_expr(x) for tr, x in zip(family, xs))
    constraints = [x >> 0 for x in xs]
    constraints.append(np.eye(n) - c * pm - total >> 0)
    problem = cp.Problem(cp.Maximize(c), constraints)
    stats = _solve(problem)
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise SdpSolverError(f"witness SDP ended with status {problem.status}: {stats}")

    components = [HermOp(p.dims, (x.value + x.value.conj().T) / 2) for x in xs]
    wit = np.zeros((n, n), dtype=complex)
    for tr, comp in zip(family, components):
        wit = wit + tr.apply(comp.mat)
    witness = HermOp(p.dims, (wit + wit.conj().T) / 2)
    neg = inertia(witness, eps_neg=witness_eps).n_neg
    return WitnessResult(
        c_opt=float(c.value),
        witness=witness,
        components=components,
        neg_count=neg,
        stats=stats,
    )


def state_from_subspace(phi: HPMap, m: int, p: HermOp) -> HermOp:
    """A density matrix rho with rank(P) negative eigenvalues under I_m (x) Phi*.

    Runs the witness SDP with the single-element family {I_m (x) Phi*}; the
    PSD component, normalized, is the state promised by the subspace/negative
    eigenvalue correspondence.  Raises if the subspace is not certifiably
    non-positive for Phi (c_opt <= 1).
    """
    result = subspace_witness_sdp(p, [tensored_map_transform(phi, m, use_adjoint=True)])
    if result.c_opt < CERT_MARGIN:
        raise SubspaceNotCertifiedError(
            f"subspace not certifiably non-positive for this map (c_opt = {result.c_opt:.6g})"
        )
    x2 = result.components[0].mat
    tr = float(np.trace(x2).real)
    if tr <= 0:
        raise SubspaceNotCertifiedError("witness SDP returned a zero component")
    return HermOp(p.dims, x2 / tr)


def finer_check(phi1: HPMap, phi2: HPMap) -> FinerResult:
    """Decide whether J(Phi1) = c J(Phi2) - P is solvable with c > 0, P >= 0.

    Solved as: minimize c subject to c J(Phi2) - J(Phi1) >= 0, c >= 0.  On
    feasibility the residual P = c J(Phi2) - J(Phi1) is returned.
    """
    if (phi1.n_in, phi1.n_out) != (phi2.n_in, phi2.n_out):
        raise DimensionError("maps act on different dimensions")
    j1 = phi1.choi.mat
    j2 = phi2.choi.mat
    c = cp.Variable()
    problem = cp.Problem(cp.Minimize(c), [c * j2 - j1 >> 0, c >= 0])
    stats = _solve(problem)
    if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return FinerResult(feasible=False, stats=stats)
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise SdpSolverError(f"finer check ended with status {problem.status}: {stats}")
    cval = float(c.value)
    residual = cval * j2 - j1
    return FinerResult(
        feasible=True,
        c=cval,
        residual=HermOp(phi1.choi.dims, (residual + residual.conj().T) / 2),
        stats=stats,
    )
