"""Lower bounds on the non-m-positive dimension: randomized state search,
the optimal reduction-map construction, block lifting, and subspace
extraction from a good state.

Reproducibility contract: every trial draws from its own generator seeded by
(seed, trial index), so a SearchReport is bitwise-identical for a fixed seed
regardless of how trials are scheduled across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bound_engine import guarded_ceil
from .map_catalog import HPMap, adjoint, reduction_map, tensor_with_identity
from .tensor_core import HermOp, DimensionError, herm_eig_decomp, inertia, orthonormal_basis


class NoNegativeEigenvaluesError(ValueError):
    """A negative eigenspace was required but the operator is PSD."""


@dataclass(frozen=True)
class SearchReport:
    map_label: str
    m: int
    trials: int
    rank_schedule: tuple[int, ...]
    best_neg_count: int
    best_state: HermOp | None
    best_trial: int
    seed: int
    histogram: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "map": self.map_label,
            "m": self.m,
            "trials": self.trials,
            "rank_schedule": list(self.rank_schedule),
            "best_neg_count": self.best_neg_count,
            "best_trial": self.best_trial,
            "seed": self.seed,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "best_state": self.best_state.to_json() if self.best_state is not None else None,
        }


def random_density(dims: tuple[int, ...], rank: int, rng: np.random.Generator) -> HermOp:
    """Induced-measure random state: GG^dag / Tr with G complex Gaussian total x rank."""
    total = int(np.prod(dims))
    if not 1 <= rank <= total:
        raise DimensionError(f"rank must be in 1..{total}, got {rank}")
    g = rng.standard_normal((total, rank)) + 1j * rng.standard_normal((total, rank))
    rho = g @ g.conj().T
    return HermOp(dims, rho / np.trace(rho).real)


def neg_count(phi: HPMap, m: int, rho: HermOp, eps_neg: float = 1e-9) -> int:
    """Number of negative eigenvalues of (I_m (x) Phi)(rho)."""
    return inertia(tensor_with_identity(phi, m, rho), eps_neg=eps_neg).n_neg


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def search_nu_lower(
    phi: HPMap,
    m: int,
    trials: int,
    rank_schedule: tuple[int, ...] | None = None,
    seed: int = 0,
    threads: int = 1,
) -> SearchReport:
    """Max negative-eigenvalue count over randomly sampled states.

    The result is a lower bound on the non-mP dimension of Phi (pass the
    adjoint if the other direction is wanted).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    total = m * phi.n_in
    if rank_schedule is None:
        rank_schedule = tuple(range(1, total + 1))
    rank_schedule = tuple(int(r) for r in rank_schedule)

    def run_trial(t: int) -> tuple[int, HermOp]:
        rng = _trial_rng(seed, t)
        rho = random_density((m, phi.n_in), rank_schedule[t % len(rank_schedule)], rng)
        return neg_count(phi, m, rho), rho

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_trial, range(trials)))
    else:
        results = [run_trial(t) for t in range(trials)]

    histogram: dict[int, int] = {}
    best_count, best_state, best_trial = -1, None, -1
    for t, (count, rho) in enumerate(results):
        histogram[count] = histogram.get(count, 0) + 1
        if count > best_count:
            best_count, best_state, best_trial = count, rho, t

    return SearchReport(
        map_label=phi.label or "map",
        m=m,
        trials=trials,
        rank_schedule=rank_schedule,
        best_neg_count=best_count,
        best_state=best_state,
        best_trial=best_trial,
        seed=seed,
        histogram=histogram,
    )


def maximally_entangled_clock_state(m: int, n: int, t: int) -> np.ndarray:
    """(1/sqrt(m)) sum_j e^{2 pi i j t / m} |j>|j> in C^m (x) C^n, m <= n."""
    v = np.zeros(m * n, dtype=complex)
    for j in range(m):
        v[j * n + j] = np.exp(2j * np.pi * j * t / m) / math.sqrt(m)
    return v


def reduction_optimal_state(m: int, n: int, k: float = 1.0) -> HermOp | None:
    """A state achieving ceil(m/k) - 1 negative eigenvalues under I_m (x) R_k.

    Built as a uniform mixture of orthogonal clock-phased maximally entangled
    states.  Requires m <= n (the construction needs a maximally mixed
    reduction on the first factor); returns None when the target count is 0.
    """
    if m > n:
        raise DimensionError("construction requires m <= n")
    if k <= 0:
        raise ValueError("k must be positive")
    r = guarded_ceil(m / k) - 1
    if r < 1:
        return None
    rho = np.zeros((m * n, m * n), dtype=complex)
    for t in range(1, r + 1):
        v = maximally_entangled_clock_state(m, n, t)
        rho += np.outer(v, v.conj())
    return HermOp((m, n), rho / r)


def block_lift_state(rho: HermOp, k: int) -> HermOp:
    """Lift a state on (m, n) to (k m, n) as a uniform block-diagonal mixture.

    Each block is a shifted copy of rho, so for any map the lifted state has
    exactly k times as many negative eigenvalues under I_{km} (x) Phi.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if rho.nsub != 2:
        raise DimensionError("block lift expects a bipartite state")
    m, n = rho.dims
    out = np.zeros((k * m * n, k * m * n), dtype=complex)
    for i in range(k):
        off = i * m * n
        out[off : off + m * n, off : off + m * n] = rho.mat / k
    return HermOp((k * m, n), out)


def subspace_from_state(phi: HPMap, m: int, rho: HermOp, eps_neg: float = 1e-9):
    """Basis of the negative eigenspace of (I_m (x) Phi*)(rho).

    Every state supported there is mapped non-positive by I_m (x) Phi, which
    is the forward direction of the subspace / negative-eigenvalue
    correspondence.
    """
    out = tensor_with_identity(adjoint(phi), m, rho)
    vals, vecs = herm_eig_decomp(out)
    tau = eps_neg * max(1.0, float(np.abs(vals).max()))
    negative = vals < -tau
    if not negative.any():
        raise NoNegativeEigenvaluesError("map produces no negative eigenvalues on this state")
    basis = orthonormal_basis([vecs[:, i] for i in np.nonzero(negative)[0]])
    from .multipartite_npt import SubspaceBasis

    return SubspaceBasis(dims=rho.dims, vectors=tuple(basis[:, i] for i in range(basis.shape[1])))
