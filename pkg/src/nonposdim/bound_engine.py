"""Upper bounds on the non-m-positive dimension and the non-CP ratio.

Three routes: the a-priori dimension bound (m-k)(n-k), the diamond-distance
bound with a freely chosen scalar x, and closed-form exact values for the
transpose and reduction maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .map_catalog import (
    HPMap,
    adjoint,
    apply,
    depolarizing,
    ell,
    is_completely_positive,
)
from .sdp_engine import diamond_distance
from .tensor_core import operator_norm

# Absolute slack subtracted before taking ceilings: the exact bound values are
# rationals hit only to solver precision, and ceil must not jump a level.
CEIL_GUARD = 1e-6


class BoundInputError(ValueError):
    """Invalid parameters for a bound computation."""


@dataclass(frozen=True)
class BoundReport:
    """An upper-bound computation with enough stored state to recompute it."""

    map_label: str
    m: int
    bound: float
    method: str  # "trivial" | "lemma" | "exact-formula"
    x_used: float | None = None
    d_value: float | None = None
    ell_value: float | None = None
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "map": self.map_label,
            "m": self.m,
            "bound": self.bound,
            "method": self.method,
            "x": self.x_used,
            "d": self.d_value,
            "ell": self.ell_value,
            **({"notes": self.notes} if self.notes else {}),
        }


def guarded_ceil(value: float) -> int:
    """ceil with a small backward guard so near-integers do not round up."""
    return math.ceil(value - CEIL_GUARD)


def trivial_upper(m: int, n: int, k: int = 1) -> int:
    """(m-k)(n-k): no subspace larger than this avoids Schmidt-rank <= k states."""
    if not 1 <= k <= min(m, n):
        raise BoundInputError(f"k must satisfy 1 <= k <= min(m, n), got k={k}")
    return (m - k) * (n - k)


def _distance_to_depolarizing(phi: HPMap, x: float) -> tuple[float, bool]:
    """d(x Delta, Phi), via the CP shortcut when x Delta - Phi is CP."""
    n = phi.n_in
    diff = x * depolarizing(n) - phi
    if is_completely_positive(diff):
        # For CP maps the stabilized norm is the operator norm of the adjoint at I.
        return operator_norm(apply(adjoint(diff), np.eye(n))), True
    return diamond_distance(x * depolarizing(n), phi), False


def lemma_bound(phi: HPMap, m: int, x: float) -> BoundReport:
    """Upper bound ceil(m n (x + d - l) / (2x)) - 1 on the non-mP dimension of Phi*.

    Here d = d(x Delta, Phi) in diamond norm and l = min_rho Tr(Phi(rho)).
    Valid for every x > 0; the reported bound is clamped below at 0.
    """
    if x <= 0:
        raise BoundInputError("x must be positive")
    if phi.n_in != phi.n_out:
        raise BoundInputError("bound requires a square map")
    n = phi.n_in
    d, used_shortcut = _distance_to_depolarizing(phi, x)
    l = ell(phi)
    raw = m * n * (x + d - l) / (2 * x)
    bound = max(0, guarded_ceil(raw) - 1)
    return BoundReport(
        map_label=phi.label or "map",
        m=m,
        bound=bound,
        method="lemma",
        x_used=x,
        d_value=d,
        ell_value=l,
        notes={"cp_shortcut": used_shortcut},
    )


def default_x_grid(n: int, points: int = 24) -> np.ndarray:
    """Logarithmically spaced candidates for the free scalar x."""
    return np.geomspace(n / 10, 10 * n, points)


def lemma_bound_scan(phi: HPMap, m: int, x_grid=None) -> BoundReport:
    """Minimum lemma bound over a grid of x values; ties go to the smallest x."""
    if x_grid is None:
        x_grid = default_x_grid(phi.n_in)
    x_grid = [float(x) for x in x_grid]
    if not x_grid:
        raise BoundInputError("x grid must be nonempty")
    if any(x <= 0 for x in x_grid):
        raise BoundInputError("all grid points must be positive")
    best = None
    for x in sorted(x_grid):
        report = lemma_bound(phi, m, x)
        if best is None or report.bound < best.bound:
            best = report
    return best


def exact_nu(label: str, m: int, n: int | None = None, k: float | None = None) -> int:
    """Closed-form non-mP dimension where a proof exists.

    ``transpose`` gives (m-1)(n-1); ``reduction`` gives ceil(m/k) - 1 (valid
    for real k as well).
    """
    if label == "transpose":
        if n is None:
            raise BoundInputError("transpose requires n")
        return (m - 1) * (n - 1)
    if label == "reduction":
        if k is None:
            raise BoundInputError("reduction requires k")
        if k <= 0:
            raise BoundInputError("k must be positive")
        return max(0, guarded_ceil(m / k) - 1)
    raise BoundInputError(f"no proved exact formula for map label {label!r}")


def nu_ratio_upper(phi: HPMap, x: float) -> float:
    """Real-valued bound n (x + d - l) / (2x) on the non-CP ratio of Phi*."""
    if x <= 0:
        raise BoundInputError("x must be positive")
    n = phi.n_in
    d, _ = _distance_to_depolarizing(phi, x)
    return n * (x + d - ell(phi)) / (2 * x)


def best_upper(phi: HPMap, m: int, x_grid=None, positivity_order: int = 1) -> BoundReport:
    """min(lemma scan, trivial bound); the final reported upper bound."""
    lemma = lemma_bound_scan(phi, m, x_grid)
    triv = trivial_upper(m, phi.n_in, positivity_order)
    if triv <= lemma.bound:
        return BoundReport(
            map_label=phi.label or "map",
            m=m,
            bound=triv,
            method="trivial",
            notes={"k": positivity_order, "lemma_bound": lemma.bound},
        )
    return lemma
