"""Hermiticity-preserving maps represented by their Choi matrices.

The Choi matrix convention is J(Phi) = sum_ij E_ij (x) Phi(E_ij), stored on
subsystem dimensions (n_in, n_out).  A map is completely positive iff its
Choi matrix is positive semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_core import (
    HermOp,
    DimensionError,
    kron,
    operator_norm,
)


@dataclass(frozen=True)
class HPMap:
    """A linear map M_{n_in} -> M_{n_out} given canonically by its Choi matrix."""

    n_in: int
    n_out: int
    choi: HermOp
    label: str = ""

    def __post_init__(self):
        if self.choi.dims != (self.n_in, self.n_out):
            raise DimensionError(
                f"Choi dims {self.choi.dims} do not match ({self.n_in}, {self.n_out})"
            )

    @property
    def choi_tensor(self) -> np.ndarray:
        """Choi matrix reshaped to (n_in, n_out, n_in, n_out)."""
        n, m = self.n_in, self.n_out
        return self.choi.mat.reshape(n, m, n, m)

    def __add__(self, other: "HPMap") -> "HPMap":
        self._check_same_dims(other)
        return HPMap(self.n_in, self.n_out, HermOp(self.choi.dims, self.choi.mat + other.choi.mat))

    def __sub__(self, other: "HPMap") -> "HPMap":
        self._check_same_dims(other)
        return HPMap(self.n_in, self.n_out, HermOp(self.choi.dims, self.choi.mat - other.choi.mat))

    def __mul__(self, scalar: float) -> "HPMap":
        return HPMap(self.n_in, self.n_out, HermOp(self.choi.dims, scalar * self.choi.mat))

    __rmul__ = __mul__

    def _check_same_dims(self, other: "HPMap"):
        if (self.n_in, self.n_out) != (other.n_in, other.n_out):
            raise DimensionError("maps act on different dimensions")

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "n_in": self.n_in,
            "n_out": self.n_out,
            "choi": self.choi.to_json(),
        }

    @staticmethod
    def from_json(obj: dict) -> "HPMap":
        return HPMap(obj["n_in"], obj["n_out"], HermOp.from_json(obj["choi"]), obj.get("label", ""))


def from_action(action, n_in: int, n_out: int, label: str = "") -> HPMap:
    """Build an HPMap from a callable X -> Phi(X) by probing matrix units."""
    j = np.zeros((n_in * n_out, n_in * n_out), dtype=complex)
    jt = j.reshape(n_in, n_out, n_in, n_out)
    for i in range(n_in):
        for k in range(n_in):
            e = np.zeros((n_in, n_in), dtype=complex)
            e[i, k] = 1.0
            jt[i, :, k, :] = np.asarray(action(e), dtype=complex)
    return HPMap(n_in, n_out, HermOp((n_in, n_out), j), label)


def apply(phi: HPMap, x) -> np.ndarray:
    """Phi(X) read off the Choi matrix: Tr_1[(X^T (x) I) J(Phi)]."""
    xm = x.mat if isinstance(x, HermOp) else np.asarray(x, dtype=complex)
    if xm.shape != (phi.n_in, phi.n_in):
        raise DimensionError(f"input shape {xm.shape} does not match n_in={phi.n_in}")
    return np.einsum("ij,ikjl->kl", xm, phi.choi_tensor)


def adjoint(phi: HPMap) -> HPMap:
    """The adjoint map under the trace pairing Tr(X Phi(Y)) = Tr(Phi*(X) Y)."""
    # J(Phi*)[(k,i),(l,j)] = conj(J(Phi)[(i,k),(j,l)])
    jt = phi.choi_tensor.conj().transpose(1, 0, 3, 2)
    n, m = phi.n_out, phi.n_in
    label = phi.label + "*" if phi.label else ""
    return HPMap(n, m, HermOp((n, m), jt.reshape(n * m, n * m)), label)


def tensor_with_identity(phi: HPMap, m: int, rho: HermOp) -> HermOp:
    """(I_m (x) Phi)(rho) for rho on dims (m, n_in), applied blockwise."""
    if m < 1:
        raise DimensionError("m must be >= 1")
    if rho.total != m * phi.n_in:
        raise DimensionError(
            f"state side {rho.total} does not match m*n_in = {m * phi.n_in}"
        )
    blocks = rho.mat.reshape(m, phi.n_in, m, phi.n_in)
    out = np.einsum("aibj,ikjl->akbl", blocks, phi.choi_tensor)
    return HermOp((m, phi.n_out), out.reshape(m * phi.n_out, m * phi.n_out))


def compose(phi: HPMap, psi: HPMap, label: str = "") -> HPMap:
    """The composition Phi o Psi (apply Psi first)."""
    if psi.n_out != phi.n_in:
        raise DimensionError(
            f"inner dimensions do not match: {psi.n_out} vs {phi.n_in}"
        )
    return from_action(lambda x: apply(phi, apply(psi, x)), psi.n_in, phi.n_out, label)


def ell(phi: HPMap) -> float:
    """min over states rho of Tr(Phi(rho)); equals the least eigenvalue of Phi*(I)."""
    adj_i = apply(adjoint(phi), np.eye(phi.n_out))
    return float(np.linalg.eigvalsh(adj_i)[0])


def is_completely_positive(phi: HPMap, tol: float = 1e-10) -> bool:
    """True iff the Choi matrix is PSD within a relative tolerance."""
    vals = np.linalg.eigvalsh(phi.choi.mat)
    scale = max(1.0, operator_norm(phi.choi.mat))
    return bool(vals[0] >= -tol * scale)


# ---------------------------------------------------------------------------
# Catalog constructors
# ---------------------------------------------------------------------------

def identity_map(n: int) -> HPMap:
    return from_action(lambda x: x, n, n, f"identity:n={n}")


def transpose_map(n: int) -> HPMap:
    return from_action(lambda x: x.T, n, n, f"transpose:n={n}")


def depolarizing(n: int) -> HPMap:
    """The completely depolarizing map X -> Tr(X) I/n."""
    return from_action(lambda x: np.trace(x) * np.eye(n) / n, n, n, f"depolarizing:n={n}")


def reduction_map(n: int, k: float = 1.0) -> HPMap:
    """The generalized reduction map X -> k Tr(X) I - X (k may be non-integer)."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    return from_action(
        lambda x: k * np.trace(x) * np.eye(n) - x, n, n, f"reduction:n={n},k={k:g}"
    )


def choi_map() -> HPMap:
    """The indecomposable positive map on M_3 with the cyclic diagonal pattern."""

    def action(x):
        out = -np.array(x, dtype=complex)
        out[0, 0] = x[0, 0] + x[1, 1]
        out[1, 1] = x[1, 1] + x[2, 2]
        out[2, 2] = x[2, 2] + x[0, 0]
        return out

    return from_action(action, 3, 3, "choi")


def choi_map_adjoint() -> HPMap:
    """The adjoint of choi_map, with its own printed diagonal pattern."""

    def action(x):
        out = -np.array(x, dtype=complex)
        out[0, 0] = x[0, 0] + x[2, 2]
        out[1, 1] = x[1, 1] + x[0, 0]
        out[2, 2] = x[2, 2] + x[1, 1]
        return out

    return from_action(action, 3, 3, "choi*")


def skew_symmetric_unitary(n: int) -> np.ndarray:
    """Block-diagonal [[0,1],[-1,0]] pattern; requires even n."""
    if n % 2 != 0:
        raise DimensionError("skew-symmetric unitaries exist only in even dimension")
    u = np.zeros((n, n), dtype=complex)
    for i in range(0, n, 2):
        u[i, i + 1] = 1.0
        u[i + 1, i] = -1.0
    return u


def breuer_hall(n: int) -> HPMap:
    """X -> Tr(X) I - X - U X^T U* with the canonical skew-symmetric unitary U."""
    if n < 4 or n % 2 != 0:
        raise DimensionError("breuer_hall requires even n >= 4")
    u = skew_symmetric_unitary(n)

    def action(x):
        return np.trace(x) * np.eye(n) - x - u @ x.T @ u.conj().T

    return from_action(action, n, n, f"breuer_hall:n={n}")


def counterexample_pair(n: int) -> tuple[HPMap, HPMap]:
    """The composition counterexample (Psi, Phi) on M_n, n = 2k even.

    Psi*(X) = I_k (x) X_2 and Phi*(X) = |0><0| (x) X_2^T, where X_2 is the
    upper-left 2x2 block of X.  Psi is completely positive, Phi is positive,
    and the composition Phi o Psi has a larger non-positive dimension than
    Phi alone.
    """
    if n < 4 or n % 2 != 0:
        raise DimensionError("counterexample_pair requires even n >= 4")
    k = n // 2

    def psi_star(x):
        return kron(np.eye(k), x[:2, :2])

    def phi_star(x):
        e00 = np.zeros((k, k), dtype=complex)
        e00[0, 0] = 1.0
        return kron(e00, x[:2, :2].T)

    psi = adjoint(from_action(psi_star, n, n, f"counterexample_psi*:n={n}"))
    phi = adjoint(from_action(phi_star, n, n, f"counterexample_phi*:n={n}"))
    psi = HPMap(psi.n_in, psi.n_out, psi.choi, f"counterexample_psi:n={n}")
    phi = HPMap(phi.n_in, phi.n_out, phi.choi, f"counterexample_phi:n={n}")
    return psi, phi


class UnknownMapError(ValueError):
    """A map label does not name a catalog map."""


def parse_label(label: str) -> HPMap:
    """Resolve a CLI label like 'reduction:n=5,k=2' to a catalog map."""
    name, _, rest = label.partition(":")
    params: dict[str, float] = {}
    if rest:
        for piece in rest.split(","):
            key, _, val = piece.partition("=")
            if not val:
                raise UnknownMapError(f"malformed parameter {piece!r} in {label!r}")
            params[key.strip()] = float(val)

    def geti(key, default=None):
        if key in params:
            return int(params[key])
        if default is None:
            raise UnknownMapError(f"map {name!r} requires parameter {key!r}")
        return default

    if name == "identity":
        return identity_map(geti("n", 3))
    if name == "transpose":
        return transpose_map(geti("n", 3))
    if name == "depolarizing":
        return depolarizing(geti("n", 3))
    if name == "reduction":
        return reduction_map(geti("n", 3), params.get("k", 1.0))
    if name == "choi":
        return choi_map()
    if name == "choi_adjoint":
        return choi_map_adjoint()
    if name == "breuer_hall":
        return breuer_hall(geti("n", 4))
    raise UnknownMapError(f"unknown map label {label!r}")
