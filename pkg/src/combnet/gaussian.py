"""Symplectic linear algebra over quadrature phase space.

Conventions used throughout the package:

* each optical mode carries two quadratures with ``a = x + i p``;
* the vacuum variance of every quadrature is 1 (shot noise = 0 dB);
* covariance matrices are ordered ``(x_1 .. x_n, p_1 .. p_n)``;
* the symplectic form is ``Omega = [[0, I], [-I, 0]]``;
* squeezing in dB is ``10 * log10(variance)``.

A passive mode-basis change ``b = U a`` with ``U = X + iY`` acts on the
quadrature vector through the orthogonal symplectic matrix
``S = [[X, -Y], [Y, X]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

# Structural tolerance for matrices we construct ourselves; inputs crossing
# the API boundary are accepted up to the looser validation tolerance.
STRUCTURAL_TOL = 1e-10
VALIDATION_TOL = 1e-8

VACUUM_VARIANCE = 1.0


def omega(n: int) -> np.ndarray:
    """Symplectic form [[0, I], [-I, 0]] for n modes."""
    zero = np.zeros((n, n))
    eye = np.eye(n)
    return np.block([[zero, eye], [-eye, zero]])


def _as_matrix(data, name: str) -> np.ndarray:
    arr = np.array(data, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {arr.shape}")
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CovarianceMatrix:
    """Second moments of all quadratures, x-block first then p-block.

    Validates symmetry and the uncertainty bound ``V + i*Omega >= 0`` on
    construction.  Instances are immutable and safe to share.
    """

    data: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        data = _as_matrix(self.data, "covariance matrix")
        if data.shape[0] % 2 != 0:
            raise ValueError("covariance matrix must be 2n x 2n")
        n = data.shape[0] // 2
        asym = np.max(np.abs(data - data.T))
        if asym > STRUCTURAL_TOL:
            raise ValueError(f"covariance matrix not symmetric (residual {asym:.3e})")
        data = 0.5 * (data + data.T)
        eigmin = np.min(np.linalg.eigvalsh(data + 1j * omega(n)).real)
        if eigmin < -1e-9:
            raise ValueError(
                f"covariance matrix violates the uncertainty bound "
                f"(min eigenvalue of V + i*Omega is {eigmin:.3e})"
            )
        object.__setattr__(self, "data", _freeze(data))
        object.__setattr__(self, "dim", n)

    @classmethod
    def vacuum(cls, n: int) -> "CovarianceMatrix":
        return cls(np.eye(2 * n))

    @classmethod
    def from_quadrature_variances(cls, x_vars, p_vars) -> "CovarianceMatrix":
        """Diagonal covariance of uncorrelated modes."""
        x_vars = np.asarray(x_vars, dtype=float)
        p_vars = np.asarray(p_vars, dtype=float)
        if x_vars.shape != p_vars.shape:
            raise ValueError("x and p variance lists must have equal length")
        return cls(np.diag(np.concatenate([x_vars, p_vars])))

    @property
    def x_block(self) -> np.ndarray:
        return self.data[: self.dim, : self.dim]

    @property
    def p_block(self) -> np.ndarray:
        return self.data[self.dim :, self.dim :]

    @property
    def xp_block(self) -> np.ndarray:
        return self.data[: self.dim, self.dim :]


@dataclass(frozen=True)
class ModeUnitary:
    """n x n complex unitary mapping annihilation-operator bases."""

    matrix: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"mode unitary must be square, got shape {mat.shape}")
        residual = unitarity_residual(mat)
        if residual > VALIDATION_TOL:
            raise ValueError(f"matrix is not unitary (residual {residual:.3e})")
        object.__setattr__(self, "matrix", _freeze(mat))
        object.__setattr__(self, "dim", mat.shape[0])

    @classmethod
    def identity(cls, n: int) -> "ModeUnitary":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def from_blocks(cls, real_part, imag_part) -> "ModeUnitary":
        return cls(np.asarray(real_part, dtype=float) + 1j * np.asarray(imag_part, dtype=float))

    @property
    def real_part(self) -> np.ndarray:
        return self.matrix.real

    @property
    def imag_part(self) -> np.ndarray:
        return self.matrix.imag

    def dagger(self) -> "ModeUnitary":
        return ModeUnitary(self.matrix.conj().T)

    def __matmul__(self, other: "ModeUnitary") -> "ModeUnitary":
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return ModeUnitary(self.matrix @ other.matrix)


@dataclass(frozen=True)
class SymplecticMatrix:
    """2n x 2n real matrix S with S Omega S^T = Omega."""

    data: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        data = _as_matrix(self.data, "symplectic matrix")
        if data.shape[0] % 2 != 0:
            raise ValueError("symplectic matrix must be 2n x 2n")
        n = data.shape[0] // 2
        residual = np.max(np.abs(data @ omega(n) @ data.T - omega(n)))
        if residual > VALIDATION_TOL:
            raise ValueError(f"matrix is not symplectic (residual {residual:.3e})")
        object.__setattr__(self, "data", _freeze(data))
        object.__setattr__(self, "dim", n)

    @classmethod
    def identity(cls, n: int) -> "SymplecticMatrix":
        return cls(np.eye(2 * n))


def unitarity_residual(matrix: np.ndarray) -> float:
    """Max-norm deviation of U U^dagger from the identity."""
    mat = np.asarray(matrix, dtype=complex)
    return float(np.max(np.abs(mat @ mat.conj().T - np.eye(mat.shape[0]))))


def unitary_to_symplectic(u: ModeUnitary) -> SymplecticMatrix:
    """Lift a mode unitary U = X + iY to its quadrature action [[X, -Y], [Y, X]].

    The result is both symplectic and orthogonal.  Raises ``ValueError`` with
    the unitarity residual if the input fails validation.
    """
    residual = unitarity_residual(u.matrix)
    if residual > VALIDATION_TOL:
        raise ValueError(f"input is not unitary (residual {residual:.3e})")
    x, y = u.real_part, u.imag_part
    return SymplecticMatrix(np.block([[x, -y], [y, x]]))


def apply_symplectic(s: SymplecticMatrix, v: CovarianceMatrix) -> CovarianceMatrix:
    """Propagate a covariance matrix through a symplectic map: S V S^T."""
    if s.dim != v.dim:
        raise ValueError(f"dimension mismatch: symplectic dim {s.dim}, covariance dim {v.dim}")
    return CovarianceMatrix(s.data @ v.data @ s.data.T)


def apply_loss(v: CovarianceMatrix, eta) -> CovarianceMatrix:
    """Mix each mode with vacuum on a beamsplitter of loss fraction eta.

    ``eta`` may be a scalar or one value per mode, each in [0, 1].  The update
    is ``V' = G V G + (I - G^2)`` with ``G = diag(sqrt(1 - eta))`` repeated on
    both quadrature blocks.
    """
    eta_arr = np.broadcast_to(np.asarray(eta, dtype=float), (v.dim,)).copy()
    if np.any(eta_arr < 0) or np.any(eta_arr > 1):
        raise ValueError(f"loss fractions must lie in [0, 1], got {eta_arr}")
    g = np.sqrt(1.0 - eta_arr)
    g2 = np.concatenate([g, g])
    data = g2[:, None] * v.data * g2[None, :]
    data[np.diag_indices_from(data)] += 1.0 - g2**2
    return CovarianceMatrix(data)


def quadrature_variance(v: CovarianceMatrix, u) -> float:
    """Variance of the quadrature combination u . (x_1..x_n, p_1..p_n)."""
    u_arr = np.asarray(u, dtype=float)
    if u_arr.shape != (2 * v.dim,):
        raise ValueError(f"expected a vector of length {2 * v.dim}, got shape {u_arr.shape}")
    return float(u_arr @ v.data @ u_arr)


def db_to_variance(db: float) -> float:
    """Variance of a squeezing level quoted in dB (0 dB = vacuum)."""
    return float(10.0 ** (np.asarray(db, dtype=float) / 10.0))


def variance_to_db(variance: float) -> float:
    """Squeezing level in dB of a (positive) quadrature variance."""
    variance = np.asarray(variance, dtype=float)
    if np.any(variance <= 0):
        raise ValueError(f"variance must be positive, got {variance}")
    return float(10.0 * np.log10(variance))


class EigenmodeDecomposition(NamedTuple):
    """Result of :func:`eigenmode_extract`."""

    basis: ModeUnitary
    profile: np.ndarray
    residual: float


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    """Flip sign so the largest-magnitude component is positive."""
    idx = int(np.argmax(np.abs(vec)))
    return -vec if vec[idx] < 0 else vec


def eigenmode_extract(v: CovarianceMatrix) -> EigenmodeDecomposition:
    """Extract squeezed eigenmodes by diagonalising the p quadrature block.

    The p-block eigenvectors define a real mode basis; each extracted mode is
    then rotated by a per-mode phase so its 2x2 reduced covariance is
    diagonal with the smaller variance on p.  Modes are sorted ascending in
    p-variance (most squeezed first) with lexicographic tie-breaking; the
    basis inside a degenerate eigenvalue subspace is not unique.

    Returns the complex eigenmode basis ``E`` (rows are modes, acting as
    ``a_eig = E a_in``), the per-mode p variances, and the Frobenius norm of
    the off-diagonal x-block in the extracted basis.  The residual is zero
    exactly when the x and p blocks are simultaneously diagonalisable, which
    spectrally non-uniform loss destroys.
    """
    n = v.dim
    pvals, pvecs = np.linalg.eigh(v.p_block)
    basis_rows = np.array([_canonical_sign(pvecs[:, k]) for k in range(n)])

    # Per-mode phase: diagonalise the 2x2 reduced covariance of each mode and
    # orient the smaller principal variance along p.
    phases = np.zeros(n)
    p_variances = np.zeros(n)
    cx = basis_rows @ v.x_block @ basis_rows.T
    cp = basis_rows @ v.p_block @ basis_rows.T
    cxp = basis_rows @ v.xp_block @ basis_rows.T
    for k in range(n):
        two_by_two = np.array([[cx[k, k], cxp[k, k]], [cxp[k, k], cp[k, k]]])
        w, q = np.linalg.eigh(two_by_two)
        if abs(w[1] - w[0]) <= STRUCTURAL_TOL * max(1.0, abs(w[1])):
            phases[k] = 0.0
            p_variances[k] = cp[k, k]
            continue
        e1, e2 = q[:, 0]  # eigenvector of the smaller variance
        phases[k] = np.arctan2(e1, e2)
        p_variances[k] = w[0]

    order = sorted(
        range(n),
        key=lambda k: (round(p_variances[k], 12), tuple(np.round(basis_rows[k], 12))),
    )
    basis_rows = basis_rows[order]
    phases = phases[order]
    profile = p_variances[order]

    basis = ModeUnitary(np.exp(1j * phases)[:, None] * basis_rows)
    rotated = apply_symplectic(unitary_to_symplectic(basis), v)
    x_out = rotated.x_block
    residual = float(np.linalg.norm(x_out - np.diag(np.diag(x_out))))
    return EigenmodeDecomposition(basis=basis, profile=profile, residual=residual)
