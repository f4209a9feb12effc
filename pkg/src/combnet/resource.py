"""Model of the multimode squeezed resource.

The source is described by a squeezing profile (one p-quadrature variance per
independent squeezer, x-variance its reciprocal) together with the unitary
relating the squeezer basis to the measured frequency-pixel basis.  From these
the pixel-basis covariance matrix is assembled, optionally degraded by
per-mode loss and an additive dark-noise floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_hermite

from .gaussian import (
    CovarianceMatrix,
    ModeUnitary,
    apply_loss,
    apply_symplectic,
    db_to_variance,
    unitary_to_symplectic,
    variance_to_db,
)

# Reference 16-mode squeezing distribution in dB: twelve squeezed modes from
# -6.6 dB down to -0.3 dB plus four vacuum modes.  The exact decay is a
# package default, chosen so that the shipped cluster examples land in their
# documented squeezing bands; override it through ResourceSpec for other
# sources.
REFERENCE_PROFILE_DB = (
    -6.6, -1.9, -1.55, -1.3, -1.15, -1.0, -0.85, -0.7,
    -0.55, -0.45, -0.37, -0.3, 0.0, 0.0, 0.0, 0.0,
)
_REFERENCE_LEADING_DB = REFERENCE_PROFILE_DB[0]


@dataclass(frozen=True)
class SqueezingProfile:
    """Ordered p-quadrature variances of the independent squeezers.

    Entries lie in (0, 1]; an entry of exactly 1 is a vacuum mode.  Each
    squeezer is pure, so its x-variance is the reciprocal of the stored
    p-variance.
    """

    variances: np.ndarray

    def __post_init__(self):
        var = np.atleast_1d(np.asarray(self.variances, dtype=float))
        if var.ndim != 1 or var.size == 0:
            raise ValueError("profile must be a non-empty 1-d list of variances")
        if np.any(var <= 0) or np.any(var > 1.0 + 1e-12):
            raise ValueError(f"profile variances must lie in (0, 1], got {var}")
        var = np.minimum(var, 1.0)
        var.setflags(write=False)
        object.__setattr__(self, "variances", var)

    @classmethod
    def from_db(cls, db_values) -> "SqueezingProfile":
        return cls(np.array([db_to_variance(d) for d in np.atleast_1d(db_values)]))

    @property
    def size(self) -> int:
        return int(self.variances.size)

    @property
    def db(self) -> np.ndarray:
        return np.array([variance_to_db(v) for v in self.variances])

    def squeezed_first(self, count: int | None = None) -> np.ndarray:
        """Variances sorted most-squeezed first (ascending), optionally truncated."""
        ordered = np.sort(self.variances)
        if count is None:
            return ordered
        if count > self.size:
            raise ValueError(f"profile has {self.size} entries, {count} requested")
        return ordered[:count]

    def x_variances(self) -> np.ndarray:
        return 1.0 / self.variances


def reference_profile(leading_db: float = _REFERENCE_LEADING_DB) -> SqueezingProfile:
    """The shipped 16-mode profile rescaled so its leading mode is leading_db.

    Rescaling multiplies every dB value by a common factor, which models
    turning the source pump power up or down without altering the relative
    squeezing distribution.  ``leading_db = 0`` gives an all-vacuum profile.
    """
    if leading_db > 0:
        raise ValueError(f"leading squeezing must be <= 0 dB, got {leading_db}")
    scale = leading_db / _REFERENCE_LEADING_DB
    return SqueezingProfile.from_db(np.asarray(REFERENCE_PROFILE_DB) * scale)


def default_usqz(n: int) -> ModeUnitary:
    """Deterministic stand-in for a measured squeezer-to-pixel unitary.

    Row k is a discretised Hermite-Gauss envelope (harmonic-oscillator
    eigenfunction sampled on n points, QR-orthonormalised, sign fixed so the
    largest-magnitude component is positive) times a phase factor i^k.  The
    leading envelope is bell-shaped and nonnegative; envelope k changes sign
    k times.
    """
    if n < 1:
        raise ValueError("mode count must be >= 1")
    if n == 1:
        return ModeUnitary(np.eye(1, dtype=complex))
    # Sample points spanning the classically allowed region of the highest
    # retained eigenfunction.
    x = np.linspace(-1.0, 1.0, n) * np.sqrt(2.0 * n)
    cols = np.array([eval_hermite(k, x) * np.exp(-0.5 * x**2) for k in range(n)]).T
    q, r = np.linalg.qr(cols)
    q = q * np.sign(np.diag(r))[None, :]
    envelopes = np.array([
        -q[:, k] if q[np.argmax(np.abs(q[:, k])), k] < 0 else q[:, k] for k in range(n)
    ])
    phases = 1j ** np.arange(n)
    return ModeUnitary(phases[:, None] * envelopes.astype(complex))


@dataclass(frozen=True)
class ResourceSpec:
    """Multimode source description: profile, basis unitary, loss, dark noise."""

    profile: SqueezingProfile
    u_sqz: ModeUnitary
    loss: np.ndarray = field(default=None)  # per-mode fractions in [0, 1]
    dark_noise: float = 0.0

    def __post_init__(self):
        n = self.profile.size
        if self.u_sqz.dim != n:
            raise ValueError(
                f"profile has {n} modes but the basis unitary is {self.u_sqz.dim}-dimensional"
            )
        loss = np.zeros(n) if self.loss is None else (
            np.broadcast_to(np.asarray(self.loss, dtype=float), (n,)).copy()
        )
        if np.any(loss < 0) or np.any(loss > 1):
            raise ValueError(f"loss fractions must lie in [0, 1], got {loss}")
        if self.dark_noise < 0:
            raise ValueError(f"dark noise must be >= 0, got {self.dark_noise}")
        loss.setflags(write=False)
        object.__setattr__(self, "loss", loss)

    @classmethod
    def default(cls, n: int = 16, leading_db: float = _REFERENCE_LEADING_DB,
                loss=None, dark_noise: float = 0.0) -> "ResourceSpec":
        profile = reference_profile(leading_db)
        if n != profile.size:
            raise ValueError(f"the reference profile is {profile.size}-mode, got n={n}")
        return cls(profile=profile, u_sqz=default_usqz(n), loss=loss, dark_noise=dark_noise)


def build_pixel_covariance(spec: ResourceSpec) -> CovarianceMatrix:
    """Pixel-basis covariance matrix of the source.

    The squeezer-basis covariance diag(1/s, s) is rotated into the pixel
    basis with the adjoint of the squeezer unitary, then loss and the dark
    noise floor are applied.
    """
    v_sqz = CovarianceMatrix.from_quadrature_variances(
        spec.profile.x_variances(), spec.profile.variances
    )
    s_adj = unitary_to_symplectic(spec.u_sqz.dagger())
    v_pix = apply_symplectic(s_adj, v_sqz)
    if np.any(spec.loss > 0):
        v_pix = apply_loss(v_pix, spec.loss)
    if spec.dark_noise > 0:
        v_pix = CovarianceMatrix(v_pix.data + spec.dark_noise * np.eye(2 * spec.profile.size))
    return v_pix
