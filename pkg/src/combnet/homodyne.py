"""Shaped-local-oscillator homodyne detection on a pixel-basis state.

A complex LO shape ``c`` (pixel-mode amplitudes) together with a global phase
``theta`` selects the quadrature ``sum_i Re(c_i e^{i theta}) x_i +
Im(c_i e^{i theta}) p_i``; its variance on the vacuum is exactly 1, so every
reported variance is already in shot-noise units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gaussian import CovarianceMatrix, ModeUnitary, quadrature_variance

DEFAULT_THETA_GRID = np.linspace(0.0, np.pi, 201)

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class LOShape:
    """Local-oscillator mode: complex pixel amplitudes plus a global phase.

    The amplitude vector is normalised on construction; ``norm_sq`` keeps the
    squared norm of the original combination so operator-scaled variances
    (e.g. literal nullifier combinations) can be recovered as
    ``variance * norm_sq``.
    """

    c: np.ndarray
    theta: float = 0.0
    normalized: bool = field(init=False, default=True)
    norm_sq: float = field(init=False, default=1.0)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("LO shape must be a non-empty complex vector")
        norm_sq = float(np.sum(np.abs(c) ** 2))
        if norm_sq <= 0:
            raise ValueError("LO shape must be nonzero")
        object.__setattr__(self, "c", _readonly(c / np.sqrt(norm_sq)))
        object.__setattr__(self, "norm_sq", norm_sq)
        object.__setattr__(self, "normalized", abs(norm_sq - 1.0) <= _NORM_TOL)

    @property
    def dim(self) -> int:
        return int(self.c.size)

    def quadrature_vector(self, theta: float | None = None) -> np.ndarray:
        """Real 2n coefficient vector (Re c~, Im c~) with c~ = c e^{i theta}."""
        phase = self.theta if theta is None else theta
        rotated = self.c * np.exp(1j * phase)
        return np.concatenate([rotated.real, rotated.imag])


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def lo_from_network_row(u_lo: ModeUnitary, k: int, theta: float = 0.0) -> LOShape:
    """LO shape measuring network mode k of the map ``b = U_LO a_pix``.

    At ``theta = 0`` the measured variance is the x-quadrature variance of
    network mode k; ``theta = pi/2`` gives its p-quadrature.
    """
    if not 0 <= k < u_lo.dim:
        raise IndexError(f"row index {k} out of range for a {u_lo.dim}-mode network")
    return LOShape(c=u_lo.matrix[k].conj(), theta=theta)


def measure_variance(v_pix: CovarianceMatrix, lo: LOShape) -> float:
    """Homodyne variance of the LO-selected quadrature, in shot-noise units."""
    if lo.dim != v_pix.dim:
        raise ValueError(f"LO has {lo.dim} pixels, state has {v_pix.dim}")
    if abs(float(np.sum(np.abs(lo.c) ** 2)) - 1.0) > _NORM_TOL * lo.dim:
        raise ValueError("LO shape is not normalised")
    return quadrature_variance(v_pix, lo.quadrature_vector())


def phase_sweep(v_pix: CovarianceMatrix, c, thetas=None) -> list[tuple[float, float]]:
    """Variance of the LO mode ``c`` versus global phase.

    The curve is pi-periodic.  Default grid: 201 points on [0, pi].
    """
    grid = DEFAULT_THETA_GRID if thetas is None else np.atleast_1d(np.asarray(thetas, dtype=float))
    if grid.size == 0:
        raise ValueError("phase grid must be non-empty")
    lo = LOShape(c=c)
    return [(float(t), measure_variance(v_pix, LOShape(c=lo.c, theta=float(t)))) for t in grid]


def pixel_covariance_blocks(
    v_pix: CovarianceMatrix, subtract_shot_noise: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Amplitude and phase covariance blocks of the pixel-basis state.

    With ``subtract_shot_noise`` the vacuum contribution is removed from the
    diagonals, which is how measured correlation matrices are usually shown.
    """
    cx = v_pix.x_block.copy()
    cp = v_pix.p_block.copy()
    if subtract_shot_noise:
        cx[np.diag_indices_from(cx)] -= 1.0
        cp[np.diag_indices_from(cp)] -= 1.0
    return cx, cp
