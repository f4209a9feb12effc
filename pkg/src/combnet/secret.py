"""Five-player / one-dealer continuous-variable secret sharing.

Six squeezed modes feed a fixed six-mode network; the sixth squeezer carries
the secret and the sixth network mode is held by the dealer.  Any three
players may combine their local quadrature measurements with the dealer's
broadcast p-measurement into estimators of the secret quadratures in which
every anti-squeezed resource quadrature cancels exactly; the residual
squeezed-quadrature leakage sets the retrieval fidelity.  No pair of players
can achieve that cancellation, which is what protects the secret.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.linalg import polar

from .gaussian import ModeUnitary, unitarity_residual
from .resource import SqueezingProfile

_CONSTRAINT_TOL = 1e-8

# Measured six-mode network of the pentagon-plus-dealer cluster, quoted to
# four decimals; re-unitarised by polar projection on load.
_PENTAGON_REAL = np.array([
    [0.6234, 0.0078, -0.1375, -0.1375, 0.0078, -0.0591],
    [0.0078, 0.6234, 0.0078, -0.1375, -0.1375, -0.0591],
    [-0.1375, 0.0078, 0.6234, 0.0078, -0.1375, -0.0591],
    [-0.1375, -0.1375, 0.0078, 0.6233, 0.0078, -0.0591],
    [0.0078, -0.1375, -0.1375, 0.0078, 0.6234, -0.0591],
    [-0.0591, -0.0591, -0.0591, -0.0591, -0.0591, 0.4822],
])
_PENTAGON_IMAG = np.array([
    [-0.0434, 0.4268, -0.1887, -0.1887, 0.4268, 0.3641],
    [0.4268, -0.0434, 0.4268, -0.1887, -0.1887, 0.3641],
    [-0.1887, 0.4268, -0.04342, 0.4268, -0.1887, 0.3641],
    [-0.1887, -0.1887, 0.4268, -0.0434, 0.4268, 0.3641],
    [0.4268, -0.1887, -0.1887, 0.4268, -0.04342, 0.3641],
    [0.3641, 0.3641, 0.3641, 0.3641, 0.3641, -0.2954],
])


class SingularSystem(Exception):
    """The reconstruction system has no solution for this network and party."""


@dataclass(frozen=True)
class SharingNetwork:
    """Six-mode sharing network: unitary, dealer mode, secret variances."""

    unitary: ModeUnitary
    dealer_index: int = 5
    secret_variances: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.unitary.dim != 6:
            raise ValueError(f"sharing network must have 6 modes, got {self.unitary.dim}")
        if not 0 <= self.dealer_index < 6:
            raise ValueError(f"dealer index {self.dealer_index} out of range")
        vx, vp = self.secret_variances
        if vx <= 0 or vp <= 0:
            raise ValueError(f"secret variances must be positive, got {self.secret_variances}")

    @property
    def players(self) -> tuple[int, ...]:
        return tuple(i for i in range(6) if i != self.dealer_index)


@dataclass(frozen=True)
class ReconstructionCoefficients:
    """Measurement weights of one quadrature estimator.

    ``x_weights``/``p_weights`` multiply the three players' local x and p
    quadratures; ``dealer_weight`` multiplies the dealer's broadcast
    p-measurement.
    """

    x_weights: np.ndarray
    p_weights: np.ndarray
    dealer_weight: float


@dataclass(frozen=True)
class AccessSolution:
    """Solved reconstruction for one three-player access party.

    ``x_leakage``/``p_leakage`` are the residual coefficients on the five
    squeezed resource quadratures in the x and p estimators; they vanish in
    the infinite-squeezing limit and set the retrieval fidelity otherwise.
    ``constraint_residual`` is the worst violation of the cancellation
    conditions (anti-squeezed and conjugate-secret coefficients zero, secret
    coefficient one) across both estimators.
    """

    party: tuple[int, int, int]
    x_coeffs: ReconstructionCoefficients
    p_coeffs: ReconstructionCoefficients
    x_leakage: np.ndarray
    p_leakage: np.ndarray
    constraint_residual: float


def pentagon_dealer_unitary() -> ModeUnitary:
    """The built-in six-mode sharing unitary (nearest unitary to the quoted values)."""
    u, _ = polar(_PENTAGON_REAL + 1j * _PENTAGON_IMAG)
    return ModeUnitary(u)


def quoted_pentagon_parts() -> tuple[np.ndarray, np.ndarray]:
    """The four-decimal network values as quoted, before re-unitarisation."""
    return _PENTAGON_REAL.copy(), _PENTAGON_IMAG.copy()


def _quadrature_relations(net: SharingNetwork) -> tuple[np.ndarray, np.ndarray]:
    """Rows expanding each network quadrature over (x_sqz(6), p_sqz(6)).

    Row i of the first matrix expands x_net_i, of the second p_net_i.
    """
    x, y = net.unitary.real_part, net.unitary.imag_part
    return np.hstack([x, -y]), np.hstack([y, x])


def _solve_combination(net: SharingNetwork, members: tuple[int, ...], target: str,
                       pivot: int | None = None):
    """Find weights making the members+dealer combination a secret estimator.

    The dealer's p-measurement relation is used to eliminate one
    anti-squeezed resource quadrature (the pivot) from the members' quadrature
    relations; the remaining cancellation conditions (zero on the other
    anti-squeezed quadratures, one on the target secret quadrature, zero on
    its conjugate) form a linear system in the members' measurement weights.
    Returns (coefficients, leakage, residual).
    """
    x_rows, p_rows = _quadrature_relations(net)
    dealer_row = p_rows[net.dealer_index]
    secret_slot = 5  # the sixth squeezer carries the secret
    resource_slots = list(range(5))

    if pivot is None:
        pivot = resource_slots[int(np.argmax(np.abs(dealer_row[resource_slots])))]
    if pivot not in resource_slots:
        raise ValueError(f"pivot must be a resource slot 0..4, got {pivot}")
    dk = dealer_row[pivot]
    if abs(dk) < 1e-10:
        raise SingularSystem(
            "dealer measurement carries no anti-squeezed component to eliminate"
        )

    # Substituting the pivot quadrature zeroes its slot in every member row
    # and attributes the transferred part to the dealer's broadcast.
    member_rows = [x_rows[i] for i in members] + [p_rows[i] for i in members]
    factors = np.array([row[pivot] / dk for row in member_rows])
    eliminated = np.array(member_rows) - factors[:, None] * dealer_row[None, :]

    anti = [j for j in resource_slots if j != pivot]
    constraint_slots = anti + [secret_slot, 6 + secret_slot]
    target_slot = secret_slot if target == "x" else 6 + secret_slot
    rhs = np.zeros(len(constraint_slots))
    rhs[constraint_slots.index(target_slot)] = 1.0

    system = eliminated[:, constraint_slots].T  # (6, 2m)
    weights, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    coeffs = weights @ eliminated
    residual = float(np.max(np.abs(coeffs[constraint_slots] - rhs)))
    m = len(members)
    solution = ReconstructionCoefficients(
        x_weights=weights[:m].copy(),
        p_weights=weights[m : 2 * m].copy(),
        dealer_weight=float(-weights @ factors),
    )
    leakage = coeffs[6 : 6 + 5].copy()
    return solution, leakage, residual


def access_party_solve(net: SharingNetwork, party, pivot: int | None = None) -> AccessSolution:
    """Solve both quadrature estimators for a three-player access party.

    Raises SingularSystem when the cancellation conditions cannot be met,
    which signals a network unsuitable for secret sharing.
    """
    party = tuple(int(i) for i in party)
    if len(set(party)) != 3:
        raise ValueError(f"access party must be 3 distinct players, got {party}")
    if net.dealer_index in party or not all(p in net.players for p in party):
        raise ValueError(f"party {party} must consist of players {net.players}")

    x_coeffs, x_leakage, res_x = _solve_combination(net, party, "x", pivot)
    p_coeffs, p_leakage, res_p = _solve_combination(net, party, "p", pivot)
    residual = max(res_x, res_p)
    if residual > _CONSTRAINT_TOL:
        raise SingularSystem(
            f"no exact reconstruction for party {party} (constraint residual {residual:.3e})"
        )
    return AccessSolution(
        party=party,
        x_coeffs=x_coeffs,
        p_coeffs=p_coeffs,
        x_leakage=x_leakage,
        p_leakage=p_leakage,
        constraint_residual=residual,
    )


def pair_infeasibility(net: SharingNetwork, pair) -> float:
    """Least-squares constraint residual of the two-player reconstruction.

    A residual above ~1e-6 certifies that the pair cannot cancel the
    anti-squeezed quadratures and therefore cannot retrieve the secret.
    Returns the larger of the x- and p-estimator residuals.
    """
    pair = tuple(int(i) for i in pair)
    if len(set(pair)) != 2:
        raise ValueError(f"pair must be 2 distinct players, got {pair}")
    if net.dealer_index in pair or not all(p in net.players for p in pair):
        raise ValueError(f"pair {pair} must consist of players {net.players}")
    _, _, res_x = _solve_combination(net, pair, "x")
    _, _, res_p = _solve_combination(net, pair, "p")
    return max(res_x, res_p)


def reconstructed_covariance(sol: AccessSolution, profile: SqueezingProfile,
                             secret: tuple[float, float] = (1.0, 1.0)) -> np.ndarray:
    """Diagonal 2x2 covariance of the reconstructed secret.

    The five most-squeezed profile entries feed the players, so each
    estimator variance is the secret variance plus the leakage-weighted sum
    of squeezed variances.
    """
    s = profile.squeezed_first(5)
    vx = secret[0] + float(sol.x_leakage**2 @ s)
    vp = secret[1] + float(sol.p_leakage**2 @ s)
    return np.diag([vx, vp])


def fidelity(v_s: np.ndarray, v_res: np.ndarray, alpha=None) -> float:
    """Fidelity between two single-mode Gaussian states.

    ``F = 2 / (sqrt(A + B) - sqrt(B))`` with ``A = det(V_s + V_reS)`` and
    ``B = (det V_s - 1)(det V_reS - 1)``; a nonzero mean difference ``alpha``
    contributes the factor ``exp(-alpha^T (V_s + V_reS)^-1 alpha)``.
    """
    v_s = np.asarray(v_s, dtype=float)
    v_res = np.asarray(v_res, dtype=float)
    for name, mat in (("V_s", v_s), ("V_reS", v_res)):
        if mat.shape != (2, 2):
            raise ValueError(f"{name} must be 2x2, got {mat.shape}")
        if np.min(np.linalg.eigvalsh(0.5 * (mat + mat.T))) <= 0:
            raise ValueError(f"{name} is not positive definite")
    total = v_s + v_res
    a = float(np.linalg.det(total))
    b = float((np.linalg.det(v_s) - 1.0) * (np.linalg.det(v_res) - 1.0))
    value = 2.0 / (np.sqrt(a + b) - np.sqrt(max(b, 0.0)))
    if alpha is not None:
        alpha = np.asarray(alpha, dtype=float)
        value *= float(np.exp(-alpha @ np.linalg.solve(total, alpha)))
    return value


def all_parties(net: SharingNetwork) -> list[tuple[int, int, int]]:
    return [tuple(c) for c in combinations(net.players, 3)]


def solve_all_parties(net: SharingNetwork) -> dict[tuple[int, int, int], AccessSolution]:
    return {party: access_party_solve(net, party) for party in all_parties(net)}


def protocol_run(net: SharingNetwork, profile: SqueezingProfile) -> dict[tuple[int, int, int], float]:
    """Retrieval fidelity of every three-player access party.

    The secret is taken zero-mean with the network's secret variances, so the
    fidelity follows directly from the reconstructed covariance.
    """
    solutions = solve_all_parties(net)
    v_s = np.diag(net.secret_variances)
    return {
        party: fidelity(v_s, reconstructed_covariance(sol, profile, net.secret_variances))
        for party, sol in solutions.items()
    }


def sweep_fidelity(net: SharingNetwork, base_profile: SqueezingProfile,
                   leading_db_grid) -> list[tuple[float, float, float, float]]:
    """Min/avg/max party fidelity versus overall squeezing level.

    Each grid point rescales the base profile's dB values by a common factor
    so its leading mode sits at the grid value.  Returns rows of
    ``(leading_db, f_min, f_avg, f_max)``.
    """
    grid = np.atleast_1d(np.asarray(leading_db_grid, dtype=float))
    if np.any(grid > 0):
        raise ValueError("squeezing grid must be non-positive dB values")
    solutions = solve_all_parties(net)
    v_s = np.diag(net.secret_variances)
    base_db = base_profile.db
    leading = base_db[np.argmin(base_db)]
    rows = []
    for level in grid:
        scale = 0.0 if leading == 0 else level / leading
        profile = SqueezingProfile.from_db(base_db * scale)
        values = [
            fidelity(v_s, reconstructed_covariance(sol, profile, net.secret_variances))
            for sol in solutions.values()
        ]
        rows.append((float(level), float(np.min(values)), float(np.mean(values)),
                     float(np.max(values))))
    return rows


def projection_correction() -> float:
    """Largest per-entry change applied by re-unitarising the quoted network."""
    quoted = _PENTAGON_REAL + 1j * _PENTAGON_IMAG
    return float(np.max(np.abs(pentagon_dealer_unitary().matrix - quoted)))


__all__ = [
    "AccessSolution",
    "ReconstructionCoefficients",
    "SharingNetwork",
    "SingularSystem",
    "access_party_solve",
    "all_parties",
    "fidelity",
    "pair_infeasibility",
    "pentagon_dealer_unitary",
    "projection_correction",
    "protocol_run",
    "quoted_pentagon_parts",
    "reconstructed_covariance",
    "solve_all_parties",
    "sweep_fidelity",
    "unitarity_residual",
]
