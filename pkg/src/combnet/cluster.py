"""Cluster-state construction, nullifier variances and network optimisation.

A cluster state over a graph with adjacency matrix V is characterised by its
nullifiers ``delta = p_C - V x_C``, whose variances drop below the shot-noise
reference ``1 + sum_j V_kj^2`` once the resource is squeezed.  The canonical
network unitary ``(I + iV)(I + V^2)^(-1/2)`` satisfies the cluster condition
``Y = V X``; right-multiplying it by any real orthogonal matrix preserves the
graph, and that freedom is what the optimiser exploits to spread a
non-uniform squeezing budget evenly over the nullifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, sqrtm
from scipy.optimize import minimize

from .gaussian import STRUCTURAL_TOL, ModeUnitary
from .homodyne import LOShape
from .resource import SqueezingProfile

BUILTIN_GRAPHS = ("linear", "diagonal_square", "t_shape", "square", "star", "pentagon_dealer")


@dataclass(frozen=True)
class Graph:
    """Weighted undirected graph: real symmetric adjacency matrix, zero diagonal."""

    adjacency: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=float)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix must be exactly symmetric")
        if np.any(np.diag(adj) != 0):
            raise ValueError("adjacency diagonal must be exactly zero")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "n", adj.shape[0])

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build from [(i, j), ...] or [(i, j, weight), ...] with 0-based nodes."""
        adj = np.zeros((n, n))
        for edge in edges:
            i, j, *w = edge
            weight = float(w[0]) if w else 1.0
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValueError(f"invalid edge ({i}, {j}) for {n} nodes")
            adj[i, j] = adj[j, i] = weight
        return cls(adj)

    def edges(self) -> list[tuple[int, int, float]]:
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.adjacency[i, j] != 0:
                    out.append((i, j, float(self.adjacency[i, j])))
        return out


@dataclass(frozen=True)
class NullifierSet:
    """Coefficient rows expanding the nullifiers over squeezer quadratures.

    ``delta = mx @ x_sqz + mp @ p_sqz``.  A true cluster unitary has mx = 0,
    leaving only squeezed quadratures in every nullifier.
    """

    mx: np.ndarray
    mp: np.ndarray


@dataclass(frozen=True)
class OrthogonalFreedom:
    """Orthogonal matrix O = exp(A) parameterised by its antisymmetric generator."""

    orthogonal: np.ndarray
    generator: np.ndarray

    def __post_init__(self):
        o = np.array(self.orthogonal, dtype=float)
        a = np.array(self.generator, dtype=float)
        if np.max(np.abs(o @ o.T - np.eye(o.shape[0]))) > STRUCTURAL_TOL:
            raise ValueError("matrix is not orthogonal")
        if not np.array_equal(a, -a.T):
            raise ValueError("generator must be exactly antisymmetric")
        o.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "orthogonal", o)
        object.__setattr__(self, "generator", a)

    @classmethod
    def identity(cls, n: int) -> "OrthogonalFreedom":
        return cls(np.eye(n), np.zeros((n, n)))

    @classmethod
    def from_generator(cls, a: np.ndarray) -> "OrthogonalFreedom":
        a = np.asarray(a, dtype=float)
        a = 0.5 * (a - a.T)
        return cls(expm(a), a)


def builtin_graph(name: str, n: int) -> Graph:
    """Adjacency matrix of a named cluster shape on n nodes.

    Shapes: ``linear`` (path), ``diagonal_square`` (ladder of squares, one
    diagonal each, even n), ``t_shape`` (path with a pendant at its middle),
    ``square`` (4-cycle), ``star`` (hub plus spokes) and ``pentagon_dealer``
    (5-cycle of players, node 5 the dealer coupled to all of them).
    """
    if name == "linear":
        if n < 2:
            raise ValueError("linear graph needs n >= 2")
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if name == "diagonal_square":
        if n < 4 or n % 2 != 0:
            raise ValueError("diagonal_square graph needs even n >= 4")
        edges = [(2 * i, 2 * i + 1) for i in range(n // 2)]
        for i in range(n // 2 - 1):
            a, b = 2 * i, 2 * i + 1
            edges += [(a, a + 2), (b, b + 2), (a, b + 2)]
        return Graph.from_edges(n, edges)
    if name == "t_shape":
        if n < 4:
            raise ValueError("t_shape graph needs n >= 4")
        edges = [(i, i + 1) for i in range(n - 2)]
        edges.append(((n - 2) // 2, n - 1))
        return Graph.from_edges(n, edges)
    if name == "square":
        if n != 4:
            raise ValueError("square graph needs n = 4")
        return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    if name == "star":
        if n < 2:
            raise ValueError("star graph needs n >= 2")
        return Graph.from_edges(n, [(0, i) for i in range(1, n)])
    if name == "pentagon_dealer":
        if n != 6:
            raise ValueError("pentagon_dealer graph needs n = 6")
        edges = [(i, (i + 1) % 5) for i in range(5)] + [(i, 5) for i in range(5)]
        return Graph.from_edges(6, edges)
    raise ValueError(f"unknown graph name {name!r}; choose from {BUILTIN_GRAPHS}")


def cluster_unitary(g: Graph) -> ModeUnitary:
    """Canonical network unitary (I + iV)(I + V^2)^(-1/2) of a graph."""
    v = g.adjacency
    root_inv = np.linalg.inv(sqrtm(np.eye(g.n) + v @ v).real)
    u = ModeUnitary((np.eye(g.n) + 1j * v) @ root_inv)
    residual = np.max(np.abs(u.imag_part - v @ u.real_part))
    if residual > STRUCTURAL_TOL:
        raise ValueError(f"cluster condition violated at construction (residual {residual:.3e})")
    return u


def nullifier_matrix(g: Graph, u: ModeUnitary) -> NullifierSet:
    """Expand ``delta = p_C - V x_C`` over the squeezer quadratures.

    With ``U = X + iY``: the x-coefficients are ``Y - V X`` and the
    p-coefficients ``X + V Y``.
    """
    if g.n != u.dim:
        raise ValueError(f"graph has {g.n} nodes, unitary has {u.dim} modes")
    x, y = u.real_part, u.imag_part
    v = g.adjacency
    return NullifierSet(mx=y - v @ x, mp=x + v @ y)


def vacuum_references(g: Graph) -> np.ndarray:
    """Shot-noise variance of each nullifier: 1 + sum_j V_kj^2."""
    return 1.0 + np.sum(g.adjacency**2, axis=1)


def nullifier_variances(g: Graph, u: ModeUnitary, profile: SqueezingProfile) -> np.ndarray:
    """Operator-scaled nullifier variances on an uncorrelated squeezed resource.

    Profile entries are consumed most-squeezed first.  For nullifier k the
    variance is ``sum_j mx_kj^2 / s_j + sum_j mp_kj^2 s_j``; the first term
    vanishes for any unitary satisfying the cluster condition.
    """
    s = profile.squeezed_first(g.n)
    nm = nullifier_matrix(g, u)
    return nm.mx**2 @ (1.0 / s) + nm.mp**2 @ s


def nullifier_lo(g: Graph, u_lo: ModeUnitary, k: int) -> LOShape:
    """Pixel-basis LO shape measuring nullifier k of a network.

    ``u_lo`` maps pixel modes to cluster nodes.  The returned shape carries
    ``norm_sq = 1 + sum_j V_kj^2``, so the operator-scaled nullifier variance
    is ``measure_variance(...) * lo.norm_sq``.
    """
    if not 0 <= k < g.n:
        raise IndexError(f"nullifier index {k} out of range for {g.n} nodes")
    if g.n != u_lo.dim:
        raise ValueError(f"graph has {g.n} nodes, network map has {u_lo.dim} modes")
    combination = 1j * (np.eye(g.n)[k] + 1j * g.adjacency[k])
    return LOShape(c=u_lo.matrix.conj().T @ combination)


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings of the (1+lambda) evolution strategy over the orthogonal freedom."""

    seed: int = 0
    population: int = 16
    max_evals: int = 6000
    restarts: int = 3
    sigma0: float = 0.3
    polish: bool = True
    db_mean: bool = False

    def __post_init__(self):
        if self.population < 1:
            raise ValueError(f"population must be >= 1, got {self.population}")
        if self.max_evals < 1:
            raise ValueError(f"max_evals must be >= 1, got {self.max_evals}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.sigma0 <= 0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")


def _generator_from_params(params: np.ndarray, n: int) -> np.ndarray:
    a = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    a[iu] = params
    return a - a.T


def optimize_orthogonal(
    g: Graph, profile: SqueezingProfile, cfg: OptimizerConfig | None = None
) -> tuple[OrthogonalFreedom, list[tuple[int, float]]]:
    """Search the orthogonal freedom minimising the mean nullifier variance.

    A seeded (1+lambda) evolution strategy mutates the antisymmetric
    generator with Gaussian steps, adapting the step size by the 1/5 success
    rule, restarting from fresh generators, and finally polishing the best
    candidate with a deterministic direction-set search.  The identity is
    always evaluated first, so the result never does worse than O = I.

    Returns the optimised freedom and a history of (evaluations, best mean).
    """
    cfg = cfg or OptimizerConfig()
    n = g.n
    if n < 2:
        raise ValueError("optimisation needs at least 2 modes")
    s = profile.squeezed_first(n)
    u0 = cluster_unitary(g)
    x0, y0 = u0.real_part, u0.imag_part
    v = g.adjacency
    mp0 = x0 + v @ y0  # cluster condition makes the mx term vanish
    refs = vacuum_references(g)

    def objective(params: np.ndarray) -> float:
        mp = mp0 @ expm(_generator_from_params(params, n))
        variances = mp**2 @ s
        if cfg.db_mean:
            return float(np.mean(10.0 * np.log10(variances / refs)))
        return float(np.mean(variances))

    dof = n * (n - 1) // 2
    rng = np.random.default_rng(cfg.seed)
    evals = 0
    history: list[tuple[int, float]] = []

    best_params = np.zeros(dof)
    best_f = objective(best_params)
    evals += 1
    history.append((evals, best_f))

    budget = max(cfg.max_evals - evals, 0)
    per_restart = max(budget // cfg.restarts, cfg.population)
    for restart in range(cfg.restarts):
        if restart == 0:
            parent = np.zeros(dof)
            parent_f = best_f
        else:
            parent = rng.normal(scale=0.8, size=dof)
            parent_f = objective(parent)
            evals += 1
        sigma = cfg.sigma0
        used = 0
        while used + cfg.population <= per_restart:
            children = parent + sigma * rng.standard_normal((cfg.population, dof))
            values = [objective(child) for child in children]
            used += cfg.population
            evals += cfg.population
            idx = int(np.argmin(values))
            if values[idx] < parent_f:
                parent, parent_f = children[idx], values[idx]
                sigma *= 1.22
            else:
                sigma *= 0.84
            if parent_f < best_f:
                best_params, best_f = parent, parent_f
                history.append((evals, best_f))
            if sigma < 1e-9:
                break

    if cfg.polish and dof > 0:
        result = minimize(objective, best_params, method="Powell",
                          options={"xtol": 1e-10, "ftol": 1e-12, "maxfev": 200 * dof})
        evals += result.nfev
        if result.fun < best_f:
            best_params, best_f = result.x, float(result.fun)
            history.append((evals, best_f))

    generator = _generator_from_params(best_params, n)
    return OrthogonalFreedom.from_generator(generator), history
