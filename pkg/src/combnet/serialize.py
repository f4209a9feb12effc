"""JSON interchange for matrices, graphs, resource specs and networks.

Formats (all matrices row-major IEEE-754 doubles):

* unitary:      ``{"dim": n, "re": [[...]], "im": [[...]]}``
* covariance /
  symplectic:   ``{"dim": n, "data": [[...]]}``  (2n x 2n)
* graph:        ``{"n": n, "edges": [[i, j, weight], ...]}`` (0-indexed)
* resource:     ``{"profile_db": [...], "u_sqz": <unitary> | "default",
                  "loss": [...] | scalar, "dark_noise": scalar}``
* network:      unitary keys plus ``{"dealer_index": i,
                  "secret": {"vx": ..., "vp": ...}}``
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .cluster import Graph
from .gaussian import CovarianceMatrix, ModeUnitary, SymplecticMatrix
from .resource import ResourceSpec, SqueezingProfile, default_usqz
from .secret import SharingNetwork


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise ValueError(f"{context}: missing required key {key!r}")
    return obj[key]


def load_json(path) -> dict:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: expected a JSON object at top level")
    return obj


def dump_json(obj: dict, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def unitary_to_dict(u: ModeUnitary) -> dict:
    return {"dim": u.dim, "re": u.real_part.tolist(), "im": u.imag_part.tolist()}


def unitary_from_dict(obj: dict, context: str = "unitary") -> ModeUnitary:
    dim = int(_require(obj, "dim", context))
    re = np.asarray(_require(obj, "re", context), dtype=float)
    im = np.asarray(_require(obj, "im", context), dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(f"{context}: 're'/'im' must be {dim}x{dim} matrices")
    return ModeUnitary.from_blocks(re, im)


def covariance_to_dict(v: CovarianceMatrix) -> dict:
    return {"dim": v.dim, "data": v.data.tolist()}


def covariance_from_dict(obj: dict, context: str = "covariance") -> CovarianceMatrix:
    dim = int(_require(obj, "dim", context))
    data = np.asarray(_require(obj, "data", context), dtype=float)
    if data.shape != (2 * dim, 2 * dim):
        raise ValueError(f"{context}: 'data' must be a {2 * dim}x{2 * dim} matrix")
    return CovarianceMatrix(data)


def symplectic_to_dict(s: SymplecticMatrix) -> dict:
    return {"dim": s.dim, "data": s.data.tolist()}


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [[i, j, w] for i, j, w in g.edges()]}


def graph_from_dict(obj: dict, context: str = "graph") -> Graph:
    n = int(_require(obj, "n", context))
    edges = _require(obj, "edges", context)
    return Graph.from_edges(n, [(int(e[0]), int(e[1]), *e[2:3]) for e in edges])


def resource_spec_from_dict(obj: dict, context: str = "resource spec") -> ResourceSpec:
    profile = SqueezingProfile.from_db(
        np.asarray(_require(obj, "profile_db", context), dtype=float)
    )
    u_entry = obj.get("u_sqz", "default")
    if u_entry == "default":
        u_sqz = default_usqz(profile.size)
    else:
        u_sqz = unitary_from_dict(u_entry, f"{context}: u_sqz")
    return ResourceSpec(
        profile=profile,
        u_sqz=u_sqz,
        loss=obj.get("loss"),
        dark_noise=float(obj.get("dark_noise", 0.0)),
    )


def sharing_network_from_dict(obj: dict, context: str = "sharing network") -> SharingNetwork:
    unitary = unitary_from_dict(obj, context)
    secret = obj.get("secret", {})
    return SharingNetwork(
        unitary=unitary,
        dealer_index=int(obj.get("dealer_index", 5)),
        secret_variances=(float(secret.get("vx", 1.0)), float(secret.get("vp", 1.0))),
    )
