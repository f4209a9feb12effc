"""Command-line front-end: reproducible resource, cluster and secret runs.

Every command validates its inputs, computes everything in memory, and only
then writes its outputs plus a ``manifest.json`` into the output directory,
so a failed run leaves no partial files.  Floating-point output carries 12
significant digits; identical manifests reproduce byte-identical files.

Exit codes: 0 success, 2 input error, 3 protocol/solver error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .cluster import (
    BUILTIN_GRAPHS,
    Graph,
    OptimizerConfig,
    builtin_graph,
    cluster_unitary,
    nullifier_variances,
    optimize_orthogonal,
    vacuum_references,
)
from .gaussian import (
    ModeUnitary,
    apply_symplectic,
    eigenmode_extract,
    unitary_to_symplectic,
    variance_to_db,
)
from .resource import ResourceSpec, SqueezingProfile, build_pixel_covariance, reference_profile
from .secret import (
    SharingNetwork,
    SingularSystem,
    pentagon_dealer_unitary,
    protocol_run,
    reconstructed_covariance,
    solve_all_parties,
    sweep_fidelity,
)

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_PROTOCOL_ERROR = 3


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _write_table(path: Path, header: list[str], rows: list[list], fmt: str) -> None:
    if fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        serialize.dump_json({"columns": header, "rows": payload}, path.with_suffix(".json"))
        return
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(x if isinstance(x, str) else _fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def _write_manifest(out_dir: Path, command: str, args: argparse.Namespace) -> None:
    manifest = {
        "format_version": FORMAT_VERSION,
        "command": command,
        "inputs": {
            "input": args.input,
            "profile": args.profile,
            "loss": args.loss,
            "mode": getattr(args, "mode", None),
        },
        "seed": args.seed,
        "format": args.format,
    }
    serialize.dump_json(manifest, out_dir / "manifest.json")


def _load_profile(arg: str | None) -> SqueezingProfile:
    """A profile argument is a leading-dB number or a JSON file."""
    if arg is None:
        return reference_profile()
    try:
        return reference_profile(float(arg))
    except ValueError as exc:
        if "leading squeezing" in str(exc):
            raise
    obj = serialize.load_json(arg)
    return SqueezingProfile.from_db(np.asarray(obj["profile_db"], dtype=float))


def _load_graph(arg: str) -> Graph:
    """A graph argument is ``name-n`` (builtin) or a JSON file."""
    name, sep, count = arg.rpartition("-")
    if name in BUILTIN_GRAPHS and sep and count.isdigit():
        return builtin_graph(name, int(count))
    if Path(arg).exists():
        return serialize.graph_from_dict(serialize.load_json(arg), arg)
    raise ValueError(
        f"unknown graph {arg!r}: expected <name>-<n> with name in {BUILTIN_GRAPHS} "
        f"or a JSON file path"
    )


def _lossy_profile(profile: SqueezingProfile, loss: float | None) -> SqueezingProfile:
    """Uniform loss acting on each squeezer: s -> (1 - eta) s + eta."""
    if not loss:
        return profile
    if not 0.0 <= loss <= 1.0:
        raise ValueError(f"loss must lie in [0, 1], got {loss}")
    return SqueezingProfile((1.0 - loss) * profile.variances + loss)


def cmd_resource(args: argparse.Namespace) -> int:
    if args.input:
        spec = serialize.resource_spec_from_dict(serialize.load_json(args.input), args.input)
    else:
        spec = ResourceSpec.default()
    if args.profile is not None:
        spec = ResourceSpec(profile=_load_profile(args.profile), u_sqz=spec.u_sqz,
                            loss=spec.loss, dark_noise=spec.dark_noise)
    if args.loss is not None:
        spec = ResourceSpec(profile=spec.profile, u_sqz=spec.u_sqz,
                            loss=np.full(spec.profile.size, args.loss),
                            dark_noise=spec.dark_noise)

    v_pix = build_pixel_covariance(spec)
    modes = eigenmode_extract(v_pix)
    rotated = apply_symplectic(unitary_to_symplectic(modes.basis), v_pix)
    x_vars = np.diag(rotated.x_block)
    squeezed = int(np.sum(modes.profile < 1.0 - 1e-9))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    serialize.dump_json(serialize.covariance_to_dict(v_pix), out_dir / "covariance.json")
    rows = [
        [k, modes.profile[k], variance_to_db(modes.profile[k]), x_vars[k]]
        for k in range(spec.profile.size)
    ]
    _write_table(out_dir / "eigenmodes.csv", ["mode", "p_variance", "p_db", "x_variance"],
                 rows, args.format)
    report = {
        "n_modes": spec.profile.size,
        "n_squeezed": squeezed,
        "leading_db": _fmt(variance_to_db(modes.profile[0])),
        "diagonalisation_residual": _fmt(modes.residual),
    }
    serialize.dump_json(report, out_dir / "report.json")
    _write_manifest(out_dir, "resource", args)
    return EXIT_OK


def cmd_cluster(args: argparse.Namespace) -> int:
    graph = _load_graph(args.input)
    profile = _lossy_profile(_load_profile(args.profile), args.loss)
    if profile.size < graph.n:
        raise ValueError(f"profile has {profile.size} modes, graph needs {graph.n}")

    cfg = OptimizerConfig(seed=args.seed)
    freedom, _history = optimize_orthogonal(graph, profile, cfg)
    u_net = cluster_unitary(graph) @ ModeUnitary(freedom.orthogonal.astype(complex))
    variances = nullifier_variances(graph, u_net, profile)
    refs = vacuum_references(graph)
    relative_db = np.array([variance_to_db(v / r) for v, r in zip(variances, refs)])

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = [
        [k, variances[k], relative_db[k], refs[k]]
        for k in range(graph.n)
    ]
    _write_table(out_dir / "nullifiers.csv",
                 ["node", "variance", "variance_db", "vacuum_reference"], rows, args.format)
    serialize.dump_json({"dim": graph.n, "data": freedom.orthogonal.tolist()},
                        out_dir / "orthogonal.json")
    q1, q2, q3 = np.percentile(relative_db, [25, 50, 75])
    stats = {
        "mean_db": _fmt(np.mean(relative_db)),
        "median_db": _fmt(q2),
        "first_quartile_db": _fmt(q1),
        "third_quartile_db": _fmt(q3),
        "min_db": _fmt(np.min(relative_db)),
        "max_db": _fmt(np.max(relative_db)),
        "mean_variance": _fmt(np.mean(variances)),
    }
    serialize.dump_json(stats, out_dir / "stats.json")
    _write_manifest(out_dir, "cluster", args)
    return EXIT_OK


def cmd_secret(args: argparse.Namespace) -> int:
    if args.input in (None, "builtin"):
        net = SharingNetwork(unitary=pentagon_dealer_unitary())
    else:
        net = serialize.sharing_network_from_dict(serialize.load_json(args.input), args.input)
    profile = _lossy_profile(_load_profile(args.profile), args.loss)

    out_dir = Path(args.out_dir)
    if args.mode == "sweep":
        grid = np.linspace(0.0, -15.0, 31)
        rows = sweep_fidelity(net, profile, grid)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_table(out_dir / "sweep.csv", ["leading_db", "f_min", "f_avg", "f_max"],
                     rows, args.format)
    else:
        fidelities = protocol_run(net, profile)
        solutions = solve_all_parties(net)
        rows = []
        for party in sorted(fidelities):
            rec = reconstructed_covariance(solutions[party], profile, net.secret_variances)
            label = "".join(str(p + 1) for p in party)
            rows.append([label, rec[0, 0], rec[1, 1], fidelities[party]])
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_table(out_dir / "parties.csv",
                     ["party", "fidelity_x_var", "fidelity_p_var", "fidelity"],
                     rows, args.format)
    _write_manifest(out_dir, "secret", args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combnet",
        description="Simulate Gaussian quantum networks carved from a multimode "
                    "squeezed comb by shaped homodyne detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("resource", "build the pixel-basis covariance and extract eigenmodes"),
        ("cluster", "optimise a cluster network and report nullifier variances"),
        ("secret", "run or sweep the five-player secret-sharing protocol"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--input", help="input file (or builtin selector)")
        cmd.add_argument("--profile", help="leading dB value or profile JSON file")
        cmd.add_argument("--out-dir", required=True, help="output directory")
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--loss", type=float, default=None,
                         help="uniform optical loss fraction in [0, 1]")
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.choices["secret"].add_argument("--mode", choices=("run", "sweep"), default="run")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"resource": cmd_resource, "cluster": cmd_cluster, "secret": cmd_secret}
    try:
        return handler[args.command](args)
    except SingularSystem as exc:
        print(f"combnet {args.command}: protocol error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL_ERROR
    except (ValueError, OSError, KeyError, IndexError) as exc:
        print(f"combnet {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
