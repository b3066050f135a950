"""Command-line entry point.

Subcommands: ``run`` (Monte Carlo sweep to CSV/JSON), ``draw`` (one topology
to SVG), ``radius`` (critical radius table) and ``gain`` (link gain between
two result files). Exit status is 0 on success, 2 on bad arguments and 1 on
runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from pathlib import Path

from . import __version__
from .experiment import (
    ExperimentConfig,
    TopologyKind,
    build_topology,
    link_gain,
    resolve_workers,
    run_experiment,
)
from .graph import degree_stats, is_connected, sample_uniform_points
from .render import RenderOptions, render_svg
from .results import read_results, write_csv, write_histogram_csv, write_json
from .topology import REMOVAL_RULES, critical_radius

log = logging.getLogger("kjnn")


class ArgumentError(Exception):
    """Bad combination of otherwise well-formed flags (exit status 2)."""


def parse_range(text: str) -> tuple[int, ...]:
    """``"100:1000:100"`` -> (100, 200, ..., 1000); stop is inclusive; a bare int is one value."""
    parts = text.split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}") from None
    if len(nums) == 1:
        return (nums[0],)
    if len(nums) == 2:
        nums.append(1)
    if len(nums) != 3 or nums[2] <= 0 or nums[1] < nums[0]:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}; expected start:stop[:step]")
    start, stop, step = nums
    return tuple(range(start, stop + 1, step))


def _add_topology_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--topology", required=True, choices=[k.value for k in TopologyKind])
    p.add_argument("--k", type=int, default=5, help="neighbor-list length (also the radius formula's k)")
    p.add_argument("--j", type=int, default=None, help="cut rank, 1 <= j < k (kj-nn and kj-nn-rgg)")
    p.add_argument("--r", type=float, default=None, help="fixed radius; default is the critical-radius formula")
    p.add_argument("--sigma", type=float, default=3.0, help="constant of the radius formula")
    p.add_argument("--removal", choices=REMOVAL_RULES, default="per-node")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kjnn", description="Symmetric (k,j)-NN topology simulator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Monte Carlo sweep over node counts")
    _add_topology_flags(run)
    run.add_argument("--n", type=parse_range, default=parse_range("100:1000:100"), help="start:stop:step or a single n")
    run.add_argument("--trials", type=int, default=100)
    run.add_argument("--out", required=True)
    run.add_argument("--format", choices=["csv", "json"], default="csv")
    run.add_argument("--histogram", default=None, help="also write the mean degree histogram (single --n only)")

    draw = sub.add_parser("draw", help="render one topology as SVG")
    _add_topology_flags(draw)
    draw.add_argument("--n", type=int, default=100)
    draw.add_argument("--out", required=True)
    draw.add_argument("--size", type=int, default=RenderOptions.size, help="canvas size in pixels")
    draw.add_argument("--node-radius", type=float, default=RenderOptions.node_radius)
    draw.add_argument("--stroke-width", type=float, default=RenderOptions.stroke_width)
    draw.add_argument("--node-fill", default=RenderOptions.node_fill)
    draw.add_argument("--edge-stroke", default=RenderOptions.edge_stroke)

    radius = sub.add_parser("radius", help="print critical transmission radii")
    radius.add_argument("--k", type=int, default=5)
    radius.add_argument("--sigma", type=float, default=3.0)
    radius.add_argument("--n", type=parse_range, default=parse_range("100:1000:100"))

    gain = sub.add_parser("gain", help="link gain per node between two result files")
    gain.add_argument("base")
    gain.add_argument("reduced")
    gain.add_argument("--out", default=None)
    return parser


def _config(args, n_values, trials) -> ExperimentConfig:
    kind = TopologyKind(args.topology)
    j = args.j
    if kind.uses_j and j is None:
        raise ArgumentError(f"--j is required for --topology {kind}")
    try:
        return ExperimentConfig(
            kind=kind,
            k=args.k,
            j=j if j is not None else 1,
            n_values=n_values,
            trials=trials,
            master_seed=args.seed,
            sigma=args.sigma,
            r=args.r,
            removal=args.removal,
        )
    except ValueError as exc:
        raise ArgumentError(str(exc)) from None


def _check_writable(path: str) -> None:
    parent = Path(path).resolve().parent
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise OSError(f"cannot write to {path}")


def cmd_run(args) -> int:
    config = _config(args, args.n, args.trials)
    if args.histogram and len(config.n_values) != 1:
        raise ArgumentError("--histogram needs a single --n value")
    _check_writable(args.out)
    if args.histogram:
        _check_writable(args.histogram)
    log.info("running %s over %d node counts, %d trials each, %d worker(s)",
             config.kind, len(config.n_values), config.trials, resolve_workers())
    results = run_experiment(config)
    (write_json if args.format == "json" else write_csv)(results, args.out)
    if args.histogram:
        write_histogram_csv(results[0].degree_histogram, args.histogram)
    for res in results:
        print(f"n={res.n} P(connected)={res.connectivity_probability:.3f} mean_degree={res.mean_degree:.4f}")
    return 0


def cmd_draw(args) -> int:
    config = _config(args, (args.n,), 1)
    _check_writable(args.out)
    cloud = sample_uniform_points(args.n, args.seed)
    g, r = build_topology(config, cloud)
    opts = RenderOptions(
        size=args.size,
        node_radius=args.node_radius,
        stroke_width=args.stroke_width,
        node_fill=args.node_fill,
        edge_stroke=args.edge_stroke,
    )
    Path(args.out).write_text(render_svg(cloud, g, opts), encoding="utf-8")
    stats = degree_stats(g)
    extra = f" r={r:.6f}" if r is not None else ""
    print(f"n={g.n} edges={g.num_edges} mean_degree={stats.mean:.4f} connected={is_connected(g)}{extra}")
    return 0


def cmd_radius(args) -> int:
    print("n,k,sigma,xi,r")
    for n in args.n:
        try:
            rp = critical_radius(n, args.k, args.sigma)
        except ValueError as exc:
            raise ArgumentError(str(exc)) from None
        print(f"{rp.n},{rp.k},{rp.sigma:g},{rp.xi:.6f},{rp.r_n:.6f}")
    return 0


def cmd_gain(args) -> int:
    base = {r.n: r for r in read_results(args.base)}
    reduced = {r.n: r for r in read_results(args.reduced)}
    common = sorted(base.keys() & reduced.keys())
    if not common:
        raise ValueError("the two result files share no node count")
    lines = ["n,base_degree,reduced_degree,gain"]
    gains = []
    for n in common:
        g = link_gain(base[n], reduced[n])
        gains.append(g)
        lines.append(f"{n},{base[n].mean_degree:.6f},{reduced[n].mean_degree:.6f},{g:.6f}")
    lines.append(f"mean,,,{math.fsum(gains) / len(gains):.6f}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


COMMANDS = {"run": cmd_run, "draw": cmd_draw, "radius": cmd_radius, "gain": cmd_gain}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ArgumentError as exc:
        parser.print_usage(sys.stderr)
        print(f"kjnn: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"kjnn: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
