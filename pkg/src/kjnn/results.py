"""CSV/JSON serialization of aggregate results and degree histograms."""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Mapping, Sequence
from pathlib import Path

from .experiment import AggregateResult, TopologyKind

CSV_HEADER = (
    "topology",
    "k",
    "j",
    "n",
    "trials",
    "seed",
    "connectivity_probability",
    "mean_degree",
    "min_degree",
    "max_degree",
    "radius",
)
HISTOGRAM_HEADER = ("degree", "proportion")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def _row(res: AggregateResult) -> list[str]:
    return [
        str(res.kind),
        _fmt(res.k),
        _fmt(res.j),
        _fmt(res.n),
        _fmt(res.trials),
        _fmt(res.master_seed),
        _fmt(float(res.connectivity_probability)),
        _fmt(float(res.mean_degree)),
        _fmt(float(res.mean_min_degree)),
        _fmt(float(res.mean_max_degree)),
        _fmt(None if res.radius is None else float(res.radius)),
    ]


def format_csv(results: Sequence[AggregateResult]) -> str:
    if not results:
        raise ValueError("no results to write")
    lines = [",".join(CSV_HEADER)]
    lines += [",".join(_row(r)) for r in results]
    return "\n".join(lines) + "\n"


def write_csv(results: Sequence[AggregateResult], path) -> None:
    text = format_csv(results)
    Path(path).write_text(text, encoding="utf-8", newline="")


def _opt_int(s: str) -> int | None:
    return int(s) if s != "" else None


def _opt_float(s: str) -> float | None:
    return float(s) if s != "" else None


def read_csv(path) -> list[AggregateResult]:
    """Parse a file written by :func:`write_csv`; degree histograms are not stored there."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            AggregateResult(
                kind=TopologyKind(row["topology"]),
                k=_opt_int(row["k"]),
                j=_opt_int(row["j"]),
                n=int(row["n"]),
                trials=int(row["trials"]),
                master_seed=int(row["seed"]),
                connectivity_probability=float(row["connectivity_probability"]),
                mean_degree=float(row["mean_degree"]),
                mean_min_degree=float(row["min_degree"]),
                mean_max_degree=float(row["max_degree"]),
                radius=_opt_float(row["radius"]),
            )
            for row in reader
        ]


def to_json_obj(res: AggregateResult) -> dict:
    return {
        "topology": str(res.kind),
        "k": res.k,
        "j": res.j,
        "n": res.n,
        "trials": res.trials,
        "seed": res.master_seed,
        "connectivity_probability": res.connectivity_probability,
        "mean_degree": res.mean_degree,
        "min_degree": res.mean_min_degree,
        "max_degree": res.mean_max_degree,
        "radius": res.radius,
        "degree_histogram": {str(d): p for d, p in sorted(res.degree_histogram.items())},
    }


def from_json_obj(obj: Mapping) -> AggregateResult:
    return AggregateResult(
        kind=TopologyKind(obj["topology"]),
        k=obj["k"],
        j=obj["j"],
        n=obj["n"],
        trials=obj["trials"],
        master_seed=obj["seed"],
        connectivity_probability=obj["connectivity_probability"],
        mean_degree=obj["mean_degree"],
        mean_min_degree=obj["min_degree"],
        mean_max_degree=obj["max_degree"],
        radius=obj["radius"],
        degree_histogram={int(d): p for d, p in obj.get("degree_histogram", {}).items()},
    )


def write_json(results: Sequence[AggregateResult], path) -> None:
    if not results:
        raise ValueError("no results to write")
    text = json.dumps({"results": [to_json_obj(r) for r in results]}, indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_json(path) -> list[AggregateResult]:
    with open(path, encoding="utf-8") as fh:
        return [from_json_obj(o) for o in json.load(fh)["results"]]


def read_results(path) -> list[AggregateResult]:
    """Load results from either format, picked by file extension."""
    if str(path).endswith(".json"):
        return read_json(path)
    return read_csv(path)


def write_histogram_csv(hist: Mapping[int, float], path) -> None:
    if not hist:
        raise ValueError("empty histogram")
    total = math.fsum(hist.values())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"histogram proportions sum to {total!r}, not 1")
    lines = [",".join(HISTOGRAM_HEADER)]
    lines += [f"{int(d)},{float(hist[d]):.6f}" for d in sorted(hist)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
