"""Command-line front end.

Subcommands: ``simulate`` (Monte Carlo sweep from a JSON config),
``detect`` (memberships for one graph), ``scan-k`` (modularity curve
over community counts), ``datasets`` (regression suite over registered
real networks). All outputs are CSV/JSON; reruns with identical
arguments and seeds reproduce output files byte for byte.

Exit codes: 0 success, 2 configuration error, 3 I/O error,
4 estimation failure.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from .datasets import DATASETS, available_datasets
from .dfsp import EstimationError
from .harness import (
    ExperimentConfig,
    PROFILES,
    detect_graph,
    load_graph_file,
    run_dataset_suite,
    run_simulation,
    write_dataset_csv,
    write_membership_csv,
)

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_ESTIMATION = 4


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.version_option(package_name="mmdf")
def main() -> None:
    """Overlapping community detection for weighted and signed networks."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(), help="JSON experiment config.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True)
@click.option("--profile", type=click.Choice(sorted(PROFILES)), default=None,
              help="Replication profile override (paper=100, ci=25).")
@click.option("--workers", type=int, default=1, show_default=True)
def simulate(config_path: str, seed: int | None, out_dir: str, profile: str | None, workers: int) -> None:
    """Run a Monte Carlo sweep and write sweep.csv / sweep.json."""
    try:
        config = ExperimentConfig.from_json(config_path)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read config: {exc}")
    except (ValueError, KeyError) as exc:
        _fail(EXIT_CONFIG, f"bad config: {exc}")
    if seed is not None:
        config = replace(config, seed=seed)
    if profile is not None:
        config = replace(config, profile=profile, replications=PROFILES[profile])
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = run_simulation(config, workers=workers)
    report.write_csv(out / "sweep.csv")
    report.write_json(out / "sweep.json")
    click.echo(f"wrote {out / 'sweep.csv'} and {out / 'sweep.json'}")


@main.command()
@click.argument("graph_path", type=click.Path())
@click.option("--k", type=int, default=None, help="Community count; omit to select automatically.")
@click.option("--k-max", type=int, default=None, help="Scan ceiling for automatic selection.")
@click.option("--labels", "labels_path", type=click.Path(), default=None, help="Node roster sidecar.")
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True)
def detect(graph_path: str, k: int | None, k_max: int | None, labels_path: str | None, out_dir: str) -> None:
    """Estimate memberships for one edge-list graph."""
    try:
        graph = load_graph_file(graph_path, labels_path=labels_path)
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    except ValueError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        report = detect_graph(graph, k=k, k_max=k_max)
    except EstimationError as exc:
        _fail(EXIT_ESTIMATION, f"estimation failed at stage {exc.stage!r}: {exc}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_membership_csv(report.memberships, out / "memberships.csv")
    (out / "labels.csv").write_text("\n".join(str(int(x)) for x in report.labels) + "\n")
    summary = {
        "k": report.best_k,
        "q": report.q,
        "eta_mixed": report.eta_mixed,
        "eta_pure": report.eta_pure,
        "eigenvalue_magnitudes": list(report.eigenvalue_magnitudes),
        "spectral_gap": report.spectral_gap,
    }
    (out / "detect.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    click.echo(f"k={report.best_k} q={report.q:.6f} (outputs in {out})")


@main.command(name="scan-k")
@click.argument("graph_path", type=click.Path())
@click.option("--k-max", type=int, default=None)
@click.option("--labels", "labels_path", type=click.Path(), default=None)
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True)
def scan_k(graph_path: str, k_max: int | None, labels_path: str | None, out_dir: str) -> None:
    """Write the modularity-vs-k curve for one graph."""
    from .modularity import estimate_k

    try:
        graph = load_graph_file(graph_path, labels_path=labels_path)
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    except ValueError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        scan = estimate_k(graph, k_max=k_max)
    except EstimationError as exc:
        _fail(EXIT_ESTIMATION, str(exc))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["k,q"]
    for k, q in scan.curve_rows():
        lines.append(f"{k},{'' if q is None else repr(q)}")
    (out / "scan.csv").write_text("\n".join(lines) + "\n")
    (out / "scan.json").write_text(json.dumps(scan.summary(), indent=2, sort_keys=True) + "\n")
    click.echo(f"best_k={scan.best_k} (outputs in {out})")


@main.command()
@click.option("--only", "names", multiple=True, help="Restrict to these dataset names.")
@click.option("--k-max", type=int, default=8, show_default=True)
@click.option("--cache", "cache_dir", type=click.Path(), default=None, help="Downloaded-dataset cache directory.")
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True)
def datasets(names: tuple[str, ...], k_max: int, cache_dir: str | None, out_dir: str) -> None:
    """Run the regression suite over registered real networks."""
    for name in names:
        if name not in DATASETS:
            _fail(EXIT_CONFIG, f"unknown dataset {name!r}; known: {', '.join(DATASETS)}")
    rows = run_dataset_suite(list(names) or None, k_max=k_max, cache_dir=cache_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_dataset_csv(rows, out / "datasets.csv")
    for r in rows:
        if r.notice:
            click.echo(f"{r.name}: skipped ({r.notice})")
        else:
            mis = "" if r.mislabels is None else f" mislabels={r.mislabels}"
            click.echo(f"{r.name}: n={r.n} best_k={r.best_k} q={r.q_best:.4f}{mis}")
    click.echo(f"available: {', '.join(available_datasets(cache_dir))}")


if __name__ == "__main__":
    main()
