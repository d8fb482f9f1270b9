"""Batch driver: ingest datasets, train the model trio, compute metrics,
emit report files, and launch the HTTP service.

Exit codes: 0 success, 2 usage error, 3 invalid artifact content,
4 missing artifact file, 5 training divergence.  All randomness fans out
from --seed via labeled sub-seeds, so each stage reruns reproducibly on
its own.
"""

from __future__ import annotations

import functools
import pathlib
import sys
import warnings

import click

from gnnscope import __version__
from gnnscope.graph_store import load_dataset, synthesize
from gnnscope.metrics import DEFAULT_TOP_K, compute_table
from gnnscope.models import TrainConfig, TrainingDiverged, load_bundle, save_bundle, train, trio_specs
from gnnscope.seeding import subseed

EXIT_INVALID = 3
EXIT_MISSING = 4
EXIT_DIVERGED = 5

REPORT_AXES = ("correct_gnn", "correct_structure", "correct_feature", "gt")

EXIT_CODE_HELP = (
    "Exit codes: 0 success, 2 usage error, 3 invalid artifact content, "
    "4 missing artifact file, 5 training divergence."
)


def pipeline_errors(fn):
    """Map artifact and training failures onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except TrainingDiverged as exc:
            click.echo(f"error: training diverged: {exc}", err=True)
            sys.exit(EXIT_DIVERGED)
        except FileNotFoundError as exc:
            click.echo(f"error: missing artifact: {exc}", err=True)
            sys.exit(EXIT_MISSING)
        except (ValueError, KeyError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INVALID)

    return wrapped


@click.group(epilog=EXIT_CODE_HELP)
@click.version_option(version=__version__, prog_name="gnnscope")
def main():
    """Error-diagnosis pipeline for graph neural networks."""


@main.command()
@click.argument("path", type=click.Path(path_type=pathlib.Path))
@click.option("--out", type=click.Path(path_type=pathlib.Path), default=pathlib.Path("dataset.json"), show_default=True, help="Where to write the canonical dataset document.")
@pipeline_errors
def ingest(path, out):
    """Validate a dataset document and write its canonical form."""
    ds = load_dataset(path)
    ds.save(out)
    click.echo(
        f"{ds.node_count} nodes, {len(ds.edges)} edges, "
        f"{ds.feature_dim} features, {ds.class_count} classes -> {out}"
    )


@main.command()
@click.option("--n-per-class", default=40, show_default=True)
@click.option("--classes", default=3, show_default=True)
@click.option("--intra", default=0.1, show_default=True, help="Within-class edge probability.")
@click.option("--inter", default=0.01, show_default=True, help="Between-class edge probability.")
@click.option("--dim", default=16, show_default=True, help="Feature dimensions.")
@click.option("--noise", default=0.1, show_default=True, help="Feature flip probability.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path(path_type=pathlib.Path), default=pathlib.Path("dataset.json"), show_default=True)
@pipeline_errors
def synth(n_per_class, classes, intra, inter, dim, noise, seed, out):
    """Generate a synthetic block-model dataset."""
    ds = synthesize(
        n_per_class=n_per_class,
        classes=classes,
        intra_edge_prob=intra,
        inter_edge_prob=inter,
        feature_dim=dim,
        feature_noise=noise,
        seed=seed,
    )
    ds.save(out)
    click.echo(f"{ds.node_count} nodes, {len(ds.edges)} edges -> {out}")


@main.command(name="train")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(path_type=pathlib.Path))
@click.option("--arch", type=click.Choice(["gcn", "gat"]), default="gcn", show_default=True)
@click.option("--epochs", default=200, show_default=True)
@click.option("--lr", default=0.01, show_default=True)
@click.option("--weight-decay", default=5e-4, show_default=True)
@click.option("--hidden", default=None, type=int, help="Hidden width (per head for gat).")
@click.option("--heads", default=8, show_default=True, help="Attention heads (gat only).")
@click.option("--dropout", default=0.5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path(path_type=pathlib.Path), default=pathlib.Path("bundle.txt"), show_default=True)
@pipeline_errors
def train_command(dataset_path, arch, epochs, lr, weight_decay, hidden, heads, dropout, seed, out):
    """Train the GNN plus its structure and feature proxies."""
    ds = load_dataset(dataset_path)
    specs = trio_specs(arch, ds, hidden=hidden, heads=heads, dropout=dropout)
    bundle = {}
    for role, spec in sorted(specs.items()):
        config = TrainConfig(
            epochs=epochs,
            learning_rate=lr,
            weight_decay=weight_decay,
            seed=subseed(seed, f"train:{role}"),
        )
        bundle[role] = train(spec, config, ds)
        acc = bundle[role].accuracy
        click.echo(
            f"{role}: train {acc['train']:.4f}"
            f" validation {acc['validation']:.4f} test {acc['test']:.4f}"
        )
    save_bundle(out, bundle)
    click.echo(f"bundle -> {out}")


@main.command(name="metrics")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(path_type=pathlib.Path))
@click.option("--bundle", "bundle_path", required=True, type=click.Path(path_type=pathlib.Path))
@click.option("--k", default=DEFAULT_TOP_K, show_default=True, help="Similar training nodes per node.")
@click.option("--out", type=click.Path(path_type=pathlib.Path), default=pathlib.Path("metrics.csv"), show_default=True)
@pipeline_errors
def metrics_command(dataset_path, bundle_path, k, out):
    """Compute the per-node metric table as CSV."""
    ds = load_dataset(dataset_path)
    bundle = load_bundle(bundle_path, ds)
    table = compute_table(ds, {r: m.predictions for r, m in bundle.items()}, k=k)
    table.to_csv(out)
    click.echo(f"{table.node_count} rows -> {out}")


@main.command(name="report")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(path_type=pathlib.Path))
@click.option("--bundle", "bundle_path", required=True, type=click.Path(path_type=pathlib.Path))
@click.option("--seed", default=0, show_default=True)
@click.option("--k", default=DEFAULT_TOP_K, show_default=True)
@click.option("--out-dir", type=click.Path(path_type=pathlib.Path), default=pathlib.Path("report"), show_default=True)
@pipeline_errors
def report_command(dataset_path, bundle_path, seed, k, out_dir):
    """Write parallel-sets tallies, per-plane projections, and the layout.

    File contents equal the corresponding service responses for the same
    seed, byte for byte.
    """
    from gnnscope.analysis import PLANES, parallel_sets, projection_plane
    from gnnscope.service.snapshot import build_snapshot, projection_seed
    from gnnscope.service.wire import dump_bytes, layout_wire, parallel_sets_wire, projection_wire

    ds = load_dataset(dataset_path)
    bundle = load_bundle(bundle_path, ds)
    snapshot = build_snapshot(ds, bundle, k=k, seed=seed)
    out_dir.mkdir(parents=True, exist_ok=True)

    everyone = range(ds.node_count)
    tally = parallel_sets(snapshot.table, snapshot.binning, REPORT_AXES, everyone)
    (out_dir / "parallel_sets.json").write_bytes(dump_bytes(parallel_sets_wire(tally)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for plane in PLANES:
            view = projection_plane(
                snapshot.table, plane, everyone,
                seed=projection_seed(seed, plane),
            )
            payload = projection_wire(view, cid_prefix=f"{plane}.all")
            (out_dir / f"projection_{plane}.json").write_bytes(dump_bytes(payload))
    (out_dir / "layout.json").write_bytes(dump_bytes(layout_wire(snapshot.layout, ds.edges)))
    click.echo(f"report -> {out_dir}")


@main.command(name="serve")
@click.option("--snapshot", "snapshot_dir", required=True, envvar="GNNSCOPE_SNAPSHOT", type=click.Path(path_type=pathlib.Path), help="Directory holding dataset.json and bundle.txt.")
@click.option("--bind", default="127.0.0.1:8234", show_default=True, envvar="GNNSCOPE_BIND")
@click.option("--seed", default=0, show_default=True, envvar="GNNSCOPE_SEED")
@click.option("--k", default=DEFAULT_TOP_K, show_default=True)
@pipeline_errors
def serve_command(snapshot_dir, bind, seed, k):
    """Serve a snapshot directory over HTTP."""
    from gnnscope.service import build_snapshot, serve

    ds = load_dataset(snapshot_dir / "dataset.json")
    bundle = load_bundle(snapshot_dir / "bundle.txt", ds)
    snapshot = build_snapshot(ds, bundle, k=k, seed=seed)
    click.echo(f"serving {ds.node_count} nodes on {bind}")
    serve(snapshot, bind)


if __name__ == "__main__":
    main()
