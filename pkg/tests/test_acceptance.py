"""Acceptance gate.

One test per shipping criterion, each with its tolerance pinned in the
assertions; ``pytest -v tests/test_acceptance.py`` prints one pass/fail
line per criterion.  Reference datasets for the two accuracy criteria are
looked up via GNNSCOPE_AMAZON_PHOTO / GNNSCOPE_CORA_ML (paths to dataset
documents); without them the GCN criterion runs its synthetic substitute
and the GAT criterion skips, since no substitute is defined for it.

Every derived quantity is checked against an oracle coded here or imported
from the unit suites: matrix-power shortest paths, direct neighbor
enumeration, exhaustive cosine scans, recompute-from-scratch linkage, and
exhaustive leaf-order search.
"""

import os
import pathlib
import subprocess
import sys
import time

import numpy as np
import pytest

from gnnscope.analysis import (
    ALL_AXES,
    PLANE_BOUNDS,
    PLANES,
    cluster_distances,
    distance_matrix,
    layout_epsilon,
    optimal_leaf_order,
    ordering_cost,
    overlapping_pairs,
    parallel_sets,
    default_binning_spec,
    project_distances,
    project_distances_trace,
    resolve_overlap,
)
from gnnscope.graph_store import Dataset, load_dataset, synthesize
from gnnscope.metrics import compute_table
from gnnscope.models import (
    ModelSpec,
    TrainConfig,
    gradients,
    initial_params,
    train,
    trio_specs,
)
from gnnscope.models.ops import DenseInput, GraphContext, cross_entropy
from gnnscope.models.spec import PredictionSet
from gnnscope.models.training import _forward
from gnnscope.seeding import subseed

from test_analysis import dendrogram_orders, random_distances, silhouette

AMAZON_PHOTO_ENV = "GNNSCOPE_AMAZON_PHOTO"
CORA_ML_ENV = "GNNSCOPE_CORA_ML"
DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "data"


def dataset_path(env_name, filename):
    """Reference dataset location: the env var wins, then data/<filename>."""
    override = os.environ.get(env_name)
    if override:
        return override
    candidate = DATA_DIR / filename
    return str(candidate) if candidate.exists() else None


# -- shared builders -------------------------------------------------------


def prediction_set(predicted, class_count, confidence=None):
    predicted = np.asarray(predicted, dtype=np.int64)
    n = predicted.shape[0]
    if confidence is None:
        confidence = np.full(n, 1.0 / class_count)
    probs = np.full((n, class_count), 0.0)
    probs[np.arange(n), predicted] = confidence
    spread = (1.0 - np.asarray(confidence)) / max(class_count - 1, 1)
    for c in range(class_count):
        col = probs[:, c]
        probs[:, c] = np.where(col == 0.0, spread, col)
    return PredictionSet(probs, predicted, np.asarray(confidence, dtype=np.float64))


def random_instance(seed, max_n=200):
    """A random block-model graph with a random trio of predictions."""
    rng = np.random.default_rng(seed)
    classes = int(rng.integers(2, 5))
    n_per_class = int(rng.integers(3, max_n // classes + 1))
    ds = synthesize(
        n_per_class=n_per_class,
        classes=classes,
        intra_edge_prob=float(rng.uniform(0.02, 0.4)),
        inter_edge_prob=float(rng.uniform(0.0, 0.08)),
        feature_dim=int(rng.integers(classes, 13)),
        feature_noise=float(rng.uniform(0.0, 0.4)),
        seed=int(rng.integers(0, 2**31)),
    )

    def noisy(rate):
        wrong = rng.random(ds.node_count) < rate
        preds = ds.labels.copy()
        shift = rng.integers(1, classes, size=ds.node_count)
        preds[wrong] = (preds[wrong] + shift[wrong]) % classes
        return preds

    sets = {
        role: prediction_set(
            noisy(float(rng.uniform(0.05, 0.5))),
            classes,
            rng.uniform(1.0 / classes, 1.0, ds.node_count),
        )
        for role in ("gnn", "structure", "feature")
    }
    k = int(rng.integers(1, 7))
    return ds, compute_table(ds, sets, k=k)


def train_role(ds, arch, role, seed, epochs=200):
    specs = trio_specs(arch, ds)
    config = TrainConfig(epochs=epochs, seed=subseed(seed, f"train:{role}"))
    return train(specs[role], config, ds)


def balanced_split(ds, seed, train_per_class=20, val_per_class=30):
    """Rebuild the dataset with a random class-balanced split."""
    rng = np.random.default_rng(seed)
    doc = ds.to_document()
    train_ids, val_ids, test_ids = [], [], []
    for c in range(ds.class_count):
        members = rng.permutation(np.flatnonzero(ds.labels == c))
        train_ids += members[:train_per_class].tolist()
        val_ids += members[train_per_class : train_per_class + val_per_class].tolist()
        test_ids += members[train_per_class + val_per_class :].tolist()
    doc["masks"] = {
        "train": sorted(int(i) for i in train_ids),
        "validation": sorted(int(i) for i in val_ids),
        "test": sorted(int(i) for i in test_ids),
    }
    return Dataset.from_document(doc)


def whole_accuracy(model, ds):
    return float(np.mean(model.predictions.predicted == ds.labels))


# -- accuracy --------------------------------------------------------------


def test_gcn_accuracy():
    """GCN on a photo-graph dataset hits 91.80% +/- 3pp test and 91.15%
    +/- 3pp whole-dataset accuracy in under 10 CPU minutes; without the
    dataset, the documented substitute: GCN beats the feature-only proxy
    by >= 5pp and the structure-only proxy by >= 3pp mean test accuracy
    over 5 seeds on a block-model fixture whose structure and features
    are each informative but noisier alone than combined."""
    t0 = time.monotonic()
    path = dataset_path(AMAZON_PHOTO_ENV, "amazon_photo.json")
    if path:
        ds = balanced_split(load_dataset(path), seed=0)
        model = train_role(ds, "gcn", "gnn", seed=0)
        test_acc = model.accuracy["test"]
        whole = whole_accuracy(model, ds)
        elapsed = time.monotonic() - t0
        assert abs(test_acc - 0.9180) <= 0.03, f"test accuracy {test_acc:.4f}"
        assert abs(whole - 0.9115) <= 0.03, f"whole accuracy {whole:.4f}"
        assert elapsed < 600.0, f"took {elapsed:.0f}s"
        return

    accs = {"gnn": [], "structure": [], "feature": []}
    for seed in range(5):
        ds = synthesize(
            n_per_class=50,
            classes=4,
            intra_edge_prob=0.10,
            inter_edge_prob=0.015,
            feature_dim=10,
            feature_noise=0.2,
            seed=seed,
        )
        for role in accs:
            accs[role].append(train_role(ds, "gcn", role, seed).accuracy["test"])
    mean = {role: float(np.mean(v)) for role, v in accs.items()}
    elapsed = time.monotonic() - t0
    assert mean["gnn"] - mean["feature"] >= 0.05, (
        f"gnn {mean['gnn']:.3f} vs feature proxy {mean['feature']:.3f}"
    )
    assert mean["gnn"] - mean["structure"] >= 0.03, (
        f"gnn {mean['gnn']:.3f} vs structure proxy {mean['structure']:.3f}"
    )
    assert elapsed < 600.0, f"took {elapsed:.0f}s"


def test_gat_accuracy():
    """GAT on a citation-graph dataset hits 86.16% +/- 3pp whole and
    84.70% +/- 3pp test accuracy in under 15 CPU minutes.  No substitute
    fixture is defined for this criterion, so it skips when the dataset
    is not supplied."""
    path = dataset_path(CORA_ML_ENV, "cora_ml.json")
    if not path:
        pytest.skip(
            f"citation dataset not supplied (set {CORA_ML_ENV} or add "
            "data/cora_ml.json); this criterion defines no synthetic "
            "substitute, but test_gat_synthetic_sanity covers the same "
            "structure-plus-features ranking on the block-model fixture"
        )
    t0 = time.monotonic()
    ds = balanced_split(load_dataset(path), seed=0)
    model = train_role(ds, "gat", "gnn", seed=0)
    test_acc = model.accuracy["test"]
    whole = whole_accuracy(model, ds)
    elapsed = time.monotonic() - t0
    assert abs(whole - 0.8616) <= 0.03, f"whole accuracy {whole:.4f}"
    assert abs(test_acc - 0.8470) <= 0.03, f"test accuracy {test_acc:.4f}"
    assert elapsed < 900.0, f"took {elapsed:.0f}s"


def test_gat_synthetic_sanity():
    """Stand-in coverage while the citation dataset is absent: GAT with
    both structure and features beats the feature-only proxy by >= 5pp
    and the structure-only proxy by >= 3pp mean test accuracy over 3
    seeds on the same block-model fixture the GCN substitute uses."""
    accs = {"gnn": [], "structure": [], "feature": []}
    for seed in range(3):
        ds = synthesize(
            n_per_class=50,
            classes=4,
            intra_edge_prob=0.10,
            inter_edge_prob=0.015,
            feature_dim=10,
            feature_noise=0.2,
            seed=seed,
        )
        for role in accs:
            accs[role].append(train_role(ds, "gat", role, seed).accuracy["test"])
    mean = {role: float(np.mean(v)) for role, v in accs.items()}
    assert mean["gnn"] - mean["feature"] >= 0.05, (
        f"gnn {mean['gnn']:.3f} vs feature proxy {mean['feature']:.3f}"
    )
    assert mean["gnn"] - mean["structure"] >= 0.03, (
        f"gnn {mean['gnn']:.3f} vs structure proxy {mean['structure']:.3f}"
    )


# -- gradients -------------------------------------------------------------


def test_gradient_correctness():
    """Analytic gradients match central finite differences (h=1e-4) to a
    relative error below 1e-4 at 20 randomly probed parameter entries per
    architecture, on random instances with at most 10 nodes."""
    h = 1e-4
    for arch in ("gcn", "gat", "mlp"):
        rng = np.random.default_rng(hash(arch) % 2**32)
        probes = 0
        worst = 0.0
        while probes < 20:
            classes = 2
            n_per_class = int(rng.integers(2, 6))  # N <= 10
            ds = synthesize(
                n_per_class=n_per_class,
                classes=classes,
                intra_edge_prob=0.6,
                inter_edge_prob=0.3,
                feature_dim=int(rng.integers(2, 6)),
                feature_noise=0.2,
                seed=int(rng.integers(0, 2**31)),
            )
            spec = ModelSpec(
                arch,
                (ds.feature_dim, int(rng.integers(2, 5)), classes),
                gat_heads=2,
                dropout_rate=0.0,
            )
            params = initial_params(spec, seed=int(rng.integers(0, 2**31)))
            X = ds.features
            ids = np.flatnonzero(ds.train_mask)
            ctx = GraphContext(ds) if arch in ("gcn", "gat") else None

            def loss_at(p):
                logits, _ = _forward(spec, p, ctx, DenseInput(X))
                value, _ = cross_entropy(logits, ds.labels, ids)
                return value

            analytic = gradients(spec, params, ds, X, ds.train_mask)
            for _ in range(10):
                key = list(params)[int(rng.integers(0, len(params)))]
                idx = tuple(
                    int(rng.integers(0, s)) for s in params[key].shape
                )
                bumped = {k: v.copy() for k, v in params.items()}
                bumped[key][idx] += h
                up = loss_at(bumped)
                bumped[key][idx] -= 2 * h
                down = loss_at(bumped)
                numeric = (up - down) / (2 * h)
                got = float(analytic[key][idx])
                err = abs(got - numeric) / max(1e-6, abs(got) + abs(numeric))
                worst = max(worst, err)
                probes += 1
        assert worst < 1e-4, f"{arch}: max relative error {worst:.2e}"


# -- metric oracles --------------------------------------------------------


def shortest_paths_by_powers(n, edges):
    """All-pairs shortest paths via repeated reachability expansion."""
    A = np.zeros((n, n))
    for a, b in edges:
        A[a, b] = A[b, a] = 1.0
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    reach = np.eye(n, dtype=bool)
    for depth in range(1, n + 1):
        grown = reach | ((reach @ A) > 0)
        new = grown & ~reach
        if not new.any():
            break
        D[new] = depth
        reach = grown
    return D


def test_metric_oracles():
    """On 100 random graphs (N <= 200): depth-to-train and the label
    spread at that depth equal a matrix-power all-pairs oracle exactly;
    the four neighborhood agreement rates equal direct enumeration; the
    top-k similar training nodes equal an exhaustive cosine scan."""
    for trial in range(100):
        ds, table = random_instance(seed=1000 + trial)
        n = ds.node_count
        labels = ds.labels
        train_ids = np.flatnonzero(ds.train_mask)
        D = shortest_paths_by_powers(n, ds.edges)

        # depth to nearest training node + label spread at that depth
        for i in range(n):
            to_train = D[i, train_ids]
            dis = float(to_train.min()) if train_ids.size else float("inf")
            assert table.dis[i] == dis, f"trial {trial} node {i}"
            spd = np.zeros(ds.class_count)
            if np.isfinite(dis):
                at = train_ids[to_train == dis]
                for t in at:
                    spd[labels[t]] += 1.0
                spd /= at.size
            assert np.array_equal(table.spd[i], spd), f"trial {trial} node {i}"

        # neighborhood agreement by direct enumeration
        nbrs = {i: set() for i in range(n)}
        for a, b in ds.edges:
            nbrs[int(a)].add(int(b))
            nbrs[int(b)].add(int(a))
        p = table.p1
        for i in range(n):
            ns = sorted(nbrs[i])
            if not ns:
                want = np.zeros(4)
            else:
                want = np.array(
                    [
                        np.mean([labels[j] == labels[i] for j in ns]),
                        np.mean([p[j] == labels[i] for j in ns]),
                        np.mean([labels[j] == p[i] for j in ns]),
                        np.mean([p[j] == p[i] for j in ns]),
                    ]
                )
            assert np.array_equal(table.cn[i], want), f"trial {trial} node {i}"

        # top-k similar training nodes by exhaustive scan
        X = ds.features
        norms = np.sqrt((X * X).sum(axis=1))
        for i in range(n):
            sims = []
            for t in train_ids:
                if int(t) == i:
                    continue
                denom = norms[i] * norms[t]
                sim = float(X[i] @ X[t] / denom) if denom > 0 else 0.0
                sims.append((-sim, int(t)))
            sims.sort()
            want_ids = tuple(t for _, t in sims[: table.k])
            assert table.similar_train_ids[i] == want_ids, (
                f"trial {trial} node {i}"
            )
            kfs = np.zeros(ds.class_count)
            for t in want_ids:
                kfs[labels[t]] += 1.0
            if want_ids:
                kfs /= len(want_ids)
            assert np.allclose(table.kfs[i], kfs, atol=1e-12), (
                f"trial {trial} node {i}"
            )


# -- distance axioms -------------------------------------------------------


def far_flung_table():
    """A 30-node path with opposite-label train nodes at the ends, so
    depth spreads are disjoint one-hots and closeness spans its full
    range; this exercises the structure plane up to its exact bound."""
    n = 30
    doc = {
        "format": "gnnscope-dataset/1",
        "nodes": n,
        "edges": [[i, i + 1] for i in range(n - 1)],
        "features": {"dim": 2, "dense": [[1.0, 0.0]] * (n // 2) + [[0.0, 1.0]] * (n // 2)},
        "labels": [0] * (n // 2) + [1] * (n // 2),
        "masks": {
            "train": [0, n - 1],
            "validation": [1],
            "test": list(range(2, n - 1)),
        },
    }
    ds = Dataset.from_document(doc)
    rng = np.random.default_rng(9)
    sets = {
        role: prediction_set(
            rng.integers(0, 2, n), 2, rng.uniform(0.5, 1.0, n)
        )
        for role in ("gnn", "structure", "feature")
    }
    return compute_table(ds, sets, k=2)


def test_distance_axioms():
    """Per plane, over 10,000 random row triples drawn from four tables:
    D(a,a)=0 and D(a,b)=D(b,a) exactly, the triangle inequality holds
    within 1e-9, and no distance exceeds the plane's bound (sqrt(5),
    sqrt(6), 2, sqrt(3)).  The structure plane's exact bound is 2, not
    sqrt(3): a prediction mismatch (1) plus disjoint one-hot depth
    spreads (2) plus a full closeness gap (1) sum to 4 under the root,
    and the far-flung fixture reaches it."""
    tables = [random_instance(seed=77 + i)[1] for i in range(3)]
    tables.append(far_flung_table())
    rng = np.random.default_rng(5)
    per_table = 2500
    for plane in PLANES:
        bound = PLANE_BOUNDS[plane]
        for table in tables:
            ids = np.arange(table.node_count)
            M = distance_matrix(plane, table, ids)
            assert np.array_equal(M, M.T), plane
            assert np.all(np.diag(M) == 0.0), plane
            assert np.isfinite(M).all(), plane
            assert M.max() <= bound + 1e-9, (
                f"{plane}: max {M.max():.6f} exceeds bound {bound:.6f}"
            )
            a, b, c = rng.integers(0, table.node_count, (3, per_table))
            slack = M[a, c] - (M[a, b] + M[b, c])
            assert slack.max() <= 1e-9, (
                f"{plane}: triangle violated by {slack.max():.2e}"
            )


# -- clustering / ordering oracles -----------------------------------------


def reference_linkage(dist, target):
    """Recompute-from-scratch complete linkage: at every step the true
    max pairwise distance decides the merge, ties by smallest
    representative pair."""
    n = dist.shape[0]
    clusters = {i: [i] for i in range(n)}
    merges, heights = [], []
    snapshot = [[i] for i in range(n)]
    while len(clusters) > 1:
        best = None
        reps = sorted(clusters)
        for ai, a in enumerate(reps):
            for b in reps[ai + 1 :]:
                link = float(dist[np.ix_(clusters[a], clusters[b])].max())
                key = (link, a, b)
                if best is None or key < best:
                    best = key
        link, a, b = best
        merges.append([a, b])
        heights.append(link)
        clusters[a] = sorted(clusters[a] + clusters[b])
        del clusters[b]
        if len(clusters) == target:
            snapshot = [list(v) for v in sorted(clusters.values())]
    return snapshot, merges, heights


def test_clustering_and_leaf_ordering_oracles():
    """Complete linkage equals the recompute-from-scratch reference
    (merges, heights, and the partition at a random target) on 50 random
    matrices with n <= 50, half of them tie-heavy; leaf ordering achieves
    the exhaustive flip-search minimum on 50 random dendrograms with
    n <= 10."""
    rng = np.random.default_rng(12)
    for trial in range(50):
        n = int(rng.integers(2, 51))
        D = random_distances(rng, n, quantized=bool(trial % 2))
        target = int(rng.integers(1, n + 1))
        want_parts, want_merges, want_heights = reference_linkage(D, target)
        got_parts, got_merges, got_heights = cluster_distances(D, target)
        assert sorted(sorted(p) for p in got_parts) == want_parts, f"trial {trial}"
        assert got_merges.tolist() == want_merges, f"trial {trial}"
        assert got_heights.tolist() == want_heights, f"trial {trial}"

    for trial in range(50):
        n = int(rng.integers(4, 11))
        D = random_distances(rng, n)
        _, merges, _ = cluster_distances(D, 1)
        order = optimal_leaf_order(merges, D)
        got = ordering_cost(order, D)
        best = min(
            ordering_cost(o, D) for o in dendrogram_orders(merges, n)
        )
        assert got == pytest.approx(best, abs=1e-12), f"trial {trial}"


# -- projection sanity -----------------------------------------------------


def test_projection_sanity():
    """The embedding separates a two-block 50-item distance fixture to a
    silhouette above 0.5; the post-exaggeration divergence trace never
    increases by more than 1e-6; collision resolution leaves zero disc
    pairs overlapping beyond epsilon on 100 random layouts."""
    rng = np.random.default_rng(4)
    n = 50
    labels = np.repeat([0, 1], n // 2)
    D = 10.0 + rng.random((n, n))
    same = labels[:, None] == labels[None, :]
    D[same] = 0.1 * rng.random(int(same.sum()))
    D = (D + D.T) / 2.0
    np.fill_diagonal(D, 0.0)
    coords = project_distances(D, perplexity=10.0, seed=0, iterations=600)
    score = silhouette(coords, labels)
    assert score > 0.5, f"silhouette {score:.3f}"

    _, table = random_instance(seed=31)
    M = distance_matrix("PredictionComparison", table, np.arange(table.node_count))
    _, trace = project_distances_trace(M, perplexity=20.0, seed=3, iterations=500)
    steps = np.diff(np.asarray(trace))
    assert steps.max() <= 1e-6, f"divergence rose by {steps.max():.2e}"

    layout_rng = np.random.default_rng(8)
    for trial in range(100):
        m = int(layout_rng.integers(2, 61))
        scale = float(layout_rng.uniform(0.5, 50.0))
        coords = layout_rng.normal(0.0, scale, (m, 2))
        radii = layout_rng.uniform(0.01, 0.3, m) * scale
        eps = layout_epsilon(coords)
        resolved = resolve_overlap(coords, radii)
        assert overlapping_pairs(resolved, radii, eps) == [], f"trial {trial}"


# -- parallel sets conservation --------------------------------------------


def test_parallel_sets_conservation():
    """Across 1,000 random selections and axis combinations, every
    axis's segment counts and every adjacent-pair ribbon counts sum to
    the selection size exactly."""
    spec = default_binning_spec()
    tables = [random_instance(seed=601)[1], random_instance(seed=602)[1]]
    rng = np.random.default_rng(44)
    for trial in range(1000):
        table = tables[trial % 2]
        n = table.node_count
        size = int(rng.integers(1, n + 1))
        selection = rng.choice(n, size=size, replace=False)
        axis_count = int(rng.integers(1, 5))
        axes = list(rng.choice(ALL_AXES, size=axis_count, replace=False))
        result = parallel_sets(table, spec, axes, selection)
        assert result.selection_size == size
        for segments in result.segments:
            assert sum(s.count for s in segments) == size, f"trial {trial}"
        for ribbons in result.ribbons:
            assert sum(r.count for r in ribbons) == size, f"trial {trial}"


# -- end-to-end determinism ------------------------------------------------


def run_pipeline(workdir):
    env = dict(os.environ)
    env.setdefault("PYTHONHASHSEED", "0")
    steps = [
        ["synth", "--seed", "0", "--out", "dataset.json"],
        ["train", "--dataset", "dataset.json", "--seed", "0", "--out", "bundle.txt"],
        ["metrics", "--dataset", "dataset.json", "--bundle", "bundle.txt",
         "--out", "metrics.csv"],
        ["report", "--dataset", "dataset.json", "--bundle", "bundle.txt",
         "--seed", "0", "--out-dir", "report"],
    ]
    for step in steps:
        proc = subprocess.run(
            [sys.executable, "-m", "gnnscope.cli", *step],
            cwd=workdir,
            env=env,
            capture_output=True,
            text=True,
            timeout=120,
        )
        assert proc.returncode == 0, f"{step}: {proc.stderr}"


def test_cli_determinism(tmp_path):
    """The full pipeline (synthesize, train, metrics, report) run twice
    with the same seed produces byte-identical outputs, in under 60
    seconds total."""
    t0 = time.monotonic()
    runs = [tmp_path / "one", tmp_path / "two"]
    for d in runs:
        d.mkdir()
        run_pipeline(d)
    elapsed = time.monotonic() - t0

    names = ["dataset.json", "bundle.txt", "metrics.csv"] + [
        str(pathlib.Path("report") / f)
        for f in ["parallel_sets.json", "layout.json"]
        + [f"projection_{p}.json" for p in PLANES]
    ]
    for name in names:
        a = (runs[0] / name).read_bytes()
        b = (runs[1] / name).read_bytes()
        assert a == b, f"{name} differs between runs"
    assert elapsed < 60.0, f"pipeline pair took {elapsed:.1f}s"
