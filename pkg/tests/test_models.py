"""Model trio tests.

The forward passes are checked against independently coded dense-matrix
oracles (explicit N x N adjacency, plain loops for attention), and the
analytic gradients against central finite differences.
"""

import numpy as np
import pytest

from gnnscope.graph_store import Dataset, synthesize
from gnnscope.models import (
    ModelSpec,
    PredictionSet,
    TrainConfig,
    TrainingDiverged,
    attention_matrix,
    evaluate,
    forward_gat,
    forward_gcn,
    forward_mlp,
    gradients,
    initial_params,
    one_hot_inputs,
    train,
    trio_specs,
)
from gnnscope.models.training import Adam, load_bundle, save_bundle
from gnnscope.models.ops import cross_entropy


# -- independent oracles ---------------------------------------------------


def dense_gcn_oracle(dataset, params, X):
    """Eq-by-eq dense evaluation: logits = A^ relu(A^ X W1) W2 with
    A^ = D~^{-1/2} (A + I) D~^{-1/2}."""
    n = dataset.node_count
    A = np.zeros((n, n))
    for a, b in dataset.edges:
        A[a, b] = A[b, a] = 1.0
    A = A + np.eye(n)
    dinv = np.diag(1.0 / np.sqrt(A.sum(axis=1)))
    Ah = dinv @ A @ dinv
    H = np.maximum(Ah @ X @ params["W1"], 0.0)
    return Ah @ H @ params["W2"]


def dense_gat_oracle(dataset, params, X, slope):
    """Loop-written attention: per-head softmax over N(i) u {i}, hidden
    concat + ReLU, output heads averaged."""
    n = dataset.node_count
    nbrs = [sorted(set(dataset.neighbors(i).tolist()) | {i}) for i in range(n)]
    heads = params["W1"].shape[0]

    def lrelu(x):
        return x if x > 0 else slope * x

    def layer(inp, W, a):
        outs = []
        for k in range(heads):
            Z = inp @ W[k]
            m = Z.shape[1]
            out = np.zeros((n, m))
            for i in range(n):
                scores = [lrelu(a[k, :m] @ Z[i] + a[k, m:] @ Z[j]) for j in nbrs[i]]
                e = np.exp(np.array(scores) - max(scores))
                alpha = e / e.sum()
                for w, j in zip(alpha, nbrs[i]):
                    out[i] += w * Z[j]
            outs.append(out)
        return outs

    H = np.maximum(np.concatenate(layer(X, params["W1"], params["a1"]), axis=1), 0.0)
    outs = layer(H, params["W2"], params["a2"])
    return sum(outs) / heads


def numeric_gradients(spec, params, dataset, X, mask, h=1e-4):
    """Central finite differences of the train cross-entropy."""
    from gnnscope.models.training import _forward, _input_for
    from gnnscope.models.ops import GraphContext, DenseInput

    ids = np.flatnonzero(mask)
    ctx = GraphContext(dataset) if spec.architecture in ("gcn", "gat") else None

    def loss_at(p):
        logits, _ = _forward(spec, p, ctx, DenseInput(X))
        loss, _ = cross_entropy(logits, dataset.labels, ids)
        return loss

    out = {}
    for key, value in params.items():
        g = np.zeros_like(value)
        it = np.nditer(value, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            bumped = {k: v.copy() for k, v in params.items()}
            bumped[key][idx] += h
            up = loss_at(bumped)
            bumped[key][idx] -= 2 * h
            down = loss_at(bumped)
            g[idx] = (up - down) / (2 * h)
        out[key] = g
    return out


def single_node_dataset():
    return Dataset(
        edges=[],
        features=[[0.5]],
        labels=[0],
        train_ids=[0],
        validation_ids=[],
        test_ids=[],
    )


# -- GCN -------------------------------------------------------------------


class TestGCN:
    def test_isolated_node_identity_weights(self):
        ds = single_node_dataset()
        params = {"W1": np.eye(1), "W2": np.eye(1)}
        for v in (0.7, -0.3):
            out = forward_gcn(params, ds, np.array([[v]]))
            assert out[0, 0] == pytest.approx(max(v, 0.0))

    def test_equal_inputs_symmetric_pair(self):
        ds = Dataset(
            edges=[(0, 1)],
            features=[[0.4, 0.6], [0.4, 0.6]],
            labels=[0, 0],
            train_ids=[0],
            validation_ids=[],
            test_ids=[1],
        )
        params = initial_params(ModelSpec("gcn", (2, 3, 1), dropout_rate=0.0), seed=0)
        out = forward_gcn(params, ds, ds.features)
        assert np.allclose(out[0], out[1])

    def test_dense_oracle_on_fixture(self, six_node):
        params = initial_params(ModelSpec("gcn", (2, 4, 2), dropout_rate=0.0), seed=0)
        got = forward_gcn(params, six_node, six_node.features)
        want = dense_gcn_oracle(six_node, params, six_node.features)
        assert np.allclose(got, want, atol=1e-12)

    def test_dimension_mismatch(self, six_node):
        params = initial_params(ModelSpec("gcn", (3, 4, 2), dropout_rate=0.0), seed=0)
        with pytest.raises(ValueError, match="dim"):
            forward_gcn(params, six_node, six_node.features)

    def test_permutation_equivariance(self, six_node):
        perm = np.array([3, 5, 1, 0, 2, 4])  # image of each node id
        ds2 = Dataset(
            edges=[(perm[a], perm[b]) for a, b in six_node.edges],
            features=six_node.features[np.argsort(perm)],
            labels=six_node.labels[np.argsort(perm)],
            train_ids=perm[[0, 4]].tolist(),
            validation_ids=perm[[1]].tolist(),
            test_ids=perm[[2, 3, 5]].tolist(),
        )
        params = initial_params(ModelSpec("gcn", (2, 4, 2), dropout_rate=0.0), seed=1)
        base = forward_gcn(params, six_node, six_node.features)
        permuted = forward_gcn(params, ds2, ds2.features)
        assert np.allclose(permuted[perm], base, atol=1e-12)


# -- GAT -------------------------------------------------------------------


class TestGAT:
    def test_isolated_node_self_attention_is_one(self):
        ds = single_node_dataset()
        spec = ModelSpec("gat", (1, 2, 1), gat_heads=2, dropout_rate=0.0)
        params = initial_params(spec, seed=0)
        alpha = attention_matrix(params, ds, ds.features)
        assert alpha[:, 0, 0].tolist() == [1.0, 1.0]

    def test_zero_attention_vector_uniform(self, six_node):
        spec = ModelSpec("gat", (2, 3, 2), gat_heads=1, dropout_rate=0.0)
        params = initial_params(spec, seed=0)
        params["a1"] = np.zeros_like(params["a1"])
        alpha = attention_matrix(params, six_node, six_node.features)[0]
        for i in range(6):
            allowed = set(six_node.neighbors(i).tolist()) | {i}
            for j in allowed:
                assert alpha[i, j] == pytest.approx(1.0 / len(allowed))

    def test_rows_sum_to_one(self, six_node):
        spec = ModelSpec("gat", (2, 3, 2), gat_heads=3, dropout_rate=0.0)
        params = initial_params(spec, seed=0)
        alpha = attention_matrix(params, six_node, six_node.features)
        assert np.allclose(alpha.sum(axis=2), 1.0, atol=1e-6)

    def test_dense_oracle_on_fixture(self, six_node):
        spec = ModelSpec("gat", (2, 3, 2), gat_heads=2, dropout_rate=0.0)
        params = initial_params(spec, seed=0)
        got = forward_gat(params, six_node, six_node.features, slope=0.2)
        want = dense_gat_oracle(six_node, params, six_node.features, slope=0.2)
        assert np.allclose(got, want, atol=1e-10)

    def test_dimension_mismatch(self, six_node):
        spec = ModelSpec("gat", (5, 3, 2), gat_heads=2, dropout_rate=0.0)
        params = initial_params(spec, seed=0)
        with pytest.raises(ValueError, match="dim"):
            forward_gat(params, six_node, six_node.features)


# -- MLP -------------------------------------------------------------------


class TestMLP:
    def test_dense_oracle_on_fixture(self, six_node):
        params = initial_params(ModelSpec("mlp", (2, 4, 2), dropout_rate=0.0), seed=0)
        got = forward_mlp(params, six_node.features)
        want = np.maximum(six_node.features @ params["W1"], 0.0) @ params["W2"]
        assert np.allclose(got, want, atol=1e-12)

    def test_ignores_edges(self, six_node):
        rewired = Dataset(
            edges=[(0, 5), (1, 4)],
            features=six_node.features,
            labels=six_node.labels.tolist(),
            train_ids=[0, 4],
            validation_ids=[1],
            test_ids=[2, 3, 5],
        )
        spec = ModelSpec("mlp", (2, 4, 2), dropout_rate=0.0)
        params = initial_params(spec, seed=0)
        assert np.array_equal(
            evaluate(spec, params, six_node), evaluate(spec, params, rewired)
        )

    def test_zero_weights_uniform_confidence(self, six_node):
        params = {"W1": np.zeros((2, 4)), "W2": np.zeros((4, 2))}
        ps = PredictionSet.from_logits(forward_mlp(params, six_node.features))
        assert np.allclose(ps.probabilities, 0.5)
        assert np.allclose(ps.confidence, 0.5)
        assert ps.predicted.tolist() == [0] * 6  # tie -> lowest class id


class TestOneHot:
    def test_shapes(self, six_node):
        eye = one_hot_inputs(six_node)
        assert eye.shape == (6, 6)
        assert np.array_equal(eye, np.eye(6))
        assert eye.sum(axis=1).tolist() == [1.0] * 6

    def test_single_node(self):
        assert one_hot_inputs(single_node_dataset()).tolist() == [[1.0]]


class TestPredictionSet:
    def test_rows_sum_to_one_and_confidence_floor(self, six_node):
        rng = np.random.default_rng(3)
        ps = PredictionSet.from_logits(rng.normal(size=(40, 5)))
        assert np.allclose(ps.probabilities.sum(axis=1), 1.0, atol=1e-6)
        assert (ps.confidence >= 1.0 / 5).all()

    def test_argmax_shift_invariant(self):
        rng = np.random.default_rng(4)
        logits = rng.normal(size=(30, 4))
        a = PredictionSet.from_logits(logits)
        b = PredictionSet.from_logits(logits + 123.4)
        assert np.array_equal(a.predicted, b.predicted)


# -- gradients -------------------------------------------------------------


def rel_err(a, b):
    return np.max(np.abs(a - b) / np.maximum(1e-6, np.abs(a) + np.abs(b)))


class TestGradients:
    @pytest.mark.parametrize("arch", ["gcn", "gat", "mlp"])
    def test_matches_finite_differences(self, arch):
        ds = synthesize(5, 2, 0.6, 0.2, 4, 0.1, seed=11)  # N=10, d=4
        spec = ModelSpec(arch, (4, 3, 2), gat_heads=2, dropout_rate=0.0)
        params = initial_params(spec, seed=2)
        X = ds.features
        got = gradients(spec, params, ds, X, ds.train_mask)
        want = numeric_gradients(spec, params, ds, X, ds.train_mask)
        for key in params:
            assert rel_err(got[key], want[key]) < 1e-4, key

    def test_saturated_predictions_zero_gradient(self, six_node):
        # Margins of ~1e3 saturate the softmax to exact one-hot rows.
        spec = ModelSpec("mlp", (2, 2, 2), dropout_rate=0.0)
        params = {
            "W1": np.eye(2) * 1e3,
            "W2": np.array([[1.0, -1.0], [-1.0, 1.0]]) * 10.0,
        }
        # Train nodes 0 (class A, features lean A) and 4 (class B): the
        # saturated model predicts both perfectly.
        got = gradients(spec, params, six_node, six_node.features, six_node.train_mask)
        total = sum(float(np.abs(g).sum()) for g in got.values())
        assert total < 1e-8

    def test_backward_is_linear_in_upstream(self, six_node):
        from gnnscope.models.gcn import backward, forward_cached
        from gnnscope.models.ops import DenseInput, GraphContext

        params = initial_params(ModelSpec("gcn", (2, 3, 2), dropout_rate=0.0), seed=5)
        ctx = GraphContext(six_node)
        _, cache = forward_cached(params, ctx, DenseInput(six_node.features))
        rng = np.random.default_rng(6)
        dlogits = rng.normal(size=(6, 2))
        g1 = backward(params, ctx, cache, dlogits)
        g2 = backward(params, ctx, cache, 2.0 * dlogits)
        for key in g1:
            assert np.allclose(2.0 * g1[key], g2[key], rtol=0, atol=0)


# -- training --------------------------------------------------------------


def nearest_class_mean_accuracy(ds):
    """Brute-force baseline: assign each test node to the class whose
    train-node feature mean is closest in euclidean distance."""
    train = np.flatnonzero(ds.train_mask)
    means = np.stack(
        [ds.features[train[ds.labels[train] == c]].mean(axis=0) for c in range(ds.class_count)]
    )
    d2 = ((ds.features[:, None, :] - means[None, :, :]) ** 2).sum(axis=2)
    pred = np.argmin(d2, axis=1)
    test = np.flatnonzero(ds.test_mask)
    return float(np.mean(pred[test] == ds.labels[test]))


class TestTraining:
    def test_two_clique_reaches_full_test_accuracy(self):
        ds = synthesize(10, 2, 1.0, 0.0, 6, 0.0, seed=0)
        assert nearest_class_mean_accuracy(ds) == 1.0  # separable by construction
        spec = ModelSpec("gcn", (6, 8, 2), dropout_rate=0.5)
        tm = train(spec, TrainConfig(epochs=120, seed=0), ds)
        assert tm.accuracy["test"] == 1.0

    def test_same_seed_identical_parameters(self, six_node):
        spec = ModelSpec("gcn", (2, 4, 2), dropout_rate=0.5)
        cfg = TrainConfig(epochs=30, seed=9)
        a = train(spec, cfg, six_node)
        b = train(spec, cfg, six_node)
        for key in a.params:
            assert np.array_equal(a.params[key], b.params[key])
        assert a.loss_history == b.loss_history

    def test_divergence_reports_epoch(self, six_node):
        # A step size near the float ceiling overflows the layer product on
        # the following forward pass, which must abort with the epoch number.
        spec = ModelSpec("gcn", (2, 4, 2), dropout_rate=0.0)
        cfg = TrainConfig(epochs=50, learning_rate=1e200, seed=0)
        with pytest.raises(TrainingDiverged, match="epoch 1"):
            train(spec, cfg, six_node)

    def test_structure_proxy_ignores_features(self, six_node, six_node_doc):
        six_node_doc["features"]["dense"] = [[0.5, 0.5]] * 6
        scrambled = Dataset.from_document(six_node_doc)
        spec = ModelSpec("gcn", (6, 4, 2), dropout_rate=0.5, use_one_hot_inputs=True)
        cfg = TrainConfig(epochs=40, seed=3)
        a = train(spec, cfg, six_node)
        b = train(spec, cfg, scrambled)
        assert np.array_equal(a.predictions.predicted, b.predictions.predicted)
        assert np.array_equal(a.predictions.probabilities, b.predictions.probabilities)

    def test_one_hot_model_matches_explicit_identity(self, six_node):
        # The implicit identity path must equal feeding the explicit matrix.
        spec = ModelSpec("gcn", (6, 4, 2), dropout_rate=0.5, use_one_hot_inputs=True)
        tm = train(spec, TrainConfig(epochs=25, seed=1), six_node)
        explicit = forward_gcn(tm.params, six_node, one_hot_inputs(six_node))
        assert np.array_equal(evaluate(spec, tm.params, six_node), explicit)

    def test_trio_specs_cover_roles(self, six_node):
        specs = trio_specs("gcn", six_node)
        assert set(specs) == {"gnn", "structure", "feature"}
        assert specs["structure"].use_one_hot_inputs
        assert specs["structure"].layer_sizes[0] == 6
        assert specs["feature"].architecture == "mlp"
        with pytest.raises(ValueError):
            trio_specs("mlp", six_node)

    def test_convex_problem_loss_windows_non_increasing(self):
        # Softmax regression (single linear layer, fixed inputs) is convex;
        # over any 10-epoch window the loss must not increase.
        rng = np.random.default_rng(0)
        X = rng.normal(size=(30, 4))
        y = rng.integers(0, 3, size=30)
        W = {"W": np.zeros((4, 3))}
        opt = Adam(W, learning_rate=0.01, weight_decay=0.0)
        ids = np.arange(30)
        losses = []
        for _ in range(120):
            logits = X @ W["W"]
            loss, dlogits = cross_entropy(logits, y, ids)
            losses.append(loss)
            opt.step(W, {"W": X.T @ dlogits})
        for e in range(len(losses) - 10):
            assert losses[e + 10] <= losses[e] + 1e-9


class TestBundle:
    def test_round_trip_exact(self, six_node, tmp_path):
        specs = trio_specs("gcn", six_node, hidden=4)
        cfg = TrainConfig(epochs=15, seed=0)
        models = {role: train(s, cfg, six_node) for role, s in specs.items()}
        path = tmp_path / "bundle.txt"
        save_bundle(path, models)
        loaded = load_bundle(path, six_node)
        assert set(loaded) == set(models)
        for role in models:
            for key in models[role].params:
                assert np.array_equal(models[role].params[key], loaded[role].params[key])
            assert np.array_equal(
                models[role].predictions.probabilities,
                loaded[role].predictions.probabilities,
            )
            assert models[role].accuracy == loaded[role].accuracy

    def test_rejects_wrong_format(self, six_node, tmp_path):
        p = tmp_path / "x.txt"
        p.write_text('{"format": "other/9", "models": {}}')
        with pytest.raises(ValueError, match="gnnscope-bundle/1"):
            load_bundle(p, six_node)
