"""Training loop (Adam + weight decay), analytic gradients, bundle artifact."""

from __future__ import annotations

import json

import numpy as np

from gnnscope.models import gat, gcn, mlp
from gnnscope.models.ops import DenseInput, GraphContext, IdentityInput, cross_entropy
from gnnscope.models.spec import (
    ModelSpec,
    PredictionSet,
    TrainConfig,
    TrainedModel,
    TrainingDiverged,
)

BUNDLE_TAG = "gnnscope-bundle/1"


class Adam:
    """Adam with coupled L2 weight decay (decay added to the raw gradient)."""

    def __init__(self, params, learning_rate, weight_decay, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = learning_rate
        self.wd = weight_decay
        self.b1, self.b2, self.eps = beta1, beta2, eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params, grads) -> None:
        self.t += 1
        for key, p in params.items():
            g = grads[key] + self.wd * p
            self.m[key] = self.b1 * self.m[key] + (1.0 - self.b1) * g
            self.v[key] = self.b2 * self.v[key] + (1.0 - self.b2) * g * g
            mhat = self.m[key] / (1.0 - self.b1**self.t)
            vhat = self.v[key] / (1.0 - self.b2**self.t)
            p -= self.lr * mhat / (np.sqrt(vhat) + self.eps)


def _init_params(spec: ModelSpec, rng: np.random.Generator):
    if spec.architecture == "gat":
        return gat.init_params(rng, spec.layer_sizes, spec.gat_heads)
    if spec.architecture == "gcn":
        return gcn.init_params(rng, spec.layer_sizes)
    return mlp.init_params(rng, spec.layer_sizes)


def initial_params(spec: ModelSpec, seed: int) -> dict[str, np.ndarray]:
    """Glorot-uniform starting parameters drawn from the declared seed."""
    return _init_params(spec, np.random.default_rng(seed))


def _input_for(spec: ModelSpec, dataset):
    if spec.use_one_hot_inputs:
        if spec.layer_sizes[0] != dataset.node_count:
            raise ValueError(
                f"one-hot input dim {spec.layer_sizes[0]} != node count {dataset.node_count}"
            )
        return IdentityInput(dataset.node_count)
    if spec.layer_sizes[0] != dataset.feature_dim:
        raise ValueError(
            f"input dim {spec.layer_sizes[0]} != feature dim {dataset.feature_dim}"
        )
    return DenseInput(dataset.features)


def _forward(spec, params, ctx, inp, dropout=None):
    if spec.architecture == "gcn":
        return gcn.forward_cached(params, ctx, inp, dropout)
    if spec.architecture == "gat":
        return gat.forward_cached(params, ctx, inp, spec.leaky_relu_slope, dropout)
    return mlp.forward_cached(params, inp, dropout)


def _backward(spec, params, ctx, cache, dlogits):
    if spec.architecture == "gcn":
        return gcn.backward(params, ctx, cache, dlogits)
    if spec.architecture == "gat":
        return gat.backward(params, ctx, cache, dlogits, spec.leaky_relu_slope)
    return mlp.backward(params, cache, dlogits)


def one_hot_inputs(dataset) -> np.ndarray:
    """Explicit N x N indicator features (row i is the indicator of node i)."""
    return np.eye(dataset.node_count, dtype=np.float64)


def evaluate(spec: ModelSpec, params, dataset) -> np.ndarray:
    """Deterministic full-graph logits with dropout disabled."""
    ctx = GraphContext(dataset) if spec.architecture in ("gcn", "gat") else None
    logits, _ = _forward(spec, params, ctx, _input_for(spec, dataset))
    return logits


def gradients(spec: ModelSpec, params, dataset, inputs, train_mask) -> dict[str, np.ndarray]:
    """Analytic gradients of the mean train-node cross-entropy.

    Pure objective gradients: no weight decay, no dropout, so they are
    directly comparable against finite differences.
    """
    train_mask = np.asarray(train_mask)
    ids = np.flatnonzero(train_mask) if train_mask.dtype == bool else train_mask.astype(np.int64)
    ctx = GraphContext(dataset) if spec.architecture in ("gcn", "gat") else None
    logits, cache = _forward(spec, params, ctx, DenseInput(inputs))
    _, dlogits = cross_entropy(logits, dataset.labels, ids)
    return _backward(spec, params, ctx, cache, dlogits)


def _accuracy(predicted, labels, mask) -> float:
    ids = np.flatnonzero(mask)
    if ids.size == 0:
        return float("nan")
    return float(np.mean(predicted[ids] == labels[ids]))


def train(spec: ModelSpec, config: TrainConfig, dataset) -> TrainedModel:
    """Fit one trio member; deterministic for a given (spec, config, dataset).

    The declared seed drives one RNG stream consumed in a fixed order:
    parameter init first, then the two dropout masks of each epoch.
    """
    rng = np.random.default_rng(config.seed)
    params = _init_params(spec, rng)
    ctx = GraphContext(dataset) if spec.architecture in ("gcn", "gat") else None
    inp = _input_for(spec, dataset)
    train_ids = np.flatnonzero(dataset.train_mask)
    optimizer = Adam(params, config.learning_rate, config.weight_decay)
    dropout = None if spec.dropout_rate == 0.0 else (rng, spec.dropout_rate)

    history = []
    for epoch in range(config.epochs):
        # Divergence is detected from the loss, so let overflow reach it
        # silently instead of warning on the way.
        with np.errstate(over="ignore", invalid="ignore"):
            logits, cache = _forward(spec, params, ctx, inp, dropout)
            loss, dlogits = cross_entropy(logits, dataset.labels, train_ids)
        if not np.isfinite(loss):
            raise TrainingDiverged(epoch, loss)
        history.append(loss)
        grads = _backward(spec, params, ctx, cache, dlogits)
        optimizer.step(params, grads)

    logits, _ = _forward(spec, params, ctx, inp)
    predictions = PredictionSet.from_logits(logits)
    accuracy = {
        name: _accuracy(predictions.predicted, dataset.labels, mask)
        for name, mask in (
            ("train", dataset.train_mask),
            ("validation", dataset.validation_mask),
            ("test", dataset.test_mask),
        )
    }
    return TrainedModel(
        spec=spec,
        config=config,
        params={k: v.copy() for k, v in params.items()},
        predictions=predictions,
        accuracy=accuracy,
        loss_history=tuple(history),
    )


def trio_specs(architecture: str, dataset, hidden: int | None = None, heads: int = 8, dropout: float = 0.5):
    """Model specs for the trio: the GNN, its structure-only twin (one-hot
    inputs), and the feature-only perceptron."""
    if architecture not in ("gcn", "gat"):
        raise ValueError(f"the main model must be gcn or gat, not {architecture!r}")
    d, n, c = dataset.feature_dim, dataset.node_count, dataset.class_count
    mlp_hidden = 16 if hidden is None else hidden
    if hidden is None:
        hidden = 8 if architecture == "gat" else 16
    common = {"gat_heads": heads, "dropout_rate": dropout}
    return {
        "gnn": ModelSpec(architecture, (d, hidden, c), **common),
        "structure": ModelSpec(architecture, (n, hidden, c), use_one_hot_inputs=True, **common),
        "feature": ModelSpec("mlp", (d, mlp_hidden, c), dropout_rate=dropout),
    }


# -- bundle artifact -------------------------------------------------------


def save_bundle(path, models: dict[str, TrainedModel]) -> None:
    """Write trained models as a versioned, diffable text document.

    Weights are stored as decimal arrays (JSON numbers round-trip float64
    exactly), one parameter per line group under indent-1 formatting.
    """
    doc = {"format": BUNDLE_TAG, "models": {}}
    for role in sorted(models):
        tm = models[role]
        doc["models"][role] = {
            "spec": tm.spec.to_document(),
            "config": tm.config.to_document(),
            "accuracy": tm.accuracy,
            "loss_history": list(tm.loss_history),
            "params": {
                k: {"shape": list(v.shape), "values": v.ravel().tolist()}
                for k, v in sorted(tm.params.items())
            },
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_bundle(path, dataset) -> dict[str, TrainedModel]:
    """Re-hydrate trained models; predictions are recomputed (deterministic
    evaluation pass) so the artifact stays small and diffable."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != BUNDLE_TAG:
        raise ValueError(f"{path}: not a {BUNDLE_TAG} document")
    out = {}
    for role, entry in doc["models"].items():
        spec = ModelSpec.from_document(entry["spec"])
        config = TrainConfig.from_document(entry["config"])
        params = {
            k: np.asarray(p["values"], dtype=np.float64).reshape(p["shape"])
            for k, p in entry["params"].items()
        }
        predictions = PredictionSet.from_logits(evaluate(spec, params, dataset))
        out[role] = TrainedModel(
            spec=spec,
            config=config,
            params=params,
            predictions=predictions,
            accuracy={k: float(v) for k, v in entry["accuracy"].items()},
            loss_history=tuple(entry["loss_history"]),
        )
    return out
