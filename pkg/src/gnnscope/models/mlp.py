"""Two-layer perceptron: the feature-only proxy (no neighbor aggregation)."""

from __future__ import annotations

import numpy as np

from gnnscope.models.ops import DenseInput, dropout_mask, glorot, relu


def init_params(rng: np.random.Generator, layer_sizes) -> dict[str, np.ndarray]:
    d, h, c = layer_sizes
    return {
        "W1": glorot(rng, (d, h), d, h),
        "W2": glorot(rng, (h, c), h, c),
    }


def forward_cached(params, inp, dropout=None):
    if dropout is not None:
        rng, rate = dropout
        inp = inp.dropped(rng, rate)
    V1 = inp.matmul(params["W1"])
    H1 = relu(V1)
    if dropout is not None:
        M1 = dropout_mask(rng, H1.shape, rate)
        H1d = H1 * M1
    else:
        M1 = None
        H1d = H1
    logits = H1d @ params["W2"]
    cache = {"inp": inp, "V1": V1, "H1d": H1d, "M1": M1}
    return logits, cache


def backward(params, cache, dlogits) -> dict[str, np.ndarray]:
    dW2 = cache["H1d"].T @ dlogits
    dH1d = dlogits @ params["W2"].T
    dH1 = dH1d if cache["M1"] is None else dH1d * cache["M1"]
    dV1 = dH1 * (cache["V1"] > 0.0)
    dW1 = cache["inp"].matmul_t(dV1)
    return {"W1": dW1, "W2": dW2}


def forward_mlp(params, inputs: np.ndarray) -> np.ndarray:
    """Evaluation-mode logits; the graph plays no part."""
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.shape[1] != params["W1"].shape[0]:
        raise ValueError(
            f"input dim {inputs.shape[1]} != weight rows {params['W1'].shape[0]}"
        )
    logits, _ = forward_cached(params, DenseInput(inputs))
    return logits
