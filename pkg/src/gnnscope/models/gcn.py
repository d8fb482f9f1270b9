"""Two-layer graph convolution with symmetric degree normalization.

Layer rule: x_i <- sigma( sum_{j in N(i) u {i}} x_j W / sqrt(deg~(i) deg~(j)) )
where deg~ counts the added self loop; ReLU after the hidden layer, raw
logits at the output.
"""

from __future__ import annotations

import numpy as np

from gnnscope.models.ops import DenseInput, GraphContext, relu


def init_params(rng: np.random.Generator, layer_sizes) -> dict[str, np.ndarray]:
    from gnnscope.models.ops import glorot

    d, h, c = layer_sizes
    return {
        "W1": glorot(rng, (d, h), d, h),
        "W2": glorot(rng, (h, c), h, c),
    }


def forward_cached(params, ctx: GraphContext, inp, dropout=None):
    """Full forward pass keeping every intermediate needed by backward.

    ``dropout`` is None for evaluation or (rng, rate) during training; the
    mask draw order is fixed: layer-1 input first, then the hidden layer.
    """
    if dropout is not None:
        rng, rate = dropout
        inp = inp.dropped(rng, rate)
    U1 = inp.matmul(params["W1"])
    V1 = ctx.propagate(U1)
    H1 = relu(V1)
    if dropout is not None:
        from gnnscope.models.ops import dropout_mask

        M1 = dropout_mask(rng, H1.shape, rate)
        H1d = H1 * M1
    else:
        M1 = None
        H1d = H1
    U2 = H1d @ params["W2"]
    logits = ctx.propagate(U2)
    cache = {"inp": inp, "V1": V1, "H1d": H1d, "M1": M1}
    return logits, cache


def backward(params, ctx: GraphContext, cache, dlogits) -> dict[str, np.ndarray]:
    """Gradients of the loss wrt W1/W2 given d(loss)/d(logits).

    The propagation operator is symmetric, so its adjoint is itself.
    """
    dU2 = ctx.propagate(dlogits)
    dW2 = cache["H1d"].T @ dU2
    dH1d = dU2 @ params["W2"].T
    dH1 = dH1d if cache["M1"] is None else dH1d * cache["M1"]
    dV1 = dH1 * (cache["V1"] > 0.0)
    dU1 = ctx.propagate(dV1)
    dW1 = cache["inp"].matmul_t(dU1)
    return {"W1": dW1, "W2": dW2}


def forward_gcn(params, dataset, inputs: np.ndarray) -> np.ndarray:
    """Evaluation-mode logits for an explicit input matrix."""
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.shape[0] != dataset.node_count:
        raise ValueError(
            f"inputs have {inputs.shape[0]} rows for {dataset.node_count} nodes"
        )
    if inputs.shape[1] != params["W1"].shape[0]:
        raise ValueError(
            f"input dim {inputs.shape[1]} != weight rows {params['W1'].shape[0]}"
        )
    logits, _ = forward_cached(params, GraphContext(dataset), DenseInput(inputs))
    return logits
