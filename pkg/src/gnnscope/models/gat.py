"""Two-layer graph attention network.

Per head, scores over j in N(i) u {i} are
LeakyReLU(a^T [W x_i || W x_j]) normalized by a softmax over the
neighborhood, and the aggregate is sum_j alpha_ij W x_j.  Heads are
concatenated after the hidden layer (ReLU) and averaged at the output.
"""

from __future__ import annotations

import numpy as np

from gnnscope.models.ops import (
    DenseInput,
    GraphContext,
    dropout_mask,
    glorot,
    leaky_relu,
    relu,
)


def init_params(rng: np.random.Generator, layer_sizes, heads: int) -> dict[str, np.ndarray]:
    d, h, c = layer_sizes
    return {
        "W1": glorot(rng, (heads, d, h), d, h),
        "a1": glorot(rng, (heads, 2 * h), 2 * h, 1),
        "W2": glorot(rng, (heads, heads * h, c), heads * h, c),
        "a2": glorot(rng, (heads, 2 * c), 2 * c, 1),
    }


def _attend(ctx: GraphContext, Z: np.ndarray, a: np.ndarray, slope: float):
    """One attention head over precomputed transforms Z; returns (out, cache)."""
    m = Z.shape[1]
    u = Z @ a[:m]
    v = Z @ a[m:]
    pre = u[ctx.src] + v[ctx.dst]
    s = leaky_relu(pre, slope)
    smax = ctx.segment_max(s)
    ex = np.exp(s - smax[ctx.src])
    ssum = ctx.segment_sum(ex)
    alpha = ex / ssum[ctx.src]
    out = ctx.segment_sum(alpha[:, None] * Z[ctx.dst])
    return out, {"Z": Z, "a": a, "pre": pre, "alpha": alpha}


def _attend_backward(ctx: GraphContext, cache, dout, slope: float):
    """Adjoint of _attend: gradients wrt Z and a."""
    Z, a, pre, alpha = cache["Z"], cache["a"], cache["pre"], cache["alpha"]
    m = Z.shape[1]
    dalpha = np.einsum("ej,ej->e", dout[ctx.src], Z[ctx.dst])
    dZ = ctx.scatter_dst(alpha[:, None] * dout[ctx.src])
    t = ctx.segment_sum(alpha * dalpha)
    ds = alpha * (dalpha - t[ctx.src])
    dpre = ds * np.where(pre > 0.0, 1.0, slope)
    du = ctx.segment_sum(dpre)
    dv = ctx.scatter_dst(dpre)
    da = np.concatenate([Z.T @ du, Z.T @ dv])
    dZ += du[:, None] * a[None, :m] + dv[:, None] * a[None, m:]
    return dZ, da


def forward_cached(params, ctx: GraphContext, inp, slope: float, dropout=None):
    heads = params["W1"].shape[0]
    h = params["W1"].shape[2]
    if dropout is not None:
        rng, rate = dropout
        inp = inp.dropped(rng, rate)
    outs1, caches1 = [], []
    for k in range(heads):
        Z = inp.matmul(params["W1"][k])
        out, c = _attend(ctx, Z, params["a1"][k], slope)
        outs1.append(out)
        caches1.append(c)
    V1 = np.concatenate(outs1, axis=1)
    H1 = relu(V1)
    if dropout is not None:
        M1 = dropout_mask(rng, H1.shape, rate)
        H1d = H1 * M1
    else:
        M1 = None
        H1d = H1
    outs2, caches2 = [], []
    for k in range(heads):
        Z = H1d @ params["W2"][k]
        out, c = _attend(ctx, Z, params["a2"][k], slope)
        outs2.append(out)
        caches2.append(c)
    logits = sum(outs2) / heads
    cache = {
        "inp": inp,
        "V1": V1,
        "H1d": H1d,
        "M1": M1,
        "layer1": caches1,
        "layer2": caches2,
        "h": h,
    }
    return logits, cache


def backward(params, ctx: GraphContext, cache, dlogits, slope: float):
    heads = params["W1"].shape[0]
    h = cache["h"]
    dW2 = np.empty_like(params["W2"])
    da2 = np.empty_like(params["a2"])
    dH1d = np.zeros_like(cache["H1d"])
    dout2 = dlogits / heads
    for k in range(heads):
        dZ, da = _attend_backward(ctx, cache["layer2"][k], dout2, slope)
        dW2[k] = cache["H1d"].T @ dZ
        da2[k] = da
        dH1d += dZ @ params["W2"][k].T
    dH1 = dH1d if cache["M1"] is None else dH1d * cache["M1"]
    dV1 = dH1 * (cache["V1"] > 0.0)
    dW1 = np.empty_like(params["W1"])
    da1 = np.empty_like(params["a1"])
    for k in range(heads):
        dZ, da = _attend_backward(ctx, cache["layer1"][k], dV1[:, k * h : (k + 1) * h], slope)
        dW1[k] = cache["inp"].matmul_t(dZ)
        da1[k] = da
    return {"W1": dW1, "a1": da1, "W2": dW2, "a2": da2}


def forward_gat(params, dataset, inputs: np.ndarray, slope: float = 0.2) -> np.ndarray:
    """Evaluation-mode logits for an explicit input matrix."""
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.shape[0] != dataset.node_count:
        raise ValueError(
            f"inputs have {inputs.shape[0]} rows for {dataset.node_count} nodes"
        )
    if inputs.shape[1] != params["W1"].shape[1]:
        raise ValueError(
            f"input dim {inputs.shape[1]} != weight rows {params['W1'].shape[1]}"
        )
    logits, _ = forward_cached(params, GraphContext(dataset), DenseInput(inputs), slope)
    return logits


def attention_matrix(params, dataset, inputs: np.ndarray, slope: float = 0.2) -> np.ndarray:
    """Hidden-layer attention coefficients as one dense (heads, N, N) tensor.

    Test and inspection helper; rows hold alpha_ij with zeros outside
    N(i) u {i}.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    ctx = GraphContext(dataset)
    inp = DenseInput(inputs)
    heads = params["W1"].shape[0]
    n = dataset.node_count
    out = np.zeros((heads, n, n))
    for k in range(heads):
        Z = inp.matmul(params["W1"][k])
        _, c = _attend(ctx, Z, params["a1"][k], slope)
        out[k][ctx.src, ctx.dst] = c["alpha"]
    return out
