"""The model trio: a GNN, its structure-only twin, and a feature-only MLP."""

from gnnscope.models.gat import attention_matrix, forward_gat
from gnnscope.models.gcn import forward_gcn
from gnnscope.models.mlp import forward_mlp
from gnnscope.models.spec import (
    ModelSpec,
    PredictionSet,
    TrainConfig,
    TrainedModel,
    TrainingDiverged,
)
from gnnscope.models.training import (
    Adam,
    evaluate,
    gradients,
    initial_params,
    load_bundle,
    one_hot_inputs,
    save_bundle,
    train,
    trio_specs,
)

__all__ = [
    "Adam",
    "ModelSpec",
    "PredictionSet",
    "TrainConfig",
    "TrainedModel",
    "TrainingDiverged",
    "attention_matrix",
    "evaluate",
    "forward_gat",
    "forward_gcn",
    "forward_mlp",
    "gradients",
    "initial_params",
    "load_bundle",
    "one_hot_inputs",
    "save_bundle",
    "train",
    "trio_specs",
]
