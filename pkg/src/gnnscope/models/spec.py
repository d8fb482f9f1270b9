"""Model and training configuration types plus prediction containers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ARCHITECTURES = ("gcn", "gat", "mlp")


class TrainingDiverged(RuntimeError):
    """Raised when the training loss stops being finite."""

    def __init__(self, epoch: int, loss: float):
        super().__init__(f"non-finite loss {loss!r} at epoch {epoch}")
        self.epoch = epoch


@dataclass(frozen=True)
class ModelSpec:
    """Architecture description for one member of the model trio.

    ``layer_sizes`` is [d_in, d_hidden, C]; exactly two trained layers.  For
    GAT, ``layer_sizes[1]`` is the per-head hidden width and heads are
    concatenated after the hidden layer and averaged at the output.  With
    ``use_one_hot_inputs`` the model consumes an identity feature matrix
    (the structure-only proxy) and ``layer_sizes[0]`` must equal N.
    """

    architecture: str
    layer_sizes: tuple[int, int, int]
    gat_heads: int = 8
    leaky_relu_slope: float = 0.2
    dropout_rate: float = 0.5
    use_one_hot_inputs: bool = False

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if len(self.layer_sizes) != 3:
            raise ValueError("layer_sizes must be [d_in, d_hidden, C]")
        if any(int(s) <= 0 for s in self.layer_sizes):
            raise ValueError("layer sizes must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")
        if self.architecture == "gat" and self.gat_heads < 1:
            raise ValueError("gat_heads must be at least 1")
        object.__setattr__(self, "layer_sizes", tuple(int(s) for s in self.layer_sizes))

    @property
    def class_count(self) -> int:
        return self.layer_sizes[2]

    def to_document(self) -> dict:
        doc = {
            "architecture": self.architecture,
            "layer_sizes": list(self.layer_sizes),
            "dropout_rate": self.dropout_rate,
            "use_one_hot_inputs": self.use_one_hot_inputs,
        }
        if self.architecture == "gat":
            doc["gat_heads"] = self.gat_heads
            doc["leaky_relu_slope"] = self.leaky_relu_slope
        return doc

    @classmethod
    def from_document(cls, doc: dict) -> "ModelSpec":
        return cls(
            architecture=doc["architecture"],
            layer_sizes=tuple(doc["layer_sizes"]),
            gat_heads=int(doc.get("gat_heads", 8)),
            leaky_relu_slope=float(doc.get("leaky_relu_slope", 0.2)),
            dropout_rate=float(doc["dropout_rate"]),
            use_one_hot_inputs=bool(doc["use_one_hot_inputs"]),
        )


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    learning_rate: float = 0.01
    weight_decay: float = 5e-4
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be non-negative")

    def to_document(self) -> dict:
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "weight_decay": self.weight_decay,
            "seed": self.seed,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "TrainConfig":
        return cls(
            epochs=int(doc["epochs"]),
            learning_rate=float(doc["learning_rate"]),
            weight_decay=float(doc["weight_decay"]),
            seed=int(doc["seed"]),
        )


@dataclass(frozen=True)
class PredictionSet:
    """Per-node probabilities with the induced labels and confidences."""

    probabilities: np.ndarray  # (N, C), rows sum to 1
    predicted: np.ndarray  # (N,) int64 argmax, ties -> lowest class id
    confidence: np.ndarray  # (N,) probability of the predicted class

    @classmethod
    def from_logits(cls, logits: np.ndarray) -> "PredictionSet":
        logits = np.asarray(logits, dtype=np.float64)
        shifted = logits - logits.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        probs = e / e.sum(axis=1, keepdims=True)
        predicted = np.argmax(probs, axis=1).astype(np.int64)
        confidence = probs[np.arange(probs.shape[0]), predicted]
        return cls(probs, predicted, confidence)


@dataclass(frozen=True)
class TrainedModel:
    """One trained trio member: parameters plus its full-graph predictions."""

    spec: ModelSpec
    config: TrainConfig
    params: dict[str, np.ndarray]
    predictions: PredictionSet
    accuracy: dict[str, float]  # keys train/validation/test
    loss_history: tuple[float, ...] = field(repr=False, default=())
