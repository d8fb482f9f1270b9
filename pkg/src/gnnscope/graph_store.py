"""Graph dataset store: loading, validation, canonical serialization, fixtures.

A dataset is an immutable undirected, unweighted graph with node features in
[0, 1], per-node class labels, and disjoint train/validation/test masks.  The
on-disk form is a single self-describing JSON document::

    {
      "format": "gnnscope-dataset/1",
      "nodes": 6,
      "edges": [[0, 1], [0, 2], ...],          # unordered pairs, no self loops
      "features": {"dim": 2, "dense": [[...], ...]}
                  # or, required above dim 1000:
                  {"dim": d, "sparse": [[node, dim, value], ...]},
      "labels": [0, 0, 1, ...],
      "masks": {"train": [0, 4], "validation": [1], "test": [2, 3, 5]},
      "class_names": ["A", "B"],               # optional
      "feature_names": ["w0", "w1"]            # optional
    }

Canonical serialization (what ``save`` writes and the ``ingest`` command
emits) stores each edge as [min, max], sorts edges lexicographically, sorts
sparse triplets by (node, dim), and sorts mask id lists, so re-serializing a
valid file is byte-stable.
"""

from __future__ import annotations

import json
import math
from typing import Iterable

import numpy as np

FORMAT_TAG = "gnnscope-dataset/1"
SPARSE_DIM_THRESHOLD = 1000

MASK_NAMES = ("train", "validation", "test")


class DatasetFormatError(ValueError):
    """The file is not a parseable dataset document."""


class DatasetValidationError(ValueError):
    """The document parses but violates a dataset invariant."""


class Dataset:
    """Immutable graph snapshot.

    Construction validates every invariant; afterwards the instance (and its
    arrays, which are marked read-only) may be shared freely across threads.
    """

    def __init__(
        self,
        edges: Iterable[tuple[int, int]],
        features: np.ndarray,
        labels: Iterable[int],
        train_ids: Iterable[int],
        validation_ids: Iterable[int],
        test_ids: Iterable[int],
        class_names: Iterable[str] | None = None,
        feature_names: Iterable[str] | None = None,
    ):
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2:
            raise DatasetValidationError("features must be a 2D (nodes x dim) matrix")
        n = features.shape[0]
        labels = np.asarray(list(labels), dtype=np.int64)
        if labels.shape != (n,):
            raise DatasetValidationError(
                f"label count {labels.shape[0]} does not match node count {n}"
            )
        if n == 0:
            raise DatasetValidationError("dataset must contain at least one node")

        bad = np.flatnonzero((features < 0.0) | (features > 1.0) | ~np.isfinite(features))
        if bad.size:
            i, j = np.unravel_index(bad[0], features.shape)
            raise DatasetValidationError(
                f"feature outside [0,1] at node {i}, dim {j}: {features[i, j]!r}"
            )

        edge_arr = np.asarray([(int(a), int(b)) for a, b in edges], dtype=np.int64)
        edge_arr = edge_arr.reshape(-1, 2)
        for idx, (a, b) in enumerate(edge_arr):
            if not (0 <= a < n and 0 <= b < n):
                raise DatasetValidationError(
                    f"edge {idx} ({a},{b}): endpoint out of range for {n} nodes"
                )
            if a == b:
                raise DatasetValidationError(f"edge {idx} ({a},{b}): self loop")
        edge_arr = np.sort(edge_arr, axis=1) if edge_arr.size else edge_arr
        if edge_arr.size:
            order = np.lexsort((edge_arr[:, 1], edge_arr[:, 0]))
            edge_arr = edge_arr[order]
            dup = np.flatnonzero(np.all(edge_arr[1:] == edge_arr[:-1], axis=1))
            if dup.size:
                a, b = edge_arr[dup[0] + 1]
                raise DatasetValidationError(f"duplicate edge ({a},{b})")

        if class_names is not None:
            class_names = tuple(str(c) for c in class_names)
            class_count = len(class_names)
        else:
            class_count = int(labels.max()) + 1 if n else 0
        bad_label = np.flatnonzero((labels < 0) | (labels >= class_count))
        if bad_label.size:
            i = bad_label[0]
            raise DatasetValidationError(
                f"unknown class id {labels[i]} at node {i} (classes: 0..{class_count - 1})"
            )
        present = np.zeros(class_count, dtype=bool)
        present[labels] = True
        if not present.all():
            missing = int(np.flatnonzero(~present)[0])
            raise DatasetValidationError(f"class {missing} has no nodes")

        masks = {}
        for name, ids in zip(MASK_NAMES, (train_ids, validation_ids, test_ids)):
            mask = np.zeros(n, dtype=bool)
            for raw in ids:
                i = int(raw)
                if not 0 <= i < n:
                    raise DatasetValidationError(f"{name} mask id {i} out of range")
                if mask[i]:
                    raise DatasetValidationError(f"{name} mask repeats node {i}")
                mask[i] = True
            masks[name] = mask
        overlap = (masks["train"] & masks["validation"]) | (masks["train"] & masks["test"]) | (
            masks["validation"] & masks["test"]
        )
        if overlap.any():
            i = int(np.flatnonzero(overlap)[0])
            raise DatasetValidationError(f"masks overlap at node {i}")
        if not masks["train"].any():
            raise DatasetValidationError("train mask is empty")

        if feature_names is not None:
            feature_names = tuple(str(f) for f in feature_names)
            if len(feature_names) != features.shape[1]:
                raise DatasetValidationError(
                    f"feature_names length {len(feature_names)} != dim {features.shape[1]}"
                )

        self._edges = edge_arr
        self._features = features
        self._labels = labels
        self._class_count = class_count
        self._class_names = class_names
        self._feature_names = feature_names
        self._masks = masks
        for arr in (self._edges, self._features, self._labels, *masks.values()):
            arr.setflags(write=False)

        # CSR adjacency over both edge directions, no self loops.
        src = np.concatenate([edge_arr[:, 0], edge_arr[:, 1]]) if edge_arr.size else np.empty(0, np.int64)
        dst = np.concatenate([edge_arr[:, 1], edge_arr[:, 0]]) if edge_arr.size else np.empty(0, np.int64)
        order = np.lexsort((dst, src))
        self._adj_src = src[order]
        self._adj_dst = dst[order]
        self._indptr = np.searchsorted(self._adj_src, np.arange(n + 1))
        self._degrees = np.diff(self._indptr)
        for arr in (self._adj_src, self._adj_dst, self._indptr, self._degrees):
            arr.setflags(write=False)

    # -- basic accessors ---------------------------------------------------

    @property
    def node_count(self) -> int:
        return self._features.shape[0]

    @property
    def feature_dim(self) -> int:
        return self._features.shape[1]

    @property
    def class_count(self) -> int:
        return self._class_count

    @property
    def edges(self) -> np.ndarray:
        """Canonical (E, 2) array of [min, max] pairs, lexicographically sorted."""
        return self._edges

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def class_names(self) -> tuple[str, ...] | None:
        return self._class_names

    @property
    def feature_names(self) -> tuple[str, ...] | None:
        return self._feature_names

    @property
    def train_mask(self) -> np.ndarray:
        return self._masks["train"]

    @property
    def validation_mask(self) -> np.ndarray:
        return self._masks["validation"]

    @property
    def test_mask(self) -> np.ndarray:
        return self._masks["test"]

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def indptr(self) -> np.ndarray:
        """CSR row pointer of the symmetric adjacency (no self loops)."""
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        """CSR column indices matching :attr:`indptr`."""
        return self._adj_dst

    def neighbors(self, node: int) -> np.ndarray:
        return self._adj_dst[self._indptr[node] : self._indptr[node + 1]]

    def class_name(self, c: int) -> str:
        if self._class_names is not None:
            return self._class_names[c]
        return str(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            np.array_equal(self._edges, other._edges)
            and np.array_equal(self._features, other._features)
            and np.array_equal(self._labels, other._labels)
            and self._class_count == other._class_count
            and self._class_names == other._class_names
            and self._feature_names == other._feature_names
            and all(np.array_equal(self._masks[k], other._masks[k]) for k in MASK_NAMES)
        )

    def __repr__(self) -> str:
        return (
            f"Dataset(nodes={self.node_count}, edges={len(self._edges)}, "
            f"dim={self.feature_dim}, classes={self.class_count})"
        )

    # -- serialization -----------------------------------------------------

    def to_document(self) -> dict:
        """Canonical JSON-ready document (sorted edges, triplets, masks)."""
        doc: dict = {
            "format": FORMAT_TAG,
            "nodes": self.node_count,
            "edges": self._edges.tolist(),
        }
        d = self.feature_dim
        if d > SPARSE_DIM_THRESHOLD:
            rows, cols = np.nonzero(self._features)
            doc["features"] = {
                "dim": d,
                "sparse": [
                    [int(i), int(j), float(self._features[i, j])]
                    for i, j in zip(rows, cols)
                ],
            }
        else:
            doc["features"] = {"dim": d, "dense": self._features.tolist()}
        doc["labels"] = self._labels.tolist()
        doc["masks"] = {
            name: np.flatnonzero(self._masks[name]).tolist() for name in MASK_NAMES
        }
        if self._class_names is not None:
            doc["class_names"] = list(self._class_names)
        if self._feature_names is not None:
            doc["feature_names"] = list(self._feature_names)
        return doc

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_document(), fh, separators=(",", ":"))
            fh.write("\n")

    @classmethod
    def from_document(cls, doc: dict) -> "Dataset":
        if not isinstance(doc, dict):
            raise DatasetFormatError("dataset document must be a JSON object")
        tag = doc.get("format")
        if tag != FORMAT_TAG:
            raise DatasetFormatError(
                f"unsupported format tag {tag!r} (expected {FORMAT_TAG!r})"
            )
        for key in ("nodes", "edges", "features", "labels", "masks"):
            if key not in doc:
                raise DatasetFormatError(f"missing field {key!r}")
        try:
            n = int(doc["nodes"])
        except (TypeError, ValueError):
            raise DatasetFormatError("'nodes' must be an integer") from None
        feats = doc["features"]
        if not isinstance(feats, dict) or "dim" not in feats:
            raise DatasetFormatError("'features' must carry a 'dim' and a dense/sparse payload")
        d = int(feats["dim"])
        if "dense" in feats:
            features = np.asarray(feats["dense"], dtype=np.float64)
            if features.shape != (n, d) and not (n == 0 and features.size == 0):
                raise DatasetFormatError(
                    f"dense features shape {features.shape} != ({n}, {d})"
                )
        elif "sparse" in feats:
            features = np.zeros((n, d), dtype=np.float64)
            for idx, triplet in enumerate(feats["sparse"]):
                try:
                    i, j, v = triplet
                except (TypeError, ValueError):
                    raise DatasetFormatError(f"sparse triplet {idx} malformed") from None
                i, j = int(i), int(j)
                if not (0 <= i < n and 0 <= j < d):
                    raise DatasetFormatError(f"sparse triplet {idx} ({i},{j}) out of range")
                features[i, j] = float(v)
        else:
            raise DatasetFormatError("'features' needs a 'dense' or 'sparse' payload")
        masks = doc["masks"]
        if not isinstance(masks, dict):
            raise DatasetFormatError("'masks' must be an object")
        try:
            return cls(
                edges=doc["edges"],
                features=features,
                labels=doc["labels"],
                train_ids=masks.get("train", ()),
                validation_ids=masks.get("validation", ()),
                test_ids=masks.get("test", ()),
                class_names=doc.get("class_names"),
                feature_names=doc.get("feature_names"),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, (DatasetValidationError, DatasetFormatError)):
                raise
            raise DatasetFormatError(f"malformed dataset document: {exc}") from exc


def load_dataset(path) -> Dataset:
    """Load and validate a dataset file; node ids are contiguous 0..N-1."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"{path}: not valid JSON ({exc})") from exc
    return Dataset.from_document(doc)


def subset_mask(dataset: Dataset, which: str) -> np.ndarray:
    """Node ids for one of the inspectable subsets: all/train/validation/test."""
    if which == "all":
        return np.arange(dataset.node_count, dtype=np.int64)
    if which not in MASK_NAMES:
        raise ValueError(f"unknown subset {which!r} (expected all/train/validation/test)")
    return np.flatnonzero(getattr(dataset, f"{which}_mask")).astype(np.int64)


def synthesize(
    n_per_class: int,
    classes: int,
    intra_edge_prob: float,
    inter_edge_prob: float,
    feature_dim: int,
    feature_noise: float,
    seed: int,
) -> Dataset:
    """Stochastic-block-model fixture with class-correlated binary features.

    Node i belongs to class i // n_per_class.  The single RNG stream is
    ``numpy.random.default_rng(seed)`` consumed in this declared order:

    1. one uniform draw per unordered pair (i, j), i < j, row-major
       (``rng.random(n*(n-1)//2)``); the pair becomes an edge when the draw
       is below the intra/inter probability for the pair,
    2. one uniform draw per (node, dim) entry (``rng.random((n, dim))``);
       entries below ``feature_noise`` flip the class-indicator bit,
    3. one ``rng.permutation(n_per_class)`` per class, in class order, used
       to assign masks: the first ~10% (at least 1) of the shuffled class
       becomes train, the next ~10% validation, the rest test.

    Identical seeds therefore produce bit-identical datasets.
    """
    if classes <= 0 or n_per_class <= 0 or feature_dim <= 0:
        raise ValueError("counts must be positive")
    if not (0.0 <= intra_edge_prob <= 1.0 and 0.0 <= inter_edge_prob <= 1.0):
        raise ValueError("edge probabilities must be in [0,1]")
    if not 0.0 <= feature_noise <= 1.0:
        raise ValueError("feature_noise must be in [0,1]")
    if feature_dim < classes:
        raise ValueError("feature_dim must be at least the class count")

    n = n_per_class * classes
    labels = np.arange(n) // n_per_class
    rng = np.random.default_rng(seed)

    iu, ju = np.triu_indices(n, k=1)
    same = labels[iu] == labels[ju]
    prob = np.where(same, intra_edge_prob, inter_edge_prob)
    keep = rng.random(iu.shape[0]) < prob
    edges = np.stack([iu[keep], ju[keep]], axis=1)

    # Class c owns a contiguous block of feature dims; noise flips bits.
    block = feature_dim // classes
    features = np.zeros((n, feature_dim))
    for c in range(classes):
        lo = c * block
        hi = feature_dim if c == classes - 1 else (c + 1) * block
        features[labels == c, lo:hi] = 1.0
    flips = rng.random((n, feature_dim)) < feature_noise
    features = np.abs(features - flips.astype(np.float64))

    train_ids, val_ids, test_ids = [], [], []
    n_train = max(1, n_per_class // 10)
    n_val = max(1, n_per_class // 10) if n_per_class >= 3 else 0
    for c in range(classes):
        members = np.flatnonzero(labels == c)
        perm = members[rng.permutation(n_per_class)]
        train_ids.extend(perm[:n_train].tolist())
        val_ids.extend(perm[n_train : n_train + n_val].tolist())
        test_ids.extend(perm[n_train + n_val :].tolist())

    return Dataset(
        edges=edges,
        features=features,
        labels=labels,
        train_ids=sorted(train_ids),
        validation_ids=sorted(val_ids),
        test_ids=sorted(test_ids),
    )
