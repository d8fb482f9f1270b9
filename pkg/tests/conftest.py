"""Shared fixtures.

``six_node_doc`` is the canonical hand-built test graph used throughout the
suite: a triangle 0-1-2 bridged through 2-3 to a star 3-{4,5}, two classes,
training nodes {0, 4}.  Every expected value in the fixture-driven tests was
computed by hand from this document, so tests cross-check the library against
an independent description rather than against itself.
"""

import json

import numpy as np
import pytest

from gnnscope.graph_store import Dataset


SIX_NODE_DOC = {
    "format": "gnnscope-dataset/1",
    "nodes": 6,
    "edges": [[0, 1], [0, 2], [1, 2], [2, 3], [3, 4], [3, 5]],
    "features": {
        "dim": 2,
        "dense": [
            [1.0, 0.0],
            [0.9, 0.1],
            [0.8, 0.0],
            [0.1, 0.9],
            [0.0, 1.0],
            [0.7, 0.3],
        ],
    },
    "labels": [0, 0, 0, 1, 1, 0],
    "masks": {"train": [0, 4], "validation": [1], "test": [2, 3, 5]},
    "class_names": ["A", "B"],
    "feature_names": ["f0", "f1"],
}


@pytest.fixture
def six_node_doc():
    return json.loads(json.dumps(SIX_NODE_DOC))


@pytest.fixture
def six_node_path(tmp_path, six_node_doc):
    path = tmp_path / "six.json"
    path.write_text(json.dumps(six_node_doc))
    return path


@pytest.fixture
def six_node(six_node_doc) -> Dataset:
    return Dataset.from_document(six_node_doc)


def make_predictions(labels, wrong_at=()):
    """Prediction vector equal to the labels except at the listed nodes,
    where the class id is advanced by one (mod class count)."""
    labels = np.asarray(labels)
    preds = labels.copy()
    c = int(labels.max()) + 1
    for i in wrong_at:
        preds[i] = (preds[i] + 1) % c
    return preds
