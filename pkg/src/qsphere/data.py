"""IDX dataset ingestion and one-class split construction."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DataError

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801


def _read_exact(f, count: int, offset: int) -> bytes:
    data = f.read(count)
    if len(data) != count:
        raise DataError(
            f"truncated IDX file: expected {count} bytes at offset {offset}, got {len(data)}"
        )
    return data


def load_idx_images(path: str | Path) -> np.ndarray:
    """Big-endian IDX image file -> (N, rows, cols) float array in [0, 1]."""
    with open(path, "rb") as f:
        magic, n, rows, cols = struct.unpack(">IIII", _read_exact(f, 16, 0))
        if magic != IMAGE_MAGIC:
            raise DataError(
                f"bad image magic 0x{magic:08x} at offset 0 (expected 0x{IMAGE_MAGIC:08x})"
            )
        payload = _read_exact(f, n * rows * cols, 16)
    images = np.frombuffer(payload, dtype=np.uint8).reshape(n, rows, cols)
    return images.astype(float) / 255.0


def load_idx_labels(path: str | Path) -> np.ndarray:
    """Big-endian IDX label file -> (N,) int array with labels in {0..9}."""
    with open(path, "rb") as f:
        magic, n = struct.unpack(">II", _read_exact(f, 8, 0))
        if magic != LABEL_MAGIC:
            raise DataError(
                f"bad label magic 0x{magic:08x} at offset 0 (expected 0x{LABEL_MAGIC:08x})"
            )
        payload = _read_exact(f, n, 8)
    labels = np.frombuffer(payload, dtype=np.uint8).astype(int)
    if labels.size and labels.max() > 9:
        raise DataError(f"label {labels.max()} out of range {{0..9}}")
    return labels


@dataclass
class DatasetSplit:
    """One-class split: class-M training pool, labelled test pools."""

    normal_class: int
    train: np.ndarray
    test_normal: np.ndarray
    test_anomalous: np.ndarray
    test_anomalous_classes: np.ndarray
    seed: int


def build_split(
    train_images: np.ndarray,
    train_labels: np.ndarray,
    test_images: np.ndarray,
    test_labels: np.ndarray,
    normal_class: int,
    train_size: int,
    test_normal_size: int,
    test_anomalous_size: int,
    seed: int,
    featurize: Callable[[np.ndarray], np.ndarray] | None = None,
) -> DatasetSplit:
    """Seeded one-class split.  Training samples come from the normal class
    of the training pool; test normals from the normal class of the test
    pool; test anomalies uniformly from the other classes of the test pool.
    `featurize` maps raw image stacks to feature rows (identity if None)."""
    rng = np.random.default_rng(seed)
    train_pool = np.flatnonzero(train_labels == normal_class)
    normal_pool = np.flatnonzero(test_labels == normal_class)
    anomaly_pool = np.flatnonzero(test_labels != normal_class)
    if train_pool.size < train_size:
        raise DataError(
            f"only {train_pool.size} class-{normal_class} training samples, need {train_size}"
        )
    if normal_pool.size < test_normal_size:
        raise DataError(
            f"only {normal_pool.size} class-{normal_class} test samples, need {test_normal_size}"
        )
    if anomaly_pool.size < test_anomalous_size:
        raise DataError(
            f"only {anomaly_pool.size} anomalous test samples, need {test_anomalous_size}"
        )
    train_idx = rng.permutation(train_pool)[:train_size]
    normal_idx = rng.permutation(normal_pool)[:test_normal_size]
    anomaly_idx = rng.permutation(anomaly_pool)[:test_anomalous_size]
    if featurize is None:
        featurize = lambda imgs: imgs.reshape(imgs.shape[0], -1)
    return DatasetSplit(
        normal_class=normal_class,
        train=featurize(train_images[train_idx]),
        test_normal=featurize(test_images[normal_idx]),
        test_anomalous=featurize(test_images[anomaly_idx]),
        test_anomalous_classes=test_labels[anomaly_idx].copy(),
        seed=seed,
    )
