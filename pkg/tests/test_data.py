"""IDX parsing and one-class split construction tests, driven by synthetic
byte-level fixtures."""

import struct

import numpy as np
import pytest

from conftest import write_idx_images, write_idx_labels
from qsphere.data import build_split, load_idx_images, load_idx_labels
from qsphere.errors import DataError


def test_image_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    raw = rng.integers(0, 256, size=(7, 5, 4), dtype=np.uint8)
    path = tmp_path / "imgs"
    write_idx_images(path, raw)
    images = load_idx_images(path)
    assert images.shape == (7, 5, 4)
    np.testing.assert_allclose(images, raw / 255.0, atol=1e-12)
    assert images.min() >= 0.0 and images.max() <= 1.0


def test_label_round_trip(tmp_path):
    raw = np.array([0, 3, 9, 1, 1], dtype=np.uint8)
    path = tmp_path / "labels"
    write_idx_labels(path, raw)
    np.testing.assert_array_equal(load_idx_labels(path), raw)


def test_bad_image_magic_reports_offset(tmp_path):
    path = tmp_path / "bad"
    path.write_bytes(struct.pack(">IIII", 0xDEADBEEF, 1, 2, 2) + b"\x00" * 4)
    with pytest.raises(DataError, match="magic.*offset 0"):
        load_idx_images(path)


def test_label_magic_rejected_for_images(tmp_path):
    path = tmp_path / "mislabeled"
    path.write_bytes(struct.pack(">IIII", 0x00000801, 1, 2, 2) + b"\x00" * 4)
    with pytest.raises(DataError, match="magic"):
        load_idx_images(path)


def test_truncated_image_payload_reports_offset(tmp_path):
    path = tmp_path / "short"
    path.write_bytes(struct.pack(">IIII", 0x00000803, 2, 3, 3) + b"\x00" * 10)
    with pytest.raises(DataError, match="offset 16"):
        load_idx_images(path)


def test_truncated_header(tmp_path):
    path = tmp_path / "tiny"
    path.write_bytes(b"\x00\x00")
    with pytest.raises(DataError, match="truncated"):
        load_idx_images(path)


def test_label_out_of_range(tmp_path):
    path = tmp_path / "labels"
    path.write_bytes(struct.pack(">II", 0x00000801, 2) + bytes([3, 12]))
    with pytest.raises(DataError, match="out of range"):
        load_idx_labels(path)


# -- split construction -----------------------------------------------------


def pools(seed=0, n_train=200, n_test=150):
    rng = np.random.default_rng(seed)
    train_images = rng.uniform(size=(n_train, 4, 4))
    train_labels = rng.integers(0, 10, size=n_train)
    test_images = rng.uniform(size=(n_test, 4, 4))
    test_labels = rng.integers(0, 10, size=n_test)
    return train_images, train_labels, test_images, test_labels


def test_split_membership_and_sizes():
    train_images, train_labels, test_images, test_labels = pools()
    split = build_split(
        train_images, train_labels, test_images, test_labels,
        normal_class=3, train_size=10, test_normal_size=8,
        test_anomalous_size=12, seed=5,
    )
    assert split.train.shape == (10, 16)
    assert split.test_normal.shape == (8, 16)
    assert split.test_anomalous.shape == (12, 16)
    assert np.all(split.test_anomalous_classes != 3)
    assert split.normal_class == 3
    # training rows really come from class-3 training images
    class3 = train_images[train_labels == 3].reshape(-1, 16)
    for row in split.train:
        assert any(np.allclose(row, candidate) for candidate in class3)


def test_split_is_deterministic_per_seed():
    args = pools(seed=1)
    kwargs = dict(normal_class=2, train_size=12, test_normal_size=6,
                  test_anomalous_size=9)
    a = build_split(*args, **kwargs, seed=3)
    b = build_split(*args, **kwargs, seed=3)
    np.testing.assert_array_equal(a.train, b.train)
    np.testing.assert_array_equal(a.test_normal, b.test_normal)
    np.testing.assert_array_equal(a.test_anomalous, b.test_anomalous)
    c = build_split(*args, **kwargs, seed=4)
    assert not np.array_equal(a.train, c.train)


def test_split_featurize_hook():
    args = pools(seed=2)
    split = build_split(
        *args, normal_class=0, train_size=5, test_normal_size=5,
        test_anomalous_size=5, seed=0,
        featurize=lambda imgs: imgs.mean(axis=(1, 2), keepdims=False)[:, None],
    )
    assert split.train.shape == (5, 1)


def test_split_insufficient_samples():
    train_images, train_labels, test_images, test_labels = pools(n_train=30, n_test=30)
    with pytest.raises(DataError, match="training samples"):
        build_split(train_images, train_labels, test_images, test_labels,
                    normal_class=0, train_size=29, test_normal_size=1,
                    test_anomalous_size=1, seed=0)
    with pytest.raises(DataError, match="test samples"):
        build_split(train_images, train_labels, test_images, test_labels,
                    normal_class=0, train_size=1, test_normal_size=29,
                    test_anomalous_size=1, seed=0)
    with pytest.raises(DataError, match="anomalous"):
        build_split(train_images, train_labels, test_images, test_labels,
                    normal_class=0, train_size=1, test_normal_size=1,
                    test_anomalous_size=31, seed=0)
