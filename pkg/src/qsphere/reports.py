"""Score CSVs, run reports, and model checkpoints."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .detector import Hypersphere, QuantumSphereDetector
from .errors import DataError

CHECKPOINT_VERSION = 1


def write_scores(
    path: str | Path,
    scores: np.ndarray,
    true_labels: np.ndarray,
    source_classes: np.ndarray,
    threshold: float = 0.0,
) -> None:
    """CSV with (sample_id, true_label, source_class, score, classified).
    Floats use repr precision so a re-read reproduces the AUC bit-exactly."""
    scores = np.asarray(scores, dtype=float)
    if scores.size == 0:
        raise DataError("refusing to write an empty score file")
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["sample_id", "true_label", "source_class", "score", "classified"])
        for i, (label, cls, s) in enumerate(zip(true_labels, source_classes, scores)):
            verdict = "ANOMALOUS" if s >= threshold else "NORMAL"
            writer.writerow([i, int(label), int(cls), repr(float(s)), verdict])


def read_scores(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Returns (scores, true_labels) from a score CSV."""
    scores, labels = [], []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            scores.append(float(row["score"]))
            labels.append(int(row["true_label"]))
    return np.array(scores), np.array(labels)


def write_report(path: str | Path, report: dict) -> None:
    Path(path).write_text(json.dumps(report, indent=2, default=_jsonify) + "\n")


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer, np.floating)):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj)}")


def save_checkpoint(path: str | Path, model: QuantumSphereDetector,
                    config_hash: str = "") -> None:
    """Self-describing JSON checkpoint; round-trips the model losslessly
    (floats survive exactly through JSON's double encoding)."""
    payload = {
        "version": CHECKPOINT_VERSION,
        "config_hash": config_hash,
        "params": model.get_params(),
        "theta": model.theta_.tolist(),
        "center": model.sphere_.center.tolist(),
        "radius": model.sphere_.radius,
        "threshold": model.sphere_.threshold,
        "n_features_in": model.n_features_in_,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_checkpoint(path: str | Path) -> QuantumSphereDetector:
    payload = json.loads(Path(path).read_text())
    if payload.get("version") != CHECKPOINT_VERSION:
        raise DataError(f"unsupported checkpoint version {payload.get('version')}")
    params = payload["params"]
    params["pretrain_epochs"] = params.get("pretrain_epochs")
    model = QuantumSphereDetector(**params)
    from . import ansatz as ansatz_mod  # local import avoids cycle at module load

    model.circuit_ = ansatz_mod.build_ansatz(model._spec())
    model.theta_ = np.array(payload["theta"], dtype=float)
    model.sphere_ = Hypersphere(
        center=np.array(payload["center"], dtype=float),
        radius=payload["radius"],
        threshold=payload["threshold"],
    )
    model.n_features_in_ = payload["n_features_in"]
    model.loss_history_ = []
    model.pretrain_loss_history_ = []
    return model
