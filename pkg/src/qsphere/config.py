"""Flat key-value run configuration with dotted section keys.

Format: one `key = value` pair per line, `#` starts a comment, blank lines
ignored.  The canonical serialization (sorted keys) is hashed into every
output file for provenance.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

from .errors import ConfigurationError

# key -> (type, default); None default means required when accessed
SCHEMA: dict[str, tuple[type, object]] = {
    "data.train_images": (str, None),
    "data.train_labels": (str, None),
    "data.test_images": (str, None),
    "data.test_labels": (str, None),
    "data.normal_class": (int, 0),
    "data.train_size": (int, 100),
    "data.test_normal_size": (int, 100),
    "data.test_anomalous_size": (int, 100),
    "data.feature_mode": (str, "pool16"),  # pool16 | pool4 | flat
    "ansatz.family": (str, "DC"),
    "ansatz.num_qubits": (int, 4),
    "ansatz.depth": (int, 4),
    "encoding.mode": (str, "amplitude"),
    "model.objective": (str, "simplified"),
    "model.alpha": (float, 1e-4),
    "model.nu": (float, 0.1),
    "model.threshold": (float, 0.0),
    "model.center_mode": (str, "frozen"),
    "model.shots": (int, 0),
    "optimizer.kind": (str, "adam"),
    "optimizer.lr": (float, 1e-2),
    "optimizer.epochs": (int, 300),
    "optimizer.pretrain_epochs": (int, -1),  # -1: same as epochs
    "optimizer.batch_size": (int, 50),
    "noise.p": (float, 0.0),
    "baseline.hidden_dims": (str, ""),
    "baseline.output_dim": (int, 4),
    "run.seed": (int, 1),
}


class RunConfig:
    def __init__(self, values: dict[str, object]):
        self.values = dict(values)

    @classmethod
    def parse(cls, text: str) -> "RunConfig":
        values: dict[str, object] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"line {lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in SCHEMA:
                raise ConfigurationError(f"unknown config key {key!r}")
            kind, _ = SCHEMA[key]
            try:
                values[key] = kind(value)
            except ValueError as exc:
                raise ConfigurationError(
                    f"bad value for {key!r}: {value!r} ({exc})"
                ) from exc
        return cls(values)

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.parse(Path(path).read_text())

    def get(self, key: str):
        if key not in SCHEMA:
            raise ConfigurationError(f"unknown config key {key!r}")
        if key in self.values:
            return self.values[key]
        _, default = SCHEMA[key]
        if default is None:
            raise ConfigurationError(f"missing required config key {key!r}")
        return default

    def set(self, key: str, value) -> None:
        if key not in SCHEMA:
            raise ConfigurationError(f"unknown config key {key!r}")
        self.values[key] = SCHEMA[key][0](value)

    def canonical(self) -> str:
        lines = []
        for key in sorted(SCHEMA):
            if key in self.values:
                lines.append(f"{key} = {self.values[key]}")
        return "\n".join(lines) + "\n"

    def hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]
