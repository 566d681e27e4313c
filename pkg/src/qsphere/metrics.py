"""Ranking metrics."""

from __future__ import annotations

import numpy as np

from .errors import DataError


def auc(scores_normal: np.ndarray, scores_anomalous: np.ndarray) -> float:
    """Mann-Whitney AUC: fraction of (normal, anomalous) pairs where the
    anomalous score is larger, ties counted as half."""
    normal = np.asarray(scores_normal, dtype=float)
    anomalous = np.asarray(scores_anomalous, dtype=float)
    if normal.size == 0 or anomalous.size == 0:
        raise DataError("both score lists must be non-empty")
    combined = np.concatenate([normal, anomalous])
    order = np.argsort(combined, kind="mergesort")
    ranks = np.empty(combined.size, dtype=float)
    ranks[order] = np.arange(1, combined.size + 1)
    # midranks for ties
    sorted_vals = combined[order]
    i = 0
    while i < sorted_vals.size:
        j = i
        while j + 1 < sorted_vals.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        if j > i:
            ranks[order[i : j + 1]] = 0.5 * (i + 1 + j + 1)
        i = j + 1
    rank_sum = ranks[normal.size :].sum()
    m = anomalous.size
    u = rank_sum - m * (m + 1) / 2.0
    return float(u / (normal.size * m))
