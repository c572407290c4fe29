"""Greedy min-max landmark selection from navigator columns.

Farthest-point style: seed with the maximal-norm column, then repeatedly
take the unselected column whose minimum distance to the selected set is
largest.  Ties resolve to the lowest column index, distances are plain
Euclidean on the complex columns (no normalization).  Cost is
O(n_landmarks * n_columns) distance evaluations via the running
min-distance array.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["LandmarkSet", "select_landmarks"]


@dataclass
class LandmarkSet:
    lambda_mat: np.ndarray  # (rows, n_landmarks), columns in selection order
    indices: tuple  # source column indices, selection order


def select_landmarks(y_nav: np.ndarray, n_landmarks: int) -> LandmarkSet:
    y_nav = np.asarray(y_nav)
    if y_nav.ndim != 2 or y_nav.shape[1] == 0:
        raise ValueError("expected a nonempty (rows, columns) navigator matrix")
    n_cols = y_nav.shape[1]
    if not 1 <= n_landmarks <= n_cols:
        raise ValueError(
            f"n_landmarks={n_landmarks} must lie in [1, {n_cols}]"
        )

    norms = np.linalg.norm(y_nav, axis=0)
    first = int(np.argmax(norms))  # np.argmax returns the lowest tied index
    chosen = [first]
    min_dist = np.linalg.norm(y_nav - y_nav[:, [first]], axis=0)
    min_dist[first] = -np.inf

    while len(chosen) < n_landmarks:
        nxt = int(np.argmax(min_dist))
        chosen.append(nxt)
        dist = np.linalg.norm(y_nav - y_nav[:, [nxt]], axis=0)
        min_dist = np.minimum(min_dist, dist)
        min_dist[nxt] = -np.inf

    indices = tuple(chosen)
    return LandmarkSet(lambda_mat=y_nav[:, list(indices)].copy(), indices=indices)
