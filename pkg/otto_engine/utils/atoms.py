"""
Atom Grouping
=============
Deterministic merging of point masses whose locations agree within a
tolerance. Used by every distribution-building operation so degenerate
level combinations collapse to a single atom.
"""

from typing import Tuple

import numpy as np


def merge_atoms(points: np.ndarray, probs: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Merge atoms whose coordinates agree within ``tol`` in max-norm.

    Atoms are visited in lexicographic order of their coordinates; each atom
    joins the first existing cluster whose representative (the first member)
    lies within ``tol``, otherwise it opens a new cluster. Zero-mass atoms are
    dropped.

    Args:
        points: Array of shape (N,) or (N, k) with finite coordinates
        probs: Array of shape (N,) with nonnegative masses
        tol: Absolute grouping tolerance

    Returns:
        Tuple of (merged points, merged probabilities), lexicographically sorted
    """
    points = np.asarray(points, dtype=float)
    probs = np.asarray(probs, dtype=float)
    squeeze = points.ndim == 1
    if squeeze:
        points = points[:, None]

    keep = probs > 0.0
    points, probs = points[keep], probs[keep]
    if points.shape[0] == 0:
        empty = np.empty((0,) if squeeze else (0, points.shape[1]))
        return empty, np.empty(0)

    # lexsort treats the last key as primary
    order = np.lexsort(points.T[::-1])
    rows = points.tolist()
    weights = probs.tolist()
    representatives: list = []
    masses: list = []
    for index in order:
        point = rows[index]
        for cluster, representative in enumerate(representatives):
            if all(abs(a - b) <= tol for a, b in zip(point, representative)):
                masses[cluster] += weights[index]
                break
        else:
            representatives.append(point)
            masses.append(weights[index])

    merged_points = np.array(representatives)
    merged_probs = np.array(masses)
    if squeeze:
        merged_points = merged_points[:, 0]
    return merged_points, merged_probs
