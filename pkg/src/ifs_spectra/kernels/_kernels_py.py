"""Numpy implementation of the hot evaluation kernels.

The compiled Cython module ``_kernels`` mirrors these signatures exactly; the
package selects one of the two at import time (see ``__init__``).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def mask_values(points: np.ndarray, digits: np.ndarray) -> np.ndarray:
    """m(x) = (1/N) sum_b exp(2 pi i b.x) for each row x of ``points``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    digits = np.atleast_2d(np.asarray(digits, dtype=float))
    phases = points @ digits.T
    return np.exp(2j * np.pi * phases).sum(axis=1) / digits.shape[0]


def weight_values(points: np.ndarray, digits: np.ndarray) -> np.ndarray:
    """W(x) = |m(x)|^2 for each row of ``points``."""
    m = mask_values(points, digits)
    return (m * m.conj()).real


def mask_products(
    points: np.ndarray, digits: np.ndarray, s_inv: np.ndarray, depth: int
) -> np.ndarray:
    """Truncated product prod_{k=1..depth} m(S^-k x) per row of ``points``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    s_inv = np.asarray(s_inv, dtype=float)
    acc = np.ones(points.shape[0], dtype=complex)
    z = points
    for _ in range(depth):
        z = z @ s_inv.T
        acc *= mask_values(z, digits)
    return acc
