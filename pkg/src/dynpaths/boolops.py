"""Boolean tensor algebra on top of numpy.

Relations are stored as dense ``bool`` arrays.  Joins with existential
projection become sums of products over ``float32`` copies, thresholded
back to booleans; counts stay far below 2**24 for the domain sizes this
package targets, so the float path is exact.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import fftconvolve


def bmm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean matrix product ``(a @ b) > 0``."""
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0.5


def bjoin(spec: str, *operands: np.ndarray) -> np.ndarray:
    """Existentially projected conjunction, written as an einsum subscript."""
    ops = [op.astype(np.float32, copy=False) for op in operands]
    return np.einsum(spec, *ops, optimize="greedy") > 0.5


def bconv(a: np.ndarray, b: np.ndarray, axes: tuple[int, ...], shape: tuple[int, ...]) -> np.ndarray:
    """Boolean sumset along ``axes``: out[i] = OR_{j+k=i} a[j] & b[k].

    Non-convolved axes broadcast.  The result is truncated to ``shape`` on
    the convolved axes (lower corner).
    """
    if not a.any() or not b.any():
        out_shape = list(np.broadcast_shapes(
            tuple(1 if i in axes else s for i, s in enumerate(a.shape)),
            tuple(1 if i in axes else s for i, s in enumerate(b.shape)),
        ))
        for ax, s in zip(axes, shape):
            out_shape[ax] = s
        return np.zeros(out_shape, dtype=bool)
    # single precision is exact enough: entries count at most a few thousand terms
    full = fftconvolve(a.astype(np.float32), b.astype(np.float32), axes=axes)
    index = [slice(None)] * full.ndim
    for ax, s in zip(axes, shape):
        index[ax] = slice(0, s)
    return full[tuple(index)] > 0.5


def shift(a: np.ndarray, axis: int, by: int) -> np.ndarray:
    """Shift ``a`` towards higher indices along ``axis``, dropping overflow."""
    if by == 0:
        return a.copy()
    out = np.zeros_like(a)
    n = a.shape[axis]
    if by >= n:
        return out
    src = [slice(None)] * a.ndim
    dst = [slice(None)] * a.ndim
    src[axis] = slice(0, n - by)
    dst[axis] = slice(by, n)
    out[tuple(dst)] = a[tuple(src)]
    return out
