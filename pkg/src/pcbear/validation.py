"""Input validation helpers shared by the estimators and IO layers."""

from __future__ import annotations

import numpy as np

from .errors import CorruptTensorError, ShapeMismatchError


def as_float_array(x, name: str = "array", ndim: int | None = None) -> np.ndarray:
    """Coerce to a C-contiguous float64 array and check dimensionality."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise ShapeMismatchError(f"{name}: expected {ndim}D array, got shape {arr.shape}")
    return arr


def check_finite(arr: np.ndarray, name: str = "array") -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise CorruptTensorError(f"{name} contains NaN or Inf entries")
    return arr


def check_matrix(x, name: str = "X", n_cols: int | None = None) -> np.ndarray:
    """Validate a 2D finite float matrix, optionally with a fixed column count."""
    arr = as_float_array(x, name=name, ndim=2)
    check_finite(arr, name=name)
    if n_cols is not None and arr.shape[1] != n_cols:
        raise ShapeMismatchError(f"{name}: expected {n_cols} columns, got {arr.shape[1]}")
    return arr


def check_vector(x, name: str = "x", length: int | None = None) -> np.ndarray:
    arr = as_float_array(x, name=name, ndim=1)
    check_finite(arr, name=name)
    if length is not None and arr.shape[0] != length:
        raise ShapeMismatchError(f"{name}: expected length {length}, got {arr.shape[0]}")
    return arr


def check_keypoints(x, name: str = "keypoints") -> np.ndarray:
    """Validate an L x J x 2 keypoint tensor."""
    arr = as_float_array(x, name=name, ndim=3)
    if arr.shape[2] != 2:
        raise ShapeMismatchError(f"{name}: last axis must have size 2, got {arr.shape[2]}")
    check_finite(arr, name=name)
    return arr


def check_labels(y, num_classes: int, name: str = "y") -> np.ndarray:
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ShapeMismatchError(f"{name}: expected 1D label array, got shape {arr.shape}")
    arr = arr.astype(np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= num_classes):
        raise ShapeMismatchError(f"{name}: labels must lie in [0, {num_classes})")
    return arr
