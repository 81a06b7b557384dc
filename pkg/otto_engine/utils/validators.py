"""
Validation Utilities
====================
Validation helpers for the numerical inputs of the engine models.
Each helper returns ``(is_valid, error_message)`` so models and the
validate command can decide whether a failure is fatal.
"""

import math
from typing import Iterable, Tuple

import numpy as np


def validate_finite(values: Iterable[float], name: str = "values") -> Tuple[bool, str]:
    """
    Check that every value is a finite real number.

    Args:
        values: Numbers to check
        name: Label used in the error message

    Returns:
        Tuple of (is_valid, error_message)
    """
    array = np.asarray(list(values), dtype=float)
    if array.size == 0:
        return False, f"{name} must not be empty"
    if not np.all(np.isfinite(array)):
        return False, f"{name} must be finite"
    return True, ""


def validate_positive(value: float, name: str) -> Tuple[bool, str]:
    """
    Check that a scalar is finite and strictly positive.

    Args:
        value: Number to check
        name: Label used in the error message

    Returns:
        Tuple of (is_valid, error_message)
    """
    if value is None or not math.isfinite(value):
        return False, f"{name} must be finite"
    if value <= 0:
        return False, f"{name} must be positive, got {value}"
    return True, ""


def validate_square(matrix: np.ndarray, name: str = "matrix") -> Tuple[bool, str]:
    """Check that a matrix is two-dimensional, square and finite."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False, f"{name} must be square, got shape {matrix.shape}"
    if not np.all(np.isfinite(matrix)):
        return False, f"{name} must be finite"
    return True, ""


def unitarity_residual(matrix: np.ndarray) -> float:
    """Return max |U†U - I| entrywise."""
    identity = np.eye(matrix.shape[0])
    return float(np.max(np.abs(matrix.conj().T @ matrix - identity)))


def validate_unitary(matrix: np.ndarray, tol: float = 1e-10) -> Tuple[bool, str]:
    """
    Check that a matrix is unitary within an entrywise tolerance.

    Args:
        matrix: Complex square matrix
        tol: Allowed max |U†U - I|

    Returns:
        Tuple of (is_valid, error_message)
    """
    is_valid, error = validate_square(matrix, "unitary")
    if not is_valid:
        return False, error

    residual = unitarity_residual(matrix)
    if residual > tol:
        return False, f"matrix is not unitary: max|U†U - I| = {residual:.3e} > {tol:.1e}"
    return True, ""


def hermiticity_residual(matrices: np.ndarray) -> float:
    """Return max |H - H†| over a single matrix or a stack of matrices."""
    return float(np.max(np.abs(matrices - np.conj(np.swapaxes(matrices, -1, -2)))))


def validate_grid(values: Iterable[float], name: str = "grid") -> Tuple[bool, str]:
    """
    Check that a sweep grid is nonempty, finite and ascending.

    Args:
        values: Grid points
        name: Label used in the error message

    Returns:
        Tuple of (is_valid, error_message)
    """
    array = np.asarray(list(values), dtype=float)
    is_valid, error = validate_finite(array, name)
    if not is_valid:
        return False, error
    if array.size > 1 and np.any(np.diff(array) <= 0):
        return False, f"{name} must be strictly increasing"
    return True, ""
