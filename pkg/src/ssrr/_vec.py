"""Small 2-vector helpers shared across modules."""

import numpy as np


def vec2(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (2,):
        raise ValueError(f"expected a 2-vector, got shape {v.shape}")
    return v


def unit(v) -> np.ndarray:
    v = vec2(v)
    n = float(np.hypot(v[0], v[1]))
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def perp(v) -> np.ndarray:
    """90 degrees counterclockwise."""
    v = vec2(v)
    return np.array([-v[1], v[0]])


def rotate(v, angle: float) -> np.ndarray:
    v = vec2(v)
    c, s = np.cos(angle), np.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def signed_angle(a, b) -> float:
    """Counterclockwise angle from a to b, in (-pi, pi]."""
    a = vec2(a)
    b = vec2(b)
    return float(np.arctan2(cross2(a, b), float(np.dot(a, b))))
