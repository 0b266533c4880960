"""Deterministic maximization of functions over spheres centred at 0."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
MAX_POLISH_ITERATIONS = 2000


def fibonacci_angles(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Polar and azimuthal angles of an ``n``-point Fibonacci lattice."""
    k = np.arange(n) + 0.5
    theta = np.arccos(1.0 - 2.0 * k / n)
    phi = np.mod(GOLDEN_ANGLE * k + math.pi, 2.0 * math.pi) - math.pi
    return theta, phi


def sphere_points(theta, phi, radius: float = 1.0) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    s = np.sin(theta)
    return radius * np.stack([np.cos(theta), s * np.cos(phi), s * np.sin(phi)], axis=-1)


def fibonacci_sphere(n: int, radius: float = 1.0) -> np.ndarray:
    return sphere_points(*fibonacci_angles(n), radius=radius)


@dataclass(frozen=True)
class SphereMax:
    value: float
    point: np.ndarray
    n_samples: int
    radius: float


def sphere_max(
    fun: Callable[[np.ndarray], np.ndarray],
    radius: float,
    n_samples: int,
    n_polish: int = 3,
    polish: bool = True,
) -> SphereMax:
    """Maximum of ``fun`` over the sphere ``|x| = radius``.

    ``fun`` maps points ``(k, 3)`` to values ``(k,)``. The ``n_polish`` best
    lattice points are refined by a compass search in ``(theta, phi)`` whose
    step starts at the lattice spacing and halves until ``1e-10``. Every
    reported value is an actual function value, so the result never exceeds
    the true maximum.
    """
    if radius == 0.0:
        origin = np.zeros((1, 3))
        return SphereMax(float(fun(origin)[0]), origin[0], n_samples, radius)
    theta, phi = fibonacci_angles(n_samples)
    values = np.asarray(fun(sphere_points(theta, phi, radius)), dtype=float)
    top = np.argsort(values, kind="stable")[::-1][: max(1, n_polish) if polish else 1]
    ang = np.stack([theta[top], phi[top]], axis=-1)  # (k, 2)
    val = values[top].copy()

    if polish:
        step = math.sqrt(4.0 * math.pi / n_samples)
        moves = np.array([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
        for _ in range(MAX_POLISH_ITERATIONS):
            if step <= 1e-10:
                break
            trial = ang[:, None, :] + step * moves[None, :, :]  # (k, 8, 2)
            tv = np.asarray(fun(sphere_points(trial[..., 0], trial[..., 1], radius).reshape(-1, 3)), dtype=float)
            tv = tv.reshape(trial.shape[:2])
            j = np.argmax(tv, axis=1)
            best = tv[np.arange(len(ang)), j]
            improved = best > val
            ang[improved] = trial[np.arange(len(ang)), j][improved]
            val[improved] = best[improved]
            if not improved.any():
                step *= 0.5

    k = int(np.argmax(val))
    return SphereMax(float(val[k]), sphere_points(ang[k, 0], ang[k, 1], radius), n_samples, radius)
