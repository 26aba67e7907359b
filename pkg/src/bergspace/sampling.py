"""Deterministic samplers shared by certification sweeps.

All randomness flows through counter-based Philox generators keyed by
(seed, stream), so parallel sweeps and repeated runs reproduce the same
sequences.  Each sample point consumes a fixed-width row of uniforms
(sphere directions come from Box-Muller, not rejection), which makes
samples nested: the first k points of an n-point draw equal the k-point
draw, so enlarging a certification sample can only refine its extremes.

Interior samples are drawn uniformly with respect to the hyperbolic
(Bergman) volume so near-boundary behaviour is probed at the density the
metric dictates.
"""

from __future__ import annotations

import math

import numpy as np

from .domains import DomainModel

STREAM_LATTICE_CERT = 1
STREAM_CONSTANTS = 2
STREAM_DOMINATION = 3
STREAM_GEOMETRY = 4
STREAM_SUBMEAN = 5


def make_rng(seed: int, stream: int) -> np.random.Generator:
    key = np.array([seed % 2 ** 64, stream % 2 ** 64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _uniform_rows(seed: int, stream: int, count: int, width: int) -> np.ndarray:
    return make_rng(seed, stream).random((count, width))


def _box_muller(u: np.ndarray) -> np.ndarray:
    """Standard normals from uniform pairs, fixed consumption per value."""
    flat = u.reshape(u.shape[0], -1)
    half = flat.shape[1] // 2
    r = np.sqrt(-2.0 * np.log(np.clip(flat[:, :half], 1e-300, None)))
    ang = 2.0 * math.pi * flat[:, half:]
    return np.concatenate([r * np.cos(ang), r * np.sin(ang)], axis=1)


def _disk_radii(u: np.ndarray, s_max: float) -> np.ndarray:
    # P(sigma <= s) proportional to hyperbolic area 1/(1-s^2) - 1
    x_max = 1.0 / (1.0 - s_max ** 2)
    x = 1.0 + u * (x_max - 1.0)
    return np.sqrt(1.0 - 1.0 / x)


def _ball_radial_cdf(s_max: float, n: int):
    grid = np.linspace(0.0, s_max, 4096)
    density = grid ** (2 * n - 1) / (1.0 - grid ** 2) ** (n + 1)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * np.diff(grid))])
    return grid, cdf / cdf[-1]


def sample_interior(
    domain: DomainModel, count: int, seed: int, stream: int, margin: float = 1e-3
) -> np.ndarray:
    """Hyperbolic-volume-uniform sample of {boundary_distance >= margin}."""
    n = domain.dim
    s_max = 1.0 - margin
    if domain.kind == "ball":
        rows = _uniform_rows(seed, stream, count, 2 * n + 1)
        direc = _box_muller(rows[:, : 2 * n]).view(complex)
        direc /= np.linalg.norm(direc, axis=1, keepdims=True)
        grid, cdf = _ball_radial_cdf(s_max, n)
        radii = np.interp(rows[:, 2 * n], cdf, grid)
        return radii[:, None] * direc
    rows = _uniform_rows(seed, stream, count, 2 * n)
    radii = _disk_radii(rows[:, :n], s_max)
    angles = rows[:, n:] * 2.0 * math.pi
    return radii * np.exp(1j * angles)


def sample_euclidean_interior(
    domain: DomainModel, count: int, seed: int, stream: int, margin: float = 1e-3
) -> np.ndarray:
    """Lebesgue-uniform interior sample (rejection-free, per-coordinate)."""
    n = domain.dim
    s_max = 1.0 - margin
    if domain.kind == "ball":
        rows = _uniform_rows(seed, stream, count, 2 * n + 1)
        direc = _box_muller(rows[:, : 2 * n]).view(complex)
        direc /= np.linalg.norm(direc, axis=1, keepdims=True)
        radii = s_max * rows[:, 2 * n] ** (1.0 / (2 * n))
        return radii[:, None] * direc
    rows = _uniform_rows(seed, stream, count, 2 * n)
    radii = s_max * np.sqrt(rows[:, :n])
    angles = rows[:, n:] * 2.0 * math.pi
    return radii * np.exp(1j * angles)
