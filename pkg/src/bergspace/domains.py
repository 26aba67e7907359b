"""Closed-form Bergman geometry of the model domains.

Three domains are supported: the unit disk, the unit ball in C^n and the
polydisk D^n.  All of them are minimal domains with center 0, which means
the Bergman kernel against the center is the constant 1/Vol.  This module
provides the kernel, the normalized kernel, the Bergman metric/distance,
metric balls, the center-moving automorphisms with their complex Jacobian
determinants, and boundary distance.

Conventions
-----------
* The Bergman metric is the complex Hessian of log K, so the disk line
  element is sqrt(2)|dz|/(1-|z|^2) and the induced distance on the disk is
  beta(z, w) = sqrt(2) * artanh(|z - w| / |1 - conj(z) w|).
* Points are coordinate vectors of length n (complex).  Every public
  function also accepts a bare complex number for one-dimensional domains,
  and broadcasts over leading axes of an (..., n) array.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "DomainMembershipError",
    "QuadratureRefinementWarning",
    "Point",
    "DomainModel",
    "AutomorphismChart",
    "unit_disk",
    "unit_ball",
    "polydisk",
    "domain_from_name",
    "bergman_kernel",
    "kernel_diagonal",
    "normalized_kernel",
    "bergman_distance",
    "pseudohyperbolic_distance",
    "metric_ball_pseudo_radius",
    "disk_metric_ball",
    "disk_metric_ball_volume",
    "metric_ball_volume",
    "automorphism",
    "verify_jacobian_identity",
    "boundary_distance",
    "contains",
    "require_interior",
]


class DomainMembershipError(ValueError):
    """A point lies outside (or on the boundary of) the domain."""


class QuadratureRefinementWarning(UserWarning):
    """Two refinement levels of a quadrature disagreed beyond tolerance."""


@dataclass(frozen=True)
class Point:
    """A point of a model domain, stored as a tuple of complex coordinates."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))

    def __len__(self):
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=complex)


@dataclass(frozen=True)
class DomainModel:
    """One of the model domains: disk, ball(n) or polydisk(n).

    ``kind`` is "disk", "ball" or "polydisk"; ``dim`` is the complex
    dimension n.  The center is always the origin and ``volume`` is the
    Lebesgue volume of the domain in R^{2n}.
    """

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in ("disk", "ball", "polydisk"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dimension must be a positive integer")
        if self.kind == "disk" and self.dim != 1:
            raise ValueError("the unit disk has dimension 1")

    @property
    def volume(self) -> float:
        if self.kind == "ball":
            return math.pi ** self.dim / math.factorial(self.dim)
        return math.pi ** self.dim

    @property
    def center(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=complex)

    # Distance normalization along a radial direction: beta(0, s*e) equals
    # metric_scale * artanh(s) for disk and ball; the polydisk uses the
    # per-factor disk scale sqrt(2).
    @property
    def metric_scale(self) -> float:
        if self.kind == "ball":
            return math.sqrt(self.dim + 1)
        return math.sqrt(2.0)

    def label(self) -> str:
        if self.kind == "disk":
            return "disk"
        return f"{self.kind}{self.dim}"


def unit_disk() -> DomainModel:
    return DomainModel("disk", 1)


def unit_ball(n: int) -> DomainModel:
    return DomainModel("ball", n)


def polydisk(n: int) -> DomainModel:
    return DomainModel("polydisk", n)


def domain_from_name(name: str) -> DomainModel:
    """Parse a domain label such as "disk", "ball2", "bidisk", "polydisk3"."""
    name = name.strip().lower()
    if name == "disk":
        return unit_disk()
    if name == "bidisk":
        return polydisk(2)
    for prefix, factory in (("ball", unit_ball), ("polydisk", polydisk)):
        if name.startswith(prefix):
            tail = name[len(prefix):]
            if tail.isdigit() and int(tail) >= 1:
                return factory(int(tail))
    raise ValueError(f"unknown domain name {name!r}")


# ---------------------------------------------------------------------------
# coordinate handling


def as_coords(domain: DomainModel, z) -> np.ndarray:
    """Coerce a point-like argument to an (..., n) complex array."""
    if isinstance(z, Point):
        z = z.as_array()
    arr = np.asarray(z)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    arr = arr.astype(complex, copy=False)
    if arr.shape[-1] != domain.dim:
        raise ValueError(
            f"point has {arr.shape[-1]} coordinates, domain {domain.label()} needs {domain.dim}"
        )
    return arr


def _scalar(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def boundary_distance(domain: DomainModel, z):
    """Euclidean distance from an interior point to the boundary."""
    pts = as_coords(domain, z)
    if domain.kind == "ball":
        d = 1.0 - np.linalg.norm(pts, axis=-1)
    else:
        d = np.min(1.0 - np.abs(pts), axis=-1)
    return _scalar(d)


def contains(domain: DomainModel, z, margin: float = 0.0):
    """True where the point is strictly interior with the given margin."""
    return _scalar(np.asarray(boundary_distance(domain, z)) > margin)


def require_interior(domain: DomainModel, z, what: str = "point") -> np.ndarray:
    pts = as_coords(domain, z)
    inside = np.asarray(contains(domain, pts))
    if not np.all(inside):
        bad = pts[~inside][:1] if pts.ndim > 1 else pts
        raise DomainMembershipError(
            f"{what} {np.asarray(bad).ravel().tolist()} is not strictly inside {domain.label()}"
        )
    return pts


# ---------------------------------------------------------------------------
# kernel


def _hermitian_inner(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    return np.sum(z * np.conj(w), axis=-1)


def _int_power(base: np.ndarray, k: int) -> np.ndarray:
    # multiply chain instead of ** so conjugation symmetry is exact bitwise
    result = np.ones_like(base)
    factor = base
    while k:
        if k & 1:
            result = result * factor
        k >>= 1
        if k:
            factor = factor * factor
    return result


def bergman_kernel(domain: DomainModel, z, w, validate: bool = True):
    """Bergman kernel K(z, w) of the domain.

    Closed forms: disk 1/(pi (1 - z conj(w))^2); ball(n)
    n!/(pi^n (1 - <z, w>)^{n+1}); polydisk(n) the product of disk kernels.
    Hermitian symmetry K(z, w) = conj(K(w, z)) holds exactly.
    """
    zc = as_coords(domain, z)
    wc = as_coords(domain, w)
    if validate:
        require_interior(domain, zc, "z")
        require_interior(domain, wc, "w")
    if domain.kind == "ball":
        n = domain.dim
        base = 1.0 - _hermitian_inner(zc, wc)
        return _scalar(math.factorial(n) / (math.pi ** n * _int_power(base, n + 1)))
    factors = 1.0 - zc * np.conj(wc)
    return _scalar(np.prod(1.0 / (math.pi * factors * factors), axis=-1))


def kernel_diagonal(domain: DomainModel, z, validate: bool = True):
    """K(z, z), computed as a positive real."""
    zc = as_coords(domain, z)
    if validate:
        require_interior(domain, zc, "z")
    if domain.kind == "ball":
        n = domain.dim
        base = 1.0 - np.sum(np.abs(zc) ** 2, axis=-1)
        return _scalar(math.factorial(n) / (math.pi ** n * base ** (n + 1)))
    factors = 1.0 - np.abs(zc) ** 2
    return _scalar(np.prod(1.0 / (math.pi * factors ** 2), axis=-1))


def normalized_kernel(domain: DomainModel, a, z, validate: bool = True):
    """k_a(z) = K(z, a) / sqrt(K(a, a)), the unit-norm kernel section."""
    num = bergman_kernel(domain, z, a, validate=validate)
    return _scalar(np.asarray(num) / np.sqrt(kernel_diagonal(domain, a, validate=False)))


# ---------------------------------------------------------------------------
# metric and distance


def pseudohyperbolic_distance(domain: DomainModel, z, w):
    """Per-factor pseudohyperbolic distances (disk/polydisk) or the ball one.

    Returns an (...,) array for the ball and an (..., n) array of per-factor
    values for disk/polydisk.
    """
    zc = as_coords(domain, z)
    wc = as_coords(domain, w)
    if domain.kind == "ball":
        # |phi_z(w)|^2 = (|z-w|^2 + |<z,w>|^2 - |z|^2 |w|^2) / |1 - <z,w>|^2,
        # in explicit re/im arithmetic so coincident points cancel exactly
        # (complex ufuncs may contract with FMA and break that)
        zr, zi = np.real(zc), np.imag(zc)
        wr, wi = np.real(wc), np.imag(wc)
        inner_re = np.sum(zr * wr + zi * wi, axis=-1)
        inner_im = np.sum(zi * wr - zr * wi, axis=-1)
        diff2 = np.sum((zr - wr) ** 2 + (zi - wi) ** 2, axis=-1)
        nz2 = np.sum(zr * zr + zi * zi, axis=-1)
        nw2 = np.sum(wr * wr + wi * wi, axis=-1)
        num = diff2 + (inner_re * inner_re + inner_im * inner_im) - nz2 * nw2
        den = (1.0 - inner_re) ** 2 + inner_im ** 2
        return np.sqrt(np.clip(num / den, 0.0, 1.0))
    return np.abs(zc - wc) / np.abs(1.0 - np.conj(zc) * wc)


def bergman_distance(domain: DomainModel, z, w, validate: bool = True):
    """Bergman distance beta(z, w) induced by the Hessian-of-log-K metric."""
    if validate:
        require_interior(domain, z, "z")
        require_interior(domain, w, "w")
    d = pseudohyperbolic_distance(domain, z, w)
    if domain.kind == "ball":
        return _scalar(domain.metric_scale * np.arctanh(d))
    per_factor = math.sqrt(2.0) * np.arctanh(d)
    return _scalar(np.sqrt(np.sum(per_factor ** 2, axis=-1)))


def metric_ball_pseudo_radius(domain: DomainModel, r: float) -> float:
    """Pseudohyperbolic radius of the metric ball B(0, r) (disk and ball).

    For the polydisk the metric ball at the center is not a product of
    per-factor balls; this value then bounds each factor's radius.
    """
    return math.tanh(r / domain.metric_scale)


def disk_metric_ball(a: complex, r: float) -> tuple[complex, float]:
    """Euclidean center and radius of the disk's metric ball B(a, r)."""
    rho = math.tanh(r / math.sqrt(2.0))
    a = complex(a)
    denom = 1.0 - rho ** 2 * abs(a) ** 2
    return (1.0 - rho ** 2) * a / denom, rho * (1.0 - abs(a) ** 2) / denom


def disk_metric_ball_volume(a: complex, r: float) -> float:
    """Closed-form Lebesgue area of the disk's metric ball B(a, r)."""
    _, radius = disk_metric_ball(a, r)
    return math.pi * radius ** 2


def metric_ball_volume(
    domain: DomainModel,
    a,
    r: float,
    resolution: int = 16,
    refinement_check: bool = True,
) -> float:
    """Lebesgue volume of the Bergman-metric ball B(a, r).

    Computed by quadrature over the ball (automorphism pullback of the
    centered ball, so the region is resolved exactly).  When
    ``refinement_check`` is on, the value is recomputed at twice the
    resolution and a QuadratureRefinementWarning is raised if the two
    levels disagree by more than 0.1%.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    require_interior(domain, a, "center")
    from . import measures  # local import; measures depends on this module

    rule = measures.metric_ball_rule(domain, a, r, resolution)
    vol = float(np.sum(rule.weights))
    if refinement_check:
        fine = measures.metric_ball_rule(domain, a, r, 2 * resolution)
        vol_fine = float(np.sum(fine.weights))
        if abs(vol_fine - vol) > 1e-3 * abs(vol_fine):
            warnings.warn(
                f"metric ball volume changed by {abs(vol_fine - vol) / abs(vol_fine):.2e} "
                f"under refinement; increase resolution (got {resolution})",
                QuadratureRefinementWarning,
                stacklevel=2,
            )
        vol = vol_fine
    return vol


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class AutomorphismChart:
    """Involutive automorphism phi_a exchanging the base point a and 0.

    ``forward`` maps a to the center, ``inverse`` is its inverse (the same
    map, all three model charts are involutions), and ``jacobian_det``
    evaluates the closed-form complex Jacobian determinant of ``forward``.
    """

    domain: DomainModel
    base: np.ndarray
    forward: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    jacobian_det: Callable[[np.ndarray], np.ndarray]


def _mobius_factory(a: np.ndarray):
    conj_a = np.conj(a)

    def fwd(z):
        z = np.asarray(z, dtype=complex)
        return (a - z) / (1.0 - conj_a * z)

    def jac(z):
        z = np.asarray(z, dtype=complex)
        per_factor = (np.abs(a) ** 2 - 1.0) / (1.0 - conj_a * z) ** 2
        return np.prod(per_factor, axis=-1)

    return fwd, jac


def _ball_factory(a: np.ndarray, n: int):
    norm2 = float(np.sum(np.abs(a) ** 2))
    s = math.sqrt(1.0 - norm2)
    conj_a = np.conj(a)
    sign = (-1.0) ** n

    if norm2 == 0.0:

        def fwd0(z):
            return -np.asarray(z, dtype=complex)

        def jac0(z):
            z = np.asarray(z, dtype=complex)
            return np.full(z.shape[:-1], sign, dtype=complex)

        return fwd0, jac0

    def fwd(z):
        z = np.asarray(z, dtype=complex)
        inner = np.sum(z * conj_a, axis=-1, keepdims=True)
        proj = inner / norm2 * a
        return (a - proj - s * (z - proj)) / (1.0 - inner)

    def jac(z):
        z = np.asarray(z, dtype=complex)
        inner = np.sum(z * conj_a, axis=-1)
        return sign * s ** (n + 1) / (1.0 - inner) ** (n + 1)

    return fwd, jac


def automorphism(domain: DomainModel, a) -> AutomorphismChart:
    """Chart phi_a with phi_a(a) = 0; all model charts are involutions."""
    base = require_interior(domain, a, "base point")
    if base.ndim != 1:
        raise ValueError("automorphism base must be a single point")
    if domain.kind == "ball":
        fwd, jac = _ball_factory(base, domain.dim)
    else:
        fwd, jac = _mobius_factory(base)
    return AutomorphismChart(domain=domain, base=base, forward=fwd, inverse=fwd, jacobian_det=jac)


def verify_jacobian_identity(domain: DomainModel, a, z) -> tuple[float, float]:
    """Relative residuals of the two kernel/Jacobian identities.

    First: |det J(phi_a, z)|^2 against |K(z,a)|^2 / (K(0,0) K(a,a)).
    Second: |det J(phi_a^{-1}, z)|^2 against K(0,0) K(a,a) / |K(phi_a^{-1}(z), a)|^2.
    """
    chart = automorphism(domain, a)
    zc = require_interior(domain, z, "z")
    k_cc = kernel_diagonal(domain, domain.center, validate=False)
    k_aa = kernel_diagonal(domain, a)

    lhs1 = np.abs(chart.jacobian_det(zc)) ** 2
    rhs1 = np.abs(bergman_kernel(domain, zc, a, validate=False)) ** 2 / (k_cc * k_aa)
    res1 = np.max(np.abs(lhs1 - rhs1) / np.abs(rhs1))

    pre = chart.inverse(zc)
    lhs2 = np.abs(chart.jacobian_det(zc)) ** 2  # involution: same Jacobian map
    rhs2 = k_cc * k_aa / np.abs(bergman_kernel(domain, pre, a, validate=False)) ** 2
    res2 = np.max(np.abs(lhs2 - rhs2) / np.abs(rhs2))
    return float(res1), float(res2)
