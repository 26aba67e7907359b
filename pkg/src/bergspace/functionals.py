"""Scalar functionals of a measure and their empirical constants.

Implements the Berezin transform, the averaging function over metric
balls, empirical kernel-comparability constants, sub-mean-value checks for
holomorphic functions, Carleson and vanishing-Carleson certificates over a
covering lattice, and boundary weak-convergence profiles.

Two evaluation paths exist for the Berezin transform of a density
measure.  The direct path integrates |k_z|^2 against a whole-domain rule
and degrades near the boundary, where the kernel section outruns the
rule's angular resolution.  The pullback path uses the substitution
w = phi_z(u), under which |k_z(w)|^2 |det J(phi_z, u)|^2 collapses to the
constant 1/Vol on every minimal domain with involutive charts, giving

    mu~(z) = (1/Vol) * integral of density(phi_z(u)) dV(u)  + atom part,

which stays accurate uniformly in z.  Both paths are exposed; sweeps and
boundary profiles use the pullback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import (
    DomainModel,
    automorphism,
    bergman_kernel,
    boundary_distance,
    kernel_diagonal,
    normalized_kernel,
    require_interior,
)
from .lattice import Lattice
from .measures import (
    Measure,
    adapted_rule,
    integrate,
    metric_ball_rule,
    QuadratureRule,
)
from .sampling import STREAM_CONSTANTS, make_rng

__all__ = [
    "EmpiricalConstants",
    "BoundaryProfile",
    "CarlesonCertificate",
    "VanishingCertificate",
    "berezin_transform",
    "berezin_pullback",
    "averaging_function",
    "averaging_on_points",
    "estimate_constants",
    "check_pointwise_domination",
    "submean_value_check",
    "submean_sup_check",
    "holomorphic_catalog",
    "carleson_certificate",
    "vanishing_certificate",
    "boundary_weak_convergence_check",
    "berezin_boundary_profile",
    "averaging_boundary_profile",
]


# ---------------------------------------------------------------------------
# the two basic functionals


def berezin_transform(measure: Measure, domain: DomainModel, z, rule: QuadratureRule) -> float:
    """mu~(z) = integral of |k_z(w)|^2 dmu(w), by direct quadrature."""
    zc = require_interior(domain, z, "z")

    def integrand(pts):
        return np.abs(normalized_kernel(domain, zc, pts, validate=False)) ** 2

    return float(np.real(integrate(measure, integrand, rule)))


def _pullback_resolution(domain: DomainModel, resolution: int | None) -> int:
    if resolution is not None:
        return resolution
    return {"disk": 24, "ball": 10, "polydisk": 8}[domain.kind]


def berezin_pullback(
    measure: Measure, domain: DomainModel, z, resolution: int | None = None
) -> float:
    """mu~(z) through the automorphism-pullback identity (boundary-stable)."""
    resolution = _pullback_resolution(domain, resolution)
    zc = require_interior(domain, z, "z")
    total = 0.0
    dens_probe = measure.density_values(domain, zc[None, :] * 0.0)
    if dens_probe is not None:
        rule = adapted_rule(domain, measure, resolution)
        if np.any(zc != 0):
            chart = automorphism(domain, zc)
            vals = measure.density_values(domain, chart.forward(rule.points))
        else:
            vals = measure.density_values(domain, rule.points)
        total += float(np.sum(rule.weights * vals)) / domain.volume
    apts, ams = measure.atom_list()
    if len(ams):
        kz = normalized_kernel(domain, zc, apts, validate=False)
        total += float(np.sum(ams * np.abs(kz) ** 2))
    return total


def averaging_function(
    measure: Measure, domain: DomainModel, z, r: float, resolution: int = 16
) -> float:
    """mu^(z) = mu(B(z, r)) / Vol(B(z, r)), numerator and denominator on
    the same ball rule so the Lebesgue fixed point is exact."""
    rule = metric_ball_rule(domain, z, r, resolution)
    num = float(np.real(integrate(measure, lambda p: 1.0, rule)))
    return num / float(np.sum(rule.weights))


def averaging_on_points(
    measures: dict, domain: DomainModel, points: np.ndarray, r: float, resolution: int = 10
) -> dict:
    """mu^ of several measures at many points, sharing one ball rule per point."""
    out = {name: np.empty(len(points)) for name in measures}
    for i, z in enumerate(points):
        rule = metric_ball_rule(domain, z, r, resolution)
        vol = float(np.sum(rule.weights))
        for name, mu in measures.items():
            out[name][i] = float(np.real(integrate(mu, lambda p: 1.0, rule))) / vol
    return out


# ---------------------------------------------------------------------------
# empirical constants (kernel comparability and its ball-volume companion)


@dataclass(frozen=True)
class EmpiricalConstants:
    """Empirical extremes over pairs (a, z in B(a, r)).

    c_* bracket |K(z,a)| / K(a,a); k_* bracket |k_a(z)|^2 Vol(B(a,r)).
    ``domination_constant`` is the single constant that makes
    mu^ <= const * mu~ run through the averaging/Berezin chain: the larger
    of k_upper and 1/k_lower.
    """

    r: float
    delta: float
    c_upper: float
    c_lower: float
    k_upper: float
    k_lower: float
    n_centers: int
    n_per_center: int
    seed: int

    @property
    def domination_constant(self) -> float:
        return max(self.k_upper, 1.0 / self.k_lower)


def _metric_ball_points(domain: DomainModel, r: float, count: int, rng, align=None) -> np.ndarray:
    """Points of B(0, r): extremes aligned with the center direction first,
    then a filling sample.  ``align`` is the unit direction of the chart's
    base point, so the pulled-back sample probes the kernel-ratio extremes."""
    n = domain.dim
    if align is None:
        align = np.zeros(n, dtype=complex)
        align[0] = 1.0
    if domain.kind == "polydisk":
        # per-factor pseudo radii from a beta-vector in the n-ball of radius r
        rho_one = math.tanh(r / math.sqrt(2.0))
        rho_diag = math.tanh(r / (math.sqrt(2.0) * math.sqrt(n)))
        pts = np.zeros((count, n), dtype=complex)
        structured = [
            rho_one * align * (np.arange(n) == 0),
            -rho_one * align * (np.arange(n) == 0),
            rho_diag * align,
            -rho_diag * align,
            np.zeros(n, dtype=complex),
        ]
        for j, row in enumerate(structured[: min(count, 5)]):
            pts[j] = row
        if count > 5:
            extra = count - 5
            direc = rng.normal(size=(extra, n))
            direc /= np.linalg.norm(direc, axis=1, keepdims=True)
            radii = r * rng.random(extra) ** (1.0 / n)
            betas = radii[:, None] * direc
            phases = np.exp(2j * math.pi * rng.random((extra, n)))
            pts[5:] = np.tanh(np.abs(betas) / math.sqrt(2.0)) * np.sign(betas) * phases
        return pts
    rho = math.tanh(r / domain.metric_scale)
    pts = np.zeros((count, n), dtype=complex)
    structured = [rho * align, -rho * align, 1j * rho * align, -1j * rho * align,
                  np.zeros(n, dtype=complex)]
    for j, row in enumerate(structured[: min(count, 5)]):
        pts[j] = row
    if count > 5:
        extra = count - 5
        direc = rng.normal(size=(extra, 2 * n)).view(complex)
        direc /= np.linalg.norm(direc, axis=1, keepdims=True)
        radii = rho * rng.random(extra) ** (1.0 / (2 * n))
        pts[5:] = radii[:, None] * direc
    return pts


def _constants_centers(domain: DomainModel, delta: float, n_centers: int, rng) -> np.ndarray:
    """Center sequence: the extreme radius 1 - delta first (so suprema are
    probed), then a fixed ladder approaching it; directions drawn from the
    stream.  Centers depend only on their index, so enlarging the sample
    keeps earlier pairs."""
    n = domain.dim
    centers = np.zeros((n_centers, n), dtype=complex)
    for i in range(n_centers):
        if i == 0:
            s = 1.0 - delta
        elif i == 1:
            s = 0.0
        else:
            s = (1.0 - delta) * (1.0 - 0.5 ** (i - 1))
        if domain.kind == "ball":
            direc = rng.normal(size=2 * n).view(complex)
            direc /= np.linalg.norm(direc)
            centers[i] = s * direc
        else:
            phases = np.exp(2j * math.pi * rng.random(n))
            centers[i] = s * phases if i else s * np.ones(n)
    return centers


def estimate_constants(
    domain: DomainModel,
    r: float,
    delta: float = 0.01,
    n_centers: int = 16,
    n_per_center: int = 24,
    seed: int = 0,
    ball_resolution: int = 12,
) -> EmpiricalConstants:
    """Empirical extremes of the kernel-comparability quantities.

    Samples pairs (a, z) with beta(a, z) <= r, a ranging out to the
    boundary margin delta, and records the observed extremes of
    |K(z,a)|/K(a,a) and |k_a(z)|^2 Vol(B(a,r)).
    """
    if n_centers < 1 or n_per_center < 1:
        raise ValueError("sampler needs at least one center and one point")
    rng = make_rng(seed, STREAM_CONSTANTS)
    centers = _constants_centers(domain, delta, n_centers, rng)
    c_up, c_lo = -math.inf, math.inf
    k_up, k_lo = -math.inf, math.inf
    for a in centers:
        if np.any(a != 0):
            if domain.kind == "ball":
                align = a / np.linalg.norm(a)
            else:
                align = np.where(np.abs(a) > 0, a / np.where(np.abs(a) > 0, np.abs(a), 1.0), 1.0)
            ball_pts = _metric_ball_points(domain, r, n_per_center, rng, align=align)
            chart = automorphism(domain, a)
            zs = chart.forward(ball_pts)
        else:
            ball_pts = _metric_ball_points(domain, r, n_per_center, rng)
            zs = ball_pts
        k_aa = kernel_diagonal(domain, a, validate=False)
        ratio = np.abs(bergman_kernel(domain, zs, a, validate=False)) / k_aa
        vol = float(np.sum(metric_ball_rule(domain, a, r, ball_resolution).weights))
        bracket = ratio ** 2 * k_aa * vol
        c_up, c_lo = max(c_up, ratio.max()), min(c_lo, ratio.min())
        k_up, k_lo = max(k_up, bracket.max()), min(k_lo, bracket.min())
    return EmpiricalConstants(
        r=float(r),
        delta=float(delta),
        c_upper=float(c_up),
        c_lower=float(c_lo),
        k_upper=float(k_up),
        k_lower=float(k_lo),
        n_centers=n_centers,
        n_per_center=n_per_center,
        seed=seed,
    )


def check_pointwise_domination(
    measure: Measure,
    domain: DomainModel,
    r: float,
    k_r: float,
    points: np.ndarray,
    resolution: int = 16,
) -> float:
    """Worst margin of mu^(z) - k_r * mu~(z) over the sample.

    Nonpositive (up to quadrature error) when k_r dominates the reciprocal
    of the lower |k_a|^2-times-ball-volume bracket, which is what
    ``EmpiricalConstants.domination_constant`` carries."""
    bz_res = 2 * resolution if domain.kind == "disk" else None
    worst = -math.inf
    for z in np.atleast_2d(points):
        mu_hat = averaging_function(measure, domain, z, r, resolution)
        mu_til = berezin_pullback(measure, domain, z, resolution=bz_res)
        worst = max(worst, mu_hat - k_r * mu_til)
    return float(worst)


# ---------------------------------------------------------------------------
# sub-mean-value checks


def submean_value_check(domain, f, p, a, r, resolution: int = 16) -> float:
    """|f(a)|^p Vol(B(a,r)) / integral_{B(a,r)} |f|^p dV."""
    if p < 1:
        raise ValueError("exponent p must be >= 1")
    ac = require_interior(domain, a, "a")
    rule = metric_ball_rule(domain, ac, r, resolution)
    denom = float(np.sum(rule.weights * np.abs(f(rule.points)) ** p))
    if denom == 0.0:
        raise ValueError("test function vanishes identically on the ball")
    num = float(np.abs(f(ac[None, :])[0]) ** p) * float(np.sum(rule.weights))
    return num / denom


def submean_sup_check(domain, f, p, a, r, resolution: int = 16) -> float:
    """sup_{B(a,r)} |f|^p * Vol(B(a,r)) / integral_{B(a,2r)} |f|^p dV."""
    if p < 1:
        raise ValueError("exponent p must be >= 1")
    ac = require_interior(domain, a, "a")
    inner = metric_ball_rule(domain, ac, r, resolution)
    outer = metric_ball_rule(domain, ac, 2.0 * r, resolution)
    sup = float(np.max(np.abs(f(inner.points)) ** p))
    sup = max(sup, float(np.abs(f(ac[None, :])[0]) ** p))
    denom = float(np.sum(outer.weights * np.abs(f(outer.points)) ** p))
    if denom == 0.0:
        raise ValueError("test function vanishes identically on the ball")
    return sup * float(np.sum(inner.weights)) / denom


def holomorphic_catalog(domain: DomainModel) -> list:
    """Fixed reproducible catalog: monomials to degree 6, two mixed
    polynomials, and two kernel sections."""
    n = domain.dim
    e1 = np.zeros(n, dtype=complex)
    e1[0] = 1.0
    cat = [("one", lambda pts: np.ones(pts.shape[:-1], dtype=complex))]
    for k in (1, 2, 3, 6):
        cat.append((f"z1^{k}", lambda pts, k=k: pts[..., 0] ** k))
    if n > 1:
        cat.append(("z1*z2", lambda pts: pts[..., 0] * pts[..., 1]))
    cat.append(
        ("mixed_poly", lambda pts: 0.7 + (0.5 - 0.25j) * pts[..., 0]
         + 0.3j * pts[..., 0] ** 2 + (0.1 + 0.2j) * pts[..., -1] ** 3)
    )
    for s, tag in ((0.5, "kernel_0.5"), (0.8, "kernel_0.8")):
        b = s * e1
        cat.append(
            (tag, lambda pts, b=b: bergman_kernel(domain, pts, b, validate=False))
        )
    return cat


# ---------------------------------------------------------------------------
# certificates over a lattice


@dataclass(frozen=True)
class CarlesonCertificate:
    passed: bool
    sup_value: float             # sup over lattice nodes of mu^
    profile_delta: np.ndarray    # decreasing boundary margins
    profile_value: np.ndarray    # cumulative sup of mu^ over nodes with bd >= delta
    ceiling: float
    r: float
    lattice_delta: float
    first_exceed_delta: float | None


@dataclass(frozen=True)
class VanishingCertificate:
    passed: bool
    bucket_distance: np.ndarray  # geometric bucket upper edges, decreasing
    bucket_max: np.ndarray       # max mu^ per bucket
    reference: float             # global max used to normalize the schedule
    thresholds: tuple
    failures: tuple


def _lattice_averages(measure, domain, lattice: Lattice, resolution: int) -> np.ndarray:
    vals = averaging_on_points(
        {"mu": measure}, domain, lattice.nodes, lattice.radius, resolution
    )
    return vals["mu"]


def carleson_certificate(
    measure: Measure,
    domain: DomainModel,
    lattice: Lattice,
    resolution: int = 10,
    ceiling: float = 10.0,
    profile_points: int = 12,
    node_values: np.ndarray | None = None,
) -> CarlesonCertificate:
    """Carleson criterion: sup over lattice nodes of mu^ stays under the
    ceiling; the delta-profile exposes divergence toward the boundary."""
    values = node_values if node_values is not None else _lattice_averages(
        measure, domain, lattice, resolution
    )
    bd = np.asarray(boundary_distance(domain, lattice.nodes))
    deltas = np.geomspace(0.5, lattice.delta, profile_points)
    profile = np.array([values[bd >= d].max() if np.any(bd >= d) else 0.0 for d in deltas])
    sup_value = float(values.max())
    exceeded = profile > ceiling
    first = float(deltas[int(np.argmax(exceeded))]) if np.any(exceeded) else None
    return CarlesonCertificate(
        passed=bool(sup_value <= ceiling),
        sup_value=sup_value,
        profile_delta=deltas,
        profile_value=profile,
        ceiling=ceiling,
        r=lattice.radius,
        lattice_delta=lattice.delta,
        first_exceed_delta=first,
    )


def vanishing_certificate(
    measure: Measure,
    domain: DomainModel,
    lattice: Lattice,
    thresholds: tuple = (0.5, 0.25, 0.12),
    resolution: int = 10,
    bucket_count: int = 8,
    node_values: np.ndarray | None = None,
) -> VanishingCertificate:
    """Vanishing criterion: bucket maxima of mu^ (bucketed by boundary
    distance) must fall below the threshold schedule, relative to the
    global maximum, as the boundary is approached."""
    values = node_values if node_values is not None else _lattice_averages(
        measure, domain, lattice, resolution
    )
    bd = np.asarray(boundary_distance(domain, lattice.nodes))
    edges = np.geomspace(1.0, lattice.delta, bucket_count + 1)
    maxima = []
    for hi, lo in zip(edges[:-1], edges[1:]):
        mask = (bd <= hi) & (bd > lo * (1.0 - 1e-12))
        maxima.append(float(values[mask].max()) if np.any(mask) else 0.0)
    maxima = np.asarray(maxima)
    ref = float(values.max())
    failures = []
    if ref > 0.0:
        k = len(thresholds)
        for j, frac in enumerate(thresholds):
            bucket_idx = len(maxima) - k + j
            if maxima[bucket_idx] > frac * ref:
                failures.append(
                    f"bucket at boundary distance <= {edges[bucket_idx]:.2e} has "
                    f"max {maxima[bucket_idx]:.4g} > {frac} * {ref:.4g}"
                )
    return VanishingCertificate(
        passed=not failures,
        bucket_distance=edges[1:],
        bucket_max=maxima,
        reference=ref,
        thresholds=tuple(thresholds),
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# boundary profiles


@dataclass(frozen=True)
class BoundaryProfile:
    """Values of a functional along the radial ray z = s * direction."""

    direction: np.ndarray
    s_values: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        s = np.asarray(self.s_values, dtype=float)
        if np.any(np.diff(s) <= 0):
            raise ValueError("ray parameters must be strictly increasing")
        if not np.all(np.isfinite(np.asarray(self.values, dtype=float))):
            raise ValueError("profile values must be finite")

    def tends_to_zero(self, rel: float = 0.1) -> bool:
        peak = float(np.max(np.abs(self.values)))
        if peak == 0.0:
            return True
        return float(np.abs(self.values[-1])) <= rel * peak


def _ray_points(domain: DomainModel, direction, s_values) -> np.ndarray:
    d = np.asarray(direction, dtype=complex)
    if d.ndim == 0:
        d = d.reshape(1)
    if domain.kind == "ball":
        d = d / np.linalg.norm(d)
    else:
        d = d / np.max(np.abs(d))
    return np.asarray(s_values)[:, None] * d[None, :]


def boundary_weak_convergence_check(
    domain: DomainModel, f, direction, s_values=None, label: str = "f"
) -> BoundaryProfile:
    """Profile of |<f, k_a>| = |f(a)| / sqrt(K(a,a)) along a radial ray."""
    if s_values is None:
        s_values = 1.0 - np.geomspace(0.5, 5e-4, 24)
    pts = _ray_points(domain, direction, s_values)
    vals = np.abs(np.atleast_1d(f(pts))) / np.sqrt(
        np.atleast_1d(kernel_diagonal(domain, pts, validate=False))
    )
    return BoundaryProfile(
        direction=pts[-1] / np.max(np.abs(pts[-1])),
        s_values=np.asarray(s_values, dtype=float),
        values=vals,
        label=label,
    )


def berezin_boundary_profile(
    measure, domain, direction, s_values=None, resolution: int | None = None, label: str = ""
) -> BoundaryProfile:
    if s_values is None:
        s_values = 1.0 - np.geomspace(0.5, 5e-4, 24)
    pts = _ray_points(domain, direction, s_values)
    vals = np.array([berezin_pullback(measure, domain, z, resolution) for z in pts])
    return BoundaryProfile(
        direction=pts[-1], s_values=np.asarray(s_values, float), values=vals, label=label
    )


def averaging_boundary_profile(
    measure, domain, direction, r: float, s_values=None, resolution: int = 10, label: str = ""
) -> BoundaryProfile:
    if s_values is None:
        s_values = 1.0 - np.geomspace(0.5, 5e-4, 24)
    pts = _ray_points(domain, direction, s_values)
    vals = np.array(
        [averaging_function(measure, domain, z, r, resolution) for z in pts]
    )
    return BoundaryProfile(
        direction=pts[-1], s_values=np.asarray(s_values, float), values=vals, label=label
    )
