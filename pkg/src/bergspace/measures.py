"""Measures and numerical integration on the model domains.

The measure model is a small tagged union: parametric Lebesgue densities,
finite atomic measures, and finite sums of those.  Every integral in the
library flows through a :class:`QuadratureRule`, which carries explicit
nodes and positive Lebesgue weights over either the whole domain or a
Bergman-metric ball.

Rule construction uses the substitution u_j = |z_j|^2 throughout, so that
dV factors as prod_j (1/2) du_j dtheta_j.  Radial integrals are then plain
Gauss-Legendre in u (composite over breakpoints, or dyadically graded
toward the boundary for densities that blow up there), and the angular
part is a uniform torus rule.  Metric-ball rules are built at the center
in closed form and transported by the center-moving automorphism with its
Jacobian weight, so the ball region is resolved exactly rather than by an
indicator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .domains import (
    DomainModel,
    automorphism,
    bergman_distance,
    boundary_distance,
    metric_ball_pseudo_radius,
    require_interior,
    as_coords,
)

__all__ = [
    "QuadratureResolutionError",
    "NonFiniteIntegrandError",
    "MeasureSpecError",
    "QuadratureRule",
    "Measure",
    "DensityMeasure",
    "AtomicMeasure",
    "SumMeasure",
    "constant_measure",
    "lebesgue",
    "power_vanishing",
    "power_blowup",
    "annulus_indicator",
    "atomic",
    "scale_measure",
    "measure_from_spec",
    "measure_to_spec",
    "catalog_measures",
    "build_quadrature",
    "metric_ball_rule",
    "adapted_rule",
    "integrate",
    "measure_of_ball",
]

MIN_RESOLUTION = 4


class QuadratureResolutionError(ValueError):
    """Requested resolution is below the supported minimum."""


class NonFiniteIntegrandError(ValueError):
    """The integrand produced a non-finite value at a quadrature node."""


class MeasureSpecError(ValueError):
    """A measure specification object is malformed."""


# ---------------------------------------------------------------------------
# quadrature rules


@dataclass(frozen=True)
class QuadratureRule:
    """Positive nodes/weights over a domain or a metric ball."""

    domain: DomainModel
    points: np.ndarray          # (m, n) complex
    weights: np.ndarray         # (m,) positive Lebesgue weights
    region: str                 # "domain" or "ball"
    exact_degree: int
    resolution: int
    ball_center: np.ndarray | None = None
    ball_radius: float | None = None

    def __len__(self):
        return len(self.weights)


@lru_cache(maxsize=256)
def _gauss01(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(count)
    return (x + 1.0) / 2.0, w / 2.0


def _radial_nodes(
    resolution: int,
    breakpoints: Sequence[float] = (),
    graded: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights in the radial variable u = |z|^2 on [0, 1].

    ``breakpoints`` splits the interval so piecewise-smooth densities are
    integrated exactly piece by piece.  ``graded`` substitutes
    u = 1 - (1 - x)^3, which clusters nodes toward u = 1 so integrable
    boundary blowups (1 - u)^{-t}, t < 1, are resolved; the substitution
    keeps every node strictly below 1 in double precision.
    """
    if graded:
        edges = [0.0, 1.0]
        if breakpoints:
            edges = sorted(
                set(edges)
                | {1.0 - (1.0 - float(b)) ** (1.0 / 3.0) for b in breakpoints if 0.0 < b < 1.0}
            )
        x, w = _gauss01(4 * resolution)
        nodes, weights = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            xs = lo + (hi - lo) * x
            ws = (hi - lo) * w
            nodes.append(1.0 - (1.0 - xs) ** 3)
            weights.append(ws * 3.0 * (1.0 - xs) ** 2)
        return np.concatenate(nodes), np.concatenate(weights)
    edges = [0.0, 1.0]
    if breakpoints:
        edges = sorted(set(edges) | {float(b) for b in breakpoints if 0.0 < b < 1.0})
    x, w = _gauss01(resolution)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        nodes.append(lo + (hi - lo) * x)
        weights.append((hi - lo) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _disk_factor(resolution, breakpoints=(), graded=False):
    """Per-factor disk rule in (u, theta): nodes z = sqrt(u) e^{i theta}."""
    u, wu = _radial_nodes(resolution, breakpoints, graded)
    m_ang = 4 * resolution + 1
    theta = 2.0 * math.pi * np.arange(m_ang) / m_ang
    z = np.sqrt(u)[:, None] * np.exp(1j * theta)[None, :]
    w = 0.5 * wu[:, None] * (2.0 * math.pi / m_ang) * np.ones_like(theta)[None, :]
    return z.ravel(), w.ravel(), m_ang


def _simplex_duffy(dim: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Duffy tensor rule for the solid simplex {v >= 0, sum v <= 1} in R^dim."""
    if dim == 0:
        return np.zeros((1, 0)), np.ones(1)
    x, w = _gauss01(count)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wts = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    v = np.empty_like(pts)
    remaining = np.ones(len(pts))
    for j in range(dim):
        v[:, j] = pts[:, j] * remaining
        remaining = remaining * (1.0 - pts[:, j])
    # Jacobian of v_j = x_j * prod_{i<j}(1 - x_i) is prod_i (1 - x_i)^{dim-1-i}
    jac = np.ones(len(pts))
    rem = np.ones(len(pts))
    for i in range(dim - 1):
        rem = rem * (1.0 - pts[:, i])
        jac = jac * rem
    return v, wts * jac


def build_quadrature(
    domain: DomainModel,
    resolution: int,
    graded: bool = False,
    radial_breakpoints: Sequence[float] = (),
) -> QuadratureRule:
    """Quadrature rule over the whole domain.

    disk: Gauss-Legendre in u = |z|^2 against a uniform angular rule;
    polydisk: tensor product of disk factors; ball(n): radial
    Gauss-Legendre against the u^{n-1} volume weight times a simplex/torus
    sphere rule.  Node count grows polynomially in ``resolution``.
    """
    if resolution < MIN_RESOLUTION:
        raise QuadratureResolutionError(
            f"resolution {resolution} is below the minimum {MIN_RESOLUTION}"
        )
    n = domain.dim
    if domain.kind in ("disk", "polydisk"):
        z1, w1, m_ang = _disk_factor(resolution, radial_breakpoints, graded)
        points = z1[:, None]
        weights = w1
        for _ in range(n - 1):
            points = np.concatenate(
                [
                    np.repeat(points, len(z1), axis=0),
                    np.tile(z1, len(points))[:, None],
                ],
                axis=1,
            )
            weights = np.repeat(weights, len(w1)) * np.tile(w1, len(weights))
        exact = min(4 * resolution - 2, m_ang - 1)
    else:
        u, wu = _radial_nodes(resolution, radial_breakpoints, graded)
        v, wv = _simplex_duffy(n - 1, resolution)
        m_ang = 2 * resolution + 1
        theta = 2.0 * math.pi * np.arange(m_ang) / m_ang
        # assemble (radial, face, torus^n) tensor nodes
        full_v = np.concatenate([v, 1.0 - np.sum(v, axis=1, keepdims=True)], axis=1)
        radial = u[:, None, None] * full_v[None, :, :]          # (R, F, n) = |z_j|^2
        w_rad = (wu * u ** (n - 1))[:, None] * wv[None, :]      # (R, F)
        moduli = np.sqrt(radial).reshape(-1, n)
        w_base = w_rad.reshape(-1)
        grids = np.meshgrid(*([theta] * n), indexing="ij")
        phases = np.exp(1j * np.stack([g.ravel() for g in grids], axis=-1))  # (M^n, n)
        points = (moduli[:, None, :] * phases[None, :, :]).reshape(-1, n)
        weights = np.repeat(w_base, len(phases)) * (
            (2.0 * math.pi / m_ang) ** n / 2.0 ** n
        )
        exact = min(m_ang - 1, 2 * resolution - n)
    return QuadratureRule(
        domain=domain,
        points=points,
        weights=np.ascontiguousarray(weights, dtype=float),
        region="domain",
        exact_degree=exact,
        resolution=resolution,
    )


def _centered_ball_rule(domain: DomainModel, r: float, resolution: int):
    """Nodes/weights over the metric ball B(0, r), exact region, no indicator."""
    n = domain.dim
    if domain.kind == "disk" or (domain.kind == "polydisk" and n == 1):
        rho2 = metric_ball_pseudo_radius(domain, r) ** 2
        u, wu = _gauss01(resolution)
        m_ang = 4 * resolution + 1
        theta = 2.0 * math.pi * np.arange(m_ang) / m_ang
        z = np.sqrt(rho2 * u)[:, None] * np.exp(1j * theta)[None, :]
        w = 0.5 * rho2 * wu[:, None] * (2.0 * math.pi / m_ang) * np.ones((1, m_ang))
        return z.reshape(-1, 1), w.ravel()
    if domain.kind == "ball":
        rho = metric_ball_pseudo_radius(domain, r)
        base = build_quadrature(domain, resolution)
        return rho * base.points, rho ** (2 * n) * base.weights
    # polydisk, n >= 2: the center ball {sum_i 2 artanh^2|z_i| <= r^2} maps to
    # a Euclidean ball of radius r under tau_i = sqrt(2) artanh|z_i|.  The
    # torus factor uses 2R+1 angles per coordinate to keep the tensor count
    # desk-sized; pullback harmonics decay fast at moderate margins.
    t, wt = _gauss01(resolution)
    t, wt = r * t, r * wt
    phi_nodes, phi_wts = _gauss01(resolution)
    angles = [0.5 * math.pi * phi_nodes] * (n - 1)
    a_w = [0.5 * math.pi * phi_wts] * (n - 1)
    grids = np.meshgrid(*angles, indexing="ij")
    wgrids = np.meshgrid(*a_w, indexing="ij")
    phis = np.stack([g.ravel() for g in grids], axis=-1)        # (F, n-1)
    wphi = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    # direction vector on the positive orthant of S^{n-1}
    omega = np.ones((len(phis), n))
    sphere_jac = np.ones(len(phis))
    for i in range(n - 1):
        omega[:, i] *= np.cos(phis[:, i])
        omega[:, i + 1 :] *= np.sin(phis[:, i])[:, None]
        if i < n - 2:
            sphere_jac *= np.sin(phis[:, i]) ** (n - 2 - i)
    tau = t[:, None, None] * omega[None, :, :]                  # (R, F, n)
    s = np.tanh(tau / math.sqrt(2.0))
    radial_jac = np.prod(s * (1.0 - s ** 2) / math.sqrt(2.0), axis=-1)
    w_rad = (wt * t ** (n - 1))[:, None] * (wphi * sphere_jac)[None, :] * radial_jac
    moduli = s.reshape(-1, n)
    w_base = w_rad.reshape(-1)
    m_ang = 2 * resolution + 1
    theta = 2.0 * math.pi * np.arange(m_ang) / m_ang
    tgrids = np.meshgrid(*([theta] * n), indexing="ij")
    phases = np.exp(1j * np.stack([g.ravel() for g in tgrids], axis=-1))
    points = (moduli[:, None, :] * phases[None, :, :]).reshape(-1, n)
    weights = np.repeat(w_base, len(phases)) * (2.0 * math.pi / m_ang) ** n
    return points, weights


def metric_ball_rule(domain: DomainModel, a, r: float, resolution: int = 16) -> QuadratureRule:
    """Quadrature rule over the Bergman-metric ball B(a, r).

    Built at the center in closed form and pushed forward through phi_a
    with the |det J|^2 Jacobian weight, so weights sum to Vol(B(a, r)).
    """
    if r <= 0:
        raise ValueError("ball radius must be positive")
    if resolution < MIN_RESOLUTION:
        raise QuadratureResolutionError(
            f"resolution {resolution} is below the minimum {MIN_RESOLUTION}"
        )
    center = require_interior(domain, a, "ball center")
    pts, wts = _centered_ball_rule(domain, r, resolution)
    if np.any(center != 0):
        chart = automorphism(domain, center)
        wts = wts * np.abs(chart.jacobian_det(pts)) ** 2
        pts = chart.forward(pts)
    return QuadratureRule(
        domain=domain,
        points=pts,
        weights=np.ascontiguousarray(wts, dtype=float),
        region="ball",
        exact_degree=0,
        resolution=resolution,
        ball_center=center,
        ball_radius=float(r),
    )


# ---------------------------------------------------------------------------
# measures


class Measure:
    """Base class of the measure union; see the concrete subclasses."""

    def density_values(self, domain: DomainModel, pts: np.ndarray):
        return None

    def atom_list(self) -> tuple[np.ndarray, np.ndarray]:
        return np.zeros((0, 1), dtype=complex), np.zeros(0)

    def quadrature_hints(self) -> dict:
        return {"graded": False, "breakpoints": ()}

    def total_mass(self, domain: DomainModel, resolution: int = 32) -> float:
        rule = adapted_rule(domain, self, resolution)
        return float(np.real(integrate(self, lambda p: 1.0, rule)))


_FAMILIES = ("constant", "power_vanishing", "power_blowup", "annulus_indicator")


@dataclass(frozen=True)
class DensityMeasure(Measure):
    """d mu = coeff * shape(z) dV for one of the supported density families."""

    family: str
    params: tuple = ()
    coeff: float = 1.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise MeasureSpecError(f"unknown density family {self.family!r}")
        if self.coeff <= 0:
            raise MeasureSpecError("density coefficient must be positive")
        if self.family == "power_vanishing":
            (t,) = self.params
            if t <= 0:
                raise MeasureSpecError("power_vanishing exponent must be positive")
        elif self.family == "power_blowup":
            (t,) = self.params
            if not 0.0 < t < 1.0:
                raise MeasureSpecError(
                    "power_blowup exponent must lie in (0, 1) for finite mass"
                )
        elif self.family == "annulus_indicator":
            s0, s1 = self.params
            if not 0.0 <= s0 < s1 <= 1.0:
                raise MeasureSpecError("annulus needs 0 <= s0 < s1 <= 1")

    def density_values(self, domain: DomainModel, pts: np.ndarray):
        pts = np.asarray(pts)
        if self.family == "constant":
            return np.full(pts.shape[:-1], self.coeff)
        if self.family == "power_vanishing":
            (t,) = self.params
            if domain.kind == "ball":
                base = 1.0 - np.sum(np.abs(pts) ** 2, axis=-1)
            else:
                base = np.prod(1.0 - np.abs(pts) ** 2, axis=-1)
            return self.coeff * base ** t
        if self.family == "power_blowup":
            if domain.kind != "disk":
                raise MeasureSpecError("power_blowup densities are disk-only")
            (t,) = self.params
            base = 1.0 - np.abs(pts[..., 0]) ** 2
            return self.coeff * base ** (-t)
        s0, s1 = self.params
        radial = 1.0 - np.asarray(boundary_distance(domain, pts))
        return self.coeff * ((radial >= s0) & (radial <= s1)).astype(float)

    def quadrature_hints(self) -> dict:
        if self.family == "power_blowup":
            return {"graded": True, "breakpoints": ()}
        if self.family == "power_vanishing":
            # non-integer exponents leave a fractional-power edge at u = 1
            (t,) = self.params
            return {"graded": t != int(t), "breakpoints": ()}
        if self.family == "annulus_indicator":
            s0, s1 = self.params
            return {"graded": False, "breakpoints": (s0 ** 2, s1 ** 2)}
        return {"graded": False, "breakpoints": ()}


@dataclass(frozen=True, eq=False)
class AtomicMeasure(Measure):
    """Finite sum of point masses at interior points."""

    points: np.ndarray
    masses: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, AtomicMeasure)
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.masses, other.masses)
        )

    __hash__ = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=complex))
        ms = np.atleast_1d(np.asarray(self.masses, dtype=float))
        if len(pts) != len(ms):
            raise MeasureSpecError("atom points and masses differ in length")
        if np.any(ms <= 0):
            raise MeasureSpecError("atom masses must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", ms)

    def atom_list(self):
        return self.points, self.masses


@dataclass(frozen=True)
class SumMeasure(Measure):
    """Finite sum of measures."""

    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise MeasureSpecError("sum measure needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))

    def density_values(self, domain, pts):
        total = None
        for part in self.parts:
            vals = part.density_values(domain, pts)
            if vals is not None:
                total = vals if total is None else total + vals
        return total

    def atom_list(self):
        pts, ms = [], []
        for part in self.parts:
            p, m = part.atom_list()
            if len(m):
                pts.append(np.atleast_2d(p))
                ms.append(m)
        if not pts:
            return np.zeros((0, 1), dtype=complex), np.zeros(0)
        return np.concatenate(pts, axis=0), np.concatenate(ms)

    def quadrature_hints(self):
        graded = False
        breaks: set[float] = set()
        for part in self.parts:
            h = part.quadrature_hints()
            graded = graded or h["graded"]
            breaks.update(h["breakpoints"])
        return {"graded": graded, "breakpoints": tuple(sorted(breaks))}


def constant_measure(c: float = 1.0) -> DensityMeasure:
    return DensityMeasure("constant", (), coeff=float(c))


def lebesgue() -> DensityMeasure:
    return constant_measure(1.0)


def power_vanishing(t: float) -> DensityMeasure:
    return DensityMeasure("power_vanishing", (float(t),))


def power_blowup(t: float) -> DensityMeasure:
    return DensityMeasure("power_blowup", (float(t),))


def annulus_indicator(s0: float, s1: float) -> DensityMeasure:
    return DensityMeasure("annulus_indicator", (float(s0), float(s1)))


def atomic(domain: DomainModel, atoms: Sequence[tuple]) -> AtomicMeasure:
    raw = [np.atleast_1d(np.asarray(a, dtype=complex)) for a, _ in atoms]
    pts = as_coords(domain, np.stack(raw))
    masses = np.asarray([m for _, m in atoms], dtype=float)
    require_interior(domain, pts, "atom")
    return AtomicMeasure(pts, masses)


def scale_measure(measure: Measure, c: float) -> Measure:
    """The measure c * mu, c > 0."""
    if c <= 0:
        raise MeasureSpecError("scale factor must be positive")
    if isinstance(measure, DensityMeasure):
        return DensityMeasure(measure.family, measure.params, coeff=c * measure.coeff)
    if isinstance(measure, AtomicMeasure):
        return AtomicMeasure(measure.points, c * measure.masses)
    if isinstance(measure, SumMeasure):
        return SumMeasure(tuple(scale_measure(p, c) for p in measure.parts))
    raise TypeError(f"not a measure: {measure!r}")


# ---------------------------------------------------------------------------
# measure specification grammar (consumed by the CLI config)


def _parse_point(obj, domain: DomainModel) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or not obj:
        raise MeasureSpecError(f"bad atom point {obj!r}")
    if isinstance(obj[0], (list, tuple)):
        pairs = obj
    else:
        flat = list(obj)
        if len(flat) % 2:
            raise MeasureSpecError(f"atom point needs re/im pairs, got {obj!r}")
        pairs = [flat[i : i + 2] for i in range(0, len(flat), 2)]
    coords = np.asarray([complex(float(p[0]), float(p[1])) for p in pairs])
    if len(coords) != domain.dim:
        raise MeasureSpecError(
            f"atom point has {len(coords)} coordinates, expected {domain.dim}"
        )
    return coords


def measure_from_spec(spec, domain: DomainModel) -> Measure:
    """Parse the measure grammar.

    ``{"type":"density","family":"power_vanishing","t":1.0}``,
    ``{"type":"atomic","atoms":[[[0.0,0.0],1.0]]}``,
    ``{"type":"sum","parts":[...]}``.  Unknown keys are rejected.
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, dict):
        raise MeasureSpecError(f"measure spec must be an object, got {type(spec).__name__}")
    kind = spec.get("type")
    if kind == "density":
        family = spec.get("family")
        if family in ("lebesgue",):
            _expect_keys(spec, {"type", "family"})
            return lebesgue()
        if family == "constant":
            _expect_keys(spec, {"type", "family", "c"})
            return constant_measure(float(spec["c"]))
        if family == "power_vanishing":
            _expect_keys(spec, {"type", "family", "t"})
            return power_vanishing(float(spec["t"]))
        if family == "power_blowup":
            _expect_keys(spec, {"type", "family", "t"})
            return power_blowup(float(spec["t"]))
        if family == "annulus_indicator":
            _expect_keys(spec, {"type", "family", "s0", "s1"})
            return annulus_indicator(float(spec["s0"]), float(spec["s1"]))
        raise MeasureSpecError(f"unknown density family {family!r}")
    if kind == "atomic":
        _expect_keys(spec, {"type", "atoms"})
        atoms = spec.get("atoms")
        if not isinstance(atoms, list) or not atoms:
            raise MeasureSpecError("atomic measure needs a non-empty atom list")
        parsed = [(_parse_point(a[0], domain), float(a[1])) for a in atoms]
        return atomic(domain, parsed)
    if kind == "sum":
        _expect_keys(spec, {"type", "parts"})
        parts = spec.get("parts")
        if not isinstance(parts, list) or not parts:
            raise MeasureSpecError("sum measure needs a non-empty parts list")
        return SumMeasure(tuple(measure_from_spec(p, domain) for p in parts))
    raise MeasureSpecError(f"unknown measure type {kind!r}")


def _expect_keys(spec: dict, allowed: set):
    extra = set(spec) - allowed
    if extra:
        raise MeasureSpecError(f"unknown keys in measure spec: {sorted(extra)}")


def measure_to_spec(measure: Measure) -> dict:
    if isinstance(measure, DensityMeasure):
        if measure.family == "constant":
            return {"type": "density", "family": "constant", "c": measure.coeff}
        out = {"type": "density", "family": measure.family}
        if measure.family in ("power_vanishing", "power_blowup"):
            out["t"] = measure.params[0]
        else:
            out["s0"], out["s1"] = measure.params
        return out
    if isinstance(measure, AtomicMeasure):
        atoms = []
        for p, m in zip(measure.points, measure.masses):
            flat = [v for c in p for v in (float(np.real(c)), float(np.imag(c)))]
            atoms.append([flat, float(m)])
        return {"type": "atomic", "atoms": atoms}
    if isinstance(measure, SumMeasure):
        return {"type": "sum", "parts": [measure_to_spec(p) for p in measure.parts]}
    raise TypeError(f"not a measure: {measure!r}")


def catalog_measures(domain: DomainModel) -> dict:
    """The fixed verification catalog of symbols.

    power_blowup is disk-only and is omitted for other domains.
    """
    e1 = np.zeros(domain.dim, dtype=complex)
    e1[0] = 1.0
    cat = {
        "lebesgue": lebesgue(),
        "constant_3": constant_measure(3.0),
        "power_vanishing_1": power_vanishing(1.0),
        "power_vanishing_05": power_vanishing(0.5),
        "atomic_1": atomic(domain, [(0.0 * e1, 1.0)]),
        "atomic_3": atomic(
            domain,
            [(0.0 * e1, 1.0), (0.4 * e1, 0.7), ((-0.3 + 0.35j) * e1, 0.5)],
        ),
    }
    if domain.kind == "disk":
        cat["power_blowup_05"] = power_blowup(0.5)
    return cat


# ---------------------------------------------------------------------------
# integration


def adapted_rule(domain: DomainModel, measure: Measure, resolution: int) -> QuadratureRule:
    """Whole-domain rule adapted to the measure's radial structure."""
    hints = measure.quadrature_hints()
    return build_quadrature(
        domain,
        resolution,
        graded=hints["graded"],
        radial_breakpoints=hints["breakpoints"],
    )


def _atoms_in_region(measure: Measure, rule: QuadratureRule):
    pts, ms = measure.atom_list()
    if not len(ms):
        return pts, ms
    if rule.region == "ball":
        dist = np.atleast_1d(
            bergman_distance(rule.domain, rule.ball_center, pts, validate=False)
        )
        keep = dist <= rule.ball_radius  # ties count as inside (closed ball)
        return pts[keep], ms[keep]
    return pts, ms


def integrate(measure: Measure, f: Callable[[np.ndarray], np.ndarray], rule: QuadratureRule):
    """Integral of f against the measure, through the given rule.

    The density part is a weighted node sum; atoms contribute mass * f(p)
    directly (restricted to the ball for ball-region rules).
    """
    total = 0.0 + 0.0j
    dens = measure.density_values(rule.domain, rule.points)
    if dens is not None:
        vals = np.asarray(f(rule.points))
        if vals.shape != rule.weights.shape:
            vals = np.broadcast_to(vals, rule.weights.shape)
        contrib = rule.weights * dens * vals
        bad = ~np.isfinite(contrib)
        if np.any(bad):
            idx = int(np.argmax(bad))
            raise NonFiniteIntegrandError(
                f"non-finite integrand at node {idx}: z = {rule.points[idx].tolist()}"
            )
        total = total + np.sum(contrib)
    apts, ams = _atoms_in_region(measure, rule)
    if len(ams):
        avals = np.asarray(f(apts))
        if not np.all(np.isfinite(avals)):
            raise NonFiniteIntegrandError("non-finite integrand at an atom")
        total = total + np.sum(ams * avals)
    total = complex(total)
    return total.real if abs(total.imag) == 0.0 else total


def measure_of_ball(
    measure: Measure, domain: DomainModel, a, r: float, resolution: int = 16
) -> float:
    """mu(B(a, r)) with closed-ball atom membership."""
    rule = metric_ball_rule(domain, a, r, resolution)
    return float(np.real(integrate(measure, lambda p: 1.0, rule)))
