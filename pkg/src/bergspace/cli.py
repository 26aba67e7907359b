"""Batch verification harness.

Subcommands: verify-geometry, carleson-report, equivalence-report,
toeplitz-spectrum.  Each reads an optional JSON config (flags override
config fields), runs its suites, writes ``report.json`` plus CSV tables
into the output directory, and exits 0 only if every suite passed
(2 on configuration errors).

Reports are deterministic for a fixed config and seed: the only
run-dependent field is the timestamp, isolated in the report header.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field, asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import domains as dom
from . import functionals as fn
from . import lattice as lat
from . import measures as mea
from . import toeplitz as toe
from .sampling import (
    STREAM_DOMINATION,
    STREAM_GEOMETRY,
    make_rng,
    sample_euclidean_interior,
)

__all__ = ["ConfigError", "ExperimentConfig", "main"]


class ConfigError(ValueError):
    """Invalid experiment configuration."""


_CONFIG_KEYS = {
    "domain", "measure", "radius", "delta", "resolution", "degrees",
    "rays", "out", "seed", "lattice_sample_count", "ceiling",
}


@dataclass
class ExperimentConfig:
    domain: str = "disk"
    measure: dict = field(default_factory=lambda: {"type": "density", "family": "lebesgue"})
    radius: float = 1.0
    delta: float = 1e-3
    resolution: int | None = None
    degrees: list | None = None
    rays: list | None = None
    out: str = "out"
    seed: int = 0
    lattice_sample_count: int = 50_000
    ceiling: float = 10.0

    def validate(self) -> "ExperimentConfig":
        try:
            self.model()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not 0.0 < self.radius <= 10.0:
            raise ConfigError(f"radius {self.radius} outside (0, 10]")
        if not 0.0 < self.delta <= 0.5:
            raise ConfigError(f"delta {self.delta} outside (0, 0.5]")
        if self.resolution is not None and self.resolution < mea.MIN_RESOLUTION:
            raise ConfigError(f"resolution {self.resolution} below {mea.MIN_RESOLUTION}")
        if self.degrees is not None:
            if not all(isinstance(d, int) and 0 <= d <= 60 for d in self.degrees):
                raise ConfigError("degrees must be integers in [0, 60]")
            if sorted(set(self.degrees)) != list(self.degrees):
                raise ConfigError("degrees must be strictly increasing")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.lattice_sample_count < 100:
            raise ConfigError("lattice_sample_count must be at least 100")
        if self.ceiling <= 0:
            raise ConfigError("ceiling must be positive")
        try:
            mea.measure_from_spec(self.measure, self.model())
        except mea.MeasureSpecError as exc:
            raise ConfigError(f"bad measure spec: {exc}") from exc
        return self

    def model(self) -> dom.DomainModel:
        return dom.domain_from_name(self.domain)

    def the_measure(self) -> mea.Measure:
        return mea.measure_from_spec(self.measure, self.model())

    def quad_resolution(self) -> int:
        if self.resolution is not None:
            return self.resolution
        return {"disk": 32, "ball": 10, "polydisk": 8}[self.model().kind]

    def degree_list(self) -> list:
        if self.degrees is not None:
            return list(self.degrees)
        if self.model().kind == "disk":
            return [5, 10, 15, 20]
        return [2, 4, 6, 8, 10]

    def ray_directions(self) -> list:
        domain = self.model()
        if self.rays is None:
            e1 = np.zeros(domain.dim, dtype=complex)
            e1[0] = 1.0
            rays = [np.ones(domain.dim, dtype=complex)]
            if domain.dim > 1:
                rays.append(e1)  # face-boundary mode for the polydisk
            return rays
        out = []
        for spec in self.rays:
            flat = list(spec)
            if len(flat) != 2 * domain.dim:
                raise ConfigError(f"ray {spec} needs {2 * domain.dim} re/im entries")
            out.append(np.asarray(
                [complex(flat[2 * i], flat[2 * i + 1]) for i in range(domain.dim)]
            ))
        return out


def load_config(path: str | None, overrides: dict) -> ExperimentConfig:
    data: dict = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config root must be an object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        cfg = ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


# ---------------------------------------------------------------------------
# report plumbing


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [_jsonify(v) for v in obj.tolist()]
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def suite(name: str, passed: bool, measured, tolerance, **details) -> dict:
    entry = {"name": name, "passed": bool(passed), "measured": _jsonify(measured),
             "tolerance": _jsonify(tolerance)}
    if details:
        entry["details"] = _jsonify(details)
    return entry


def write_report(out_dir: Path, experiment: str, config: ExperimentConfig,
                 suites: list, results: dict | None = None) -> dict:
    passed = all(s["passed"] for s in suites)
    report = {
        "header": {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "version": __version__,
            "seed": config.seed,
        },
        "experiment": experiment,
        "inputs": _jsonify(asdict(config)),
        "suites": suites,
        "results": _jsonify(results or {}),
        "passed": passed,
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return report


def write_csv(path: Path, header: list, rows: list):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _profile_rows(profile: fn.BoundaryProfile) -> list:
    return [[float(s), float(v)] for s, v in zip(profile.s_values, profile.values)]


# ---------------------------------------------------------------------------
# verify-geometry


def _fixed_polynomial(domain: dom.DomainModel, max_degree: int, seed: int):
    basis = toe.build_basis(domain, max_degree)
    rng = make_rng(seed, STREAM_GEOMETRY + 11)
    coeffs = rng.normal(size=(len(basis), 2)).view(complex).ravel()

    def f(pts):
        return toe.evaluate_basis(basis, pts) @ coeffs

    return f


def cmd_verify_geometry(config: ExperimentConfig) -> dict:
    domain = config.model()
    out_dir = Path(config.out)
    res = config.quad_resolution()
    suites = []

    pts = sample_euclidean_interior(domain, 1000, config.seed, STREAM_GEOMETRY, margin=1e-3)
    minim = np.abs(dom.bergman_kernel(domain, pts, domain.center, validate=False)
                   * domain.volume - 1.0)
    suites.append(suite("minimality", float(np.max(minim)) <= 1e-12,
                        {"max_deviation": float(np.max(minim))}, {"max_deviation": 1e-12}))

    kzz = np.asarray(dom.kernel_diagonal(domain, pts, validate=False))
    floor = 1.0 / domain.volume
    positive = bool(np.all(kzz >= floor * (1.0 - 1e-12)))
    suites.append(suite("kernel_positivity", positive,
                        {"min_diagonal": float(np.min(kzz)), "floor": floor},
                        {"relative_slack": 1e-12}))

    # the kernel section's harmonics at the test points must fit inside the
    # rule's angular band, so deeper test points and denser rules off the disk
    deg = 10 if domain.kind == "disk" else 4
    repro_margin = 0.2 if domain.kind == "disk" else 0.5
    repro_res = config.resolution or {"disk": 32, "ball": 20, "polydisk": 10}[domain.kind]
    f = _fixed_polynomial(domain, deg, config.seed)
    rule = mea.build_quadrature(domain, repro_res)
    test_pts = sample_euclidean_interior(domain, 20, config.seed, STREAM_GEOMETRY + 1,
                                         margin=repro_margin)
    worst = 0.0
    for z in test_pts:
        kern = dom.bergman_kernel(domain, z, rule.points, validate=False)
        approx = np.sum(rule.weights * kern * f(rule.points))
        worst = max(worst, abs(approx - f(z[None, :])[0]))
    suites.append(suite("reproducing_property", worst <= 1e-8,
                        {"max_error": worst, "polynomial_degree": deg, "points": 20},
                        {"max_error": 1e-8}))

    pairs = sample_euclidean_interior(domain, 2000, config.seed, STREAM_GEOMETRY + 2, margin=1e-2)
    worst_jac = 0.0
    for a, z in zip(pairs[:1000], pairs[1000:]):
        r1, r2 = dom.verify_jacobian_identity(domain, a, z)
        worst_jac = max(worst_jac, r1, r2)
    suites.append(suite("jacobian_identity", worst_jac <= 1e-10,
                        {"max_relative_residual": worst_jac, "pairs": 1000},
                        {"max_relative_residual": 1e-10}))

    tri = sample_euclidean_interior(domain, 600, config.seed, STREAM_GEOMETRY + 3, margin=1e-2)
    a, b, c = tri[:200], tri[200:400], tri[400:]
    d_ab = np.asarray(dom.bergman_distance(domain, a, b, validate=False))
    d_ba = np.asarray(dom.bergman_distance(domain, b, a, validate=False))
    d_ac = np.asarray(dom.bergman_distance(domain, a, c, validate=False))
    d_cb = np.asarray(dom.bergman_distance(domain, c, b, validate=False))
    sym = float(np.max(np.abs(d_ab - d_ba)))
    self_d = float(np.max(np.asarray(dom.bergman_distance(domain, a, a, validate=False))))
    tri_violation = float(np.max(d_ab - (d_ac + d_cb)))
    axioms_ok = sym <= 1e-12 and self_d <= 1e-12 and tri_violation <= 1e-10
    suites.append(suite("distance_axioms", axioms_ok,
                        {"symmetry": sym, "self_distance": self_d,
                         "triangle_violation": tri_violation},
                        {"symmetry": 1e-12, "self_distance": 1e-12,
                         "triangle_violation": 1e-10}))

    consts = fn.estimate_constants(domain, config.radius, delta=config.delta, seed=config.seed)
    bracket_ok = consts.c_lower <= 1.0 <= consts.c_upper and consts.c_lower > 0
    limit = None
    if domain.kind == "disk":
        limit = (1.0 + math.tanh(config.radius / math.sqrt(2.0))) ** 2
        bracket_ok = bracket_ok and consts.c_upper <= limit + 1e-3
    suites.append(suite("kernel_comparability", bracket_ok,
                        {"c_lower": consts.c_lower, "c_upper": consts.c_upper,
                         "k_lower": consts.k_lower, "k_upper": consts.k_upper,
                         "closed_form_limit": limit},
                        {"upper_slack": 1e-3, "delta": config.delta}))

    write_csv(out_dir / "geometry_constants.csv", ["name", "value"],
              [["c_lower", consts.c_lower], ["c_upper", consts.c_upper],
               ["k_lower", consts.k_lower], ["k_upper", consts.k_upper]])
    return write_report(out_dir, "verify-geometry", config, suites)


# ---------------------------------------------------------------------------
# carleson-report


def cmd_carleson_report(config: ExperimentConfig) -> dict:
    domain = config.model()
    measure = config.the_measure()
    out_dir = Path(config.out)
    suites = []
    results = {}

    lattice = lat.build_lattice(domain, config.radius, config.delta, seed=config.seed)
    cert = lat.certify_lattice(domain, lattice, config.lattice_sample_count, seed=config.seed)
    suites.append(suite("lattice_certificate", cert.passed,
                        {"nodes": len(lattice), "coverage_max": cert.coverage_max,
                         "min_separation": cert.min_separation,
                         "multiplicity": cert.multiplicity},
                        {"coverage_max": config.radius,
                         "min_separation_exceeds": config.radius / 2.0},
                        failures=cert.failures))
    if not cert.passed:
        return write_report(out_dir, "carleson-report", config, suites, results)

    carleson = fn.carleson_certificate(measure, domain, lattice, ceiling=config.ceiling)
    vanishing = fn.vanishing_certificate(measure, domain, lattice)
    results["carleson"] = {
        "passed": carleson.passed, "sup": carleson.sup_value,
        "ceiling": carleson.ceiling, "first_exceed_delta": carleson.first_exceed_delta,
    }
    results["vanishing"] = {
        "passed": vanishing.passed, "bucket_max": vanishing.bucket_max,
        "reference": vanishing.reference, "thresholds": vanishing.thresholds,
    }
    write_csv(out_dir / "carleson_profile.csv", ["delta", "sup_averaging"],
              [[float(d), float(v)] for d, v in
               zip(carleson.profile_delta, carleson.profile_value)])
    write_csv(out_dir / "vanishing_buckets.csv", ["boundary_distance", "max_averaging"],
              [[float(d), float(v)] for d, v in
               zip(vanishing.bucket_distance, vanishing.bucket_max)])
    header = [f"# r={lattice.radius} delta={lattice.delta} N={lattice.multiplicity}"]
    write_csv(out_dir / "lattice.csv",
              header + [f"{part}{i + 1}" for i in range(domain.dim) for part in ("re", "im")],
              lat.lattice_table(lattice))

    # cross-radius consistency is reported, never asserted
    half = fn.averaging_on_points({"mu": measure}, domain, lattice.nodes,
                                  config.radius / 2.0, resolution=10)
    results["cross_radius"] = {
        "radius": config.radius, "sup": carleson.sup_value,
        "half_radius": config.radius / 2.0, "half_sup": float(half["mu"].max()),
    }

    s_grid = 1.0 - np.geomspace(0.5, 5e-4, 24)
    for i, direction in enumerate(config.ray_directions()):
        bz = fn.berezin_boundary_profile(measure, domain, direction, s_grid)
        av = fn.averaging_boundary_profile(measure, domain, direction, config.radius, s_grid)
        write_csv(out_dir / f"berezin_ray{i}.csv", ["s", "value"], _profile_rows(bz))
        write_csv(out_dir / f"averaging_ray{i}.csv", ["s", "value"], _profile_rows(av))

    consts = fn.estimate_constants(domain, config.radius, delta=config.delta, seed=config.seed)
    pts = sample_euclidean_interior(domain, 50, config.seed, STREAM_DOMINATION,
                                    margin=config.delta)
    margin = fn.check_pointwise_domination(measure, domain, config.radius,
                                           consts.domination_constant, pts)
    suites.append(suite("pointwise_domination", margin <= 1e-6,
                        {"worst_margin": margin,
                         "domination_constant": consts.domination_constant},
                        {"worst_margin": 1e-6}))
    return write_report(out_dir, "carleson-report", config, suites, results)


# ---------------------------------------------------------------------------
# equivalence-report


def _tail_verdict(tails: dict) -> bool:
    """Compact iff the tail norms keep decaying: negative fitted log-log
    slope over the upper half, or exact vanishing."""
    cutoffs = sorted(tails)
    upper = [d for d in cutoffs if d >= cutoffs[-1] / 2 and tails[d] > 0.0]
    if not upper:
        return True
    if tails[cutoffs[-1]] <= 1e-10:
        return True
    x = np.log([d + 2 for d in upper])
    y = np.log([tails[d] for d in upper])
    slope = float(np.polyfit(x, y, 1)[0]) if len(upper) > 1 else 0.0
    return slope <= -0.25


def _measure_diagnostics(name, measure, domain, config, lattice, node_values, s_grid):
    degrees = config.degree_list()
    top = degrees[-1]
    trunc, tails = toe.compactness_profile(measure, domain, top,
                                           resolution=config.quad_resolution())
    norms = {d: float(np.max(np.abs(np.linalg.eigvalsh(trunc.block(d)))))
             for d in degrees}
    mid, last = degrees[len(degrees) // 2 - 1] if len(degrees) > 1 else degrees[0], degrees[-1]
    growth = norms[last] / max(norms[mid], 1e-30) - 1.0
    bounded = {"operator_norm": growth < 0.05}

    ray_bz, ray_av = [], []
    for direction in config.ray_directions():
        ray_bz.append(fn.berezin_boundary_profile(measure, domain, direction, s_grid))
        ray_av.append(fn.averaging_boundary_profile(measure, domain, direction,
                                                    config.radius, s_grid))
    sup_bz = max(float(p.values.max()) for p in ray_bz)
    sup_av = max(float(p.values.max()) for p in ray_av)
    bounded["berezin_sup"] = sup_bz <= config.ceiling
    carleson = fn.carleson_certificate(measure, domain, lattice, ceiling=config.ceiling,
                                       node_values=node_values)
    bounded["carleson"] = carleson.passed
    bounded["averaging_sup"] = sup_av <= config.ceiling

    compact = {"tail_norms": _tail_verdict(tails)}
    compact["berezin_boundary"] = all(p.tends_to_zero(0.1) for p in ray_bz)
    vanishing = fn.vanishing_certificate(measure, domain, lattice, node_values=node_values)
    compact["vanishing"] = vanishing.passed
    compact["averaging_boundary"] = all(p.tends_to_zero(0.1) for p in ray_av)

    return {
        "bounded": bounded,
        "compact": compact,
        "norm_profile": norms,
        "tail_norms": {int(k): float(v) for k, v in tails.items()},
        "berezin_sup": sup_bz,
        "averaging_sup": sup_av,
        "carleson_sup": carleson.sup_value,
        "norm_growth": growth,
    }


def cmd_equivalence_report(config: ExperimentConfig) -> dict:
    domain = config.model()
    out_dir = Path(config.out)
    catalog = mea.catalog_measures(domain)
    suites = []
    results = {}

    delta = min(config.delta, 1e-3)  # deep enough to expose divergence
    lattice = lat.build_lattice(domain, config.radius, delta, seed=config.seed,
                                build_sample_count=5000)
    cert = lat.certify_lattice(domain, lattice, 10_000, seed=config.seed)
    suites.append(suite("lattice_certificate", cert.passed,
                        {"nodes": len(lattice), "coverage_max": cert.coverage_max,
                         "multiplicity": cert.multiplicity},
                        {"coverage_max": config.radius},
                        failures=cert.failures))
    if not cert.passed:
        return write_report(out_dir, "equivalence-report", config, suites, results)

    node_values = fn.averaging_on_points(catalog, domain, lattice.nodes,
                                         config.radius, resolution=10)
    # the norm-chain companions: reported alongside, tightness never asserted
    p_plus_res = {"disk": 16, "ball": 4, "polydisk": 4}[domain.kind]
    try:
        p_plus = toe.positive_bergman_norm_estimate(domain, resolution=p_plus_res)
        results["positive_bergman"] = {
            "estimate": p_plus.value, "refinement_delta": p_plus.refinement_delta,
            "margin": p_plus.margin, "resolution": p_plus.resolution,
        }
    except mea.QuadratureResolutionError as exc:
        results["positive_bergman"] = {"unavailable": str(exc)}
    s_grid = 1.0 - np.geomspace(0.5, 5e-4, 24)
    for name, measure in catalog.items():
        diag = _measure_diagnostics(name, measure, domain, config, lattice,
                                    node_values[name], s_grid)
        results[name] = diag
        b_votes = diag["bounded"]
        c_votes = diag["compact"]
        agree_b = len(set(b_votes.values())) == 1
        agree_c = len(set(c_votes.values())) == 1
        disagreement = []
        for votes, label in ((b_votes, "bounded"), (c_votes, "compact")):
            if len(set(votes.values())) != 1:
                names = sorted(votes)
                yes = [k for k in names if votes[k]]
                no = [k for k in names if not votes[k]]
                disagreement.append(f"{label}: {yes[0] if yes else '-'} vs {no[0] if no else '-'}")
        suites.append(suite(f"equivalence_{name}", agree_b and agree_c,
                            {"bounded_votes": b_votes, "compact_votes": c_votes},
                            {"required": "all four diagnostics agree"},
                            disagreement=disagreement))
        rows = [[d, v] for d, v in sorted(diag["norm_profile"].items())]
        write_csv(out_dir / f"norm_profile_{name}.csv", ["degree", "norm"], rows)
        rows = [[d, v] for d, v in sorted(diag["tail_norms"].items())]
        write_csv(out_dir / f"tail_norms_{name}.csv", ["cutoff", "tail_norm"], rows)
    return write_report(out_dir, "equivalence-report", config, suites, results)


# ---------------------------------------------------------------------------
# toeplitz-spectrum


def cmd_toeplitz_spectrum(config: ExperimentConfig) -> dict:
    domain = config.model()
    measure = config.the_measure()
    out_dir = Path(config.out)
    suites = []

    top = config.degree_list()[-1]
    basis = toe.build_basis(domain, top)
    rule = mea.adapted_rule(domain, measure, config.quad_resolution())
    trunc = toe.toeplitz_matrix(measure, basis, rule)
    spec = toe.spectrum_report(trunc)
    suites.append(suite("hermitian_psd", spec["hermiticity_defect"] <= 1e-10
                        and spec["min_eigenvalue"] >= -1e-8,
                        {"hermiticity_defect": spec["hermiticity_defect"],
                         "min_eigenvalue": spec["min_eigenvalue"]},
                        {"hermiticity_defect": 1e-10, "min_eigenvalue": -1e-8}))

    test_pts = sample_euclidean_interior(domain, 12, config.seed, STREAM_GEOMETRY + 5,
                                         margin=0.3)
    worst = 0.0
    used = 0
    for z in test_pts:
        _, capture = toe.kz_coefficients(basis, z)
        if capture < 0.999:
            continue
        used += 1
        direct = toe.berezin_of_operator(measure, domain, basis, z, truncation=trunc)
        reference = fn.berezin_pullback(measure, domain, z,
                                        resolution=2 * config.quad_resolution())
        worst = max(worst, abs(direct - reference))
    suites.append(suite("berezin_identity", worst <= 1e-3 and used > 0,
                        {"max_deviation": worst, "points_used": used},
                        {"max_deviation": 1e-3, "capture_at_least": 0.999}))

    write_csv(out_dir / "toeplitz_matrix.csv", ["row", "col", "re", "im"],
              toe.matrix_csv_rows(trunc))
    (out_dir / "spectrum.json").parent.mkdir(parents=True, exist_ok=True)
    (out_dir / "spectrum.json").write_text(
        json.dumps(_jsonify(spec), sort_keys=True, indent=2) + "\n")
    return write_report(out_dir, "toeplitz-spectrum", config, suites, results=spec)


# ---------------------------------------------------------------------------
# entry point


_COMMANDS = {
    "verify-geometry": cmd_verify_geometry,
    "carleson-report": cmd_carleson_report,
    "equivalence-report": cmd_equivalence_report,
    "toeplitz-spectrum": cmd_toeplitz_spectrum,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergspace",
                                     description="Bergman-space Toeplitz verification suites")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--domain", default=None, help="disk | ball<n> | bidisk | polydisk<n>")
        p.add_argument("--measure", default=None, help="measure spec as inline JSON")
        p.add_argument("--radius", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--resolution", type=int, default=None)
        p.add_argument("--degrees", default=None, help="comma-separated degree cutoffs")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {
        "domain": args.domain,
        "radius": args.radius,
        "delta": args.delta,
        "resolution": args.resolution,
        "out": args.out,
        "seed": args.seed,
    }
    try:
        if args.measure is not None:
            overrides["measure"] = json.loads(args.measure)
        if args.degrees is not None:
            overrides["degrees"] = [int(d) for d in args.degrees.split(",")]
        config = load_config(args.config, overrides)
    except (ConfigError, json.JSONDecodeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        report = _COMMANDS[args.command](config)
    except lat.LatticeBuildError as exc:
        print(f"lattice build refused: {exc}", file=sys.stderr)
        return 2
    for entry in report["suites"]:
        status = "pass" if entry["passed"] else "FAIL"
        print(f"[{status}] {entry['name']}")
    print(f"report: {Path(config.out) / 'report.json'}")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
