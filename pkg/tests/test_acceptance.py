"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines; every tolerance is pinned here, not configured elsewhere.
"""

import json
import math
import time

import numpy as np
import pytest

from bergspace import cli
from bergspace import domains as dom
from bergspace import functionals as fn
from bergspace import lattice as lat
from bergspace import measures as mea
from bergspace import toeplitz as toe
from bergspace.sampling import sample_euclidean_interior

RHO = math.tanh(1.0 / math.sqrt(2.0))


def _criterion(num, label, passed, detail):
    status = "PASS" if passed else "FAIL"
    print(f"[{status}] criterion {num:2d}: {label} -- {detail}")
    assert passed, f"criterion {num}: {label} -- {detail}"


@pytest.fixture(scope="module")
def lattice_001(disk):
    return lat.build_lattice(disk, 1.0, 0.01)


@pytest.fixture(scope="module")
def domains3():
    return dom.unit_disk(), dom.unit_ball(2), dom.polydisk(2)


def test_c01_reproducing_property(disk, disk_rule):
    basis = toe.build_basis(disk, 10)
    rng = np.random.Generator(np.random.Philox(key=np.array([17, 1], dtype=np.uint64)))
    coeffs = rng.normal(size=(len(basis), 2)).view(complex).ravel()

    def f(pts):
        return toe.evaluate_basis(basis, pts) @ coeffs

    pts = sample_euclidean_interior(disk, 20, seed=17, stream=2, margin=0.2)
    worst = 0.0
    for z in pts:
        kern = dom.bergman_kernel(disk, z, disk_rule.points, validate=False)
        approx = np.sum(disk_rule.weights * kern * f(disk_rule.points))
        worst = max(worst, abs(approx - f(z[None, :])[0]))
    _criterion(1, "reproducing property (disk, degree <= 10, 20 points)",
               worst <= 1e-8, f"max error {worst:.3e} <= 1e-8")


def test_c02_minimality(domains3):
    worst = {}
    for domain in domains3:
        pts = sample_euclidean_interior(domain, 1000, seed=23, stream=1, margin=1e-3)
        vals = dom.bergman_kernel(domain, pts, domain.center, validate=False)
        worst[domain.label()] = float(np.max(np.abs(vals * domain.volume - 1.0)))
    top = max(worst.values())
    _criterion(2, "minimality K(z,0)*Vol = 1 on 10^3 samples x 3 domains",
               top <= 1e-12, f"max deviation {top:.3e} <= 1e-12")


def test_c03_jacobian_identities(domains3):
    disk, ball2, bidisk = domains3
    worst_closed = 0.0
    for domain in (disk, bidisk):
        pts = sample_euclidean_interior(domain, 2000, seed=29, stream=1, margin=1e-2)
        for a, z in zip(pts[:1000], pts[1000:]):
            worst_closed = max(worst_closed, *dom.verify_jacobian_identity(domain, a, z))
    # ball(2): closed-form jacobianDet cross-checked against finite differences
    pts = sample_euclidean_interior(ball2, 2000, seed=31, stream=1, margin=5e-2)
    worst_fd = 0.0
    h = 1e-6
    k_cc = dom.kernel_diagonal(ball2, ball2.center, validate=False)
    for a, z in zip(pts[:1000], pts[1000:]):
        chart = dom.automorphism(ball2, a)
        jac = np.zeros((2, 2), dtype=complex)
        for j in range(2):
            e = np.zeros(2, dtype=complex)
            e[j] = h
            jac[:, j] = (chart.forward(z + e) - chart.forward(z - e)) / (2 * h)
        lhs = abs(np.linalg.det(jac)) ** 2
        rhs = abs(dom.bergman_kernel(ball2, z, a, validate=False)) ** 2 / (
            k_cc * dom.kernel_diagonal(ball2, a, validate=False)
        )
        worst_fd = max(worst_fd, abs(lhs - rhs) / rhs)
    ok = worst_closed <= 1e-10 and worst_fd <= 1e-6
    _criterion(3, "Jacobian identities on 10^3 pairs",
               ok, f"closed-form residual {worst_closed:.2e} <= 1e-10, "
                   f"ball(2) FD residual {worst_fd:.2e} <= 1e-6")


def test_c04_kernel_comparability(disk):
    limit = (1.0 + RHO) ** 2
    sups = [fn.estimate_constants(disk, 1.0, delta=d).c_upper
            for d in (0.05, 0.02, 0.01, 0.005, 0.002)]
    at_001 = sups[2]
    in_bracket = 2.40 <= at_001 <= 2.5884 + 1e-3
    monotone = all(a < b for a, b in zip(sups, sups[1:])) and all(s <= limit + 1e-3 for s in sups)
    _criterion(4, "kernel comparability sup at r=1, delta=0.01",
               in_bracket and monotone,
               f"sup {at_001:.5f} in [2.40, 2.5894], monotone toward {limit:.5f}")


def test_c05_kernel_ball_volume_spot(disk):
    val = dom.kernel_diagonal(disk, 0.5) * dom.metric_ball_volume(disk, 0.5, 1.0, resolution=16)
    closed = dom.kernel_diagonal(disk, 0.5) * dom.disk_metric_ball_volume(0.5, 1.0)
    ok = abs(val - 0.45031) <= 1e-3 and abs(val - closed) <= 1e-10
    _criterion(5, "|k_a(a)|^2 Vol(B(a,1)) spot value at a=0.5",
               ok, f"value {val:.6f} = 0.45031 +- 1e-3")


def test_c06_pointwise_domination(disk, disk_catalog):
    consts = fn.estimate_constants(disk, 1.0, delta=0.01)
    pts = sample_euclidean_interior(disk, 50, seed=37, stream=3, margin=0.01)
    worst = -math.inf
    for name, mu in disk_catalog.items():
        margin = fn.check_pointwise_domination(mu, disk, 1.0, consts.domination_constant, pts)
        worst = max(worst, margin)
    _criterion(6, "pointwise domination mu^ <= K_r mu~ on the catalog at 50 points",
               worst <= 1e-6, f"worst margin {worst:.3e} <= 1e-6 "
                              f"(K_r = {consts.domination_constant:.2f})")


def test_c07_lattice_certificate(disk, lattice_001):
    cert1 = lat.certify_lattice(disk, lattice_001, 100_000, seed=41)
    cert2 = lat.certify_lattice(disk, lattice_001, 200_000, seed=41)
    ok = (cert1.passed and cert1.coverage_max <= 1.0 and cert1.min_separation > 0.5
          and abs(cert2.multiplicity - cert1.multiplicity) <= 1)
    _criterion(7, "lattice certificate (disk, r=1, delta=0.01, 10^5 samples)",
               ok, f"coverage {cert1.coverage_max:.4f} <= 1, separation "
                   f"{cert1.min_separation:.4f} > 0.5, N = {cert1.multiplicity} "
                   f"(stable: {cert2.multiplicity})")


def test_c08_berezin_identity(disk, disk_catalog):
    basis = toe.build_basis(disk, 20)
    pts = sample_euclidean_interior(disk, 50, seed=43, stream=4, margin=0.32)
    worst = 0.0
    used = 0
    for name in ("constant_3", "power_vanishing_1", "power_vanishing_05"):
        mu = disk_catalog[name]
        rule = mea.adapted_rule(disk, mu, 32)
        trunc = toe.toeplitz_matrix(mu, basis, rule)
        for z in pts:
            _, capture = toe.kz_coefficients(basis, z)
            if capture < 0.999:
                continue
            used += 1
            lhs = toe.berezin_of_operator(mu, disk, basis, z, truncation=trunc)
            worst = max(worst, abs(lhs - fn.berezin_pullback(mu, disk, z)))
    ok = worst <= 1e-3 and used >= 150
    _criterion(8, "Berezin identity <T k_z, k_z> = mu~(z) for 3 densities x 50 points",
               ok, f"max deviation {worst:.2e} <= 1e-3 ({used} capture-filtered points)")


def test_c09_lebesgue_fixed_points(disk, disk_rule):
    leb = mea.lebesgue()
    pts = sample_euclidean_interior(disk, 25, seed=47, stream=5, margin=0.15)
    worst_bz = max(abs(fn.berezin_transform(leb, disk, z, disk_rule) - 1.0) for z in pts)
    worst_av = max(abs(fn.averaging_function(leb, disk, z, 1.0) - 1.0) for z in pts)
    basis = toe.build_basis(disk, 20)
    trunc = toe.toeplitz_matrix(leb, basis, disk_rule)
    worst_id = float(np.max(np.abs(trunc.matrix - np.eye(len(basis)))))
    ok = worst_bz <= 1e-6 and worst_av <= 1e-6 and worst_id <= 1e-8
    _criterion(9, "Lebesgue fixed points (mu~ = mu^ = 1, truncation = identity)",
               ok, f"|mu~-1| {worst_bz:.1e} <= 1e-6, |mu^-1| {worst_av:.1e} <= 1e-6, "
                   f"|T-I| {worst_id:.1e} <= 1e-8")


def test_c10_equivalence_verdicts(tmp_path):
    config = cli.load_config(None, {"out": str(tmp_path / "equiv"), "seed": 0})
    report = cli.cmd_equivalence_report(config)
    agree = all(s["passed"] for s in report["suites"])
    expected_bounded = {
        "lebesgue": True, "constant_3": True, "power_vanishing_1": True,
        "power_vanishing_05": True, "atomic_1": True, "atomic_3": True,
        "power_blowup_05": False,
    }
    expected_compact = {
        "lebesgue": False, "constant_3": False, "power_vanishing_1": True,
        "power_vanishing_05": True, "atomic_1": True, "atomic_3": True,
        "power_blowup_05": False,
    }
    verdicts_ok = True
    for name in expected_bounded:
        diag = report["results"][name]
        bounded = all(diag["bounded"].values())
        compact = all(diag["compact"].values())
        if bounded != expected_bounded[name] or compact != expected_compact[name]:
            verdicts_ok = False
    _criterion(10, "equivalence verdicts agree 4-way per measure with expected signs",
               agree and verdicts_ok,
               f"agreement={agree}, expected verdicts matched={verdicts_ok}")


def test_c11_compactness_profiles(disk, disk_catalog):
    _, tails = toe.compactness_profile(mea.power_vanishing(1.0), disk, 40,
                                       cutoffs=[0, 5, 10, 20, 40])
    worst_rel = max(abs(v - 1.0 / (d + 2)) * (d + 2) for d, v in tails.items())
    trunc, _ = toe.compactness_profile(disk_catalog["atomic_3"], disk, 20)
    svals = np.linalg.svd(trunc.matrix, compute_uv=False)
    rank_ok = toe.numerical_rank(trunc.matrix, 1e-8) == 3 and np.all(svals[3:] < 1e-8)
    _criterion(11, "compactness profiles: PV(1) tails = 1/(d+2), atomic rank = atoms",
               worst_rel <= 0.01 and rank_ok,
               f"tail relative error {worst_rel:.2e} <= 1e-2, rank 3 with trailing "
               f"sv {svals[3]:.1e} < 1e-8")


def test_c12_positive_bergman_stability(disk):
    start = time.time()
    polar = toe.positive_bergman_norm_estimate(disk, resolution=20, margin=0.05, scheme="polar")
    graded = toe.positive_bergman_norm_estimate(disk, resolution=16, margin=0.05, scheme="graded")
    elapsed = time.time() - start
    cross = abs(polar.value - graded.value) / max(polar.value, graded.value)
    ok = (polar.refinement_delta <= 0.05 and graded.refinement_delta <= 0.05
          and cross <= 0.05 and elapsed <= 120.0)
    _criterion(12, "positive Bergman operator estimate stable within 5%",
               ok, f"refinement deltas {polar.refinement_delta:.3f}/"
                   f"{graded.refinement_delta:.3f}, cross-scheme {cross:.3f}, "
                   f"runtime {elapsed:.1f}s <= 120s")


def test_c13_weak_convergence(disk):
    ident = lambda pts: pts[..., 0]
    s = np.concatenate([np.linspace(0.5, 0.98, 25), [0.99, 0.995, 0.999]])
    prof = fn.boundary_weak_convergence_check(disk, ident, 1.0, s_values=s)
    i99 = int(np.argmin(np.abs(s - 0.99)))
    target = 0.99 * math.sqrt(math.pi) * (1 - 0.99 ** 2)
    spot_ok = abs(prof.values[i99] - target) <= 1e-6
    tail = prof.values[s >= 0.8]
    monotone = bool(np.all(np.diff(tail) < 0))
    _criterion(13, "weak convergence profile of f(z) = z",
               spot_ok and monotone,
               f"value at s=0.99 is {prof.values[i99]:.6f} = {target:.6f} +- 1e-6, "
               f"monotone decreasing for s >= 0.8")
