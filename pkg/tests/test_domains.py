import math

import numpy as np
import pytest

from bergspace import domains as dom
from bergspace import measures as mea

from conftest import interior_sample

SQRT2 = math.sqrt(2.0)


def test_domain_volumes(disk, ball2, bidisk):
    assert disk.volume == pytest.approx(math.pi, abs=0)
    assert ball2.volume == pytest.approx(math.pi ** 2 / 2)
    assert bidisk.volume == pytest.approx(math.pi ** 2)
    assert dom.unit_ball(3).volume == pytest.approx(math.pi ** 3 / 6)


def test_domain_from_name():
    assert dom.domain_from_name("disk").kind == "disk"
    assert dom.domain_from_name("bidisk") == dom.polydisk(2)
    assert dom.domain_from_name("ball2") == dom.unit_ball(2)
    assert dom.domain_from_name("polydisk3") == dom.polydisk(3)
    with pytest.raises(ValueError):
        dom.domain_from_name("frisbee")


def test_kernel_center_values(disk, ball2, bidisk):
    # K(z, center) = 1/Vol by minimality
    assert dom.bergman_kernel(disk, 0.3, 0.0) == pytest.approx(1 / math.pi, rel=1e-14)
    assert dom.bergman_kernel(disk, 0.5, 0.5) == pytest.approx(1 / (math.pi * 0.5625), rel=1e-14)
    assert dom.bergman_kernel(bidisk, [0, 0], [0, 0]) == pytest.approx(1 / math.pi ** 2, rel=1e-14)
    assert dom.bergman_kernel(ball2, [0, 0], [0, 0]) == pytest.approx(2 / math.pi ** 2, rel=1e-14)


def test_minimality_and_positivity(disk, ball2, bidisk):
    for domain in (disk, ball2, bidisk):
        pts = interior_sample(domain, 1000, seed=1, margin=1e-3)
        vals = dom.bergman_kernel(domain, pts, domain.center, validate=False)
        assert np.max(np.abs(vals * domain.volume - 1.0)) < 1e-12
        diag = np.asarray(dom.kernel_diagonal(domain, pts, validate=False))
        assert np.all(diag >= (1.0 / domain.volume) * (1 - 1e-12))


def test_hermitian_symmetry_machine_exact(disk, ball2, bidisk):
    # FMA contraction in the complex product leaves 1-ulp asymmetry, so
    # "exact" here means a couple of ulp, not bitwise
    for domain in (disk, ball2, bidisk):
        z = interior_sample(domain, 50, seed=2)
        w = interior_sample(domain, 50, seed=3)
        kzw = np.asarray(dom.bergman_kernel(domain, z, w, validate=False))
        kwz = np.asarray(dom.bergman_kernel(domain, w, z, validate=False))
        rel = np.max(np.abs(kzw - np.conj(kwz)) / np.abs(kzw))
        assert rel < 1e-15


def test_membership_errors(disk, ball2):
    with pytest.raises(dom.DomainMembershipError):
        dom.bergman_kernel(disk, 1.2, 0.0)
    with pytest.raises(dom.DomainMembershipError):
        dom.bergman_kernel(disk, 0.3, 1.0)  # boundary is outside (strict)
    with pytest.raises(dom.DomainMembershipError):
        dom.kernel_diagonal(ball2, [0.8, 0.7])


def test_reproducing_property_quadrature(disk, disk_rule):
    # oracle for the kernel closed form: integral of K(z, w) f(w) dV = f(z)
    def f(pts):
        w = pts[..., 0]
        return 1.5 + (0.3 - 0.2j) * w + 0.25j * w ** 3 + 0.1 * w ** 10

    for z in (0.0, 0.4 + 0.3j, -0.7, 0.2 - 0.6j):
        kern = dom.bergman_kernel(disk, z, disk_rule.points, validate=False)
        val = np.sum(disk_rule.weights * kern * f(disk_rule.points))
        assert abs(val - f(np.array([[z]]))[0]) < 1e-10


def test_normalized_kernel(disk, disk_rule):
    # k_a(a) = sqrt(K(a,a)); unit L2 norm via the reproducing-property oracle
    assert dom.normalized_kernel(disk, 0.0, 0.3) == pytest.approx(1 / math.sqrt(math.pi))
    assert dom.normalized_kernel(disk, 0.5, 0.5) == pytest.approx(
        math.sqrt(dom.kernel_diagonal(disk, 0.5))
    )
    a = 0.7
    vals = dom.normalized_kernel(disk, a, disk_rule.points, validate=False)
    norm = np.sum(disk_rule.weights * np.abs(vals) ** 2)
    assert norm == pytest.approx(1.0, abs=1e-8)


def test_distance_closed_forms(disk, ball2, bidisk):
    assert dom.bergman_distance(disk, 0.0, 0.5) == pytest.approx(SQRT2 * math.atanh(0.5), rel=1e-14)
    assert dom.bergman_distance(disk, 0.3 + 0.2j, 0.3 + 0.2j) == 0.0
    assert dom.bergman_distance(ball2, [0, 0], [0.5, 0]) == pytest.approx(
        math.sqrt(3) * math.atanh(0.5), rel=1e-14
    )
    # product metric: sqrt of the sum of squared per-factor disk distances
    d1 = dom.bergman_distance(disk, 0.2, 0.5)
    d2 = dom.bergman_distance(disk, -0.1j, 0.3)
    d = dom.bergman_distance(bidisk, [0.2, -0.1j], [0.5, 0.3])
    assert d == pytest.approx(math.hypot(d1, d2), rel=1e-14)


def test_distance_metric_normalization_oracle(disk, ball2):
    # independent oracle: integrate the line element sqrt(Hess log K) along
    # the radial segment and compare with the closed form
    for domain, target in ((disk, 0.6), (ball2, 0.6)):
        s_grid = np.linspace(0.0, target, 4001)
        h = 1e-5

        # numerical line integral of sqrt(g_rr), g_rr from the FD complex
        # Hessian of log K (the metric's defining normalization)
        def g_rr(s):
            e = np.zeros(domain.dim, complex)
            e[0] = 1.0
            pts = np.stack([s * e + d for d in (h * e, -h * e, 1j * h * e, -1j * h * e, 0 * e)])
            lk = np.log(np.asarray(dom.kernel_diagonal(domain, pts, validate=False)))
            lap = (lk[0] + lk[1] + lk[2] + lk[3] - 4 * lk[4]) / h ** 2
            return lap / 4.0  # d/dz d/dzbar of log K

        speeds = np.array([math.sqrt(g_rr(s)) for s in s_grid])
        length = np.trapezoid(speeds, s_grid)
        closed = dom.bergman_distance(domain, domain.center, target * np.eye(domain.dim, 1).ravel())
        assert length == pytest.approx(closed, rel=1e-6)


def test_distance_invariance_under_automorphism(disk, bidisk, ball2):
    chart = dom.automorphism(disk, 0.4)
    z, w = np.array([0.1 + 0j]), np.array([0.3 + 0.2j])
    lhs = dom.bergman_distance(disk, chart.forward(z), chart.forward(w), validate=False)
    assert lhs == pytest.approx(dom.bergman_distance(disk, z, w), abs=1e-10)
    for domain, base in ((bidisk, [0.4, -0.2 + 0.1j]), (ball2, [0.3, 0.2j])):
        chart = dom.automorphism(domain, np.asarray(base, complex))
        z = interior_sample(domain, 5, seed=4, margin=0.2)
        w = interior_sample(domain, 5, seed=5, margin=0.2)
        lhs = np.asarray(dom.bergman_distance(domain, chart.forward(z), chart.forward(w), validate=False))
        rhs = np.asarray(dom.bergman_distance(domain, z, w, validate=False))
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_distance_axioms_random_triples(disk, ball2, bidisk):
    for domain in (disk, ball2, bidisk):
        pts = interior_sample(domain, 300, seed=6)
        a, b, c = pts[:100], pts[100:200], pts[200:]
        dab = np.asarray(dom.bergman_distance(domain, a, b, validate=False))
        dba = np.asarray(dom.bergman_distance(domain, b, a, validate=False))
        dac = np.asarray(dom.bergman_distance(domain, a, c, validate=False))
        dcb = np.asarray(dom.bergman_distance(domain, c, b, validate=False))
        assert np.max(np.abs(dab - dba)) < 1e-12
        assert np.all(dab >= 0)
        assert np.max(dab - (dac + dcb)) < 1e-10


def test_disk_metric_ball_closed_form():
    rho = math.tanh(1.0 / SQRT2)
    assert dom.disk_metric_ball_volume(0.0, 1.0) == pytest.approx(math.pi * rho ** 2, rel=1e-14)
    center, radius = dom.disk_metric_ball(0.5, 1.0)
    assert radius == pytest.approx(rho * 0.75 / (1 - rho ** 2 * 0.25), rel=1e-14)
    # every boundary point of the euclidean disk is at metric distance 1
    angles = np.linspace(0, 2 * math.pi, 17)
    edge = center + radius * np.exp(1j * angles)
    d = np.asarray(dom.bergman_distance(dom.unit_disk(), 0.5, edge[:, None], validate=False))
    assert np.max(np.abs(d - 1.0)) < 1e-12


def test_metric_ball_volume_quadrature(disk, bidisk):
    got = dom.metric_ball_volume(disk, 0.0, 1.0, resolution=16)
    assert got == pytest.approx(dom.disk_metric_ball_volume(0.0, 1.0), rel=1e-12)
    got = dom.metric_ball_volume(disk, 0.5, 1.0, resolution=16)
    assert got == pytest.approx(dom.disk_metric_ball_volume(0.5, 1.0), rel=1e-12)
    # frozen from an independent adaptive quadrature of the radial profile
    got = dom.metric_ball_volume(bidisk, [0.0, 0.0], 1.0, resolution=16)
    assert got == pytest.approx(0.8150641644525257, rel=1e-10)


def test_metric_ball_volume_exhaustion(disk):
    assert dom.metric_ball_volume(disk, 0.0, 20.0, resolution=16) == pytest.approx(
        math.pi, abs=1e-6
    )


def test_metric_ball_volume_refinement_warning(disk):
    with pytest.warns(dom.QuadratureRefinementWarning):
        dom.metric_ball_volume(disk, 0.97, 3.0, resolution=4)


def test_metric_ball_volume_indicator_cross_check(ball2):
    # indicator quadrature on a whole-domain rule is the independent route
    a = np.array([0.4 + 0.1j, -0.2 + 0.3j])
    vol = dom.metric_ball_volume(ball2, a, 1.0, resolution=12)
    rule = mea.build_quadrature(ball2, 24)
    d = np.asarray(dom.bergman_distance(ball2, a, rule.points, validate=False))
    indicator = float(np.sum(rule.weights[d <= 1.0]))
    assert vol == pytest.approx(indicator, rel=5e-3)


def test_automorphism_disk(disk):
    chart = dom.automorphism(disk, 0.5)
    assert chart.forward(np.array([0.5 + 0j]))[0] == pytest.approx(0.0, abs=1e-15)
    assert abs(complex(chart.jacobian_det(np.array([0.0 + 0j])))) ** 2 == pytest.approx(0.5625)
    z = np.array([0.2 - 0.3j])
    assert chart.inverse(chart.forward(z))[0] == pytest.approx(z[0], abs=1e-12)
    chain = complex(chart.jacobian_det(chart.inverse(z)) * chart.jacobian_det(z))
    assert chain == pytest.approx(1.0, abs=1e-12)


def test_automorphism_ball_matches_finite_differences(ball2):
    a = np.array([0.3 + 0.2j, -0.1 + 0.4j])
    chart = dom.automorphism(ball2, a)
    assert np.allclose(chart.forward(a), 0.0, atol=1e-14)
    z = np.array([0.1 - 0.2j, 0.3 + 0.1j])
    assert np.allclose(chart.forward(chart.forward(z)), z, atol=1e-12)
    h = 1e-6
    jac = np.zeros((2, 2), dtype=complex)
    for j in range(2):
        e = np.zeros(2, dtype=complex)
        e[j] = h
        jac[:, j] = (chart.forward(z + e) - chart.forward(z - e)) / (2 * h)
    assert np.linalg.det(jac) == pytest.approx(chart.jacobian_det(z), rel=1e-8)


def test_jacobian_identity_residuals(disk, ball2, bidisk):
    for domain in (disk, ball2, bidisk):
        pts = interior_sample(domain, 200, seed=7)
        worst = 0.0
        for a, z in zip(pts[:100], pts[100:]):
            r1, r2 = dom.verify_jacobian_identity(domain, a, z)
            worst = max(worst, r1, r2)
        assert worst < 1e-10


def test_jacobian_identity_at_center(disk):
    # a = center: the chart is a unitary twist, |det J| = 1
    r1, r2 = dom.verify_jacobian_identity(disk, 0.0, 0.3 + 0.1j)
    assert r1 < 1e-12 and r2 < 1e-12
    chart = dom.automorphism(disk, 0.0)
    assert abs(complex(chart.jacobian_det(np.array([0.2 + 0j])))) == pytest.approx(1.0)


def test_boundary_distance(disk, ball2, bidisk):
    assert dom.boundary_distance(disk, 0.25) == pytest.approx(0.75)
    assert dom.boundary_distance(ball2, [0.6, 0.0]) == pytest.approx(0.4)
    assert dom.boundary_distance(bidisk, [0.9, 0.5]) == pytest.approx(0.1, rel=1e-12)
    assert dom.contains(disk, 0.999) and not dom.contains(disk, 1.0)


def test_point_type(disk):
    p = dom.Point((0.3 + 0.1j,))
    assert len(p) == 1
    assert dom.bergman_kernel(disk, p, dom.Point((0.0,))) == pytest.approx(1 / math.pi)
