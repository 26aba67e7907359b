"""Bergman-metric covering lattices and their certificates.

A lattice is a maximal (r/2)-separated node set over the truncated domain
{boundary_distance >= delta}, produced by a greedy first-alive sweep over
a candidate set in a fixed order.  Maximal separation gives the three
covering properties checked by :func:`certify_lattice`:

* (S1') every certification sample point lies within distance r of a node,
* (S2)  distinct nodes are more than r/2 apart,
* (S3)  no sample point lies in more than N of the balls B(w_j, 2r).

On the disk the candidate set is a hyperbolically graded polar grid swept
in lexicographic (shell, angle) order.  On the ball and the polydisk a
structured grid at covering density is not desk-feasible near the
boundary, so candidates are a hyperbolic-volume-uniform sample drawn from
a fixed counter-based stream; the sweep order is the sample order, which
is just as deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import DomainModel
from .sampling import STREAM_LATTICE_CERT, sample_interior

__all__ = ["LatticeBuildError", "Lattice", "LatticeCertificate", "build_lattice", "certify_lattice", "lattice_table"]

DEFAULT_CANDIDATE_BUDGET = 3_000_000


class LatticeBuildError(ValueError):
    """The lattice candidate grid cannot support the requested build."""


@dataclass(frozen=True)
class Lattice:
    """Covering node set with radius r, boundary margin delta and bound N."""

    domain: DomainModel
    radius: float
    delta: float
    nodes: np.ndarray            # (m, n) complex, insertion order
    multiplicity: int            # certified N from the build-time sample
    build_sample_count: int

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class LatticeCertificate:
    passed: bool
    coverage_max: float          # max over samples of distance to nearest node
    min_separation: float        # min pairwise node distance
    multiplicity: int            # max count of nodes within 2r of a sample
    sample_count: int
    seed: int
    failures: tuple
    witness: tuple | None        # (condition, point) for the first failure


def _disk_candidates(r: float, delta: float, spacing: float) -> np.ndarray:
    """Polar grid with beta-spacing ``spacing``, lexicographic in (shell, angle)."""
    s_max = 1.0 - delta
    beta_max = math.sqrt(2.0) * math.atanh(s_max)
    shells = np.arange(0.0, beta_max + spacing, spacing)
    shells[-1] = beta_max
    pts = [np.zeros(1, dtype=complex)]
    for b in shells[1:]:
        s = math.tanh(b / math.sqrt(2.0))
        m = max(6, int(math.ceil(2.0 * math.pi * s * math.sqrt(2.0) / ((1.0 - s * s) * spacing))))
        angles = 2.0 * math.pi * np.arange(m) / m
        pts.append(s * np.exp(1j * angles))
    return np.concatenate(pts)[:, None]


def _candidate_count_estimate(domain: DomainModel, delta: float, spacing: float) -> int:
    # hyperbolic volume of the truncated domain over the spacing cell volume
    n = domain.dim
    s_max = 1.0 - delta
    if domain.kind == "ball":
        grid = np.linspace(0.0, s_max, 8192)
        dens = grid ** (2 * n - 1) / (1.0 - grid ** 2) ** (n + 1)
        vol = (n + 1) ** n * 2.0 * math.pi ** n / math.factorial(n - 1) * np.trapezoid(dens, grid)
    else:
        per_factor = 2.0 * math.pi * (1.0 / (1.0 - s_max ** 2) - 1.0)
        vol = per_factor ** n
    return int(math.ceil(8.0 * vol / spacing ** (2 * n)))


def _within(domain: DomainModel, node: np.ndarray, pts: np.ndarray, threshold: float) -> np.ndarray:
    """Mask of beta(node, pts) <= threshold, transcendental-free where possible."""
    if domain.kind == "disk":
        th = math.tanh(threshold / math.sqrt(2.0))
        num = np.abs(pts[:, 0] - node[0])
        den = np.abs(1.0 - np.conj(node[0]) * pts[:, 0])
        return num <= th * den
    if domain.kind == "ball":
        th2 = math.tanh(threshold / domain.metric_scale) ** 2
        inner = pts @ np.conj(node)
        nz = 1.0 - float(np.sum(np.abs(node) ** 2))
        nw = 1.0 - np.sum(np.abs(pts) ** 2, axis=1)
        return nz * nw >= (1.0 - th2) * np.abs(1.0 - inner) ** 2
    d = np.abs(pts - node) / np.abs(1.0 - np.conj(node) * pts)
    beta2 = 2.0 * np.sum(np.arctanh(np.minimum(d, 1.0 - 1e-15)) ** 2, axis=1)
    return beta2 <= threshold ** 2


def _separated_subset(domain: DomainModel, candidates: np.ndarray, threshold: float) -> np.ndarray:
    """Greedy first-alive sweep: keep a candidate iff it is > threshold from
    all previously kept ones; equivalently, kill everything within threshold
    of each newly kept node."""
    alive = np.ones(len(candidates), dtype=bool)
    kept = []
    # inclusive tolerance so exact grid ties are killed and survivors are
    # strictly separated
    kill = threshold * (1.0 + 1e-9)
    for ptr in range(len(candidates)):
        if not alive[ptr]:
            continue
        node = candidates[ptr]
        kept.append(node)
        alive[ptr:] &= ~_within(domain, node, candidates[ptr:], kill)
    return np.asarray(kept)


def build_lattice(
    domain: DomainModel,
    r: float,
    delta: float,
    spacing: float | None = None,
    candidate_budget: int = DEFAULT_CANDIDATE_BUDGET,
    build_sample_count: int = 20_000,
    seed: int = 0,
) -> Lattice:
    """Greedy maximal (r/2)-separated lattice over {boundary_distance >= delta}.

    ``spacing`` is the candidate-grid density in metric units; it must not
    exceed r/4 or the grid is too coarse to guarantee r-coverage of what
    the greedy sweep leaves behind.
    """
    if r <= 0:
        raise ValueError("lattice radius must be positive")
    if not 0.0 < delta < 1.0:
        raise ValueError("boundary margin delta must lie in (0, 1)")
    if spacing is None:
        spacing = r / 4.0
    if spacing > r / 4.0 + 1e-12:
        raise LatticeBuildError(
            f"candidate spacing {spacing:.4g} is too coarse for radius {r:.4g}; "
            f"need spacing <= r/4 = {r / 4.0:.4g} to certify coverage"
        )
    if domain.kind == "disk":
        candidates = _disk_candidates(r, delta, spacing)
        if len(candidates) > candidate_budget:
            raise LatticeBuildError(
                f"candidate grid needs {len(candidates)} points, over the budget "
                f"{candidate_budget}; increase r or delta, or raise the budget"
            )
    else:
        count = _candidate_count_estimate(domain, delta, spacing)
        if count > candidate_budget:
            raise LatticeBuildError(
                f"candidate sample needs ~{count} points, over the budget "
                f"{candidate_budget}; increase r or delta, or raise the budget"
            )
        candidates = sample_interior(domain, count, seed, STREAM_LATTICE_CERT + 7, margin=delta)
    nodes = _separated_subset(domain, candidates, r / 2.0)
    lat = Lattice(
        domain=domain,
        radius=float(r),
        delta=float(delta),
        nodes=nodes,
        multiplicity=0,
        build_sample_count=build_sample_count,
    )
    cert = certify_lattice(domain, lat, build_sample_count, seed=seed)
    return Lattice(
        domain=domain,
        radius=float(r),
        delta=float(delta),
        nodes=nodes,
        multiplicity=cert.multiplicity,
        build_sample_count=build_sample_count,
    )


def _surrogate_matrix(domain: DomainModel, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Monotone stand-in for beta between point sets: pseudohyperbolic
    distance for disk/ball, beta^2 for polydisk."""
    if domain.kind == "disk":
        z = a[:, None, 0]
        w = b[None, :, 0]
        return np.abs(z - w) / np.abs(1.0 - np.conj(z) * w)
    if domain.kind == "ball":
        inner = a @ np.conj(b.T)
        na = 1.0 - np.sum(np.abs(a) ** 2, axis=1)
        nb = 1.0 - np.sum(np.abs(b) ** 2, axis=1)
        d2 = 1.0 - na[:, None] * nb[None, :] / np.abs(1.0 - inner) ** 2
        return np.sqrt(np.clip(d2, 0.0, 1.0))
    d = np.abs(a[:, None, :] - b[None, :, :]) / np.abs(1.0 - np.conj(a[:, None, :]) * b[None, :, :])
    return 2.0 * np.sum(np.arctanh(np.minimum(d, 1.0 - 1e-15)) ** 2, axis=-1)


def _beta_from_surrogate(domain: DomainModel, s: float) -> float:
    if domain.kind == "polydisk":
        return math.sqrt(max(s, 0.0))
    return domain.metric_scale * math.atanh(min(s, 1.0 - 1e-15))


def _surrogate_from_beta(domain: DomainModel, beta: float) -> float:
    if domain.kind == "polydisk":
        return beta ** 2
    return math.tanh(beta / domain.metric_scale)


def certify_lattice(
    domain: DomainModel,
    lattice: Lattice,
    sample_count: int,
    seed: int = 0,
    chunk: int = 2048,
) -> LatticeCertificate:
    """Exhaustively check (S1'), (S2), (S3) on a fresh certification sample."""
    if domain != lattice.domain:
        raise ValueError("lattice was built on a different domain")
    nodes = lattice.nodes
    r = lattice.radius
    samples = sample_interior(
        domain, sample_count, seed, STREAM_LATTICE_CERT, margin=lattice.delta
    )
    two_r = _surrogate_from_beta(domain, 2.0 * r)

    cover_sur = 0.0
    coverage_witness = None
    multiplicity = 0
    mult_witness = None
    for lo in range(0, sample_count, chunk):
        block = samples[lo : lo + chunk]
        d = _surrogate_matrix(domain, block, nodes)
        nearest = d.min(axis=1)
        i = int(np.argmax(nearest))
        if nearest[i] > cover_sur:
            cover_sur = float(nearest[i])
            coverage_witness = block[i]
        counts = (d <= two_r).sum(axis=1)
        j = int(np.argmax(counts))
        if counts[j] > multiplicity:
            multiplicity = int(counts[j])
            mult_witness = block[j]
    coverage_max = _beta_from_surrogate(domain, cover_sur)

    sep_sur = math.inf
    sep_witness = None
    for lo in range(0, len(nodes), chunk):
        block = nodes[lo : lo + chunk]
        d = _surrogate_matrix(domain, block, nodes)
        iu = np.arange(lo, lo + len(block))
        d[np.arange(len(block)), iu] = math.inf  # mask self-distances
        k = int(np.argmin(d))
        if d.flat[k] < sep_sur:
            sep_sur = float(d.flat[k])
            sep_witness = block[k // d.shape[1]]
    min_sep = _beta_from_surrogate(domain, sep_sur) if len(nodes) > 1 else math.inf

    failures = []
    witness = None
    if coverage_max > r:
        failures.append(f"(S1') coverage radius {coverage_max:.4f} exceeds r = {r}")
        witness = witness or ("S1", coverage_witness)
    if len(nodes) > 1 and min_sep <= r / 2.0:
        failures.append(f"(S2) node separation {min_sep:.4f} is not above r/2 = {r / 2.0}")
        witness = witness or ("S2", sep_witness)
    if multiplicity < 1:
        failures.append("(S3) no sample point is covered at all")
        witness = witness or ("S3", mult_witness)
    return LatticeCertificate(
        passed=not failures,
        coverage_max=coverage_max,
        min_separation=float(min_sep),
        multiplicity=multiplicity,
        sample_count=sample_count,
        seed=seed,
        failures=tuple(failures),
        witness=witness,
    )


def lattice_table(lattice: Lattice) -> list[list]:
    """Rows for CSV export: one node per row, coordinates interleaved re/im."""
    rows = []
    for j, node in enumerate(lattice.nodes):
        row = [j]
        for c in node:
            row.extend([float(np.real(c)), float(np.imag(c))])
        rows.append(row)
    return rows
