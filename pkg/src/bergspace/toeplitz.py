"""Finite-dimensional Toeplitz realizations and operator diagnostics.

Truncations are taken in the normalized monomial basis e_alpha = c_alpha
z^alpha, ordered by total degree then lexicographically, with closed-form
normalization constants.  The truncated matrix of the operator with
symbol mu has entries

    M[j, k] = integral of e_k(w) conj(e_j(w)) dmu(w),

assembled column-by-column so a given entry's floating-point value does
not depend on the truncation size: nested truncations agree exactly.

Also here: the discretized positive Bergman operator (kernel |K(z, w)|)
whose dominant singular value is estimated by power iteration.  The
symbol's kernel is not square-integrable up to the boundary, so the node
set is truncated at a fixed boundary margin; the margin is part of the
reported estimate and the restricted estimate grows monotonically as the
margin shrinks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .domains import (
    DomainModel,
    bergman_kernel,
    boundary_distance,
    kernel_diagonal,
    require_interior,
)
from .measures import (
    Measure,
    QuadratureRule,
    adapted_rule,
    build_quadrature,
    QuadratureResolutionError,
)

__all__ = [
    "CaptureWarning",
    "PowerIterationError",
    "BasisSpec",
    "ToeplitzTruncation",
    "PositiveBergmanEstimate",
    "build_basis",
    "evaluate_basis",
    "toeplitz_matrix",
    "operator_norm_profile",
    "compactness_profile",
    "numerical_rank",
    "kz_coefficients",
    "berezin_of_operator",
    "positive_bergman_norm_estimate",
    "matrix_csv_rows",
    "spectrum_report",
]


class CaptureWarning(UserWarning):
    """The truncated expansion of k_z captures too little of its norm."""


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge within the iteration cap."""


def _multi_indices(domain: DomainModel, max_degree: int) -> list[tuple]:
    """Multi-indices of the truncation, by total degree then lex.

    Disk and ball truncate at total degree |alpha| <= max_degree; the
    polydisk uses the tensor box alpha_i <= max_degree per factor.
    """
    n = domain.dim
    if domain.kind == "polydisk":
        level = [()]
        for _ in range(n):
            level = [t + (k,) for t in level for k in range(max_degree + 1)]
        return sorted(level, key=lambda a: (sum(a), a))
    out = []
    for total in range(max_degree + 1):
        level = [()]
        for _ in range(n):
            level = [t + (k,) for t in level for k in range(total - sum(t) + 1)]
        out.extend(sorted(a for a in level if sum(a) == total))
    return out


@dataclass(frozen=True)
class BasisSpec:
    """Orthonormal monomial basis of the Bergman space up to a degree."""

    domain: DomainModel
    max_degree: int
    indices: tuple              # multi-index tuples, degree-then-lex order
    norms: np.ndarray           # c_alpha, unit L^2(dV) normalization
    degrees: np.ndarray         # total degree per basis element
    gram_defect: float = 0.0

    def __len__(self):
        return len(self.indices)


def _norm_constant(domain: DomainModel, alpha: tuple) -> float:
    n = domain.dim
    if domain.kind == "ball":
        num = math.factorial(n + sum(alpha))
        den = math.pi ** n
        for k in alpha:
            den *= math.factorial(k)
        return math.sqrt(num / den)
    c = 1.0
    for k in alpha:
        c *= (k + 1) / math.pi
    return math.sqrt(c)


def evaluate_basis(basis: BasisSpec, pts: np.ndarray) -> np.ndarray:
    """Matrix of basis values, shape (len(pts), len(basis))."""
    pts = np.atleast_2d(pts)
    out = np.empty((len(pts), len(basis)), dtype=complex)
    for j, alpha in enumerate(basis.indices):
        col = np.full(len(pts), basis.norms[j], dtype=complex)
        for i, k in enumerate(alpha):
            if k:
                col = col * pts[:, i] ** k
        out[:, j] = col
    return out


def build_basis(
    domain: DomainModel,
    max_degree: int,
    rule: QuadratureRule | None = None,
    gram_tol: float = 1e-6,
) -> BasisSpec:
    """Basis with its Gram identity verified against a quadrature rule."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    indices = _multi_indices(domain, max_degree)
    norms = np.array([_norm_constant(domain, a) for a in indices])
    degrees = np.array([sum(a) for a in indices])
    basis = BasisSpec(domain, max_degree, tuple(indices), norms, degrees)
    if rule is None:
        rule = build_quadrature(domain, _default_resolution(domain, max_degree))
    e = evaluate_basis(basis, rule.points)
    gram = (np.conj(e) * rule.weights[:, None]).T @ e
    defect = float(np.max(np.abs(gram - np.eye(len(basis)))))
    if defect > gram_tol:
        raise QuadratureResolutionError(
            f"basis Gram deviates from identity by {defect:.2e} > {gram_tol:.0e}; "
            "raise the quadrature resolution"
        )
    return BasisSpec(domain, max_degree, tuple(indices), norms, degrees, gram_defect=defect)


def _default_resolution(domain: DomainModel, max_degree: int) -> int:
    if domain.kind == "disk":
        return max(16, max_degree + 2)
    if domain.kind == "ball":
        return max(8, max_degree + domain.dim)
    return max(6, max_degree + 1)


@dataclass(frozen=True)
class ToeplitzTruncation:
    """Hermitian truncation of T_mu in an orthonormal monomial basis."""

    basis: BasisSpec
    matrix: np.ndarray
    hermiticity_defect: float

    @property
    def size(self) -> int:
        return len(self.basis)

    def block(self, max_degree: int) -> np.ndarray:
        keep = int(np.searchsorted(self.basis.degrees, max_degree, side="right"))
        return self.matrix[:keep, :keep]

    def tail_block(self, min_degree: int) -> np.ndarray:
        start = int(np.searchsorted(self.basis.degrees, min_degree, side="left"))
        return self.matrix[start:, start:]


def toeplitz_matrix(measure: Measure, basis: BasisSpec, rule: QuadratureRule) -> ToeplitzTruncation:
    """Truncated Toeplitz matrix of the measure in the given basis.

    Column-wise assembly keeps each entry's value independent of the
    truncation size, so nested truncations are exactly consistent.
    """
    m = len(basis)
    mat = np.zeros((m, m), dtype=complex)
    dens = measure.density_values(basis.domain, rule.points)
    if dens is not None:
        e = evaluate_basis(basis, rule.points)
        ec = np.conj(e)
        wd = rule.weights * dens
        # unoptimized einsum keeps a fixed node-summation order, so an
        # entry's value is independent of the truncation size
        for k in range(m):
            mat[:, k] += np.einsum("i,ij->j", wd * e[:, k], ec, optimize=False)
    apts, ams = measure.atom_list()
    if len(ams):
        ea = evaluate_basis(basis, apts)
        for k in range(m):
            mat[:, k] += np.einsum("i,ij->j", ams * ea[:, k], np.conj(ea), optimize=False)
    defect = float(np.max(np.abs(mat - np.conj(mat.T))))
    mat = 0.5 * (mat + np.conj(mat.T))
    return ToeplitzTruncation(basis=basis, matrix=mat, hermiticity_defect=defect)


def _spectral_norm(block: np.ndarray) -> float:
    if block.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(block))))


def operator_norm_profile(
    measure: Measure,
    domain: DomainModel,
    degrees,
    resolution: int | None = None,
) -> dict:
    """Largest singular value of nested truncations, one per degree cutoff.

    Nondecreasing in the cutoff because the truncations are nested
    Hermitian PSD blocks of a single assembly.
    """
    degrees = sorted(int(d) for d in degrees)
    if degrees != sorted(set(degrees)) or any(d < 0 for d in degrees):
        raise ValueError("degree cutoffs must be distinct, nonnegative, increasing")
    top = degrees[-1]
    basis = build_basis(domain, top)
    rule = adapted_rule(domain, measure, resolution or _default_resolution(domain, top))
    trunc = toeplitz_matrix(measure, basis, rule)
    return {d: _spectral_norm(trunc.block(d)) for d in degrees}


def compactness_profile(
    measure: Measure,
    domain: DomainModel,
    max_degree: int,
    cutoffs=None,
    resolution: int | None = None,
) -> tuple[ToeplitzTruncation, dict]:
    """Spectral norms of the tail blocks on basis elements of degree >= d.

    Compact symbols decay toward zero; bounded non-compact symbols hold a
    positive floor.
    """
    basis = build_basis(domain, max_degree)
    rule = adapted_rule(domain, measure, resolution or _default_resolution(domain, max_degree))
    trunc = toeplitz_matrix(measure, basis, rule)
    if cutoffs is None:
        cutoffs = range(max_degree + 1)
    tails = {int(d): _spectral_norm(trunc.tail_block(int(d))) for d in cutoffs}
    return trunc, tails


def numerical_rank(matrix: np.ndarray, tol: float = 1e-8) -> int:
    if matrix.size == 0:
        return 0
    svals = np.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(svals > tol))


# ---------------------------------------------------------------------------
# Berezin symbol of the truncated operator


def kz_coefficients(basis: BasisSpec, z) -> tuple[np.ndarray, float]:
    """Expansion coefficients of k_z in the basis, and the captured share
    of its unit norm."""
    zc = require_interior(basis.domain, z, "z")
    vals = evaluate_basis(basis, zc[None, :])[0]
    kzz = float(kernel_diagonal(basis.domain, zc, validate=False))
    coeffs = np.conj(vals) / math.sqrt(kzz)
    capture = float(np.sum(np.abs(coeffs) ** 2))
    return coeffs, capture


def berezin_of_operator(
    measure: Measure,
    domain: DomainModel,
    basis: BasisSpec,
    z,
    rule: QuadratureRule | None = None,
    truncation: ToeplitzTruncation | None = None,
    capture_threshold: float = 0.999,
) -> float:
    """<T_mu k_z, k_z> from the truncated matrix; converges to mu~(z).

    Warns through CaptureWarning when the truncated expansion of k_z
    captures less than ``capture_threshold`` of its norm (z too close to
    the boundary for the degree cutoff).
    """
    if truncation is None:
        if rule is None:
            rule = adapted_rule(domain, measure, _default_resolution(domain, basis.max_degree))
        truncation = toeplitz_matrix(measure, basis, rule)
    coeffs, capture = kz_coefficients(basis, z)
    if capture < capture_threshold:
        warnings.warn(
            f"k_z expansion captures only {capture:.4%} of its norm at degree "
            f"{basis.max_degree}; move z inward or raise the cutoff",
            CaptureWarning,
            stacklevel=2,
        )
    return float(np.real(np.conj(coeffs) @ truncation.matrix @ coeffs))


# ---------------------------------------------------------------------------
# discretized positive Bergman operator


@dataclass(frozen=True)
class PositiveBergmanEstimate:
    value: float
    refined_value: float
    refinement_delta: float      # relative change under one refinement step
    resolution: int
    margin: float
    scheme: str
    iterations: int


NODE_LIMIT_DENSE = 9000


def _positive_kernel_matrix(domain, rule, margin, scale):
    keep = np.asarray(boundary_distance(domain, rule.points)) >= margin
    pts = rule.points[keep]
    w = rule.weights[keep]
    if len(pts) > NODE_LIMIT_DENSE:
        raise QuadratureResolutionError(
            f"{len(pts)} nodes would need a dense {len(pts)}^2 kernel matrix; "
            "lower the resolution for this domain"
        )
    absk = np.abs(bergman_kernel(domain, pts[:, None, :], pts[None, :, :], validate=False))
    sq = np.sqrt(w)
    return scale * absk * sq[:, None] * sq[None, :], sq


def _power_iteration(mat, start, max_iter, tol):
    v = start / np.linalg.norm(start)
    lam = 0.0
    for it in range(1, max_iter + 1):
        av = mat @ v
        new = float(np.linalg.norm(av))
        if new == 0.0:
            return 0.0, it
        v = av / new
        if abs(new - lam) <= tol * max(new, 1.0):
            return new, it
        lam = new
    raise PowerIterationError(
        f"no convergence after {max_iter} iterations; last residual "
        f"{abs(new - lam):.3e} at estimate {new:.6f}"
    )


def positive_bergman_norm_estimate(
    domain: DomainModel,
    resolution: int = 20,
    margin: float = 0.05,
    scheme: str = "polar",
    scale: float = 1.0,
    max_iter: int = 500,
    tol: float = 1e-10,
    refine_factor: float = 1.5,
) -> PositiveBergmanEstimate:
    """Dominant singular value of the discretized positive Bergman kernel.

    The symmetric matrix sqrt(w_i) |K(x_i, x_j)| sqrt(w_j) is built on the
    rule's nodes with boundary_distance >= margin and its top eigenvalue
    found by power iteration; the estimate is recomputed one refinement
    step up and the relative change reported.
    """
    if scheme not in ("polar", "graded"):
        raise ValueError("scheme must be 'polar' or 'graded'")
    if margin <= 0:
        raise ValueError("a positive boundary margin is required; the kernel "
                         "is not square-integrable up to the boundary")

    def run(res):
        rule = build_quadrature(domain, res, graded=(scheme == "graded"))
        mat, sq = _positive_kernel_matrix(domain, rule, margin, scale)
        return _power_iteration(mat, sq, max_iter, tol)

    value, iters = run(resolution)
    refined, _ = run(int(math.ceil(resolution * refine_factor)))
    delta = abs(refined - value) / max(abs(refined), 1e-30)
    return PositiveBergmanEstimate(
        value=value,
        refined_value=refined,
        refinement_delta=delta,
        resolution=resolution,
        margin=margin,
        scheme=scheme,
        iterations=iters,
    )


# ---------------------------------------------------------------------------
# exports


def matrix_csv_rows(trunc: ToeplitzTruncation) -> list[list]:
    rows = []
    for j in range(trunc.size):
        for k in range(trunc.size):
            v = trunc.matrix[j, k]
            rows.append([j, k, float(np.real(v)), float(np.imag(v))])
    return rows


def spectrum_report(trunc: ToeplitzTruncation, rank_tol: float = 1e-8) -> dict:
    eigs = np.linalg.eigvalsh(trunc.matrix)
    tails = {
        int(d): _spectral_norm(trunc.tail_block(int(d)))
        for d in range(trunc.basis.max_degree + 1)
    }
    return {
        "size": trunc.size,
        "max_degree": trunc.basis.max_degree,
        "spectral_norm": float(np.max(np.abs(eigs))),
        "min_eigenvalue": float(np.min(eigs)),
        "hermiticity_defect": trunc.hermiticity_defect,
        "numerical_rank": numerical_rank(trunc.matrix, rank_tol),
        "rank_tolerance": rank_tol,
        "tail_norms": tails,
    }
