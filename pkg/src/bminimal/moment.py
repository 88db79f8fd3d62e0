"""Moment sets of subspaces relative to a subalgebra basis.

The moment of a subspace S is the convex compact image of the density
matrices supported on S under the coordinate map of the basis.  The set is
never materialized; it is exposed through three computable views: sampled
extreme points, the exact support function (a top eigenvalue of the
compressed family), and the Euclidean distance between two moments, decided
by Frank-Wolfe over the product of density-matrix spectrahedra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import SubalgebraBasis
from .errors import Undecided
from .hermitian import eig_hermitian, frobenius, min_eigpair

FRAME_TOL = 1e-10


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^n held as an n x r frame with orthonormal columns."""

    frame: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.frame, dtype=complex)
        if q.ndim != 2 or q.shape[1] < 1 or q.shape[1] > q.shape[0]:
            raise ValueError(f"expected an n x r frame with 1 <= r <= n, got {q.shape}")
        if not np.all(np.isfinite(q.real)) or not np.all(np.isfinite(q.imag)):
            raise ValueError("frame entries must be finite")
        gram = q.conj().T @ q
        if frobenius(gram - np.eye(q.shape[1])) > FRAME_TOL:
            raise ValueError("frame columns are not orthonormal")
        object.__setattr__(self, "frame", q.copy())

    @property
    def n(self) -> int:
        return self.frame.shape[0]

    @property
    def r(self) -> int:
        return self.frame.shape[1]

    @classmethod
    def from_span(cls, vectors, tol: float = 1e-10) -> "Subspace":
        """Orthonormalize spanning columns; rejects rank-deficient input."""
        v = np.atleast_2d(np.asarray(vectors, dtype=complex))
        if v.shape[0] < v.shape[1]:
            raise ValueError("more columns than ambient dimension")
        q, r = np.linalg.qr(v)
        small = np.abs(np.diag(r)) < tol * max(1.0, float(np.max(np.abs(v))))
        if np.any(small):
            raise ValueError("spanning columns are linearly dependent")
        return cls(frame=q)


@dataclass(frozen=True)
class CompressedFamily:
    """The basis elements compressed to a subspace frame: mats[k] = Q* B_k Q."""

    subspace: Subspace
    mats: np.ndarray  # (t, r, r) Hermitian stack


@dataclass(frozen=True)
class FWConfig:
    """Budget for the Frank-Wolfe feasibility solve."""

    gap_tol: float = 1e-9
    dist_tol: float = 1e-6
    max_iter: int = 20000

    def __post_init__(self):
        if self.gap_tol <= 0 or self.dist_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class FWResult:
    """Outcome of the moment-distance solve.

    ``distance`` is the Euclidean distance between the two witness images;
    it is within sqrt(2 * gap) of the true set distance.  The witnesses are
    density matrices in the coordinates of each subspace frame.
    """

    distance: float
    witness_plus: np.ndarray
    witness_minus: np.ndarray
    gap: float
    iterations: int


def compress_family(s: Subspace, basis: SubalgebraBasis) -> CompressedFamily:
    """Compress each basis element to the frame: mats[k] = Q* B_k Q."""
    if s.n != basis.n:
        raise ValueError(f"subspace ambient {s.n} does not match basis ambient {basis.n}")
    q = s.frame
    mats = np.einsum("ja,kjl,lb->kab", q.conj(), basis.elements, q)
    mats = (mats + np.conj(np.transpose(mats, (0, 2, 1)))) / 2
    return CompressedFamily(subspace=s, mats=mats)


def moment_of_density(fam: CompressedFamily, r) -> np.ndarray:
    """Moment coordinates of the density matrix R given in frame coordinates."""
    rho = np.asarray(r, dtype=complex)
    dim = fam.subspace.r
    if rho.shape != (dim, dim):
        raise ValueError(f"expected an {dim} x {dim} density matrix, got {rho.shape}")
    return np.real(np.einsum("kij,ji->k", fam.mats, rho))


def sample_extreme(fam: CompressedFamily, count: int, seed: int) -> np.ndarray:
    """Moment coordinates of ``count`` seeded Haar-like unit vectors of S.

    Sample i uses its own generator seeded with seed + i, so the set of
    points is independent of evaluation order.  Returns a (count, t) array.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    dim = fam.subspace.r
    points = np.empty((count, fam.mats.shape[0]))
    if dim == 1:
        # the moment is a single point; phases wash out of the quadratic form
        points[:] = np.real(np.einsum("kij->k", fam.mats))
        return points
    for i in range(count):
        rng = np.random.default_rng(seed + i)
        u = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        u = u / np.linalg.norm(u)
        points[i] = np.real(np.einsum("i,kij,j->k", u.conj(), fam.mats, u))
    return points


def support_function(fam: CompressedFamily, w) -> float:
    """Support of the moment set: max over the set of <w, .>.

    Equals the top eigenvalue of sum_k w_k mats[k], so the value is exact up
    to eigensolver accuracy; no sampling is involved.
    """
    vec = np.asarray(w, dtype=float)
    if vec.shape != (fam.mats.shape[0],):
        raise ValueError(f"direction length {vec.shape} does not match t = {fam.mats.shape[0]}")
    combined = np.einsum("k,kij->ij", vec, fam.mats)
    if frobenius(combined) == 0.0:
        return 0.0
    return float(eig_hermitian(combined).eigenvalues[-1])


def jnr_support(fam: CompressedFamily, w) -> float:
    """Support of the joint numerical range of the compressed family.

    The range is the union of eps * (moment set) over eps in [0, 1], so its
    support is the positive part of the moment's support.
    """
    return max(0.0, support_function(fam, w))


def _phi(mats: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("kij,ji->k", mats, rho))


def moment_distance(
    s1: Subspace,
    s2: Subspace,
    basis: SubalgebraBasis,
    cfg: FWConfig = FWConfig(),
) -> FWResult:
    """Euclidean distance between the moments of two subspaces.

    Minimizes 0.5 * ||phi1(R1) - phi2(R2)||^2 by Frank-Wolfe over the
    product of the two density-matrix sets: the linear minimization oracle
    on each factor is the bottom eigenpair of the partial gradient (a
    rank-one vertex), and the step is an exact line search (the objective
    is quadratic in the step).  Stops when the Frank-Wolfe gap falls below
    cfg.gap_tol or the iteration budget runs out; the result is returned
    either way, carrying the final gap.
    """
    if s1.n != s2.n:
        raise ValueError("subspaces live in different ambient dimensions")
    fam1 = compress_family(s1, basis)
    fam2 = compress_family(s2, basis)
    r1 = np.eye(s1.r, dtype=complex) / s1.r
    r2 = np.eye(s2.r, dtype=complex) / s2.r

    d = _phi(fam1.mats, r1) - _phi(fam2.mats, r2)
    gap = np.inf
    it = 0
    for it in range(cfg.max_iter + 1):
        g1 = np.einsum("k,kij->ij", d, fam1.mats)
        g2 = -np.einsum("k,kij->ij", d, fam2.mats)
        lam1, v1 = min_eigpair(g1)
        lam2, v2 = min_eigpair(g2)
        gap = float(d @ d - lam1 - lam2)
        if gap <= cfg.gap_tol or it == cfg.max_iter:
            break
        vert1 = np.outer(v1, v1.conj())
        vert2 = np.outer(v2, v2.conj())
        u = (_phi(fam1.mats, vert1) - _phi(fam1.mats, r1)) - (
            _phi(fam2.mats, vert2) - _phi(fam2.mats, r2)
        )
        denom = float(u @ u)
        if denom <= 0.0:
            break
        step = min(max(gap / denom, 0.0), 1.0)
        r1 = r1 + step * (vert1 - r1)
        r2 = r2 + step * (vert2 - r2)
        r1 = (r1 + r1.conj().T) / 2
        r2 = (r2 + r2.conj().T) / 2
        d = _phi(fam1.mats, r1) - _phi(fam2.mats, r2)
    return FWResult(
        distance=float(np.linalg.norm(d)),
        witness_plus=r1,
        witness_minus=r2,
        gap=gap,
        iterations=it,
    )


def intersects(
    s1: Subspace,
    s2: Subspace,
    basis: SubalgebraBasis,
    cfg: FWConfig = FWConfig(),
) -> bool:
    """Decide whether the moments of two subspaces intersect.

    True needs distance <= dist_tol with the gap certificate met; False
    needs the gap-corrected lower bound distance - sqrt(2 * gap) to clear
    dist_tol.  Anything in between raises Undecided rather than guessing.
    """
    res = moment_distance(s1, s2, basis, cfg)
    if res.distance <= cfg.dist_tol and res.gap <= cfg.gap_tol:
        return True
    if res.distance - np.sqrt(2.0 * max(res.gap, 0.0)) > cfg.dist_tol:
        return False
    raise Undecided(
        f"distance {res.distance:.3e} with gap {res.gap:.3e} cannot be separated "
        f"from tolerance {cfg.dist_tol:.1e} at the iteration cap",
        distance=res.distance,
        gap=res.gap,
    )
