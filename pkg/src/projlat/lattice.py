"""Lattice operations on projections: order, meet, join, equivalence.

Meet and join are computed from range bases.  The join orthonormalizes
the concatenated bases with the relative singular-value cutoff.  The
meet runs in two stages: a coarse preselection by principal-angle
cosines, then an SVD of (1 - q) restricted to the candidate block, so
that membership is decided on the *sine* of the angle.  Only directions
whose sine is at or below rank_rel are counted as common; deliberate
small angles (say 1e-6) therefore survive into the generic part of a
two-projection pair instead of being folded into the intersection.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DEFAULT_TOL,
    Element,
    Projection,
    Tolerances,
    distance,
    left_support,
)
from .errors import NotAProjection, NotComplementary, ShapeMismatch

__all__ = [
    "canonicalize",
    "leq",
    "meet",
    "join",
    "mv_equivalent",
    "perspectivity_witness",
    "central_support",
    "is_central_projection",
    "principal_ideal_leq",
]

# Eigenvalues of a near-projection must fall in these bands to be
# snapped; anything in between means the input was not a perturbed
# projection and deserves a loud failure rather than silent rounding.
_ZERO_BAND = (-0.1, 0.1)
_ONE_BAND = (0.9, 1.1)


def canonicalize(x: Element, tol: Tolerances = DEFAULT_TOL) -> Projection:
    """Snap a numerically perturbed projection onto an exact one.

    The input must be Hermitian within proj_tol and its eigenvalues must
    lie in [-0.1, 0.1] or [0.9, 1.1]; eigenvalues are snapped to 0/1 and
    the projection is rebuilt from the eigenvectors of the 1-cluster.

    Raises:
        NotAProjection: not Hermitian, or an eigenvalue in (0.1, 0.9).
    """
    if isinstance(x, Projection):
        x = x.element
    bases = []
    for i, a in enumerate(x.data):
        herm_defect = np.linalg.norm(a - a.conj().T, 2) if a.size else 0.0
        if herm_defect > tol.proj_tol:
            raise NotAProjection(
                f"block {i} is not Hermitian (defect {herm_defect:.3e})"
            )
        h = (a + a.conj().T) / 2
        lam, vec = np.linalg.eigh(h)
        in_zero = (lam >= _ZERO_BAND[0]) & (lam <= _ZERO_BAND[1])
        in_one = (lam >= _ONE_BAND[0]) & (lam <= _ONE_BAND[1])
        if not np.all(in_zero | in_one):
            bad = lam[~(in_zero | in_one)][0]
            raise NotAProjection(
                f"block {i} has eigenvalue {bad:.6f} in the forbidden band"
            )
        bases.append(vec[:, in_one])
    return Projection.from_basis(x.shape, bases)


def leq(p: Projection, q: Projection, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Order test p <= q, i.e. ||p - q p|| <= eq_tol."""
    return distance(p.element, q.element * p.element) <= tol.eq_tol


def _meet_basis(up: np.ndarray, uq: np.ndarray, rank_rel: float) -> np.ndarray:
    n = up.shape[0]
    if up.shape[1] == 0 or uq.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.complex128)
    # Stage 1: candidate directions with principal-angle cosine >= 1/2.
    # Anything below is far from the intersection; this only trims work.
    w, sigma, _ = np.linalg.svd(up.conj().T @ uq, full_matrices=False)
    cand = sigma >= 0.5
    if not np.any(cand):
        return np.zeros((n, 0), dtype=np.complex128)
    b = up @ w[:, cand]
    # Stage 2: sines of the candidate directions against range(q).
    # The SVD of (1-q)B separates a true intersection (sine ~ eps) from
    # a deliberately tiny angle (sine ~ theta) with gap theta, which the
    # cosines cannot do at double precision.
    d = b - uq @ (uq.conj().T @ b)
    _, s, zh = np.linalg.svd(d, full_matrices=False)
    keep = s <= rank_rel
    return b @ zh.conj().T[:, keep]


def meet(p: Projection, q: Projection, tol: Tolerances = DEFAULT_TOL) -> Projection:
    """Largest projection under both p and q (range intersection)."""
    if p.shape != q.shape:
        raise ShapeMismatch("meet needs projections of one shape")
    bases = [
        _meet_basis(up, uq, tol.rank_rel) for up, uq in zip(p.basis, q.basis)
    ]
    return Projection.from_basis(p.shape, bases)


def join(p: Projection, q: Projection, tol: Tolerances = DEFAULT_TOL) -> Projection:
    """Smallest projection above both p and q (span of the ranges)."""
    if p.shape != q.shape:
        raise ShapeMismatch("join needs projections of one shape")
    bases = []
    for up, uq in zip(p.basis, q.basis):
        stacked = np.concatenate([up, uq], axis=1)
        if stacked.shape[1] == 0:
            bases.append(stacked)
            continue
        u, s, _ = np.linalg.svd(stacked, full_matrices=False)
        r = int(np.count_nonzero(s > tol.rank_rel * s[0])) if s[0] > 0 else 0
        bases.append(u[:, :r])
    return Projection.from_basis(p.shape, bases)


def mv_equivalent(
    p: Projection, q: Projection, tol: Tolerances = DEFAULT_TOL
) -> Element | None:
    """Murray-von Neumann equivalence witness, or None.

    In a direct sum of matrix algebras p ~ q exactly when the ranks
    agree blockwise; the witness v = U_p U_q* satisfies v v* = p and
    v* v = q.  Returns None when some block ranks differ.
    """
    if p.shape != q.shape:
        raise ShapeMismatch("equivalence needs projections of one shape")
    if p.ranks != q.ranks:
        return None
    blocks = [up @ uq.conj().T for up, uq in zip(p.basis, q.basis)]
    return Element(p.shape, blocks)


def perspectivity_witness(
    p: Projection, q: Projection, tol: Tolerances = DEFAULT_TOL
) -> Element:
    """Partial isometry v with v v* = 1 - p and v* v = q, given that
    p and q are complementary (join 1, meet 0).

    Raises:
        NotComplementary: join(p, q) != 1 or meet(p, q) != 0.
    """
    top = join(p, q, tol)
    if not top.is_identity() or distance(top, Projection.identity(p.shape)) > tol.proj_tol:
        raise NotComplementary("join(p, q) is not the identity")
    if meet(p, q, tol).rank() != 0:
        raise NotComplementary("meet(p, q) is not zero")
    witness = mv_equivalent(p.complement(), q, tol)
    if witness is None:
        raise NotComplementary("rank bookkeeping failed for the complement")
    return witness


def central_support(p: Projection) -> Projection:
    """Smallest central projection above p: 1 on blocks where p != 0."""
    shape = p.shape
    bases = [
        np.eye(n, dtype=np.complex128) if r > 0 else np.zeros((n, 0), dtype=np.complex128)
        for r, n in zip(p.ranks, shape.blocks)
    ]
    return Projection.from_basis(shape, bases)


def is_central_projection(p: Projection) -> bool:
    """True when each block of p is 0 or the identity."""
    return all(r in (0, n) for r, n in zip(p.ranks, p.shape.blocks))


def principal_ideal_leq(
    x: Element, a: Element, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Membership of x in the principal right ideal generated by a.

    x = a z is solvable exactly when left_support(x) <= left_support(a),
    which is what gets tested.
    """
    return leq(left_support(x, tol), left_support(a, tol), tol)
