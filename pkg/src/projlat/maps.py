"""Lattice maps: total maps on projections with typed provenance.

A LatticeMap is a pure function P(M) -> P(N) tagged with how it arose
(ring isomorphism, invertible conjugation, semilinear conjugation,
composition, or opaque).  Provenance is what makes inversion possible;
verification is always sampled, never symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import (
    DEFAULT_TOL,
    AlgebraShape,
    Element,
    Projection,
    Tolerances,
    distance,
    invert,
    left_support,
)
from .errors import NotInvertibleProvenance, ShapeMismatch
from .lattice import join, leq, meet
from .sampling import random_projection, rng_from

__all__ = [
    "FromRingIso",
    "FromConjugation",
    "FromSemilinear",
    "Composite",
    "Opaque",
    "LatticeMap",
    "from_ring_iso",
    "from_conjugation",
    "from_semilinear",
    "compose",
    "invert_map",
    "MapCheck",
    "MapVerification",
    "verify_lattice_iso",
    "preserves_orthogonality",
]


@dataclass(frozen=True)
class FromRingIso:
    psi: Callable[[Element], Element]
    psi_inverse: Callable[[Element], Element] | None = None


@dataclass(frozen=True)
class FromConjugation:
    T: Element


@dataclass(frozen=True)
class FromSemilinear:
    T: Element
    sigma: str  # "id" or "conj"


@dataclass(frozen=True)
class Composite:
    outer: object
    inner: object


@dataclass(frozen=True)
class Opaque:
    note: str = ""


@dataclass(frozen=True)
class LatticeMap:
    """Total map on projections with provenance.

    apply must be pure and deterministic; by construction every map
    built here sends 0 to 0 and 1 to 1.
    """

    source: AlgebraShape
    target: AlgebraShape
    apply: Callable[[Projection], Projection]
    provenance: object = field(default_factory=Opaque)

    def __call__(self, p: Projection) -> Projection:
        if p.shape != self.source:
            raise ShapeMismatch(
                f"map expects projections in [{self.source}], got [{p.shape}]"
            )
        return self.apply(p)


def from_ring_iso(
    psi: Callable[[Element], Element],
    source: AlgebraShape,
    target: AlgebraShape | None = None,
    psi_inverse: Callable[[Element], Element] | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> LatticeMap:
    """Lattice map induced by a ring isomorphism: p -> left support of psi(p)."""
    target = target or source

    def apply(p: Projection) -> Projection:
        return left_support(psi(p.element), tol)

    return LatticeMap(source, target, apply, FromRingIso(psi, psi_inverse))


def _orth(a: np.ndarray, rank_rel: float) -> np.ndarray:
    if a.shape[1] == 0:
        return a
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = int(np.count_nonzero(s > rank_rel * s[0])) if s[0] > 0 else 0
    return u[:, :r]


def from_conjugation(T: Element, tol: Tolerances = DEFAULT_TOL) -> LatticeMap:
    """Lattice map p -> projection onto T(range p), for invertible T.

    Raises:
        NotInvertible: T has a singular block.
    """
    invert(T, tol)  # validate once, loudly
    shape = T.shape

    def apply(p: Projection) -> Projection:
        bases = [
            _orth(tb @ ub, tol.rank_rel) for tb, ub in zip(T.data, p.basis)
        ]
        return Projection.from_basis(shape, bases)

    return LatticeMap(shape, shape, apply, FromConjugation(T))


def from_semilinear(
    T: Element, sigma: str = "id", tol: Tolerances = DEFAULT_TOL
) -> LatticeMap:
    """Lattice map of an invertible semilinear operator T compose sigma,
    where sigma is the identity or entrywise complex conjugation.

    With sigma = "id" this is the same map as from_conjugation(T); with
    T = 1 and sigma = "conj" it is p -> transpose(p).
    """
    if sigma not in ("id", "conj"):
        raise ValueError(f'sigma must be "id" or "conj", got {sigma!r}')
    invert(T, tol)
    shape = T.shape

    def apply(p: Projection) -> Projection:
        bases = []
        for tb, ub in zip(T.data, p.basis):
            cols = ub.conj() if sigma == "conj" else ub
            bases.append(_orth(tb @ cols, tol.rank_rel))
        return Projection.from_basis(shape, bases)

    return LatticeMap(shape, shape, apply, FromSemilinear(T, sigma))


def compose(outer: LatticeMap, inner: LatticeMap) -> LatticeMap:
    """outer after inner."""
    if inner.target != outer.source:
        raise ShapeMismatch("inner target does not match outer source")
    return LatticeMap(
        inner.source,
        outer.target,
        lambda p: outer.apply(inner.apply(p)),
        Composite(outer.provenance, inner.provenance),
    )


def invert_map(phi: LatticeMap, tol: Tolerances = DEFAULT_TOL) -> LatticeMap:
    """Inverse lattice map, available when provenance carries one.

    Raises:
        NotInvertibleProvenance: opaque provenance, or a ring-iso
            provenance without an inverse function.
    """
    prov = phi.provenance
    if isinstance(prov, FromConjugation):
        return from_conjugation(invert(prov.T, tol), tol)
    if isinstance(prov, FromSemilinear):
        tinv = invert(prov.T, tol)
        if prov.sigma == "conj":
            tinv = tinv.conj()
        return from_semilinear(tinv, prov.sigma, tol)
    if isinstance(prov, FromRingIso):
        if prov.psi_inverse is None:
            raise NotInvertibleProvenance("ring-iso provenance has no inverse")
        return from_ring_iso(
            prov.psi_inverse, phi.target, phi.source, prov.psi, tol
        )
    if isinstance(prov, Composite):
        # Rebuild the two halves as maps; only possible when both are
        # themselves invertible provenances.
        raise NotInvertibleProvenance(
            "composite maps must be inverted part by part"
        )
    raise NotInvertibleProvenance(f"cannot invert provenance {type(prov).__name__}")


@dataclass(frozen=True)
class MapCheck:
    name: str
    passed: bool
    max_residual: float
    counterexample: dict | None = None


@dataclass(frozen=True)
class MapVerification:
    passed: bool
    checks: tuple[MapCheck, ...]
    seed: int
    samples: int


def _structured_pair(shape, rng) -> tuple[Projection, Projection]:
    """Pair sharing a random subspace, so meets are nontrivial."""
    bases_p, bases_q = [], []
    for n in shape.blocks:
        shared = int(rng.integers(0, n + 1))
        extra_p = int(rng.integers(0, n - shared + 1))
        extra_q = int(rng.integers(0, n - shared + 1))
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        q, _ = np.linalg.qr(g)
        cols = rng.permutation(n)
        base = q[:, cols]
        bases_p.append(base[:, : shared + extra_p])
        # q shares the first `shared` columns, then takes fresh ones
        take = list(range(shared)) + list(
            range(shared + extra_p, min(n, shared + extra_p + extra_q))
        )
        bases_q.append(base[:, take])
    return (
        Projection.from_basis(shape, bases_p),
        Projection.from_basis(shape, bases_q),
    )


def verify_lattice_iso(
    phi: LatticeMap,
    samples: int = 32,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    check_tol: float = 1e-6,
) -> MapVerification:
    """Sampled verification that phi is a lattice isomorphism.

    Checks endpoints (0 and 1), order preservation in both directions,
    meet/join preservation on pairs with nontrivial intersections, and
    a bijectivity proxy: the image rank profile is a function of the
    input rank profile.
    """
    rng = rng_from(seed)
    shape = phi.source
    checks: list[MapCheck] = []

    zero_img = phi(Projection.zero(shape))
    one_img = phi(Projection.identity(shape))
    res = max(
        distance(zero_img, Projection.zero(phi.target)),
        distance(one_img, Projection.identity(phi.target)),
    )
    checks.append(MapCheck("endpoints", res <= check_tol, res))

    worst_order, order_ok, order_ce = 0.0, True, None
    worst_mj, mj_ok, mj_ce = 0.0, True, None
    profile_map: dict[tuple, tuple] = {}
    profile_ok, profile_ce = True, None

    for k in range(samples):
        p, q = _structured_pair(shape, rng)
        fp, fq = phi(p), phi(q)

        for a, b, fa, fb in ((p, q, fp, fq), (q, p, fq, fp)):
            fwd, back = leq(a, b, tol), leq(fa, fb, tol)
            if fwd != back:
                order_ok = False
                order_ce = order_ce or {
                    "check": "order",
                    "sample": k,
                    "leq_source": fwd,
                    "leq_target": back,
                }

        fm = distance(phi(meet(p, q, tol)), meet(fp, fq, tol))
        fj = distance(phi(join(p, q, tol)), join(fp, fq, tol))
        worst_mj = max(worst_mj, fm, fj)
        if fm > check_tol or fj > check_tol:
            mj_ok = False
            mj_ce = mj_ce or {"check": "meet-join", "sample": k, "residual": max(fm, fj)}

        key = p.ranks
        img_profile = fp.ranks
        if key in profile_map and profile_map[key] != img_profile:
            profile_ok = False
            profile_ce = profile_ce or {
                "check": "rank-profile",
                "profile": list(key),
                "images": [list(profile_map[key]), list(img_profile)],
            }
        profile_map.setdefault(key, img_profile)

    checks.append(MapCheck("order-both-directions", order_ok, worst_order, order_ce))
    checks.append(MapCheck("meet-join-preservation", mj_ok, worst_mj, mj_ce))
    checks.append(MapCheck("rank-profile-constancy", profile_ok, 0.0, profile_ce))

    return MapVerification(
        passed=all(c.passed for c in checks),
        checks=tuple(checks),
        seed=seed if isinstance(seed, int) else -1,
        samples=samples,
    )


def preserves_orthogonality(
    phi: LatticeMap,
    samples: int = 32,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    margin: float = 1e-6,
) -> tuple[bool, dict | None]:
    """Sampled biconditional test: p q = 0 iff phi(p) phi(q) = 0.

    Returns (ok, witness); the witness records the first pair on which
    the biconditional failed (as storable objects, so it can go into a
    report verbatim) with the offending residual.  Standard
    coordinate projections are always included among the samples since
    they expose non-unitary conjugations immediately.
    """
    from .serialize import projection_to_obj  # deferred: serialize imports us

    rng = rng_from(seed)
    shape = phi.source

    def images_product(p: Projection, q: Projection) -> float:
        return (phi(p).element * phi(q).element).norm()

    # Deterministic probes: disjoint halves of the standard basis.
    probes: list[tuple[Projection, Projection]] = []
    eyes = [np.eye(n, dtype=np.complex128) for n in shape.blocks]
    half_a = Projection.from_basis(shape, [e[:, : n // 2] for e, n in zip(eyes, shape.blocks)])
    half_b = Projection.from_basis(shape, [e[:, n // 2 :] for e, n in zip(eyes, shape.blocks)])
    probes.append((half_a, half_b))
    for _ in range(samples):
        p = random_projection(shape, rng)
        comp_ranks = [
            int(rng.integers(0, n - r + 1)) for r, n in zip(p.ranks, shape.blocks)
        ]
        sub = random_projection(shape, rng, comp_ranks)
        # push sub below the complement of p
        bases = []
        for ub, uc in zip(sub.basis, p.complement().basis):
            if ub.shape[1] == 0 or uc.shape[1] == 0:
                bases.append(uc[:, :0])
                continue
            g = uc @ (uc.conj().T @ ub)
            bases.append(_orth(g, tol.rank_rel))
        probes.append((p, Projection.from_basis(shape, bases)))

    for p, q in probes:
        if (p.element * q.element).norm() > tol.proj_tol:
            continue  # sampler failed to make them orthogonal; skip
        res = images_product(p, q)
        if res > margin:
            return False, {
                "kind": "orthogonal-pair-mapped-to-overlapping",
                "residual": float(res),
                "ranks_p": list(p.ranks),
                "ranks_q": list(q.ranks),
                "p": projection_to_obj(p),
                "q": projection_to_obj(q),
            }

    # Non-orthogonal pairs must keep overlapping images.
    for _ in range(samples):
        p = random_projection(shape, rng)
        q = random_projection(shape, rng)
        overlap = (p.element * q.element).norm()
        if overlap <= 1e-2:  # want a clear overlap to start from
            continue
        res = images_product(p, q)
        if res <= margin:
            return False, {
                "kind": "overlapping-pair-mapped-to-orthogonal",
                "residual": float(res),
                "overlap": float(overlap),
                "p": projection_to_obj(p),
                "q": projection_to_obj(q),
            }
    return True, None
