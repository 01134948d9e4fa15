"""Factoring ring isomorphisms into a linear/conjugate-linear core and Ad_y."""

import numpy as np
import pytest

import projlat as pl
from projlat import AlgebraShape, Element


S3 = AlgebraShape([3])
S23 = AlgebraShape([2, 3])
S22 = AlgebraShape([2, 2])


def _ad(t):
    t_inv = pl.invert(t)
    return lambda x: t * x * t_inv


def _factored(fac):
    y_inv = pl.invert(fac.y)
    return lambda x: fac.y * fac.psi0(x) * y_inv


def test_classify_linearity_identity_kind(rng):
    t = pl.random_invertible(S3, rng, cond_max=20.0)
    q = pl.classify_linearity(_ad(t), S3)
    assert q.ranks == (3,)


def test_classify_linearity_conjugation_kind(rng):
    q = pl.classify_linearity(lambda x: x.conj(), S3)
    assert q.ranks == (0,)


def test_classify_linearity_mixed_blocks(rng):
    psi = lambda x: Element(S23, [x.data[0].conj(), x.data[1]])
    q = pl.classify_linearity(psi, S23)
    assert q.ranks == (0, 3)


def test_classify_linearity_rejects_noncentral_image_of_i(rng):
    # x -> x* sends i1 to -i1, which classifies, but a map scaling one
    # column of i1 produces a non-central image
    t = Element(S3, [np.diag([1.0, 1.0, 2.0]).astype(complex)])

    def bad(x):
        return Element(S3, [t.data[0] * x.data[0]])

    with pytest.raises(pl.NotRingIso):
        pl.classify_linearity(bad, S3)


def test_inner_factor_conjugation(rng):
    t = pl.random_invertible(S3, rng, cond_max=50.0)
    fac = pl.inner_factor(_ad(t), S3)
    assert fac.psi0_kind == ("linear",)
    assert fac.residual <= 1e-7 * pl.cond(fac.y)
    # y is collinear with t: |<y, t>| close to ||y|| ||t||
    yb, tb = fac.y.data[0].ravel(), t.data[0].ravel()
    overlap = abs(np.vdot(yb, tb)) / (np.linalg.norm(yb) * np.linalg.norm(tb))
    assert overlap >= 1.0 - 1e-8


def test_inner_factor_entrywise_conjugation(rng):
    fac = pl.inner_factor(lambda x: x.conj(), S3)
    assert fac.psi0_kind == ("conjugate",)
    assert pl.distance(fac.y, Element.identity(S3)) < 1e-8


def test_inner_factor_mixed_sum(rng):
    t = pl.random_invertible(S23, rng, cond_max=30.0)
    t_inv = pl.invert(t)

    def psi(x):
        twisted = Element(S23, [x.data[0], x.data[1].conj()])
        return t * twisted * t_inv

    fac = pl.inner_factor(psi, S23)
    assert fac.psi0_kind == ("linear", "conjugate")
    assert fac.residual <= 1e-7 * pl.cond(fac.y)
    rebuilt = _factored(fac)
    for _ in range(20):
        x = pl.random_element(S23, rng)
        assert pl.distance(psi(x), rebuilt(x)) <= 1e-6 * pl.cond(fac.y)


def test_inner_factor_q_matches_kinds(rng):
    def psi(x):
        return Element(S23, [x.data[0], x.data[1].conj()])

    fac = pl.inner_factor(psi, S23)
    # q carries exactly the complex-linear blocks
    assert fac.q.ranks == (2, 0)


def test_inner_factor_phase_normalization(rng):
    t = pl.random_invertible(S3, rng, cond_max=10.0)
    fac = pl.inner_factor(_ad(t), S3)
    flat = np.concatenate([b.ravel() for b in fac.y.data])
    pivot = flat[np.argmax(np.abs(flat))]
    assert abs(np.angle(pivot)) < 1e-8


def test_inner_factor_block_swap(rng):
    # swapping two same-size blocks is a ring automorphism; the
    # factorization must route the blocks, not force identity routing
    psi = lambda x: Element(S22, [x.data[1], x.data[0]])
    fac = pl.inner_factor(psi, S22)
    assert fac.block_map == (1, 0)
    rebuilt = _factored(fac)
    for _ in range(10):
        x = pl.random_element(S22, rng)
        assert pl.distance(psi(x), rebuilt(x)) < 1e-8


def test_inner_factor_rejects_adjoint(rng):
    # x -> x* is real-linear but anti-multiplicative
    with pytest.raises(pl.NotRingIso):
        pl.inner_factor(lambda x: x.adjoint(), S3)


def test_inner_factor_rejects_nonadditive(rng):
    with pytest.raises(pl.NotRealLinear):
        pl.inner_factor(lambda x: x * x.norm(), S3)


def test_factorization_survives_serialization(rng):
    t = pl.random_invertible(S3, rng, cond_max=10.0)
    fac = pl.inner_factor(_ad(t), S3)
    sigma = ["id" if k == "linear" else "conj" for k in fac.psi0_kind]
    obj = pl.ring_iso_to_obj(fac.y, sigma)
    rebuilt = pl.ring_iso_from_obj(obj)
    assert rebuilt.sigma == ("id",)
    x = pl.random_element(S3, rng)
    assert pl.distance(rebuilt(x), t * x * pl.invert(t)) <= 1e-7 * pl.cond(t)


class TestDyeExtension:
    def test_unitary_map_certifies(self, rng):
        u = pl.random_unitary(S3, rng)
        psi, cert = pl.dye_extension(pl.from_conjugation(u), samples=6, seed=3)
        assert cert["preserves_orthogonality"] is True
        names = {c["name"] for c in cert["checks"]}
        assert "projection-extension" in names
        assert "star-preservation" in names
        assert "hermitian-order" in names
        assert all(c["max_residual"] <= 1e-8 for c in cert["checks"])
        x = pl.random_element(S3, rng)
        assert pl.distance(psi(x), u * x * u.adjoint()) < 1e-8

    def test_transpose_map_certifies(self, rng):
        phi = pl.from_semilinear(Element.identity(S3), "conj")
        psi, cert = pl.dye_extension(phi, samples=6, seed=3)
        assert cert["preserves_orthogonality"] is True
        x = pl.random_element(S3, rng)
        assert pl.distance(psi(x), x.conj()) < 1e-8

    def test_nonunitary_map_is_rejected_with_witness(self, rng):
        t = pl.random_invertible(S3, rng, cond_max=40.0)
        # make sure t is honestly far from unitary
        u, _ = pl.polar_decompose(t)
        assert pl.distance(t, u) > 1e-3
        with pytest.raises(pl.OrthogonalityNotPreserved) as exc_info:
            pl.dye_extension(pl.from_conjugation(t), samples=12, seed=3)
        w = exc_info.value.witness
        p = pl.projection_from_obj(w["p"])
        q = pl.projection_from_obj(w["q"])
        phi = pl.from_conjugation(t)
        zero = Element.zeros(S3)
        before = pl.distance(p.element * q.element, zero)
        after = pl.distance(phi(p).element * phi(q).element, zero)
        # one side orthogonal, the other not
        assert (before < 1e-8) != (after < 1e-8)

    def test_rejection_happens_before_coordinatization(self, rng):
        # a non-unitary map on a shape coordinatize cannot handle still
        # gets the orthogonality verdict, not NotOrderThree
        shape = AlgebraShape([4])
        t = pl.random_invertible(shape, rng, cond_max=40.0)
        u, _ = pl.polar_decompose(t)
        assert pl.distance(t, u) > 1e-3
        with pytest.raises(pl.OrthogonalityNotPreserved):
            pl.dye_extension(pl.from_conjugation(t), samples=12, seed=3)
