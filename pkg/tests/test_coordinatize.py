"""The lattice-to-ring pipeline: frames, normalization, reconstruction."""

import pytest

import projlat as pl
from projlat import AlgebraShape, Element, ThreeFrame
from projlat.coordinatize import normalize_map, order_frame


S3 = AlgebraShape([3])
S6 = AlgebraShape([6])


def test_order_frame_from_projections(rng):
    base = ThreeFrame.standard(S6)
    fr = order_frame(S6, base.e1, base.e2, base.e3)
    assert fr.e1.ranks == (2,)
    one = Element.identity(fr.corner_shape)
    q = pl.graph_projection(fr, one, 12)
    assert pl.distance(pl.recover_operator(fr, q, 12), one) < 1e-10


def test_order_frame_rejects_uneven_ranks(rng):
    p1 = pl.random_projection(S6, rng, ranks=[3])
    p2 = pl.random_projection(S6, rng, ranks=[2])
    p3 = pl.random_projection(S6, rng, ranks=[1])
    with pytest.raises(pl.NotAFrame):
        order_frame(S6, p1, p2, p3)


def test_normalize_map_lands_on_target_frame(rng):
    t = pl.random_invertible(S6, rng, cond_max=50.0)
    phi = pl.from_conjugation(t)
    fr = ThreeFrame.standard(S6)
    phi3, target, normalizers = normalize_map(phi, fr)
    assert len(normalizers) == 3
    for e_src, e_tgt in zip(fr.projections, target.projections):
        assert pl.distance(phi3(e_src), e_tgt) < 1e-8
    # all three units transport to the target units
    one = Element.identity(fr.corner_shape)
    for slot in (12, 13):
        img = phi3(pl.graph_projection(fr, one, slot))
        assert pl.distance(img, pl.graph_projection(target, one, slot)) < 1e-7


@pytest.mark.parametrize("blocks", [[3], [6], [3, 3]])
def test_coordinatize_conjugation(blocks, rng):
    shape = AlgebraShape(blocks)
    t = pl.random_invertible(shape, rng, cond_max=100.0)
    result = pl.coordinatize(pl.from_conjugation(t), samples=4, seed=5)
    t_inv = pl.invert(t)
    gate = 1e-6 * pl.cond(t)
    for _ in range(25):
        x = pl.random_element(shape, rng)
        assert pl.distance(result.Psi(x), t * x * t_inv) <= gate
    # corner map multiplies
    ch = result.source_frame.corner_shape
    a = pl.random_element(ch, rng)
    b = pl.random_element(ch, rng)
    assert pl.distance(result.psi(a * b), result.psi(a) * result.psi(b)) < 1e-6


def test_coordinatize_transpose(rng):
    phi = pl.from_semilinear(Element.identity(S3), "conj")
    result = pl.coordinatize(phi, samples=4, seed=5)
    for _ in range(25):
        x = pl.random_element(S3, rng)
        assert pl.distance(result.Psi(x), x.conj()) < 1e-8


def test_coordinatize_with_explicit_frame(rng):
    t = pl.random_invertible(S6, rng, cond_max=30.0)
    fr = ThreeFrame.standard(S6)
    result = pl.coordinatize(pl.from_conjugation(t), source_frame=fr, samples=4, seed=0)
    t_inv = pl.invert(t)
    x = pl.random_element(S6, rng)
    assert pl.distance(result.Psi(x), t * x * t_inv) < 1e-6


def test_coordinatize_rejects_non_order3_shapes(rng):
    for blocks in ([2], [4], [3, 4]):
        shape = AlgebraShape(blocks)
        t = pl.random_invertible(shape, rng, cond_max=10.0)
        with pytest.raises(pl.NotOrderThree):
            pl.coordinatize(pl.from_conjugation(t), samples=2, seed=0)


def test_uniqueness_across_seeds(rng):
    t = pl.random_invertible(S3, rng, cond_max=50.0)
    phi = pl.from_conjugation(t)
    r_a = pl.coordinatize(phi, samples=4, seed=31)
    r_b_inv = pl.coordinatize(pl.invert_map(phi), samples=4, seed=77)
    rep = pl.uniqueness_residual(lambda x: r_b_inv.Psi(r_a.Psi(x)), S3, samples=32)
    assert rep.support_ok
    assert rep.residual <= 1e-7


def test_uniqueness_residual_flags_support_breakage(rng):
    # Ad_T for non-central T moves supports, so the identity-lemma
    # premise fails and the report must say so
    t = pl.random_invertible(S3, rng, cond_max=40.0)
    t_inv = pl.invert(t)
    rep = pl.uniqueness_residual(lambda x: t * x * t_inv, S3, samples=16)
    assert not rep.support_ok
    assert rep.witness is not None and "support_distance" in rep.witness


def test_normalizers_compose_to_the_returned_map(rng):
    t = pl.random_invertible(S3, rng, cond_max=20.0)
    phi = pl.from_conjugation(t)
    result = pl.coordinatize(phi, samples=4, seed=13)
    s1, s2, s3 = result.normalizers
    s = s3 * (s2 * s1)
    s_inv = pl.invert(s)
    # Psi = Ad_{s^-1} after the normalized recovery; sanity: supports match
    x = pl.random_element(S3, rng)
    assert pl.distance(
        pl.left_support(result.Psi(x)), phi(pl.left_support(x))
    ) < 1e-8
    assert pl.distance(s * s_inv, Element.identity(S3)) < 1e-10


def test_block_split9_roundtrip(rng):
    shape = AlgebraShape([6, 9])
    x = pl.random_element(shape, rng)
    pieces = pl.block_split9(x, [2, 3], [4, 6])
    total = pieces[0]
    for piece in pieces[1:]:
        total = total + piece
    assert pl.distance(total, x) == 0.0
    assert len(pieces) == 9


def test_block_split9_broadcast_int(rng):
    x = pl.random_element(S6, rng)
    pieces = pl.block_split9(x, 2, 4)
    assert len(pieces) == 9


def test_block_split9_rejects_bad_cuts(rng):
    x = pl.random_element(S6, rng)
    with pytest.raises(pl.BadSplit):
        pl.block_split9(x, 4, 2)  # out of order
    with pytest.raises(pl.BadSplit):
        pl.block_split9(x, 0, 2)  # empty first interval
    with pytest.raises(pl.BadSplit):
        pl.block_split9(x, 1, 5)  # last interval longer than n/2
    one = pl.random_element(AlgebraShape([1]), rng)
    with pytest.raises(pl.BadSplit):
        pl.block_split9(one, 0, 0)  # nothing to split in a 1x1 block
