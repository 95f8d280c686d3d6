import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewincidence import algebra, exceptions
from skewincidence.algebra import AlgebraContext, SkewElement
from skewincidence.coeff_ring import parse_ring_spec
from skewincidence.poset import enumerate_posets, poset_from_covers


@pytest.fixture
def chain2():
    return poset_from_covers(2, [(1, 2)])


@pytest.fixture
def ctx_z2(chain2):
    return AlgebraContext(chain2, parse_ring_spec("zmod:2"))


@pytest.fixture
def ctx_gf4(chain2):
    return AlgebraContext(chain2, parse_ring_spec("gf:2:2:frobenius"))


def element_strategy(ctx):
    values = st.sampled_from(ctx.ring.elements())
    return st.lists(values, min_size=len(ctx.pairs), max_size=len(ctx.pairs)).map(
        lambda coeffs: SkewElement(ctx, dict(zip(ctx.pairs, coeffs)))
    )


def test_constructors(ctx_z2):
    delta = algebra.delta(ctx_z2)
    assert delta.coeffs == {(1, 1): 1, (2, 2): 1}
    assert algebra.basis_e(ctx_z2, 1, 2).coeffs == {(1, 2): 1}
    assert algebra.basis_e(ctx_z2, 2).coeffs == {(2, 2): 1}
    assert algebra.scalar_embed(ctx_z2, 0) == ctx_z2.zero()
    assert not ctx_z2.zero()
    assert ctx_z2.basis_e(1) + ctx_z2.basis_e(2) == delta


def test_basis_rejects_incomparable(ctx_z2):
    with pytest.raises(exceptions.UnsupportedPair) as excinfo:
        ctx_z2.basis_e(2, 1)
    assert str(excinfo.value) == "x2 is not below x1"


def test_element_validation(ctx_z2):
    f = ctx_z2.element({(1, 2): 1, (2, 2): 0})
    assert f.coeffs == {(1, 2): 1}
    assert f[2, 2] == 0
    with pytest.raises(exceptions.UnsupportedPair):
        ctx_z2.element({(2, 1): 1})
    with pytest.raises(exceptions.RingMismatch):
        ctx_z2.element({(1, 1): 3})


def test_enumerate(ctx_z2):
    elements = list(algebra.enumerate_algebra(ctx_z2))
    assert len(elements) == 8 == ctx_z2.cardinality
    assert len(set(elements)) == 8


def test_enumerate_bound(chain2):
    ctx = AlgebraContext(chain2, parse_ring_spec("zmod:8"), bound=100)
    with pytest.raises(exceptions.UnsupportedQuery):
        list(ctx.enumerate())


def test_infinite_ring_refuses_cardinality(chain2):
    ctx = AlgebraContext(chain2, parse_ring_spec("zz"))
    f = ctx.element({(1, 1): 2, (1, 2): 5})
    assert (f * f)[1, 2] == 10
    with pytest.raises(exceptions.UnsupportedQuery):
        ctx.cardinality


def test_twisted_product_gf4(ctx_gf4):
    ring = ctx_gf4.ring
    w = ring.parse_element("w")
    # e_12 * (w e_2) = sigma(w) e_12
    f = ctx_gf4.basis_e(1, 2) * ctx_gf4.element({(2, 2): w})
    assert f == ctx_gf4.element({(1, 2): ring.sigma(w)})
    # (w e_1) * e_12 = w e_12, no twist on the left factor
    g = ctx_gf4.element({(1, 1): w}) * ctx_gf4.basis_e(1, 2)
    assert g == ctx_gf4.element({(1, 2): w})


def test_basis_products(ctx_gf4):
    """e_xy e_uv = e_xv when y == u, and 0 otherwise."""
    ctx = ctx_gf4
    for (x, y), (u, v) in itertools.product(ctx.pairs, repeat=2):
        product = ctx.basis_e(x, y) * ctx.basis_e(u, v)
        expected = ctx.basis_e(x, v) if y == u else ctx.zero()
        assert product == expected


def test_scalar_embedding_products(ctx_gf4):
    """(r delta) e_xy = r e_xy and e_xy (r delta) = sigma^(y-x)(r) e_xy."""
    ctx = ctx_gf4
    ring = ctx.ring
    for r in ring.elements():
        for x, y in ctx.pairs:
            e = ctx.basis_e(x, y)
            assert ctx.scalar_embed(r) * e == algebra.scale_left(r, e)
            assert e * ctx.scalar_embed(r) == algebra.scale_left(
                ring.sigma_pow(y - x, r), e
            )


def test_scalar_embedding_is_a_ring_map(ctx_z2):
    for r, s in itertools.product(ctx_z2.ring.elements(), repeat=2):
        ring = ctx_z2.ring
        embed = ctx_z2.scalar_embed
        assert embed(ring.add(r, s)) == embed(r) + embed(s)


def test_associativity_exhaustive(ctx_z2):
    elements = list(ctx_z2.enumerate())
    for f, g, h in itertools.product(elements, repeat=3):
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert (f + g) * h == f * h + g * h


@pytest.mark.parametrize(
    "spec", ["gf:2:3:frobenius", "prodswap:zmod:3", "prodproj:zmod:2", "trunc:2:3:tsq"]
)
def test_associativity_random(spec):
    rng = np.random.default_rng(seed=17)
    ring = parse_ring_spec(spec)
    for p in enumerate_posets(4):
        ctx = AlgebraContext(p, ring)
        for _ in range(160):
            f, g, h = (ctx.random_element(rng) for _ in range(3))
            assert (f * g) * h == f * (g * h)
            assert f * (g + h) == f * g + f * h
            assert (f + g) * h == f * h + g * h
            assert ctx.delta() * f == f == f * ctx.delta()


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_axioms_hypothesis(data):
    p = data.draw(st.sampled_from(enumerate_posets(3)))
    spec = data.draw(st.sampled_from(["gf:2:2:frobenius", "prodswap:zmod:2", "zmod:4"]))
    ctx = AlgebraContext(p, parse_ring_spec(spec))
    f, g, h = (data.draw(element_strategy(ctx)) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == ctx.zero()
    # The left module action is compatible with the product
    r = data.draw(st.sampled_from(ctx.ring.elements()))
    assert algebra.scale_left(r, f) * g == algebra.scale_left(r, f * g)


def test_untwisted_matches_twisted_for_identity(ctx_z2):
    elements = list(ctx_z2.enumerate())
    for f, g in itertools.product(elements, repeat=2):
        assert algebra.untwisted_multiply(f, g) == f * g


def test_untwist_transfer_is_multiplicative(ctx_gf4):
    elements = list(ctx_gf4.enumerate())
    rng = np.random.default_rng(seed=3)
    for _ in range(200):
        f, g = (elements[int(i)] for i in rng.integers(len(elements), size=2))
        transfer = algebra.untwist_transfer
        assert transfer(algebra.untwisted_multiply(f, g)) == transfer(f) * transfer(g)


def test_untwist_transfer_needs_automorphism(chain2):
    ctx = AlgebraContext(chain2, parse_ring_spec("prodproj:zmod:2"))
    f = ctx.element({(2, 2): (1, 0)})
    with pytest.raises(exceptions.UnsupportedQuery):
        algebra.untwist_transfer(f)


def test_sandwich(ctx_z2):
    e12 = ctx_z2.basis_e(1, 2)
    assert algebra.sandwich(e12, 1, 2) == e12
    assert algebra.sandwich(ctx_z2.delta(), 1, 2) == ctx_z2.zero()
    assert algebra.sandwich(ctx_z2.delta(), 2, 2) == ctx_z2.basis_e(2)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_sandwich_isolates_one_coefficient(data):
    p = data.draw(st.sampled_from(enumerate_posets(3)))
    spec = data.draw(st.sampled_from(["gf:2:2:frobenius", "prodproj:zmod:2", "zmod:3"]))
    ctx = AlgebraContext(p, parse_ring_spec(spec))
    f = data.draw(element_strategy(ctx))
    for x, y in itertools.product(p.elements, repeat=2):
        expected = ctx.element({(x, y): f[x, y]}) if p.leq(x, y) else ctx.zero()
        assert algebra.sandwich(f, x, y) == expected


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_diagonal_is_multiplicative(data):
    p = data.draw(st.sampled_from(enumerate_posets(3)))
    spec = data.draw(st.sampled_from(["gf:2:2:frobenius", "prodswap:zmod:2", "zmod:4"]))
    ctx = AlgebraContext(p, parse_ring_spec(spec))
    f, g = (data.draw(element_strategy(ctx)) for _ in range(2))
    product = f * g
    for x in p.elements:
        assert product[x, x] == ctx.ring.mul(f[x, x], g[x, x])


def test_context_mismatch(ctx_z2, ctx_gf4):
    with pytest.raises(exceptions.ContextMismatch):
        ctx_z2.delta() * ctx_gf4.delta()
    with pytest.raises(exceptions.ContextMismatch):
        ctx_z2.delta() + ctx_gf4.delta()


def test_random_unit_diagonal(ctx_gf4):
    rng = np.random.default_rng(seed=5)
    for _ in range(20):
        f = ctx_gf4.random_unit(rng)
        assert all(c != 0 for c in f.diagonal())


@pytest.mark.parametrize(
    "coeffs,expected",
    [
        ({}, "0"),
        ({(1, 2): 1, (1, 1): 1}, "1*e[1] + 1*e[1,2]"),
        ({(2, 2): 3, (1, 1): 2}, "w*e[1] + (w+1)*e[2]"),
    ],
)
def test_format_element(ctx_gf4, coeffs, expected):
    f = ctx_gf4.element(coeffs)
    assert algebra.format_element(f) == expected
    assert str(f) == expected


def test_format_product_ring(chain2):
    ctx = AlgebraContext(chain2, parse_ring_spec("prodswap:zmod:3"))
    f = ctx.element({(1, 2): (2, 0)})
    assert str(f) == "(2,0)*e[1,2]"
