import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_kclass, rand_orth, rand_roots
from vchow.chow import builtin
from vchow.classes import (
    ClassError,
    KClass,
    LocalizedClass,
    OrthSplitBundle,
    RootBundle,
    chern_character,
    chern_of_twist,
    equivariant_ring,
    euler,
    k_dual,
    k_euler,
    k_euler_twisted,
    k_negate,
    k_sum,
    k_twist_line,
    reduce_orth,
    segre,
    sqrt_det,
    sqrt_euler,
    sqrt_euler_virtual_normal,
    todd,
)
from vchow.kernel import RingError, free_truncated_ring, projective_space_ring

F = Fraction


@pytest.fixture
def p2():
    r = projective_space_ring(2)
    return r, r.gen("h")


def roots_ring(n: int, dim: int):
    """Free ring on formal roots x1..xn truncated at dim; an oracle for universal formulas."""
    r = free_truncated_ring([(f"x{i}", 1) for i in range(1, n + 1)], dim)
    return r, r.gens()


def elementary(xs, k, ring):
    total = ring.zero()
    for combo in combinations(xs, k):
        term = ring.one()
        for x in combo:
            term = term * x
        total = total + term
    return total


# -- KClass operations --------------------------------------------------------------


def test_k_negate_example(p2):
    r, h = p2
    neg = k_negate(KClass.line(h))
    assert neg.rank == -1
    assert neg.chern == 1 - h + h**2


def test_k_sum_with_negation_is_zero(p2):
    r, h = p2
    xi = KClass.from_chern(r, 2, ["3*h", "h^2"])
    total = k_sum(xi, k_negate(xi))
    assert total.rank == 0 and total.chern == r.one()


def test_k_dual_against_two_roots():
    r, (a, b) = roots_ring(2, 4)
    xi = KClass.from_roots(r, [a, b])
    dual = KClass.from_roots(r, [-a, -b])
    assert k_dual(xi) == dual
    assert k_dual(xi).chern == 1 - (a + b) + a * b


def test_k_twist_shifts_roots():
    r, (a, b, l) = roots_ring(3, 4)
    xi = KClass.from_roots(r, [a, b])
    twisted = k_twist_line(xi, KClass.line(l))
    assert twisted == KClass.from_roots(r, [a + l, b + l])


def test_k_twist_virtual_matches_sum_of_twists():
    r, (a, b, c, l) = roots_ring(4, 4)
    xi = KClass.from_roots(r, [a, b]) - KClass.from_roots(r, [c])
    expected = KClass.from_roots(r, [a + l, b + l]) - KClass.from_roots(r, [c + l])
    assert k_twist_line(xi, l).chern == expected.chern


def test_variety_mismatch():
    a = KClass.line(projective_space_ring(2).gen("h"))
    b = KClass.line(projective_space_ring(3).gen("h"))
    with pytest.raises(RingError):
        k_sum(a, b)


def test_honest_validation(p2):
    r, h = p2
    with pytest.raises(ClassError):
        KClass(-1, r.one(), honest=True)
    with pytest.raises(ClassError):
        KClass(1, 1 + h + h**2, honest=True)
    with pytest.raises(ClassError):
        KClass(1, 2 + h)


def test_segre_examples(p2):
    r, h = p2
    assert segre(KClass.trivial(r, 3)) == r.one()
    assert segre(KClass.line(h)) == 1 - h + h**2
    rr = free_truncated_ring([("c1", 1), ("c2", 2)], 4)
    c1, c2 = rr.gen("c1"), rr.gen("c2")
    s = segre(KClass(2, 1 + c1 + c2))
    assert s.part(2) == c1**2 - c2


def test_chern_of_twist_examples():
    r, (a, b, z) = roots_ring(3, 3)
    xi = KClass.from_roots(r, [a, b])
    assert chern_of_twist(xi, z, 0) == r.one()
    assert chern_of_twist(xi, z, 2) == (a + z) * (b + z)
    assert chern_of_twist(xi, z, 2) == xi.c(2) + xi.c(1) * z + z**2
    zero = KClass(0, r.one())
    assert chern_of_twist(zero, z, 1).is_zero()
    with pytest.raises(ClassError):
        chern_of_twist(xi, z, -1)


def test_chern_of_twist_zero_zeta_is_chern_class():
    r, (a, b, c) = roots_ring(3, 3)
    xi = KClass.from_roots(r, [a, b, c]) - KClass.from_roots(r, [a])
    for m in range(4):
        assert chern_of_twist(xi, r.zero(), m) == xi.c(m)


def test_twisted_c3_expansion_against_roots():
    r, (a, b, c, k) = roots_ring(4, 3)
    t = KClass.from_roots(r, [a, b, c])
    expected = (a + k) * (b + k) * (c + k)
    assert chern_of_twist(t, k, 3) == expected
    assert expected == t.c(3) + t.c(2) * k + t.c(1) * k**2 + k**3


def test_euler_examples(p2):
    r, h = p2
    assert euler(KClass.trivial(r, 2)).is_zero()
    assert euler(KClass.line(h)) == h
    assert euler(k_sum(KClass.line(h), KClass.line(h))) == h**2
    with pytest.raises(ClassError):
        euler(k_negate(KClass.line(h)))


# -- Todd, character ----------------------------------------------------------------


def test_todd_examples():
    r, (x,) = roots_ring(1, 2)
    assert todd(RootBundle(r, [])) == r.one()
    assert todd(RootBundle(r, [x])) == 1 + x / 2 + x**2 / 12


def test_chern_character_line_on_p2(p2):
    r, h = p2
    assert chern_character(RootBundle(r, [h])) == 1 + h + h**2 / 2


def test_ch_and_td_match_universal_polynomials():
    r, xs = roots_ring(4, 4)
    rho = RootBundle(r, xs)
    c1, c2, c3, c4 = (elementary(xs, k, r) for k in range(1, 5))
    ch = (
        4
        + c1
        + (c1**2 - 2 * c2) / 2
        + (c1**3 - 3 * c1 * c2 + 3 * c3) / 6
        + (c1**4 - 4 * c1**2 * c2 + 4 * c1 * c3 + 2 * c2**2 - 4 * c4) / 24
    )
    td = (
        1
        + c1 / 2
        + (c1**2 + c2) / 12
        + c1 * c2 / 24
        + (-(c1**4) + 4 * c1**2 * c2 + 3 * c2**2 + c1 * c3 - c4) / 720
    )
    assert chern_character(rho) == ch
    assert todd(rho) == td


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_whitney_and_multiplicativity(seed):
    rng = random.Random(seed)
    ring = builtin("P1xP1").ring
    a, b = rand_roots(rng, ring), rand_roots(rng, ring)
    assert (a + b).to_kclass().chern == a.to_kclass().chern * b.to_kclass().chern
    assert chern_character(a + b) == chern_character(a) + chern_character(b)
    assert todd(a + b) == todd(a) * todd(b)
    xi = rand_kclass(rng, ring, rng.randint(-2, 3), False)
    assert segre(xi) * xi.chern == ring.one()


# -- square-root Euler classes -------------------------------------------------------


def test_sqrt_euler_examples(p2):
    r, h = p2
    assert sqrt_euler(OrthSplitBundle(r, (h,))) == h
    assert sqrt_euler(OrthSplitBundle(r, (h,), -1)) == -h
    assert sqrt_euler(OrthSplitBundle(r, (h, h))) == h**2


def test_orth_bundle_chern_has_no_odd_part():
    r, (a, b) = roots_ring(2, 4)
    e = OrthSplitBundle(r, (a, b))
    c = e.to_kclass().chern
    assert c.part(1).is_zero() and c.part(3).is_zero()
    assert c == (1 + a) * (1 - a) * (1 + b) * (1 - b)
    assert e.rank == 4


def test_reduce_orth_examples():
    r, (a, b) = roots_ring(2, 2)
    e = OrthSplitBundle(r, (a, b))
    k, red = reduce_orth(e, [0])
    assert red.roots == (b,)
    assert sqrt_euler(e) == euler(k) * sqrt_euler(red)
    k, red = reduce_orth(e, [])
    assert red == e and euler(k) == r.one()
    k, red = reduce_orth(e, [0, 1])
    assert red.rank == 0 and sqrt_euler(red) == r.one()
    assert sqrt_euler(e) == euler(k)
    with pytest.raises(ClassError):
        reduce_orth(e, [2])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["P2", "P1xP1"]))
def test_sqrt_euler_laws(seed, name):
    rng = random.Random(seed)
    ring = builtin(name).ring
    e, f = rand_orth(rng, ring), rand_orth(rng, ring)
    assert sqrt_euler(e + f) == sqrt_euler(e) * sqrt_euler(f)
    assert euler(e.to_kclass()) == (-1) ** e.half_rank * sqrt_euler(e) ** 2
    for size in range(e.half_rank + 1):
        for idx in combinations(range(e.half_rank), size):
            k, red = reduce_orth(e, idx)
            assert sqrt_euler(e) == euler(k) * sqrt_euler(red)


# -- equivariant -----------------------------------------------------------------------


def test_virtual_normal_examples():
    base = projective_space_ring(2)
    ring = equivariant_ring(base)
    t, h = ring.gen("t"), ring.gen("h")
    one_over_t = sqrt_euler_virtual_normal(KClass(0, ring.one(), honest=True), OrthSplitBundle(ring, (t,)))
    assert one_over_t.laurent_terms() == {-1: ring.one()}
    cancel = sqrt_euler_virtual_normal(KClass(1, 1 + t, honest=True), OrthSplitBundle(ring, (t,)))
    assert cancel == LocalizedClass(ring.one())
    ratio = sqrt_euler_virtual_normal(KClass(0, ring.one(), honest=True), OrthSplitBundle(ring, (t + h,)))
    assert ratio.laurent_terms() == {-3: h**2, -2: -h, -1: ring.one()}
    assert ratio * LocalizedClass(t + h) == LocalizedClass(ring.one())


def test_virtual_normal_rejects_fixed_roots():
    ring = equivariant_ring(projective_space_ring(2))
    with pytest.raises(ClassError, match="non-movable"):
        sqrt_euler_virtual_normal(KClass(0, ring.one(), honest=True), OrthSplitBundle(ring, (ring.gen("h"),)))


def test_localized_inverse_of_non_unit():
    ring = equivariant_ring(projective_space_ring(2))
    with pytest.raises(ClassError):
        LocalizedClass(ring.gen("h")).inverse()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(-3, 3).filter(bool), st.integers(-3, 3), st.integers(-3, 3))
def test_localized_inverse_property(k, c, a, b):
    ring = equivariant_ring(projective_space_ring(2))
    t, h = ring.gen("t"), ring.gen("h")
    u = LocalizedClass(c * t**k + a * t ** (k - 1) * h + b * h**2 * t ** max(k - 2, 0))
    assert u * u.inverse() == LocalizedClass(ring.one())


# -- sqrt det and K-theoretic Euler ----------------------------------------------------------


def test_sqrt_det_examples(p2):
    r, h = p2
    assert sqrt_det(KClass.trivial(r, 2)) == r.one()
    line = KClass.line(h)
    assert sqrt_det(line) == 1 + h / 2 + h**2 / 8
    assert sqrt_det(k_sum(line, line)) == h.exp()
    assert sqrt_det(line) ** 2 == h.exp()


def test_k_euler_twisted_single_root_against_sympy():
    r, (x,) = roots_ring(1, 7)
    got = k_euler_twisted(RootBundle(r, [x]))
    s = sympy.Symbol("s")
    series = sympy.series(sympy.exp(s / 2) - sympy.exp(-s / 2), s, 0, 8).removeO()
    poly = sympy.Poly(series, s)
    expected = r.zero()
    for (deg,), coeff in poly.terms():
        expected = expected + x**deg * F(int(coeff.p), int(coeff.q))
    assert got == expected
    assert got.part(3) == x**3 / 24


def test_k_euler_examples():
    r, (x, y) = roots_ring(2, 3)
    assert k_euler_twisted(RootBundle(r, [])) == r.one()
    rho = RootBundle(r, [x, y])
    assert k_euler_twisted(rho) == sqrt_det(rho.to_kclass()) * k_euler(rho)
    assert k_euler_twisted(rho.dual()) == k_euler_twisted(rho)
    with pytest.raises(ClassError):
        k_euler(RootBundle(r, [(x, -1)]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_twisted_euler_antisymmetry(seed):
    rng = random.Random(seed)
    ring = builtin(rng.choice(["P2", "P1xP1", "P3"])).ring
    rho = rand_roots(rng, ring)
    assert k_euler_twisted(rho.dual()) == (-1) ** rho.rank * k_euler_twisted(rho)
