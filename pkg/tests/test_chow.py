import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import BASES, base, rand_class, rand_kclass
from vchow.chow import (
    VarietyError,
    builtin,
    chi_line_on_projective_space,
    from_table,
    integrate,
    point,
    proj_bundle,
    proj_pushforward,
    product,
    projective_space,
)
from vchow.classes import ClassError, KClass
from vchow.kernel import RingError, binomial


def test_integrate_examples():
    p2 = projective_space(2)
    h = p2.gen("h")
    assert integrate(p2, h**2) == 1
    assert integrate(p2, h) == 0
    q = builtin("P1xP1")
    x, y = q.gen("x"), q.gen("y")
    assert integrate(q, (x + y) ** 2) == 2


def test_integrate_ring_mismatch():
    with pytest.raises(RingError):
        integrate(projective_space(2), projective_space(3).gen("h"))


def test_product_integrals():
    v = product(projective_space(1, "a"), projective_space(2, "b"))
    a, b = v.gen("a"), v.gen("b")
    assert integrate(v, a * b**2) == 1
    assert integrate(v, (a + b) ** 3) == 3


def test_from_table_requires_complete_table():
    with pytest.raises(VarietyError, match="missing"):
        from_table([("x", 1), ("y", 1)], ["x^2", "y^2"], 2, {})
    with pytest.raises(VarietyError, match="not top-degree"):
        from_table([("h", 1)], ["h^3"], 2, {"h^2": 1, "h": 1})


def test_from_table_abstract_fourfold():
    # generators c3 (deg 3) and l (deg 1); only c3*l and l^4 survive in degree 4
    x = from_table([("l", 1), ("c", 3)], ["c^2"], 4, {"c*l": 24, "l^4": 7})
    assert integrate(x, x.parse("c*l")) == 24


def test_proj_bundle_over_point():
    pt = point()
    p1 = proj_bundle(pt, KClass.trivial(pt.ring, 2))
    z = p1.zeta
    assert (z * z).is_zero()
    assert integrate(p1.variety, z) == 1
    p2 = proj_bundle(pt, KClass.trivial(pt.ring, 3))
    assert integrate(p2.variety, p2.zeta**2) == 1
    assert p2.dim == 2


def test_hirzebruch_f1():
    p1 = projective_space(1, "p")
    p = p1.gen("p")
    pb = proj_bundle(p1, KClass(2, 1 + p, honest=True))
    z = pb.zeta
    pp = pb.pullback(p)
    assert z * z == -(z * pp)
    assert integrate(pb.variety, z * pp) == 1
    assert integrate(pb.variety, z * z) == -1
    assert proj_pushforward(pb, z * z) == -p


def test_pushforward_examples_p1_over_point():
    pt = point()
    pb = proj_bundle(pt, KClass.trivial(pt.ring, 2))
    assert proj_pushforward(pb, pb.zeta) == pt.ring.one()
    assert proj_pushforward(pb, pb.ring.one()).is_zero()


def test_proj_bundle_needs_honest_positive_rank():
    x = projective_space(2)
    with pytest.raises(ClassError):
        proj_bundle(x, KClass(2, x.ring.one(), honest=False))
    with pytest.raises(VarietyError):
        proj_bundle(x, KClass(0, x.ring.one(), honest=True))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(BASES), st.integers(1, 3))
def test_projection_formula_and_fubini(seed, name, r0):
    rng = random.Random(seed)
    x = base(name)
    k0 = rand_kclass(rng, x.ring, r0, True)
    pb = proj_bundle(x, k0)
    a = rand_class(rng, pb.ring)
    b = rand_class(rng, x.ring)
    push = proj_pushforward(pb, a)
    assert proj_pushforward(pb, a * pb.pullback(b)) == push * b
    assert integrate(pb.variety, a) == integrate(x, push)
    assert proj_pushforward(pb, pb.zeta ** (r0 - 1)) == x.ring.one()
    for k in range(r0 - 1):
        assert proj_pushforward(pb, pb.zeta**k * pb.pullback(b)).is_zero()


def _chi_oracle(n: int, k: int) -> int:
    """Dimension count of degree-k forms in n+1 variables, plus Serre duality for k < 0."""
    if k >= 0:
        count = 0
        # compositions of k into n+1 non-negative parts
        def rec(parts_left, remaining):
            nonlocal count
            if parts_left == 1:
                count += 1
                return
            for first in range(remaining + 1):
                rec(parts_left - 1, remaining - first)

        rec(n + 1, k)
        return count
    dual = -k - n - 1
    return (-1) ** n * _chi_oracle(n, dual) if dual >= 0 else 0


@pytest.mark.parametrize("n", range(0, 5))
def test_riemann_roch_on_projective_space(n):
    for k in range(-5, 6):
        assert chi_line_on_projective_space(n, k) == _chi_oracle(n, k) == binomial(n + k, n)


def test_builtin_names():
    assert builtin("P3").dim == 3
    assert builtin("pt").dim == 0
    with pytest.raises(VarietyError):
        builtin("Q5")


def test_table_keys_must_be_monomials():
    with pytest.raises(VarietyError):
        from_table([("h", 1)], ["h^3"], 2, {"2*h^2": 1})
    y = from_table([("h", 1)], ["h^3"], 2, {"h^2": "1/2"})
    assert integrate(y, y.gen("h") ** 2) == Fraction(1, 2)
