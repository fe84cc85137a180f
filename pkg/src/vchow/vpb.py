"""Pushforward along virtual projective bundles.

For a two-term complex ``K = [K0 -> K1]`` of rank ``r = r0 - r1`` over ``X``
the virtual projective bundle ``p: P(K) -> X`` is cut out of ``P(K0)`` by the
tautological section of ``K1(1)``.  Two independent routes compute
``p_*(c_m(xi(1)) ∩ p^! alpha)``:

* :func:`vpb_pushforward_formula` evaluates the closed binomial formula on ``X``;
* :func:`vpb_pushforward_oracle` multiplies inside the ring of ``P(K0)`` by
  ``e(K1(1))`` and pushes forward through the Grothendieck relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from vchow.chow import Variety, proj_bundle, proj_pushforward, ring_make
from vchow.classes.kclass import ClassError, KClass, chern_of_twist, segre
from vchow.kernel.rational import RationalLike, as_rational, binomial
from vchow.kernel.ring import GradedClass, GradedRing, RingError


@dataclass(frozen=True)
class TwoTermComplex:
    k0: KClass
    k1: KClass
    base: Variety

    def __post_init__(self):
        for k in (self.k0, self.k1):
            if k.ring != self.base.ring:
                raise RingError("complex terms must live on the base")
            if not k.honest:
                raise ClassError("K0 and K1 must be honest bundles")
        if self.k0.rank < 1:
            raise ClassError("K0 must have rank >= 1")

    @property
    def rank(self) -> int:
        return self.k0.rank - self.k1.rank

    def kclass(self) -> KClass:
        return self.k0 - self.k1

    def minus_chern(self) -> GradedClass:
        """c(-K) = c(K1) / c(K0)."""
        return self.k1.chern * segre(self.k0)


@dataclass(frozen=True)
class PushforwardQuery:
    complex: TwoTermComplex
    xi: KClass
    m: int
    alpha: GradedClass

    def __post_init__(self):
        ring = self.complex.base.ring
        if self.xi.ring != ring or self.alpha.ring != ring:
            raise RingError("query data must live on the base of the complex")
        if self.m < 0:
            raise ClassError("m must be non-negative")

    @property
    def base(self) -> Variety:
        return self.complex.base


def pushforward_closed_form(xi: KClass, minus_chern: GradedClass, r: int, m: int, alpha: GradedClass) -> GradedClass:
    """sum_{0<=i<=m} C(s-i, m-i) c_i(xi) c_(m-i+1-r)(-K) alpha."""
    s = xi.rank
    total = alpha.ring.zero()
    for i in range(m + 1):
        j = m - i + 1 - r
        coeff = binomial(s - i, m - i)
        if j < 0 or not coeff:
            continue
        term = xi.c(i) * minus_chern.part(j)
        if term:
            total = total + term * coeff
    return total * alpha


def vpb_pushforward_formula(q: PushforwardQuery) -> GradedClass:
    cx = q.complex
    return pushforward_closed_form(q.xi, cx.minus_chern(), cx.rank, q.m, q.alpha)


def vpb_pushforward_oracle(q: PushforwardQuery) -> GradedClass:
    cx = q.complex
    pb = proj_bundle(cx.base, cx.k0)
    zeta = pb.zeta
    xi = pb.pullback_k(q.xi)
    k1 = pb.pullback_k(cx.k1)
    # p^! alpha = e(K1(1)) ∩ q^* alpha on P(K0)
    integrand = chern_of_twist(xi, zeta, q.m) * chern_of_twist(k1, zeta, k1.rank) * pb.pullback(q.alpha)
    return proj_pushforward(pb, integrand)


# -- Pairs/Sheaves specialization ----------------------------------------------


def sheaves_base_ring() -> GradedRing:
    """Dimension-1 abstract base with u = c_1(Rπ_*(G⊗E)) and v = c_1(Rπ_*G)."""
    return ring_make([("u", 1), ("v", 1)], [], 1)


def pairs_sheaves_pushforward(n: int, big_n: int, m: int, ring: GradedRing | None = None) -> GradedClass:
    """p_*(c_m(Rπ_*(F⊗E)) ∩ [P]) as a multiple of [M], K of rank n and xi of rank N.

    m = n-1 gives C(N, n-1); m = n gives C(N-1, n-1) u - C(N, n) v; else 0.
    """
    if n < 0:
        raise ClassError("n must be non-negative")
    if m < 0:
        raise ClassError("m must be non-negative")
    ring = ring or sheaves_base_ring()
    u, v = ring.gen("u"), ring.gen("v")
    if m == n - 1:
        return ring.scalar(binomial(big_n, n - 1))
    if m == n:
        return u * binomial(big_n - 1, n - 1) - v * binomial(big_n, n)
    return ring.zero()


def pairs_sheaves_query(n: int, big_n: int, m: int) -> PushforwardQuery:
    """Realize the specialization as a general query on the dim-1 base.

    K = [K0 -> O] with K0 of rank n+1 and c(K0) = 1 + v, so rank K = n and
    c(K) = 1 + v; xi has rank N and c(xi) = 1 + u.
    """
    ring = sheaves_base_ring()
    table = {(1, 0): Fraction(0), (0, 1): Fraction(0)}
    base = Variety(ring, table, "M_{n,beta}")
    u, v = ring.gen("u"), ring.gen("v")
    k0 = KClass(n + 1, ring.one() + v, honest=True)
    k1 = KClass.trivial(ring, 1)
    xi = KClass(big_n, ring.one() + u, honest=big_n >= 1)
    return PushforwardQuery(TwoTermComplex(k0, k1, base), xi, m, ring.one())


def tautological_ptgv(n: int, big_n: int, m_e: RationalLike, m_o: RationalLike) -> Fraction:
    """C(N-1, n-1) M(E) - C(N, n) M(O_X); the n = 0 case reduces to -C(N, 0) M(O_X)."""
    if n < 0:
        raise ClassError("n must be non-negative")
    cls = pairs_sheaves_pushforward(n, big_n, n)
    ring = cls.ring
    u_mono = ring.gen("u").sorted_terms()[0][0]
    v_mono = ring.gen("v").sorted_terms()[0][0]
    return cls.coefficient(u_mono) * as_rational(m_e) + cls.coefficient(v_mono) * as_rational(m_o)


def js_coprimality_gate(beta_degree: int, n: int) -> bool:
    return gcd(beta_degree, n) == 1


def js_gv_pushforward(beta_degree: int, n: int, big_n: int, m: int) -> GradedClass:
    """Joyce-Song pairs reuse the Pairs/Sheaves formula, only under coprimality."""
    if not js_coprimality_gate(beta_degree, n):
        raise ClassError(f"degree {beta_degree} and n = {n} are not coprime")
    return pairs_sheaves_pushforward(n, big_n, m)
