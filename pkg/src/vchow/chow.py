"""Varieties as truncated graded rings with a degree map, and projective bundles.

For a bundle ``K0`` of rank ``r0`` on ``X`` the projective bundle ``P(K0)`` of
lines has ring ``A*(X)[z]/(sum_i z^(r0-i) c_i(K0))`` where ``z = c_1(O(1))``.
Pushforward to ``X`` sends ``z^k`` to the Segre class ``s_(k-r0+1)(K0)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from vchow.classes.kclass import ClassError, KClass, RootBundle, chern_character, segre, todd
from vchow.kernel.rational import RationalLike, as_rational
from vchow.kernel.ring import (
    GradedClass,
    GradedRing,
    Monomial,
    RingError,
    parse_polynomial,
    point_ring,
    projective_extension,
    projective_space_ring,
    ring_make,
    ring_tensor,
)


class VarietyError(ValueError):
    pass


@dataclass(frozen=True)
class Variety:
    ring: GradedRing
    integrals: Mapping[Monomial, Fraction] = field(hash=False)
    name: str = ""

    def __post_init__(self):
        if self.ring.has_free_generators:
            raise VarietyError("a variety ring cannot carry equivariant parameters")
        table = {tuple(m): as_rational(v) for m, v in self.integrals.items()}
        top = set(self.ring.monomial_basis(self.dim))
        unknown = set(table) - top
        if unknown:
            bad = ", ".join(self.ring.one().monomial_str(m) for m in sorted(unknown))
            raise VarietyError(f"integration table has entries that are not top-degree normal monomials: {bad}")
        missing = top - set(table)
        if missing:
            bad = ", ".join(self.ring.one().monomial_str(m) for m in sorted(missing))
            raise VarietyError(f"integration table is missing top-degree monomials: {bad}")
        object.__setattr__(self, "integrals", table)

    @property
    def dim(self) -> int:
        return self.ring.truncation_dim

    def __hash__(self):
        return hash((self.ring, frozenset(self.integrals.items())))

    def __str__(self):
        return self.name or f"Variety(dim={self.dim}, gens={list(self.ring.names)})"

    def gen(self, name: str) -> GradedClass:
        return self.ring.gen(name)

    def parse(self, text) -> GradedClass:
        return self.ring.parse(text)


def integrate(x: Variety, a: GradedClass) -> Fraction:
    if a.ring != x.ring:
        raise RingError("class does not live on this variety")
    total = Fraction(0)
    for mono, c in a.part(x.dim).terms.items():
        total += c * x.integrals[mono]
    return total


# -- constructors -----------------------------------------------------------


def point() -> Variety:
    ring = point_ring()
    return Variety(ring, {(): Fraction(1)}, "pt")


def projective_space(n: int, name: str = "h") -> Variety:
    if n < 0:
        raise VarietyError("dimension must be non-negative")
    if n == 0:
        return point()
    ring = projective_space_ring(n, name)
    return Variety(ring, {(n,): Fraction(1)}, f"P{n}")


def product(x: Variety, y: Variety) -> Variety:
    ring = ring_tensor(x.ring, y.ring)
    table = {}
    for mx, vx in x.integrals.items():
        for my, vy in y.integrals.items():
            table[tuple(mx) + tuple(my)] = vx * vy
    return Variety(ring, table, f"{x}x{y}")


def from_table(
    generators,
    relations,
    dim: int,
    integrals: Mapping[str, RationalLike],
    name: str = "",
) -> Variety:
    """A variety from a raw presentation and an integration table.

    Table keys are monomials written as strings (``"x*y"``, ``"c3*l"``).
    """
    ring = ring_make(generators, relations, dim)
    table: dict[Monomial, Fraction] = {}
    for key, value in integrals.items():
        poly = parse_polynomial(key, ring.names)
        if len(poly) != 1 or next(iter(poly.values())) != 1:
            raise VarietyError(f"integration key {key!r} is not a monomial")
        table[next(iter(poly))] = as_rational(value)
    return Variety(ring, table, name)


def builtin(name: str) -> Variety:
    """``pt``, ``P<n>`` and products such as ``P1xP1``."""
    parts = name.replace("×", "x").split("x")
    varieties = []
    letters = iter(["x", "y", "w", "v", "u"])
    for part in parts:
        part = part.strip()
        if part in ("pt", "point"):
            varieties.append(point())
        elif part.startswith("P") and part[1:].isdigit():
            n = int(part[1:])
            gen = "h" if len(parts) == 1 else next(letters)
            varieties.append(projective_space(n, gen))
        else:
            raise VarietyError(f"unknown built-in variety {name!r}")
    out = varieties[0]
    for v in varieties[1:]:
        out = product(out, v)
    return Variety(out.ring, out.integrals, name)


# -- projective bundles -------------------------------------------------------


@dataclass(frozen=True)
class ProjBundleSpace:
    base: Variety
    bundle: KClass
    variety: Variety
    zeta_name: str

    @property
    def ring(self) -> GradedRing:
        return self.variety.ring

    @property
    def rank(self) -> int:
        return self.bundle.rank

    @property
    def dim(self) -> int:
        return self.variety.dim

    @property
    def zeta(self) -> GradedClass:
        return self.ring.gen(self.zeta_name)

    def pullback(self, b: GradedClass) -> GradedClass:
        if b.ring != self.base.ring:
            raise RingError("class does not live on the base")
        return self.ring.embed(b)

    def pullback_k(self, xi: KClass) -> KClass:
        if xi.ring != self.base.ring:
            raise RingError("K-class does not live on the base")
        return xi.pullback(self.ring)

    def zeta_expansion(self, a: GradedClass) -> dict[int, GradedClass]:
        """Write ``a`` as ``sum_k z^k * b_k`` with base classes ``b_k``."""
        if a.ring != self.ring:
            raise RingError("class does not live on this projective bundle")
        zi = self.ring.index(self.zeta_name)
        buckets: dict[int, dict] = {}
        for mono, c in a.terms.items():
            buckets.setdefault(mono[zi], {})[mono[:zi] + mono[zi + 1 :]] = c
        return {k: self.base.ring.element(p) for k, p in sorted(buckets.items())}


def proj_bundle(x: Variety, k0: KClass, zeta: str = "z") -> ProjBundleSpace:
    if k0.ring != x.ring:
        raise RingError("bundle does not live on the base")
    if not k0.honest:
        raise ClassError("projective bundles need an honest bundle")
    r0 = k0.rank
    if r0 < 1:
        raise VarietyError("projective bundle needs rank >= 1")
    chern = [k0.c(i) for i in range(1, r0 + 1)]
    ring = projective_extension(x.ring, zeta, chern, r0)
    table = {tuple(m) + (r0 - 1,): v for m, v in x.integrals.items()}
    name = f"P({k0})" if not x.name else f"P_{x.name}(rank {r0})"
    return ProjBundleSpace(x, k0, Variety(ring, table, name), zeta)


def push_zeta_polynomial(pb: ProjBundleSpace, coeffs: Mapping[int, GradedClass]) -> GradedClass:
    """Push ``sum_k z^k * q^*(b_k)`` forward using ``q_*(z^k) = s_(k-r0+1)(K0)``.

    The coefficients need not come from a normal form; this is the Segre-class
    route of the pushforward and is independent of the ring reduction.
    """
    s = segre(pb.bundle)
    r0 = pb.rank
    total = pb.base.ring.zero()
    for k, b in coeffs.items():
        idx = k - r0 + 1
        if idx < 0 or b.is_zero():
            continue
        total = total + s.part(idx) * b
    return total


def proj_pushforward(pb: ProjBundleSpace, a: GradedClass) -> GradedClass:
    return push_zeta_polynomial(pb, pb.zeta_expansion(a))



# -- Riemann-Roch -------------------------------------------------------------


def hirzebruch_chi(x: Variety, tangent: RootBundle, bundle: RootBundle) -> Fraction:
    """χ(X, V) = ∫_X ch(V) td(T_X) from Chern roots."""
    if tangent.ring != x.ring or bundle.ring != x.ring:
        raise RingError("root bundles must live on the variety")
    return integrate(x, chern_character(bundle) * todd(tangent))


def projective_tangent_roots(x: Variety) -> RootBundle:
    """T_{P^n} = (n+1) O(1) - O; the trivial summand has Todd class 1."""
    if len(x.ring.generators) != 1:
        raise VarietyError("expected a projective space with one hyperplane generator")
    h = x.ring.gens()[0]
    return RootBundle(x.ring, [(h, x.dim + 1)])


def chi_line_on_projective_space(n: int, k: int) -> Fraction:
    """∫_{P^n} td(T) e^{k h}; equals C(n+k, n) by Riemann-Roch."""
    x = projective_space(n)
    if n == 0:
        return Fraction(1)
    h = x.ring.gens()[0]
    return hirzebruch_chi(x, projective_tangent_roots(x), RootBundle(x.ring, [(h * k, 1)]))
