"""Virtual K-theory classes, Chern-root bundles and multiplicative classes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from vchow.kernel.rational import bernoulli, binomial, factorial_inverse
from vchow.kernel.ring import GradedClass, GradedRing, RingError


class ClassError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class KClass:
    """Rank plus total Chern class of a virtual sheaf.

    ``honest`` marks a declared vector bundle: its rank is non-negative and its
    Chern classes vanish above the rank.
    """

    rank: int
    chern: GradedClass
    honest: bool = False

    def __post_init__(self):
        total = self.chern
        if total.constant() != 1 or total.part(0) != total.ring.one():
            raise ClassError("total Chern class must have degree-0 component 1")
        if self.honest:
            if self.rank < 0:
                raise ClassError("an honest bundle has non-negative rank")
            if total.max_degree() > self.rank:
                raise ClassError("an honest bundle has no Chern classes above its rank")

    @property
    def ring(self) -> GradedRing:
        return self.chern.ring

    def c(self, i: int) -> GradedClass:
        if i < 0:
            return self.ring.zero()
        return self.chern.part(i)

    def __add__(self, other: "KClass") -> "KClass":
        return k_sum(self, other)

    def __neg__(self) -> "KClass":
        return k_negate(self)

    def __sub__(self, other: "KClass") -> "KClass":
        return k_sum(self, k_negate(other))

    def pullback(self, ring: GradedRing) -> "KClass":
        return KClass(self.rank, ring.embed(self.chern), self.honest)

    def __str__(self):
        kind = "bundle" if self.honest else "class"
        return f"K-{kind}(rank={self.rank}, c={self.chern})"

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_chern(
        cls,
        ring: GradedRing,
        rank: int,
        components: Sequence[Union[GradedClass, str, int]] = (),
        honest: bool = False,
    ) -> "KClass":
        """Build from c_1, c_2, ... given as classes or parseable strings."""
        total = ring.one()
        for i, comp in enumerate(components, start=1):
            c = comp if isinstance(comp, GradedClass) else ring.parse(comp)
            if c.ring != ring:
                raise RingError("Chern class lives in a different ring")
            if not c.is_homogeneous(i):
                raise ClassError(f"c_{i} must be homogeneous of degree {i}")
            total = total + c
        return cls(rank, total, honest)

    @classmethod
    def trivial(cls, ring: GradedRing, rank: int = 1) -> "KClass":
        return cls(rank, ring.one(), honest=rank >= 0)

    @classmethod
    def line(cls, c1: GradedClass) -> "KClass":
        if not c1.is_homogeneous(1):
            raise ClassError("c_1 of a line bundle must have degree 1")
        return cls(1, c1.ring.one() + c1, honest=True)

    @classmethod
    def from_roots(cls, ring: GradedRing, roots: Iterable[GradedClass]) -> "KClass":
        return RootBundle(ring, [(x, 1) for x in roots]).to_kclass()


def _check_same(*classes: KClass) -> GradedRing:
    ring = classes[0].ring
    for k in classes[1:]:
        if k.ring != ring:
            raise RingError("K-classes live on different varieties")
    return ring


def k_sum(xi: KClass, eta: KClass) -> KClass:
    _check_same(xi, eta)
    return KClass(xi.rank + eta.rank, xi.chern * eta.chern, xi.honest and eta.honest)


def k_negate(xi: KClass) -> KClass:
    return KClass(-xi.rank, xi.chern.inverse(), honest=xi.rank == 0 and xi.chern == 1)


def k_dual(xi: KClass) -> KClass:
    ring = xi.ring
    total = ring.zero()
    for d, part in xi.chern.parts().items():
        total = total + (part if d % 2 == 0 else -part)
    return KClass(xi.rank, total, xi.honest)


def k_twist_line(xi: KClass, line: Union[KClass, GradedClass]) -> KClass:
    """Tensor with a line bundle: every Chern root is shifted by c_1(L)."""
    ell = line.c(1) if isinstance(line, KClass) else line
    if isinstance(line, KClass) and line.rank != 1:
        raise ClassError("twisting needs a rank-1 class")
    if ell.ring != xi.ring:
        raise RingError("line bundle lives on a different variety")
    if xi.honest:
        top = xi.rank
    elif xi.ring.has_free_generators:
        raise ClassError("twist of a virtual class is an infinite series over an equivariant ring")
    else:
        top = xi.ring.truncation_dim
    total = xi.ring.zero()
    for m in range(top + 1):
        total = total + chern_of_twist(xi, ell, m)
    return KClass(xi.rank, total, xi.honest)


def segre(xi: KClass) -> GradedClass:
    """Total Segre class s(xi) = 1/c(xi)."""
    return xi.chern.inverse()


def chern_of_twist(xi: KClass, zeta: GradedClass, m: int) -> GradedClass:
    """c_m(xi ⊗ L) = sum_i C(s-i, m-i) c_i(xi) zeta^(m-i), where zeta = c_1(L), s = rank.

    Binomials with negative upper argument follow the falling-factorial rule,
    which makes the identity hold for arbitrary virtual classes.
    """
    if m < 0:
        raise ClassError("m must be non-negative")
    if zeta.ring != xi.ring:
        raise RingError("zeta lives in a different ring")
    if not zeta.is_homogeneous(1):
        raise ClassError("zeta must be a degree-1 class")
    s = xi.rank
    total = xi.ring.zero()
    for i in range(m + 1):
        coeff = binomial(s - i, m - i)
        if coeff:
            ci = xi.c(i)
            if ci:
                total = total + ci * zeta ** (m - i) * coeff
    return total


def euler(xi: KClass) -> GradedClass:
    if not xi.honest:
        raise ClassError("the Euler class is defined for honest bundles only")
    return xi.c(xi.rank)


@dataclass(frozen=True)
class RootBundle:
    """Formal Chern roots with integer multiplicities (negative allowed)."""

    ring: GradedRing
    roots: tuple[tuple[GradedClass, int], ...]

    def __init__(self, ring: GradedRing, roots: Iterable):
        pairs = []
        for item in roots:
            x, mult = item if isinstance(item, tuple) else (item, 1)
            if isinstance(x, (int, Fraction)):
                x = ring.scalar(x)
            if x.ring != ring:
                raise RingError("root lives in a different ring")
            if not x.is_homogeneous(1):
                raise ClassError("Chern roots must be degree-1 classes")
            pairs.append((x, int(mult)))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "roots", tuple(pairs))

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.roots)

    @property
    def is_honest(self) -> bool:
        return all(m >= 0 for _, m in self.roots)

    def dual(self) -> "RootBundle":
        return RootBundle(self.ring, [(-x, m) for x, m in self.roots])

    def __add__(self, other: "RootBundle") -> "RootBundle":
        if other.ring != self.ring:
            raise RingError("root bundles live in different rings")
        return RootBundle(self.ring, self.roots + other.roots)

    def first_chern(self) -> GradedClass:
        total = self.ring.zero()
        for x, m in self.roots:
            total = total + x * m
        return total

    def to_kclass(self) -> KClass:
        total = self.ring.one()
        for x, m in self.roots:
            total = total * (1 + x) ** m
        return KClass(self.rank, total, honest=self.is_honest)

    def _multiplicative(self, coeff) -> GradedClass:
        total = self.ring.one()
        for x, m in self.roots:
            total = total * x.power_series(coeff) ** m
        return total


def _todd_coeff(k: int) -> Fraction:
    return (-1) ** k * bernoulli(k) * factorial_inverse(k)


def todd(rho: RootBundle) -> GradedClass:
    """td = prod x/(1 - e^(-x)), truncated."""
    return rho._multiplicative(_todd_coeff)


def chern_character(rho: RootBundle) -> GradedClass:
    total = rho.ring.zero()
    for x, m in rho.roots:
        total = total + x.exp() * m
    return total


def sqrt_det(xi: KClass) -> GradedClass:
    """Chern character of the square root of det(xi): exp(c_1/2)."""
    return (xi.c(1) * Fraction(1, 2)).exp()


def _require_honest(rho: RootBundle):
    if not rho.is_honest:
        raise ClassError("K-theoretic Euler classes need honest roots")


def k_euler(rho: RootBundle) -> GradedClass:
    """Chern character of sum (-1)^i Λ^i E^∨ = prod (1 - e^(-x))."""
    _require_honest(rho)
    return rho._multiplicative(lambda k: Fraction(0) if k == 0 else -Fraction((-1) ** k) * factorial_inverse(k))


def k_euler_twisted(rho: RootBundle) -> GradedClass:
    """prod (e^(x/2) - e^(-x/2)), the Euler class twisted by sqrt(det)."""
    _require_honest(rho)

    def coeff(k: int) -> Fraction:
        if k % 2 == 0:
            return Fraction(0)
        return 2 * Fraction(1, 2**k) * factorial_inverse(k)

    return rho._multiplicative(coeff)
