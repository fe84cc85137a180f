"""Equivariant parameter rings and their localization at the weight ``t``.

Classes of the form ``c * t^k * (1 + nilpotent)`` with ``c != 0`` become
units once ``t`` is inverted; inverses are finite geometric series because
the non-equivariant part of the ring is nilpotent.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from vchow.classes.kclass import ClassError, KClass, euler
from vchow.classes.orthogonal import OrthSplitBundle
from vchow.kernel.ring import GradedClass, GradedRing, RingError, with_free_generator


def equivariant_ring(base: GradedRing, name: str = "t") -> GradedRing:
    return with_free_generator(base, name, 1)


def weight_index(ring: GradedRing) -> int:
    free = [i for i, g in enumerate(ring.generators) if g.free]
    if len(free) != 1:
        raise RingError("an equivariant ring has exactly one free generator")
    return free[0]


def _base_degree(ring: GradedRing, mono) -> int:
    return sum(e * g.degree for e, g in zip(mono, ring.generators) if not g.free)


def _t_power(ring: GradedRing, k: int) -> GradedClass:
    i = weight_index(ring)
    mono = tuple(k if j == i else 0 for j in range(ring.ngens))
    return ring.element({mono: 1})


class LocalizedClass:
    """``numerator * t^(-shift)`` in the ring with ``t`` inverted."""

    __slots__ = ("numerator", "shift")

    def __init__(self, numerator: GradedClass, shift: int = 0):
        weight_index(numerator.ring)
        self.numerator = numerator
        self.shift = shift

    @property
    def ring(self) -> GradedRing:
        return self.numerator.ring

    def _common(self, other: "LocalizedClass") -> tuple[GradedClass, GradedClass, int]:
        if other.ring != self.ring:
            raise RingError("localized classes live in different rings")
        top = max(self.shift, other.shift)
        a = self.numerator * _t_power(self.ring, top - self.shift)
        b = other.numerator * _t_power(self.ring, top - other.shift)
        return a, b, top

    def _lift(self, other) -> "LocalizedClass":
        if isinstance(other, LocalizedClass):
            return other
        if isinstance(other, GradedClass):
            return LocalizedClass(other)
        if isinstance(other, (int, Fraction)):
            return LocalizedClass(self.ring.scalar(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        a, b, top = self._common(other)
        return LocalizedClass(a + b, top)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedClass(-self.numerator, self.shift)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return LocalizedClass(self.numerator * other.numerator, self.shift + other.shift)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        return self * other.inverse()

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, _ = self._common(other)
        return a == b

    def __hash__(self):
        return hash(tuple(sorted((k, v) for k, v in self.laurent_terms().items())))

    def inverse(self) -> "LocalizedClass":
        ring = self.ring
        ti = weight_index(ring)
        u = self.numerator
        lead = [(m, c) for m, c in u.terms.items() if _base_degree(ring, m) == 0]
        if len(lead) != 1:
            raise ClassError("class is not of the form c*t^k*(1 + nilpotent); not a unit after inverting t")
        mono, c = lead[0]
        k = mono[ti]
        nil = u - ring.element({mono: c})
        depth = ring.truncation_dim
        # u^-1 = (1/c) sum_j (-nil/c)^j t^(-k(j+1)); nil^(depth+1) = 0
        total = ring.zero()
        power = ring.one()
        for j in range(depth + 1):
            total = total + power * _t_power(ring, k * (depth - j))
            power = power * (nil * (-1 / c))
            if power.is_zero():
                break
        return LocalizedClass(total * (1 / c), k * (depth + 1) - self.shift)

    def laurent_terms(self) -> dict[int, GradedClass]:
        """Coefficient of each power of t, as a t-free class."""
        ring = self.ring
        ti = weight_index(ring)
        buckets: dict[int, dict] = {}
        for mono, c in self.numerator.terms.items():
            e = mono[ti] - self.shift
            base = tuple(0 if j == ti else x for j, x in enumerate(mono))
            buckets.setdefault(e, {})[base] = c
        return {e: ring.element(p) for e, p in sorted(buckets.items())}

    def __str__(self):
        terms = self.laurent_terms()
        if not terms:
            return "0"
        name = self.ring.generators[weight_index(self.ring)].name
        bits = []
        for e, coeff in sorted(terms.items(), reverse=True):
            bits.append(f"({coeff})*{name}^{e}" if e else f"({coeff})")
        return " + ".join(bits)

    def __repr__(self):
        return f"LocalizedClass({self})"


def localized(x: Union[GradedClass, LocalizedClass]) -> LocalizedClass:
    return x if isinstance(x, LocalizedClass) else LocalizedClass(x)


def t_coefficient(root: GradedClass) -> Fraction:
    ring = root.ring
    return root.coefficient(_t_power(ring, 1).sorted_terms()[0][0])


def sqrt_euler_virtual_normal(bm: KClass, em: OrthSplitBundle) -> LocalizedClass:
    """e(B^m) / sqrt_e(E^m) after inverting t; every root of E^m must be movable."""
    if bm.ring != em.ring:
        raise RingError("B^m and E^m live in different rings")
    weight_index(bm.ring)
    for x in em.roots:
        if not t_coefficient(x):
            raise ClassError(f"root {x} has zero t-weight (non-movable part present)")
    inv = LocalizedClass(em.ring.scalar(em.sign))
    for x in em.roots:
        inv = inv * LocalizedClass(x).inverse()
    return LocalizedClass(euler(bm)) * inv
