"""Dimension-truncated graded commutative rings over the rationals.

A ring is presented by generators of positive degree and a triangular
family of monic relations: each relation rewrites a power of one generator
in terms of lower powers of it times polynomials in *earlier* generators.
Power relations ``h^(n+1) = 0``, tensor products of such rings and the
Grothendieck relation of a projective bundle are all of this shape, and for
this shape the rewriting is confluent, so every class has a unique normal
form.  Truncation ideals (``degree > d`` is zero) are layered on top.

Generators flagged ``free`` are exempt from truncation; they model
equivariant parameters such as the weight ``t`` of a torus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from vchow.kernel.rational import RationalLike, as_rational, format_rational

Monomial = tuple[int, ...]
Poly = dict[Monomial, Fraction]


class RingError(ValueError):
    """Raised for unsupported presentations and cross-ring operations."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    free: bool = False


@dataclass(frozen=True)
class Reduction:
    """``g**power == tail`` for the generator at ``index``."""

    index: int
    power: int
    tail: tuple[tuple[Monomial, Fraction], ...]


@dataclass(frozen=True)
class Truncation:
    """Monomials whose degree in ``indices`` exceeds ``cap`` vanish."""

    indices: frozenset[int]
    cap: int


_TRANSFORMS = standard_transformations + (convert_xor,)


@dataclass(frozen=True)
class GradedRing:
    generators: tuple[Generator, ...]
    reductions: tuple[Reduction, ...]
    truncations: tuple[Truncation, ...]
    truncation_dim: int
    _nf_cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    # -- basic structure -------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def has_free_generators(self) -> bool:
        return any(g.free for g in self.generators)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise RingError(f"no generator named {name!r}")

    def degree_of(self, mono: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(mono, self.generators))

    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def _truncated(self, mono: Monomial) -> bool:
        gens = self.generators
        for tr in self.truncations:
            if sum(mono[i] * gens[i].degree for i in tr.indices) > tr.cap:
                return True
        return False

    # -- normal form -----------------------------------------------------

    def normal_form_monomial(self, mono: Monomial) -> Poly:
        cached = self._nf_cache.get(mono)
        if cached is not None:
            return cached
        poly: Poly = {mono: Fraction(1)}
        for red in sorted(self.reductions, key=lambda r: -r.index):
            poly = self._apply_reduction(poly, red)
        poly = {m: c for m, c in poly.items() if not self._truncated(m)}
        self._nf_cache[mono] = poly
        return poly

    def _apply_reduction(self, poly: Poly, red: Reduction) -> Poly:
        out: Poly = {}
        stack = list(poly.items())
        i, r = red.index, red.power
        while stack:
            mono, c = stack.pop()
            if self._truncated(mono):
                continue
            if mono[i] >= r:
                base = list(mono)
                base[i] -= r
                for tm, tc in red.tail:
                    stack.append((tuple(a + b for a, b in zip(base, tm)), c * tc))
            else:
                val = out.get(mono, Fraction(0)) + c
                if val:
                    out[mono] = val
                else:
                    out.pop(mono, None)
        return out

    def normalize(self, poly: Mapping[Monomial, Fraction]) -> Poly:
        out: Poly = {}
        for mono, c in poly.items():
            if not c:
                continue
            for m, d in self.normal_form_monomial(mono).items():
                out[m] = out.get(m, Fraction(0)) + c * d
        return {m: c for m, c in out.items() if c}

    def is_normal_monomial(self, mono: Monomial) -> bool:
        if self._truncated(mono):
            return False
        return all(mono[red.index] < red.power for red in self.reductions)

    def monomial_basis(self, degree: int) -> list[Monomial]:
        """Normal-form monomials of a given degree (no free generators)."""
        if self.has_free_generators:
            raise RingError("monomial basis is infinite in an equivariant ring")
        found = []
        degs = [g.degree for g in self.generators]
        bounds = [degree // d for d in degs]
        for mono in itertools.product(*(range(b + 1) for b in bounds)):
            if self.degree_of(mono) == degree and self.is_normal_monomial(mono):
                found.append(mono)
        return sorted(found, reverse=True)

    # -- element constructors ---------------------------------------------

    def element(self, poly: Mapping[Monomial, RationalLike]) -> "GradedClass":
        return GradedClass(self, self.normalize({m: as_rational(c) for m, c in poly.items()}))

    def scalar(self, value: RationalLike) -> "GradedClass":
        return self.element({self.unit_monomial(): value})

    def one(self) -> "GradedClass":
        return self.scalar(1)

    def zero(self) -> "GradedClass":
        return GradedClass(self, {})

    def gen(self, name: str) -> "GradedClass":
        i = self.index(name)
        mono = tuple(1 if j == i else 0 for j in range(self.ngens))
        return self.element({mono: 1})

    def gens(self) -> tuple["GradedClass", ...]:
        return tuple(self.gen(n) for n in self.names)

    def parse(self, text: Union[str, int, Fraction]) -> "GradedClass":
        """Parse a polynomial expression such as ``"h^2 - 1/2*x*y"``."""
        return self.element(parse_polynomial(text, self.names))

    def embed(self, cls: "GradedClass") -> "GradedClass":
        """Pull a class back along the inclusion of generators, matched by name."""
        if cls.ring == self:
            return cls
        src = cls.ring
        idx = []
        for g in src.generators:
            j = self.index(g.name)
            if self.generators[j].degree != g.degree:
                raise RingError(f"generator {g.name!r} has different degrees")
            idx.append(j)
        poly: Poly = {}
        for mono, c in cls.terms.items():
            new = [0] * self.ngens
            for e, j in zip(mono, idx):
                new[j] += e
            poly[tuple(new)] = c
        return self.element(poly)


def parse_polynomial(text: Union[str, int, Fraction], names: Sequence[str]) -> Poly:
    if isinstance(text, (int, Fraction)):
        return {(0,) * len(names): as_rational(text)}
    syms = [sympy.Symbol(n) for n in names]
    local = dict(zip(names, syms))
    try:
        expr = parse_expr(str(text), local_dict=local, transformations=_TRANSFORMS, evaluate=True)
    except Exception as exc:  # sympy raises a zoo of exception types
        raise RingError(f"cannot parse {text!r}: {exc}") from None
    if not syms:
        if not expr.is_Rational:
            raise RingError(f"{text!r} is not a rational constant")
        return {(): Fraction(int(expr.p), int(expr.q))}
    try:
        poly = sympy.Poly(sympy.expand(expr), *syms)
    except sympy.PolynomialError as exc:
        raise RingError(f"{text!r} is not a polynomial in {list(names)}: {exc}") from None
    out: Poly = {}
    for mono, coeff in poly.terms():
        if not coeff.is_Rational:
            raise RingError(f"{text!r} has a non-rational coefficient {coeff}")
        out[tuple(int(e) for e in mono)] = Fraction(int(coeff.p), int(coeff.q))
    return out


class GradedClass:
    """An element of a :class:`GradedRing`, always stored in normal form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: GradedRing, terms: Poly):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- coercion --------------------------------------------------------

    def _coerce(self, other) -> "GradedClass":
        if isinstance(other, GradedClass):
            if other.ring != self.ring:
                raise RingError("classes live in different rings")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.scalar(other)
        return NotImplemented

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, Fraction(0)) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GradedClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return GradedClass(self.ring, {m: c * v for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        out: Poly = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = tuple(a + b for a, b in zip(m1, m2))
                for m, d in ring.normal_form_monomial(prod).items():
                    out[m] = out.get(m, Fraction(0)) + c1 * c2 * d
        return GradedClass(ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (Fraction(1) / Fraction(other))
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self.ring.scalar(other)
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- graded structure ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def part(self, degree: int) -> "GradedClass":
        ring = self.ring
        return GradedClass(ring, {m: c for m, c in self.terms.items() if ring.degree_of(m) == degree})

    def parts(self) -> dict[int, "GradedClass"]:
        degs = sorted({self.ring.degree_of(m) for m in self.terms})
        return {d: self.part(d) for d in degs}

    def constant(self) -> Fraction:
        return self.terms.get(self.ring.unit_monomial(), Fraction(0))

    def max_degree(self) -> int:
        return max((self.ring.degree_of(m) for m in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((self.ring.degree_of(m) for m in self.terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {self.ring.degree_of(m) for m in self.terms}
        if degree is None:
            return len(degs) <= 1
        return degs <= {degree}

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    # -- nilpotent calculus ----------------------------------------------

    def power_series(self, coeff: Callable[[int], Fraction]) -> "GradedClass":
        """Evaluate ``sum_k coeff(k) * self**k`` for a nilpotent class.

        ``self`` must have zero constant term; the sum stops once the powers
        vanish, which truncation guarantees unless a free generator is involved.
        """
        if self.constant():
            raise RingError("power series need a class without constant term")
        ring = self.ring
        total = ring.scalar(coeff(0))
        power = ring.one()
        limit = ring.truncation_dim + 1
        k = 0
        while True:
            k += 1
            power = power * self
            if power.is_zero():
                return total
            if k > limit:
                raise RingError("class is not nilpotent (involves a free generator)")
            c = coeff(k)
            if c:
                total = total + power * c
        return total

    def inverse(self) -> "GradedClass":
        c0 = self.constant()
        if not c0:
            raise RingError("class has no unit constant term")
        nil = self * (1 / c0) - 1
        return nil.power_series(lambda k: Fraction((-1) ** k)) * (1 / c0)

    def exp(self) -> "GradedClass":
        from vchow.kernel.rational import factorial_inverse

        return self.power_series(factorial_inverse)

    def log(self) -> "GradedClass":
        if self.constant() != 1:
            raise RingError("log needs constant term 1")
        return (self - 1).power_series(lambda k: Fraction((-1) ** (k + 1), k) if k else Fraction(0))

    # -- display ---------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        ring = self.ring
        return sorted(self.terms.items(), key=lambda mc: (-ring.degree_of(mc[0]), tuple(-e for e in mc[0])))

    def monomial_str(self, mono: Monomial) -> str:
        bits = []
        for e, g in zip(mono, self.ring.generators):
            if e == 1:
                bits.append(g.name)
            elif e > 1:
                bits.append(f"{g.name}^{e}")
        return "*".join(bits) if bits else "1"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for mono, c in self.sorted_terms():
            mstr = self.monomial_str(mono)
            mag = abs(c)
            if mstr == "1":
                body = str(mag)
            elif mag == 1:
                body = mstr
            else:
                body = f"{mag}*{mstr}"
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"GradedClass({self})"

    def to_json(self) -> dict[str, str]:
        return {self.monomial_str(m): format_rational(c) for m, c in self.sorted_terms()}


# -- ring constructors -----------------------------------------------------


def _classify_relation(gens: Sequence[Generator], poly: Poly) -> Reduction:
    if not poly:
        raise RingError("relation is identically zero")
    degs = {sum(e * g.degree for e, g in zip(m, gens)) for m in poly}
    if len(degs) != 1:
        raise RingError("relation is not homogeneous")
    lead = max(i for m in poly for i, e in enumerate(m) if e)
    if gens[lead].free:
        raise RingError(f"relation involves the free generator {gens[lead].name!r}")
    power = max(m[lead] for m in poly)
    top = [m for m in poly if m[lead] == power]
    pure = tuple(power if i == lead else 0 for i in range(len(gens)))
    if top != [pure]:
        raise RingError(
            f"unsupported presentation: relation for {gens[lead].name!r} is not monic "
            "in its last generator over the earlier ones"
        )
    for m in poly:
        if any(m[i] for i in range(lead + 1, len(gens))):
            raise RingError("relation involves later generators")
    for m in poly:
        if any(m[i] and gens[i].free for i in range(len(gens))):
            raise RingError("relations may not involve free generators")
    lc = poly[pure]
    tail = tuple((m, -c / lc) for m, c in poly.items() if m != pure)
    return Reduction(lead, power, tail)


def ring_make(
    generators: Iterable[Union[Generator, tuple]],
    relations: Iterable[Union[str, Mapping[Monomial, RationalLike]]],
    truncation_dim: int,
) -> GradedRing:
    """Build a ring from generators ``(name, degree)``, relations and a dimension.

    Relations are polynomials set equal to zero, given either as strings or as
    monomial dictionaries.  Each must be monic in its last generator with all
    other terms involving only earlier generators (lower powers of the lead
    generator allowed).
    """
    gens = tuple(g if isinstance(g, Generator) else Generator(*g) for g in generators)
    names = [g.name for g in gens]
    if len(set(names)) != len(names):
        raise RingError("generator names must be distinct")
    for g in gens:
        if g.degree < 1:
            raise RingError(f"generator {g.name!r} must have positive degree")
    if truncation_dim < 0:
        raise RingError("truncation_dim must be non-negative")
    reductions = []
    for rel in relations:
        poly = parse_polynomial(rel, names) if isinstance(rel, str) else {m: as_rational(c) for m, c in rel.items()}
        poly = {m: c for m, c in poly.items() if c}
        reductions.append(_classify_relation(gens, poly))
    leads = [r.index for r in reductions]
    if len(set(leads)) != len(leads):
        raise RingError("unsupported presentation: two relations share a lead generator")
    bounded = frozenset(i for i, g in enumerate(gens) if not g.free)
    return GradedRing(gens, tuple(sorted(reductions, key=lambda r: r.index)), (Truncation(bounded, truncation_dim),), truncation_dim)


def point_ring() -> GradedRing:
    return ring_make([], [], 0)


def projective_space_ring(n: int, name: str = "h") -> GradedRing:
    return ring_make([(name, 1)], [f"{name}^{n + 1}"], n)


def free_truncated_ring(generators: Iterable[tuple], dim: int) -> GradedRing:
    return ring_make(generators, [], dim)


def _shift(mono: Monomial, offset: int, total: int) -> Monomial:
    return (0,) * offset + tuple(mono) + (0,) * (total - offset - len(mono))


def ring_tensor(a: GradedRing, b: GradedRing) -> GradedRing:
    """Tensor product; each factor keeps its own truncations."""
    names = a.names + b.names
    if len(set(names)) != len(names):
        raise RingError("tensor factors must use distinct generator names")
    n, total = a.ngens, a.ngens + b.ngens
    reds = list(
        Reduction(r.index, r.power, tuple((_shift(m, 0, total), c) for m, c in r.tail)) for r in a.reductions
    )
    reds += [
        Reduction(r.index + n, r.power, tuple((_shift(m, n, total), c) for m, c in r.tail)) for r in b.reductions
    ]
    truncs = list(a.truncations) + [Truncation(frozenset(i + n for i in t.indices), t.cap) for t in b.truncations]
    gens = a.generators + b.generators
    dim = a.truncation_dim + b.truncation_dim
    bounded = frozenset(i for i, g in enumerate(gens) if not g.free)
    truncs.append(Truncation(bounded, dim))
    return GradedRing(gens, tuple(reds), tuple(_dedupe(truncs)), dim)


def _dedupe(truncs: list[Truncation]) -> list[Truncation]:
    out: list[Truncation] = []
    for t in truncs:
        if not t.indices:
            continue
        if any(o.indices == t.indices and o.cap <= t.cap for o in out):
            continue
        out = [o for o in out if not (o.indices == t.indices and o.cap > t.cap)]
        out.append(t)
    return out


def projective_extension(base: GradedRing, name: str, chern: Sequence[GradedClass], rank: int) -> GradedRing:
    """Adjoin ``name`` of degree 1 subject to ``sum_i name^(rank-i) c_i = 0``.

    ``chern`` lists the components c_1, ..., c_rank (homogeneous of degree i)
    in ``base``.  The result is truncated at ``base.truncation_dim + rank - 1``
    and base classes above the base dimension still vanish.
    """
    if rank < 1:
        raise RingError("projective bundle needs rank >= 1")
    if name in base.names:
        raise RingError(f"generator name {name!r} already used by the base")
    n = base.ngens
    total = n + 1
    tail: list[tuple[Monomial, Fraction]] = []
    for i, c in enumerate(chern, start=1):
        if i > rank:
            if not c.is_zero():
                raise RingError("honest bundle has a Chern class above its rank")
            continue
        if c.ring != base:
            raise RingError("Chern classes must live in the base ring")
        if not c.is_homogeneous(i):
            raise RingError(f"c_{i} is not homogeneous of degree {i}")
        for m, v in c.terms.items():
            tail.append((tuple(m) + (rank - i,), -v))
    gens = base.generators + (Generator(name, 1),)
    reds = tuple(
        Reduction(r.index, r.power, tuple((tuple(m) + (0,), c) for m, c in r.tail)) for r in base.reductions
    ) + (Reduction(n, rank, tuple(tail)),)
    dim = base.truncation_dim + rank - 1
    bounded_base = frozenset(i for i, g in enumerate(base.generators) if not g.free)
    truncs = list(base.truncations) + [Truncation(bounded_base, base.truncation_dim)]
    truncs.append(Truncation(bounded_base | {n}, dim))
    return GradedRing(gens, reds, tuple(_dedupe(truncs)), dim)


def with_free_generator(base: GradedRing, name: str = "t", degree: int = 1) -> GradedRing:
    """Adjoin a central generator exempt from every truncation and relation."""
    if name in base.names:
        raise RingError(f"generator name {name!r} already used")
    gens = base.generators + (Generator(name, degree, free=True),)
    reds = tuple(
        Reduction(r.index, r.power, tuple((tuple(m) + (0,), c) for m, c in r.tail)) for r in base.reductions
    )
    return GradedRing(gens, reds, base.truncations, base.truncation_dim)


def iter_monomials(ring: GradedRing, max_degree: int) -> Iterator[Monomial]:
    for d in range(max_degree + 1):
        yield from ring.monomial_basis(d)
