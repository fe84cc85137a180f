"""Exact quadratic spaces, isotropic reduction and symmetric 3-term resolutions.

A :class:`SymRes` models ``[B -> E^∨ -> B^∨]``: a linear map ``d: B -> E``
into a nondegenerate quadratic space whose image is isotropic, plus a
rational orientation ``λ`` with ``λ² = (-1)^n det(gram)`` (``dim E = 2n``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import sympy

from vchow.kernel.rational import RationalLike, as_rational

Vector = tuple[Fraction, ...]


class QuadFormError(ValueError):
    pass


def _vec(values: Iterable[RationalLike]) -> Vector:
    return tuple(as_rational(v) for v in values)


def _sym(x: Fraction) -> sympy.Rational:
    return sympy.Rational(x.numerator, x.denominator)


def _frac(x) -> Fraction:
    x = sympy.nsimplify(x) if not isinstance(x, sympy.Rational) else x
    return Fraction(int(x.p), int(x.q))


def _matrix(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> sympy.Matrix:
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix([[_sym(v) for v in row] for row in rows])


def _columns(vectors: Sequence[Vector], dim: int) -> sympy.Matrix:
    if not vectors:
        return sympy.zeros(dim, 0)
    return _matrix(vectors).T


def _rank(vectors: Sequence[Vector], dim: int) -> int:
    return _columns(vectors, dim).rank() if vectors else 0


def _extend(start: Sequence[Vector], candidates: Iterable[Vector], dim: int) -> list[Vector]:
    """Greedily add candidates that are independent of what we have so far."""
    chosen: list[Vector] = []
    current = list(start)
    rank = _rank(current, dim)
    for v in candidates:
        trial = current + [v]
        r = _rank(trial, dim)
        if r > rank:
            current, rank = trial, r
            chosen.append(v)
    return chosen


def _standard_basis(dim: int) -> list[Vector]:
    return [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]


@dataclass(frozen=True)
class QuadSpace:
    gram: tuple[Vector, ...]

    def __post_init__(self):
        rows = tuple(_vec(r) for r in self.gram)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise QuadFormError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise QuadFormError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", rows)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def pair(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        g = self.gram
        return sum((u[i] * g[i][j] * v[j] for i in range(self.dim) for j in range(self.dim) if u[i] and v[j]), Fraction(0))

    def q(self, v: Sequence[Fraction]) -> Fraction:
        return self.pair(v, v)

    def matrix(self) -> sympy.Matrix:
        return _matrix(self.gram, self.dim)

    def det(self) -> Fraction:
        if self.dim == 0:
            return Fraction(1)
        return _frac(self.matrix().det())

    def is_nondegenerate(self) -> bool:
        return self.det() != 0

    def __add__(self, other: "QuadSpace") -> "QuadSpace":
        return orthogonal_sum(self, other)


def hyperbolic(copies: int = 1) -> QuadSpace:
    """H^copies with H = [[0, 1], [1, 0]]."""
    n = 2 * copies
    rows = [[0] * n for _ in range(n)]
    for k in range(copies):
        rows[2 * k][2 * k + 1] = rows[2 * k + 1][2 * k] = 1
    return QuadSpace(tuple(tuple(r) for r in rows))


def diagonal(entries: Sequence[RationalLike]) -> QuadSpace:
    n = len(entries)
    return QuadSpace(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))


def orthogonal_sum(a: QuadSpace, b: QuadSpace) -> QuadSpace:
    n, m = a.dim, b.dim
    rows = [list(r) + [Fraction(0)] * m for r in a.gram]
    rows += [[Fraction(0)] * n + list(r) for r in b.gram]
    return QuadSpace(tuple(tuple(r) for r in rows))


def transform(q: QuadSpace, change: Sequence[Sequence[RationalLike]]) -> QuadSpace:
    """Gram matrix in a new basis whose vectors are the *columns* of ``change``."""
    p = _matrix([_vec(r) for r in change])
    g = p.T * q.matrix() * p
    return QuadSpace(tuple(tuple(_frac(g[i, j]) for j in range(g.cols)) for i in range(g.rows)))


@dataclass(frozen=True)
class Subspace:
    ambient: QuadSpace
    basis: tuple[Vector, ...]

    def __post_init__(self):
        basis = tuple(_vec(v) for v in self.basis)
        for v in basis:
            if len(v) != self.ambient.dim:
                raise QuadFormError("basis vector has the wrong length")
        if _rank(basis, self.ambient.dim) != len(basis):
            raise QuadFormError("basis vectors are linearly dependent")
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return _rank(list(self.basis) + [_vec(v)], self.ambient.dim) == self.dim


def is_isotropic(k: Subspace) -> bool:
    q = k.ambient
    return all(q.pair(u, v) == 0 for u in k.basis for v in k.basis)


def orthogonal_complement(q: QuadSpace, vectors: Sequence[Vector]) -> list[Vector]:
    """Basis of {v : <w, v> = 0 for all w in vectors}."""
    if not vectors:
        return _standard_basis(q.dim)
    pairing = _matrix(vectors) * q.matrix()
    return [tuple(_frac(x) for x in col) for col in pairing.nullspace()]


@dataclass(frozen=True)
class Reduction:
    """K^⊥/K realized on a complement W of K inside K^⊥.

    ``frame`` is the basis (K | W | K') of the ambient space used for
    coordinates and orientation bookkeeping.
    """

    source: QuadSpace
    isotropic: tuple[Vector, ...]
    complement: tuple[Vector, ...]
    dual_complement: tuple[Vector, ...]
    reduced: QuadSpace

    def frame(self) -> list[Vector]:
        return list(self.isotropic) + list(self.complement) + list(self.dual_complement)

    def coordinates(self, v: Sequence[Fraction]) -> list[Fraction]:
        frame = self.frame()
        p = _columns(frame, self.source.dim)
        sol = p.solve(_matrix([[x] for x in _vec(v)]))
        return [_frac(x) for x in sol]

    def project(self, v: Sequence[Fraction]) -> Vector:
        """Image in K^⊥/K (W-coordinates) of a vector of K^⊥."""
        coords = self.coordinates(v)
        k, w = len(self.isotropic), len(self.complement)
        if any(coords[k + w :]):
            raise QuadFormError("vector is not orthogonal to the isotropic subspace")
        return tuple(coords[k : k + w])

    def frame_det(self) -> Fraction:
        if self.source.dim == 0:
            return Fraction(1)
        return _frac(_columns(self.frame(), self.source.dim).det())

    def pairing_det(self) -> Fraction:
        """det of the perfect pairing K x K' -> Q."""
        if not self.isotropic:
            return Fraction(1)
        q = self.source
        m = sympy.Matrix([[_sym(q.pair(a, b)) for b in self.dual_complement] for a in self.isotropic])
        return _frac(m.det())


def reduction_data(q: QuadSpace, k: Subspace) -> Reduction:
    if k.ambient != q:
        raise QuadFormError("subspace lives in a different quadratic space")
    if not q.is_nondegenerate():
        raise QuadFormError("quadratic space is degenerate")
    if not is_isotropic(k):
        raise QuadFormError("subspace is not isotropic")
    kb = list(k.basis)
    perp = orthogonal_complement(q, kb)
    w = _extend(kb, perp, q.dim)
    k_dual = _extend(kb + w, _standard_basis(q.dim), q.dim)
    gram = tuple(tuple(q.pair(a, b) for b in w) for a in w)
    return Reduction(q, tuple(kb), tuple(w), tuple(k_dual), QuadSpace(gram))


def reduce_quadspace(q: QuadSpace, k: Subspace) -> QuadSpace:
    return reduction_data(q, k).reduced


# -- invariants ---------------------------------------------------------------


def diagonalize(q: QuadSpace) -> list[Fraction]:
    """Diagonal entries of a congruent diagonal form (unimodular elimination).

    Only elementary operations of determinant ±1 are used, so the product of
    the entries equals det(gram) exactly.
    """
    a = [list(r) for r in q.gram]
    active = list(range(q.dim))
    out: list[Fraction] = []
    while active:
        pivot = next((i for i in active if a[i][i]), None)
        if pivot is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j]), None)
            if pair is None:
                out.extend(Fraction(0) for _ in active)
                break
            i, j = pair
            # e_i <- e_i + e_j makes the diagonal entry 2 a_ij
            for c in range(q.dim):
                a[i][c] += a[j][c]
            for r in range(q.dim):
                a[r][i] += a[r][j]
            pivot = i
        p = a[pivot][pivot]
        for r in active:
            if r == pivot or not a[r][pivot]:
                continue
            f = a[r][pivot] / p
            for c in range(q.dim):
                a[r][c] -= f * a[pivot][c]
            for c in range(q.dim):
                a[c][r] -= f * a[c][pivot]
        out.append(p)
        active.remove(pivot)
    return out


def squarefree_class(x: Fraction) -> int:
    """Square-free integer representing x modulo squares (0 for x = 0)."""
    x = Fraction(x)
    if x == 0:
        return 0
    n = abs(x.numerator * x.denominator)
    rep = 1
    for prime, exp in sympy.factorint(n).items():
        if exp % 2:
            rep *= prime
    return rep if x > 0 else -rep


def quad_invariants(q: QuadSpace) -> tuple[int, int, tuple[int, int]]:
    """(dim, discriminant square class, (positive, negative) inertia)."""
    diag = diagonalize(q)
    det = Fraction(1)
    for d in diag:
        det *= d
    pos = sum(1 for d in diag if d > 0)
    neg = sum(1 for d in diag if d < 0)
    return q.dim, squarefree_class(det), (pos, neg)


# -- symmetric resolutions -------------------------------------------------------


def _is_square(x: Fraction) -> bool:
    if x < 0:
        return False
    from math import isqrt

    return isqrt(x.numerator) ** 2 == x.numerator and isqrt(x.denominator) ** 2 == x.denominator


def rational_sqrt(x: Fraction) -> Fraction:
    from math import isqrt

    if not _is_square(x):
        raise QuadFormError(f"{x} is not the square of a rational")
    return Fraction(isqrt(x.numerator), isqrt(x.denominator))


@dataclass(frozen=True)
class SymRes:
    """d: B -> E with B = Q^b_dim; ``d[j]`` is the image of the j-th basis vector."""

    b_dim: int
    space: QuadSpace
    d: tuple[Vector, ...]
    orientation: Fraction

    def __post_init__(self):
        e = self.space
        if e.dim % 2:
            raise QuadFormError("E must have even dimension")
        if not e.is_nondegenerate():
            raise QuadFormError("E must be nondegenerate")
        d = tuple(_vec(v) for v in self.d)
        if len(d) != self.b_dim:
            raise QuadFormError("d needs one image vector per basis vector of B")
        for v in d:
            if len(v) != e.dim:
                raise QuadFormError("image vector has the wrong length")
        lam = as_rational(self.orientation)
        if lam * lam != self.orientation_target():
            raise QuadFormError("orientation must satisfy λ² = (-1)^n det(gram)")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "orientation", lam)

    @property
    def half_rank(self) -> int:
        return self.space.dim // 2

    def orientation_target(self) -> Fraction:
        return (-1) ** self.half_rank * self.space.det()

    def apply(self, b: Sequence[RationalLike]) -> Vector:
        b = _vec(b)
        dim = self.space.dim
        return tuple(sum((b[j] * self.d[j][i] for j in range(self.b_dim)), Fraction(0)) for i in range(dim))

    @classmethod
    def with_orientation(cls, b_dim: int, space: QuadSpace, d, sign: int = 1) -> "SymRes":
        """Pick λ = sign * sqrt((-1)^n det); fails when that is not a rational square."""
        n = space.dim // 2
        lam = rational_sqrt((-1) ** n * space.det())
        return cls(b_dim, space, tuple(d), lam * sign)


def symres_check(r: SymRes) -> bool:
    """The composite B -> E^∨ -> B^∨ vanishes, i.e. d(B) is isotropic."""
    e = r.space
    return all(e.pair(u, v) == 0 for u in r.d for v in r.d)


def quadratic_descent_check(r: SymRes, samples: int = 20, rng: Optional[random.Random] = None) -> bool:
    """q(v + d(b)) = q(v) for sampled v ⟂ d(B) and b in B."""
    if not symres_check(r):
        raise QuadFormError("symres_check failed: d(B) is not isotropic")
    rng = rng or random.Random(0)
    e = r.space
    perp = orthogonal_complement(e, [v for v in r.d if any(v)])
    for _ in range(samples):
        coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in perp]
        v = tuple(sum((c * p[i] for c, p in zip(coeffs, perp)), Fraction(0)) for i in range(e.dim))
        b = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(r.b_dim)]
        db = r.apply(b)
        moved = tuple(x + y for x, y in zip(v, db))
        if e.q(moved) != e.q(v):
            return False
    return True


def reduce_symres(r: SymRes, d_sub: Sequence[Sequence[RationalLike]], k_sub: Subspace) -> SymRes:
    """G = [(B/D) -> (K^⊥/K) -> (B/D)^∨] with the induced orientation."""
    e = r.space
    d_basis = [_vec(v) for v in d_sub]
    for v in d_basis:
        if len(v) != r.b_dim:
            raise QuadFormError("D basis vector has the wrong length")
    if _rank(d_basis, r.b_dim) != len(d_basis):
        raise QuadFormError("D basis vectors are linearly dependent")
    if k_sub.ambient != e:
        raise QuadFormError("K must be a subspace of E")
    if not is_isotropic(k_sub):
        raise QuadFormError("precondition violated: K is not isotropic")
    for v in d_basis:
        if not k_sub.contains(r.apply(v)):
            raise QuadFormError("precondition violated: d(D) is not contained in K")
    for img in r.d:
        if any(e.pair(img, kv) for kv in k_sub.basis):
            raise QuadFormError("precondition violated: d(B) is not orthogonal to K")
    red = reduction_data(e, k_sub)
    b_complement = _extend(d_basis, _standard_basis(r.b_dim), r.b_dim)
    new_d = tuple(red.project(r.apply(b)) for b in b_complement)
    lam = r.orientation * red.frame_det() / red.pairing_det()
    return SymRes(len(b_complement), red.reduced, new_d, lam)
