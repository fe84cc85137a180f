"""Seeded random generators shared by the unit and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from vchow import chow
from vchow.classes import KClass, OrthSplitBundle, RootBundle
from vchow.kernel.ring import GradedClass, GradedRing
from vchow.quadform import QuadSpace, Subspace, SymRes, hyperbolic, transform
from vchow.vpb import PushforwardQuery, TwoTermComplex

BASES = ("pt", "P1", "P2", "P1xP1")


def base(name: str) -> chow.Variety:
    return chow.builtin(name)


def rand_q(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 1) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def rand_homogeneous(rng: random.Random, ring: GradedRing, degree: int, den: int = 1) -> GradedClass:
    if degree > ring.truncation_dim:
        return ring.zero()
    terms = {m: rand_q(rng, den=den) for m in ring.monomial_basis(degree)}
    return ring.element(terms)


def rand_class(rng: random.Random, ring: GradedRing, den: int = 1) -> GradedClass:
    total = ring.zero()
    for d in range(ring.truncation_dim + 1):
        total = total + rand_homogeneous(rng, ring, d, den)
    return total


def rand_kclass(rng: random.Random, ring: GradedRing, rank: int, honest: bool) -> KClass:
    top = min(rank, ring.truncation_dim) if honest else ring.truncation_dim
    comps = [rand_homogeneous(rng, ring, i) for i in range(1, max(top, 0) + 1)]
    return KClass.from_chern(ring, rank, comps, honest)


def rand_query(rng: random.Random) -> PushforwardQuery:
    x = base(rng.choice(BASES))
    ring = x.ring
    r0 = rng.randint(1, 3)
    r1 = rng.randint(0, 2)
    k0 = rand_kclass(rng, ring, r0, True)
    k1 = rand_kclass(rng, ring, r1, True)
    s = rng.randint(-2, 3)
    xi = rand_kclass(rng, ring, s, s >= 0 and rng.random() < 0.5)
    m = rng.randint(0, x.dim + r0 - 1)
    alpha = rand_class(rng, ring)
    return PushforwardQuery(TwoTermComplex(k0, k1, x), xi, m, alpha)


def rand_degree_one(rng: random.Random, ring: GradedRing, allow_zero: bool = True) -> GradedClass:
    while True:
        x = rand_homogeneous(rng, ring, 1)
        if allow_zero or x:
            return x


def rand_orth(rng: random.Random, ring: GradedRing, n: int | None = None) -> OrthSplitBundle:
    n = rng.randint(0, 3) if n is None else n
    return OrthSplitBundle(ring, tuple(rand_degree_one(rng, ring) for _ in range(n)), rng.choice((1, -1)))


def rand_roots(rng: random.Random, ring: GradedRing, max_rank: int = 4) -> RootBundle:
    roots = [(rand_degree_one(rng, ring), 1) for _ in range(rng.randint(0, max_rank))]
    return RootBundle(ring, roots)


# -- quadratic forms -------------------------------------------------------------


def rand_invertible(rng: random.Random, n: int) -> list[list[Fraction]]:
    """Product of a random unit lower and a random unit upper triangular matrix, then a permutation."""
    low = [[Fraction(1) if i == j else (rand_q(rng, -2, 2) if j < i else Fraction(0)) for j in range(n)] for i in range(n)]
    up = [[rand_q(rng, 1, 3) if i == j else (rand_q(rng, -2, 2) if j > i else Fraction(0)) for j in range(n)] for i in range(n)]
    prod = [[sum((low[i][k] * up[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    return [prod[perm[i]] for i in range(n)]


def solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan on an invertible matrix; independent of the sympy path in the package."""
    n = len(mat)
    a = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def det(mat: list[list[Fraction]]) -> Fraction:
    n = len(mat)
    a = [list(r) for r in mat]
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            out = -out
        out *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return out


def split_space(rng: random.Random, n: int, extra: int = 0):
    """A disguised H^n ⊥ diag(...) together with the change of basis.

    Returns (Q, P, diag) with Q = P^T (H^n ⊥ diag) P.  Vectors P^{-1} e_{2i}
    (0-based even positions) span a maximal isotropic subspace of the H^n part.
    """
    diag = [rand_q(rng, 1, 4) * rng.choice((1, -1)) for _ in range(extra)]
    h = hyperbolic(n)
    dim = 2 * n + extra
    rows = [list(r) + [Fraction(0)] * extra for r in h.gram]
    rows += [[Fraction(0)] * (2 * n) + [diag[i] if j == i else Fraction(0) for j in range(extra)] for i in range(extra)]
    p = rand_invertible(rng, dim)
    q = transform(QuadSpace(tuple(tuple(r) for r in rows)), p)
    return q, p, diag


def pull(p: list[list[Fraction]], w: list[Fraction]) -> tuple[Fraction, ...]:
    """P^{-1} w."""
    return tuple(solve(p, list(w)))


def unit(dim: int, i: int) -> list[Fraction]:
    return [Fraction(int(i == j)) for j in range(dim)]


def isotropic_subspace(rng: random.Random, q: QuadSpace, p, n: int, k: int) -> Subspace:
    """k random independent combinations of the standard isotropic vectors, pulled back."""
    dim = q.dim
    picks = rng.sample(range(n), k)
    vecs = []
    for pos, idx in enumerate(picks):
        w = unit(dim, 2 * idx)
        # mix in later isotropic directions only: unit triangular, so independent
        for other in picks[pos + 1 :]:
            if rng.random() < 0.5:
                w = [a + rand_q(rng, -2, 2) * b for a, b in zip(w, unit(dim, 2 * other))]
        vecs.append(pull(p, w))
    return Subspace(q, tuple(vecs))


def symres_instance(rng: random.Random, n: int | None = None):
    """(R, L, P) with d(B) inside the maximal isotropic span L of the split part."""
    n = rng.randint(1, 3) if n is None else n
    q, p, _ = split_space(rng, n)
    dim = 2 * n
    iso = [pull(p, unit(dim, 2 * i)) for i in range(n)]
    b_dim = rng.randint(0, n + 1)
    d = []
    for _ in range(b_dim):
        coeffs = [rand_q(rng, -2, 2) for _ in range(n)]
        d.append(tuple(sum((c * v[j] for c, v in zip(coeffs, iso)), Fraction(0)) for j in range(dim)))
    r = SymRes.with_orientation(b_dim, q, d, rng.choice((1, -1)))
    return r, iso, p
