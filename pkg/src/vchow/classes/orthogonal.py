"""Square-root Euler classes of isotropically split orthogonal bundles.

An :class:`OrthSplitBundle` is ``E = Λ ⊕ Λ^∨`` with ``Λ`` split into line
bundles with first Chern classes ``x_1..x_n``; ``Λ`` is maximal isotropic.
The orientation is a bare sign on the chosen splitting and is never inferred.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from vchow.classes.kclass import ClassError, KClass, RootBundle, euler
from vchow.kernel.ring import GradedClass, GradedRing, RingError


@dataclass(frozen=True)
class OrthSplitBundle:
    ring: GradedRing
    roots: tuple[GradedClass, ...]
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ClassError("orientation sign must be +1 or -1")
        roots = tuple(self.roots)
        for x in roots:
            if x.ring != self.ring:
                raise RingError("isotropic root lives in a different ring")
            if not x.is_homogeneous(1):
                raise ClassError("isotropic roots must be degree-1 classes")
        object.__setattr__(self, "roots", roots)

    @property
    def rank(self) -> int:
        return 2 * len(self.roots)

    @property
    def half_rank(self) -> int:
        return len(self.roots)

    def isotropic_part(self) -> KClass:
        return KClass.from_roots(self.ring, self.roots)

    def root_bundle(self) -> RootBundle:
        return RootBundle(self.ring, list(self.roots) + [-x for x in self.roots])

    def to_kclass(self) -> KClass:
        total = self.ring.one()
        for x in self.roots:
            total = total * (1 - x * x)
        return KClass(self.rank, total, honest=True)

    def flip(self) -> "OrthSplitBundle":
        return OrthSplitBundle(self.ring, self.roots, -self.sign)

    def __add__(self, other: "OrthSplitBundle") -> "OrthSplitBundle":
        return orth_sum(self, other)


def orth_sum(e: OrthSplitBundle, f: OrthSplitBundle) -> OrthSplitBundle:
    if e.ring != f.ring:
        raise RingError("orthogonal bundles live on different varieties")
    return OrthSplitBundle(e.ring, e.roots + f.roots, e.sign * f.sign)


def sqrt_euler(e: OrthSplitBundle) -> GradedClass:
    total = e.ring.scalar(e.sign)
    for x in e.roots:
        total = total * x
    return total


def reduce_orth(e: OrthSplitBundle, indices: Iterable[int]) -> tuple[KClass, OrthSplitBundle]:
    """Reduce by the isotropic subbundle K spanned by the selected roots.

    Returns ``(K, K^⊥/K)``; ``sqrt_euler(e) == euler(K) * sqrt_euler(K^⊥/K)``.
    """
    chosen = list(indices)
    n = len(e.roots)
    for i in chosen:
        if not 0 <= i < n:
            raise ClassError(f"root index {i} out of range for {n} isotropic roots")
    if len(set(chosen)) != len(chosen):
        raise ClassError("root indices must be distinct")
    keep = [x for i, x in enumerate(e.roots) if i not in set(chosen)]
    k = KClass.from_roots(e.ring, [e.roots[i] for i in chosen])
    return k, OrthSplitBundle(e.ring, tuple(keep), e.sign)


def reduction_identity_holds(e: OrthSplitBundle, indices: Sequence[int]) -> bool:
    k, reduced = reduce_orth(e, indices)
    return sqrt_euler(e) == euler(k) * sqrt_euler(reduced)
