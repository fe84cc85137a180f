"""Characteristic classes: Chern/Segre/Todd calculus, square-root Euler classes,
equivariant localization and K-theoretic Euler classes."""

from vchow.classes.equivariant import (
    LocalizedClass,
    equivariant_ring,
    localized,
    sqrt_euler_virtual_normal,
    t_coefficient,
)
from vchow.classes.kclass import (
    ClassError,
    KClass,
    RootBundle,
    chern_character,
    chern_of_twist,
    euler,
    k_dual,
    k_euler,
    k_euler_twisted,
    k_negate,
    k_sum,
    k_twist_line,
    segre,
    sqrt_det,
    todd,
)
from vchow.classes.orthogonal import (
    OrthSplitBundle,
    orth_sum,
    reduce_orth,
    reduction_identity_holds,
    sqrt_euler,
)

__all__ = [
    "ClassError",
    "KClass",
    "LocalizedClass",
    "OrthSplitBundle",
    "RootBundle",
    "chern_character",
    "chern_of_twist",
    "equivariant_ring",
    "euler",
    "k_dual",
    "k_euler",
    "k_euler_twisted",
    "k_negate",
    "k_sum",
    "k_twist_line",
    "localized",
    "orth_sum",
    "reduce_orth",
    "reduction_identity_holds",
    "segre",
    "sqrt_det",
    "sqrt_euler",
    "sqrt_euler_virtual_normal",
    "t_coefficient",
    "todd",
]
