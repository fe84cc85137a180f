"""Generating series: MacMahon function, tautological Hilbert-scheme series,
degree-zero 3-fold series and the DT/PT quotient."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb

from vchow.chow import Variety, integrate
from vchow.classes.kclass import ClassError, KClass, chern_of_twist
from vchow.kernel.ring import GradedClass
from vchow.kernel.rational import RationalLike, as_rational
from vchow.kernel.series import SeriesError, TruncatedSeries, series_inv, series_mul, series_rational_power


class SeriesKind(str, Enum):
    MACMAHON = "macmahon"
    CAO_KOOL = "cao_kool"
    DT3_DEGREE_ZERO = "dt3_degree_zero"
    DTPT_QUOTIENT = "dtpt_quotient"


@dataclass(frozen=True)
class DTSeriesRequest:
    kind: SeriesKind
    order: int
    exponent: Fraction = Fraction(0)

    def __post_init__(self):
        if self.order < 0:
            raise SeriesError("order must be non-negative")


def macmahon(order: int) -> TruncatedSeries:
    """prod_{n=1}^{order} (1 - q^n)^(-n), exact to q^order."""
    if order < 0:
        raise SeriesError("order must be non-negative")
    coeffs = [0] * (order + 1)
    coeffs[0] = 1
    for n in range(1, order + 1):
        # (1 - q^n)^(-n) = sum_k C(n+k-1, k) q^(nk)
        weights = [comb(n + k - 1, k) for k in range(order // n + 1)]
        coeffs = [
            sum(weights[k] * coeffs[j - n * k] for k in range(j // n + 1))
            for j in range(order + 1)
        ]
    return TruncatedSeries(coeffs)


def macmahon_signed(order: int) -> TruncatedSeries:
    """M(-q)."""
    return macmahon(order).sign_flip()


def cao_kool_series(c3c1: RationalLike, order: int) -> TruncatedSeries:
    """M(-q)^(∫_X c_3(X) c_1(L))."""
    return series_rational_power(macmahon_signed(order), as_rational(c3c1))


def dt3_degree_zero_series(c3tk: RationalLike, order: int) -> TruncatedSeries:
    """M(-q)^(∫_D c_3(T_D ⊗ K_D)); same engine as :func:`cao_kool_series`."""
    return cao_kool_series(c3tk, order)


def dtpt_quotient(i_series: TruncatedSeries, i0_series: TruncatedSeries) -> TruncatedSeries:
    if not i0_series[0]:
        raise SeriesError("points series must have a unit constant term")
    return series_mul(i_series, series_inv(i0_series))


def run_request(req: DTSeriesRequest) -> TruncatedSeries:
    if req.kind is SeriesKind.MACMAHON:
        return macmahon(req.order)
    if req.kind in (SeriesKind.CAO_KOOL, SeriesKind.DT3_DEGREE_ZERO):
        return cao_kool_series(req.exponent, req.order)
    raise SeriesError("the DT/PT quotient needs explicit input series")


def chern_number_c3c1(x: Variety, tangent: KClass, line: KClass) -> Fraction:
    """∫_X c_3(T_X) c_1(L) on a 4-dimensional variety."""
    if x.dim != 4:
        raise ClassError(f"expected a 4-fold, got dimension {x.dim}")
    if tangent.ring != x.ring or line.ring != x.ring:
        raise ClassError("tangent and line classes must live on the variety")
    if line.rank != 1:
        raise ClassError("L must have rank 1")
    return integrate(x, tangent.c(3) * line.c(1))


def c3_twisted_by_line(tangent: KClass, canonical: KClass) -> GradedClass:
    """c_3(T ⊗ K) for a line bundle K."""
    if canonical.rank != 1:
        raise ClassError("K must have rank 1")
    return chern_of_twist(tangent, canonical.c(1), 3)


def divisor_exponent(d: Variety, tangent_d: KClass, canonical_d: KClass) -> Fraction:
    """∫_D c_3(T_D ⊗ K_D) on a 3-fold."""
    if d.dim != 3:
        raise ClassError(f"expected a 3-fold, got dimension {d.dim}")
    return integrate(d, c3_twisted_by_line(tangent_d, canonical_d))


def lefschetz_exponents_agree(
    x: Variety, tangent_x: KClass, line: KClass, d: Variety, tangent_d: KClass, canonical_d: KClass
) -> bool:
    """Cross-check ∫_D c_3(T_D⊗K_D) = ∫_X c_3(T_X) c_1(L) on user-supplied data."""
    return divisor_exponent(d, tangent_d, canonical_d) == chern_number_c3c1(x, tangent_x, line)
