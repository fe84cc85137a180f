"""Univariate power series over the rationals, truncated at a fixed order."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from vchow.kernel.rational import RationalLike, as_rational, format_rational


class SeriesError(ValueError):
    pass


class TruncatedSeries:
    """Coefficients c_0..c_N of a series known exactly modulo q^(N+1).

    Binary operations return a series of the smaller order of the operands.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike]):
        coeffs = tuple(as_rational(c) for c in coeffs)
        if not coeffs:
            raise SeriesError("a series needs at least the constant coefficient")
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value: RationalLike, order: int) -> "TruncatedSeries":
        return cls([value] + [0] * order)

    @classmethod
    def monomial(cls, degree: int, order: int, coeff: RationalLike = 1) -> "TruncatedSeries":
        c = [Fraction(0)] * (order + 1)
        if degree <= order:
            c[degree] = as_rational(coeff)
        return cls(c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def _pair(self, other) -> tuple[Sequence[Fraction], Sequence[Fraction], int]:
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.order)
        n = min(self.order, other.order)
        return self.coeffs[: n + 1], other.coeffs[: n + 1], n

    def __add__(self, other):
        a, b, _ = self._pair(other)
        return TruncatedSeries(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-c for c in self.coeffs)

    def __sub__(self, other):
        a, b, _ = self._pair(other)
        return TruncatedSeries(x - y for x, y in zip(a, b))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TruncatedSeries(c * other for c in self.coeffs)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TruncatedSeries(c / Fraction(other) for c in self.coeffs)
        return series_mul(self, series_inv(other))

    def __pow__(self, a: RationalLike):
        return series_rational_power(self, a)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TruncatedSeries({[str(c) for c in self.coeffs]})"

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def sign_flip(self) -> "TruncatedSeries":
        """Substitute q -> -q."""
        return TruncatedSeries(c if n % 2 == 0 else -c for n, c in enumerate(self.coeffs))

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    n = min(f.order, g.order)
    a, b = f.coeffs, g.coeffs
    out = []
    for k in range(n + 1):
        out.append(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)))
    return TruncatedSeries(out)


def series_inv(f: TruncatedSeries) -> TruncatedSeries:
    a = f.coeffs
    if not a[0]:
        raise SeriesError("series with zero constant term is not invertible")
    inv0 = 1 / a[0]
    g = [inv0]
    for n in range(1, f.order + 1):
        s = sum((a[k] * g[n - k] for k in range(1, n + 1)), Fraction(0))
        g.append(-inv0 * s)
    return TruncatedSeries(g)


def series_log(f: TruncatedSeries) -> TruncatedSeries:
    a = f.coeffs
    if a[0] != 1:
        raise SeriesError("log needs constant term 1")
    # n*g_n = n*a_n - sum_{k=1}^{n-1} k*g_k*a_{n-k}
    g = [Fraction(0)]
    for n in range(1, f.order + 1):
        s = sum((k * g[k] * a[n - k] for k in range(1, n)), Fraction(0))
        g.append(a[n] - s / n)
    return TruncatedSeries(g)


def series_exp(f: TruncatedSeries) -> TruncatedSeries:
    a = f.coeffs
    if a[0]:
        raise SeriesError("exp needs constant term 0")
    g = [Fraction(1)]
    for n in range(1, f.order + 1):
        s = sum((k * a[k] * g[n - k] for k in range(1, n + 1)), Fraction(0))
        g.append(s / n)
    return TruncatedSeries(g)


def series_rational_power(f: TruncatedSeries, a: RationalLike) -> TruncatedSeries:
    """f**a computed as exp(a*log f); requires f(0) = 1."""
    a = as_rational(a)
    if f.coeffs[0] != 1:
        raise SeriesError("rational powers need constant term 1")
    return series_exp(series_log(f) * a)
