from vchow.kernel.rational import ExactRational, as_rational, bernoulli, binomial, format_rational
from vchow.kernel.ring import (
    Generator,
    GradedClass,
    GradedRing,
    RingError,
    free_truncated_ring,
    point_ring,
    projective_extension,
    projective_space_ring,
    ring_make,
    ring_tensor,
    with_free_generator,
)
from vchow.kernel.series import (
    SeriesError,
    TruncatedSeries,
    series_exp,
    series_inv,
    series_log,
    series_mul,
    series_rational_power,
)


def class_mul(a: GradedClass, b: GradedClass) -> GradedClass:
    return a * b


__all__ = [
    "ExactRational",
    "Generator",
    "GradedClass",
    "GradedRing",
    "RingError",
    "SeriesError",
    "TruncatedSeries",
    "as_rational",
    "bernoulli",
    "binomial",
    "class_mul",
    "format_rational",
    "free_truncated_ring",
    "point_ring",
    "projective_extension",
    "projective_space_ring",
    "ring_make",
    "ring_tensor",
    "series_exp",
    "series_inv",
    "series_log",
    "series_mul",
    "series_rational_power",
    "with_free_generator",
]
