"""Exact intersection theory on truncated Chow rings, virtual projective
bundles, generating series and quadratic-space reductions."""

__version__ = "0.1.0"
