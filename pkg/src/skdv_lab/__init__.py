"""Numerical laboratory for the coupled Schrodinger-KdV system: exact linear
groups, blow-up data, a spectral solver, regularity diagnostics, and an
empirical catalog of the linear and bilinear estimates."""

__version__ = "0.1.0"

from .spectral import Field, Grid1D, SpaceTimeField, make_grid  # noqa: E402,F401
