"""Transmission eigenvalues of clamped Kirchhoff plates.

Boundary-integral discretization of the clamped transmission eigenvalue
problem for a planar scatterer, a contour-integral nonlinear eigensolver,
analytic disk references, far-field synthesis, and eigenvalue recovery from
noisy far-field data.
"""

from plateig.pipeline import transmission_eigenvalues, eigenvalue_table

__all__ = ["transmission_eigenvalues", "eigenvalue_table"]
__version__ = "0.1.0"
