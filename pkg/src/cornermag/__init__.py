"""Ground-state energies of magnetic Neumann Laplacians on corner domains.

The package computes the lowest local ground-state energy of the semiclassical
magnetic Laplacian on 2D polygons and 3D straight polyhedra: tangent model
energies per stratum (full space, half-space, wedge, 3D cone), the de Gennes
band function and its minimum Theta_0, the half-space angle function sigma,
plane-sector and wedge energies, the case (i)/(ii) dichotomy with decay
certificates, and semiclassical eigenvalue bounds checked against a direct 2D
finite-difference oracle.
"""

from .errors import (
    CornermagError, CurlMismatch, InvalidDomain, IoError, MeshFailure,
    NoConvergence, NotCaseOne, ParseError, ResourceLimit, UnsupportedGeometry,
    ValidationError, ZeroField,
)

__version__ = "0.1.0"
