"""Diagonal splicing of two constructed copulas into a quasi-copula.

The splice uses one constituent above the track and the other below; both
match the shared diagonal on the track, so the result is continuous there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import PsiCandidate, _same_spec
from .construction import GridCopula, _validate_mesh, c_psi_grid_values, c_psi_value
from .errors import BadMesh, SpecMismatch
from .funcspace import INTERNAL_TOL, eval_pl
from .trackmodel import DiagonalSpec


@dataclass(frozen=True)
class SplicedFunction:
    """Two constructed copulas glued along the track (ties go to upper)."""

    upper: PsiCandidate  # used where y >= phi(x)
    lower: PsiCandidate  # used where y < phi(x)
    spec: DiagonalSpec


def make_splice(upper: PsiCandidate, lower: PsiCandidate) -> SplicedFunction:
    if not _same_spec(upper.spec, lower.spec):
        raise SpecMismatch("splice constituents were built for different specs")
    return SplicedFunction(upper, lower, upper.spec)


def splice_value(s: SplicedFunction, u: float, v: float) -> float:
    """Value of the spliced function; branch chosen by the side of the track."""
    if v >= eval_pl(s.spec.track.phi, u):
        return c_psi_value(s.spec, s.upper, u, v)
    return c_psi_value(s.spec, s.lower, u, v)


def splice_grid(s: SplicedFunction, mesh) -> GridCopula:
    """Grid of spliced values; the mesh must include all track knots."""
    mesh = _validate_mesh(mesh)
    for knot in s.spec.track.phi.x:
        if np.min(np.abs(mesh - knot)) > INTERNAL_TOL:
            raise BadMesh(f"mesh must include track knot {knot}")
    upper = c_psi_grid_values(s.spec, s.upper, mesh)
    lower = c_psi_grid_values(s.spec, s.lower, mesh)
    phi_mesh = eval_pl(s.spec.track.phi, mesh)
    above = mesh[None, :] >= phi_mesh[:, None]
    return GridCopula(mesh, np.where(above, upper, lower))
