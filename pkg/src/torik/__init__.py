"""Exact K-stability invariants of toric test configurations on Gorenstein
toric Fano varieties."""

from .errors import TorikError
from .filtration import (
    FiltrationKind,
    Monomial,
    check_multiplicative,
    closed_form_membership,
    filtration,
    iota,
    section_module,
    valuation,
)
from .plfunc import Mode, PLFunction, is_radically_affine, piece
from .polytope import LatticePolytope, Polytope, dual, from_vertices, is_reflexive, lattice_points
from .roots import enumerate_roots, loewy_socle_invariants, normalize_unique_unipotent
from .toric_kstab import Direction, invariants

__version__ = "0.1.0"
