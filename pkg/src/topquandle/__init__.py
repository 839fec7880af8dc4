"""Quandle invariants of links presented as braid closures.

Finite quandles give exact counts of braid fixed points and diagram
colourings; continuous quandles give fixed-point varieties that are sampled
numerically and summarised by component counts and local dimensions.
"""

from .braid import FIGURE_EIGHT, HOPF, TREFOIL, BraidWord, act, conjugate, parse_braid, stabilize
from .families import great_circle_oracle, sl2_solution_family
from .finite import diagram_colourings, fixed_points, group_hom_count, orbit_sizes
from .geometric import (ComplexSphere, Grassmannian, ProjectiveSpace, SL2Quandle, Sphere,
                        geometric_quandle)
from .quandles import (QuandleTable, alexander_quandle, conjugation_quandle, dihedral_quandle,
                       verify_axioms)
from .solver import SolveConfig, refine, report, residual, sample_solutions

__version__ = "0.1.0"

__all__ = [
    "BraidWord", "parse_braid", "act", "conjugate", "stabilize", "TREFOIL", "FIGURE_EIGHT", "HOPF",
    "QuandleTable", "verify_axioms", "dihedral_quandle", "alexander_quandle", "conjugation_quandle",
    "fixed_points", "diagram_colourings", "group_hom_count", "orbit_sizes",
    "Sphere", "ComplexSphere", "ProjectiveSpace", "Grassmannian", "SL2Quandle", "geometric_quandle",
    "great_circle_oracle", "sl2_solution_family",
    "SolveConfig", "refine", "residual", "sample_solutions", "report",
]
