"""Realize labeled graphs as Reeb graphs of Morse functions and check the result."""
from .graph import (HypothesisReport, Infeasible, LabeledGraph, Sphere, StructuralError, Surface,
                    Surgery, local_extrema, synthesize_good_function, validate_good_function,
                    validate_hypotheses)
from .handles import HandlebodyPlan, attach_plan_for_boundary, boundary_invariants, \
    euler_characteristic
from .morse import MorsePlan, assemble, euler_char_of_plan, reeb_of_plan
from .reeb import BACKEND, ReebGraph, compute_reeb, reeb_isomorphic
from .surface import TriangulatedSurface, realize_surface, surface_invariants
from .zalgebra import AbelianInvariants, IntMatrix, cokernel_invariants, smith_normal_form

__version__ = "0.1.0"
