"""Exact computations for coprime actions, Frobenius groups and graded Lie rings."""

from .actions import ActionSetup, Automorphism, commutator_with_action, fixed_points, verify_coprime_facts
from .catalog import construct_catalog_group, semidirect_product
from .errors import AlgebraError, ConfigError
from .gf import GF, Subspace, field
from .graded import Grading, criterion_report, eigenspace_grading, vandermonde_recover
from .groups import FiniteGroup, GroupHom, Subgroup, validate_group
from .harness import ScenarioConfig, run_scenario
from .lie import LieAutomorphism, LieRing, associated_lie_ring, extend_scalars
from .report import ScenarioReport, emit_report
from .structure import FrobeniusStructure, check_frobenius

__version__ = "0.1.0"

__all__ = [
    "ActionSetup", "AlgebraError", "Automorphism", "ConfigError", "FiniteGroup", "FrobeniusStructure", "GF",
    "Grading", "GroupHom", "LieAutomorphism", "LieRing", "ScenarioConfig", "ScenarioReport", "Subgroup",
    "Subspace", "associated_lie_ring", "check_frobenius", "commutator_with_action", "construct_catalog_group",
    "criterion_report", "eigenspace_grading", "emit_report", "extend_scalars", "field", "fixed_points",
    "run_scenario", "semidirect_product", "validate_group", "vandermonde_recover", "verify_coprime_facts",
]
