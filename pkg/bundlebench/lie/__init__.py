"""Exact root-system engine: roots, lattices, Weyl group, Chevalley basis."""

from .chevalley import (
    StructureConstants,
    chevalley_constants,
    jacobi_defect,
    killing_pair,
    structure_tensor,
)
from .rootsystem import (
    RootSystem,
    all_supported_ids,
    build_root_system,
    center_data,
    killing_matrix,
    metric_dual_basis,
    root_system_from_id,
)
from .weyl import WeylElement, reflection, simple_reflection, weyl_group_elements, weyl_reflect

__all__ = [
    "RootSystem",
    "StructureConstants",
    "WeylElement",
    "all_supported_ids",
    "build_root_system",
    "center_data",
    "chevalley_constants",
    "jacobi_defect",
    "killing_matrix",
    "killing_pair",
    "metric_dual_basis",
    "reflection",
    "root_system_from_id",
    "simple_reflection",
    "structure_tensor",
    "weyl_group_elements",
    "weyl_reflect",
]
