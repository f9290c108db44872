"""Cached construction chain shared by the runners and the sweep entry points.

algebra id -> RootSystem -> StructureConstants -> TransitionData -> resolved GS basis
"""

from functools import lru_cache
from typing import Optional

from .errors import BundleBenchError
from .gs.invariant import ResolvedBasis, resolve_gs_basis
from .lie.chevalley import StructureConstants, chevalley_constants
from .lie.rootsystem import RootSystem, center_data, root_system_from_id
from .transition import TransitionData, transition_data


@lru_cache(maxsize=None)
def root_system(algebra: str) -> RootSystem:
    return root_system_from_id(algebra)


def class_index(rs: RootSystem, j: Optional[int]) -> Optional[int]:
    """Coweight index of the class generator: None picks the center generator, 0 the trivial class."""
    if j is None:
        return center_data(rs)["generators"][0]
    if j == 0:
        return None
    if not 1 <= j <= rs.rank:
        raise BundleBenchError(f"class index {j} out of range 0..{rs.rank} for {rs.name}")
    return j


def structure_constants(algebra: str) -> StructureConstants:
    return chevalley_constants(root_system(algebra))


@lru_cache(maxsize=None)
def transition(algebra: str, j: Optional[int]) -> TransitionData:
    rs = root_system(algebra)
    return transition_data(rs, class_index(rs, j))


@lru_cache(maxsize=None)
def resolved_basis(algebra: str, j: Optional[int]) -> ResolvedBasis:
    return resolve_gs_basis(transition(algebra, j), structure_constants(algebra))
