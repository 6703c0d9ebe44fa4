"""Entities package."""
from toeplab.domain.entities.bergman_space import BergmanSpace, SectionPoly
from toeplab.domain.entities.operator_matrix import OperatorMatrix

__all__ = ["BergmanSpace", "OperatorMatrix", "SectionPoly"]
