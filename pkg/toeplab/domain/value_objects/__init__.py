"""Value objects package."""
from toeplab.domain.value_objects.geometry import (
    Ambient,
    ChartPoint,
    GroupElement,
    GroupKind,
    ProjTuple,
    Tangent,
)
from toeplab.domain.value_objects.multiindex import (
    BasisOrder,
    MultiIndex,
    Partition,
    block_degrees,
    enumerate_basis,
    monomial_norm_sq,
)
from toeplab.domain.value_objects.symbols import (
    BoundedRationalSymbol,
    CombinationSymbol,
    ConstantSymbol,
    InversePowerSymbol,
    QuasiHomogeneousSymbol,
    QuasiRadialSymbol,
    RadialMonomialSymbol,
    SymbolClassRkh,
    TabulatedSymbol,
    TorusElement,
)

__all__ = [
    "Ambient",
    "BasisOrder",
    "BoundedRationalSymbol",
    "ChartPoint",
    "CombinationSymbol",
    "ConstantSymbol",
    "GroupElement",
    "GroupKind",
    "InversePowerSymbol",
    "MultiIndex",
    "Partition",
    "ProjTuple",
    "QuasiHomogeneousSymbol",
    "QuasiRadialSymbol",
    "RadialMonomialSymbol",
    "SymbolClassRkh",
    "TabulatedSymbol",
    "Tangent",
    "TorusElement",
    "block_degrees",
    "enumerate_basis",
    "monomial_norm_sq",
]
