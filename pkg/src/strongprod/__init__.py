"""Clustered and defective colourings of strong products of graphs."""

from .coloring import (
    INFINITY,
    ConsistentColoring,
    DefectParameter,
    EdgePartition,
    FractionalColoring,
    VerificationReport,
    check_consistency,
    monochromatic_components,
    verify_coloring,
    verify_consistent,
)
from .errors import (
    BudgetExceeded,
    ColoringError,
    ConstructionError,
    SchemaError,
    SizeLimitError,
    StrongProdError,
)
from .graph import (
    Graph,
    RootedTree,
    cartesian_product,
    direct_product,
    generate_hex_grid,
    generate_tree_closure,
    grid_product,
    strong_product,
    strong_product_all,
    strong_power,
)
from .kernels import BACKEND

__all__ = [
    "BACKEND",
    "INFINITY",
    "BudgetExceeded",
    "ColoringError",
    "ConsistentColoring",
    "ConstructionError",
    "DefectParameter",
    "EdgePartition",
    "FractionalColoring",
    "Graph",
    "RootedTree",
    "SchemaError",
    "SizeLimitError",
    "StrongProdError",
    "VerificationReport",
    "cartesian_product",
    "check_consistency",
    "direct_product",
    "generate_hex_grid",
    "generate_tree_closure",
    "grid_product",
    "monochromatic_components",
    "strong_power",
    "strong_product",
    "strong_product_all",
    "verify_coloring",
    "verify_consistent",
]
