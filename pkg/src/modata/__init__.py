"""Modular-data toolkit for unitary modular tensor categories.

Compute self-braiding traces, Frobenius-Schur indicators and eigenvalue
multiplicities from (S, T) alone; validate candidate data against the
modularity axioms and the trace realizability constraints; synthesize the
canonical R-matrices; search small fusion rings for admissible data; and
cross-check everything against explicit anyon models.
"""

__version__ = "0.1.0"

from .axioms import AxiomReport, Diagnostic, detect_convention, validate
from .bantay import (
    IndicatorVector,
    MultiplicityTable,
    RealizabilityError,
    TraceTable,
    eigen_multiplicities,
    fs_indicators,
    realizability_report,
    trace_table,
)
from .modular_data import (
    DerivedData,
    InvalidModularData,
    ModularData,
    charge_conjugation,
    derive,
    dims,
    load_modular_data,
    save_modular_data,
    twists,
    verlinde_fusion,
)
from .numerics import (
    DEFAULT_POLICY,
    TolerancePolicy,
    approx_eq,
    as_integer,
    phase_from_turns,
    principal_sqrt,
    turns_fraction,
)
from .oracle import (
    CatalogEntry,
    ExplicitModel,
    brute_trace,
    build_pointed_model,
    catalog,
    catalog_models,
    catalog_names,
    get_model,
    load_model,
)
from .rmatrix import RBlock, canonical_r, monodromy_check, r_op
from .search import (
    FusionRing,
    FusionRingError,
    SearchResult,
    candidate_s,
    enumerate_t,
    load_fusion_ring,
    save_fusion_ring,
    search_pipeline,
)

__all__ = [
    "__version__",
    "AxiomReport", "Diagnostic", "detect_convention", "validate",
    "IndicatorVector", "MultiplicityTable", "RealizabilityError", "TraceTable",
    "eigen_multiplicities", "fs_indicators", "realizability_report", "trace_table",
    "DerivedData", "InvalidModularData", "ModularData", "charge_conjugation",
    "derive", "dims", "load_modular_data", "save_modular_data", "twists",
    "verlinde_fusion",
    "DEFAULT_POLICY", "TolerancePolicy", "approx_eq", "as_integer",
    "phase_from_turns", "principal_sqrt", "turns_fraction",
    "CatalogEntry", "ExplicitModel", "brute_trace", "build_pointed_model",
    "catalog", "catalog_models", "catalog_names", "get_model", "load_model",
    "RBlock", "canonical_r", "monodromy_check", "r_op",
    "FusionRing", "FusionRingError", "SearchResult", "candidate_s",
    "enumerate_t", "load_fusion_ring", "save_fusion_ring", "search_pipeline",
]
