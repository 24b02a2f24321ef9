"""Exact finite DG-models of proper connective A∞-algebras and generation certificates."""

from .ainf import AInfinityAlgebra, DGAlgebra, from_dg, minimal_model, opposite, predicates, validate
from .exactlin import GF, QQ, ValidationError, field_from_tag
from .generation import (
    cone_certificate,
    generation_bound,
    h0_algebra,
    jacobson_radical,
    radical_layers,
    verify_certificate,
)
from .yoneda import end_degree_interval, endomorphism_dg, finite_model, verify_model

__all__ = [
    "AInfinityAlgebra", "DGAlgebra", "from_dg", "minimal_model", "opposite", "predicates", "validate",
    "GF", "QQ", "ValidationError", "field_from_tag",
    "cone_certificate", "generation_bound", "h0_algebra", "jacobson_radical", "radical_layers",
    "verify_certificate", "end_degree_interval", "endomorphism_dg", "finite_model", "verify_model",
]
