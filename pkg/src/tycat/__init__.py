"""Tambara-Yamagami categories over finite abelian groups and a sampled real line."""
from .bicharacter import Bicharacter, enumerate_symmetric_nondegenerate, orbit_classify
from .construct import TAU, Sign, TYData, construct_standard, fusion_product
from .continuum import gamma_kernel, gaussian_fixed_point, make_grid, shift_modulation_check, verify_continuum
from .groups import GroupElement, GroupSpec, automorphism_group
from .normalize import (
    ClassificationResult,
    GaugeTransform,
    apply_gauge,
    classify_all,
    equivalent,
    heisenberg_commutant_dim,
    normalize,
    random_gauge,
)
from .pentagon import PentagonReport, mutate, verify_all, verify_by_composition, verify_gamma, verify_scalar
from .phase import Phase

__all__ = [
    "TAU", "Bicharacter", "ClassificationResult", "GaugeTransform", "GroupElement", "GroupSpec",
    "PentagonReport", "Phase", "Sign", "TYData", "apply_gauge", "automorphism_group", "classify_all",
    "construct_standard", "enumerate_symmetric_nondegenerate", "equivalent", "fusion_product",
    "gamma_kernel", "gaussian_fixed_point", "heisenberg_commutant_dim", "make_grid", "mutate",
    "normalize", "orbit_classify", "random_gauge", "shift_modulation_check", "verify_all",
    "verify_by_composition", "verify_continuum", "verify_gamma", "verify_scalar",
]
