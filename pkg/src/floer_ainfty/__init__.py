"""Exact filtered A-infinity algebra computations over universal Novikov rings."""

from .ainfty import (
    BETA0,
    AInftyData,
    BetaClass,
    MCSolution,
    ObstructionReport,
    apply_dhat,
    apply_mk,
    check_ainfty_relations,
    check_maurer_cartan,
    deform,
    mc_solve,
    symmetrize_m0_vanishing,
)
from .bimodule import BimoduleData, apply_dhat_bimodule, apply_n, build_chain_map_I, deformed_n00
from .chains import BarTensor, Generator, GradedChain, koszul_prefix_sign, shifted_degree
from .homology import HomologyReport, NovikovComplex, homology_field, homology_truncated_Z
from .linalg import smith_normal_form
from .models import build_qcp, build_rp_floer, rp_spin_status, stiefel_whitney_rp
from .novikov import (
    Integers,
    IntegersMod,
    Mode,
    NovikovElement,
    PrimeField,
    Rationals,
    TruncationPolicy,
)

__all__ = [
    "BETA0",
    "AInftyData",
    "BarTensor",
    "BetaClass",
    "BimoduleData",
    "Generator",
    "GradedChain",
    "HomologyReport",
    "Integers",
    "IntegersMod",
    "MCSolution",
    "Mode",
    "NovikovComplex",
    "NovikovElement",
    "ObstructionReport",
    "PrimeField",
    "Rationals",
    "TruncationPolicy",
    "apply_dhat",
    "apply_dhat_bimodule",
    "apply_mk",
    "apply_n",
    "build_chain_map_I",
    "build_qcp",
    "build_rp_floer",
    "check_ainfty_relations",
    "check_maurer_cartan",
    "deform",
    "deformed_n00",
    "homology_field",
    "homology_truncated_Z",
    "koszul_prefix_sign",
    "mc_solve",
    "rp_spin_status",
    "shifted_degree",
    "smith_normal_form",
    "stiefel_whitney_rp",
    "symmetrize_m0_vanishing",
]
