"""Exact decisions of strict positive definiteness and ubiquity on F x T^r."""
from .cosets import (
    Coset,
    CosetUnion,
    SetExpr,
    SPDVerdict,
    UbiquityVerdict,
    coset_intersect,
    spd_decide,
    ubiquity_decide,
)
from .cyclotomic import CycloNumber
from .findual import FiniteGroup, spd_test_finite, ubiquity_bruteforce_finite
from .lattice import LatticeSubgroup, fi_supergroup, index, intersect
from .product import DualSliceMap, decide_main, product_spd_sufficient, staircase_check
from .trigpoly import Character, GroupPoint, TrigPoly, evaluate, non_spd_witness, zero_set
from .verify import gram_matrix, identity_check, psd_check, synth, ubiquity_scan

__version__ = "0.1.0"

__all__ = [
    "Character", "Coset", "CosetUnion", "CycloNumber", "DualSliceMap", "FiniteGroup",
    "GroupPoint", "LatticeSubgroup", "SPDVerdict", "SetExpr", "TrigPoly", "UbiquityVerdict",
    "coset_intersect", "decide_main", "evaluate", "fi_supergroup", "gram_matrix",
    "identity_check", "index", "intersect", "non_spd_witness", "product_spd_sufficient",
    "psd_check", "spd_decide", "spd_test_finite", "staircase_check", "synth",
    "ubiquity_bruteforce_finite", "ubiquity_decide", "ubiquity_scan", "zero_set",
]
