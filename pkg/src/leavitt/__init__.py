"""Exact computation in Leavitt path algebras L_K(E) of directed graphs."""

from .algebra import Element, Monomial, involute, multiply, normalize
from .expr import ParseError, parse_element
from .fields import GF, QQ, PrimeField, field_from_name
from .graph import EFGraph, Graph, GraphError, Path, build_ef, find_cycle, paths_to
from .matreg import (RegularityCertificate, decompose, dimension, drazin_witness,
                     pi_witness_from_drazin, special_clean, unit_regular_inverse,
                     verify_certificate, vn_inverse)
from .obstruction import (check_candidate, forced_coefficients, refutation_report,
                          solve_inner_inverse_bounded)
from .subalg import SubalgebraData, build_bs
from .theta import ThetaMap, build_theta, check_relations, image_contains

__all__ = [
    "Element", "Monomial", "involute", "multiply", "normalize",
    "ParseError", "parse_element",
    "GF", "QQ", "PrimeField", "field_from_name",
    "EFGraph", "Graph", "GraphError", "Path", "build_ef", "find_cycle", "paths_to",
    "RegularityCertificate", "decompose", "dimension", "drazin_witness",
    "pi_witness_from_drazin", "special_clean", "unit_regular_inverse",
    "verify_certificate", "vn_inverse",
    "check_candidate", "forced_coefficients", "refutation_report",
    "solve_inner_inverse_bounded",
    "SubalgebraData", "build_bs",
    "ThetaMap", "build_theta", "check_relations", "image_contains",
]
