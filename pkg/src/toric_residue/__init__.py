"""Toric residues, Jeffrey-Kirwan residues and mixed mirror series.

Exact lattice and residue computations with rational arithmetic, plus a
numeric solver for the binomial critical-point systems that evaluate toric
residues through the local formula.
"""

from .cayley import (
    MixedProblem,
    build_cayley,
    check_c_partition,
    check_pibar,
    flag_bijection_check,
    m_zero_check,
    verify_mtrmc,
    verify_trmc,
)
from .chambers import (
    CLOSED,
    PLUS,
    Chamber,
    Flag,
    chamber_containing,
    enumerate_chambers,
    enumerate_flags,
    flags_for_xi,
    polar_cone_lattice_points,
    regularity,
)
from .critical import (
    CayleyConeData,
    CriticalSet,
    genericity_check,
    hessian_direct,
    local_toric_residue,
    solve_binomial,
)
from .errors import ToricResidueError
from .lattice import ExactSequenceData, LatticeSpace, VectorConfiguration, gale_dual, sequence_from_A
from .poly import Poly
from .residues import RationalSection, iterated_residue, jk_residue, make_p_lambda, section
from .series import SeriesCoefficientTable, mp_coefficient, series_truncation
from .toric import fan_of_chamber, g_polynomial, intersection_number, minkowski_check, partition_polytope, vol_B

__all__ = [
    "CLOSED",
    "PLUS",
    "CayleyConeData",
    "Chamber",
    "CriticalSet",
    "ExactSequenceData",
    "Flag",
    "LatticeSpace",
    "MixedProblem",
    "Poly",
    "RationalSection",
    "SeriesCoefficientTable",
    "ToricResidueError",
    "VectorConfiguration",
    "build_cayley",
    "chamber_containing",
    "check_c_partition",
    "check_pibar",
    "enumerate_chambers",
    "enumerate_flags",
    "fan_of_chamber",
    "flag_bijection_check",
    "flags_for_xi",
    "g_polynomial",
    "gale_dual",
    "genericity_check",
    "hessian_direct",
    "intersection_number",
    "iterated_residue",
    "jk_residue",
    "local_toric_residue",
    "m_zero_check",
    "make_p_lambda",
    "minkowski_check",
    "mp_coefficient",
    "partition_polytope",
    "polar_cone_lattice_points",
    "regularity",
    "section",
    "sequence_from_A",
    "series_truncation",
    "solve_binomial",
    "verify_mtrmc",
    "verify_trmc",
    "vol_B",
]
