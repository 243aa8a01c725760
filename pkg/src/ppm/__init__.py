"""Exact p-adic linear algebra and power-map density analysis."""

from .qpcore import INFINITY, PContext, ResidueScalar, reduce_mod, vp
from .linalg import Lattice, NewtonPolygon, QMatrix, apply, char_poly, \
    elementary_divisors, lattice_index, lattice_intersect, lattice_sum, newton_polygon
from .scale import ScaleReport, invariant_lattice, scale_newton, scale_tidy
from .steinitz import Supernatural, coprime, lcm, ord_catalog, parse_supernatural, \
    profinite_surjective
from .dynamics import BoundednessResult, FlagDecomposition, GeneratorSet, Witness, \
    bounded_group, ku_flag, type_r_matrix, type_r_witness_search
from .roots import PadicApproxMatrix, RootResult, axb_root, congruence_root, \
    finite_root, nilpotent_log, unipotent_root
from .oracle import FiniteGroupTable, enumerate_group, power_surjective, validate_f1
from .analyzer import GroupSpec, PowerVerdict, analyze, analyze_subgroup

__version__ = "0.1.0"
