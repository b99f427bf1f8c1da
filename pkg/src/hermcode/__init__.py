"""Exact computations on the functional code C_2(X) of the Hermitian surface X in PG(3, t^2)."""

from .census import CensusConfig, bounds, count_formulas, verify_table
from .finite_field import FieldSpec, build_field
from .functional_code import WeightDistribution, full_weight_distribution, generator_matrix
from .hermitian_surface import HermitianSurface, LineClass, surface
from .proj_geometry import ProjectiveSpace
from .quadric import QuadraticForm, classify

__version__ = "0.1.0"
