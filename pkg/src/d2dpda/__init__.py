"""D2D coded caching from placement delivery arrays.

Builds cross resolvable designs and the two grid-based DPDA families,
validates arrays against the PDA/DPDA conditions, evaluates the load lower
bounds, and simulates placement and delivery byte for byte.
"""

from .bounds import bound_jmqx, bound_new, catalog, classify, compare_report
from .constructions import ConstructedDpda, construct_general, construct_I, construct_II
from .designs import (
    CrossProfile,
    Design,
    Resolution,
    cross_profile,
    design_from_code,
    find_resolution,
    grid_mcrd,
)
from .finite_field import GeneratorMatrix, PrimeField, enumerate_codewords
from .kernels import BACKEND
from .pda import (
    STAR,
    Dpda,
    InvalidArrayError,
    PdaArray,
    SchemeParams,
    Violation,
    canonicalize,
    derive_phi,
    equivalent,
    regularity,
    validate_dpda,
    validate_pda,
)
from .sim import FileLibrary, SimulationReport, random_demand, run

__all__ = [
    "BACKEND",
    "ConstructedDpda",
    "CrossProfile",
    "Design",
    "Dpda",
    "FileLibrary",
    "GeneratorMatrix",
    "InvalidArrayError",
    "PdaArray",
    "PrimeField",
    "Resolution",
    "STAR",
    "SchemeParams",
    "SimulationReport",
    "Violation",
    "bound_jmqx",
    "bound_new",
    "canonicalize",
    "catalog",
    "classify",
    "compare_report",
    "construct_I",
    "construct_II",
    "construct_general",
    "cross_profile",
    "derive_phi",
    "design_from_code",
    "enumerate_codewords",
    "equivalent",
    "find_resolution",
    "grid_mcrd",
    "random_demand",
    "regularity",
    "run",
    "validate_dpda",
    "validate_pda",
]
