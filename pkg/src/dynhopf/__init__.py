"""Exact residual checks for dynamical r-matrices, Hopf algebroid twists and their classical limits."""
from .scalar import ScalarFunction, PoleError
from .expr import ParseError, parse, parse_scalar, pretty
from .lie_core import LieAlgebra, build_algebra, build_sl2, build_sln, killing, invariance_residual
from .dyn_exterior import (Multivector, DynRMatrix, ambient, wedge, schouten, coboundary_d, cdybe_residual,
                           coth_r, prolong_lambda, r_matroid_residual, hamiltonian_residual, base_structures)
from .hopf_kernel import (HopfModel, TensorElement, TruncationConfig, multiply, coproduct, counit, anchor_apply,
                          cocycle_residual, counit_twist_residual, twisted_structures, compose_twists,
                          moyal_twist, invert_series, exp_series)
from .dyn_twist import (build_theta, taylor_shift, shifted_cocycle_residual, make_dynamical_twistor,
                        projection_T, delta_lambda, WeightModule, DynamicalR, qdybe_residual,
                        twisted_base_residual)
from .classical_limit import (DeformationData, extract_delta_f, extract_delta_X, limit_axiom_suite,
                              twist_limit, coboundary_agreement, dynamical_corollary_check)
from .cochain import coface, partial, alt2, alt3, alt_two_cocycle
from .cli_io import parse_model, load_model, run_suite, emit, Report

__version__ = "0.1.0"
