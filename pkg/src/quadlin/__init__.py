"""quadlin: linearizability analysis for quad-graph lattice equations.

Decides whether an explicit quad equation u11 = F(u00, u10, u01) is
linearizable by a point transformation, reconstructs and certifies the
transformation numerically, verifies the discrete Burgers/Cole-Hopf
family against its linear counterpart, and pre-screens equations with an
exact algebraic-entropy degree-growth probe.
"""

__version__ = "0.1.0"

from .colehopf import (BurgersFamily, HietarintaParams, cole_hopf_map,
                       evolve_linear_burgers, hietarinta_transform,
                       inverse_hietarinta_transform, rosa_residual,
                       solve_canonical, solve_g23, solve_rosa,
                       verify_burgers, verify_canonical_form,
                       verify_potential_compatibility)
from .dual import DualValue
from .entropy import DegreeSequence, classify_growth, degree_sequence
from .expr import (Expression, eval_with_partials, evaluate, is_rational,
                   parse, print_expression)
from .lattice import Grid, evolve_quad, make_staircase, residual
from .linearize import (AffineCoefficients, LinearizabilityReport,
                        QuadEquation, check_conditions, detect_affine_linear)
from .ratfunc import RationalFunction1D
from .bigpoly import BigPoly
from .transform import (AlphaTable, LinearModel, PointTransform, build_psi,
                        fit_linear_model, recover_alpha, roundtrip_verify)

__all__ = [
    "__version__",
    "AffineCoefficients", "AlphaTable", "BigPoly", "BurgersFamily",
    "DegreeSequence", "DualValue", "Expression", "Grid", "HietarintaParams",
    "LinearModel", "LinearizabilityReport", "PointTransform", "QuadEquation",
    "RationalFunction1D",
    "build_psi", "check_conditions", "classify_growth", "cole_hopf_map",
    "degree_sequence", "detect_affine_linear", "eval_with_partials",
    "evaluate", "evolve_linear_burgers", "evolve_quad", "fit_linear_model",
    "hietarinta_transform", "inverse_hietarinta_transform", "is_rational",
    "make_staircase", "parse", "print_expression", "recover_alpha",
    "residual", "rosa_residual", "roundtrip_verify", "solve_canonical",
    "solve_g23", "solve_rosa", "verify_burgers", "verify_canonical_form",
    "verify_potential_compatibility",
]
