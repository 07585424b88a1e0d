"""Exact colored Jones evaluation for the figure-eight knot and the
numerics of its large-color asymptotics.

The exact side is a finite q-series evaluated in arbitrary-precision
ball-style arithmetic (`cjones`, `precision`).  The asymptotic side rests
on the complex dilogarithm (`dilog`), a quantum dilogarithm built from a
contour integral (`qdilog`), the saddle-point geometry of the associated
potential function together with the flat-connection invariants it
computes (`geometry`), and contour integration machinery that reconstructs
the exact sum from an integral representation (`saddle`).  `harness` wires
the pieces into verification campaigns with CSV/JSON reports.
"""

from .cjones import (DEFAULT_EVAL_TOL, KnotParam, colored_jones_fig8,
                     eval_at_xi, kashaev, u_ceiling)
from .dilog import li2, li2_inverted
from .errors import (ArgError, AssertionFailure, DomainError, PathFailure,
                     PrecisionExhausted, QuadratureFailure)
from .geometry import (AsymptoticModel, SaddleData, asymptotic_model,
                       cs_invariant, fourth_quadrant_sqrt, phi_of_u,
                       potential, potential_d1, potential_d2, rep_data,
                       s_of_u, saddle_point, t_of_u, torsion_lambda,
                       torsion_mu, torus_S_k, torus_T_k)
from .harness import (CampaignConfig, VerificationRow, run, verify_ah,
                      verify_main, verify_phi0, volume_constant)
from .precision import BigComplex, EvalRequest, adaptive_eval, default_prec_bits
from .qdilog import QDilogParams, g_n, i_gamma, ratio_closed_form, s_gamma
from .saddle import (ContourPath, contour_c, integrate_exp_nphi,
                     phi_only_param, reconstruct_jn_via_contour,
                     saddle_approx, steepest_path)

__all__ = [
    "ArgError", "AssertionFailure", "AsymptoticModel", "BigComplex",
    "CampaignConfig", "ContourPath", "DEFAULT_EVAL_TOL", "DomainError",
    "EvalRequest", "KnotParam", "PathFailure", "PrecisionExhausted",
    "QDilogParams", "QuadratureFailure", "SaddleData", "VerificationRow",
    "adaptive_eval", "asymptotic_model", "colored_jones_fig8", "contour_c",
    "cs_invariant", "default_prec_bits", "eval_at_xi",
    "fourth_quadrant_sqrt", "g_n", "i_gamma", "integrate_exp_nphi",
    "kashaev", "li2", "li2_inverted", "phi_of_u", "phi_only_param",
    "potential", "potential_d1", "potential_d2", "ratio_closed_form",
    "reconstruct_jn_via_contour", "rep_data", "run", "s_gamma", "s_of_u",
    "saddle_approx", "saddle_point", "steepest_path", "t_of_u",
    "torsion_lambda", "torsion_mu", "torus_S_k", "torus_T_k", "u_ceiling",
    "verify_ah", "verify_main", "verify_phi0", "volume_constant",
]
