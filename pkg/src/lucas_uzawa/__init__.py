"""Closed-form transitional dynamics of the Lucas-Uzawa growth model with a
human-capital externality, plus an independent first-order-condition checker."""
from .bgp import BgpSummary, bgp_summary, bgp_summary_transformed
from .closed_form import (SolutionConstants, SolutionFamily, TrajectoryPoint, closure,
                          derive_constants, derive_constants_sigma_beta, derive_constants_sol1,
                          derive_constants_sol2, derive_constants_sol3, eval_general,
                          eval_sigma_beta, evaluate, to_original)
from .errors import (EvalDomain, InvalidParams, LucasUzawaError, NoRoot, NonConvergent,
                     NonPositiveState, NonPositiveZ0, OutOfRange, SigmaBetaMismatch, SigmaIsOne,
                     StepFailure, WindowViolated)
from .foc import FocState, ResidualReport, foc_rhs, integrate, residual_report
from .growth import (GrowthRates, growth_dynamic, growth_finite_diff, growth_rates,
                     growth_sigma_beta, growth_static)
from .kernel import (F_integral, F_limit, G_integral, G_limit, KernelContext, kernel_context,
                     z_log_derivative, z_path)
from .params import (ModelParams, TransformedParams, ValidatedParams, inverse_transform_state,
                     load_params, to_transformed, transform_state, validate)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
