"""Renormalization-group spectral zeta functions for hierarchical networks."""

__version__ = "0.1.0"

from .errors import (BracketError, ConfigError, ConvergenceError, DomainError, InvalidParameterError,
                     MultiplicityError, OrderMismatchError, PoleError, RGZetaError, SingularJetError,
                     SizeLimitError)
from .taylor import Jet, derivative_coeff, jet_add, jet_div, jet_ln, jet_mul
from .netgen import Graph, LaplacianMatrix, build, build_hn3, build_hn5, build_mk, laplacian
from .spectrum import (SpectrumResult, det_shifted, det_shifted_jet, eig_sym, power_method_numeric,
                       rank_spectrum_export, roughness, zeta_direct)
from .rg_hanoi import RGStateHanoi, hanoi_alpha, hanoi_log_det, hanoi_rg_step, hanoi_zeta
from .rg_mk import (RGStateMK, mk_alpha, mk_log_det, mk_rg_step_full, mk_rg_step_reduced,
                    mk_spectral_dimension, mk_zeta)
from .lambda_shoot import ShootResult, constraint_residual, count_above, lambda_max_series, shoot
from .analysis import FitResult, SyncReport, fit_linear, fit_powerlaw, sync_report
