"""Analytic surfaces, samplers, metrics and convergence studies."""
from .convergence import ConvergenceReport, convergence_study, loglog_slope, normal_convergence_study
from .metrics import MetricsReport, angle_error, auc_curve, metrics_report, pgp, rmse_deg
from .sampling import SampleSpec, sample_patch
from .surfaces import AnalyticSurface
