"""Certified positive-scalar-curvature necks and tunnels of revolution."""

from .assembly import (NeckProfile, SizeReport, Tunnel, assemble, build_neck,
                       measure, neighborhood_check, scaling_sweep,
                       sphere_area, telescope)
from .bend_planner import (AmbientModel, BendPlan, PlanCertificate,
                           build_plan, check_plan, choose_s0, final_arc,
                           inductive_bend)
from .curvature_models import (EndBlendSpec, KappaBreakdown, condition_margin,
                               end_blend, kappa_exact_flat, kappa_lower_bound,
                               kappa_warped)
from .curve_core import (ArcSegment, CurveSamples, CurveState,
                         PiecewiseProfile, SmoothProfile, extend_by_arc,
                         integrate_profile, r_at, t_at, theta_at)
from .smoother import (SmoothedCertificate, SmoothingParams, smooth_profile,
                       verify_smoothed)
from . import errors

__version__ = "0.1.0"
