"""Genetic-algorithm optimization over stochastic, data-learned feasibility regions.

The toolkit couples a real-coded GA with a smooth probability-based penalty:
feasible regions may be unions of sets, known only through noisy observations
from which per-region feasibility probabilities are estimated (confidence
ellipses, regression t bands, kernel bands).  A B-spline vehicle path planner
built on the same machinery searches for shortest trajectories through noisy
obstacle fields and corridors.
"""

from .benchmarks import (
    ExperimentReport,
    rastrigin,
    realize,
    run_experiment,
    run_replicated,
    schwefel,
)
from .feasibility import (
    ABOVE_IS_FEASIBLE,
    BELOW_IS_FEASIBLE,
    GaussianCloudFit,
    LinearRegressionFit,
    LocalQuadraticFit,
    NadarayaWatsonFit,
    SampleCloud,
    fit_gaussian_cloud,
    fit_linear_regression,
    fit_local_quadratic,
    fit_nadaraya_watson,
    gamma_circle,
    gamma_linreg,
    gamma_nw,
)
from .ga import GaConfig, GaResult, SearchBox, run_ga
from .geometry import (
    ConfidenceEllipse,
    dist_graph_to_set,
    dist_point_ellipse,
    ellipse_from_readings,
)
from .penalty import (
    EqualityGroup,
    InequalityGroup,
    SmoothPenaltyParams,
    crisp_penalty,
    smooth_gamma_penalty,
    union_indicator_penalty,
    union_min_penalty,
)
from .planner import (
    Corridor,
    PathEnvironment,
    fit_corridor,
    objective_Q,
    plan_path,
)
from .scenarios import (
    ExperimentScenario,
    gen_circle_scenario,
    gen_path_scenario,
    gen_plane_scenario,
    scenario_from_json,
    scenario_to_json,
)
from .splines import BSplineBasis, Trajectory, arc_length, build_basis, deriv_traj, eval_traj
from .stats import chisq2_cdf, chisq2_quantile, norm_cdf, norm_quantile, t_cdf

__version__ = "0.1.0"
