"""Fourier-analytic limit machinery for functions on abelian groups:
distances between functions on different groups, Gowers U2 norms, linear
configuration densities, set rounding, and extremal density minimization.
"""

from .errors import (
    BudgetError,
    GrouplimError,
    PrecisionError,
    UnsupportedError,
    ValidationError,
)
from .extremal import OptResult, density_gradient, minimize_density, project_box_mean, rho_curve
from .functions import DenseFn, SparseFn, constant_fn, indicator_fn
from .graphon import Graph, Kernel, cayley_kernel, hom_density, verify_bridge
from .groups import Elem, GroupSpec, make_group
from .linconfig import (
    ConfigSystem,
    LinearForm,
    builtin_config,
    config_from_forms,
    cs_complexity_at_most_1,
    density_brute,
    density_fourier,
    density_monte_carlo,
    graph_config,
)
from .metric import (
    DistBracket,
    PartialIso,
    check_partial_iso,
    d_metric,
    dhat,
    dprime,
    exists_eps_iso,
    supp_eps,
)
from .rounding import adjust_density, randomized_round, round_best_of
from .sequences import (
    Histogram,
    cauchy_detect,
    continuity_probe,
    histogram_distance,
    pairwise_table,
    value_histogram,
)
from .spectral import dft, dft_naive, idft, u2_direct, u2_fourier

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "ConfigSystem",
    "DenseFn",
    "DistBracket",
    "Elem",
    "Graph",
    "GrouplimError",
    "GroupSpec",
    "Histogram",
    "Kernel",
    "LinearForm",
    "OptResult",
    "PartialIso",
    "PrecisionError",
    "SparseFn",
    "UnsupportedError",
    "ValidationError",
    "adjust_density",
    "builtin_config",
    "cauchy_detect",
    "cayley_kernel",
    "check_partial_iso",
    "config_from_forms",
    "constant_fn",
    "continuity_probe",
    "cs_complexity_at_most_1",
    "d_metric",
    "density_brute",
    "density_fourier",
    "density_gradient",
    "density_monte_carlo",
    "dft",
    "dft_naive",
    "dhat",
    "dprime",
    "exists_eps_iso",
    "graph_config",
    "histogram_distance",
    "hom_density",
    "idft",
    "indicator_fn",
    "make_group",
    "minimize_density",
    "pairwise_table",
    "project_box_mean",
    "randomized_round",
    "rho_curve",
    "round_best_of",
    "supp_eps",
    "u2_direct",
    "u2_fourier",
    "value_histogram",
    "verify_bridge",
]
