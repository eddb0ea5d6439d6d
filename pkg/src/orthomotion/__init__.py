"""Planar random motions with orthogonal directions and Poisson switching.

Simulation of the standard, reflecting and thinned (q-) variants, closed-form
evaluation of their singular masses, interior/boundary/diagonal densities,
marginal and L1-distance laws, together with finite-difference convergence
checks of the governing equations and a Monte Carlo validation battery.
"""

__version__ = "0.1.0"

from .errors import (OrthomotionError, NonIntegrableRate, NoMajorant,
                     DivergentIntegral, DomainError, NonConvergent,
                     UnsupportedRate, UnsupportedVariant, GridTooCoarse,
                     NonMonotone, BinningMismatch, ConfigError, NoRoot)
from .rates import (RateFunction, constant, custom, foong_van_kolck,
                    iacus_tanh, garra_coth, parse)
from .specfun import bessel_i0, bessel_i1, i0_time_derivative, BesselArg
from .telegraph import (TelegraphSpec, Density1D, sample_telegraph,
                        telegraph_density, telegraph_conditional_density)
from .planar import (MotionSpec, PlanarState, PathRecord, SupportRegion,
                     sample_planar, sample_planar_via_decomposition,
                     sample_endpoints, singular_masses, joint_density,
                     boundary_density, boundary_density_conditional,
                     diagonal_density, l1_distance_density, marginal_density,
                     marginal_singular, marginal_sampler,
                     conjecture_l1_reflecting, equilibrium_time)
from .pdecheck import PDEForm, residual, convergence_order, convergence_report
from .harness import SuiteConfig, TestReport, run_suite, suite_to_json

__all__ = [
    "__version__",
    "OrthomotionError", "NonIntegrableRate", "NoMajorant", "DivergentIntegral",
    "DomainError", "NonConvergent", "UnsupportedRate", "UnsupportedVariant",
    "GridTooCoarse", "NonMonotone", "BinningMismatch", "ConfigError", "NoRoot",
    "RateFunction", "constant", "custom", "foong_van_kolck", "iacus_tanh",
    "garra_coth", "parse",
    "bessel_i0", "bessel_i1", "i0_time_derivative", "BesselArg",
    "TelegraphSpec", "Density1D", "sample_telegraph", "telegraph_density",
    "telegraph_conditional_density",
    "MotionSpec", "PlanarState", "PathRecord", "SupportRegion",
    "sample_planar", "sample_planar_via_decomposition", "sample_endpoints",
    "singular_masses", "joint_density", "boundary_density",
    "boundary_density_conditional", "diagonal_density", "l1_distance_density",
    "marginal_density", "marginal_singular", "marginal_sampler",
    "conjecture_l1_reflecting", "equilibrium_time",
    "PDEForm", "residual", "convergence_order", "convergence_report",
    "SuiteConfig", "TestReport", "run_suite", "suite_to_json",
]
