"""Fractional subordinators and the FICOGARCH(1,d,1) volatility model.

Subpackages by topic:

- :mod:`ficogarch.levy`: compound Poisson drivers, grids, seeded ensembles
- :mod:`ficogarch.kernels`: MG, MvN and modified MvN kernels, norms
- :mod:`ficogarch.fracsub`: path simulation of S^{a,d}, analytic moments
- :mod:`ficogarch.covariance`: closed-form increment covariance
- :mod:`ficogarch.cogarch`: COGARCH(1,1), FICOGARCH(1,d,1) and (p,d,q)
- :mod:`ficogarch.stats`: ACF, regressions, Monte Carlo estimators, KS tests
"""

__version__ = "0.1.0"

from .cogarch import (
    FicogarchParams,
    PQParams,
    VolatilityPath,
    cogarch11,
    ficogarch_1d1,
    ficogarch_pdq,
    stationary_check,
)
from .covariance import (
    c_integral,
    c_limit,
    closed_form_f_squared,
    covariance_table,
    increment_cov_asymptotic,
    increment_cov_exact,
)
from .errors import *  # noqa: F401,F403
from .fracsub import FracSubConfig, frac_cumulant, frac_mean, frac_path
from .kernels import Integrability, KernelFamily, KernelSpec, classify_integrability, kernel_norm, kernel_value
from .levy import (
    CompoundPoisson,
    Constant,
    Exponential,
    LevySpec,
    Normal,
    PathGrid,
    SamplePath,
    simulate_levy,
    two_sided,
)
from .stats import increment_cov_mc, loglog_slope, sample_acf
