"""Secret-key capacity of the amplitude-constrained Gaussian key-agreement
setting: discrete-input solver, suboptimal schemes, closed-form bounds, and
a sweep CLI."""

from .channel import (
    ChannelParams,
    EquivalentWiretap,
    equivalent_channel,
    secret_key_rate,
)
from .errors import (
    DegenerateTruncation,
    InvalidBeta,
    KeycapError,
    NoConvergence,
    QuadratureFailure,
    UnsupportedScheme,
)
from .inputs import (
    DiscreteDistribution,
    DiscreteScheme,
    InputScheme,
    TruncatedGaussianScheme,
    UniformScheme,
    maxentropic_scheme,
)
from .numerics import (
    OutputDensity,
    QuadratureSpec,
    RateResult,
    differential_entropy,
    density_discrete_conv,
    density_trunc_gauss_conv,
    density_uniform_conv,
    mixed_gaussian_entropy_integral,
    monte_carlo_mi_oracle,
    mutual_information,
    q_function,
)
from .bounds import (
    BoundsReport,
    bounds_report,
    high_a_limit,
    low_a_ratio,
    lower_bound_1,
    lower_bound_2,
    lower_bound_3,
    maximize_lower_bound_2,
    upper_bound,
)
from .schemes import (
    best_maxentropic,
    optimize_truncated_gaussian,
    truncated_gaussian_rate,
    uniform_scheme_rate,
)
from .solver import (
    SolverConfig,
    SolverReport,
    plain_capacity,
    secret_key_capacity,
)

__version__ = "0.1.0"
