"""Numerical trace inequalities for tensors under the Einstein product."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    ConvergenceError,
    DegenerateSpectrumError,
    DomainError,
    HermitianityError,
    NumericalError,
    ResourceError,
    ShapeError,
    TraceGymError,
)
from .tensor import (  # noqa: E402
    DenseTensor,
    Shape,
    conj_transpose,
    dematricize,
    einstein_product,
    frobenius_inner,
    frobenius_norm,
    identity_tensor,
    kronecker_power,
    kronecker_product,
    kronecker_sum,
    matricize,
    trace,
    zero_tensor,
)
from .spectral import (  # noqa: E402
    SpectralDecomposition,
    abs_tensor,
    apply_spectral_function,
    complex_power,
    eig_hermitian,
    eigcount_growth,
    expm,
    logm,
    loewner_geq,
    powm,
    schatten_norm,
    spectral_gap,
)
from .quadrature import QuadratureScheme, build_quadrature, rho_theta_density  # noqa: E402
from .pinching import mu_delta_density, mu_delta_transform, pinch, pinch_via_integral  # noqa: E402
from .reports import InequalityReport  # noqa: E402
from .inequalities import (  # noqa: E402
    check_alt_multi,
    check_alt_two,
    check_gt_multi,
    check_gt_multi_general,
    check_gt_two,
    check_log_trace_multi,
    lie_error_slope,
    lie_product_error,
)
from .entropy import relative_entropy, variational_gap  # noqa: E402
from .random_tensors import (  # noqa: E402
    RandomTensorModel,
    TailBoundReport,
    empirical_tail,
    estimate_mgf,
    laplace_tail_bound,
    master_tail_bound,
    sample_model,
    tensor_cumulants,
)
from .suite import SuiteConfig, SuiteResult, emit_report, run_suite  # noqa: E402
