"""W and Z distributions on (0, 1) built from the ratio X / (X + Y) of
independent gamma variates.

The hot loops run in numba-compiled kernels; set ``UNITRATIO_BACKEND=numpy``
before import to use the pure-numpy versions instead.
"""

from ._backend import BACKEND
from .dists import (Family, SampleBatch, UnitDistSpec, cdf, logpdf, moment_numeric, pdf,
                    quantile, sample, sf)
from .errors import (ConvergenceError, DegenerateDataError, DomainError, PreconditionError,
                     SingularHessianError)
from .mle import FitResult, ThetaVector, fit, loglik, score, std_errors
from .moments import (Method, MomentRequest, MomentResult, mean_w_half, mean_w_half_equal_rates,
                      mean_z_half, moment, moment_w_integer_r, moment_z_integer_r, xi)
from .quadrature import QuadConfig
from .ratio import GammaRatioParams, TransformPower, ratio_cdf, ratio_pdf

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Family", "SampleBatch", "UnitDistSpec", "cdf", "logpdf", "moment_numeric", "pdf",
    "quantile", "sample", "sf",
    "ConvergenceError", "DegenerateDataError", "DomainError", "PreconditionError",
    "SingularHessianError",
    "FitResult", "ThetaVector", "fit", "loglik", "score", "std_errors",
    "Method", "MomentRequest", "MomentResult", "mean_w_half", "mean_w_half_equal_rates",
    "mean_z_half", "moment", "moment_w_integer_r", "moment_z_integer_r", "xi",
    "QuadConfig", "GammaRatioParams", "TransformPower", "ratio_cdf", "ratio_pdf",
]
