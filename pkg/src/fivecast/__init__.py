"""Weekly price forecasting with five from-scratch regressors.

The models (backprop network, normalized radial basis network, dynamic
kernel-weighted memory, epsilon-margin support vector regression, least
squares support vector machine) share one fit/predict contract and plug
into a sliding-window pipeline with a benchmark, a seed-stability
experiment, and a lag-one error analysis.
"""

from .errors import (
    ConvergenceWarning,
    DivergenceError,
    DomainError,
    FivecastError,
    IoError,
    OrderError,
    ParseError,
    ShapeError,
    SingularError,
)
from .evaluate import (
    EvalReport,
    HarnessConfig,
    LagOneReport,
    StabilityReport,
    benchmark,
    lag_one_analysis,
    mape,
    model_predictions,
    mse,
    stability,
)
from .kernels import KernelSpec
from .timeseries import (
    MinMaxScaler,
    PriceSeries,
    WindowedDataset,
    fit_scaler,
    load_csv,
    make_windows,
    split,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceWarning",
    "DivergenceError",
    "DomainError",
    "EvalReport",
    "FivecastError",
    "HarnessConfig",
    "KernelSpec",
    "LagOneReport",
    "IoError",
    "MinMaxScaler",
    "OrderError",
    "ParseError",
    "PriceSeries",
    "ShapeError",
    "SingularError",
    "StabilityReport",
    "WindowedDataset",
    "benchmark",
    "fit_scaler",
    "lag_one_analysis",
    "load_csv",
    "make_windows",
    "mape",
    "model_predictions",
    "mse",
    "split",
    "stability",
    "__version__",
]
