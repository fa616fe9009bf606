"""Discrete composite count distributions with Pareto tails."""

from .composite import (
    CompositeParams,
    HeadModel,
    Lognormal,
    Weibull,
    composite_cdf,
    composite_pdf,
    composite_sf,
    compute_phi,
)
from .discrete import DiscreteComposite, MomentMethod, MomentReport
from .errors import (
    DcParetoError,
    DegenerateDataError,
    DegenerateHeadError,
    DomainError,
    EmptyWindowError,
    FormatError,
    RowError,
)
from .fit import (
    CountSample,
    Family,
    FitConfig,
    FitFailure,
    FitResult,
    ModelSpec,
    aic,
    compare_models,
    fit_baseline,
    fit_composite,
    fit_model,
    loglik_composite,
)
from .inference import LrtResult, lrt_report, lrt_tail_index
from .ingest import (
    CountSeries,
    CutoffPlan,
    parse_generic_csv,
    parse_owid_csv,
    parse_who_csv,
    sequential_windows,
    window,
)

__version__ = "0.1.0"
