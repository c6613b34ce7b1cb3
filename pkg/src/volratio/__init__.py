"""Variance-ratio construction, distribution fitting and KS ranking."""

__version__ = "0.1.0"

from .distributions import (  # noqa: E402
    FAMILY_ORDER,
    BetaPrimeParams,
    DistributionSpec,
    GammaParams,
    InverseGammaParams,
    InverseGaussianParams,
    LogNormalParams,
    NormalParams,
    WeibullParams,
    bp_cdf,
    bp_invert_params,
    bp_logpdf,
    bp_sample,
    bp_tail_exponents,
    cdf,
    invert_spec,
    logpdf,
    make_spec,
    pdf,
    sample,
)
from .errors import (  # noqa: E402
    AlignmentError,
    DataQualityError,
    DegenerateDataError,
    FittingError,
    IngestError,
    VolratioError,
)
from .fitting import FitConfig, FitResult, bp_moment_init, fit_all_families, fit_mle, neg_loglik  # noqa: E402
from .gof import KSStat, ks_one_sample, ks_two_sample, pearson  # noqa: E402
from .ingest import Manifest, align, load_index_csv, load_manifest, load_price_csv  # noqa: E402
from .report import ReportBundle, make_synthetic, run_ksmatrix, run_pcc, run_table_report  # noqa: E402
from .volatility import (  # noqa: E402
    IndexSeries,
    PriceSeries,
    RatioSeries,
    RVSeries,
    build_ratio_series,
    implied_variance,
    invert_series,
    log_returns,
    realized_variance,
    trading_day_rescale,
)

__all__ = [
    "__version__",
    "FAMILY_ORDER",
    "BetaPrimeParams",
    "DistributionSpec",
    "GammaParams",
    "InverseGammaParams",
    "InverseGaussianParams",
    "LogNormalParams",
    "NormalParams",
    "WeibullParams",
    "bp_cdf",
    "bp_invert_params",
    "bp_logpdf",
    "bp_sample",
    "bp_tail_exponents",
    "cdf",
    "invert_spec",
    "logpdf",
    "make_spec",
    "pdf",
    "sample",
    "AlignmentError",
    "DataQualityError",
    "DegenerateDataError",
    "FittingError",
    "IngestError",
    "VolratioError",
    "FitConfig",
    "FitResult",
    "bp_moment_init",
    "fit_all_families",
    "fit_mle",
    "neg_loglik",
    "KSStat",
    "ks_one_sample",
    "ks_two_sample",
    "pearson",
    "Manifest",
    "align",
    "load_index_csv",
    "load_manifest",
    "load_price_csv",
    "ReportBundle",
    "make_synthetic",
    "run_ksmatrix",
    "run_pcc",
    "run_table_report",
    "IndexSeries",
    "PriceSeries",
    "RatioSeries",
    "RVSeries",
    "build_ratio_series",
    "implied_variance",
    "invert_series",
    "log_returns",
    "realized_variance",
    "trading_day_rescale",
]
