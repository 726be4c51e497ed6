"""Ranked-sequence (SRA) and histogram characterization of detector dark-count intervals."""

__version__ = "0.1.0"

from .binning import (
    BinningRule,
    Histogram,
    bins_mann_wald,
    bins_max_tenth,
    bins_sturges,
    build_histogram,
    normalized_coordinate,
)
from .estimators import HistogramTransformer, PoissonIntervalModel, SRATransformer
from .exceptions import SRAError
from .poisson import (
    PoissonFit,
    PoissonModel,
    compare_fits,
    fit_mle,
    fit_sra_least_squares,
    model_density,
    model_sra,
    r2_hist,
    r2_sra,
)
from .ranked import EcdfPoint, IntervalSample, RankedSequence, build_sra, ecdf, normalize_to_mean
from .records import RecordFormat, read_record, write_record
from .simulate import DetectorConfig, default_paper_config, simulate_intervals
from .stability import (
    StabilityCurve,
    SubsampleSet,
    deviation_factor,
    epsilon_hist,
    epsilon_sra,
    split_subsamples,
    stability_curve,
)

__all__ = [
    "BinningRule",
    "DetectorConfig",
    "EcdfPoint",
    "Histogram",
    "HistogramTransformer",
    "IntervalSample",
    "PoissonFit",
    "PoissonIntervalModel",
    "PoissonModel",
    "RankedSequence",
    "RecordFormat",
    "SRAError",
    "SRATransformer",
    "StabilityCurve",
    "SubsampleSet",
    "bins_mann_wald",
    "bins_max_tenth",
    "bins_sturges",
    "build_histogram",
    "build_sra",
    "compare_fits",
    "default_paper_config",
    "deviation_factor",
    "ecdf",
    "epsilon_hist",
    "epsilon_sra",
    "fit_mle",
    "fit_sra_least_squares",
    "model_density",
    "model_sra",
    "normalize_to_mean",
    "normalized_coordinate",
    "r2_hist",
    "r2_sra",
    "read_record",
    "simulate_intervals",
    "split_subsamples",
    "stability_curve",
    "write_record",
]
