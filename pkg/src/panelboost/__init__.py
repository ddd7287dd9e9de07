"""Sparse weighted panel models for additive time series.

An additive target (the pointwise sum of many component series) is
approximated by a small weighted panel of the components themselves,
extracted greedily: each boosting step pairs a closed-form least-squares
weight with a correlation screen, and the fitted panel forecasts the
aggregate on unseen horizons from the member observations alone.
"""

from .boost import (
    BoostConfig,
    FitTrace,
    PanelModel,
    PanelTerm,
    Selection,
    TraceRecord,
    fit,
    predict,
    residual,
    select_step,
)
from .dataio import (
    file_digest,
    read_model,
    read_panel_csv,
    read_prediction_csv,
    write_eval_report,
    write_model,
    write_panel_csv,
    write_prediction_csv,
    write_sweep_report,
)
from .errors import (
    DegenerateCorrelation,
    DegenerateResidual,
    DegenerateSplit,
    DomainError,
    DuplicateId,
    EmptyFamily,
    EmptyInput,
    IrregularGrid,
    MissingPanelMember,
    MissingValue,
    NoAdmissibleMember,
    PanelBoostError,
    ParseError,
    RangeError,
    ReservedId,
    ShapeError,
    SweepFailed,
    UnsupportedVersion,
    ZeroCandidate,
)
from .functional import (
    TransformKind,
    argmin_rho,
    inner,
    lambda_err,
    mean,
    pearson,
    phi,
    psi,
    transform,
)
from .modelsel import (
    Metrics,
    SweepGrid,
    SweepResult,
    SweepRow,
    cumulative,
    evaluate,
    sweep,
)
from .series import (
    CUMULATIVE_ID,
    PREDICTION_ID,
    RESIDUAL_ID,
    TARGET_ID,
    Family,
    Series,
    SplitSpec,
    TimeGrid,
    aggregate_target,
    restrict,
    restrict_family,
    split,
)
from .synth import GenSpec, generate

__version__ = "0.1.0"

__all__ = [
    "BoostConfig",
    "CUMULATIVE_ID",
    "DegenerateCorrelation",
    "DegenerateResidual",
    "DegenerateSplit",
    "DomainError",
    "DuplicateId",
    "EmptyFamily",
    "EmptyInput",
    "Family",
    "FitTrace",
    "GenSpec",
    "IrregularGrid",
    "Metrics",
    "MissingPanelMember",
    "MissingValue",
    "NoAdmissibleMember",
    "PREDICTION_ID",
    "PanelBoostError",
    "PanelModel",
    "PanelTerm",
    "ParseError",
    "RESIDUAL_ID",
    "RangeError",
    "ReservedId",
    "Selection",
    "Series",
    "ShapeError",
    "SplitSpec",
    "SweepFailed",
    "SweepGrid",
    "SweepResult",
    "SweepRow",
    "TARGET_ID",
    "TimeGrid",
    "TraceRecord",
    "TransformKind",
    "UnsupportedVersion",
    "ZeroCandidate",
    "aggregate_target",
    "argmin_rho",
    "cumulative",
    "evaluate",
    "file_digest",
    "fit",
    "generate",
    "inner",
    "lambda_err",
    "mean",
    "pearson",
    "phi",
    "predict",
    "psi",
    "read_model",
    "read_panel_csv",
    "read_prediction_csv",
    "residual",
    "restrict",
    "restrict_family",
    "select_step",
    "split",
    "sweep",
    "transform",
    "write_eval_report",
    "write_model",
    "write_panel_csv",
    "write_prediction_csv",
    "write_sweep_report",
]
