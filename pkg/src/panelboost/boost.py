"""Greedy panel extraction: stagewise least squares with a correlation screen.

``fit`` grows a weighted panel one member at a time. Every iteration scores
each remaining candidate by the correlation of its least-squares scaling
with the current residual, accepts the best candidate at or above the
configured lower bound, and advances the prediction by the shrunk weight.
Without replacement, accepted members leave the candidate pool, so a panel
never contains the same member twice.

The per-candidate scoring inside ``select_step`` is order-independent by
contract (earliest family order wins ties), so it could be parallelized;
the outer loop is inherently sequential because each iteration consumes the
previous residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateCorrelation,
    DegenerateResidual,
    EmptyFamily,
    MissingPanelMember,
    NoAdmissibleMember,
    ShapeError,
    ZeroCandidate,
)
from .functional import TransformKind, argmin_rho, pearson, psi
from .series import PREDICTION_ID, RESIDUAL_ID, Family, Series, TimeGrid

WEIGHT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BoostConfig:
    """Fitting metaparameters.

    ``panel_size`` bounds the total number of accepted terms, the first one
    included. ``lbound`` is the minimum selection score: -1 accepts every
    candidate, 0 demands positive correlation with the residual. ``alpha``
    multiplies every stagewise least-squares weight; 1 disables shrinkage.
    """

    panel_size: int
    transform: TransformKind
    lbound: float = -1.0
    alpha: float = 1.0
    with_replacement: bool = False

    def __post_init__(self):
        if self.panel_size < 1:
            raise ValueError(f"panel_size must be at least 1, got {self.panel_size}")
        if not -1.0 <= self.lbound <= 1.0:
            raise ValueError(f"lbound must lie in [-1, 1], got {self.lbound}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class PanelTerm:
    """One accepted panel member."""

    member_id: str
    weight: float  # stored coefficient, alpha * raw_rho
    raw_rho: float  # least-squares weight before shrinkage
    score: float  # selection correlation in [-1, 1]
    iteration: int


class Selection(NamedTuple):
    member_id: str
    raw_rho: float
    score: float


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    member_id: str
    raw_rho: float
    score: float
    squared_error_after: float
    psi_after: float


@dataclass(frozen=True)
class FitTrace:
    """Per-iteration diagnostics of a fit."""

    records: tuple[TraceRecord, ...]

    def squared_errors(self) -> list[float]:
        return [r.squared_error_after for r in self.records]


@dataclass(frozen=True)
class PanelModel:
    """Ordered weighted panel plus the configuration that produced it."""

    terms: tuple[PanelTerm, ...]
    config: BoostConfig
    grid: TimeGrid
    stopped_early: bool

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not 1 <= len(self.terms) <= self.config.panel_size:
            raise ValueError(
                f"model must hold between 1 and {self.config.panel_size} terms, "
                f"got {len(self.terms)}"
            )
        if not self.config.with_replacement:
            ids = [t.member_id for t in self.terms]
            if len(set(ids)) != len(ids):
                raise ValueError("duplicate member ids in a without-replacement panel")
        for t in self.terms:
            if t.score < self.config.lbound:
                raise ValueError(
                    f"term {t.member_id!r} has score {t.score} below lbound "
                    f"{self.config.lbound}"
                )
            if abs(t.weight - self.config.alpha * t.raw_rho) > WEIGHT_TOLERANCE * max(
                1.0, abs(t.weight)
            ):
                raise ValueError(
                    f"term {t.member_id!r}: weight {t.weight} is not alpha * raw_rho"
                )

    def member_ids(self) -> list[str]:
        return [t.member_id for t in self.terms]


def select_step(
    candidates: Family, residual: Series, config: BoostConfig
) -> Selection | None:
    """Score every candidate against the residual; return the best admissible one.

    ``raw_rho`` is the least-squares weight of the candidate on the residual,
    and the score is the correlation of the weighted candidate with the
    residual, i.e. sign(raw_rho) * pearson(residual, candidate). Identically
    zero or constant candidates are skipped. Returns None when no candidate
    scores at or above ``config.lbound`` (the early-stop signal); ties break
    toward the earliest family position.
    """
    if not candidates.members:
        raise EmptyFamily("no candidates to select from")
    if len(residual.values) != candidates.grid.count:
        raise ShapeError(
            f"residual has {len(residual.values)} samples, "
            f"grid expects {candidates.grid.count}"
        )
    if np.ptp(residual.values) == 0:
        raise DegenerateResidual("residual has zero variance")

    best: Selection | None = None
    for member in candidates.members:
        try:
            raw_rho = argmin_rho(member.values, residual.values)
            corr = pearson(residual.values, member.values)
        except (ZeroCandidate, DegenerateCorrelation):
            continue
        sign = 1.0 if raw_rho > 0 else (-1.0 if raw_rho < 0 else 0.0)
        score = sign * corr
        if score < config.lbound:
            continue
        # strict improvement keeps the earliest qualifier on ties
        if best is None or score > best.score:
            best = Selection(member.id, raw_rho, score)
    return best


def fit(
    family: Family, target: Series, config: BoostConfig
) -> tuple[PanelModel, FitTrace]:
    """Grow a panel of up to ``config.panel_size`` terms approximating the target.

    Iteration 0 selects against the target itself; every later iteration
    selects against target minus the current prediction. Fitting stops early
    (``stopped_early`` set) when the candidate pool empties, no candidate
    clears ``lbound``, or the residual has zero variance. The trace records
    squared error and the composite cost of target vs. prediction after every
    accepted term.
    """
    if not family.members:
        raise EmptyFamily("cannot fit against an empty family")
    if len(target.values) != family.grid.count:
        raise ShapeError(
            f"target has {len(target.values)} samples, "
            f"grid expects {family.grid.count}"
        )

    pool = list(family.members)
    prediction = np.zeros(family.grid.count)
    terms: list[PanelTerm] = []
    records: list[TraceRecord] = []
    stopped_early = False

    for iteration in range(config.panel_size):
        if not pool:
            stopped_early = True
            break
        residual_now = Series(RESIDUAL_ID, target.values - prediction)
        try:
            chosen = select_step(Family(family.grid, tuple(pool)), residual_now, config)
        except DegenerateResidual:
            stopped_early = True
            break
        if chosen is None:
            stopped_early = True
            break
        index = next(i for i, m in enumerate(pool) if m.id == chosen.member_id)
        member = pool[index]
        weight = config.alpha * chosen.raw_rho
        prediction = prediction + weight * member.values
        terms.append(
            PanelTerm(chosen.member_id, weight, chosen.raw_rho, chosen.score, iteration)
        )
        if not config.with_replacement:
            del pool[index]
        squared_error = float(np.sum((target.values - prediction) ** 2))
        try:
            psi_now = psi(config.transform, target.values, prediction)
        except DegenerateCorrelation:
            psi_now = float("nan")
        records.append(
            TraceRecord(
                iteration,
                chosen.member_id,
                chosen.raw_rho,
                chosen.score,
                squared_error,
                psi_now,
            )
        )

    if not terms:
        raise NoAdmissibleMember(
            "no candidate was accepted (threshold too high or degenerate target)"
        )
    model = PanelModel(tuple(terms), config, family.grid, stopped_early)
    return model, FitTrace(tuple(records))


def predict(model: PanelModel, family: Family) -> Series:
    """Weighted sum of the model's members over the family's observations.

    The family may live on any grid: forecasting a new horizon means handing
    in the same members observed over that horizon.
    """
    by_id = {m.id: m for m in family.members}
    values = np.zeros(family.grid.count)
    for term in model.terms:
        member = by_id.get(term.member_id)
        if member is None:
            raise MissingPanelMember(term.member_id)
        values = values + term.weight * member.values
    return Series(PREDICTION_ID, values)


def residual(target: Series, prediction: Series) -> Series:
    """Pointwise difference target - prediction."""
    if len(target.values) != len(prediction.values):
        raise ShapeError(
            f"length mismatch: {len(target.values)} vs {len(prediction.values)}"
        )
    return Series(RESIDUAL_ID, target.values - prediction.values)
