"""Combine per-side goal models (or a heuristic) into integer scorelines."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .features import FeatureBuilder
from .heuristics import (
    HEURISTICS,
    StandingsTable,
    build_training_table,
    home_win_predict,
    recency_predict,
    tradition_predict,
)
from .ingest import Fixture
from .regress.base import ModelBase, SchemaMismatch


class PredictError(Exception):
    pass


class NonFinite(PredictError):
    pass


class EmptyTestSet(PredictError):
    pass


def round_goals(raw: float) -> int:
    """Round half up, clamp negatives to zero: 1.1 -> 1, 1.5 -> 2, -0.3 -> 0."""
    raw = float(raw)
    if not math.isfinite(raw):
        raise NonFinite(f"cannot round non-finite prediction {raw!r}")
    return max(0, math.floor(raw + 0.5))


@dataclass(frozen=True)
class ScorelinePrediction:
    """Raw and rounded goals for one fixture under one model label."""

    fixture_id: str
    model: str
    raw_home: float
    raw_away: float
    pred_home: int
    pred_away: int
    actual_home: int | None
    actual_away: int | None

    @property
    def correct_scoreline(self) -> bool:
        return (self.actual_home is not None
                and self.pred_home == self.actual_home
                and self.pred_away == self.actual_away)


@dataclass
class PredictionSet:
    model: str
    predictions: list[ScorelinePrediction]
    skipped: list[tuple[str, str]]
    coverage: float | None = None  # players approach: share of lineup ids known


def _ordered(fixtures: Iterable[Fixture]) -> list[Fixture]:
    return sorted(fixtures, key=lambda f: (f.kickoff, f.fixture_id))


class ModelPairPredictor:
    """Home and away regression models speaking the scoreline interface."""

    def __init__(self, label: str, approach: str, home_model: ModelBase,
                 away_model: ModelBase, builder: FeatureBuilder,
                 require_target: bool = True):
        if home_model.n_features != away_model.n_features:
            raise SchemaMismatch(
                f"home model has {home_model.n_features} features, away "
                f"model {away_model.n_features}; the pair must share one layout")
        self.label = label
        self.approach = approach
        self.home_model = home_model
        self.away_model = away_model
        self.builder = builder
        self.require_target = require_target

    def predict(self, fixtures: Sequence[Fixture]) -> PredictionSet:
        fixtures = _ordered(fixtures)
        if not fixtures:
            raise EmptyTestSet("no fixtures to predict")
        home_m = self.builder.build_matrix(
            fixtures, self.approach, "home", require_target=self.require_target)
        away_m = self.builder.build_matrix(
            fixtures, self.approach, "away", require_target=self.require_target)
        raw_home = dict(zip(home_m.fixture_ids(),
                            self.home_model.predict(home_m.X())))
        raw_away = dict(zip(away_m.fixture_ids(),
                            self.away_model.predict(away_m.X())))

        skipped: dict[str, str] = {}
        for fid, reason in home_m.skipped + away_m.skipped:
            skipped.setdefault(fid, reason)
        predictions = []
        for fixture in fixtures:
            fid = fixture.fixture_id
            if fid not in raw_home or fid not in raw_away:
                skipped.setdefault(fid, "row not built for both sides")
                continue
            rh = float(raw_home[fid])
            ra = float(raw_away[fid])
            predictions.append(ScorelinePrediction(
                fixture_id=fid, model=self.label,
                raw_home=rh, raw_away=ra,
                pred_home=round_goals(rh), pred_away=round_goals(ra),
                actual_home=fixture.home_goals, actual_away=fixture.away_goals))
        order = {f.fixture_id: i for i, f in enumerate(fixtures)}
        skip_list = sorted(skipped.items(), key=lambda kv: order[kv[0]])
        coverage = home_m.coverage if self.approach == "players" else None
        return PredictionSet(model=self.label, predictions=predictions,
                             skipped=skip_list, coverage=coverage)


class HeuristicPredictor:
    """Home Win / Tradition / Recency behind the same predict interface."""

    def __init__(self, name: str, train_fixtures: Sequence[Fixture],
                 history: Sequence[Fixture] | None = None):
        if name not in HEURISTICS:
            raise ValueError(f"unknown heuristic {name!r}; expected one of {HEURISTICS}")
        self.label = name
        self._table: StandingsTable | None = None
        if name == "tradition":
            self._table = build_training_table(train_fixtures)
        self._history = list(history if history is not None else train_fixtures)

    def predict(self, fixtures: Sequence[Fixture]) -> PredictionSet:
        fixtures = _ordered(fixtures)
        if not fixtures:
            raise EmptyTestSet("no fixtures to predict")
        predictions = []
        for fixture in fixtures:
            if self.label == "home-win":
                ph, pa = home_win_predict(fixture)
            elif self.label == "tradition":
                ph, pa = tradition_predict(fixture, self._table)
            else:
                ph, pa = recency_predict(fixture, self._history)
            predictions.append(ScorelinePrediction(
                fixture_id=fixture.fixture_id, model=self.label,
                raw_home=float(ph), raw_away=float(pa),
                pred_home=ph, pred_away=pa,
                actual_home=fixture.home_goals, actual_away=fixture.away_goals))
        return PredictionSet(model=self.label, predictions=predictions, skipped=[])


def predict_scorelines(home_model: ModelBase, away_model: ModelBase,
                       fixtures: Sequence[Fixture], builder: FeatureBuilder,
                       approach: str, label: str | None = None,
                       require_target: bool = True) -> PredictionSet:
    """One scoreline per eligible fixture from a home/away model pair."""
    pair = ModelPairPredictor(
        label or f"{approach}+{home_model.technique}", approach,
        home_model, away_model, builder, require_target=require_target)
    return pair.predict(fixtures)


PREDICTION_COLUMNS = ("fixture_id", "model", "raw_home", "raw_away",
                      "pred_home", "pred_away", "actual_home", "actual_away")


def save_predictions_csv(pset: PredictionSet, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PREDICTION_COLUMNS)
        for p in pset.predictions:
            writer.writerow([
                p.fixture_id, p.model, repr(p.raw_home), repr(p.raw_away),
                p.pred_home, p.pred_away,
                "" if p.actual_home is None else p.actual_home,
                "" if p.actual_away is None else p.actual_away,
            ])


def save_predictions_json(pset: PredictionSet, path) -> None:
    blob = {
        "model": pset.model,
        "skipped": [{"fixture_id": fid, "reason": reason}
                    for fid, reason in pset.skipped],
        "predictions": [
            {
                "fixture_id": p.fixture_id, "model": p.model,
                "raw_home": p.raw_home, "raw_away": p.raw_away,
                "pred_home": p.pred_home, "pred_away": p.pred_away,
                "actual_home": p.actual_home, "actual_away": p.actual_away,
            }
            for p in pset.predictions
        ],
    }
    Path(path).write_text(json.dumps(blob, sort_keys=True, indent=1) + "\n")
