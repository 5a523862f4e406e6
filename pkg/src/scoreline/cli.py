"""Command-line interface: train, predict, evaluate, importance, bet.

Runs are driven by a key=value config file plus CLI overrides; every
artifact embeds the resolved config hash, the seed and a dataset
fingerprint so identical runs produce identical bytes.

Exit codes: 0 success, 1 data/model error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .evaluate import (
    EvaluateError,
    MISSING_ODDS_POLICIES,
    actual_standings,
    bet_run,
    chi2_importance,
    fitness,
    kendall_tau,
    rank_models,
    rank_sum_overview,
    simulate_standings,
    zone_accuracy,
)
from .features import APPROACHES, FeatureBuilder, FeatureError
from .heuristics import HEURISTICS, HeuristicError
from .ingest import Dataset, IngestError, load_dataset, load_fixtures
from .predict import (
    HeuristicPredictor,
    ModelPairPredictor,
    PredictError,
    PREDICTION_COLUMNS,
    PredictionSet,
    save_predictions_csv,
)
from .regress import RegressError, StoreError, fit_model, load_model, save_model
from .schema import SchemaError, default_schema, load_schema

ML_TECHNIQUES = ("lr", "knn", "dtr", "rfr", "svr", "svr-rbf")
SCENARIOS = ("home", "away", "betting", "standings", "top4", "relegation")
HIGHER_IS_BETTER = {
    "home": False, "away": False, "betting": True,
    "standings": True, "top4": True, "relegation": True,
}
STATS_APPROACHES = ("lineup_stats", "team_stats")
FORMAT_VERSION = 1


class UsageError(Exception):
    pass


class MissingArtifact(Exception):
    def __init__(self, path):
        super().__init__(f"missing artifact {path}; run `scoreline train` first")


# ------------------------------------------------------------------ config

_INT_KEYS = ("test_size", "seed", "knn_k", "tree_depth", "tree_min_leaf",
             "forest_trees", "svr_max_iter")
_FLOAT_KEYS = ("stake", "forest_fraction", "svr_c", "svr_epsilon", "svr_tol",
               "svr_lr")
_BOOL_KEYS = ("forest_bootstrap",)
_STR_KEYS = ("data_dir", "out_dir", "approach", "technique", "model", "schema",
             "missing_odds", "forest_features", "svr_gamma")
CONFIG_KEYS = _INT_KEYS + _FLOAT_KEYS + _BOOL_KEYS + _STR_KEYS

DEFAULTS = {
    "data_dir": None, "out_dir": "runs", "test_size": 100,
    "approach": None, "technique": None, "model": None,
    "seed": 0, "schema": None, "stake": 1.0, "missing_odds": "skip",
    "knn_k": 5, "tree_depth": 6, "tree_min_leaf": 5,
    "forest_trees": 100, "forest_features": "sqrt",
    "forest_bootstrap": True, "forest_fraction": 1.0,
    "svr_c": 1.0, "svr_epsilon": 0.1, "svr_tol": 1e-6,
    "svr_max_iter": 50_000, "svr_lr": 0.5, "svr_gamma": "scale",
}


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"config key {key} expects a boolean, got {raw!r}")


def parse_config_file(path) -> dict:
    """key = value lines; blank lines and full-line # comments ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            if key in _INT_KEYS:
                out[key] = int(raw)
            elif key in _FLOAT_KEYS:
                out[key] = float(raw)
            elif key in _BOOL_KEYS:
                out[key] = _parse_bool(raw, key)
            else:
                out[key] = raw
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {raw!r}") from exc
    return out


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run settings (defaults < config file < CLI flags)."""

    data_dir: str | None
    out_dir: str
    test_size: int
    approach: str | None
    technique: str | None
    model: str | None
    seed: int
    schema: str | None
    stake: float
    missing_odds: str
    hyper: tuple[tuple[str, object], ...]

    def hyper_dict(self) -> dict:
        return dict(self.hyper)

    def as_dict(self) -> dict:
        out = {
            "data_dir": self.data_dir, "out_dir": self.out_dir,
            "test_size": self.test_size, "approach": self.approach,
            "technique": self.technique, "model": self.model,
            "seed": self.seed, "schema": self.schema, "stake": self.stake,
            "missing_odds": self.missing_odds,
        }
        out.update(self.hyper_dict())
        return out

    def config_hash(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if getattr(args, "config", None):
        values.update(parse_config_file(args.config))
    for key in CONFIG_KEYS:
        given = getattr(args, key, None)
        if given is not None:
            values[key] = given

    if values["approach"] is not None and values["approach"] not in APPROACHES:
        raise UsageError(f"approach must be one of {APPROACHES}, got {values['approach']!r}")
    if values["technique"] is not None and values["technique"] not in ML_TECHNIQUES:
        raise UsageError(f"technique must be one of {ML_TECHNIQUES}, got {values['technique']!r}")
    if values["model"] is not None and values["model"] not in HEURISTICS:
        raise UsageError(f"model must be one of {HEURISTICS}, got {values['model']!r}")
    if values["missing_odds"] not in MISSING_ODDS_POLICIES:
        raise UsageError(f"missing_odds must be one of {MISSING_ODDS_POLICIES}")
    if values["test_size"] < 1:
        raise UsageError("test_size must be at least 1")
    if values["stake"] <= 0:
        raise UsageError("stake must be positive")
    if values["knn_k"] < 1:
        raise UsageError("knn_k must be at least 1")
    if values["tree_depth"] < 1 or values["tree_min_leaf"] < 1:
        raise UsageError("tree_depth and tree_min_leaf must be at least 1")
    if values["forest_trees"] < 1:
        raise UsageError("forest_trees must be at least 1")
    if not 0.0 < values["forest_fraction"] <= 1.0:
        raise UsageError("forest_fraction must be in (0, 1]")
    if values["svr_c"] <= 0:
        raise UsageError("svr_c must be positive")
    if values["svr_epsilon"] < 0:
        raise UsageError("svr_epsilon must be non-negative")
    if values["svr_max_iter"] < 1:
        raise UsageError("svr_max_iter must be at least 1")

    hyper_keys = ("knn_k", "tree_depth", "tree_min_leaf", "forest_trees",
                  "forest_features", "forest_bootstrap", "forest_fraction",
                  "svr_c", "svr_epsilon", "svr_tol", "svr_max_iter", "svr_lr",
                  "svr_gamma")
    hyper = tuple((k, values[k]) for k in hyper_keys)
    return RunConfig(
        data_dir=values["data_dir"], out_dir=values["out_dir"],
        test_size=values["test_size"], approach=values["approach"],
        technique=values["technique"], model=values["model"],
        seed=values["seed"], schema=values["schema"], stake=values["stake"],
        missing_odds=values["missing_odds"], hyper=hyper)


def technique_params(cfg: RunConfig, technique: str) -> tuple[str, dict]:
    """Map a CLI technique name to (engine name, fit keyword arguments)."""
    h = cfg.hyper_dict()
    if technique == "lr":
        return "lr", {}
    if technique == "knn":
        return "knn", {"k": h["knn_k"]}
    if technique == "dtr":
        return "dtr", {"max_depth": h["tree_depth"], "min_leaf": h["tree_min_leaf"]}
    if technique == "rfr":
        feats = h["forest_features"]
        if isinstance(feats, str) and feats not in ("sqrt", "all"):
            feats = int(feats)
        return "rfr", {
            "n_trees": h["forest_trees"], "max_depth": h["tree_depth"],
            "min_leaf": h["tree_min_leaf"], "max_features": feats,
            "bootstrap": h["forest_bootstrap"],
            "bootstrap_fraction": h["forest_fraction"], "seed": cfg.seed,
        }
    if technique in ("svr", "svr-rbf"):
        gamma = h["svr_gamma"]
        if isinstance(gamma, str) and gamma != "scale":
            gamma = float(gamma)
        params = {
            "C": h["svr_c"], "epsilon": h["svr_epsilon"], "tol": h["svr_tol"],
            "max_iter": h["svr_max_iter"], "lr": h["svr_lr"],
            "kernel": "rbf" if technique == "svr-rbf" else "linear",
        }
        if technique == "svr-rbf":
            params["gamma"] = gamma
        return "svr", params
    raise UsageError(f"technique must be one of {ML_TECHNIQUES}, got {technique!r}")


# ------------------------------------------------------------------ helpers

def data_fingerprint(data_dir) -> str:
    sha = hashlib.sha256()
    for name in ("fixtures.csv", "player_stats.csv", "odds.csv"):
        sha.update(name.encode())
        sha.update(Path(data_dir, name).read_bytes())
    return sha.hexdigest()[:16]


def load_context(cfg: RunConfig) -> tuple[Dataset, FeatureBuilder]:
    if not cfg.data_dir:
        raise UsageError("data_dir is required (flag --data-dir or config file)")
    dataset = load_dataset(cfg.data_dir, cfg.test_size)
    schema = load_schema(cfg.schema) if cfg.schema else default_schema()
    return dataset, FeatureBuilder(dataset, schema)


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n",
                          encoding="utf-8")


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def fnum(x) -> str:
    """Round-trippable cell text for optional floats."""
    if x is None:
        return ""
    return repr(float(x))


def train_pair(cfg: RunConfig, builder: FeatureBuilder, dataset: Dataset,
               approach: str, technique: str):
    """Fit home and away models of one technique on the training split."""
    engine, params = technique_params(cfg, technique)
    matrices = {}
    models = {}
    for side in ("home", "away"):
        matrix = builder.build_matrix(dataset.train_fixtures, approach, side)
        models[side] = fit_model(engine, matrix.X(), matrix.y(), params,
                                 feature_names=matrix.feature_names)
        matrices[side] = matrix
    return models["home"], models["away"], matrices["home"], matrices["away"]


def _train_manifest(cfg: RunConfig, label: str, approach: str, technique: str,
                    home_model, away_model, home_matrix, away_matrix,
                    schema_fp: str) -> dict:
    manifest = {
        "format_version": FORMAT_VERSION,
        "command": "train",
        "label": label,
        "approach": approach,
        "technique": technique,
        "config": cfg.as_dict(),
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "data_fingerprint": data_fingerprint(cfg.data_dir),
        "schema_fingerprint": schema_fp,
        "feature_count": home_model.n_features,
        "rows": {"home": len(home_matrix.rows), "away": len(away_matrix.rows)},
        "skipped": {"home": [list(s) for s in home_matrix.skipped],
                    "away": [list(s) for s in away_matrix.skipped]},
    }
    if approach == "players":
        manifest["coverage"] = {"home": home_matrix.coverage,
                                "away": away_matrix.coverage}
    if technique in ("svr", "svr-rbf"):
        manifest["svr_status"] = {"home": home_model.status,
                                  "away": away_model.status}
    return manifest


# ----------------------------------------------------------------- commands

def cmd_train(cfg: RunConfig, args: argparse.Namespace) -> int:
    if cfg.model is not None:
        raise UsageError("heuristics need no training; use `evaluate --model`")
    if not cfg.approach or not cfg.technique:
        raise UsageError("train requires --approach and --technique")
    dataset, builder = load_context(cfg)
    label = f"{cfg.approach}+{cfg.technique}"
    home_model, away_model, home_matrix, away_matrix = train_pair(
        cfg, builder, dataset, cfg.approach, cfg.technique)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_model(home_model, out_dir / "model_home.json")
    save_model(away_model, out_dir / "model_away.json")
    manifest = _train_manifest(cfg, label, cfg.approach, cfg.technique,
                               home_model, away_model, home_matrix,
                               away_matrix, builder.schema.fingerprint())
    write_json(out_dir / "train_manifest.json", manifest)
    print(f"trained {label}: {len(home_matrix.rows)} home rows, "
          f"{len(away_matrix.rows)} away rows, {home_model.n_features} features")
    for side, matrix in (("home", home_matrix), ("away", away_matrix)):
        for fid, reason in matrix.skipped:
            print(f"skipped {side} {fid}: {reason}")
    print(f"artifacts written to {out_dir}")
    return 0


def _load_artifacts(artifacts_dir):
    art = Path(artifacts_dir)
    manifest_path = art / "train_manifest.json"
    home_path = art / "model_home.json"
    away_path = art / "model_away.json"
    for path in (manifest_path, home_path, away_path):
        if not path.exists():
            raise MissingArtifact(path)
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    return manifest, load_model(home_path), load_model(away_path)


def _context_from_manifest(manifest: dict) -> tuple[Dataset, FeatureBuilder]:
    conf = manifest["config"]
    dataset = load_dataset(conf["data_dir"], conf["test_size"])
    schema = load_schema(conf["schema"]) if conf.get("schema") else default_schema()
    return dataset, FeatureBuilder(dataset, schema)


def cmd_predict(cfg: RunConfig, args: argparse.Namespace) -> int:
    if not args.artifacts:
        raise UsageError("predict requires --artifacts DIR from a train run")
    if not args.fixtures:
        raise UsageError("predict requires --fixtures FILE of upcoming matches")
    manifest, home_model, away_model = _load_artifacts(args.artifacts)
    dataset, builder = _context_from_manifest(manifest)
    upcoming = load_fixtures(args.fixtures, require_goals=False)
    pair = ModelPairPredictor(manifest["label"], manifest["approach"],
                              home_model, away_model, builder,
                              require_target=False)
    pset = pair.predict(upcoming)
    out = Path(args.out) if args.out else Path(cfg.out_dir) / "predictions.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_predictions_csv(pset, out)
    for fid, reason in pset.skipped:
        print(f"skipped {fid}: {reason}")
    if pset.coverage is not None and pset.coverage < 1.0:
        print(f"coverage warning: only {100 * pset.coverage:.1f}% of listed "
              f"lineup players are known from training", file=sys.stderr)
    print(f"wrote {len(pset.predictions)} predictions to {out}")
    return 0


def _grid_prediction_sets(cfg: RunConfig, dataset: Dataset,
                          builder: FeatureBuilder) -> list[PredictionSet]:
    test = list(dataset.test_fixtures)
    psets = []
    for name in HEURISTICS:
        predictor = HeuristicPredictor(name, dataset.train_fixtures,
                                       history=dataset.fixtures)
        psets.append(predictor.predict(test))
    for approach in APPROACHES:
        for technique in ML_TECHNIQUES:
            home_model, away_model, _hm, _am = train_pair(
                cfg, builder, dataset, approach, technique)
            pair = ModelPairPredictor(f"{approach}+{technique}", approach,
                                      home_model, away_model, builder)
            psets.append(pair.predict(test))
    return psets


def _single_prediction_set(cfg: RunConfig, args: argparse.Namespace):
    """One PredictionSet plus its evaluation context, per CLI selection."""
    if cfg.model is not None:
        dataset, builder = load_context(cfg)
        predictor = HeuristicPredictor(cfg.model, dataset.train_fixtures,
                                       history=dataset.fixtures)
        return [predictor.predict(list(dataset.test_fixtures))], dataset, builder, None
    if getattr(args, "artifacts", None):
        manifest, home_model, away_model = _load_artifacts(args.artifacts)
        dataset, builder = _context_from_manifest(manifest)
        pair = ModelPairPredictor(manifest["label"], manifest["approach"],
                                  home_model, away_model, builder)
        pset = pair.predict(list(dataset.test_fixtures))
        return [pset], dataset, builder, manifest["approach"]
    raise UsageError("evaluate needs --all, --model NAME, or --artifacts DIR")


def _importance_rows(builder: FeatureBuilder, dataset: Dataset,
                     approaches) -> list[list]:
    rows = []
    for approach in approaches:
        for side in ("home", "away"):
            matrix = builder.build_matrix(dataset.train_fixtures, approach, side)
            ranking = chi2_importance(matrix.X(), matrix.y(), matrix.feature_names)
            for feature, score in ranking:
                rows.append([approach, side, feature, fnum(score)])
    return rows


def _evaluate_bundle(cfg: RunConfig, dataset: Dataset, psets: list,
                     out_dir: Path, importance_approaches) -> dict:
    """Write the full report bundle; returns the scenario value map."""
    by_id = {f.fixture_id: f for f in dataset.fixtures}
    fitness_rows = []
    standings_rows = []
    tau_rows = []
    zone_rows = []
    bet_rows = []
    pred_rows = []
    values = {s: {} for s in SCENARIOS}
    notes = []

    for pset in psets:
        label = pset.model
        preds = pset.predictions
        covered = [by_id[p.fixture_id] for p in preds]
        fr_home = fitness([p.raw_home for p in preds],
                          [p.actual_home for p in preds], label, "home")
        fr_away = fitness([p.raw_away for p in preds],
                          [p.actual_away for p in preds], label, "away")
        for fr in (fr_home, fr_away):
            fitness_rows.append([fr.model, fr.side, fr.n, fnum(fr.mae),
                                 fnum(fr.rmse), fnum(fr.r2)])
        values["home"][label] = fr_home.mae
        values["away"][label] = fr_away.mae

        pred_table = simulate_standings(preds, covered)
        act_table = actual_standings(covered)
        for source, table in (("predicted", pred_table), ("actual", act_table)):
            for pos, row in enumerate(table.rows, start=1):
                standings_rows.append([label, source, pos, row.team, row.played,
                                       row.points, row.goal_diff, row.goals_for])
        tau = kendall_tau(pred_table, act_table)
        values["standings"][label] = tau
        tau_rows.append([label, fnum(tau)])
        try:
            top4 = zone_accuracy(pred_table, act_table, "top-4")
            bottom3 = zone_accuracy(pred_table, act_table, "bottom-3")
        except EvaluateError as exc:
            top4 = bottom3 = None
            notes.append(f"{label}: zone accuracy unavailable ({exc})")
        values["top4"][label] = top4
        values["relegation"][label] = bottom3
        zone_rows.append([label, fnum(top4), fnum(bottom3)])

        ledger = bet_run(preds, dataset.odds, cfg.stake, cfg.missing_odds)
        values["betting"][label] = ledger.net_earnings
        correct = sum(1 for e in ledger.entries if e.correct)
        bet_rows.append([label, fnum(ledger.stake), ledger.policy,
                         ledger.bets_placed, ledger.bets_skipped, correct,
                         fnum(ledger.total_payout), fnum(ledger.net_earnings)])

        for p in preds:
            pred_rows.append([p.fixture_id, p.model, fnum(p.raw_home),
                              fnum(p.raw_away), p.pred_home, p.pred_away,
                              p.actual_home, p.actual_away])
        for fid, reason in pset.skipped:
            notes.append(f"{label}: skipped {fid}: {reason}")

    ranks = {s: rank_models(values[s], HIGHER_IS_BETTER[s]) for s in SCENARIOS}
    overview = rank_sum_overview(ranks, models=[p.model for p in psets])

    write_csv(out_dir / "fitness.csv",
              ["model", "side", "n", "mae", "rmse", "r2"], fitness_rows)
    write_csv(out_dir / "standings.csv",
              ["model", "source", "position", "team", "played", "points",
               "goal_diff", "goals_for"], standings_rows)
    write_csv(out_dir / "tau.csv", ["model", "tau"], tau_rows)
    write_csv(out_dir / "zones.csv", ["model", "top4_pct", "bottom3_pct"],
              zone_rows)
    write_csv(out_dir / "betting.csv",
              ["model", "stake", "policy", "bets_placed", "bets_skipped",
               "correct_scorelines", "total_payout", "net_earnings"], bet_rows)
    write_csv(out_dir / "predictions.csv", list(PREDICTION_COLUMNS), pred_rows)
    write_csv(out_dir / "overview.csv",
              ["model", *SCENARIOS, "rank_sum"],
              [[row.model, *(r for _, r in row.ranks), row.rank_sum]
               for row in overview])

    summary = [
        "scoreline evaluation summary",
        f"data: {cfg.data_dir or 'per train manifest'} "
        f"({len(dataset.train_fixtures)} train / {len(dataset.test_fixtures)} test fixtures)",
        f"seed {cfg.seed}, stake {cfg.stake:g}, missing-odds policy {cfg.missing_odds}",
        "",
        "model ranking (rank sum over six scenarios, lower is better):",
    ]
    for i, row in enumerate(overview, start=1):
        scen = ", ".join(f"{name} {rank}" for name, rank in row.ranks)
        summary.append(f"{i:3d}. {row.model:24s} rank sum {row.rank_sum:3d}  ({scen})")
    if notes:
        summary.append("")
        summary.append("notes:")
        summary.extend(f"  {note}" for note in notes)
    summary.append("")
    (out_dir / "summary.txt").write_text("\n".join(summary), encoding="utf-8")
    return values


def cmd_evaluate(cfg: RunConfig, args: argparse.Namespace) -> int:
    importance_approaches: tuple = ()
    if args.all:
        dataset, builder = load_context(cfg)
        psets = _grid_prediction_sets(cfg, dataset, builder)
        importance_approaches = STATS_APPROACHES
    else:
        psets, dataset, builder, approach = _single_prediction_set(cfg, args)
        if approach in STATS_APPROACHES:
            importance_approaches = (approach,)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _evaluate_bundle(cfg, dataset, psets, out_dir, importance_approaches)
    if importance_approaches:
        write_csv(out_dir / "importance.csv",
                  ["approach", "side", "feature", "score"],
                  _importance_rows(builder, dataset, importance_approaches))
    manifest = {
        "format_version": FORMAT_VERSION,
        "command": "evaluate",
        "config": cfg.as_dict(),
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "data_fingerprint": data_fingerprint(cfg.data_dir) if cfg.data_dir else None,
        "models": [p.model for p in psets],
        "skipped": {p.model: [list(s) for s in p.skipped] for p in psets},
    }
    write_json(out_dir / "evaluate_manifest.json", manifest)
    print(f"evaluated {len(psets)} model(s); reports in {out_dir}")
    print((out_dir / "summary.txt").read_text(encoding="utf-8"), end="")
    return 0


def cmd_importance(cfg: RunConfig, args: argparse.Namespace) -> int:
    if not cfg.approach:
        raise UsageError("importance requires --approach")
    dataset, builder = load_context(cfg)
    rows = _importance_rows(builder, dataset, (cfg.approach,))
    out = Path(args.out) if args.out else Path(cfg.out_dir) / "importance.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, ["approach", "side", "feature", "score"], rows)
    print(f"wrote {len(rows)} feature scores to {out}")
    for approach, side, feature, score in rows[:5]:
        print(f"  {side:5s} {feature:24s} {score}")
    return 0


def cmd_bet(cfg: RunConfig, args: argparse.Namespace) -> int:
    psets, dataset, _builder, _approach = _single_prediction_set(cfg, args)
    pset = psets[0]
    ledger = bet_run(pset.predictions, dataset.odds, cfg.stake, cfg.missing_odds)
    out = Path(args.out) if args.out else Path(cfg.out_dir) / "betting_ledger.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = [
        [pset.model, e.fixture_id, e.pred_home, e.pred_away, e.odds_found,
         "" if e.odds is None else fnum(e.odds), e.correct, fnum(e.payout)]
        for e in ledger.entries
    ]
    write_csv(out, ["model", "fixture_id", "pred_home", "pred_away",
                    "odds_found", "odds", "correct", "payout"], rows)
    print(f"{pset.model}: placed {ledger.bets_placed}, skipped "
          f"{ledger.bets_skipped}, payout {ledger.total_payout:.2f}, "
          f"net {ledger.net_earnings:+.2f}")
    print(f"ledger written to {out}")
    return 0


# --------------------------------------------------------------- arg parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("run configuration")
    group.add_argument("--config", help="key = value config file")
    group.add_argument("--data-dir", dest="data_dir",
                       help="directory holding fixtures.csv, player_stats.csv, odds.csv")
    group.add_argument("--out-dir", dest="out_dir", help="output directory (default runs)")
    group.add_argument("--test-size", dest="test_size", type=int,
                       help="fixtures held out for testing (default 100)")
    group.add_argument("--approach", choices=APPROACHES)
    group.add_argument("--technique", choices=ML_TECHNIQUES)
    group.add_argument("--model", choices=HEURISTICS, help="heuristic model")
    group.add_argument("--seed", type=int)
    group.add_argument("--schema", help="feature schema JSON (default bundled)")
    group.add_argument("--stake", type=float, help="stake per bet (default 1.0)")
    group.add_argument("--missing-odds", dest="missing_odds",
                       choices=MISSING_ODDS_POLICIES,
                       help="unquoted predicted scoreline policy (default skip)")

    hyper = common.add_argument_group("hyperparameters")
    hyper.add_argument("--knn-k", dest="knn_k", type=int)
    hyper.add_argument("--tree-depth", dest="tree_depth", type=int)
    hyper.add_argument("--tree-min-leaf", dest="tree_min_leaf", type=int)
    hyper.add_argument("--forest-trees", dest="forest_trees", type=int)
    hyper.add_argument("--forest-features", dest="forest_features",
                       help='per-split feature subset: "sqrt", "all" or an int')
    hyper.add_argument("--forest-no-bootstrap", dest="forest_bootstrap",
                       action="store_const", const=False)
    hyper.add_argument("--forest-fraction", dest="forest_fraction", type=float)
    hyper.add_argument("--svr-c", dest="svr_c", type=float)
    hyper.add_argument("--svr-epsilon", dest="svr_epsilon", type=float)
    hyper.add_argument("--svr-tol", dest="svr_tol", type=float)
    hyper.add_argument("--svr-max-iter", dest="svr_max_iter", type=int)
    hyper.add_argument("--svr-lr", dest="svr_lr", type=float)
    hyper.add_argument("--svr-gamma", dest="svr_gamma",
                       help='RBF width: "scale" or a positive float')

    parser = argparse.ArgumentParser(
        prog="scoreline",
        description="Football score prediction: features, regressors, evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("train", parents=[common],
                   help="fit home/away models and write artifacts")
    p_predict = sub.add_parser("predict", parents=[common],
                               help="predict scorelines for a fixtures file")
    p_predict.add_argument("--artifacts", help="directory written by train")
    p_predict.add_argument("--fixtures", help="fixtures CSV (goals may be empty)")
    p_predict.add_argument("--out", help="output CSV path")
    p_eval = sub.add_parser("evaluate", parents=[common],
                            help="run the evaluation suite")
    p_eval.add_argument("--all", action="store_true",
                        help="full grid: every approach x technique + heuristics")
    p_eval.add_argument("--artifacts", help="evaluate one trained model pair")
    p_imp = sub.add_parser("importance", parents=[common],
                           help="chi-squared feature ranking for an approach")
    p_imp.add_argument("--out", help="output CSV path")
    p_bet = sub.add_parser("bet", parents=[common],
                           help="betting backtest for one model")
    p_bet.add_argument("--artifacts", help="evaluate one trained model pair")
    p_bet.add_argument("--out", help="output CSV path")
    return parser


COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "importance": cmd_importance,
    "bet": cmd_bet,
}

DATA_ERRORS = (IngestError, FeatureError, HeuristicError, PredictError,
               EvaluateError, RegressError, StoreError, SchemaError,
               MissingArtifact, OSError, ValueError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
