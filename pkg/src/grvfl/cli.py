"""Command-line entry points: bench, train, predict, stats.

Every run is reproducible from its manifest (seed, grid, config hash,
library versions); reports carry no timestamps, so identical manifests
produce byte-identical output.
"""

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .data import (
    DataError,
    MultiViewDataset,
    PCAView,
    Standardizer,
    load_csv,
    load_csv_features,
    train_test_indices,
)
from .evaluation import (
    AccuracyTable,
    HyperGrid,
    accuracy,
    adjusted_wins,
    friedman,
    grid_search,
    nemenyi_cd,
    q_alpha_05,
    rank_models,
    rvfl_grid_search,
    win_tie_loss,
)
from .feature_map import derived_seed
from .models import (
    GraphMVRVFLClassifier,
    RVFLClassifier,
    SchemaError,
    model_from_dict,
    model_to_dict,
)

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2

OUTPUT_DIR_ENV = "GRVFL_OUT_DIR"
BUNDLE_SCHEMA_VERSION = 1
MODEL_CHOICES = ("grvflmv", "rvfl", "rvflwodl")
N_CHECK_VECTORS = 5


@dataclass
class RunConfig:
    """Benchmark run settings (config file keys use the same names)."""

    data: list = field(default_factory=list)
    view_b: str = "pca"  # "pca" | "file"
    view_b_data: list = field(default_factory=list)
    variance_fraction: float = 0.95
    has_header: bool = False
    standardize: bool = True
    models: list = field(default_factory=lambda: list(MODEL_CHOICES))
    seed: int = None
    repeats: int = 1
    train_fraction: float = 0.7
    k: int = 5
    grid: str = "full"  # "full" | "fast"
    jobs: int = 1
    out: str = "runs"

    def validate(self):
        if self.seed is None:
            raise DataError("a seed is required (no wall-clock default)")
        if not self.data:
            raise DataError("no datasets given")
        if not self.models:
            raise DataError("select at least one model")
        unknown = [m for m in self.models if m not in MODEL_CHOICES]
        if unknown:
            raise DataError(
                f"unknown models {unknown}; choose from {list(MODEL_CHOICES)}"
            )
        if self.view_b not in ("pca", "file"):
            raise DataError(f"view_b must be 'pca' or 'file', got {self.view_b!r}")
        if self.view_b == "file" and len(self.view_b_data) != len(self.data):
            raise DataError(
                "view_b=file needs one --view-b-data path per dataset"
            )
        if self.grid not in ("full", "fast"):
            raise DataError(f"grid must be 'full' or 'fast', got {self.grid!r}")
        if self.repeats < 1 or self.k < 2 or self.jobs < 1:
            raise DataError("repeats must be >= 1, k >= 2, jobs >= 1")


_BOOL_KEYS = {"has_header", "standardize"}
_INT_KEYS = {"seed", "repeats", "k", "jobs"}
_FLOAT_KEYS = {"variance_fraction", "train_fraction"}
_LIST_KEYS = {"data", "view_b_data", "models"}


def parse_config_file(path):
    """Read flat key=value lines ('#' comments, commas separate list items)."""
    values = {}
    known = {f.name for f in fields(RunConfig)}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError(f"{path}:{line_no}: expected key=value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in known:
                raise DataError(f"{path}:{line_no}: unknown key {key!r}")
            if key in _LIST_KEYS:
                values[key] = [item.strip() for item in value.split(",") if item.strip()]
            elif key in _BOOL_KEYS:
                values[key] = value.lower() in ("1", "true", "yes", "on")
            elif key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            else:
                values[key] = value
    return values


def build_config(args):
    """Merge defaults, config file, and CLI flags (flags win); env var
    overrides the output directory."""
    merged = {}
    if args.config:
        merged.update(parse_config_file(args.config))
    for key in (f.name for f in fields(RunConfig)):
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
    config = RunConfig(**merged)
    env_out = os.environ.get(OUTPUT_DIR_ENV)
    if env_out:
        config.out = env_out
    config.validate()
    return config


def _expand_datasets(entries):
    paths = []
    for entry in entries:
        p = Path(entry)
        if p.is_dir():
            found = sorted(p.glob("*.csv"))
            if not found:
                raise DataError(f"{p}: directory holds no .csv files")
            paths.extend(found)
        else:
            paths.append(p)
    return paths


def _json_ready(obj):
    if isinstance(obj, dict):
        return {key: _json_ready(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return _json_ready(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def _write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_json_ready(payload), fh, sort_keys=True, indent=2)
        fh.write("\n")


def _grid_for(config):
    return HyperGrid() if config.grid == "full" else HyperGrid.fast()


def _manifest(config):
    canonical = json.dumps(_json_ready(asdict(config)), sort_keys=True)
    grid = _grid_for(config)
    return {
        "config": asdict(config),
        "config_sha256": hashlib.sha256(canonical.encode()).hexdigest(),
        "seed": config.seed,
        "grid": {
            "c_values": list(grid.c_values),
            "theta_values": list(grid.theta_values),
            "rho_values": list(grid.rho_values),
            "h_values": list(grid.h_values),
        },
        "versions": {
            "grvfl": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }


def _build_views(config, path, view_b_path):
    """Load one dataset and attach its second view; returns (mv, pca_or_None)."""
    ds = load_csv(path, has_header=config.has_header)
    if config.view_b == "file":
        ds_b = load_csv(view_b_path, has_header=config.has_header)
        if not np.array_equal(ds.labels, ds_b.labels):
            raise DataError(
                f"{path} and {view_b_path} disagree on labels"
            )
        return MultiViewDataset(ds.features, ds_b.features, ds.labels, ds.name), None
    pca = PCAView(variance_fraction=config.variance_fraction).fit(ds.features)
    view_b = pca.transform(ds.features)
    return MultiViewDataset(ds.features, view_b, ds.labels, ds.name), pca


def _fit_grvflmv(train, config, seed):
    grid = _grid_for(config)
    best, records = grid_search(train, grid, k=config.k, seed=seed, jobs=config.jobs)
    model = GraphMVRVFLClassifier(
        c1=best.c1, c2=best.c2, c3=best.c3, theta1=best.theta1,
        theta2=best.theta2, rho=best.rho, h_a=best.h_a, h_b=best.h_b,
        sigma=best.sigma, activation=best.activation, ridge=best.ridge,
        random_state=derived_seed(seed, "final"),
    )
    model.fit(train.views(), train.labels)
    best_summary = {
        "c": best.c1, "theta": best.theta1, "rho": best.rho, "h": best.h_a,
    }
    return model, best_summary, records


def _fit_rvfl(train, config, seed, direct_links):
    grid = _grid_for(config)
    (best_c, best_h), records = rvfl_grid_search(
        train.view_a, train.labels,
        c_values=grid.c_values, h_values=grid.h_values,
        k=config.k, seed=seed, direct_links=direct_links,
    )
    model = RVFLClassifier(
        c=best_c, n_hidden=best_h, direct_links=direct_links,
        random_state=derived_seed(seed, "final"),
    )
    model.fit(train.view_a, train.labels)
    return model, {"c": best_c, "h": best_h}, records


def _run_one_dataset(config, path, view_b_path, out_dir):
    """Full per-dataset pipeline; returns the per-dataset report dict."""
    mv_full, pca = _build_views(config, path, view_b_path)
    name = mv_full.name
    repeats_out = []
    for repeat in range(config.repeats):
        seed_r = derived_seed(config.seed, name, repeat)
        train_idx, test_idx = train_test_indices(
            mv_full.labels, config.train_fraction, seed_r
        )
        train, test = mv_full.subset(train_idx), mv_full.subset(test_idx)
        scalers = {}
        if config.standardize:
            scaler_a = Standardizer().fit(train.view_a)
            scaler_b = Standardizer().fit(train.view_b)
            train = MultiViewDataset(
                scaler_a.transform(train.view_a), scaler_b.transform(train.view_b),
                train.labels, name,
            )
            test = MultiViewDataset(
                scaler_a.transform(test.view_a), scaler_b.transform(test.view_b),
                test.labels, name,
            )
            scalers = {"view_a": scaler_a.to_dict(), "view_b": scaler_b.to_dict()}
        sidecar = {
            "dataset": name,
            "repeat": repeat,
            "split": {"train": train_idx.tolist(), "test": test_idx.tolist()},
            "pca": pca.to_dict() if pca is not None else None,
            "scalers": scalers or None,
        }
        _write_json(out_dir / f"{name}_repeat{repeat}_sidecar.json", sidecar)

        per_model = {}
        for model_name in config.models:
            model_seed = derived_seed(seed_r, model_name)
            if model_name == "grvflmv":
                model, best, records = _fit_grvflmv(train, config, model_seed)
                test_acc = accuracy(model.predict(test.views()), test.labels)
                diagnostics = model.diagnostics_
            else:
                direct = model_name == "rvfl"
                model, best, records = _fit_rvfl(train, config, model_seed, direct)
                test_acc = accuracy(model.predict(test.view_a), test.labels)
                diagnostics = {}
            _write_sweep_csv(
                out_dir / f"{name}_repeat{repeat}_{model_name}_sweep.csv", records
            )
            per_model[model_name] = {
                "best_hyper": best,
                "cv_accuracy": max(
                    (r["cv_accuracy"] for r in records
                     if not np.isnan(r["cv_accuracy"])),
                    default=None,
                ),
                "test_accuracy": test_acc,
                "diagnostics": diagnostics,
            }
        repeats_out.append({"repeat": repeat, "models": per_model})

    summary = {
        "dataset": name,
        "n_samples": int(mv_full.n_samples),
        "view_dims": [int(mv_full.view_a.shape[1]), int(mv_full.view_b.shape[1])],
        "repeats": repeats_out,
        "mean_test_accuracy": {
            model_name: float(np.mean([
                r["models"][model_name]["test_accuracy"] for r in repeats_out
            ]))
            for model_name in config.models
        },
    }
    _write_json(out_dir / f"{name}_result.json", summary)
    return summary


def _write_sweep_csv(path, records):
    import csv as _csv

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not records:
        return
    keys = list(records[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh)
        writer.writerow(keys)
        for record in records:
            writer.writerow([
                repr(float(record[key]))
                if isinstance(record[key], (int, float, np.floating, np.integer))
                else str(record[key])
                for key in keys
            ])


def _rank_section(table):
    section = {"average_ranks": dict(zip(table.models, rank_models(table).tolist()))}
    n_models, n_datasets = len(table.models), len(table.datasets)
    if n_datasets >= 2:
        chi2, f_stat = friedman(rank_models(table), n_datasets, n_models)
        section["friedman_chi2"] = chi2
        section["friedman_f"] = f_stat
    try:
        section["nemenyi_cd"] = nemenyi_cd(n_models, n_datasets, q_alpha_05(n_models))
    except ValueError:
        section["nemenyi_cd"] = None
    return section


def _wtl_section(table):
    wtl = win_tie_loss(table)
    pairs = {}
    for i, model_i in enumerate(wtl.models):
        for j, model_j in enumerate(wtl.models):
            if i == j:
                continue
            pairs[f"{model_i} vs {model_j}"] = [
                int(wtl.wins[i, j]), int(wtl.ties[i, j]), int(wtl.losses[i, j]),
            ]
    return {
        "pairs": pairs,
        "threshold": wtl.threshold,
        "adjusted_wins": {
            f"{wtl.models[i]} vs {wtl.models[j]}": float(
                adjusted_wins(wtl.wins, wtl.ties)[i, j]
            )
            for i in range(len(wtl.models))
            for j in range(len(wtl.models))
            if i != j
        },
    }


def cmd_bench(args):
    try:
        config = build_config(args)
        paths = _expand_datasets(config.data)
    except (DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = _manifest(config)
    _write_json(out_dir / "manifest.json", manifest)

    view_b_paths = (
        [Path(p) for p in config.view_b_data]
        if config.view_b == "file"
        else [None] * len(paths)
    )
    results, errors = {}, {}
    for path, view_b_path in zip(paths, view_b_paths):
        try:
            summary = _run_one_dataset(config, path, view_b_path, out_dir)
            results[summary["dataset"]] = summary
        except Exception as exc:  # noqa: BLE001 - per-dataset isolation
            errors[Path(path).stem] = f"{type(exc).__name__}: {exc}"

    report = {
        "manifest": manifest,
        "datasets": results,
        "errors": errors,
        "models": list(config.models),
    }
    if results:
        names = sorted(results)
        acc = np.array([
            [results[name]["mean_test_accuracy"][model] for name in names]
            for model in config.models
        ])
        table = AccuracyTable(models=list(config.models), datasets=names, acc=acc)
        table.to_csv(out_dir / "accuracy_table.csv")
        if len(config.models) >= 2:
            report["rank_stats"] = _rank_section(table)
            report["win_tie_loss"] = _wtl_section(table)
    _write_json(out_dir / "report.json", report)
    print(f"wrote {out_dir / 'report.json'}")
    for name, message in sorted(errors.items()):
        print(f"dataset {name} failed: {message}", file=sys.stderr)
    if errors and results:
        return EXIT_PARTIAL
    if errors:
        return EXIT_CONFIG
    return EXIT_OK


def _bundle_from_training(config, model_name, mv, pca, scalers, model):
    raw_rows = min(N_CHECK_VECTORS, mv.n_samples)
    check_a = mv.view_a[:raw_rows]
    check_b = mv.view_b[:raw_rows]
    scores = _bundle_scores(model_name, model, scalers, check_a, check_b)
    return {
        "schema_version": BUNDLE_SCHEMA_VERSION,
        "kind": model_name,
        "pipeline": {
            "view_b": config.view_b if model_name == "grvflmv" else None,
            "pca": pca.to_dict() if (pca is not None and model_name == "grvflmv") else None,
            "scaler_a": scalers[0].to_dict() if scalers[0] is not None else None,
            "scaler_b": (
                scalers[1].to_dict()
                if (scalers[1] is not None and model_name == "grvflmv")
                else None
            ),
            "has_header": config.has_header,
        },
        "model": model_to_dict(model),
        "check": {
            "view_a": check_a.tolist(),
            "view_b": check_b.tolist() if model_name == "grvflmv" else None,
            "scores": scores.tolist(),
        },
    }


def _bundle_scores(model_name, model, scalers, raw_a, raw_b):
    scaler_a, scaler_b = scalers
    a = scaler_a.transform(raw_a) if scaler_a is not None else raw_a
    if model_name == "grvflmv":
        b = scaler_b.transform(raw_b) if scaler_b is not None else raw_b
        return model.decision_function([a, b])
    return model.decision_function(a)


def cmd_train(args):
    try:
        config = build_config(args)
        if len(config.data) != 1:
            raise DataError("train expects exactly one dataset")
        if len(config.models) != 1:
            raise DataError("train expects exactly one model (--models)")
        model_name = config.models[0]
        path = _expand_datasets(config.data)[0]
        view_b_path = Path(config.view_b_data[0]) if config.view_b == "file" else None
        mv, pca = _build_views(config, path, view_b_path)
        seed = derived_seed(config.seed, mv.name, "train")
        scaler_a = scaler_b = None
        train = mv
        if config.standardize:
            scaler_a = Standardizer().fit(mv.view_a)
            scaler_b = Standardizer().fit(mv.view_b)
            train = MultiViewDataset(
                scaler_a.transform(mv.view_a), scaler_b.transform(mv.view_b),
                mv.labels, mv.name,
            )
        if model_name == "grvflmv":
            if args.tune:
                model, best, _ = _fit_grvflmv(train, config, seed)
            else:
                model = GraphMVRVFLClassifier(
                    c1=args.c, c2=args.c, c3=args.c, theta1=args.theta,
                    theta2=args.theta, rho=args.rho, h_a=args.h, h_b=args.h,
                    sigma=args.sigma, random_state=seed,
                )
                model.fit(train.views(), train.labels)
        else:
            direct = model_name == "rvfl"
            if args.tune:
                model, best, _ = _fit_rvfl(train, config, seed, direct)
            else:
                model = RVFLClassifier(
                    c=args.c, n_hidden=args.h, direct_links=direct,
                    random_state=seed,
                )
                model.fit(train.view_a, train.labels)
        bundle = _bundle_from_training(
            config, model_name, mv, pca, (scaler_a, scaler_b), model
        )
        out_path = Path(args.model_out)
        _write_json(out_path, bundle)
        train_acc = accuracy(
            model.predict(train.views() if model_name == "grvflmv" else train.view_a),
            train.labels,
        )
        print(f"wrote {out_path} (training accuracy {train_acc:.4f})")
        return EXIT_OK
    except (DataError, SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def load_bundle(path):
    """Read a model bundle, check its schema, and verify the stored check
    vectors reproduce bit-exactly."""
    with open(path, encoding="utf-8") as fh:
        try:
            bundle = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not a valid model bundle ({exc})") from None
    if not isinstance(bundle, dict) or bundle.get("schema_version") != BUNDLE_SCHEMA_VERSION:
        raise SchemaError(
            f"{path}: unsupported bundle schema "
            f"{bundle.get('schema_version') if isinstance(bundle, dict) else None!r}"
        )
    model = model_from_dict(bundle["model"])
    pipeline = bundle.get("pipeline", {})
    scaler_a = (
        Standardizer.from_dict(pipeline["scaler_a"])
        if pipeline.get("scaler_a")
        else None
    )
    scaler_b = (
        Standardizer.from_dict(pipeline["scaler_b"])
        if pipeline.get("scaler_b")
        else None
    )
    pca = PCAView.from_dict(pipeline["pca"]) if pipeline.get("pca") else None
    check = bundle.get("check")
    if check:
        raw_a = np.array(check["view_a"], dtype=float)
        raw_b = (
            np.array(check["view_b"], dtype=float)
            if check.get("view_b") is not None
            else None
        )
        scores = _bundle_scores(
            bundle["kind"], model, (scaler_a, scaler_b), raw_a, raw_b
        )
        if not np.array_equal(scores, np.array(check["scores"], dtype=float)):
            raise SchemaError(
                f"{path}: stored check vectors do not reproduce; file corrupt"
            )
    return bundle["kind"], model, (scaler_a, scaler_b), pca, pipeline


def cmd_predict(args):
    try:
        kind, model, scalers, pca, pipeline = load_bundle(args.model)
        has_header = bool(pipeline.get("has_header", False))
        if kind == "grvflmv":
            n_raw = model.map_a_.p
        else:
            n_raw = model.feature_map_.p
        X, file_labels = load_csv_features(args.data, n_raw, has_header=has_header)
        scaler_a, scaler_b = scalers
        if kind == "grvflmv":
            if pca is not None:
                raw_b = pca.transform(X)
            else:
                raise DataError(
                    "bundle was trained on two separate view files; "
                    "predict supports only PCA-synthesized view-B bundles"
                )
            a = scaler_a.transform(X) if scaler_a is not None else X
            b = scaler_b.transform(raw_b) if scaler_b is not None else raw_b
            predicted = model.predict([a, b])
        else:
            a = scaler_a.transform(X) if scaler_a is not None else X
            predicted = model.predict(a)
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", encoding="utf-8") as fh:
            for label in predicted:
                fh.write(f"{label}\n")
        if file_labels is not None:
            print(f"accuracy {accuracy(predicted.astype(str), file_labels):.6f}")
        print(f"wrote {out_path}")
        return EXIT_OK
    except (DataError, SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def cmd_stats(args):
    try:
        table = AccuracyTable.from_csv(args.table)
        if len(table.models) < 2:
            raise ValueError("need >= 2 models to compare")
        avg_ranks = rank_models(table)
        print("average ranks:")
        for model, rank in zip(table.models, avg_ranks):
            print(f"  {model}: {rank:.4f}")
        section = _rank_section(table)
        if "friedman_chi2" in section:
            print(f"friedman chi2: {section['friedman_chi2']:.4f}")
            print(f"friedman F: {section['friedman_f']:.4f}")
        else:
            print("friedman: n/a (need >= 2 datasets)")
        if section.get("nemenyi_cd") is not None:
            print(f"nemenyi CD (alpha=0.05): {section['nemenyi_cd']:.4f}")
        wtl = _wtl_section(table)
        print(f"win threshold: {wtl['threshold']:.4f}")
        for pair, counts in sorted(wtl["pairs"].items()):
            print(f"  {pair}: wins={counts[0]} ties={counts[1]} losses={counts[2]}")
        if args.out:
            _write_json(args.out, {
                "models": list(table.models),
                "datasets": list(table.datasets),
                "rank_stats": section,
                "win_tie_loss": wtl,
            })
            print(f"wrote {args.out}")
        return EXIT_OK
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _add_config_flags(parser):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--data", action="append", dest="data",
                        help="dataset CSV (or directory of CSVs); repeatable")
    parser.add_argument("--view-b", dest="view_b", choices=("pca", "file"),
                        help="second-view source (default pca)")
    parser.add_argument("--view-b-data", action="append", dest="view_b_data",
                        help="second-view CSV per dataset (with --view-b file)")
    parser.add_argument("--variance-fraction", dest="variance_fraction",
                        type=float, help="PCA explained-variance target")
    parser.add_argument("--has-header", dest="has_header",
                        action="store_const", const=True,
                        help="skip one header row in CSVs")
    parser.add_argument("--no-standardize", dest="standardize",
                        action="store_const", const=False,
                        help="skip per-view z-scoring")
    parser.add_argument("--models", dest="models",
                        type=lambda s: [m.strip() for m in s.split(",") if m.strip()],
                        help="comma-separated subset of grvflmv,rvfl,rvflwodl")
    parser.add_argument("--seed", dest="seed", type=int, help="master seed (required)")
    parser.add_argument("--repeats", dest="repeats", type=int,
                        help="independent split/train repeats per dataset")
    parser.add_argument("--train-fraction", dest="train_fraction", type=float)
    parser.add_argument("--k", dest="k", type=int, help="cross-validation folds")
    parser.add_argument("--fast", dest="grid", action="store_const", const="fast",
                        help="3-values-per-axis smoke grid (not the full protocol)")
    parser.add_argument("--jobs", dest="jobs", type=int,
                        help="parallel grid evaluations")
    parser.add_argument("--out", dest="out", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="grvfl",
        description="Two-view graph-regularized RVFL benchmark toolkit",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    bench = subparsers.add_parser("bench", help="tune, train, and score models"
                                  " over datasets; emit a full report")
    _add_config_flags(bench)
    bench.set_defaults(func=cmd_bench)

    train = subparsers.add_parser("train", help="train one model, write a bundle")
    _add_config_flags(train)
    train.add_argument("--model-out", required=True, help="bundle JSON path")
    train.add_argument("--tune", action="store_true",
                       help="grid-search before training")
    train.add_argument("--c", type=float, default=1.0)
    train.add_argument("--theta", type=float, default=0.1)
    train.add_argument("--rho", type=float, default=0.01)
    train.add_argument("--h", type=int, default=100)
    train.add_argument("--sigma", type=float, default=1.0)
    train.set_defaults(func=cmd_train)

    predict = subparsers.add_parser("predict", help="label a CSV with a bundle")
    predict.add_argument("--model", required=True, help="bundle JSON path")
    predict.add_argument("--data", required=True, help="feature CSV")
    predict.add_argument("--out", required=True, help="output labels CSV")
    predict.set_defaults(func=cmd_predict)

    stats = subparsers.add_parser("stats", help="rank statistics for an"
                                  " accuracy table CSV")
    stats.add_argument("--table", required=True, help="datasets x models CSV")
    stats.add_argument("--out", help="optional JSON output path")
    stats.set_defaults(func=cmd_stats)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry_point():  # pragma: no cover - console-script shim
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
