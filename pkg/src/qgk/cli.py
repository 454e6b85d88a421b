"""Command-line interface: end-to-end experiments, kernel builds, alignment
pre-training, diagnostics sweeps and break-even tables.

Every subcommand reads an optional flat key=value config file, applies
command-line overrides, echoes the resolved configuration into the output
directory, and writes delimited artifacts with rendered figures alongside.
The QGK_OUTPUT_ROOT environment variable re-roots relative output paths.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from . import complexity, datasets, metrics, plots
from .embedding import EmbeddingConfig, EmbeddingMode, InitialState, embed_batch
from .grouping import GroupingConfig, GroupScaling, VggSet, build_vgg_set, build_vgg_set_streaming
from .generators import build_generator_set
from .kernels import (
    KernelMatrix,
    classical_kernel,
    cross_gram,
    gram,
    kta,
    save_kernel,
    target_kernel,
)
from .projection import (
    TrainConfig,
    default_learning_rate,
    init_params,
    load_params,
    project,
    save_params,
    train,
)
from .svm import fit, predict, save_model


def resolve_out(path: str | Path) -> Path:
    root = os.environ.get("QGK_OUTPUT_ROOT")
    path = Path(path)
    if root and not path.is_absolute():
        path = Path(root) / path
    path.mkdir(parents=True, exist_ok=True)
    return path


def parse_kv_file(path: str | Path) -> dict[str, str]:
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}: malformed config line {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def write_resolved_config(outdir: Path, config: dict) -> None:
    with (outdir / "resolved-config").open("w") as fh:
        for key in sorted(config):
            fh.write(f"{key}={config[key]}\n")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one end-to-end run needs; derived fields resolved up front."""

    dataset: str = "moons"
    n: int = 200
    noise: float = 0.2
    factor: float = 0.8
    data: str | None = None
    label_column: str = "0"
    has_header: bool = True
    eta: int = 2
    scaling: str = "exponential"
    width: float | None = None
    explicit_groups: int | None = None
    mode: str = "product"
    initial_state: str = "uniform"
    kernel: str = "qgk"
    rbf_gamma: float | None = None
    init: str = "scaled_uniform"
    train: str = "kta"
    epochs: int = 100
    learning_rate: float | None = None
    batch_size: int | None = None
    svm_c: float = 1.0
    svm_tol: float = 1e-3
    target_scheme: str = "indicator"
    test_fraction: float = 0.1
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4, 5, 6, 7)
    out: str = "runs/experiment"
    render: bool = True

    def grouping(self) -> GroupingConfig:
        return GroupingConfig(
            eta=self.eta,
            scaling=GroupScaling(self.scaling),
            width=self.width,
            explicit_groups=self.explicit_groups,
        )

    def embedding(self) -> EmbeddingConfig:
        return EmbeddingConfig(
            mode=EmbeddingMode(self.mode),
            initial_state=InitialState(self.initial_state),
        )

    def resolved_lr(self) -> float:
        return self.learning_rate if self.learning_rate is not None else default_learning_rate(self.eta)

    def to_flat(self) -> dict:
        flat = {
            "dataset": self.dataset, "n": self.n, "noise": self.noise, "factor": self.factor,
            "data": self.data or "", "label_column": self.label_column,
            "has_header": int(self.has_header), "eta": self.eta, "scaling": self.scaling,
            "width": "" if self.width is None else self.width,
            "explicit_groups": "" if self.explicit_groups is None else self.explicit_groups,
            "mode": self.mode, "initial_state": self.initial_state, "kernel": self.kernel,
            "rbf_gamma": "" if self.rbf_gamma is None else self.rbf_gamma,
            "init": self.init, "train": self.train, "epochs": self.epochs,
            "learning_rate": self.resolved_lr(),
            "batch_size": "" if self.batch_size is None else self.batch_size,
            "svm_c": self.svm_c, "svm_tol": self.svm_tol,
            "target_scheme": self.target_scheme,
            "test_fraction": self.test_fraction,
            "seeds": ",".join(str(s) for s in self.seeds), "out": self.out,
        }
        return flat


@dataclass
class SeedResult:
    seed: int
    accuracy: float
    final_alignment: float
    initial_alignment: float
    n_train: int
    n_test: int
    svm_converged: bool

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "accuracy": self.accuracy,
            "final_alignment": self.final_alignment,
            "initial_alignment": self.initial_alignment,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "svm_converged": self.svm_converged,
        }


@dataclass
class RunResult:
    per_seed: list[SeedResult] = field(default_factory=list)
    accuracy_mean: float = 0.0
    accuracy_ci95: float = 0.0
    alignment_mean: float = 0.0
    alignment_ci95: float = 0.0

    def to_dict(self) -> dict:
        return {
            "accuracy_mean": self.accuracy_mean,
            "accuracy_ci95": self.accuracy_ci95,
            "alignment_mean": self.alignment_mean,
            "alignment_ci95": self.alignment_ci95,
            "per_seed": [r.to_dict() for r in self.per_seed],
        }


def _ci95(values: np.ndarray) -> float:
    if values.shape[0] < 2:
        return 0.0
    quantile = float(stats.t.ppf(0.975, values.shape[0] - 1))
    return quantile * float(values.std(ddof=1)) / float(np.sqrt(values.shape[0]))


def _make_dataset(config: ExperimentConfig, seed: int) -> datasets.Dataset:
    if config.dataset == "moons":
        return datasets.make_moons(config.n, config.noise, seed=seed)
    if config.dataset == "circles":
        return datasets.make_circles(config.n, config.noise, config.factor, seed=seed)
    if config.dataset == "csv":
        if not config.data:
            raise ValueError("csv dataset requires --data")
        label: int | str = config.label_column
        if isinstance(label, str) and label.lstrip("-").isdigit():
            label = int(label)
        return datasets.load_csv(config.data, label_column=label, has_header=config.has_header)
    raise ValueError(f"unknown dataset {config.dataset!r}")


def _stage(seed: int, name: str):
    """Context that tags failures with the seed and pipeline stage."""

    class _Ctx:
        def __enter__(self):
            return None

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, _StageError):
                raise _StageError(f"seed {seed}, stage {name}: {exc}") from exc
            return False

    return _Ctx()


class _StageError(RuntimeError):
    pass


def run_experiment(config: ExperimentConfig, vgg: VggSet | None = None) -> RunResult:
    """Split, optionally pre-train, build kernels, fit and score per seed."""
    outdir = resolve_out(config.out)
    write_resolved_config(outdir, config.to_flat())
    embed_config = config.embedding()
    if config.kernel == "qgk" and vgg is None:
        vgg = build_vgg_set_streaming(config.eta, config.grouping())
    result = RunResult()
    traces: dict[int, list[tuple[int, float]]] = {}
    for seed in config.seeds:
        seed_dir = outdir / f"seed-{seed}"
        seed_dir.mkdir(parents=True, exist_ok=True)
        with _stage(seed, "dataset"):
            ds = _make_dataset(config, seed)
            train_ds, test_ds = datasets.split(ds, config.test_fraction, seed=seed)
        target = target_kernel(train_ds.y, scheme=config.target_scheme)
        if config.kernel == "qgk":
            with _stage(seed, "init"):
                params = init_params(train_ds.d, vgg.groups, seed=seed, scheme=config.init)
            with _stage(seed, "initial-kernel"):
                k0 = gram(embed_batch(vgg, project(params, train_ds.x), embed_config))
                initial_alignment = kta(k0, target).alignment
            if config.train == "kta":
                with _stage(seed, "pre-train"):
                    train_config = TrainConfig(
                        epochs=config.epochs,
                        learning_rate=config.resolved_lr(),
                        batch_size=config.batch_size,
                        seed=seed,
                        target_scheme=config.target_scheme,
                    )
                    params, trace = train(
                        params, train_ds.x, train_ds.y, vgg, embed_config, train_config
                    )
                    trace.to_csv(seed_dir / "trace.csv")
                    traces[seed] = [(r.epoch, r.alignment) for r in trace.records]
            save_params(params, seed_dir / "params.txt", seed=seed, epoch=config.epochs)
            with _stage(seed, "kernel"):
                train_states = embed_batch(vgg, project(params, train_ds.x), embed_config)
                test_states = embed_batch(vgg, project(params, test_ds.x), embed_config)
                provenance = {
                    "family": "qgk", "eta": str(config.eta), "scaling": config.scaling,
                    "width": f"{config.grouping().resolved_width:g}", "mode": config.mode,
                    "initial_state": config.initial_state, "seed": str(seed),
                }
                k_train = gram(train_states, provenance)
                k_test = cross_gram(test_states, train_states)
        else:
            with _stage(seed, "kernel"):
                k_train = classical_kernel(train_ds.x, family=config.kernel, gamma=config.rbf_gamma)
                gamma_used = k_train.provenance.get("gamma")
                gamma_val = float(gamma_used) if gamma_used is not None else None
                k_test = classical_kernel(
                    train_ds.x, family=config.kernel, gamma=gamma_val, x2=test_ds.x
                ).values.T
                k_test = np.ascontiguousarray(k_test)
            initial_alignment = kta(k_train, target).alignment
        with _stage(seed, "svm"):
            model = fit(k_train, train_ds.y, c=config.svm_c, tol=config.svm_tol)
            save_model(model, seed_dir / "svm.txt")
            predictions = predict(model, k_test)
            accuracy = float(np.mean(predictions == test_ds.y))
        final_alignment = kta(k_train, target).alignment
        save_kernel(k_train, seed_dir / "kernel-train.csv")
        save_kernel(KernelMatrix(k_test, dict(k_train.provenance)), seed_dir / "kernel-test.csv")
        seed_result = SeedResult(
            seed=seed,
            accuracy=accuracy,
            final_alignment=final_alignment,
            initial_alignment=initial_alignment,
            n_train=train_ds.n,
            n_test=test_ds.n,
            svm_converged=model.converged,
        )
        with (seed_dir / "result.json").open("w") as fh:
            json.dump(seed_result.to_dict(), fh, indent=2, sort_keys=True)
        result.per_seed.append(seed_result)
    accuracies = np.array([r.accuracy for r in result.per_seed])
    alignments = np.array([r.final_alignment for r in result.per_seed])
    result.accuracy_mean = float(accuracies.mean())
    result.accuracy_ci95 = _ci95(accuracies)
    result.alignment_mean = float(alignments.mean())
    result.alignment_ci95 = _ci95(alignments)
    with (outdir / "summary.json").open("w") as fh:
        json.dump(result.to_dict(), fh, indent=2, sort_keys=True)
    if config.render and traces:
        plots.render_training_curves(traces, outdir / "training-curves.png")
    return result


def run_metrics_sweep(
    etas,
    scalings,
    widths,
    seed: int = 0,
    n_entanglement: int = metrics.ENTANGLEMENT_SAMPLES,
    n_expressibility: int = metrics.EXPRESSIBILITY_SAMPLES,
    summary_dir: Path | None = None,
) -> list[dict]:
    """One diagnostics row per (eta, scaling, width); deterministic per seed.

    With ``summary_dir`` set, the per-group summary of every swept grouping is
    written alongside the rows.
    """
    from .grouping import export_summary

    rows = []
    for eta in etas:
        gs = build_generator_set(eta)
        for scaling in scalings:
            for width in widths:
                w = float(eta) if width == "eta" else float(width)
                config = GroupingConfig(eta=eta, scaling=GroupScaling(scaling), width=w)
                vgg = build_vgg_set(gs, config)
                report = metrics.report_for(
                    vgg,
                    n_entanglement=n_entanglement,
                    n_expressibility=n_expressibility,
                    seed=seed,
                )
                row = report.to_kv()
                row["q_samples"] = report.entanglement.samples
                rows.append(row)
                if summary_dir is not None:
                    name = f"vgg-summary-eta{eta}-{scaling}-w{row['width']}.txt"
                    (summary_dir / name).write_text(export_summary(vgg))
    return rows


def run_breakeven(etas=range(2, 9)) -> tuple[dict[str, list], list]:
    """Efficiency-bound curves for gamma = 1 and gamma = eta plus the
    per-benchmark cost rows."""
    curves = {
        "gamma=1": [complexity.efficiency_bound(eta, 1.0) for eta in etas],
        "gamma=eta": [complexity.efficiency_bound(eta, float(eta)) for eta in etas],
    }
    return curves, complexity.benchmark_table()


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--no-plots", action="store_true", help="skip figure rendering")


class _Resolver:
    """CLI value > config-file value > default."""

    def __init__(self, args: argparse.Namespace):
        self.args = vars(args)
        self.file: dict[str, str] = {}
        if self.args.get("config"):
            self.file = parse_kv_file(self.args["config"])

    def get(self, key: str, default, cast=None):
        cli_value = self.args.get(key)
        if cli_value is not None:
            return cli_value
        if key in self.file:
            raw = self.file[key]
            if cast is bool:
                return raw.lower() in ("1", "true", "yes")
            return cast(raw) if cast else raw
        return default


def _parse_seeds(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok != "")


def _build_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    r = _Resolver(args)
    width = r.get("width", None, str)
    explicit = r.get("explicit_groups", None, int)
    lr = r.get("learning_rate", None, float)
    batch = r.get("batch_size", None, int)
    rbf_gamma = r.get("rbf_gamma", None, float)
    eta = int(r.get("eta", 2, int))
    return ExperimentConfig(
        dataset=r.get("dataset", "moons"),
        n=int(r.get("n", 200, int)),
        noise=float(r.get("noise", 0.2, float)),
        factor=float(r.get("factor", 0.8, float)),
        data=r.get("data", None),
        label_column=str(r.get("label_column", "0")),
        has_header=bool(r.get("has_header", True, bool)),
        eta=eta,
        scaling=r.get("scaling", "exponential"),
        width=None if width in (None, "", "eta") else float(width),
        explicit_groups=explicit,
        mode=r.get("mode", "product"),
        initial_state=r.get("initial_state", "uniform"),
        kernel=r.get("kernel", "qgk"),
        rbf_gamma=rbf_gamma,
        init=r.get("init", "scaled_uniform"),
        train=r.get("train", "kta"),
        epochs=int(r.get("epochs", 100, int)),
        learning_rate=lr,
        batch_size=batch,
        svm_c=float(r.get("svm_c", 1.0, float)),
        svm_tol=float(r.get("svm_tol", 1e-3, float)),
        target_scheme=str(r.get("target_scheme", "indicator")),
        test_fraction=float(r.get("test_fraction", 0.1, float)),
        seeds=_parse_seeds(str(r.get("seeds", "0,1,2,3,4,5,6,7"))),
        out=str(r.get("out", "runs/experiment")),
        render=not args.no_plots,
    )


def _cmd_experiment(args: argparse.Namespace) -> int:
    config = _build_experiment_config(args)
    result = run_experiment(config)
    print(
        f"accuracy {result.accuracy_mean:.4f} +- {result.accuracy_ci95:.4f}  "
        f"alignment {result.alignment_mean:.4f} +- {result.alignment_ci95:.4f}"
    )
    return 0


def _cmd_dataset(args: argparse.Namespace) -> int:
    r = _Resolver(args)
    name = r.get("dataset", "moons")
    n = int(r.get("n", 200, int))
    noise = float(r.get("noise", 0.2, float))
    factor = float(r.get("factor", 0.8, float))
    seed = int(r.get("seed", 0, int))
    outdir = resolve_out(r.get("out", "runs/dataset"))
    if name == "moons":
        ds = datasets.make_moons(n, noise, seed=seed)
    elif name == "circles":
        ds = datasets.make_circles(n, noise, factor, seed=seed)
    else:
        raise ValueError(f"dataset subcommand generates moons or circles, not {name!r}")
    datasets.save_csv(ds, outdir / "dataset.csv")
    write_resolved_config(
        outdir, {"dataset": name, "n": n, "noise": noise, "factor": factor, "seed": seed}
    )
    if not args.no_plots:
        plots.render_dataset(ds.x, ds.y, name, outdir / "dataset.png")
    print(f"wrote {outdir / 'dataset.csv'} ({ds.n} samples, d={ds.d})")
    return 0


def _load_cli_dataset(r: _Resolver) -> datasets.Dataset:
    data = r.get("data", None)
    if not data:
        raise ValueError("this subcommand requires --data CSV")
    label: int | str = str(r.get("label_column", "0"))
    if label.lstrip("-").isdigit():
        label = int(label)
    return datasets.load_csv(data, label_column=label, has_header=bool(r.get("has_header", True, bool)))


def _standardized(ds: datasets.Dataset) -> datasets.Dataset:
    mean = ds.x.mean(axis=0)
    std = ds.x.std(axis=0)
    std = np.where(std > 0.0, std, 1.0)
    return datasets.Dataset(
        x=(ds.x - mean) / std, y=ds.y, name=ds.name, seed=ds.seed,
        scaler_mean=mean, scaler_std=std,
    )


def _vgg_from(r: _Resolver, eta: int) -> VggSet:
    width = r.get("width", None, str)
    config = GroupingConfig(
        eta=eta,
        scaling=GroupScaling(r.get("scaling", "exponential")),
        width=None if width in (None, "", "eta") else float(width),
        explicit_groups=r.get("explicit_groups", None, int),
    )
    return build_vgg_set_streaming(eta, config)


def _cmd_kernel(args: argparse.Namespace) -> int:
    r = _Resolver(args)
    outdir = resolve_out(r.get("out", "runs/kernel"))
    ds = _standardized(_load_cli_dataset(r))
    eta = int(r.get("eta", 2, int))
    vgg = _vgg_from(r, eta)
    embed_config = EmbeddingConfig(
        mode=EmbeddingMode(r.get("mode", "product")),
        initial_state=InitialState(r.get("initial_state", "uniform")),
    )
    params_path = r.get("params", None)
    if params_path:
        params, _, _ = load_params(params_path)
    else:
        params = init_params(ds.d, vgg.groups, seed=int(r.get("seed", 0, int)),
                             scheme=r.get("init", "scaled_uniform"))
    states = embed_batch(vgg, project(params, ds.x), embed_config)
    kernel = gram(states, {"family": "qgk", "eta": str(eta), "source": ds.name})
    save_kernel(kernel, outdir / "kernel.csv")
    write_resolved_config(outdir, {"eta": eta, "n": ds.n, "d": ds.d, "groups": vgg.groups})
    if not args.no_plots:
        plots.render_kernel(kernel.values, f"fidelity kernel ({ds.name})", outdir / "kernel.png")
    print(f"wrote {outdir / 'kernel.csv'} ({kernel.n}x{kernel.n})")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    r = _Resolver(args)
    outdir = resolve_out(r.get("out", "runs/train"))
    ds = _standardized(_load_cli_dataset(r))
    eta = int(r.get("eta", 2, int))
    seed = int(r.get("seed", 0, int))
    vgg = _vgg_from(r, eta)
    embed_config = EmbeddingConfig()
    params = init_params(ds.d, vgg.groups, seed=seed, scheme=r.get("init", "scaled_uniform"))
    lr = r.get("learning_rate", None, float)
    config = TrainConfig(
        epochs=int(r.get("epochs", 100, int)),
        learning_rate=float(lr) if lr is not None else default_learning_rate(eta),
        batch_size=r.get("batch_size", None, int),
        seed=seed,
    )
    params, trace = train(params, ds.x, ds.y, vgg, embed_config, config)
    save_params(params, outdir / "params.txt", seed=seed, epoch=config.epochs)
    trace.to_csv(outdir / "trace.csv")
    write_resolved_config(outdir, {
        "eta": eta, "seed": seed, "epochs": config.epochs,
        "learning_rate": config.learning_rate, "n": ds.n, "d": ds.d,
    })
    if not args.no_plots:
        plots.render_training_curves(
            {seed: [(rec.epoch, rec.alignment) for rec in trace.records]},
            outdir / "trace.png",
        )
    print(f"final loss {trace.records[-1].loss:.6f}; wrote {outdir / 'params.txt'}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    r = _Resolver(args)
    outdir = resolve_out(r.get("out", "runs/eval"))
    ds = _load_cli_dataset(r)
    eta = int(r.get("eta", 2, int))
    seed = int(r.get("seed", 0, int))
    vgg = _vgg_from(r, eta)
    embed_config = EmbeddingConfig()
    train_ds, test_ds = datasets.split(ds, float(r.get("test_fraction", 0.1, float)), seed=seed)
    params_path = r.get("params", None)
    if params_path:
        params, _, _ = load_params(params_path)
    else:
        params = init_params(train_ds.d, vgg.groups, seed=seed)
    train_states = embed_batch(vgg, project(params, train_ds.x), embed_config)
    test_states = embed_batch(vgg, project(params, test_ds.x), embed_config)
    k_train = gram(train_states)
    k_test = cross_gram(test_states, train_states)
    model = fit(k_train, train_ds.y, c=float(r.get("svm_c", 1.0, float)),
                tol=float(r.get("svm_tol", 1e-3, float)))
    accuracy = float(np.mean(predict(model, k_test) == test_ds.y))
    alignment = kta(k_train, target_kernel(train_ds.y)).alignment
    payload = {"accuracy": accuracy, "alignment": alignment,
               "n_train": train_ds.n, "n_test": test_ds.n, "seed": seed}
    with (outdir / "result.json").open("w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
    write_resolved_config(outdir, {
        "eta": eta, "seed": seed, "params": params_path or "",
        "test_fraction": r.get("test_fraction", 0.1, float),
    })
    print(f"accuracy {accuracy:.4f}  alignment {alignment:.4f}")
    return 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    r = _Resolver(args)
    outdir = resolve_out(r.get("out", "runs/metrics"))
    etas = [int(tok) for tok in str(r.get("etas", "1,2,3,4")).split(",")]
    scalings = str(r.get("scalings", "exponential")).split(",")
    widths = str(r.get("widths", "0,1,eta")).split(",")
    seed = int(r.get("seed", 0, int))
    n_ent = int(r.get("ent_samples", metrics.ENTANGLEMENT_SAMPLES, int))
    n_expr = int(r.get("expr_samples", metrics.EXPRESSIBILITY_SAMPLES, int))
    rows = run_metrics_sweep(etas, scalings, widths, seed, n_ent, n_expr, summary_dir=outdir)
    keys = [k for k in rows[0] if k != "q_samples"]
    with (outdir / "metrics.csv").open("w") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(",".join(str(row[k]) for k in keys) + "\n")
    with (outdir / "qsamples.csv").open("w") as fh:
        fh.write("eta,scaling,width,sample,q\n")
        for row in rows:
            for i, q in enumerate(row["q_samples"]):
                fh.write(f"{row['eta']},{row['scaling']},{row['width']},{i},{q:.17g}\n")
    write_resolved_config(outdir, {
        "etas": ",".join(str(e) for e in etas), "scalings": ",".join(scalings),
        "widths": ",".join(widths), "seed": seed,
        "ent_samples": n_ent, "expr_samples": n_expr,
    })
    if not args.no_plots:
        plots.render_metric_sweep(rows, "entanglement_mean", "mean entanglement",
                                  outdir / "metrics-entanglement.png")
        plots.render_metric_sweep(rows, "expressibility", "spectral concentration",
                                  outdir / "metrics-expressibility.png")
    print(f"wrote {outdir / 'metrics.csv'} ({len(rows)} rows)")
    return 0


def _cmd_breakeven(args: argparse.Namespace) -> int:
    r = _Resolver(args)
    outdir = resolve_out(r.get("out", "runs/breakeven"))
    etas = [int(tok) for tok in str(r.get("etas", "2,3,4,5,6,7,8")).split(",")]
    curves, benchmarks = run_breakeven(etas)
    all_rows = [row for rows in curves.values() for row in rows]
    (outdir / "efficiency.csv").write_text(complexity.efficiency_csv(all_rows))
    (outdir / "benchmarks.csv").write_text(complexity.benchmark_csv(benchmarks))
    write_resolved_config(outdir, {"etas": ",".join(str(e) for e in etas)})
    if not args.no_plots:
        plots.render_breakeven(curves, outdir / "breakeven.png")
    print(f"wrote {outdir / 'efficiency.csv'} and {outdir / 'benchmarks.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("experiment", help="end-to-end multi-seed run")
    _add_common(p)
    for flag in ("--dataset", "--scaling", "--width", "--mode", "--initial-state",
                 "--kernel", "--init", "--train", "--label-column", "--data", "--seeds",
                 "--target-scheme"):
        p.add_argument(flag)
    for flag, cast in (("--n", int), ("--eta", int), ("--epochs", int),
                       ("--explicit-groups", int), ("--batch-size", int)):
        p.add_argument(flag, type=cast)
    for flag in ("--noise", "--factor", "--learning-rate", "--svm-c", "--svm-tol",
                 "--test-fraction", "--rbf-gamma"):
        p.add_argument(flag, type=float)
    p.add_argument("--no-header", dest="has_header", action="store_false", default=None)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("dataset", help="generate a synthetic dataset CSV")
    _add_common(p)
    p.add_argument("--dataset")
    p.add_argument("--n", type=int)
    p.add_argument("--noise", type=float)
    p.add_argument("--factor", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_dataset)

    p = sub.add_parser("kernel", help="build a fidelity kernel from a CSV")
    _add_common(p)
    for flag in ("--data", "--label-column", "--scaling", "--width", "--mode",
                 "--initial-state", "--params", "--init"):
        p.add_argument(flag)
    p.add_argument("--eta", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--explicit-groups", type=int)
    p.add_argument("--no-header", dest="has_header", action="store_false", default=None)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("train", help="alignment pre-training on a CSV")
    _add_common(p)
    for flag in ("--data", "--label-column", "--scaling", "--width", "--init"):
        p.add_argument(flag)
    for flag, cast in (("--eta", int), ("--seed", int), ("--epochs", int),
                       ("--batch-size", int), ("--explicit-groups", int)):
        p.add_argument(flag, type=cast)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--no-header", dest="has_header", action="store_false", default=None)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="split, fit and score with frozen parameters")
    _add_common(p)
    for flag in ("--data", "--label-column", "--scaling", "--width", "--params"):
        p.add_argument(flag)
    p.add_argument("--eta", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--explicit-groups", type=int)
    p.add_argument("--test-fraction", type=float)
    p.add_argument("--svm-c", type=float)
    p.add_argument("--svm-tol", type=float)
    p.add_argument("--no-header", dest="has_header", action="store_false", default=None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("metrics", help="entanglement/expressibility sweep")
    _add_common(p)
    p.add_argument("--etas")
    p.add_argument("--scalings")
    p.add_argument("--widths")
    p.add_argument("--seed", type=int)
    p.add_argument("--ent-samples", type=int)
    p.add_argument("--expr-samples", type=int)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("breakeven", help="efficiency bounds and benchmark costs")
    _add_common(p)
    p.add_argument("--etas")
    p.set_defaults(func=_cmd_breakeven)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surface stage-tagged diagnostics, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
