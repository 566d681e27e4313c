"""Command-line orchestration of reproducible experiments."""

from __future__ import annotations

import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import bounds, encoding, sim
from .baseline import DeepSphereBaseline
from .config import RunConfig
from .data import DatasetSplit, build_split, load_idx_images, load_idx_labels
from .detector import QuantumSphereDetector
from .errors import CapabilityError, ConfigurationError, QsphereError
from .metrics import auc
from .reports import save_checkpoint, write_report, write_scores

DEFAULT_SEEDS = (1, 2, 3, 4, 5)


def _featurizer(cfg: RunConfig):
    mode = cfg.get("data.feature_mode")
    if mode == "pool16":
        return encoding.pool_images
    if mode == "pool4":
        # one feature per qubit for the 4-qubit rotation encoding
        return lambda imgs: encoding.pool_images(imgs).reshape(-1, 4, 4).mean(axis=2)
    if mode == "flat":
        return lambda imgs: imgs.reshape(imgs.shape[0], -1)
    raise ConfigurationError(f"unknown data.feature_mode {mode!r}")


def _load_split(cfg: RunConfig, seed: int) -> DatasetSplit:
    return build_split(
        load_idx_images(cfg.get("data.train_images")),
        load_idx_labels(cfg.get("data.train_labels")),
        load_idx_images(cfg.get("data.test_images")),
        load_idx_labels(cfg.get("data.test_labels")),
        normal_class=cfg.get("data.normal_class"),
        train_size=cfg.get("data.train_size"),
        test_normal_size=cfg.get("data.test_normal_size"),
        test_anomalous_size=cfg.get("data.test_anomalous_size"),
        seed=seed,
        featurize=_featurizer(cfg),
    )


def detector_from_config(cfg: RunConfig, seed: int) -> QuantumSphereDetector:
    pre = cfg.get("optimizer.pretrain_epochs")
    return QuantumSphereDetector(
        num_qubits=cfg.get("ansatz.num_qubits"),
        family=cfg.get("ansatz.family"),
        depth=cfg.get("ansatz.depth"),
        encoding_mode=cfg.get("encoding.mode"),
        objective=cfg.get("model.objective"),
        optimizer=cfg.get("optimizer.kind"),
        lr=cfg.get("optimizer.lr"),
        epochs=cfg.get("optimizer.epochs"),
        pretrain_epochs=None if pre < 0 else pre,
        batch_size=cfg.get("optimizer.batch_size"),
        alpha=cfg.get("model.alpha"),
        nu=cfg.get("model.nu"),
        threshold=cfg.get("model.threshold"),
        center_mode=cfg.get("model.center_mode"),
        shots=cfg.get("model.shots"),
        seed=seed,
    )


def run_single(cfg: RunConfig, seed: int) -> tuple[QuantumSphereDetector, DatasetSplit, float]:
    split = _load_split(cfg, seed)
    model = detector_from_config(cfg, seed)
    model.fit(split.train)
    return model, split, model.test_auc(split.test_normal, split.test_anomalous)


@click.group()
def main():
    """One-class anomaly detection with variational quantum circuits."""


def _cfg_option(f):
    return click.option("--config", "config_path", required=True,
                        type=click.Path(exists=True, dir_okay=False))(f)


def _common(f):
    f = click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))(f)
    f = click.option("--seed", type=int, default=None, help="override run.seed")(f)
    f = click.option("--workers", type=int, default=1)(f)
    return _cfg_option(f)


def _load_cfg(config_path: str, seed: int | None) -> RunConfig:
    cfg = RunConfig.load(config_path)
    if seed is not None:
        cfg.set("run.seed", seed)
    return cfg


@main.command()
@_common
def train(config_path, out_dir, seed, workers):
    """Pretrain, train, score the test set, and write checkpoint/scores/report."""
    cfg = _load_cfg(config_path, seed)
    run_seed = cfg.get("run.seed")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    model, split, test_auc = run_single(cfg, run_seed)
    wall = time.time() - t0
    scores = np.concatenate(
        [model.score_samples(split.test_normal), model.score_samples(split.test_anomalous)]
    )
    labels = np.concatenate(
        [np.zeros(len(split.test_normal), dtype=int),
         np.ones(len(split.test_anomalous), dtype=int)]
    )
    sources = np.concatenate(
        [np.full(len(split.test_normal), split.normal_class),
         split.test_anomalous_classes]
    )
    write_scores(out / "scores.csv", scores, labels, sources,
                 threshold=cfg.get("model.threshold"))
    save_checkpoint(out / "checkpoint.json", model, config_hash=cfg.hash())
    write_report(out / "report.json", {
        "config_hash": cfg.hash(),
        "config": cfg.canonical(),
        "seed": run_seed,
        "auc": test_auc,
        "wall_clock_seconds": wall,
        "loss_trace": model.loss_history_,
        "pretrain_loss_trace": model.pretrain_loss_history_,
        "radius": model.sphere_.radius,
        "center": model.sphere_.center,
    })
    click.echo(f"auc={test_auc:.4f} radius={model.sphere_.radius:.4f} out={out}")


@main.command("eval")
@_cfg_option
@click.option("--checkpoint", "ckpt_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--seed", type=int, default=None)
def eval_cmd(config_path, ckpt_path, out_dir, seed):
    """Score the configured test set with an existing checkpoint."""
    from .reports import load_checkpoint

    cfg = _load_cfg(config_path, seed)
    model = load_checkpoint(ckpt_path)
    split = _load_split(cfg, cfg.get("run.seed"))
    test_auc = model.test_auc(split.test_normal, split.test_anomalous)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report(out / "eval_report.json", {
        "config_hash": cfg.hash(),
        "seed": cfg.get("run.seed"),
        "auc": test_auc,
    })
    click.echo(f"auc={test_auc:.4f}")


def _ablate_point(args):
    cfg_values, axis, value, seed = args
    cfg = RunConfig(cfg_values)
    if axis == "depth":
        cfg.set("ansatz.depth", value)
    elif axis == "family":
        cfg.set("ansatz.family", value)
    elif axis == "params":
        q = cfg.get("ansatz.num_qubits")
        if int(value) % q != 0:
            raise ConfigurationError(
                f"parameter count {value} is not a multiple of {q} qubits"
            )
        cfg.set("ansatz.depth", int(value) // q)
    elif axis == "epochs":
        cfg.set("optimizer.epochs", value)
    elif axis == "train_size":
        cfg.set("data.train_size", value)
    else:
        raise ConfigurationError(f"unknown ablation axis {axis!r}")
    _, _, point_auc = run_single(cfg, seed)
    return value, seed, point_auc


@main.command()
@_common
@click.option("--axis", required=True,
              type=click.Choice(["depth", "family", "params", "epochs", "train_size"]))
@click.option("--values", required=True,
              help="comma-separated axis values, e.g. 1,2,3 or DC,RAC,BC,LC")
@click.option("--seeds", default=",".join(map(str, DEFAULT_SEEDS)),
              help="comma-separated seeds")
def ablate(config_path, out_dir, seed, workers, axis, values, seeds):
    """Sweep one configuration axis; one full run per (value, seed)."""
    cfg = _load_cfg(config_path, seed)
    value_list = [v.strip() for v in values.split(",") if v.strip()]
    seed_list = [int(s) for s in seeds.split(",") if s.strip()]
    jobs = [(cfg.values, axis, v, s) for v in value_list for s in seed_list]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_ablate_point, jobs))
    else:
        results = [_ablate_point(j) for j in jobs]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["value,mean_auc,std_auc,seeds,config_hash"]
    for v in value_list:
        aucs = np.array([a for (val, _, a) in results if val == v])
        lines.append(
            f"{v},{aucs.mean():.6f},{aucs.std():.6f},"
            f"{';'.join(map(str, seed_list))},{cfg.hash()}"
        )
    (out / f"ablate_{axis}.csv").write_text("\n".join(lines) + "\n")
    click.echo("\n".join(lines))


@main.command("noise-sweep")
@_common
@click.option("--p-values", default="0.0,0.01,0.1,0.3",
              help="comma-separated depolarization rates")
def noise_sweep(config_path, out_dir, seed, workers, p_values):
    """Train once, then evaluate the model under depolarizing noise levels."""
    cfg = _load_cfg(config_path, seed)
    q = cfg.get("ansatz.num_qubits")
    if q > sim.MAX_DENSITY_QUBITS:
        raise CapabilityError(
            f"noise sweep needs the density path (q <= {sim.MAX_DENSITY_QUBITS})"
        )
    model, split, _ = run_single(cfg, cfg.get("run.seed"))
    rates = [float(p.strip()) for p in p_values.split(",") if p.strip()]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["p,auc,mean_attenuation,predicted_attenuation,config_hash"]
    n_gates = len(model.circuit_.gates)
    for p in rates:
        s_norm, att_n = _noisy_scores(model, split.test_normal, p)
        s_anom, att_a = _noisy_scores(model, split.test_anomalous, p)
        noisy_auc = auc(s_norm, s_anom)
        attenuation = np.nanmean(np.concatenate([att_n, att_a]))
        lines.append(
            f"{p},{noisy_auc:.6f},{attenuation:.12f},"
            f"{(1.0 - p) ** n_gates:.12f},{cfg.hash()}"
        )
    (out / "noise_sweep.csv").write_text("\n".join(lines) + "\n")
    click.echo("\n".join(lines))


def _noisy_scores(model: QuantumSphereDetector, X, p: float):
    """Anomaly scores and per-qubit <Z> attenuation under depolarizing noise."""
    states = model._encode(np.asarray(X, dtype=float))
    noise = sim.NoiseSpec(p)
    q = model.num_qubits
    ideal = model._embed_states(states, model.theta_)
    emb = np.empty_like(ideal)
    for i in range(states.shape[0]):
        rho = sim.density_from_statevector(sim.Statevector(q, states[i].copy()))
        rho = sim.run_circuit_noisy(model.circuit_, rho, model.theta_, noise)
        emb[i] = [
            sim.expval_observable(rho, sim.pauli_z_matrix(q, j)) for j in range(q)
        ]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(np.abs(ideal) > 1e-9, emb / ideal, np.nan)
    d2 = np.sum((emb - model.sphere_.center) ** 2, axis=1)
    return d2 - model.sphere_.radius**2, ratio.ravel()


@main.command("theory-bounds")
@click.option("--inputs", "inputs_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON list of bound-evaluation inputs")
@click.option("--preset", type=click.Choice(["hardware-16param"]), default=None)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def theory_bounds(inputs_path, preset, out_dir):
    """Evaluate covering-number bounds to CSV (log space)."""
    if (inputs_path is None) == (preset is None):
        raise ConfigurationError("provide exactly one of --inputs or --preset")
    entries = _preset_entries() if preset else _parse_bound_inputs(inputs_path)
    lines = ["kind,description,log_bound,extra"]
    for kind, desc, value, extra in entries:
        lines.append(f"{kind},{desc},{value!r},{extra}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "theory_bounds.csv").write_text("\n".join(lines) + "\n")
    click.echo("\n".join(lines))


def _preset_entries():
    entries = []
    for eps in (0.1, 0.01, 0.001):
        qi = bounds.QuantumBoundInputs(4, 16, 2, 1.0, 1.0, eps)
        entries.append(
            ("quantum_upper", f"q4_P16_eps{eps}", bounds.quantum_bound_log(qi), "")
        )
        entries.append(
            ("quantum_lower", f"q4_P16_eps{eps}", bounds.quantum_bound_lower_log(qi), "")
        )
    dims = ((16, 256), (256, 128), (128, 64), (64, 32), (32, 10))
    ci = bounds.ClassicalBoundInputs(dims, (1.0,) * 5, 1.0, 0.01)
    entries.append(
        ("classical", "mlp_16_256_128_64_32_10_eps0.01",
         bounds.classical_bound_log(ci),
         f"dim_product={bounds.layer_dim_product(dims)}")
    )
    return entries


def _parse_bound_inputs(path):
    try:
        raw = json.loads(Path(path).read_text())
        entries = []
        for i, item in enumerate(raw):
            kind = item["kind"]
            if kind == "quantum":
                qi = bounds.QuantumBoundInputs(
                    item["q"], item["P"], item["m"], item["norm_O"],
                    item["norm_c"], item["epsilon"],
                    item.get("p_noise"), item.get("N_g"),
                )
                value = (bounds.noisy_bound_log(qi) if item.get("p_noise") is not None
                         else bounds.quantum_bound_log(qi))
                entries.append((kind, item.get("name", f"row{i}"), value, ""))
            elif kind == "classical":
                dims = tuple((int(n), int(m)) for n, m in item["layer_dims"])
                ci = bounds.ClassicalBoundInputs(
                    dims, tuple(item["weight_inf_norms"]),
                    item["data_norm"], item["epsilon"],
                )
                entries.append((kind, item.get("name", f"row{i}"),
                                bounds.classical_bound_log(ci),
                                f"dim_product={bounds.layer_dim_product(dims)}"))
            else:
                raise ConfigurationError(f"unknown bound kind {kind!r}")
        return entries
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"malformed bound inputs file: {exc}") from exc


@main.command("bp-probe")
@click.option("--family", default="DC", type=click.Choice(list("DC RAC BC LC".split())))
@click.option("--q-min", default=2, type=int)
@click.option("--q-max", default=6, type=int)
@click.option("--depth", default=4, type=int)
@click.option("--samples", default=500, type=int)
@click.option("--seed", default=1, type=int)
@click.option("--rotation-axes", default="random", type=click.Choice(["random", "fixed"]))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def bp_probe_cmd(family, q_min, q_max, depth, samples, seed, rotation_axes, out_dir):
    """Empirical gradient statistics of the hypersphere loss at random angles."""
    report = bounds.bp_probe(
        family=family,
        q_range=tuple(range(q_min, q_max + 1)),
        depth=depth,
        samples=samples,
        seed=seed,
        rotation_axes=rotation_axes,
    )
    lines = ["q,P,mean_abs_grad,abs_mean_grad,grad_variance,samples,seed"]
    for pt in report.points:
        lines.append(
            f"{pt.num_qubits},{pt.num_params},{pt.mean_abs_grad!r},"
            f"{pt.abs_mean_grad!r},{pt.grad_variance!r},{pt.sample_count},{seed}"
        )
    lines.append(f"# log_variance_slope = {report.log_variance_slope!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "bp_probe.csv").write_text("\n".join(lines) + "\n")
    click.echo("\n".join(lines))


@main.command("baseline")
@_common
@click.option("--hidden-dims", default="", help="comma-separated hidden sizes")
def baseline_cmd(config_path, out_dir, seed, workers, hidden_dims):
    """Train the classical hypersphere baseline on the configured split."""
    cfg = _load_cfg(config_path, seed)
    hidden = tuple(int(h) for h in hidden_dims.split(",") if h.strip()) or tuple(
        int(h) for h in str(cfg.get("baseline.hidden_dims")).split(",") if h.strip()
    )
    run_seed = cfg.get("run.seed")
    split = _load_split(cfg, run_seed)
    model = DeepSphereBaseline(
        hidden_dims=hidden,
        output_dim=cfg.get("baseline.output_dim"),
        lr=cfg.get("optimizer.lr"),
        epochs=cfg.get("optimizer.epochs"),
        batch_size=cfg.get("optimizer.batch_size"),
        alpha=cfg.get("model.alpha"),
        seed=run_seed,
    )
    model.fit(split.train)
    test_auc = model.test_auc(split.test_normal, split.test_anomalous)
    budget = model.parameter_budget(split.train.shape[1])
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report(out / "baseline_report.json", {
        "config_hash": cfg.hash(),
        "seed": run_seed,
        "auc": test_auc,
        "parameter_budget": budget,
        "hidden_dims": list(hidden),
    })
    click.echo(f"auc={test_auc:.4f} budget={budget}")


def entrypoint():  # pragma: no cover
    try:
        main.main(standalone_mode=False)
    except ConfigurationError as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(2)
    except QsphereError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.exceptions.Abort:
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    entrypoint()
