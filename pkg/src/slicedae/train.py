"""Training harness: a RunConfig in, a self-describing run directory out.

The run directory holds config.txt (the exact configuration), metrics.csv
(one row per epoch, epoch 0 being the untrained state), checkpoints, PGM
dumps of reconstructions, prior samples and a latent interpolation, and
rendered metric figures.  Every random draw descends from the config seed
through named substreams, so a run is a pure function of its config.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import net, report
from .config import RunConfig, load_config
from .data import Dataset, gen_synthetic, load_idx, load_points_csv, split_points
from .metrics import (
    CSV_HEADER,
    MetricsRow,
    gaussian_frechet_proxy,
    mardia_kurtosis,
    mardia_skewness,
    sw_monitor,
)
from .pgm import tile_grid, to_gray, write_pgm
from .slicer import composite_cost, sample_directions, sliced_distance


def resolve_dataset(cfg: RunConfig) -> Dataset:
    """Materialize the configured dataset source.

    Built-in synthetic names use data_n and data_seed; "csv:<path>" reads a
    point file and splits it; "idx:<path>" reads an IDX ubyte image file.
    """
    src = cfg.dataset
    if src.startswith("csv:"):
        return split_points(load_points_csv(src[4:]))
    if src.startswith("idx:"):
        return load_idx(src[4:])
    return gen_synthetic(src, cfg.data_n, cfg.data_seed)


def _evaluate(state, ds: Dataset, cfg: RunConfig, rng, epoch: int) -> MetricsRow:
    z = net.encode(state, ds.test)
    xhat = net.decode(state, z)
    mse_val = net.mse(ds.test, xhat)
    dirs = sample_directions(cfg.k, state.spec.latent_dim, rng)
    sliced_val, _ = sliced_distance(z, dirs, cfg.distance_kind(), rng=rng)
    cost = composite_cost(mse_val, sliced_val, cfg.cost_mode())
    prior = rng.standard_normal((ds.test.shape[0], state.spec.latent_dim))
    generated = net.decode(state, prior)
    return MetricsRow(
        epoch=epoch,
        mse=mse_val,
        sliced_penalty=sliced_val,
        cost=cost,
        mardia_skewness=mardia_skewness(z),
        mardia_kurtosis_normalized=mardia_kurtosis(z, normalize=True),
        sw_monitor=sw_monitor(z, cfg.eval_k, rng),
        gfd_proxy=gaussian_frechet_proxy(ds.test, generated),
    )


def _as_tiles(points, image_shape):
    points = np.asarray(points, dtype=float)
    if image_shape is not None:
        return [to_gray(row.reshape(image_shape)) for row in points]
    # loose points get a min-max scaled one-row strip per point
    lo, hi = float(points.min()), float(points.max())
    scale = hi - lo
    if scale <= 0.0:
        scale = 1.0
    return [to_gray(((row - lo) / scale)[None, :]) for row in points]


def _write_image_dumps(state, ds: Dataset, run_dir: Path, rng) -> None:
    n_show = min(8, ds.test.shape[0])
    shown = ds.test[:n_show]
    recon = net.decode(state, net.encode(state, shown))
    paired = np.empty((2 * n_show, ds.dim))
    paired[0::2] = shown
    paired[1::2] = recon
    write_pgm(run_dir / "recon_grid.pgm", tile_grid(_as_tiles(paired, ds.image_shape), columns=2))

    prior = rng.standard_normal((16, state.spec.latent_dim))
    samples = net.decode(state, prior)
    write_pgm(run_dir / "prior_grid.pgm", tile_grid(_as_tiles(samples, ds.image_shape), columns=4))

    ends = net.encode(state, ds.test[:2])
    steps = np.linspace(0.0, 1.0, 9)[:, None]
    path = (1.0 - steps) * ends[0] + steps * ends[1]
    interp = net.decode(state, path)
    write_pgm(run_dir / "interp_strip.pgm", tile_grid(_as_tiles(interp, ds.image_shape), columns=9))


def train(cfg: RunConfig) -> Path:
    """Run the configured training and return the populated run directory."""
    run_dir = Path(cfg.out_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "config.txt").write_text(cfg.to_text(), encoding="ascii")

    ds = resolve_dataset(cfg)
    if ds.test.shape[0] < 2:
        raise ValueError("train: test split needs at least 2 points for the metrics")
    kind = cfg.distance_kind()
    mode = cfg.cost_mode()

    root = np.random.SeedSequence(cfg.seed)
    ss_init, ss_train, ss_dirs, ss_shuffle, ss_eval, ss_prior = root.spawn(6)
    eval_streams = ss_eval.spawn(cfg.epochs + 1)

    state = net.init_state(cfg.mlp_spec(ds.dim), cfg.optimizer_spec(), np.random.default_rng(ss_init))
    state.rng = np.random.default_rng(ss_train)
    dirs_rng = np.random.default_rng(ss_dirs)
    shuffle_rng = np.random.default_rng(ss_shuffle)
    fixed_dirs = None
    if cfg.directions == "fixed":
        fixed_dirs = sample_directions(cfg.k, cfg.latent_dim, dirs_rng)

    rows = []
    n_train = ds.train.shape[0]
    with open(run_dir / "metrics.csv", "w", encoding="ascii") as fh:
        fh.write(CSV_HEADER + "\n")

        def log_epoch(epoch: int) -> None:
            row = _evaluate(state, ds, cfg, np.random.default_rng(eval_streams[epoch]), epoch)
            rows.append(row)
            fh.write(row.to_csv_line() + "\n")

        log_epoch(0)
        for epoch in range(1, cfg.epochs + 1):
            order = shuffle_rng.permutation(n_train)
            for lo in range(0, n_train, cfg.batch_size):
                xb = ds.train[order[lo : lo + cfg.batch_size]]
                dirs = fixed_dirs
                if dirs is None:
                    dirs = sample_directions(cfg.k, cfg.latent_dim, dirs_rng)
                try:
                    state, _ = net.backward_step(state, xb, kind, mode, dirs)
                except FloatingPointError as exc:
                    (run_dir / "abort.txt").write_text(f"epoch {epoch}: {exc}\n", encoding="ascii")
                    raise RuntimeError(f"training aborted at epoch {epoch}: {exc}") from exc
            log_epoch(epoch)
            if cfg.checkpoint_every > 0 and epoch % cfg.checkpoint_every == 0:
                net.save_checkpoint(state, run_dir / f"checkpoint_{epoch:04d}.npz")

    net.save_checkpoint(state, run_dir / "checkpoint_final.npz")

    dump_rng = np.random.default_rng(ss_prior)
    _write_image_dumps(state, ds, run_dir, dump_rng)
    report.render_metrics_figure(rows, run_dir / "metrics.png")
    if ds.dim == 2:
        prior = dump_rng.standard_normal((ds.test.shape[0], cfg.latent_dim))
        report.render_scatter(ds.test, net.decode(state, prior), run_dir / "scatter.png")
    if cfg.latent_dim == 2:
        report.render_latent(net.encode(state, ds.test), run_dir / "latent.png")

    final = rows[-1]
    summary = [
        f"epochs={final.epoch}",
        f"mse={final.mse!r}",
        f"sliced_penalty={final.sliced_penalty!r}",
        f"cost={final.cost!r}",
        f"mardia_skewness={final.mardia_skewness!r}",
        f"mardia_kurtosis_normalized={final.mardia_kurtosis_normalized!r}",
        f"sw_monitor={final.sw_monitor!r}",
        f"gfd_proxy={final.gfd_proxy!r}",
    ]
    (run_dir / "summary.txt").write_text("\n".join(summary) + "\n", encoding="ascii")
    return run_dir


def evaluate_run(run_dir, checkpoint=None, seed: int = 0) -> MetricsRow:
    """Recompute the metrics row for a saved checkpoint of a finished run."""
    run_dir = Path(run_dir)
    cfg = load_config(run_dir / "config.txt")
    path = Path(checkpoint) if checkpoint else run_dir / "checkpoint_final.npz"
    state = net.load_checkpoint(path)
    ds = resolve_dataset(cfg)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return _evaluate(state, ds, cfg, rng, epoch=0)
