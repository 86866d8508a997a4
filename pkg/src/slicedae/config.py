"""Run configuration: a flat key=value text format with typed parsing.

Every run is a pure function of its RunConfig, so the config is written back
into the run directory verbatim.  Unknown keys are rejected rather than
ignored; a typo in a tuning knob should fail loudly, not silently train with
the default.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .net import MlpSpec, OptimizerSpec
from .slicer import CostMode, DistanceKind


def _parse_widths(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        widths = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise ValueError(f"bad width list {text!r}; expected comma-separated integers") from None
    if any(w < 1 for w in widths):
        raise ValueError(f"bad width list {text!r}; widths must be >= 1")
    return widths


_PARSERS = {
    "kind": str,
    "cost": str,
    "lam": float,
    "floor": float,
    "k": int,
    "directions": str,
    "hidden": _parse_widths,
    "latent_dim": int,
    "dataset": str,
    "data_n": int,
    "data_seed": int,
    "batch_size": int,
    "epochs": int,
    "seed": int,
    "optimizer": str,
    "lr": float,
    "eval_k": int,
    "checkpoint_every": int,
    "out_dir": str,
}


@dataclass
class RunConfig:
    kind: str = "scfw"
    cost: str = "log"
    lam: float = 1.0
    floor: float = 1e-12
    k: int = 50
    directions: str = "per_batch"
    hidden: tuple = (128,)
    latent_dim: int = 20
    dataset: str = "gaussian_mixture"
    data_n: int = 2000
    data_seed: int = 0
    batch_size: int = 128
    epochs: int = 200
    seed: int = 0
    optimizer: str = "adam"
    lr: float = 1e-3
    eval_k: int = 100
    checkpoint_every: int = 0
    out_dir: str = "run"

    def __post_init__(self):
        DistanceKind.parse(self.kind)
        self.cost_mode()
        if self.lam < 0.0:
            raise ValueError("RunConfig: lam must be >= 0")
        if self.directions not in ("per_batch", "fixed"):
            raise ValueError("RunConfig: directions must be 'per_batch' or 'fixed'")
        if self.k < 1 or self.eval_k < 1:
            raise ValueError("RunConfig: k and eval_k must be >= 1")
        if self.latent_dim < 1:
            raise ValueError("RunConfig: latent_dim must be >= 1")
        if self.batch_size < 1:
            raise ValueError("RunConfig: batch_size must be >= 1")
        if self.epochs < 0 or self.checkpoint_every < 0:
            raise ValueError("RunConfig: epochs and checkpoint_every must be >= 0")
        if self.data_n < 10:
            raise ValueError("RunConfig: data_n must be >= 10")
        if self.seed < 0 or self.data_seed < 0:
            raise ValueError("RunConfig: seeds must be >= 0")
        OptimizerSpec(algo=self.optimizer, lr=self.lr)
        if not self.out_dir:
            raise ValueError("RunConfig: out_dir must be nonempty")

    def distance_kind(self) -> DistanceKind:
        return DistanceKind.parse(self.kind)

    def cost_mode(self) -> CostMode:
        if self.cost == "log":
            return CostMode.log_composite(floor=self.floor)
        if self.cost == "lambda":
            return CostMode.lambda_weighted(self.lam)
        raise ValueError(f"RunConfig: cost must be 'log' or 'lambda', got {self.cost!r}")

    def optimizer_spec(self) -> OptimizerSpec:
        return OptimizerSpec(algo=self.optimizer, lr=self.lr)

    def mlp_spec(self, data_dim: int) -> MlpSpec:
        enc = (data_dim,) + self.hidden + (self.latent_dim,)
        dec = (self.latent_dim,) + tuple(reversed(self.hidden)) + (data_dim,)
        return MlpSpec(encoder_widths=enc, decoder_widths=dec)

    @classmethod
    def from_mapping(cls, mapping) -> "RunConfig":
        values = {}
        for key, raw in mapping.items():
            if key not in _PARSERS:
                raise ValueError(f"unknown config key {key!r}")
            parse = _PARSERS[key]
            try:
                values[key] = parse(raw) if isinstance(raw, str) else raw
            except ValueError as exc:
                raise ValueError(f"config key {key}: {exc}") from None
        return cls(**values)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "hidden":
                value = ",".join(str(w) for w in value)
            lines.append(f"{f.name}={value}")
        return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> dict:
    """Parse key=value lines into a raw string mapping.

    Blank lines and #-comments are skipped; duplicate keys are rejected so a
    conflicting config is never half-applied.
    """
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def load_config(path, overrides=None) -> RunConfig:
    """Read a config file and apply override pairs (CLI flags win)."""
    with open(path, "r", encoding="ascii") as fh:
        mapping = parse_config_text(fh.read())
    if overrides:
        mapping.update(overrides)
    return RunConfig.from_mapping(mapping)
