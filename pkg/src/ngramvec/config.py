"""Training hyperparameters with validated defaults."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class TrainConfig:
    """All knobs that shape a model.

    `dim` through `epochs` determine the model's identity and are persisted
    in the model file; `threads` and `seed` are runtime knobs.
    """

    dim: int = 300
    n_min: int = 3
    n_max: int = 6
    bucket: int = 2_000_000
    min_count: int = 5
    negatives: int = 5
    max_window: int = 5
    subsample_t: float = 1e-4
    lr0: float = 0.05
    epochs: int = 5
    threads: int = 1
    seed: int = 0

    def validate(self) -> "TrainConfig":
        """Return self unchanged if every invariant holds, else raise ValueError."""
        for name in ("dim", "n_min", "n_max", "bucket", "min_count",
                     "negatives", "max_window", "epochs", "threads"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.n_min > self.n_max:
            raise ValueError(f"n_min ({self.n_min}) must not exceed n_max ({self.n_max})")
        if not (0.0 < self.subsample_t <= 1.0):
            raise ValueError(f"subsample_t must lie in (0, 1], got {self.subsample_t!r}")
        if not (self.lr0 > 0.0):
            raise ValueError(f"lr0 must be positive, got {self.lr0!r}")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        return self

    def with_options(self, **kwargs) -> "TrainConfig":
        """Copy with fields replaced; the copy is validated."""
        return replace(self, **kwargs).validate()


def validate(cfg: TrainConfig) -> TrainConfig:
    """Functional form of TrainConfig.validate."""
    return cfg.validate()
