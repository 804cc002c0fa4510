from __future__ import annotations

from dataclasses import dataclass

DEFAULT_MODEL = "bert-base-uncased"


@dataclass(frozen=True)
class ServiceConfig:
    port: int = 8300
    model_id: str = DEFAULT_MODEL     # hub id or local checkpoint path
    max_batch: int = 16
    device: str = "cpu"               # "cpu" | "accelerator"

    def __post_init__(self) -> None:
        if self.max_batch < 1:
            raise ValueError(f"max_batch must be >= 1, got {self.max_batch}")
        if self.device not in ("cpu", "accelerator"):
            raise ValueError(f"unknown device {self.device!r}")
