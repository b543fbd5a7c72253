from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable

from omegaconf import DictConfig, OmegaConf

from yaosweep.constants import (
    DEFAULT_D_MAX,
    DEFAULT_FAILURE_DIR,
    DEFAULT_MAX_CONES_PER_ORTHANT,
    Backend,
    Command,
    FamilyName,
)
from yaosweep.exceptions import ConfigurationError

_POWER = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*$")


def _parse_size(token: str) -> int:
    match = _POWER.match(token)
    try:
        value = int(match.group(1)) ** int(match.group(2)) if match else int(token)
    except ValueError:
        raise ConfigurationError(f"Cannot read size '{token}'. Use integers or powers like 2^10.") from None
    if value < 1:
        raise ConfigurationError(f"Sizes must be positive, got {value}.")
    return value


def parse_sizes(value: str | int | Iterable[Any] | None) -> list[int]:
    """Read a size list such as "1000,2000" or the doubling range "2^10..2^17".

    Raises:
        ConfigurationError: If an entry is malformed or the list is not ascending.
    """
    if value is None:
        return []
    if isinstance(value, int):
        return [value]
    if not isinstance(value, str):
        return [s for item in value for s in parse_sizes(item)]

    sizes: list[int] = []
    for part in (p.strip() for p in value.split(",")):
        if not part:
            continue
        if ".." in part:
            start_text, stop_text = part.split("..", 1)
            start, stop = _parse_size(start_text), _parse_size(stop_text)
            while start <= stop:
                sizes.append(start)
                start *= 2
        else:
            sizes.append(_parse_size(part))
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigurationError(f"Sizes must be strictly ascending, got {sizes}.")
    return sizes


def parse_dims(value: str | int | Iterable[Any] | None) -> list[int]:
    """Read a dimension list such as "2,3,4"."""
    if value is None:
        return []
    if isinstance(value, int):
        return [value]
    items = value.split(",") if isinstance(value, str) else list(value)
    try:
        return [int(str(item).strip()) for item in items if str(item).strip()]
    except ValueError:
        raise ConfigurationError(f"Cannot read dimension list '{value}'.") from None


@dataclass(frozen=True)
class RunConfig:
    """Settings of one CLI invocation, composed from Hydra config and flags."""

    command: Command
    input_path: Path | None = None
    output_path: Path | None = None
    dim: int | None = None
    family: FamilyName = FamilyName.yao
    backend: Backend = Backend.tree
    seed: int = 0
    trials: int = 200
    max_n: int = 64
    coord_range: int = 1000
    sizes: list[int] = field(default_factory=list)
    dims: list[int] = field(default_factory=lambda: [2, 3])
    threads: int = 1
    repeats: int = 3
    d_max: int = DEFAULT_D_MAX
    allow_large_dim: bool = False
    max_cones_per_orthant: int = DEFAULT_MAX_CONES_PER_ORTHANT
    proximity_trials: int = 10_000
    coverage_trials: int = 100_000
    failure_dir: Path = Path(DEFAULT_FAILURE_DIR)
    # Benchmarks compare every backend unless one was asked for
    backend_explicit: bool = False

    def __post_init__(self) -> None:
        if self.dim is not None:
            self.check_dim(self.dim)
        if self.command in (Command.verify, Command.bench):
            for d in self.dims:
                self.check_dim(d)
        if self.threads < 1:
            raise ConfigurationError(f"threads must be at least 1, got {self.threads}.")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be at least 1, got {self.trials}.")
        if self.max_n < 2:
            raise ConfigurationError(f"max_n must be at least 2, got {self.max_n}.")
        if self.coord_range < 0:
            raise ConfigurationError(f"range must be non-negative, got {self.coord_range}.")
        if self.repeats < 1:
            raise ConfigurationError(f"repeats must be at least 1, got {self.repeats}.")
        if self.proximity_trials < 1 or self.coverage_trials < 1:
            raise ConfigurationError("Validator trial counts must be at least 1.")
        if self.max_cones_per_orthant < 1:
            raise ConfigurationError(f"max_cones_per_orthant must be positive, got {self.max_cones_per_orthant}.")

    def check_dim(self, d: int) -> None:
        """Raise unless `d` is a dimension this run may build a family for."""
        if d < 1:
            raise ConfigurationError(f"Dimension must be at least 1, got {d}.")
        if d > self.d_max and not self.allow_large_dim:
            raise ConfigurationError(
                f"Dimension {d} exceeds d_max={self.d_max}. Set allow_large_dim=true to build it anyway."
            )
        if self.family == FamilyName.octant2d and d != 2:
            raise ConfigurationError(f"The octant2d family only exists for d=2, got d={d}.")

    def with_dim(self, d: int) -> RunConfig:
        return replace(self, dim=d)

    @classmethod
    def from_config(cls, command: Command, config: DictConfig, **flags: Any) -> RunConfig:
        """Merge composed config with CLI flags; flags that are not None win.

        Raises:
            ConfigurationError: On unknown enum values or violated invariants.
        """
        values: dict[str, Any] = OmegaConf.to_container(config, resolve=True)  # type: ignore[assignment]
        backend_explicit = flags.get("backend") is not None
        values.update({key: value for key, value in flags.items() if value is not None})

        try:
            family = FamilyName(values.get("family") or FamilyName.yao.value)
            backend = Backend(values.get("backend") or Backend.tree.value)
        except ValueError as e:
            raise ConfigurationError(str(e)) from None

        def path_or_none(key: str) -> Path | None:
            value = values.get(key)
            return Path(value) if value not in (None, "") else None

        dim = values.get("dim")
        return cls(
            command=command,
            input_path=path_or_none("input_path"),
            output_path=path_or_none("output_path"),
            dim=int(dim) if dim not in (None, "") else None,
            family=family,
            backend=backend,
            seed=int(values.get("seed", 0)),
            trials=int(values.get("trials", 200)),
            max_n=int(values.get("max_n", 64)),
            coord_range=int(values.get("coord_range", 1000)),
            sizes=parse_sizes(values.get("sizes")),
            dims=parse_dims(values.get("dims", [2, 3])),
            threads=int(values.get("threads", 1)),
            repeats=int(values.get("repeats", 3)),
            d_max=int(values.get("d_max", DEFAULT_D_MAX)),
            allow_large_dim=bool(values.get("allow_large_dim", False)),
            max_cones_per_orthant=int(values.get("max_cones_per_orthant", DEFAULT_MAX_CONES_PER_ORTHANT)),
            proximity_trials=int(values.get("proximity_trials", 10_000)),
            coverage_trials=int(values.get("coverage_trials", 100_000)),
            failure_dir=Path(values.get("failure_dir") or DEFAULT_FAILURE_DIR),
            backend_explicit=backend_explicit,
        )
