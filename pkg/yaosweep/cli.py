import json
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

import hydra
import numpy as np
import polars as pl
import typer
from hydra import compose, initialize
from hydra.errors import HydraException
from omegaconf import DictConfig
from rich.table import Table
from typing_extensions import Annotated

from yaosweep import __version__
from yaosweep.__init__ import console
from yaosweep.cones.validation import validate_coverage, validate_family_proximity
from yaosweep.constants import Backend, Command, ExitCode, FamilyName
from yaosweep.exceptions import ConfigurationError, InstanceError
from yaosweep.pipeline import family_for, solve_instance
from yaosweep.run_config import RunConfig
from yaosweep.scripts.bench import run_benchmark
from yaosweep.scripts.verify import run_verification
from yaosweep.utils.colorlogging import ColorLog
from yaosweep.utils.instance_io import format_result, read_points

logger = ColorLog(console, __name__).logger

DEFAULT_CONFIG_PATH = "configs"
DEFAULT_CONFIG_NAME = "default"


def compose_config(
    config_path: Optional[str] = None,
    config_name: Optional[str] = None,
    overrides: Optional[List[str]] = None,
) -> DictConfig:
    """Compose Hydra configuration with given overrides.

    Args:
        config_path: Relative path to config directory
        config_name: Name of the base config file
        overrides: List of Hydra override strings

    Returns:
        DictConfig: Composed configuration
    """
    logger.info(f"Reading config from '{config_path}' with name '{config_name}'.")
    with initialize(config_path=config_path, version_base=None):
        cfg = compose(config_name=config_name, overrides=overrides, return_hydra_config=False)
        return cfg


yaosweep_cli = typer.Typer(rich_markup_mode="rich", pretty_exceptions_enable=False)


@yaosweep_cli.callback(invoke_without_command=True)
def main(ctx: typer.Context) -> None:
    """Exact l1 minimum spanning trees in R^d through cone sweeps."""
    # If you just run `yaosweep` on the command line, show the help
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())


ConfigPathOption = Annotated[
    Optional[str],
    typer.Option("--config-path", "-cp", help="Relative path to config directory."),
]
ConfigNameOption = Annotated[
    Optional[str],
    typer.Option(
        "--config-name",
        "-cn",
        help="The name of the config (usually the file name without the .yaml extension).",
    ),
]
OutputOption = Annotated[
    Optional[Path],
    typer.Option("--output", "-o", help="Output file. Defaults to stdout.", file_okay=True, dir_okay=False),
]
DimOption = Annotated[Optional[int], typer.Option("--dim", help="Dimension d.")]
FamilyOption = Annotated[Optional[FamilyName], typer.Option("--family", help="Cone family.")]
BackendOption = Annotated[Optional[Backend], typer.Option("--backend", help="Dominance search backend.")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Random seed.")]
ThreadsOption = Annotated[Optional[int], typer.Option("--threads", help="Worker threads for the sweep passes.")]
DimsOption = Annotated[Optional[str], typer.Option("--dims", help="Comma separated dimensions, e.g. 2,3.")]
RangeOption = Annotated[
    Optional[int], typer.Option("--range", help="Integer coordinates are drawn from [-R, R].")
]


@contextmanager
def _usage_errors() -> Iterator[None]:
    """Log input and configuration errors and exit with the usage error code."""
    try:
        yield
    except (InstanceError, ConfigurationError, OSError, HydraException) as e:
        logger.error(str(e))
        raise typer.Exit(code=ExitCode.USAGE_ERROR.value) from None


def _load_run_config(
    command: Command,
    config_path: Optional[str],
    config_name: Optional[str],
    overrides: Optional[List[str]],
    **flags: object,
) -> RunConfig:
    config = compose_config(
        config_path=config_path or DEFAULT_CONFIG_PATH,
        config_name=config_name or DEFAULT_CONFIG_NAME,
        overrides=overrides,
    )
    return RunConfig.from_config(command, config, **flags)


def _emit(text: str, output_path: Optional[Path]) -> None:
    if output_path is None:
        typer.echo(text, nl=False)
        return
    if output_path.exists():
        logger.warning(f"Output path '{output_path}' already exists and will be overwritten.")
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with output_path.open("w", encoding="utf-8", newline="\n") as sink:
        sink.write(text)


@yaosweep_cli.command("mst")
def mst(
    input_path: Annotated[
        Optional[Path],
        typer.Option("--input", "-i", help="Point file, one point per line. Defaults to stdin.", dir_okay=False),
    ] = None,
    output_path: OutputOption = None,
    dim: DimOption = None,
    family: FamilyOption = None,
    backend: BackendOption = None,
    threads: ThreadsOption = None,
    config_path: ConfigPathOption = None,
    config_name: ConfigNameOption = None,
    overrides: Optional[List[str]] = typer.Argument(None, hidden=True),
) -> None:
    """Compute the l1 minimum spanning tree of a point file."""
    with _usage_errors():
        cfg = _load_run_config(
            Command.mst,
            config_path,
            config_name,
            overrides,
            input_path=input_path,
            output_path=output_path,
            dim=dim,
            family=family,
            backend=backend,
            threads=threads,
        )
        if cfg.input_path is None:
            inst = read_points(typer.get_binary_stream("stdin"), cfg.dim)
        else:
            with cfg.input_path.open("rb") as source:
                inst = read_points(source, cfg.dim)
        logger.info(f"Read {inst.n_original:,d} points ({len(inst):,d} distinct) in d={inst.d}.")
        result = solve_instance(inst, cfg)
        _emit(format_result(result, inst), cfg.output_path)


@yaosweep_cli.command("cones")
def cones(
    dim: DimOption = None,
    family: FamilyOption = None,
    seed: SeedOption = None,
    output_path: OutputOption = None,
    config_path: ConfigPathOption = None,
    config_name: ConfigNameOption = None,
    overrides: Optional[List[str]] = typer.Argument(None, hidden=True),
) -> None:
    """Dump the cone family for a dimension as JSON, with proximity and coverage reports."""
    with _usage_errors():
        cfg = _load_run_config(
            Command.cones,
            config_path,
            config_name,
            overrides,
            dim=dim,
            family=family,
            seed=seed,
            output_path=output_path,
        )
        if cfg.dim is None:
            raise ConfigurationError("The cones command needs a dimension: pass --dim or set dim in the config.")
        cone_family = family_for(cfg.dim, cfg)

    proximity = validate_family_proximity(cone_family, cfg.proximity_trials, cfg.seed)
    coverage = validate_coverage(cone_family, cfg.coverage_trials, cfg.seed)
    document = {
        **cone_family.to_dict(),
        "family": cone_family.name,
        "validation": {"proximity": proximity.to_dict(), "coverage": coverage.to_dict()},
    }
    _emit(json.dumps(document) + "\n", cfg.output_path)

    if not (proximity.passed and coverage.passed):
        logger.error(f"Cone family '{cone_family.name}' for d={cfg.dim} failed validation.")
        raise typer.Exit(code=ExitCode.VERIFICATION_FAILURE.value)


@yaosweep_cli.command("verify")
def verify(
    seed: SeedOption = None,
    trials: Annotated[Optional[int], typer.Option("--trials", help="Number of random instances.")] = None,
    max_n: Annotated[Optional[int], typer.Option("--max-n", help="Largest instance size.")] = None,
    coord_range: RangeOption = None,
    dims: DimsOption = None,
    family: FamilyOption = None,
    backend: BackendOption = None,
    threads: ThreadsOption = None,
    output_path: OutputOption = None,
    config_path: ConfigPathOption = None,
    config_name: ConfigNameOption = None,
    overrides: Optional[List[str]] = typer.Argument(None, hidden=True),
) -> None:
    """Check the pipeline against the dense Prim oracle on random integer instances."""
    with _usage_errors():
        cfg = _load_run_config(
            Command.verify,
            config_path,
            config_name,
            overrides,
            seed=seed,
            trials=trials,
            max_n=max_n,
            coord_range=coord_range,
            dims=dims,
            family=family,
            backend=backend,
            threads=threads,
            output_path=output_path,
        )
        report = run_verification(cfg)

    _emit(report.to_text(), cfg.output_path)
    if not report.ok:
        raise typer.Exit(code=ExitCode.VERIFICATION_FAILURE.value)


@yaosweep_cli.command("bench")
def bench(
    sizes: Annotated[
        Optional[str], typer.Option("--sizes", help="Instance sizes, e.g. 1000,2000 or 2^10..2^17.")
    ] = None,
    dims: DimsOption = None,
    backend: BackendOption = None,
    seed: SeedOption = None,
    coord_range: RangeOption = None,
    threads: ThreadsOption = None,
    output_path: OutputOption = None,
    config_path: ConfigPathOption = None,
    config_name: ConfigNameOption = None,
    overrides: Optional[List[str]] = typer.Argument(None, hidden=True),
) -> None:
    """Time the pipeline over a grid of sizes and write CSV: d,n,backend,median_ms,edges."""
    with _usage_errors():
        cfg = _load_run_config(
            Command.bench,
            config_path,
            config_name,
            overrides,
            sizes=sizes,
            dims=dims,
            backend=backend,
            seed=seed,
            coord_range=coord_range,
            threads=threads,
            output_path=output_path,
        )
        table = run_benchmark(cfg)

    _emit(table.write_csv(), cfg.output_path)


@yaosweep_cli.command()
def version() -> None:
    """Display version information for yaosweep and its dependencies."""
    table = Table("Package", "Version")
    table.add_row("yaosweep", __version__)
    table.add_row("NumPy", np.__version__)
    table.add_row("Polars", pl.__version__)
    table.add_row("Hydra", hydra.__version__)
    table.add_row("Typer", typer.__version__)
    console.print(table)


def entrypoint() -> None:
    """Main entry point for the yaosweep CLI application."""
    yaosweep_cli()


if __name__ == "__main__":
    yaosweep_cli()
