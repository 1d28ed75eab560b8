from pathlib import Path
from typing import Annotated

import typer
from loguru import logger

from ..constants import DEFAULT_SWEEP_RANGE, DEFAULT_SWEEP_RESOLUTION, WORKERS
from ..sweep import SweepConfig, closed_form_disagreements, emit_csv, emit_svg, run_sweep
from .common import EXIT_FAILURE, EXIT_INCONSISTENT, exit_codes
from .polynomial import parse_list

title = "Parameter sweeps"
router = typer.Typer()

LOW, HIGH = DEFAULT_SWEEP_RANGE


@router.command("sweep", rich_help_panel=title)
def sweep(
    family: Annotated[str, typer.Option(help="circulatory3 or charged-particle.")],
    out_csv: Annotated[Path, typer.Option(help="Destination of the cell table.")],
    kmin: Annotated[float, typer.Option()] = LOW,
    kmax: Annotated[float, typer.Option()] = HIGH,
    cmin: Annotated[float, typer.Option()] = LOW,
    cmax: Annotated[float, typer.Option()] = HIGH,
    nk: Annotated[int, typer.Option()] = DEFAULT_SWEEP_RESOLUTION,
    nc: Annotated[int, typer.Option()] = DEFAULT_SWEEP_RESOLUTION,
    criteria: Annotated[
        str, typer.Option(help="Comma-separated criterion ids; family defaults when empty.")
    ] = "",
    oracle: Annotated[bool, typer.Option(help="Also compute the spectral instability flag.")] = False,
    out_svg: Annotated[Path | None, typer.Option(help="Destination of the region image.")] = None,
    workers: Annotated[int, typer.Option(min=1, help="Worker processes.")] = WORKERS,
    check_closed_form: Annotated[
        bool, typer.Option(help="Count cells disagreeing with the region polynomials.")
    ] = False,
):
    """
    Evaluate criteria over a (k, c) grid of an example family.
    """
    with exit_codes():
        cfg = SweepConfig(
            family=family,
            k_min=kmin,
            k_max=kmax,
            c_min=cmin,
            c_max=cmax,
            nk=nk,
            nc=nc,
            criteria=tuple(parse_list(criteria)),
            oracle=oracle,
        )
        result = run_sweep(cfg, workers)
        try:
            emit_csv(result, out_csv)
            if out_svg is not None:
                emit_svg(result, out_svg)
        except OSError as e:
            logger.error("Cannot write sweep output: {}", e)
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(EXIT_FAILURE)

    failed = [r for r in result.records if r.error]
    if failed:
        first = failed[0]
        logger.warning(
            "{} cells recorded errors, first at (k={}, c={}): {}",
            len(failed),
            first.k,
            first.c,
            first.error,
        )

    if check_closed_form:
        for name, count in closed_form_disagreements(result).items():
            typer.echo(f"closed-form {name} disagreements={count}")

    if oracle:
        refuted = sum(
            1
            for r in result.records
            if r.oracle_unstable is False and any(r.fired)
        )
        if refuted:
            logger.error("{} fired cells are refuted by the oracle", refuted)
            raise typer.Exit(EXIT_INCONSISTENT)
