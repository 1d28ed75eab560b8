import sys
from typing import Annotated

import typer
from loguru import logger

from .commands import matrix_router, polynomial_router, sweep_router, systems_router
from .constants import DESCRIPTION, LOG_LEVEL, TITLE, VERSION

app = typer.Typer(name=TITLE, help=DESCRIPTION, no_args_is_help=True, add_completion=False)


def show_version(value: bool):
    if value:
        typer.echo(f"{TITLE} {VERSION}")
        raise typer.Exit()


@app.callback()
def root(
    log_level: Annotated[
        str, typer.Option(help="Log level of the stderr sink.", envvar="GRAMSTAB_LOG_LEVEL")
    ] = LOG_LEVEL,
    version: Annotated[
        bool, typer.Option("--version", callback=show_version, is_eager=True)
    ] = False,
):
    logger.remove()
    logger.add(sys.stderr, level=log_level.upper())


for router in (polynomial_router, matrix_router, systems_router, sweep_router):
    app.registered_commands.extend(router.registered_commands)


if __name__ == "__main__":
    app()
