from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Self

import typer
from loguru import logger
from pydantic import BaseModel, ValidationError, model_validator
from pydantic_core import from_json

from ..core import (
    ConsistencyReport,
    CriterionVerdict,
    GramstabException,
    InputError,
    SpectralReport,
)
from ..core.models import RealSquareMatrix

EXIT_INPUT = 2
EXIT_INCONSISTENT = 3
EXIT_FAILURE = 1


class _Document(BaseModel):
    n: int

    @model_validator(mode="after")
    def check_sizes(self) -> Self:
        for name, value in self:
            if name != "n" and value.shape != (self.n, self.n):
                raise InputError(f"{name} has shape {value.shape}, expected ({self.n}, {self.n})")
        return self


class MatrixDocument(_Document, arbitrary_types_allowed=True):
    M: RealSquareMatrix


class CirculatoryDocument(_Document, arbitrary_types_allowed=True):
    # symmetry is checked when the system is built
    K: RealSquareMatrix
    C: RealSquareMatrix


class GyroscopicDocument(_Document, arbitrary_types_allowed=True):
    G: RealSquareMatrix
    K: RealSquareMatrix


class LumpedDocument(_Document, arbitrary_types_allowed=True):
    M: RealSquareMatrix
    A2: RealSquareMatrix
    A3: RealSquareMatrix


def read_document[T: BaseModel](path: Path, schema: type[T]) -> T:
    try:
        data = from_json(path.read_bytes())
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e
    except ValueError as e:
        raise InputError(f"{path} is not a JSON document: {e}") from e
    return schema.model_validate(data)


def format_number(value: float) -> str:
    return repr(float(value))


def verdict_line(verdict: CriterionVerdict) -> str:
    return (
        f"{verdict.id} fired={int(verdict.fired)} lhs={format_number(verdict.lhs)}"
        f" rhs={format_number(verdict.rhs)} margin={format_number(verdict.margin)}"
    )


def oracle_line(report: SpectralReport, consistency: ConsistencyReport) -> str:
    return (
        f"oracle nonreal={int(report.has_nonreal)} pos_real={int(report.has_positive_real)}"
        f" consistency={consistency.status}"
    )


def print_verdicts(verdicts: Iterable[CriterionVerdict]):
    for verdict in verdicts:
        typer.echo(verdict_line(verdict))


def finish_with_oracle(
    verdicts: Iterable[CriterionVerdict],
    report: SpectralReport,
    consistency: ConsistencyReport,
):
    print_verdicts(verdicts)
    typer.echo(oracle_line(report, consistency))
    if not consistency.passed:
        raise typer.Exit(EXIT_INCONSISTENT)


@contextmanager
def exit_codes() -> Iterator[None]:
    """
    Turn library failures into a one-line message on stderr and the exit code
    of their kind.
    """
    try:
        yield
    except (InputError, ValidationError) as e:
        logger.error("Invalid input: {}", e)
        typer.echo(f"error: {_first_line(e)}", err=True)
        raise typer.Exit(EXIT_INPUT)
    except GramstabException as e:
        logger.error("{}: {}", type(e).__name__, e)
        typer.echo(f"error: {_first_line(e)}", err=True)
        raise typer.Exit(EXIT_FAILURE)


def _first_line(error: Exception) -> str:
    if isinstance(error, ValidationError):
        first = error.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        return f"{location}: {first['msg']}" if location else first["msg"]
    return str(error).splitlines()[0] if str(error) else type(error).__name__
