from pathlib import Path
from typing import Annotated

import typer

from ..core import (
    Context,
    char_poly,
    check_sufficiency,
    spectral_report,
    square_trace_verdict,
    theorem1_verdicts,
)
from .common import MatrixDocument, exit_codes, finish_with_oracle, print_verdicts, read_document

title = "Matrix criteria"
router = typer.Typer()


@router.command("check-matrix", rich_help_panel=title)
def check_matrix(
    input: Annotated[Path, typer.Option(help='JSON document {"n": ..., "M": [[...], ...]}.')],
    oracle: Annotated[bool, typer.Option(help="Cross-check verdicts against the eigenvalues.")] = False,
):
    """
    Evaluate the trace criteria for complex eigenvalues of a real matrix.
    """
    with exit_codes():
        document = read_document(input, MatrixDocument)
        verdicts = [*theorem1_verdicts(document.M), square_trace_verdict(document.M)]
        if not oracle:
            print_verdicts(verdicts)
            return
        report = spectral_report(char_poly(document.M))
        finish_with_oracle(verdicts, report, check_sufficiency(verdicts, report, Context.MATRIX))
