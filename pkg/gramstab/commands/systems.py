from pathlib import Path
from typing import Annotated

import numpy as np
import typer

from ..core import (
    CirculatorySystem,
    Context,
    GyroscopicSystem,
    check_sufficiency,
    circulatory_verdicts,
    gyroscopic_prop2_verdicts,
    gyroscopic_verdict_thm4,
    normal_form,
    verify_instability,
)
from .common import (
    CirculatoryDocument,
    GyroscopicDocument,
    LumpedDocument,
    exit_codes,
    finish_with_oracle,
    print_verdicts,
    read_document,
)

title = "Mechanical systems"
router = typer.Typer()

InputOption = Annotated[Path, typer.Option(help="JSON system document.")]
OracleOption = Annotated[
    bool, typer.Option(help="Cross-check verdicts against the characteristic roots.")
]


def _report(verdicts, system, context: Context, oracle: bool):
    if not oracle:
        print_verdicts(verdicts)
        return
    report = verify_instability(system)
    finish_with_oracle(verdicts, report, check_sufficiency(verdicts, report, context))


@router.command("check-circulatory", rich_help_panel=title)
def check_circulatory(input: InputOption, oracle: OracleOption = False):
    """
    ``q'' + (K + C) q = 0`` from a document with keys ``n``, ``K``, ``C``.
    """
    with exit_codes():
        document = read_document(input, CirculatoryDocument)
        system = CirculatorySystem(K=document.K, C=document.C)
        _report(circulatory_verdicts(system), system, Context.CIRCULATORY, oracle)


@router.command("check-gyroscopic", rich_help_panel=title)
def check_gyroscopic(input: InputOption, oracle: OracleOption = False):
    """
    ``q'' + G q' + K q = 0`` from a document with keys ``n``, ``G``, ``K``.
    """
    with exit_codes():
        document = read_document(input, GyroscopicDocument)
        system = GyroscopicSystem(G=document.G, K=document.K)
        verdicts = [gyroscopic_verdict_thm4(system)]
        if system.n >= 2:
            verdicts.extend(gyroscopic_prop2_verdicts(system))
        _report(verdicts, system, Context.GYROSCOPIC, oracle)


@router.command("normal-form", rich_help_panel=title)
def show_normal_form(input: InputOption):
    """
    Reduce ``M q'' + A2 q' + A3 q = 0`` and print its blocks and class.
    """
    with exit_codes():
        document = read_document(input, LumpedDocument)
        form = normal_form(document.M, document.A2, document.A3)
    for name in ("D", "G", "K", "C"):
        block = np.array2string(getattr(form, name), precision=17, separator=", ")
        typer.echo(f"{name} = {block}")
    typer.echo(f"classification = {form.classification.safe_name}")
