from typing import Annotated

import typer
from loguru import logger

from ..constants import DEFAULT_MAX_GRAM_SIZE
from ..core import (
    Context,
    InputError,
    MonicPolynomial,
    check_sufficiency,
    complex_root_certificate,
    newton_power_sums,
    prop1_verdicts,
    prop2_verdicts,
    spectral_report,
)
from .common import exit_codes, finish_with_oracle, print_verdicts

title = "Polynomial criteria"
router = typer.Typer()

CRITERIA_GROUPS = ("prop1", "prop2", "gram")


def parse_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_coefficients(text: str) -> MonicPolynomial:
    try:
        coeffs = tuple(float(item) for item in parse_list(text))
    except ValueError as e:
        raise InputError(f"Coefficients must be numbers: {e}") from e
    if not coeffs:
        raise InputError("At least one coefficient is required")
    return MonicPolynomial(coeffs=coeffs)


@router.command("check-poly", rich_help_panel=title)
def check_poly(
    coeffs: Annotated[
        str, typer.Option(help="Comma-separated a1,...,an of x^n + a1 x^(n-1) + ... + an.")
    ],
    criteria: Annotated[
        str, typer.Option(help="Comma-separated subset of prop1, prop2, gram.")
    ] = "prop1,prop2",
    max_gram_size: Annotated[
        int, typer.Option(help="Largest index subset searched by the gram criterion.")
    ] = DEFAULT_MAX_GRAM_SIZE,
    oracle: Annotated[bool, typer.Option(help="Cross-check verdicts against the roots.")] = False,
):
    """
    Evaluate the power-sum criteria of a real monic polynomial.
    """
    with exit_codes():
        poly = parse_coefficients(coeffs)
        groups = parse_list(criteria)
        unknown = set(groups).difference(CRITERIA_GROUPS)
        if unknown:
            raise InputError(f"Unknown criteria {sorted(unknown)}; choose from {CRITERIA_GROUPS}")

        verdicts = []
        if "prop1" in groups:
            verdicts.extend(prop1_verdicts(newton_power_sums(poly, 4)))
        if "prop2" in groups:
            verdicts.extend(prop2_verdicts(poly))
        if "gram" in groups:
            certificate = complex_root_certificate(
                poly, min(max_gram_size, poly.degree)
            )
            if certificate is None:
                logger.info("No Gram certificate up to subset size {}", max_gram_size)
            else:
                verdicts.append(certificate.as_verdict())

        if not oracle:
            print_verdicts(verdicts)
            return
        report = spectral_report(poly)
        finish_with_oracle(verdicts, report, check_sufficiency(verdicts, report, Context.POLY))
