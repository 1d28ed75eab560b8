"""
Polynomial-level criteria for a root with non-zero imaginary part.

All Gramians of the root-power vectors ``v_i = (x_1^i, ..., x_n^i)`` are evaluated
as Hankel determinants of power sums; the roots themselves are never needed.
"""

import warnings
from collections.abc import Sequence
from itertools import chain, combinations

import numpy as np
from loguru import logger
from scipy.linalg import LinAlgWarning, lu_factor

from ..constants import (
    DEFAULT_MAX_GRAM_SIZE,
    GRAM_CERTIFICATE_TOLERANCE,
    POWER_SUM_IMAGINARY_RESIDUE,
)
from .errors import ConsistencyError, InputError
from .models import CriterionVerdict, GramCertificate, MonicPolynomial, PowerSums


def stacked_power_sums(coeffs, max_k: int) -> np.ndarray:
    """
    Power sums ``s_1..s_max_k`` from coefficients through Newton's identities:

        s_k + a_1 s_(k-1) + ... + a_(k-1) s_1 + k a_k = 0,    k <= n
        s_k + a_1 s_(k-1) + ... + a_n s_(k-n)          = 0,    k > n

    ``coeffs`` holds ``a_1..a_n`` along its last axis; leading axes are a batch.
    """
    a = np.asarray(coeffs, dtype=float)
    n = a.shape[-1]
    s: list[np.ndarray] = []
    for k in range(1, max_k + 1):
        total = k * a[..., k - 1] if k <= n else np.zeros(a.shape[:-1])
        for j in range(1, min(k - 1, n) + 1):
            total = total + a[..., j - 1] * s[k - j - 1]
        s.append(-total)
    return np.stack(s, axis=-1)


def newton_power_sums(poly: MonicPolynomial, max_k: int) -> PowerSums:
    if max_k < 1:
        raise InputError(f"max_k must be at least 1, got {max_k}")
    values = stacked_power_sums(poly.coeffs, max_k)
    return PowerSums(n=poly.degree, values=tuple(values.tolist()))


def power_sums_from_roots(roots: Sequence[complex], max_k: int) -> PowerSums:
    if len(roots) == 0:
        raise InputError("At least one root is required")
    if max_k < 1:
        raise InputError(f"max_k must be at least 1, got {max_k}")
    r = np.asarray(roots, dtype=complex)
    values, residues = [], []
    power = np.ones_like(r)
    for k in range(1, max_k + 1):
        power = power * r
        total = complex(power.sum())
        if abs(total.imag) > POWER_SUM_IMAGINARY_RESIDUE * max(1.0, abs(total)):
            logger.error("Power sum s_{} has imaginary residue {}", k, total.imag)
            raise ConsistencyError(
                f"Roots are not closed under conjugation: Im(s_{k}) = {total.imag:.3g}"
            )
        values.append(total.real)
        residues.append(abs(total.imag))
    return PowerSums(n=len(r), values=tuple(values), residues=tuple(residues))


def _check_indices(indices: Sequence[int]) -> tuple[int, ...]:
    indices = tuple(int(i) for i in indices)
    if not indices:
        raise InputError("At least one index is required")
    if indices[0] < 0 or any(b <= a for a, b in zip(indices, indices[1:])):
        raise InputError(f"Indices must be strictly increasing and >= 0: {indices}")
    return indices


def gram_matrix(ps: PowerSums, indices: Sequence[int]) -> np.ndarray:
    """Hankel block with entry ``(p, q) = s_(i_p + i_q)`` and ``s_0 = n``."""
    indices = _check_indices(indices)
    return np.array([[ps.s(i + j) for j in indices] for i in indices], dtype=float)


def _determinant(matrix: np.ndarray) -> float:
    with warnings.catch_warnings():
        # an exactly singular Gram matrix is a legitimate zero determinant
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix)
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    return float((-1) ** swaps * np.prod(np.diag(lu)))


def gram_determinant(ps: PowerSums, indices: Sequence[int]) -> float:
    return _determinant(gram_matrix(ps, indices))


def prop1_verdicts(ps: PowerSums) -> tuple[CriterionVerdict, ...]:
    if ps.max < 4:
        raise InputError(f"Power sums up to s_4 are required, got up to s_{ps.max}")
    n, s1, s2, s3, s4 = ps.n, ps.s(1), ps.s(2), ps.s(3), ps.s(4)
    return (
        CriterionVerdict.evaluate("prop1-i", n * s2, s1**2),
        CriterionVerdict.evaluate("prop1-ii", n * s4, s2**2),
        CriterionVerdict.evaluate("prop1-iii", s2 * s4, s3**2),
    )


def prop2_inequalities(coeffs) -> dict[str, tuple]:
    """
    Coefficient-only forms of ``prop1_verdicts`` as ``(lhs, rhs)`` pairs,
    dispatched on the degree (n = 2, n = 3, n >= 4). ``coeffs`` holds
    ``a_1..a_n`` along its last axis; leading axes are a batch.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    n = coeffs.shape[-1]
    padded = np.zeros(coeffs.shape[:-1] + (max(n, 4),))
    padded[..., :n] = coeffs
    a1, a2, a3, a4 = (padded[..., i] for i in range(4))

    inequalities = {"prop2-i": (n * (a1**2 - 2 * a2), a1**2)}
    match n:
        case 2:
            inequalities["prop2-ii"] = (a1**2 * (a1**2 - 4 * a2), np.zeros_like(a1))
            inequalities["prop2-iii"] = (a2**2 * (a1**2 - 4 * a2), np.zeros_like(a1))
        case 3:
            inequalities["prop2-ii"] = (a1**4 + 6 * a1 * a3 + a2**2, 4 * a1**2 * a2)
            inequalities["prop2-iii"] = (
                a1**2 * a2**2 + 10 * a1 * a2 * a3,
                2 * a1**3 * a3 + 4 * a2**3 + 9 * a3**2,
            )
        case _:
            inequalities["prop2-ii"] = (
                n * (a1**4 - 4 * a1**2 * a2 + 4 * a1 * a3 + 2 * a2**2 - 4 * a4),
                (a1**2 - 2 * a2) ** 2,
            )
            inequalities["prop2-iii"] = (
                a1**2 * a2**2 + 10 * a1 * a2 * a3 + 8 * a2 * a4,
                2 * a1**3 * a3 + 4 * a1**2 * a4 + 4 * a2**3 + 9 * a3**2,
            )
    return inequalities


def prop2_verdicts(poly: MonicPolynomial) -> tuple[CriterionVerdict, ...]:
    if poly.degree < 2:
        raise InputError(f"Degree must be at least 2, got {poly.degree}")
    return tuple(
        CriterionVerdict.evaluate(name, lhs, rhs)
        for name, (lhs, rhs) in prop2_inequalities(poly.coeffs).items()
    )


def complex_root_certificate(
    poly: MonicPolynomial, max_subset_size: int = DEFAULT_MAX_GRAM_SIZE
) -> GramCertificate | None:
    """
    Search index subsets of ``{0..n-1}`` in lexicographic order for a negative Gramian.

    A subset certifies when its determinant is below ``-tolerance``, the tolerance
    being relative to the Hadamard bound of the Gram matrix.
    """
    n = poly.degree
    if not 1 <= max_subset_size <= n:
        raise InputError(f"max_subset_size must lie in [1, {n}], got {max_subset_size}")
    ps = newton_power_sums(poly, max(1, 2 * (n - 1)))
    subsets = sorted(
        chain.from_iterable(
            combinations(range(n), size) for size in range(1, max_subset_size + 1)
        )
    )
    for indices in subsets:
        matrix = gram_matrix(ps, indices)
        value = _determinant(matrix)
        bound = float(np.prod(np.linalg.norm(matrix, axis=1)))
        tolerance = GRAM_CERTIFICATE_TOLERANCE * max(1.0, bound)
        if value < -tolerance:
            logger.debug("Gram{} = {} certifies a non-real root", indices, value)
            return GramCertificate(indices=indices, value=value, tolerance=tolerance)
    logger.debug("No Gram certificate up to subset size {}", max_subset_size)
    return None
