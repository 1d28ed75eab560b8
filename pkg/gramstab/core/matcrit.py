"""
Matrix-level criteria, written through the symmetric and skew-symmetric parts
``M = M_s + M_a`` of a real square matrix.

The ``stacked_*`` helpers act on the last two axes and treat leading axes as a
batch, so the same formulas serve single matrices and whole parameter grids.
"""

import numpy as np
from loguru import logger
from numpy.linalg import matrix_power, norm

from ..constants import (
    CHAR_POLY_MAX_SIZE,
    CHAR_POLY_NEWTON_CHECK,
    TRACE_AGREEMENT_FAIL,
    TRACE_AGREEMENT_WARN,
)
from .errors import ConsistencyError, InputError
from .models import (
    CriterionVerdict,
    MonicPolynomial,
    PowerSums,
    SymSkewSplit,
    as_square_matrix,
)
from .polycrit import stacked_power_sums


def sym_skew_split(M) -> SymSkewSplit:
    M = as_square_matrix(M)
    return SymSkewSplit(sym=(M + M.T) / 2, skew=(M - M.T) / 2)


def _sq(matrix: np.ndarray):
    """Squared Frobenius norm."""
    return np.sum(matrix * matrix, axis=(-2, -1))


def _tr(matrix: np.ndarray):
    return np.trace(matrix, axis1=-2, axis2=-1)


def stacked_split_power_sums(S: np.ndarray, A: np.ndarray) -> tuple:
    """
    ``s_1..s_4`` of ``S + A`` through the norm-trace identities of its
    symmetric part ``S`` and skew part ``A``.
    """
    SA = S @ A
    s1 = _tr(S)
    s2 = _sq(S) - _sq(A)
    s3 = _tr(S @ S @ S) + 3 * _tr(S @ A @ A)
    s4 = _sq(S @ S) + _sq(A @ A) - 4 * _sq(SA) + 2 * _tr(SA @ SA)
    return s1, s2, s3, s4


def split_power_sums(split: SymSkewSplit) -> tuple[float, float, float, float]:
    s1, s2, s3, s4 = stacked_split_power_sums(split.sym, split.skew)
    return float(s1), float(s2), float(s3), float(s4)


def trace_power_sums(M) -> PowerSums:
    """
    ``s_k = Tr(M^k)`` for ``k = 1..4``; the norm-trace values ride along in
    ``cross_check`` and must agree with the direct traces.
    """
    M = as_square_matrix(M)
    direct = tuple(float(np.trace(matrix_power(M, k))) for k in range(1, 5))
    decomposed = split_power_sums(sym_skew_split(M))
    scale = max(1.0, norm(M))
    for k, (d, s) in enumerate(zip(direct, decomposed), start=1):
        error = abs(d - s) / scale**k
        if error > TRACE_AGREEMENT_FAIL:
            logger.error("Tr(M^{}) = {} but the split identities give {}", k, d, s)
            raise ConsistencyError(f"Trace identity for s_{k} off by {error:.3g}")
        if error > TRACE_AGREEMENT_WARN:
            logger.warning("Trace identity for s_{} off by {:.3g}", k, error)
    return PowerSums(n=M.shape[0], values=direct, cross_check=decomposed)


def theorem1_verdicts(M) -> tuple[CriterionVerdict, ...]:
    M = as_square_matrix(M)
    n = M.shape[0]
    s1, s2, s3, s4 = split_power_sums(sym_skew_split(M))
    return (
        CriterionVerdict.evaluate("thm1-i", n * s2, s1**2),
        CriterionVerdict.evaluate("thm1-ii", n * s4, s2**2),
        CriterionVerdict.evaluate("thm1-iii", s2 * s4, s3**2),
    )


def square_trace_verdict(M) -> CriterionVerdict:
    """
    First criterion applied to the characteristic polynomial of ``M^2``:
    ``||(M^2)_a||^2 > ||(M^2)_s||^2 - Tr^2((M^2)_s) / n``.
    """
    M = as_square_matrix(M)
    n = M.shape[0]
    split = sym_skew_split(M @ M)
    lhs = _sq(split.sym) - _tr(split.sym) ** 2 / n
    return CriterionVerdict.evaluate("sq-i", lhs, _sq(split.skew))


def stacked_char_poly(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Faddeev-LeVerrier recursion for ``det(x I - M)``:

        N_1 = I,   a_k = -Tr(M N_k) / k,   N_(k+1) = M N_k + a_k I

    Returns the coefficients ``a_1..a_n`` along the last axis and a mask of the
    matrices whose coefficients fail Newton's identities against ``Tr(M^k)``,
    ``k <= 4``.
    """
    n = M.shape[-1]
    identity = np.eye(n)
    N = np.broadcast_to(identity, M.shape)
    coeffs = []
    for k in range(1, n + 1):
        MN = M @ N
        a_k = -_tr(MN) / k
        coeffs.append(a_k)
        N = MN + np.asarray(a_k)[..., None, None] * identity
    coeffs = np.stack(coeffs, axis=-1)

    sums = stacked_power_sums(coeffs, 4)
    scale = np.maximum(1.0, np.sqrt(_sq(M)))
    failed = np.zeros(M.shape[:-2], dtype=bool)
    power = np.broadcast_to(identity, M.shape)
    for k in range(1, 5):
        power = power @ M
        failed |= np.abs(sums[..., k - 1] - _tr(power)) > CHAR_POLY_NEWTON_CHECK * scale**k
    return coeffs, failed


def char_poly(M) -> MonicPolynomial:
    M = as_square_matrix(M)
    n = M.shape[0]
    if n > CHAR_POLY_MAX_SIZE:
        raise InputError(f"Matrix size {n} exceeds the limit {CHAR_POLY_MAX_SIZE}")
    coeffs, failed = stacked_char_poly(M)
    if failed:
        logger.error("char_poly of size {} fails Newton's identities", n)
        raise ConsistencyError(
            "Characteristic polynomial disagrees with Tr(M^k) for some k <= 4"
        )
    return MonicPolynomial(coeffs=tuple(coeffs.tolist()))
