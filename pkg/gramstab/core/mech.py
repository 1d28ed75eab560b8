"""
Lumped-mass mechanical systems: normal forms, circulatory and gyroscopic
instability verdicts, reduced characteristic polynomials and the two example
families used for region maps.
"""

import warnings
from collections.abc import Callable

import numpy as np
from loguru import logger
from numpy.linalg import norm
from scipy.linalg import LinAlgError, LinAlgWarning, cholesky, lu_factor, lu_solve

from ..constants import (
    GYRO_IDENTITY_CHECK,
    GYRO_MAX_SIZE,
    MASS_PIVOT_TOLERANCE,
    ODD_COEFFICIENT_TOLERANCE,
    SYMMETRY_ACCEPTANCE,
    ZERO_BLOCK_TOLERANCE,
)
from .errors import ConsistencyError, InputError
from .matcrit import (
    char_poly,
    split_power_sums,
    stacked_char_poly,
    stacked_split_power_sums,
)
from .models import (
    Classification,
    CirculatorySystem,
    CriterionVerdict,
    Family,
    GyroPowerSums,
    GyroscopicSystem,
    MonicPolynomial,
    NormalForm,
    PowerSums,
    SymSkewSplit,
    as_square_matrix,
)
from .polycrit import newton_power_sums, prop2_verdicts


def _sq(matrix: np.ndarray):
    return np.sum(matrix * matrix, axis=(-2, -1))


def _tr(matrix: np.ndarray):
    return np.trace(matrix, axis1=-2, axis2=-1)


def _is_zero(block: np.ndarray, source: np.ndarray) -> bool:
    return norm(block) <= ZERO_BLOCK_TOLERANCE * (1 + norm(source))


def _is_positive_definite(matrix: np.ndarray) -> bool:
    try:
        cholesky(matrix, lower=True)
    except LinAlgError:
        return False
    return True


def classify(D, G, K, C) -> Classification:
    d, g, c = (not D.any(), not G.any(), not C.any())
    if d and g and c and _is_positive_definite(K):
        return Classification.CONSERVATIVE
    if d and c:
        return Classification.GYROSCOPIC_CONSERVATIVE
    if g and c and _is_positive_definite(D) and _is_positive_definite(K):
        return Classification.DAMPED_NON_GYROSCOPIC
    if d and g:
        return Classification.CIRCULATORY
    if g:
        return Classification.CONSTRAINT_DAMPING
    return Classification.GENERAL


def normal_form(Mass, A2, A3) -> NormalForm:
    """
    Bring ``Mass q'' + A2 q' + A3 q = 0`` to ``q'' + (D + G) q' + (K + C) q = 0``.
    Blocks passing the zero test are stored as exact zeros.
    """
    Mass, A2, A3 = (as_square_matrix(m) for m in (Mass, A2, A3))
    if not Mass.shape == A2.shape == A3.shape:
        raise InputError(
            f"Shapes differ: M {Mass.shape}, A2 {A2.shape}, A3 {A3.shape}"
        )
    if norm(Mass - Mass.T) > SYMMETRY_ACCEPTANCE:
        raise InputError("Mass matrix is not symmetric")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(Mass)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if smallest < MASS_PIVOT_TOLERANCE * norm(Mass):
        logger.error("Mass matrix is singular (smallest pivot {})", smallest)
        raise InputError(f"Mass matrix is singular (smallest pivot {smallest:.3g})")

    blocks = []
    for source in (lu_solve((lu, piv), A2), lu_solve((lu, piv), A3)):
        for part in ((source + source.T) / 2, (source - source.T) / 2):
            blocks.append(np.zeros_like(part) if _is_zero(part, source) else part)
    D, G, K, C = blocks
    classification = classify(D, G, K, C)
    logger.info("Normal form of size {} classified as {}", len(D), classification.safe_name)
    return NormalForm(D=D, G=G, K=K, C=C, classification=classification)


def circulatory_power_sums(sys: CirculatorySystem) -> PowerSums:
    """
    ``s_1..s_4`` of ``det(x I + K + C)``, written through ``K`` and ``C``.
    """
    values = split_power_sums(SymSkewSplit(sym=-sys.K, skew=-sys.C))
    return PowerSums(n=sys.n, values=values)


def circulatory_inequalities(K: np.ndarray, C: np.ndarray) -> dict[str, tuple]:
    """
    ``(lhs, rhs)`` of the six circulatory criteria; leading axes are a batch.
    """
    n = K.shape[-1]
    s1, s2, s3, s4 = stacked_split_power_sums(-K, -C)
    KK, CC, KC, CK = K @ K, C @ C, K @ C, C @ K
    return {
        "thm2-i": (n * s2, s1**2),
        "thm2-ii": (n * s4, s2**2),
        "thm2-iii": (s2 * s4, s3**2),
        "rmk-ii-alt": (_sq(KK + CC) - s2**2 / n, _sq(CK + KC)),
        "cor-i": (np.sqrt(_sq(K)), np.sqrt(_sq(C))),
        "cor-ii": (_sq(KK) + _sq(CC) + 2 * _tr(KC @ KC), 4 * _sq(KC)),
    }


def circulatory_verdicts(sys: CirculatorySystem) -> tuple[CriterionVerdict, ...]:
    return tuple(
        CriterionVerdict.evaluate(name, lhs, rhs)
        for name, (lhs, rhs) in circulatory_inequalities(sys.K, sys.C).items()
    )


def gyroscopic_inequality_thm4(G: np.ndarray, K: np.ndarray) -> tuple:
    n = K.shape[-1]
    GT = np.swapaxes(G, -1, -2)
    lhs = 2 * n * (2 * _sq(K) + _sq(G @ G) + 4 * _tr(GT @ K @ G))
    rhs = (2 * _tr(K) + _sq(G)) ** 2
    return lhs, rhs


def gyroscopic_verdict_thm4(sys: GyroscopicSystem) -> CriterionVerdict:
    return CriterionVerdict.evaluate("thm4", *gyroscopic_inequality_thm4(sys.G, sys.K))


def circulatory_reduced_polynomial(sys: CirculatorySystem) -> MonicPolynomial:
    return char_poly(-(sys.K + sys.C))


def stacked_state_matrix(G: np.ndarray, K: np.ndarray) -> np.ndarray:
    n = K.shape[-1]
    A = np.zeros(K.shape[:-2] + (2 * n, 2 * n))
    A[..., :n, n:] = np.eye(n)
    A[..., n:, :n] = -K
    A[..., n:, n:] = -G
    return A


def state_matrix(sys: GyroscopicSystem) -> np.ndarray:
    return stacked_state_matrix(sys.G, sys.K)


def gyro_characteristic_polynomial(sys: GyroscopicSystem) -> MonicPolynomial:
    """``P(x) = det(x^2 I + x G + K)`` as the characteristic polynomial of the state matrix."""
    if sys.n > GYRO_MAX_SIZE:
        raise InputError(f"System size {sys.n} exceeds the limit {GYRO_MAX_SIZE}")
    return char_poly(state_matrix(sys))


def _odd_part_too_large(p: np.ndarray):
    odd = np.max(np.abs(p[..., 0::2]), axis=-1)
    return odd > ODD_COEFFICIENT_TOLERANCE * (1 + np.max(np.abs(p), axis=-1))


def gyro_reduced_polynomial(sys: GyroscopicSystem) -> MonicPolynomial:
    """
    ``Q`` with ``Q(x^2) = P(x)``. ``P`` is even because ``G`` is skew and ``K``
    symmetric; odd coefficients above tolerance are a consistency failure.
    """
    p = np.asarray(gyro_characteristic_polynomial(sys).coeffs)
    if _odd_part_too_large(p):
        odd = float(np.max(np.abs(p[0::2])))
        logger.error("Odd coefficient of magnitude {} in an even polynomial", odd)
        raise ConsistencyError(f"Characteristic polynomial is not even (odd part {odd:.3g})")
    return MonicPolynomial(coeffs=tuple(p[1::2].tolist()))


def stacked_reduced_coefficients(
    G: np.ndarray, K: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    Coefficients of ``Q`` for a batch of gyroscopic systems, with a mask of the
    systems that fail the Newton or evenness checks.
    """
    p, failed = stacked_char_poly(stacked_state_matrix(G, K))
    return p[..., 1::2], failed | _odd_part_too_large(p)


def gyro_power_sum_identities(sys: GyroscopicSystem) -> GyroPowerSums:
    K, G = sys.K, sys.G
    s2_p = -2 * float(np.trace(K)) - _sq(G)
    s4_p = 2 * _sq(K) + _sq(G @ G) + 4 * float(np.trace(G.T @ K @ G))
    result = GyroPowerSums(s2_p=s2_p, s4_p=s4_p, s1_q=s2_p / 2, s2_q=s4_p / 2)

    p_sums = newton_power_sums(gyro_characteristic_polynomial(sys), 4)
    q_sums = newton_power_sums(gyro_reduced_polynomial(sys), 2)
    scale = max(1.0, norm(state_matrix(sys)))
    checks = (
        ("s2_p", result.s2_p, p_sums.s(2), 2),
        ("s4_p", result.s4_p, p_sums.s(4), 4),
        ("s1_q", result.s1_q, q_sums.s(1), 2),
        ("s2_q", result.s2_q, q_sums.s(2), 4),
    )
    for name, closed, computed, power in checks:
        if abs(closed - computed) > GYRO_IDENTITY_CHECK * scale**power:
            logger.error("{}: trace form {} vs polynomial {}", name, closed, computed)
            raise ConsistencyError(f"{name} trace form disagrees with the polynomial path")
    return result


def gyroscopic_prop2_verdicts(sys: GyroscopicSystem) -> tuple[CriterionVerdict, ...]:
    return prop2_verdicts(gyro_reduced_polynomial(sys))


def _grid(k, c) -> tuple[np.ndarray, np.ndarray]:
    return np.broadcast_arrays(np.asarray(k, dtype=float), np.asarray(c, dtype=float))


def circulatory3_matrices(k, c) -> tuple[np.ndarray, np.ndarray]:
    """``(K, C)`` of the three-degree-of-freedom circulatory family, one per ``(k, c)``."""
    k, c = _grid(k, c)
    K = np.zeros(k.shape + (3, 3))
    K[..., 0, 0] = K[..., 1, 1] = 1.0
    K[..., 1, 2] = K[..., 2, 1] = k
    C = np.zeros(c.shape + (3, 3))
    C[..., 0, 1], C[..., 1, 0] = c, -c
    return K, C


def charged_particle_matrices(k, c) -> tuple[np.ndarray, np.ndarray]:
    """
    ``(G, K)`` of a linearised charged particle in a stationary electromagnetic
    field, the electric and magnetic data absorbed into ``k`` and ``c``.
    """
    k, c = _grid(k, c)
    K = np.zeros(k.shape + (3, 3))
    K[..., 0, 0] = K[..., 1, 2] = K[..., 2, 1] = k
    G = np.zeros(c.shape + (3, 3))
    G[..., 0, 1], G[..., 1, 0] = c, -c
    return G, K


def example_circulatory3(k: float, c: float) -> CirculatorySystem:
    K, C = circulatory3_matrices(k, c)
    return CirculatorySystem(K=K, C=C)


def example_charged_particle(k: float, c: float) -> GyroscopicSystem:
    G, K = charged_particle_matrices(k, c)
    return GyroscopicSystem(G=G, K=K)


def family_system(
    family: Family, k: float, c: float
) -> CirculatorySystem | GyroscopicSystem:
    match family:
        case Family.CIRCULATORY3:
            return example_circulatory3(k, c)
        case Family.CHARGED_PARTICLE:
            return example_charged_particle(k, c)


# Region polynomials: positive exactly where the criterion fires.
_CIRCULATORY3_FORMS = {
    "thm2-i": lambda k, c: 3 * c**2 - 3 * k**2 - 1,
    "thm2-ii": lambda k, c: -((c**2 - k**2) ** 2) + 14 * c**2 - 2 * k**2 - 1,
    "thm2-iii": lambda k, c: (
        4 * c**6
        - 4 * k**6
        - 12 * c**2 * k**2 * (c**2 - k**2)
        + 8 * c**4
        - 3 * k**4
        + 4 * c**2 * k**2
        + 4 * c**2
    ),
}
_CHARGED_PARTICLE_FORMS = {
    "thm4": lambda k, c: -((c**2 + k) ** 2) - 3 * k**2,
    "prop2-i": lambda k, c: -((c**2 + k) ** 2) - 3 * k**2,
    "prop2-ii": lambda k, c: -(c**2) * (c**6 + 4 * c**4 * k + 10 * c**2 * k**2 + 6 * k**3),
    "prop2-iii": lambda k, c: -(k**3)
    * (2 * c**6 + 7 * c**4 * k + 18 * c**2 * k**2 + 8 * k**3),
}


def closed_forms(family: Family) -> dict[str, Callable]:
    match family:
        case Family.CIRCULATORY3:
            return dict(_CIRCULATORY3_FORMS)
        case Family.CHARGED_PARTICLE:
            return dict(_CHARGED_PARTICLE_FORMS)
