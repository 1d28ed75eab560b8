"""
Spectral ground truth, independent of the criteria: polynomial roots by
simultaneous iteration, spectrum classification and sufficiency checks.
"""

from collections.abc import Iterable

import numpy as np
from loguru import logger

from ..constants import (
    CONJUGATE_PAIR_TOLERANCE,
    IMAGINARY_THRESHOLD,
    POSITIVE_REAL_THRESHOLD,
    ROOT_CLUSTER_FACTOR,
    ROOT_POLISH_STEPS,
    ROOT_RESIDUAL_TOLERANCE,
    ROOT_SWEEP_BUDGET,
)
from .errors import ConvergenceError
from .mech import circulatory_reduced_polynomial, gyro_reduced_polynomial
from .models import (
    CirculatorySystem,
    ConsistencyReport,
    Context,
    CriterionVerdict,
    GyroscopicSystem,
    MonicPolynomial,
    RootSet,
    SpectralReport,
)

METHOD = "aberth-ehrlich"
_EPS = np.finfo(float).eps


def _scaled_residuals(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``|p(z)|`` divided by the same sum taken over absolute values."""
    scale = np.polyval(np.abs(coeffs), np.abs(z))
    return np.abs(np.polyval(coeffs, z)) / np.where(scale > 0, scale, 1.0)


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    n = len(coeffs) - 1
    center = -coeffs[1] / n
    radius = max(abs(a) ** (1 / k) for k, a in enumerate(coeffs[1:], start=1))
    # the angular offset keeps the start off the real axis and asymmetric
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return center + max(radius, 1.0) * np.exp(1j * angles)


def _aberth(coeffs: np.ndarray) -> np.ndarray:
    n = len(coeffs) - 1
    derivative = np.polyder(coeffs)
    z = _initial_guesses(coeffs)
    best, best_residual = z, np.inf
    sweep = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        for sweep in range(1, ROOT_SWEEP_BUDGET + 1):
            p = np.polyval(coeffs, z)
            dp = np.polyval(derivative, z)
            ratio = np.where(dp != 0, p / dp, p)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            repulsion = (1 / diff).sum(axis=1) - 1.0
            step = ratio / (1 - ratio * repulsion)
            step = np.where(np.isfinite(step), step, ratio)
            z = z - step

            residual = float(np.max(_scaled_residuals(coeffs, z)))
            if residual < best_residual:
                best, best_residual = z.copy(), residual
            if np.all(np.abs(step) <= 4 * _EPS * np.maximum(1.0, np.abs(z))):
                break
    logger.debug("Aberth iteration on degree {} stopped after {} sweeps", n, sweep)
    return best


def _polish(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    derivative = np.polyder(coeffs)
    for _ in range(ROOT_POLISH_STEPS):
        with np.errstate(divide="ignore", invalid="ignore"):
            candidate = z - np.polyval(coeffs, z) / np.polyval(derivative, z)
        better = np.isfinite(candidate) & (
            _scaled_residuals(coeffs, candidate) < _scaled_residuals(coeffs, z)
        )
        z = np.where(better, candidate, z)
    return z


def _cluster(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """
    Collapse the iterates of each multiple root onto their mean.

    An m-fold root only settles to within about ``eps^(1/m)``, while the mean of
    its m iterates stays accurate. A cluster of m iterates lies within
    ``ROOT_CLUSTER_FACTOR * eps^(1/m)`` (relative) of its first member and its
    mean meets the residual target; centers that close to the real axis are put
    on it.
    """
    out = z.copy()
    free = np.ones(len(z), dtype=bool)
    for i in range(len(z)):
        if not free[i]:
            continue
        scale = max(1.0, abs(z[i]))
        distance = np.where(free, np.abs(z - z[i]), np.inf)
        size = int(free.sum())
        while True:
            radius = ROOT_CLUSTER_FACTOR * _EPS ** (1 / size) * scale
            members = distance <= radius
            count = int(members.sum())
            center = complex(z[members].mean())
            if size == 1:
                break
            residual = float(_scaled_residuals(coeffs, np.array([center]))[0])
            if count >= size and residual <= ROOT_RESIDUAL_TOLERANCE:
                break
            size = min(count, size - 1)
        if abs(center.imag) <= radius:
            center = complex(center.real, 0.0)
        out[members] = center
        free[members] = False
    return out


def _pair_conjugates(z: np.ndarray) -> np.ndarray:
    """Turn matching upper and lower half-plane roots into exact conjugate pairs."""
    out = z.copy()
    lower = [j for j in range(len(z)) if z[j].imag < 0]
    for i in (i for i in range(len(z)) if z[i].imag > 0):
        if not lower:
            break
        j = min(lower, key=lambda j: abs(out[j] - out[i].conjugate()))
        if abs(out[j] - out[i].conjugate()) <= CONJUGATE_PAIR_TOLERANCE * max(1.0, abs(out[i])):
            center = (out[i] + out[j].conjugate()) / 2
            out[i], out[j] = center, center.conjugate()
            lower.remove(j)
    return out


def find_roots(poly: MonicPolynomial) -> RootSet:
    coeffs = poly.as_array()
    zeros = 0
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs = coeffs[:-1]
        zeros += 1

    degree = len(coeffs) - 1
    if degree == 0:
        z = np.empty(0, dtype=complex)
    elif degree == 1:
        z = np.array([-coeffs[1]], dtype=complex)
    else:
        z = _pair_conjugates(_cluster(coeffs, _polish(coeffs, _aberth(coeffs))))

    residuals = _scaled_residuals(coeffs, z)
    if len(z) and float(np.max(residuals)) > ROOT_RESIDUAL_TOLERANCE:
        logger.error("Roots of degree {} polynomial did not converge", poly.degree)
        raise ConvergenceError(
            f"Root residual {np.max(residuals):.3g} above {ROOT_RESIDUAL_TOLERANCE:g}",
            best_iterates=[complex(r) for r in z],
            residuals=[float(r) for r in residuals],
        )
    roots = [0j] * zeros + [complex(r) for r in z]
    return RootSet(
        roots=tuple(roots),
        residuals=tuple([0.0] * zeros + [float(r) for r in residuals]),
        method=METHOD,
    )


def classify_spectrum(rs: RootSet) -> SpectralReport:
    nonreal, positive = [], []
    for root in rs.roots:
        scale = max(1.0, abs(root))
        if abs(root.imag) > IMAGINARY_THRESHOLD * scale:
            nonreal.append(root)
        if root.real > POSITIVE_REAL_THRESHOLD * scale:
            positive.append(root)
    witnesses = tuple(r for r in rs.roots if r in nonreal or r in positive)
    return SpectralReport(
        has_nonreal=bool(nonreal),
        has_positive_real=bool(positive),
        witnesses=witnesses,
        roots=rs.roots,
    )


def spectral_report(poly: MonicPolynomial) -> SpectralReport:
    return classify_spectrum(find_roots(poly))


def lambda_roots(alpha_roots: RootSet) -> RootSet:
    """Both square roots ``+-sqrt(a)`` of every root ``a`` of a reduced polynomial."""
    principal = np.sqrt(np.asarray(alpha_roots.roots, dtype=complex))
    roots = [complex(r) for pair in zip(principal, -principal) for r in pair]
    residuals = [r for r in alpha_roots.residuals for _ in range(2)]
    return RootSet(
        roots=tuple(roots), residuals=tuple(residuals), method=f"{alpha_roots.method}+sqrt"
    )


def verify_instability(sys: CirculatorySystem | GyroscopicSystem) -> SpectralReport:
    if isinstance(sys, CirculatorySystem):
        reduced = circulatory_reduced_polynomial(sys)
    else:
        reduced = gyro_reduced_polynomial(sys)
    return classify_spectrum(lambda_roots(find_roots(reduced)))


def check_sufficiency(
    verdicts: Iterable[CriterionVerdict], report: SpectralReport, context: Context
) -> ConsistencyReport:
    """
    A fired verdict needs its spectral fact: a positive-real-part root for
    systems, a non-real root for bare polynomials and matrices.
    """
    confirmed = report.has_positive_real if context.is_system else report.has_nonreal
    violations = () if confirmed else tuple(v.id for v in verdicts if v.fired)
    if violations:
        logger.warning(
            "Criteria {} fired but the {} spectrum refutes them",
            ", ".join(violations),
            context.safe_name,
        )
    return ConsistencyReport(context=context, passed=not violations, violations=violations)
