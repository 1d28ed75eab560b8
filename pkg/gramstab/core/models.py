from enum import IntEnum
from math import isfinite
from typing import Annotated, Any, Self

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    ValidationError,
    model_validator,
)

from ..constants import SYMMETRY_ACCEPTANCE, VERDICT_RELATIVE_TOLERANCE
from .errors import InputError


def as_square_matrix(value) -> np.ndarray:
    """
    Convert nested rows (or an array) into a read-only float ``n x n`` matrix.
    """
    try:
        matrix = np.array(value, dtype=float)
    except (TypeError, ValueError) as e:
        raise InputError(f"Matrix entries must be real numbers: {e}") from e
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise InputError(f"Expected a non-empty square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InputError("Matrix entries must be finite")
    matrix.flags.writeable = False
    return matrix


def _project(value, sign: int, name: str) -> np.ndarray:
    matrix = as_square_matrix(value)
    distance = np.linalg.norm(matrix - sign * matrix.T)
    if distance > SYMMETRY_ACCEPTANCE:
        raise InputError(
            f"Matrix is {distance:.3g} away from being {name} (accepted: {SYMMETRY_ACCEPTANCE:g})"
        )
    projected = (matrix + sign * matrix.T) / 2
    projected.flags.writeable = False
    return projected


def symmetric_matrix(value) -> np.ndarray:
    return _project(value, 1, "symmetric")


def skew_matrix(value) -> np.ndarray:
    return _project(value, -1, "skew-symmetric")


RealSquareMatrix = Annotated[np.ndarray, BeforeValidator(as_square_matrix)]
SymmetricMatrix = Annotated[np.ndarray, BeforeValidator(symmetric_matrix)]
SkewMatrix = Annotated[np.ndarray, BeforeValidator(skew_matrix)]


def verdict_tolerance(lhs, rhs):
    """Strictness threshold of ``lhs < rhs``; works elementwise on arrays."""
    return VERDICT_RELATIVE_TOLERANCE * np.maximum(
        1.0, np.maximum(np.abs(lhs), np.abs(rhs))
    )


class GramstabModel(BaseModel):
    """
    Base of the domain types. Rejected field values surface as ``InputError``.
    """

    def __init__(self, /, **data: Any):
        try:
            super().__init__(**data)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"]) or "value"
            raise InputError(
                f"Invalid {type(self).__name__} ({location}): {first['msg']}"
            ) from e


class Classification(IntEnum):
    CONSERVATIVE = 1
    GYROSCOPIC_CONSERVATIVE = 2
    DAMPED_NON_GYROSCOPIC = 3
    CIRCULATORY = 4
    CONSTRAINT_DAMPING = 5
    GENERAL = 6

    @property
    def safe_name(self):
        return self.name.lower().replace("_", "-")


class Context(IntEnum):
    CIRCULATORY = 1
    GYROSCOPIC = 2
    MATRIX = 3
    POLY = 4

    @property
    def safe_name(self):
        return self.name.lower()

    @property
    def is_system(self) -> bool:
        return self in (Context.CIRCULATORY, Context.GYROSCOPIC)


class Family(IntEnum):
    CIRCULATORY3 = 1
    CHARGED_PARTICLE = 2

    @property
    def safe_name(self):
        return self.name.lower().replace("_", "-")

    @classmethod
    def from_safe_name(cls, name):
        return cls[name.upper().replace("-", "_")]


class MonicPolynomial(GramstabModel):
    """
    Real monic polynomial ``x^n + a_1 x^(n-1) + ... + a_n``.
    Only ``a_1..a_n`` are stored; the leading one is implicit.
    """

    model_config = ConfigDict(frozen=True)

    coeffs: tuple[float, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_finite(self) -> Self:
        if not all(isfinite(a) for a in self.coeffs):
            raise InputError("Polynomial coefficients must be finite")
        return self

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def as_array(self) -> np.ndarray:
        """Coefficients highest power first, leading one included (numpy.polyval order)."""
        return np.concatenate(([1.0], np.asarray(self.coeffs, dtype=float)))

    @classmethod
    def from_roots(cls, roots) -> "MonicPolynomial":
        coeffs = np.poly(np.asarray(roots))
        return cls(coeffs=tuple(float(a) for a in np.real(coeffs[1:])))


class PowerSums(GramstabModel):
    """
    Root power sums ``s_1..s_max`` of a polynomial with ``n`` roots (``s_0 = n``).
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    values: tuple[float, ...] = Field(..., min_length=1)
    # max |Im| of each sum, when computed from explicit roots
    residues: tuple[float, ...] | None = None
    # second computation path, when one exists (trace identities)
    cross_check: tuple[float, ...] | None = None

    @model_validator(mode="after")
    def check_finite(self) -> Self:
        if not all(isfinite(s) for s in self.values):
            raise InputError("Power sums must be finite")
        return self

    @property
    def max(self) -> int:
        return len(self.values)

    def s(self, k: int) -> float:
        if k == 0:
            return float(self.n)
        if not 1 <= k <= self.max:
            raise InputError(f"Power sum s_{k} not available (computed up to s_{self.max})")
        return self.values[k - 1]


class CriterionVerdict(GramstabModel):
    """
    One evaluated strict inequality ``lhs < rhs``.
    """

    model_config = ConfigDict(frozen=True)

    id: str
    lhs: float
    rhs: float
    margin: float
    fired: bool
    tolerance: float = Field(..., ge=0)

    @model_validator(mode="after")
    def check_fired(self) -> Self:
        if self.fired != (self.margin > self.tolerance):
            raise ValueError("`fired` must equal `margin > tolerance`")
        return self

    @classmethod
    def evaluate(
        cls, id: str, lhs: float, rhs: float, tolerance: float | None = None
    ) -> "CriterionVerdict":
        lhs, rhs = float(lhs), float(rhs)
        if tolerance is None:
            tolerance = float(verdict_tolerance(lhs, rhs))
        margin = rhs - lhs
        return cls(
            id=id,
            lhs=lhs,
            rhs=rhs,
            margin=margin,
            fired=margin > tolerance,
            tolerance=tolerance,
        )


class GramCertificate(GramstabModel):
    model_config = ConfigDict(frozen=True)

    indices: tuple[int, ...]
    value: float
    tolerance: float

    def as_verdict(self) -> CriterionVerdict:
        label = "gram-" + "-".join(str(i) for i in self.indices)
        return CriterionVerdict.evaluate(label, self.value, 0.0, self.tolerance)


class SymSkewSplit(GramstabModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sym: RealSquareMatrix
    skew: RealSquareMatrix


class CirculatorySystem(GramstabModel):
    """
    ``q'' + K q + C q = 0`` with ``K`` symmetric and ``C`` skew-symmetric.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    K: SymmetricMatrix
    C: SkewMatrix

    @model_validator(mode="after")
    def check_shapes(self) -> Self:
        if self.K.shape != self.C.shape:
            raise InputError(f"K {self.K.shape} and C {self.C.shape} differ in shape")
        return self

    @property
    def n(self) -> int:
        return self.K.shape[0]


class GyroscopicSystem(GramstabModel):
    """
    ``q'' + G q' + K q = 0`` with ``G`` skew-symmetric and ``K`` symmetric.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    G: SkewMatrix
    K: SymmetricMatrix

    @model_validator(mode="after")
    def check_shapes(self) -> Self:
        if self.G.shape != self.K.shape:
            raise InputError(f"G {self.G.shape} and K {self.K.shape} differ in shape")
        return self

    @property
    def n(self) -> int:
        return self.K.shape[0]


class NormalForm(GramstabModel):
    """
    ``q'' + (D + G) q' + (K + C) q = 0``, classified by which blocks vanish.
    Vanishing blocks are stored as exact zeros.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    D: SymmetricMatrix
    G: SkewMatrix
    K: SymmetricMatrix
    C: SkewMatrix
    classification: Classification

    def as_circulatory(self) -> CirculatorySystem:
        if self.D.any() or self.G.any():
            raise InputError(
                f"A {self.classification.safe_name} system with velocity terms is not circulatory"
            )
        return CirculatorySystem(K=self.K, C=self.C)

    def as_gyroscopic(self) -> GyroscopicSystem:
        if self.D.any() or self.C.any():
            raise InputError(
                f"A {self.classification.safe_name} system is not gyroscopic-conservative"
            )
        return GyroscopicSystem(G=self.G, K=self.K)


class GyroPowerSums(GramstabModel):
    model_config = ConfigDict(frozen=True)

    s2_p: float
    s4_p: float
    s1_q: float
    s2_q: float


class RootSet(GramstabModel):
    model_config = ConfigDict(frozen=True)

    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    method: str

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


class SpectralReport(GramstabModel):
    model_config = ConfigDict(frozen=True)

    has_nonreal: bool
    has_positive_real: bool
    witnesses: tuple[complex, ...] = ()
    roots: tuple[complex, ...] = ()


class ConsistencyReport(GramstabModel):
    model_config = ConfigDict(frozen=True)

    context: Context
    passed: bool
    violations: tuple[str, ...] = ()

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"
