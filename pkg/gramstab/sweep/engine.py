from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Self

import numpy as np
from loguru import logger
from pydantic import ConfigDict, Field, field_validator, model_validator

from ..constants import (
    CLOSED_FORM_BAND,
    DEFAULT_SWEEP_RANGE,
    DEFAULT_SWEEP_RESOLUTION,
    WORKERS,
)
from ..core import (
    CirculatorySystem,
    Context,
    CriterionVerdict,
    Family,
    GramstabException,
    check_sufficiency,
    circulatory_verdicts,
    closed_forms,
    family_system,
    gyroscopic_prop2_verdicts,
    gyroscopic_verdict_thm4,
    verify_instability,
)
from ..core.mech import (
    charged_particle_matrices,
    circulatory3_matrices,
    circulatory_inequalities,
    gyroscopic_inequality_thm4,
    stacked_reduced_coefficients,
)
from ..core.models import GramstabModel, verdict_tolerance
from ..core.polycrit import prop2_inequalities

CRITERIA: dict[Family, tuple[str, ...]] = {
    Family.CIRCULATORY3: ("thm2-i", "thm2-ii", "thm2-iii", "rmk-ii-alt", "cor-i", "cor-ii"),
    Family.CHARGED_PARTICLE: ("thm4", "prop2-i", "prop2-ii", "prop2-iii"),
}
DEFAULT_CRITERIA: dict[Family, tuple[str, ...]] = {
    Family.CIRCULATORY3: ("thm2-i", "thm2-ii", "thm2-iii"),
    Family.CHARGED_PARTICLE: ("thm4", "prop2-ii", "prop2-iii"),
}
INCONSISTENT_CELL = "reduced polynomial failed its consistency checks"


def _as_family(value):
    if isinstance(value, str):
        try:
            return Family.from_safe_name(value)
        except KeyError:
            raise ValueError(f"Unknown family {value!r}")
    return value


class SweepConfig(GramstabModel):
    model_config = ConfigDict(frozen=True)

    family: Family
    k_min: float = Field(DEFAULT_SWEEP_RANGE[0], allow_inf_nan=False)
    k_max: float = Field(DEFAULT_SWEEP_RANGE[1], allow_inf_nan=False)
    c_min: float = Field(DEFAULT_SWEEP_RANGE[0], allow_inf_nan=False)
    c_max: float = Field(DEFAULT_SWEEP_RANGE[1], allow_inf_nan=False)
    nk: int = Field(DEFAULT_SWEEP_RESOLUTION, ge=2)
    nc: int = Field(DEFAULT_SWEEP_RESOLUTION, ge=2)
    criteria: tuple[str, ...] = ()
    oracle: bool = False

    @field_validator("family", mode="before")
    def parse_family(cls, value):
        return _as_family(value)

    @model_validator(mode="before")
    def default_criteria(cls, values: Any):
        if isinstance(values, dict) and not values.get("criteria"):
            family = _as_family(values.get("family"))
            if isinstance(family, Family):
                values = {**values, "criteria": DEFAULT_CRITERIA[family]}
        return values

    @model_validator(mode="after")
    def check_window(self) -> Self:
        if not self.k_min < self.k_max:
            raise ValueError("`k_min` must be below `k_max`.")
        if not self.c_min < self.c_max:
            raise ValueError("`c_min` must be below `c_max`.")
        unknown = set(self.criteria).difference(CRITERIA[self.family])
        if unknown:
            raise ValueError(
                f"Criteria {sorted(unknown)} are not available for {self.family.safe_name}"
            )
        if len(set(self.criteria)) != len(self.criteria):
            raise ValueError("Criteria must not repeat.")
        return self

    def k_values(self) -> np.ndarray:
        # node i is k_min + i * step so refined grids reproduce coarse nodes exactly
        step = (self.k_max - self.k_min) / (self.nk - 1)
        return self.k_min + np.arange(self.nk) * step

    def c_values(self) -> np.ndarray:
        step = (self.c_max - self.c_min) / (self.nc - 1)
        return self.c_min + np.arange(self.nc) * step


class CellRecord(GramstabModel):
    model_config = ConfigDict(frozen=True)

    k: float
    c: float
    fired: tuple[bool, ...]
    margins: tuple[float, ...]
    oracle_unstable: bool | None = None
    degenerate: bool = False
    error: str | None = None


class SweepResult(GramstabModel):
    model_config = ConfigDict(frozen=True)

    config: SweepConfig
    records: tuple[CellRecord, ...]

    @model_validator(mode="after")
    def check_size(self) -> Self:
        if len(self.records) != self.config.nk * self.config.nc:
            raise ValueError("A sweep result holds exactly nk * nc records.")
        return self

    def fired_grid(self, criterion: str) -> np.ndarray:
        """``(nk, nc)`` boolean grid of cells where ``criterion`` fired."""
        index = self.config.criteria.index(criterion)
        flags = [record.fired[index] for record in self.records]
        return np.array(flags, dtype=bool).reshape(self.config.nk, self.config.nc)

    def oracle_grid(self) -> np.ndarray:
        flags = [bool(record.oracle_unstable) for record in self.records]
        return np.array(flags, dtype=bool).reshape(self.config.nk, self.config.nc)


def _verdicts(cfg: SweepConfig, system) -> dict[str, CriterionVerdict]:
    if isinstance(system, CirculatorySystem):
        return {v.id: v for v in circulatory_verdicts(system)}
    verdicts = {"thm4": gyroscopic_verdict_thm4(system)}
    if any(c.startswith("prop2") for c in cfg.criteria):
        verdicts.update({v.id: v for v in gyroscopic_prop2_verdicts(system)})
    return verdicts


def evaluate_cell(cfg: SweepConfig, k: float, c: float) -> CellRecord:
    k, c = float(k), float(c)
    system = family_system(cfg.family, k, c)
    excluded = cfg.family == Family.CHARGED_PARTICLE and (k == 0.0 or c == 0.0)
    errors = []
    try:
        verdicts = _verdicts(cfg, system)
        selected = [verdicts[name] for name in cfg.criteria]
        fired = tuple(v.fired for v in selected)
        margins = tuple(v.margin for v in selected)
    except GramstabException as e:
        logger.error("Cell (k={}, c={}) failed: {}", k, c, e)
        selected = []
        fired = (False,) * len(cfg.criteria)
        margins = (float("nan"),) * len(cfg.criteria)
        errors.append(str(e))

    unstable = None
    if cfg.oracle:
        try:
            report = verify_instability(system)
            unstable = report.has_positive_real
            context = (
                Context.CIRCULATORY
                if isinstance(system, CirculatorySystem)
                else Context.GYROSCOPIC
            )
            consistency = check_sufficiency(selected, report, context)
            if not consistency.passed:
                errors.append(f"refuted by the oracle: {', '.join(consistency.violations)}")
        except GramstabException as e:
            logger.warning("Oracle failed at (k={}, c={}): {}", k, c, e)
            errors.append(str(e))

    return CellRecord(
        k=k,
        c=c,
        fired=fired,
        margins=margins,
        oracle_unstable=unstable,
        degenerate=excluded,
        error="; ".join(errors) or None,
    )


def _grid_inequalities(cfg: SweepConfig, k: np.ndarray, c: np.ndarray):
    """
    ``(lhs, rhs)`` arrays of every available criterion over the cells ``(k, c)``,
    and a mask of cells whose reduced polynomial failed its consistency checks.
    """
    failed = np.zeros(k.shape, dtype=bool)
    match cfg.family:
        case Family.CIRCULATORY3:
            inequalities = circulatory_inequalities(*circulatory3_matrices(k, c))
        case Family.CHARGED_PARTICLE:
            G, K = charged_particle_matrices(k, c)
            inequalities = {"thm4": gyroscopic_inequality_thm4(G, K)}
            if any(name.startswith("prop2") for name in cfg.criteria):
                coeffs, failed = stacked_reduced_coefficients(G, K)
                inequalities.update(prop2_inequalities(coeffs))
    return inequalities, failed


def _evaluate_block(cfg: SweepConfig, rows: range) -> list[CellRecord]:
    grid_k, grid_c = np.meshgrid(
        cfg.k_values()[rows.start : rows.stop], cfg.c_values(), indexing="ij"
    )
    k, c = grid_k.ravel(), grid_c.ravel()
    inequalities, failed = _grid_inequalities(cfg, k, c)

    fired, margins = [], []
    for name in cfg.criteria:
        lhs, rhs = inequalities[name]
        margin = rhs - lhs
        fired.append((margin > verdict_tolerance(lhs, rhs)) & ~failed)
        margins.append(np.where(failed, np.nan, margin))
    fired = np.stack(fired, axis=-1).tolist()
    margins = np.stack(margins, axis=-1).tolist()
    if cfg.family == Family.CHARGED_PARTICLE:
        degenerate = ((k == 0.0) | (c == 0.0)).tolist()
    else:
        degenerate = [False] * len(k)
    if failed.any():
        logger.error("Reduced polynomial failed its checks in {} cells", int(failed.sum()))

    return [
        CellRecord.model_construct(
            k=cell_k,
            c=cell_c,
            fired=tuple(cell_fired),
            margins=tuple(cell_margins),
            oracle_unstable=None,
            degenerate=cell_degenerate,
            error=INCONSISTENT_CELL if cell_failed else None,
        )
        for cell_k, cell_c, cell_fired, cell_margins, cell_degenerate, cell_failed in zip(
            k.tolist(), c.tolist(), fired, margins, degenerate, failed.tolist()
        )
    ]


def _evaluate_rows(cfg: SweepConfig, rows: range) -> list[CellRecord]:
    if not cfg.oracle:
        return _evaluate_block(cfg, rows)
    ks, cs = cfg.k_values(), cfg.c_values()
    return [evaluate_cell(cfg, ks[i], cs[j]) for i in rows for j in range(cfg.nc)]


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> SweepResult:
    """
    Evaluate every grid node. Rows are handed to ``workers`` processes in chunks
    and written back into a row-major buffer by position. Without the oracle a
    chunk is evaluated as one array computation, with it cell by cell.
    """
    workers = max(1, workers or WORKERS)
    buffer: list[CellRecord | None] = [None] * (cfg.nk * cfg.nc)
    chunk = max(1, cfg.nk // (4 * workers))
    chunks = [range(start, min(start + chunk, cfg.nk)) for start in range(0, cfg.nk, chunk)]

    def place(rows: range, records: list[CellRecord]):
        offset = rows.start * cfg.nc
        buffer[offset : offset + len(records)] = records

    if workers == 1:
        for rows in chunks:
            place(rows, _evaluate_rows(cfg, rows))
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(_evaluate_rows, cfg, rows): rows for rows in chunks}
            for future in as_completed(futures):
                place(futures[future], future.result())

    result = SweepResult(config=cfg, records=tuple(buffer))
    counts = {name: int(result.fired_grid(name).sum()) for name in cfg.criteria}
    logger.info(
        "Swept {} over {}x{} cells with {} worker(s); fired cells: {}",
        cfg.family.safe_name,
        cfg.nk,
        cfg.nc,
        workers,
        counts,
    )
    return result


def closed_form_disagreements(result: SweepResult) -> dict[str, int]:
    """
    Cells outside the closed-form band whose fired flag differs from the sign of
    the family's region polynomial.
    """
    cfg = result.config
    forms = closed_forms(cfg.family)
    K, C = np.meshgrid(cfg.k_values(), cfg.c_values(), indexing="ij")
    counts = {}
    for name in cfg.criteria:
        if name not in forms:
            continue
        values = forms[name](K, C)
        outside = np.abs(values) > CLOSED_FORM_BAND
        counts[name] = int(np.sum(outside & (result.fired_grid(name) != (values > 0))))
        if counts[name]:
            logger.warning("{} disagrees with its closed form in {} cells", name, counts[name])
    return counts
