from .emit import emit_csv, emit_svg, to_frame
from .engine import (
    CRITERIA,
    DEFAULT_CRITERIA,
    CellRecord,
    SweepConfig,
    SweepResult,
    closed_form_disagreements,
    evaluate_cell,
    run_sweep,
)

__all__ = (
    "CRITERIA",
    "DEFAULT_CRITERIA",
    "CellRecord",
    "SweepConfig",
    "SweepResult",
    "closed_form_disagreements",
    "emit_csv",
    "emit_svg",
    "evaluate_cell",
    "run_sweep",
    "to_frame",
)
