import time

import numpy as np
import pandas as pd
import pytest

from gramstab.core import Family, InputError
from gramstab.sweep import (
    DEFAULT_CRITERIA,
    SweepConfig,
    closed_form_disagreements,
    emit_csv,
    emit_svg,
    evaluate_cell,
    run_sweep,
)


def circulatory_config(**overrides) -> SweepConfig:
    values = dict(family="circulatory3", k_min=-3, k_max=3, c_min=-3, c_max=3, nk=7, nc=7)
    return SweepConfig(**(values | overrides))


def test_config_defaults():
    cfg = SweepConfig(family="charged-particle")
    assert cfg.family == Family.CHARGED_PARTICLE
    assert cfg.criteria == DEFAULT_CRITERIA[Family.CHARGED_PARTICLE]
    assert (cfg.k_min, cfg.k_max, cfg.nk, cfg.nc) == (-3.0, 3.0, 401, 401)
    assert not cfg.oracle


@pytest.mark.parametrize(
    "overrides",
    [
        {"k_min": 3, "k_max": -3},
        {"c_min": 1, "c_max": 1},
        {"nk": 1},
        {"criteria": ("thm4",)},
        {"criteria": ("thm2-i", "thm2-i")},
        {"family": "pendulum"},
    ],
)
def test_invalid_config(overrides):
    with pytest.raises(InputError):
        circulatory_config(**overrides)


def test_circulatory_reference_cell():
    result = run_sweep(circulatory_config(), workers=1)
    assert len(result.records) == 49
    # row-major: k index 3 is k = 0, c index 4 is c = 1
    cell = result.records[3 * 7 + 4]
    assert (cell.k, cell.c) == (0.0, 1.0)
    assert cell.fired[0]
    assert result.fired_grid("thm2-i")[3, 4]


def test_charged_particle_half_plane():
    cfg = SweepConfig(
        family="charged-particle", k_min=-3, k_max=-0.03, c_min=0.03, c_max=3, nk=21, nc=21
    )
    result = run_sweep(cfg, workers=1)
    assert not result.fired_grid("thm4").any()
    assert result.fired_grid("prop2-ii").any()
    assert result.fired_grid("prop2-iii").any()
    assert not any(r.degenerate for r in result.records)


def test_charged_particle_reference_cell():
    cfg = SweepConfig(family="charged-particle", criteria=("prop2-ii", "prop2-iii"))
    cell = evaluate_cell(cfg, -1.0, 1.0)
    assert cell.fired == (False, True)
    assert cell.error is None


def test_degenerate_axes_flagged():
    cfg = SweepConfig(family="charged-particle", nk=3, nc=3)
    result = run_sweep(cfg, workers=1)
    flagged = {(r.k, r.c) for r in result.records if r.degenerate}
    assert flagged == {(k, c) for k in (-3.0, 0.0, 3.0) for c in (-3.0, 0.0, 3.0) if k * c == 0}


@pytest.mark.parametrize("family", ["circulatory3", "charged-particle"])
def test_default_grid_agrees_with_closed_forms(family):
    cfg = SweepConfig(family=family)
    started = time.perf_counter()
    result = run_sweep(cfg, workers=1)
    elapsed = time.perf_counter() - started
    assert len(result.records) == 401 * 401
    assert elapsed < 5.0
    assert set(closed_form_disagreements(result).values()) == {0}
    assert not any(r.error for r in result.records)
    if cfg.family == Family.CHARGED_PARTICLE:
        assert not result.fired_grid("thm4").any()


@pytest.mark.parametrize(
    "family, criteria",
    [
        ("circulatory3", ("thm2-i", "thm2-ii", "thm2-iii", "rmk-ii-alt", "cor-i", "cor-ii")),
        ("charged-particle", ("thm4", "prop2-i", "prop2-ii", "prop2-iii")),
    ],
)
def test_grid_matches_single_cells(family, criteria):
    cfg = SweepConfig(family=family, nk=7, nc=7, criteria=criteria)
    result = run_sweep(cfg, workers=1)
    for record in result.records:
        cell = evaluate_cell(cfg, record.k, record.c)
        assert record.fired == cell.fired, (record.k, record.c)
        assert record.margins == pytest.approx(cell.margins, rel=1e-9, abs=1e-9)
        assert record.degenerate == cell.degenerate
        assert record.error is None


def test_refinement_keeps_coinciding_nodes():
    coarse = run_sweep(circulatory_config(nk=9, nc=9), workers=1)
    fine = run_sweep(circulatory_config(nk=17, nc=17), workers=1)
    np.testing.assert_array_equal(coarse.config.k_values(), fine.config.k_values()[::2])
    for criterion in coarse.config.criteria:
        np.testing.assert_array_equal(
            coarse.fired_grid(criterion), fine.fired_grid(criterion)[::2, ::2]
        )


def test_oracle_confirms_fired_cells():
    result = run_sweep(circulatory_config(nk=9, nc=9, oracle=True), workers=1)
    for record in result.records:
        if any(record.fired):
            assert record.oracle_unstable is True
        assert record.error is None


def test_csv_is_independent_of_workers(tmp_path):
    cfg = circulatory_config(nk=12, nc=9, oracle=True)
    serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
    emit_csv(run_sweep(cfg, workers=1), serial)
    emit_csv(run_sweep(cfg, workers=3), parallel)
    assert serial.read_bytes() == parallel.read_bytes()


def test_csv_layout(tmp_path):
    destination = tmp_path / "cells.csv"
    result = run_sweep(circulatory_config(oracle=True), workers=1)
    emit_csv(result, destination)
    text = destination.read_text(encoding="utf-8")
    lines = text.split("\n")
    assert lines[0] == "k,c,thm2_i,thm2_ii,thm2_iii,oracle_unstable"
    assert len(lines) == 49 + 2 and lines[-1] == ""
    assert "\r" not in text

    frame = pd.read_csv(destination)
    for name in result.config.criteria:
        column = frame[name.replace("-", "_")].to_numpy().reshape(7, 7)
        np.testing.assert_array_equal(column.astype(bool), result.fired_grid(name))
    np.testing.assert_array_equal(frame["k"].to_numpy(), [r.k for r in result.records])


def test_csv_small_grid(tmp_path):
    destination = tmp_path / "cells.csv"
    cfg = circulatory_config(
        k_min=0, k_max=1, c_min=0, c_max=2, nk=2, nc=2, criteria=("thm2-i",)
    )
    emit_csv(run_sweep(cfg, workers=1), destination)
    assert destination.read_text().splitlines() == [
        "k,c,thm2_i",
        "0,0,0",
        "0,2,1",
        "1,0,0",
        "1,2,1",
    ]


def test_svg_written(tmp_path):
    destination = tmp_path / "regions.svg"
    emit_svg(run_sweep(circulatory_config(oracle=True), workers=1), destination)
    text = destination.read_text(encoding="utf-8")
    assert "<svg" in text


def test_svg_without_fired_cells(tmp_path):
    destination = tmp_path / "empty.svg"
    cfg = SweepConfig(
        family="charged-particle",
        k_min=-3,
        k_max=-1,
        c_min=1,
        c_max=3,
        nk=4,
        nc=4,
        criteria=("thm4",),
    )
    result = run_sweep(cfg, workers=1)
    assert not result.fired_grid("thm4").any()
    emit_svg(result, destination)
    assert "<svg" in destination.read_text(encoding="utf-8")
