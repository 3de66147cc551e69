import logging
import math

import numpy as np
import pytest

from hulthen.analytic import transmission
from hulthen.errors import ParameterError, SweepError
from hulthen.potential import HulthenParams
from hulthen.sweep import (
    ParamAxis,
    SweepSpec,
    SweepTable,
    SweepRow,
    SweepVariable,
    find_resonances,
    run_sweep,
    width_trend,
)


def lorentz_solver(center, width, height=1.0, background=0.05):
    """Synthetic T curve with a known peak and exact FWHM."""

    def solve(x):
        t = background + (height - background) / (1 + ((x - center) / (0.5 * width)) ** 2)
        return 1 - t, t

    return solve


def table_from(solver, xs, fixed):
    spec = SweepSpec(SweepVariable.ENERGY, float(xs[0]), float(xs[-1]), len(xs), fixed)
    rows = [SweepRow(float(x), *solver(float(x)), 0.0) for x in xs]
    return SweepTable(spec, rows)


def test_energy_sweep_matches_pointwise(tall_narrow):
    spec = SweepSpec(SweepVariable.ENERGY, 1.5, 3.0, 7, tall_narrow)
    table = run_sweep(spec)
    assert table.independent.tolist() == np.linspace(1.5, 3.0, 7).tolist()
    for row in table.rows:
        assert row.trans == transmission(row.independent, tall_narrow)[1]
        assert row.unitarity_defect <= 1e-8


def test_strength_sweep_starts_free(tall_narrow):
    spec = SweepSpec(SweepVariable.STRENGTH, 0.0, 2.0, 5, tall_narrow, energy=2.0)
    table = run_sweep(spec)
    assert table.rows[0].trans == 1.0 and table.rows[0].refl == 0.0
    assert table.rows[1].trans == transmission(2.0, HulthenParams(0.5, 1.0, 0.9))[1]


def test_parallel_sweep_is_identical(tall_narrow):
    spec = SweepSpec(SweepVariable.ENERGY, 1.1, 4.0, 40, tall_narrow)
    assert run_sweep(spec, workers=2).rows == run_sweep(spec).rows


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(variable="energy", start=1.0, stop=2.0, points=10),
        dict(variable="energy", start=2.0, stop=1.5, points=10),
        dict(variable="energy", start=1.5, stop=2.0, points=1),
        dict(variable="strength", start=-1.0, stop=2.0, points=10, energy=2.0),
        dict(variable="strength", start=0.0, stop=2.0, points=10),
        dict(variable="strength", start=0.0, stop=2.0, points=10, energy=0.5),
    ],
)
def test_invalid_sweeps_rejected(tall_narrow, kwargs):
    with pytest.raises(ParameterError):
        SweepSpec(fixed=tall_narrow, **kwargs)


def test_failures_recorded_and_logged(tall_narrow, monkeypatch, caplog):
    from hulthen import sweep as sweep_mod
    from hulthen.errors import ConvergenceError

    real = sweep_mod.transmission

    def flaky(energy, pot, branch):
        if abs(energy - 2.0) < 1e-9:
            raise ConvergenceError("synthetic")
        return real(energy, pot, branch)

    monkeypatch.setattr(sweep_mod, "transmission", flaky)
    with caplog.at_level(logging.WARNING):
        table = run_sweep(SweepSpec(SweepVariable.ENERGY, 1.5, 2.5, 11, tall_narrow))
    assert len(table.rows) == 10
    assert [f.independent for f in table.failures] == [2.0]
    assert "synthetic" in caplog.text


def test_too_many_failures_abort(tall_narrow, monkeypatch):
    from hulthen import sweep as sweep_mod
    from hulthen.errors import ConvergenceError

    def broken(*args):
        raise ConvergenceError("synthetic")

    monkeypatch.setattr(sweep_mod, "transmission", broken)
    with pytest.raises(SweepError):
        run_sweep(SweepSpec(SweepVariable.ENERGY, 1.5, 2.5, 11, tall_narrow))


def test_synthetic_lorentzian_recovered(tall_narrow):
    solver = lorentz_solver(2.3456789, 0.04)
    table = table_from(solver, np.linspace(1.5, 3.5, 201), tall_narrow)
    (res,) = find_resonances(table, solver=solver)
    assert res.position == pytest.approx(2.3456789, abs=1e-7)
    assert res.height == pytest.approx(1.0, abs=1e-12)
    assert res.reaches_unity
    # half level sits between the peak and the background base
    level = 0.5 * (1 + solver(1.5)[1])
    expected = 0.04 * math.sqrt((1 - 0.05) / (level - 0.05) - 1)
    assert res.fwhm == pytest.approx(expected, rel=1e-6)


def test_narrow_peak_between_grid_points(tall_narrow):
    # narrower than the grid spacing: the grid sees only the shoulders
    solver = lorentz_solver(2.0037, 0.004)
    table = table_from(solver, np.linspace(1.5, 2.5, 101), tall_narrow)
    (res,) = find_resonances(table, solver=solver)
    assert res.position == pytest.approx(2.0037, abs=1e-7)
    assert 0.002 < res.fwhm < 0.006


def test_flat_table_is_degenerate(tall_narrow):
    solver = lambda x: (0.25, 0.75)
    found = find_resonances(table_from(solver, np.linspace(1.5, 2.5, 50), tall_narrow), solver=solver)
    assert found == [] and found.degenerate


def test_small_bumps_below_prominence_ignored(tall_narrow):
    solver = lambda x: (0.0, 0.5 + 0.01 * math.sin(20 * x))
    found = find_resonances(table_from(solver, np.linspace(1.5, 2.5, 200), tall_narrow), solver=solver)
    assert found == [] and not found.degenerate


@pytest.mark.parametrize("prominence", [0.0, 1.0, -0.1])
def test_bad_prominence(tall_narrow, prominence):
    solver = lorentz_solver(2.0, 0.1)
    with pytest.raises(ParameterError):
        find_resonances(table_from(solver, np.linspace(1.5, 2.5, 20), tall_narrow), prominence)


def test_real_resonances_sorted_with_unit_height(tall_narrow):
    table = run_sweep(SweepSpec(SweepVariable.ENERGY, 1.05, 4.0, 300, tall_narrow))
    found = find_resonances(table)
    positions = [r.position for r in found]
    assert positions == sorted(positions)
    assert found[0].position == pytest.approx(1.2421, abs=1e-3)
    assert found[0].reaches_unity
    for r in found:
        assert r.fwhm > 0
        assert transmission(r.position, tall_narrow)[1] >= table.trans.max() - 1e-12


def test_width_trend_diffuseness():
    sweep = SweepSpec(SweepVariable.ENERGY, 1.05, 3.0, 300, HulthenParams(4, 1, 0.9))
    trend = width_trend(ParamAxis.DIFFUSENESS, [HulthenParams(4, 0.5, 0.9), HulthenParams(4, 1, 0.9)], sweep)
    (a_small, w_small), (a_big, w_big) = trend
    assert (a_small, a_big) == (0.5, 1.0)
    assert w_small < w_big


def test_width_trend_requires_common_strength():
    sweep = SweepSpec(SweepVariable.ENERGY, 1.05, 3.0, 50, HulthenParams(4, 1, 0.9))
    with pytest.raises(ParameterError):
        width_trend("a", [HulthenParams(4, 0.5, 0.9), HulthenParams(3, 1, 0.9)], sweep)


def test_width_trend_without_resonance():
    sweep = SweepSpec(SweepVariable.ENERGY, 50.0, 60.0, 20, HulthenParams(4, 1, 0.9))
    with pytest.raises(SweepError):
        width_trend("q", [HulthenParams(4, 1, 0.9)], sweep)
