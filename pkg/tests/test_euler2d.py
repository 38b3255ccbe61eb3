"""End-to-end 2D vorticity runs: the driver-level corrector contracts."""

import numpy as np
import pytest

from invariant_guard import correctors as co
from invariant_guard.core import (FvField2D, UniformGrid2D, VorticityState2D,
                                  bracket)
from invariant_guard.drivers import Vorticity2D
from invariant_guard.problems import ic_random_vorticity
from invariant_guard.schemes import poisson_solve
from invariant_guard.timeloop import StepPlan, run


@pytest.fixture(scope="module")
def ic32():
    return ic_random_vorticity(UniformGrid2D(32, 32, 2 * np.pi, 2 * np.pi),
                               seed=12)


def test_plain_muscl_decays_energy_and_enstrophy(ic32):
    tr = run(StepPlan(t_end=0.5, cfl=0.3, n_snapshots=6), Vorticity2D(ic32))
    energy = np.array([r.energy for r in tr.reports])
    enstrophy = np.array([r.enstrophy for r in tr.reports])
    assert np.all(np.diff(energy) <= 1e-12 * energy[0])
    assert np.all(np.diff(enstrophy) <= 1e-12 * enstrophy[0])
    masses = np.array([r.mass for r in tr.reports])
    assert np.abs(masses - masses[0]).max() <= 1e-12


def test_energy_corrector_per_stage_and_integrated(ic32):
    tr = run(StepPlan(t_end=0.5, cfl=0.3, n_snapshots=6),
             Vorticity2D(ic32, corrector="energy", target=co.L2RateTarget.clamp()))
    for rec in tr.stage_records:
        assert abs(rec.extra["energy_bracket"]) <= \
            1e-12 * max(rec.extra["energy_scale"], 1e-30)
        assert rec.achieved_rate <= 1e-12 * max(abs(rec.old_rate), 1.0)
    # integrated drift is the RK3 residual; at this coarse 32^2 grid it sits
    # near 1e-6 (the acceptance-level 1e-6 bound is checked at 64^2)
    energy = np.array([r.energy for r in tr.reports])
    assert np.abs(energy / energy[0] - 1.0).max() <= 5e-6


def test_enstrophy_zero_with_step_chain(ic32):
    tr = run(StepPlan(t_end=0.5, cfl=0.3, n_snapshots=6),
             Vorticity2D(ic32, corrector="flux_l2",
                         target=co.L2RateTarget.fixed(0.0), step_delta_l2=0.0))
    enstrophy = np.array([r.enstrophy for r in tr.reports])
    assert np.abs(enstrophy / enstrophy[0] - 1.0).max() <= 1e-12
    masses = np.array([r.mass for r in tr.reports])
    assert np.abs(masses - masses[0]).max() <= 1e-12


def test_forcing_and_viscosity_break_invariants_but_run(ic32):
    tr = run(StepPlan(t_end=0.2, cfl=0.3, n_snapshots=3),
             Vorticity2D(ic32, corrector="energy", target=co.L2RateTarget.clamp(),
                         nu=1e-3, forcing=True))
    assert tr.error is None
    # forcing injects energy: the corrector guards only the inviscid terms
    assert np.all(np.isfinite(tr.snapshot_array()))


def test_stage_records_carry_rates(ic32):
    tr = run(StepPlan(t_end=0.1, cfl=0.3, n_snapshots=2),
             Vorticity2D(ic32, corrector="flux_l2",
                         target=co.L2RateTarget.fixed(-0.05)))
    kinds = {rec.kind for rec in tr.stage_records}
    assert kinds == {"l2_x", "l2_y"}
    for rec in tr.stage_records:
        assert rec.achieved_rate == pytest.approx(rec.target_rate, rel=1e-10,
                                                  abs=1e-12)
