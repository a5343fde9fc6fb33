"""Figure jobs: measurement helpers on synthetic signals, then each job's
summary checks and emitted files."""

import math

import numpy as np
import pytest

from polsim.figures import (
    FIDELITY_CASES,
    FIGURES,
    fit_decay_rate,
    modulation_period,
    reproduce,
    zero_crossing_period,
)


class TestHelpers:
    def test_decay_rate_on_synthetic(self):
        t = np.linspace(0, 40, 2000)
        y = np.exp(-0.1 * t) * (1 + 0.05 * np.cos(2 * t))
        assert fit_decay_rate(t, y) == pytest.approx(-0.1, rel=0.01)

    def test_modulation_period_on_synthetic(self):
        # carrier at 2 tau, harmonic envelope cos(0.05 tau): period 40 pi
        t = np.linspace(0, 300, 15001)
        y = np.cos(2 * t) * np.cos(0.05 * t)
        period, minima = modulation_period(t, y)
        assert period == pytest.approx(40 * math.pi, rel=0.02)
        assert len(minima) >= 2

    def test_zero_crossing_period(self):
        t = np.linspace(0, 20, 4001)
        assert zero_crossing_period(t, np.cos(2 * t)) == pytest.approx(math.pi, rel=1e-3)


class TestFig2(object):
    def test_summary(self, tmp_path):
        checks = reproduce("fig2", tmp_path)["checks"]
        assert checks["gamma_star_analytic"] == pytest.approx(1.0)
        assert checks["max_re_below_threshold"] < 1e-6
        assert checks["gamma_star_grid"] == pytest.approx(1.0, abs=0.01)
        header = (tmp_path / "fig2.csv").read_text().splitlines()[0]
        assert header == "gamma,re_l1,re_l2,re_l3,re_l4,im_l1,im_l2,im_l3,im_l4,class"


class TestFig3:
    def test_fig3b_envelope_rate(self, tmp_path):
        checks = reproduce("fig3b", tmp_path)["checks"]
        assert checks["envelope_rate"] == pytest.approx(-0.1, rel=0.02)

    def test_fig3d_modulation_period(self, tmp_path):
        checks = reproduce("fig3d", tmp_path)["checks"]
        assert checks["modulation_period_tau"] == pytest.approx(40 * math.pi, rel=0.05)

    def test_fig3c_is_qualitative(self, tmp_path):
        checks = reproduce("fig3c", tmp_path)["checks"]
        assert checks["qualitative"] is True
        assert len(checks["collapse_times"]) >= 1

    def test_fig3e_reports_deviation(self, tmp_path):
        checks = reproduce("fig3e", tmp_path)["checks"]
        assert checks["qualitative"] is True
        assert 0 <= checks["max_envelope_deviation_from_hermitian"] <= 1.0
        assert (tmp_path / "fig3e_hermitian.csv").exists()


class TestGateFigures:
    def test_fig4_fidelity(self, tmp_path):
        checks = reproduce("fig4", tmp_path)["checks"]
        assert checks["swap_fidelity_at_half_period"] == pytest.approx(0.982, abs=0.004)
        header = (tmp_path / "fig4.csv").read_text().splitlines()[0].split(",")
        assert len(header) == 33 and header[0] == "tau"

    def test_table1_reference_vs_integration(self, tmp_path):
        checks = reproduce("table1", tmp_path)["checks"]
        assert checks["max_deviation_from_integrated"] < 1e-7

    def test_fidelity_table_rows(self, tmp_path):
        checks = reproduce("fidelity-table", tmp_path)["checks"]
        fids = checks["fidelities"]
        assert len(fids) == len(FIDELITY_CASES) == 8
        lines = (tmp_path / "fidelity_table.csv").read_text().splitlines()
        assert len(lines) == 9


class TestRegistry:
    def test_ids(self):
        assert set(FIGURES) == {"fig2", "fig3a", "fig3b", "fig3c", "fig3d",
                                "fig3e", "fig4", "table1", "fidelity-table"}

    def test_unknown_id_raises(self, tmp_path):
        with pytest.raises(KeyError):
            reproduce("fig7", tmp_path)
