import numpy as np
import pytest

from conftest import METHODS, preset_dataset, sine_pop
from floqplot.checks import run_checks
from floqplot.spec import SpecError


def all_pass(results):
    return all(r.ok for r in results)


def failed_names(results):
    return [r.name for r in results if not r.ok]


class TestFig2:
    def make(self, tmp_path, fsh_pop=0.8805):
        t = np.arange(0.0, 400.0 + 1e-9, 0.2)
        groups = {
            "": {
                "FQME": dict(t=t, pop=np.full(len(t), 0.8808), ekin=0.5037),
                "FaQME": dict(t=t, pop=np.full(len(t), 0.8808), ekin=0.5037),
                "FSH": dict(t=t, pop=np.full(len(t), fsh_pop), pop_err=0.003, ekin=0.501, ekin_err=0.005),
                "FaSH": dict(t=t, pop=np.full(len(t), 0.8802), pop_err=0.003, ekin=0.499, ekin_err=0.005),
                "FaSH-density": dict(t=t, pop=np.full(len(t), 0.8812), pop_err=0.002, ekin=0.502, ekin_err=0.005),
            }
        }
        return preset_dataset(tmp_path, "fig2", groups)

    def test_shared_steady_state_passes(self, tmp_path):
        self.make(tmp_path)
        results = run_checks("fig2", str(tmp_path))
        assert len(results) == 10  # 5 choose 2 pairs
        assert all_pass(results)

    def test_outlier_detected(self, tmp_path):
        self.make(tmp_path, fsh_pop=0.93)
        results = run_checks("fig2", str(tmp_path))
        assert any("FSH" in name for name in failed_names(results))

    def test_missing_method_rejected(self, tmp_path):
        fig_dir = self.make(tmp_path)
        (fig_dir / "FaSH.csv").unlink()
        import json
        manifest = json.loads((fig_dir / "manifest.json").read_text())
        manifest["runs"] = [r for r in manifest["runs"] if r["label"] != "FaSH"]
        (fig_dir / "manifest.json").write_text(json.dumps(manifest))
        with pytest.raises(SpecError, match="FaSH"):
            run_checks("fig2", str(tmp_path))


class TestFig1:
    def make(self, tmp_path, faqme_amp=0.0):
        t = np.arange(0.0, 400.0 + 1e-9, 0.2)
        mk = lambda amp, noise=0.0, seed=0: sine_pop(t, 0.5, amp, 0.2, noise, seed)
        groups = {
            "kT1": {
                "FQME": dict(t=t, pop=mk(0.05), A=0.2, Omega=0.2),
                "FSH": dict(t=t, pop=mk(0.045, 0.003, 1), pop_err=0.003, A=0.2, Omega=0.2),
                "FaQME": dict(t=t, pop=mk(faqme_amp), A=0.2, Omega=0.2),
                "FaSH": dict(t=t, pop=mk(0.0, 0.003, 2), pop_err=0.003, A=0.2, Omega=0.2),
            }
        }
        preset_dataset(tmp_path, "fig1", groups)

    def test_oscillation_split_passes(self, tmp_path):
        self.make(tmp_path)
        assert all_pass(run_checks("fig1", str(tmp_path)))

    def test_oscillating_averaged_method_detected(self, tmp_path):
        self.make(tmp_path, faqme_amp=0.04)
        failed = failed_names(run_checks("fig1", str(tmp_path)))
        assert any("FaQME smooth" in n for n in failed)


class TestFig3:
    def make(self, tmp_path, fsh_fast_pop=0.8805):
        t = np.arange(0.0, 400.0 + 1e-9, 0.2)
        groups = {}
        for suffix, Omega in (("Omega0.2", 0.2), ("Omega1", 1.0), ("Omega10", 10.0)):
            pop = 0.8805 if suffix != "Omega10" else fsh_fast_pop
            groups[suffix] = {
                "FQME": dict(t=t, pop=np.full(len(t), 0.8808), A=0.2, Omega=Omega),
                "FaQME": dict(t=t, pop=np.full(len(t), 0.8808), A=0.2, Omega=Omega),
                "FSH": dict(t=t, pop=np.full(len(t), pop), pop_err=0.002, A=0.2, Omega=Omega),
                "FaSH": dict(t=t, pop=np.full(len(t), 0.8803), pop_err=0.002, A=0.2, Omega=Omega),
                "FaSH-density": dict(t=t, pop=np.full(len(t), 0.881), pop_err=0.002, A=0.2, Omega=Omega),
            }
        return preset_dataset(tmp_path, "fig3", groups)

    def test_insensitivity_passes(self, tmp_path):
        self.make(tmp_path)
        results = run_checks("fig3", str(tmp_path))
        assert all_pass(results)
        assert sum("insensitive" in r.name for r in results) == 5

    def test_frequency_drift_detected(self, tmp_path):
        self.make(tmp_path, fsh_fast_pop=0.895)
        failed = failed_names(run_checks("fig3", str(tmp_path)))
        assert any("FSH insensitive" in n for n in failed)


class TestFig4:
    def make(self, tmp_path, fsh_ekin=0.65, fsh_pop=0.62):
        t = np.arange(0.0, 400.0 + 1e-9, 0.05)
        groups = {
            "Omega10": {
                "FSH": dict(t=t, pop=np.full(len(t), fsh_pop), pop_err=0.003,
                            ekin=fsh_ekin, ekin_err=0.004, A=1.0, Omega=10.0),
                "FaSH": dict(t=t, pop=np.full(len(t), 0.72), pop_err=0.003,
                             ekin=0.50, ekin_err=0.004, A=1.0, Omega=10.0),
                "FaSH-density": dict(t=t, pop=np.full(len(t), 0.721), pop_err=0.002,
                                     ekin=0.501, ekin_err=0.004, A=1.0, Omega=10.0),
                "FaQME": dict(t=t, pop=np.full(len(t), 0.722), ekin=0.504, A=1.0, Omega=10.0),
            }
        }
        preset_dataset(tmp_path, "fig4", groups)

    def test_overheating_passes(self, tmp_path):
        self.make(tmp_path)
        results = run_checks("fig4", str(tmp_path))
        assert len(results) == 6
        assert all_pass(results)

    def test_equal_temperatures_fail(self, tmp_path):
        self.make(tmp_path, fsh_ekin=0.502, fsh_pop=0.72)
        failed = failed_names(run_checks("fig4", str(tmp_path)))
        assert any("hotter" in n for n in failed)
        assert any("population below" in n for n in failed)


class TestFig5:
    def make(self, tmp_path, fash_amp=0.002):
        t = np.arange(0.0, 400.0 + 1e-9, 0.1)
        mk = lambda amp, noise=0.0, seed=0: sine_pop(t, 0.75, amp, 0.5, noise, seed)
        groups = {
            "Omega0.5": {
                "FQME": dict(t=t, pop=mk(0.25), A=4.0, Omega=0.5),
                "FaQME": dict(t=t, pop=mk(0.001), A=4.0, Omega=0.5),
                "FSH": dict(t=t, pop=mk(0.24, 0.003, 3), pop_err=0.003, A=4.0, Omega=0.5),
                "FaSH": dict(t=t, pop=mk(fash_amp, 0.003, 4), pop_err=0.003, A=4.0, Omega=0.5),
                "FaSH-density": dict(t=t, pop=mk(0.23, 0.002, 5), pop_err=0.002, A=4.0, Omega=0.5),
            }
        }
        preset_dataset(tmp_path, "fig5", groups)

    def test_strong_drive_split_passes(self, tmp_path):
        self.make(tmp_path)
        results = run_checks("fig5", str(tmp_path))
        assert all_pass(results)
        assert any("peak-to-trough" in r.detail for r in results)

    def test_oscillating_averaged_method_detected(self, tmp_path):
        self.make(tmp_path, fash_amp=0.1)
        failed = failed_names(run_checks("fig5", str(tmp_path)))
        assert any("FaSH smooth" in n for n in failed)


def test_short_run_rejected_with_explanation(tmp_path):
    t = np.arange(0.0, 8.0 + 1e-9, 0.1)   # fast preview: shorter than one period
    groups = {
        "kT1": {
            m: dict(t=t, pop=sine_pop(t, 0.5, 0.05, 0.2), A=0.2, Omega=0.2)
            for m in ("FQME", "FaQME", "FSH", "FaSH")
        }
    }
    preset_dataset(tmp_path, "fig1", groups)
    with pytest.raises(SpecError, match="full-length"):
        run_checks("fig1", str(tmp_path))


def test_unknown_preset_rejected(tmp_path):
    with pytest.raises(SpecError):
        run_checks("fig9", str(tmp_path))
