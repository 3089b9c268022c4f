import copy
import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gascasimir.cli import main
from gascasimir.config import ConfigError, parse_config
from gascasimir.report import emit_report, parse_csv, render_csv
from gascasimir.units import QUANTITIES, UnitSystem

ATOM_A = {"frequency": 1.0, "dipole_sq": 1.0}
ATOM_B = {"frequency": 1.3, "dipole_sq": 1.0}


def pair_config(**sweep):
    cfg = {"pair": {"atom_A": dict(ATOM_A), "atom_B": dict(ATOM_B), "state_A": "ground", "separation": 1.0}}
    if sweep:
        cfg["sweep"] = {"target": "pair", **sweep}
    return cfg


def slab_config(atom_B=ATOM_B, **sweep):
    medium = lambda atom: {"atom": {**atom, "broadening_rate": 1.0}, "density": 1e-2}  # noqa: E731
    cfg = {"slab": {"medium_A": medium(ATOM_A), "medium_B": medium(atom_B),
                    "separation": 1e5, "temperature": 0.5}}
    if sweep:
        cfg["sweep"] = {"target": "slab", **sweep}
    return copy.deepcopy(cfg)


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def read_table(path):
    return parse_csv(path.read_text())


class TestConfigValidation:
    def test_negative_density_names_field(self, tmp_path, capsys):
        cfg = slab_config()
        cfg["slab"]["medium_A"]["density"] = -1.0
        assert main(["slab-force", "--config", write(tmp_path, cfg), "--out", str(tmp_path / "o")]) == 2
        err = capsys.readouterr().err
        assert "slab.medium_A.density" in err
        assert not (tmp_path / "o").exists()

    @pytest.mark.parametrize("mutate, field", [
        (lambda c: c["pair"].pop("separation"), "pair.separation"),
        (lambda c: c["pair"].update(separation="far"), "pair.separation"),
        (lambda c: c["pair"]["atom_A"].update(frequency=0.0), "pair.atom_A.frequency"),
        (lambda c: c["pair"].update(state_A="ionized"), "pair.state_A"),
        (lambda c: c["pair"].update(colour="blue"), "pair.colour"),
        (lambda c: c.update(sweep={"target": "pair", "variable": "nothing", "min": 1, "max": 2, "points": 3}),
         "sweep.variable"),
        (lambda c: c.update(sweep={"target": "pair", "variable": "separation", "min": 1, "max": 2, "points": 1}),
         "sweep.points"),
        (lambda c: c.update(sweep={"target": "pair", "variable": "state_A", "min": 1, "max": 2, "points": 3}),
         "sweep.variable"),
        (lambda c: c.update(sweep={"target": "pair", "variable": "separation", "min": -1, "max": 2,
                                   "points": 3}), "sweep.separation"),
        (lambda c: c.update(tolerances={"rel_tol": 0}), "tolerances.rel_tol"),
    ])
    def test_field_level_messages(self, mutate, field):
        cfg = pair_config()
        mutate(cfg)
        with pytest.raises(ConfigError) as info:
            parse_config(cfg, "sweep" if "sweep" in cfg else "pair-potential")
        assert info.value.field == field

    def test_sweep_mode_needs_sweep(self):
        with pytest.raises(ConfigError, match="sweep"):
            parse_config(pair_config(), "sweep")

    def test_bad_json(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert main(["pair-potential", "--config", str(p)]) == 2
        assert "invalid JSON" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["pair-potential", "--config", str(tmp_path / "nope.json")]) == 2


class TestRuns:
    def test_vacuum_ground_ground_R7_tail(self, tmp_path):
        cfg = pair_config(variable="separation", min=100.0, max=1000.0, points=6, scale="log")
        out = tmp_path / "o"
        assert main(["sweep", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
        header, rows = read_table(out / "result.csv")
        R = np.array([r[header.index("R")] for r in rows])
        U = np.array([r[header.index("U_total")] for r in rows])
        slope = np.polyfit(np.log(R), np.log(-U), 1)[0]
        assert slope == pytest.approx(-7, abs=0.05)

    def test_identical_media_resonant_column_zero(self, tmp_path):
        cfg = slab_config(atom_B=ATOM_A, variable="separation", min=1e4, max=1e6, points=5, scale="log")
        out = tmp_path / "o"
        assert main(["slab-force", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
        header, rows = read_table(out / "result.csv")
        assert [r[header.index("F_res")] for r in rows] == [0.0] * 5

    def test_byte_identical_reruns_and_workers(self, tmp_path):
        cfg = write(tmp_path, pair_config(variable="separation", min=1.0, max=10.0, points=4))
        outs = []
        for i, workers in enumerate(("1", "1", "2")):
            d = tmp_path / f"run{i}"
            assert main(["sweep", "--config", cfg, "--out", str(d), "--workers", workers]) == 0
            outs.append(((d / "result.csv").read_bytes(), (d / "result.json").read_bytes()))
        assert outs[0] == outs[1] == outs[2]

    def test_metadata_records_width_floor_units_tolerances(self, tmp_path):
        cfg = pair_config()
        cfg["pair"]["state_A"] = "excited"
        cfg["pair"]["separation"] = 5.0
        out = tmp_path / "o"
        assert main(["pair-potential", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
        meta = json.loads((out / "result.json").read_text())
        assert meta["width_floor"] == {"relative_floor": 1e-6, "applied": True}
        assert meta["tolerances"]["rel_tol"] > 0
        assert meta["units"]["internal"].startswith("natural")
        assert meta["version"]
        header, rows = read_table(out / "result.csv")
        assert rows[0][header.index("width_floor")] == 1e-6

    def test_validity_warnings_flagged_not_fatal(self, tmp_path, capsys):
        cfg = slab_config()
        cfg["slab"]["separation"] = 1.0
        out = tmp_path / "o"
        assert main(["slab-force", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
        header, rows = read_table(out / "result.csv")
        assert rows[0][header.index("valid_LT")] is False
        assert "LT>>1" in rows[0][header.index("warning")]
        assert "validity" in capsys.readouterr().err

    def test_numerical_failure_exit_1(self, tmp_path, capsys):
        cfg = pair_config()
        cfg["pair"]["state_A"] = "excited"
        cfg["tolerances"] = {"rel_tol": 1e-15, "abs_tol": 1e-300, "max_evals": 100}
        assert main(["pair-potential", "--config", write(tmp_path, cfg)]) == 1
        assert "numerical failure" in capsys.readouterr().err

    def test_failed_sweep_leaves_no_files(self, tmp_path):
        cfg = pair_config(variable="separation", min=1.0, max=2.0, points=3)
        cfg["pair"]["state_A"] = "excited"
        cfg["tolerances"] = {"max_evals": 100}
        out = tmp_path / "o"
        assert main(["sweep", "--config", write(tmp_path, cfg), "--out", str(out)]) == 1
        assert not out.exists() or not any(out.iterdir())

    def test_si_units_match_natural_run(self, tmp_path):
        w_ref = 2.0e15
        us = UnitSystem(w_ref)
        nat = pair_config()
        nat["pair"]["separation"] = 3.0
        si = {
            "units": {"system": "SI", "omega_ref": w_ref},
            "pair": {
                "atom_A": {"frequency": us.to_si("frequency", 1.0), "dipole_sq": us.to_si("dipole_sq", 1.0)},
                "atom_B": {"frequency": us.to_si("frequency", 1.3), "dipole_sq": us.to_si("dipole_sq", 1.0)},
                "state_A": "ground",
                "separation": us.to_si("length", 3.0),
            },
        }
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["pair-potential", "--config", write(tmp_path, nat, "n.json"), "--out", str(a)]) == 0
        assert main(["pair-potential", "--config", write(tmp_path, si, "s.json"), "--out", str(b)]) == 0
        ua = read_table(a / "result.csv")[1][0][2]
        ub = read_table(b / "result.csv")[1][0][2]
        assert ub == pytest.approx(ua, rel=1e-9)
        meta = json.loads((b / "result.json").read_text())
        assert meta["units"]["conversion"]["omega_ref_rad_per_s"] == w_ref

    def test_validate_mode_prints_every_criterion(self, capsys):
        assert main(["validate"]) == 0
        out = capsys.readouterr().out
        assert out.count("[PASS]") == 12
        assert "12/12 criteria passed" in out

    def test_module_entry_point(self, tmp_path):
        r = subprocess.run([sys.executable, "-m", "gascasimir", "pair-potential", "--config",
                            write(tmp_path, pair_config())], capture_output=True, text=True)
        assert r.returncode == 0, r.stderr


class TestReport:
    @given(st.lists(st.tuples(st.floats(allow_nan=False), st.floats(allow_nan=False, allow_infinity=False),
                              st.booleans(), st.text(alphabet="abc,\" \n", max_size=5)), min_size=1, max_size=5))
    def test_csv_round_trip(self, rows):
        rows = [list(r) for r in rows]
        header, back = parse_csv(render_csv(["a", "b", "flag", "note"], rows))
        assert header == ["a", "b", "flag", "note"]
        for r, b in zip(rows, back):
            for x, y in zip(r[:2], b[:2]):
                assert y == x or (math.isinf(x) and y == x)
            assert b[2] is r[2]

    def test_significant_digits(self):
        text = render_csv(["x"], [[1 / 3]])
        assert len(text.splitlines()[1].replace("0.", "")) >= 12

    def test_empty_table_refused(self, tmp_path):
        with pytest.raises(ValueError):
            emit_report(tmp_path, "r", ["x"], [], {})
        assert list(tmp_path.iterdir()) == []

    def test_unwritable_path(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        with pytest.raises(OSError):
            emit_report(blocker / "sub", "r", ["x"], [[1.0]], {})


class TestUnits:
    @given(st.sampled_from(sorted(QUANTITIES)), st.floats(1e-30, 1e30), st.floats(1e10, 1e18))
    def test_round_trip(self, q, v, w):
        us = UnitSystem(w)
        assert us.to_si(q, us.to_natural(q, v)) == pytest.approx(v, rel=1e-12)

    def test_reference_frequency_is_unity(self):
        us = UnitSystem(3e15)
        assert us.to_natural("frequency", 3e15) == 1.0

    def test_temperature_scale(self):
        from scipy import constants as sc

        us = UnitSystem(1e15)
        T = sc.hbar * 1e15 / sc.k
        assert us.to_natural("temperature", T) == pytest.approx(1.0, rel=1e-14)

    def test_invalid(self):
        from gascasimir.errors import DomainError

        with pytest.raises(DomainError):
            UnitSystem(-1.0)
        with pytest.raises(DomainError):
            UnitSystem(1.0).to_natural("colour", 1.0)
