import io
import json
import math

import pytest

from qmclab.cli import main
from qmclab.harness import (
    COLUMNS,
    ConfigError,
    SweepConfig,
    emit,
    fit_rate,
    load_config,
    parse_config,
    parse_n_grid,
    run_sweep,
    write_result,
)

SMALL = dict(n_grid=(16, 32, 64, 128), grid_size=513)


def run_cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


class TestFitRate:
    def test_exact_inverse(self):
        ns = [16, 32, 64, 128]
        fit = fit_rate(ns, [3.0 / n for n in ns])
        assert fit.slope == pytest.approx(-1.0, abs=1e-14)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.intercept == pytest.approx(math.log(3.0))

    def test_constant(self):
        fit = fit_rate([2, 4, 8], [0.5, 0.5, 0.5])
        assert fit.slope == 0.0 and fit.r_squared == 1.0

    def test_logcorrected(self):
        ns = [16, 32, 64]
        fit = fit_rate(ns, [math.log(n) ** 2 / n for n in ns], "logcorrected")
        assert fit.sup == pytest.approx(1.0) and fit.slope == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("ns,vals,model", [
        ([1, 2], [1, 1], "loglog"),
        ([1, 2, 3], [1, 0, 1], "loglog"),
        ([1, 2, 3], [1, 1], "loglog"),
        ([1, 2, 3], [1, 1, 1], "logcorrected"),
        ([2, 3, 4], [1, 1, 1], "cubic"),
    ])
    def test_bad_input(self, ns, vals, model):
        with pytest.raises(ValueError):
            fit_rate(ns, vals, model)


class TestSweep:
    def test_const_midpoint(self):
        cfg = SweepConfig(("const:0.7",), ("midpoint",), n_grid=(4, 8), grid_size=65)
        res = run_sweep(cfg)
        assert len(res.reports) == 2
        assert all(r.error <= 1e-15 for r in res.reports)
        assert res.fits == {}

    def test_linear_vdc_koksma(self):
        res = run_sweep(SweepConfig(("linear",), ("vdc:2",), **SMALL))
        for r in res.reports:
            assert r.error <= r.bounds["koksma"] + r.tol
        assert res.violations() == []
        assert res.fits[("linear", "vdc:2")]["loglog"].slope < -0.5

    def test_order_and_determinism(self):
        cfg = SweepConfig(("sin:2", "linear"), ("vdc:2", "random:3"), **SMALL)
        a = emit(run_sweep(cfg))
        b = emit(run_sweep(SweepConfig(("sin:2", "linear"), ("vdc:2", "random:3"), jobs=4, **SMALL)))
        assert a == b
        lines = a.splitlines()
        assert lines[0] == ",".join(COLUMNS)
        keys = [tuple(l.split(",")[:3]) for l in lines[1:]]
        assert keys == sorted(keys, key=lambda k: (k[0], k[1], int(k[2])))

    def test_vdc_discrepancy_not_above_first(self):
        res = run_sweep(SweepConfig(("linear",), ("vdc:2",), n_grid=tuple(2**k for k in range(4, 13)), grid_size=65))
        first = res.reports[0].d_star
        assert all(r.d_star <= first for r in res.reports)

    def test_unknown_function(self):
        with pytest.raises(ConfigError):
            run_sweep(SweepConfig(("nope",), ("vdc",), n_grid=(4,)))


class TestEmit:
    def test_empty(self):
        assert emit([], "csv") == ",".join(COLUMNS) + "\n"
        assert json.loads(emit([], "json")) == []

    def test_json_roundtrip(self):
        res = run_sweep(SweepConfig(("g", "step:0.3"), ("vdc:2",), n_grid=(16, 32), grid_size=257))
        csv_lines = emit(res, "csv").splitlines()
        assert len(csv_lines) == 5
        objs = json.loads(emit(res, "json"))
        assert [list(o) for o in objs] == [list(COLUMNS)] * 4
        for r, o in zip(res.reports, objs):
            assert o["error"] == r.error and o["d_star"] == r.d_star
            assert o["bound_thm1"] == r.bounds["thm1"]
        g = objs[0]
        assert g["function"] == "g" and g["bound_koksma"] is None
        step = objs[-1]
        assert step["bound_thm2"] is None and step["nu_2n2"] is not None

    def test_bad_format(self):
        with pytest.raises(ValueError):
            emit([], "xml")

    def test_write_unwritable(self, tmp_path):
        res = run_sweep(SweepConfig(("linear",), ("midpoint",), n_grid=(4,), grid_size=65))
        with pytest.raises(OSError):
            write_result(res, tmp_path / "missing" / "out.csv")


class TestConfig:
    def test_parse(self):
        cfg = parse_config("""
            # comment
            functions = linear, g
            sequences = vdc:2
            n_grid = 2^4..2^6   # trailing
            format = json
            seed = 7
        """)
        assert cfg.functions == ("linear", "g")
        assert cfg.n_grid == (16, 32, 64)
        assert cfg.format == "json" and cfg.seed == 7 and cfg.jobs == 1

    def test_overrides(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("functions = linear\nsequences = midpoint\nn_grid = 4, 8\nseed = 1\n")
        cfg = load_config(p, seed=9, jobs=None)
        assert cfg.seed == 9 and cfg.n_grid == (4, 8)

    @pytest.mark.parametrize("text", [
        "functions linear",
        "colour = red",
        "functions = linear\nsequences = vdc\nn_grid = 8, 4",
        "functions = linear\nsequences = vdc\nformat = xml",
        "functions = linear\nsequences = vdc\nseed = x",
        "sequences = vdc",
    ])
    def test_rejects(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_n_grid(self):
        assert parse_n_grid("16, 32 64") == (16, 32, 64)
        assert parse_n_grid("3^1..3^3") == (3, 9, 27)
        with pytest.raises(ConfigError):
            parse_n_grid("2^1..3^2")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "none.cfg")


class TestCli:
    def test_gen(self):
        code, out = run_cli("gen", "--seq", "vdc", "-n", "4")
        assert code == 0 and out.split() == ["0.5", "0.25", "0.75", "0.125"]

    def test_disc(self, tmp_path):
        code, out = run_cli("disc", "--seq", "midpoint", "-n", "4")
        assert code == 0 and out.splitlines()[1] == "4,0.125,0.25"
        p = tmp_path / "pts.txt"
        p.write_text("# pts\n0.25\n\n0.75\n")
        code, out = run_cli("disc", "--file", str(p))
        assert code == 0 and out.splitlines()[1] == "2,0.25,0.5"

    def test_disc_out_of_domain(self, tmp_path):
        p = tmp_path / "pts.txt"
        p.write_text("0.5\n1.5\n")
        assert run_cli("disc", "--file", str(p))[0] == 2

    def test_nu_and_var(self):
        code, out = run_cli("nu", "-f", "sin:1", "--kmax", "3", "--grid-size", "65")
        vals = [float(l.split(",")[1]) for l in out.splitlines()[1:]]
        # rise 0 -> 1, fall 1 -> -1, rise -1 -> 0
        assert code == 0 and vals == pytest.approx([2, 3, 4], abs=1e-14)
        code, out = run_cli("var", "-f", "step:0.3", "-p", "1", "2", "--grid-size", "65")
        assert code == 0 and out.splitlines()[1:] == ["1,1", "2,1"]

    def test_bound(self):
        code, out = run_cli("bound", "-f", "linear", "--seq", "midpoint", "-n", "4", "--grid-size", "65")
        assert code == 0 and out.splitlines()[1].startswith("linear,midpoint,4,0.5,0.5,0,0.125")
        code, out = run_cli("bound", "-f", "g", "-n", "8", "--format", "json")
        assert code == 0 and json.loads(out)[0]["n"] == 8

    def test_sweep_stdout_and_file(self, tmp_path, capsys):
        args = ["sweep", "--functions", "linear,sin:2", "--sequences", "vdc:2", "--n-grid", "16,32,64",
                "--grid-size", "129"]
        code, out = run_cli(*args)
        assert code == 0 and len(out.splitlines()) == 7
        dest = tmp_path / "out.csv"
        code, _ = run_cli(*args, "--out", str(dest), "--jobs", "3")
        assert code == 0 and dest.read_text() == out
        assert "slope" in capsys.readouterr().err

    def test_sweep_config(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("functions = square\nsequences = midpoint\nn_grid = 4, 8, 16\nformat = json\n")
        code, out = run_cli("sweep", "--config", str(p))
        assert code == 0 and len(json.loads(out)) == 3

    @pytest.mark.parametrize("argv", [
        [],
        ["frobnicate"],
        ["gen", "--seq", "nope", "-n", "3"],
        ["gen", "-n", "0"],
        ["disc", "--seq", "vdc"],
        ["nu", "-f", "nope"],
        ["var", "-f", "linear", "-p", "0.5"],
        ["sweep", "--config", "/nonexistent/cfg"],
        ["sweep", "--functions", "linear"],
        ["sweep", "--functions", "linear", "--sequences", "vdc", "--n-grid", "4", "--out", "/nonexistent/dir/x.csv"],
    ])
    def test_usage_errors(self, argv, capsys):
        assert run_cli(*argv)[0] == 2

    def test_violation_exit_code(self, monkeypatch):
        import qmclab.cli as cli
        from qmclab.bounds import BoundReport

        monkeypatch.setattr(BoundReport, "violations", lambda self: ["thm1"])
        assert run_cli("bound", "-f", "linear", "-n", "4", "--grid-size", "65")[0] == 1
        assert cli.EXIT_VIOLATION == 1
