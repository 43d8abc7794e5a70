import json
import subprocess
import sys

import pytest

from isofill.chains import double
from isofill.cli import main, read_config
from isofill.generators import random_cycle


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestSubcommands:
    def test_fill(self, capsys):
        code, out, _ = run(capsys, "fill", "--axes", "2,4,4", "--k", "1", "--seed", "3")
        data = json.loads(out)
        assert code == 0
        assert data["certificate"]["method"] == "double"
        assert data["certificate"]["filling_mass"] <= int(data["certificate"]["certified_bound"])

    @pytest.mark.parametrize("method,name", [("absolute", "absolute"), ("relative", "relative")])
    def test_fill_methods(self, capsys, method, name):
        code, out, _ = run(capsys, "fill", "--axes", "2,3,4", "--k", "1", "--method", method)
        assert code == 0 and json.loads(out)["certificate"]["method"] == name

    def test_fill_from_file(self, capsys, tmp_path):
        z = random_cycle(double((2, 4, 4)), 1, 9, 4)
        path = tmp_path / "z.json"
        path.write_text(json.dumps(z.to_json()))
        code, out, _ = run(capsys, "fill", "--axes", "2,4,4", "--k", "1", "--chain", str(path))
        assert code == 0 and json.loads(out)["mass"] == z.mass

    def test_lp_ilp(self, capsys):
        code, out, _ = run(capsys, "lp", "--axes", "2,4,4", "--k", "1", "--mode", "ilp", "--seed", "1")
        data = json.loads(out)
        assert code == 0 and data["mode"] == "ilp" and "witness" in data

    def test_link(self, capsys):
        code, out, _ = run(capsys, "link", "--axes", "4,4,4", "--k1", "2", "--ilp")
        data = json.loads(out)
        assert code == 0
        assert data["linking_constructive"] == data["linking_ilp"] == 1

    def test_equator_csv(self, capsys):
        code, out, _ = run(capsys, "equator", "--axes", "2,4,4", "--k", "1", "--format", "csv")
        lines = out.splitlines()
        assert code == 0
        assert lines[0].split(",") == ["certified_bound", "constructive_fill", "k", "lp_lower", "mass", "which"]
        assert lines[1].split(",")[-2:] == ["4", "smallest"]

    def test_construct(self, capsys):
        code, out, _ = run(capsys, "construct", "--axes", "1,1,1,1", "--k1", "2", "--lip", "8",
                           "--check-copies", "2")
        data = json.loads(out)
        assert code == 0
        assert data["blueprint"]["invariant"] == 16
        assert data["cross_check"]["ok"]

    @pytest.mark.parametrize("argv,value", [
        (["--kind", "hopf", "--axes", "1,2,4,8", "--lip", "1"], "256"),
        (["--kind", "ellipse", "--axes", "1,1,1,1", "--k1", "2", "--lip", "2"], "16"),
        (["--kind", "iso", "--axes", "1,2,4", "--k", "1"], "4"),
        (["--kind", "kdilation", "--axes", "1,1,1,1", "--axes2", "1,2,2,2", "--k", "2"], "16"),
        (["--kind", "gromov", "--iso", "100", "--vol", "1", "--areas", "1", "--lip", "1"], "100"),
    ])
    def test_bounds(self, capsys, argv, value):
        code, out, _ = run(capsys, "bounds", *argv)
        assert code == 0 and json.loads(out)["value"] == value

    def test_bounds_bad_and_composition(self, capsys):
        code, out, _ = run(capsys, "bounds", "--kind", "bad", "--A", "1000000", "--w", "1/100", "--lip", "1")
        assert code == 0 and json.loads(out)["ratio"] == "50"
        code, out, _ = run(capsys, "bounds", "--kind", "composition", "--lip", "8")
        data = json.loads(out)
        assert (data["D"], data["hopf"]) == (4, 16)

    def test_iso_experiment_out(self, capsys, tmp_path):
        out_path, csv_path = tmp_path / "r.json", tmp_path / "r.csv"
        code, out, _ = run(capsys, "iso-experiment", "--axes", "1,1,1", "--k", "1", "--resolution", "2",
                           "--samples", "3", "--seed", "4", "--out", str(out_path), "--csv", str(csv_path))
        assert code == 0 and out == ""
        data = json.loads(out_path.read_text())
        assert data["config"]["seed"] == 4 and len(data["samples"]) == 6
        assert csv_path.read_text().count("\n") == 7

    def test_sweep(self, capsys):
        code, out, _ = run(capsys, "sweep", "--axes", "1,1,1,1", "--k1", "2")
        data = json.loads(out)
        assert code == 0 and abs(data["fit"]["slope"] - 4) <= 0.1


class TestExitCodes:
    def test_invalid_axes(self, capsys):
        code, _, err = run(capsys, "fill", "--axes", "4,2", "--k", "1")
        assert code == 2 and "sorted" in err

    def test_missing_option(self, capsys):
        code, _, err = run(capsys, "fill", "--axes", "4,4")
        assert code == 2 and "--k" in err

    def test_argparse_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["fill", "--k", "one"])
        assert info.value.code == 2

    def test_inadmissible(self, capsys):
        code, _, err = run(capsys, "construct", "--axes", "1,1,1,1", "--k1", "2", "--lip", "4")
        assert code == 2 and "inadmissible" in err

    def test_over_budget(self, capsys):
        code, _, err = run(capsys, "lp", "--axes", "4,4,4", "--k", "1", "--budget", "10")
        assert code == 3 and "exceeds" in err

    def test_oversize_experiment(self, capsys):
        code, _, _ = run(capsys, "iso-experiment", "--axes", "64,64,64,64", "--k", "1", "--samples", "1")
        assert code == 3

    def test_non_cycle_file(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"geometry": {"axes": [2, 4, 4], "double": True}, "dimension": 1,
                                    "lattice": "primal",
                                    "cells": [{"hemi": "N", "base": [0, 1, 1], "span": [0], "coef": 1}]}))
        code, _, err = run(capsys, "lp", "--axes", "2,4,4", "--k", "1", "--chain", str(path))
        assert code == 3
        code, _, err = run(capsys, "fill", "--axes", "2,4,4", "--k", "1", "--chain", str(path))
        assert code == 2 and "boundary" in err


class TestConfig:
    def test_file_supplies_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# campaign\naxes = 1,1,1\nk = 1\nsamples = 2\nseed = 9\nresolution = 2\n")
        code, out, _ = run(capsys, "iso-experiment", "--config", str(cfg))
        data = json.loads(out)
        assert code == 0
        assert data["config"]["seed"] == 9 and data["config"]["samples"] == 2

    def test_flags_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("axes=1,1,1\nk=1\nseed=9\nno-equators=true\nsamples=1\n")
        code, out, _ = run(capsys, "iso-experiment", "--config", str(cfg), "--seed", "2")
        data = json.loads(out)
        assert data["config"]["seed"] == 2 and data["config"]["include_equators"] is False

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("colour=blue\n")
        code, _, err = run(capsys, "sweep", "--config", str(cfg))
        assert code == 2 and "colour" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep", "--config", str(tmp_path / "none.cfg"))
        assert code == 2

    def test_malformed_line(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("axes 1,2\n")
        with pytest.raises(ValueError, match="key=value"):
            read_config(cfg)


def test_module_entry_point(tmp_path):
    cmd = [sys.executable, "-m", "isofill", "bounds", "--kind", "composition", "--lip", "8"]
    res = subprocess.run(cmd, capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["hopf"] == 16
