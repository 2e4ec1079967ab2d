import pytest

from chaincalc import io
from chaincalc.cli import main, parse_point
from chaincalc.errors import FormatError
from chaincalc.geometry import Point
from chaincalc.svg import render_chains, render_trace

from conftest import F


@pytest.fixture
def run(tmp_path):
    """main() with a config path that does not exist, so defaults apply."""
    cfg = str(tmp_path / "missing.yaml")
    return lambda *argv: main(["--config", cfg, "--quiet", *argv])


@pytest.fixture(scope="module")
def stored_trace(tmp_path_factory):
    path = str(tmp_path_factory.mktemp("trace") / "trace.json")
    assert main(["--quiet", "--config", "missing.yaml", "construct", "--stages", "5", "--out", path]) == 0
    return path


def test_parse_point():
    assert parse_point("-3/16, 9/32") == Point(F(-3, 16), F(9, 32))
    with pytest.raises(FormatError):
        parse_point("1/2")


def test_argparse_errors_exit_2(run):
    assert run("koch") == 2
    assert run("nonsense") == 2


def test_segment_then_eval_and_refine(run, tmp_json, capsys):
    path = tmp_json("seg.json")
    assert run("segment", "--a", "0,0", "--b", "1,0", "--depth", "6", "--out", path) == 0
    assert len(io.load_chains(path)) == 7
    assert [lab.length for lab in io.load_labelled(path)] == [2 ** (j + 1) for j in range(7)]
    assert run("eval", "--chains", path, "--x", "1/2", "--prec", "3") == 0
    assert capsys.readouterr().out.splitlines()[-1].startswith("depth ")
    assert run("refine", "--fine", path, "--coarse", path, "--fine-level", "1", "--coarse-level", "0") == 0
    assert capsys.readouterr().out.strip() == "type (2, 2)"
    assert run("refine", "--fine", path, "--coarse", path, "--fine-level", "0", "--coarse-level", "1") == 1


def test_eval_rejects_bad_parameter(run, tmp_json):
    path = tmp_json("seg.json")
    run("segment", "--a", "0,0", "--b", "1,0", "--depth", "4", "--out", path)
    assert run("eval", "--chains", path, "--x", "one half", "--prec", "3") == 2


def test_koch_and_mltest(run, tmp_json, capsys):
    path = tmp_json("koch.json")
    assert run("koch", "--depth", "2", "--out", path) == 0
    assert "box-counting slope" in capsys.readouterr().out
    assert len(io.load_chains(path)) == 3
    assert run("mltest", "--n", "2", "--depth", "3", "--out", tmp_json("ml.json")) == 0
    assert len(io.load_ml_test(tmp_json("ml.json"))) == 2


def test_construct_and_verify(run, stored_trace, capsys):
    assert run("verify", "--trace", stored_trace) == 0
    out = capsys.readouterr().out
    assert "all checks passed" in out


def test_construct_reports_exhausted_budget(run, tmp_json):
    assert run("construct", "--stages", "2", "--budget", "0", "--out", tmp_json("t.json")) == 3
    assert io.load_trace(tmp_json("t.json")).annotations


def test_verify_missing_trace(run, tmp_json):
    assert run("verify", "--trace", tmp_json("absent.json")) == 2


def test_witness_command(run, stored_trace, capsys):
    assert run("witness", "--trace", stored_trace, "--q", "5/16,3/4") == 0
    assert capsys.readouterr().out.startswith("case 1 at stage 2 for requirement 1")
    assert run("witness", "--trace", stored_trace, "--q", "1/3,1/3") == 1


def test_svg_command(run, stored_trace, tmp_json):
    out = tmp_json("trace.svg")
    assert run("svg", "--trace", stored_trace, "--stage", "1", "--out", out) == 0
    with open(out, encoding="utf-8") as f:
        assert f.read() == render_trace(io.load_trace(stored_trace), 1)


#  Figures

def test_trace_svg_is_deterministic(trace):
    text = render_trace(trace)
    assert text == render_trace(trace)
    assert text.startswith("<?xml") and text.endswith("</svg>\n")
    assert text.count("<circle") == 1
    assert text.count("<polyline") == len(trace.states[-1].segments)


def test_chain_svg_outlines_every_rectangle(unit_segment_nest):
    text = render_chains(unit_segment_nest[:3])
    assert text.count("<polygon") == 2 + 4 + 8


def test_osgood_depth_is_capped_by_config(tmp_path, tmp_json):
    cfg = tmp_path / "config.yaml"
    cfg.write_text("osgood:\n  max_depth: 2\n", encoding="utf-8")
    argv = ["--config", str(cfg), "--quiet", "osgood", "--k", "1"]
    assert main(argv + ["--depth", "3", "--out", tmp_json("o.json")]) == 2
    assert main(argv + ["--depth", "2", "--out", tmp_json("o.json")]) == 0
    assert len(io.load_chains(tmp_json("o.json"))) == 3
