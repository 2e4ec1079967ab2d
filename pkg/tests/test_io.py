import json

import pytest

from chaincalc import io
from chaincalc.arcs import koch2_polyline, ml_test
from chaincalc.construction import verify_trace
from chaincalc.errors import FormatError
from chaincalc.evaluation import label_sequence
from chaincalc.fixtures import bundled_adversaries

from conftest import R


def test_chains_round_trip(tmp_json, unit_segment_nest):
    path = tmp_json("segment.json")
    io.save_chains(path, unit_segment_nest, meta={"kind": "segment"})
    chains, poly, labelled = io.load_chain_file(path)
    assert chains == unit_segment_nest
    assert poly is None and labelled is None


def test_polyline_is_kept_with_chains(tmp_json, unit_segment_nest):
    path = tmp_json("with_poly.json")
    poly = koch2_polyline(1).polyline
    io.save_chains(path, unit_segment_nest[:2], polyline=poly)
    assert io.load_chain_file(path).polyline == poly


def test_rationals_are_written_as_text(tmp_json, unit_segment_nest):
    path = tmp_json("text.json")
    io.save_chains(path, unit_segment_nest[:1])
    data = json.loads(open(path, encoding="utf-8").read())
    first = data["arc_chains"][0][0][0]
    assert first == [["-1/8", "5/8"], ["-1/8", "1/8"]]
    assert "labels" not in data or data["labels"] is None


def test_adversaries_round_trip(tmp_json):
    path = tmp_json("adversaries.json")
    io.save_adversaries(path, bundled_adversaries())
    assert io.load_adversaries(path) == bundled_adversaries()


def test_trace_round_trip(tmp_json, trace):
    path = tmp_json("trace.json")
    io.save_trace(path, trace)
    loaded = io.load_trace(path)
    assert loaded.states == trace.states
    assert loaded.adversaries == trace.adversaries
    assert verify_trace(loaded)['valid']


def test_ml_test_round_trip(tmp_json):
    path = tmp_json("mltest.json")
    levels = ml_test(2, 3)
    io.save_ml_test(path, levels, 3)
    assert io.load_ml_test(path) == levels


@pytest.mark.parametrize("text", [
    "not json",
    '{"arc_chains": [[[[["0", "1/0"], ["0", "1"]]]]]}',
    '{"arc_chains": [[[[["1", "0"], ["0", "1"]]]]]}',
    '{"arc_chains": [[[[["0", "1", "2"], ["0", "1"]]]]]}',
    '{"chains": [[[[["0", "1"], ["0", "1"]]]]]}',
    '{"arc_chains": [[[[["0", "1"], ["0", "1"]]]]], "labels": [[["0", "1"]], [["0", "1"]]]}',
    '{"arc_chains": [[[[["0", "1"], ["0", "1"]]]]], "labels": [[["0", "1/2"]]]}',
    '{"polyline": null}',
])
def test_bad_chain_files(tmp_json, text):
    path = tmp_json("bad.json")
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    with pytest.raises(FormatError):
        io.load_chains(path)


def test_missing_file(tmp_json):
    with pytest.raises(FormatError):
        io.load_trace(tmp_json("absent.json"))


def test_summary_frame(trace):
    frame = io.trace_summary_frame(trace)
    assert list(frame["t"]) == list(range(13))
    acted = frame.dropna(subset=["acting_e"])
    assert list(acted["t"]) == [1, 4]
    assert list(acted["acting_e"].astype(int)) == [2, 1]
    assert set(acted["scale"]) == {"1/128"}
    assert frame.loc[4, "p"] == "(-23/64, 3/4)"
    assert frame["length_approx"].is_monotonic_increasing


def test_report_json_encodes_rationals(trace):
    data = json.loads(io.report_json(verify_trace(trace)))
    assert data["valid"] is True
    steps = data["stats"]["hausdorff_sq"]
    assert len(steps) == trace.T and all(isinstance(v, str) for v in steps)


def test_reads_the_documented_chain_shape(tmp_json):
    path = tmp_json("plain.json")
    with open(path, "w", encoding="utf-8") as f:
        f.write('{"arc_chains": [[[[["0/1", "1/1"], ["0/1", "1/1"]]]]]}')
    (arc,) = io.load_chains(path)
    assert arc.chains[0].links[0] == R(0, 1, 0, 1)


def test_labelled_chains_round_trip(tmp_json, unit_segment_nest):
    path = tmp_json("labelled.json")
    seq = label_sequence(unit_segment_nest)
    io.save_labelled(path, seq, meta={"kind": "segment"})
    data = json.loads(open(path, encoding="utf-8").read())
    assert data["labels"][0] == [["0/1", "1/2"], ["1/2", "1/1"]]
    assert io.load_labelled(path) == seq


def test_plain_file_has_no_labels(tmp_json, unit_segment_nest):
    path = tmp_json("plain.json")
    io.save_chains(path, unit_segment_nest[:2])
    with pytest.raises(FormatError, match="no labels"):
        io.load_labelled(path)
