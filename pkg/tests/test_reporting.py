import json

from vilenkin_lab.reporting import (
    ExperimentRecord,
    config_hash,
    render_csv,
    render_json,
    write_records,
)


def sample_records():
    return [
        ExperimentRecord("demo", {"i": 2}, {"value": 1.0 / 3.0}, "abc123"),
        ExperimentRecord("demo", {"i": 1}, {"value": 0.1}, "abc123"),
    ]


def test_config_hash_stable_under_key_order():
    a = config_hash({"x": 1, "y": [2, 3]})
    b = config_hash({"y": [2, 3], "x": 1})
    assert a == b and len(a) == 16
    assert config_hash({"x": 2, "y": [2, 3]}) != a


def test_csv_header_and_sorting():
    text = render_csv(sample_records())
    lines = text.splitlines()
    assert lines[0] == "# schema=1, config=abc123"
    assert lines[1] == "experiment,i,value,config"
    assert lines[2].startswith("demo,1,")
    assert lines[3].startswith("demo,2,")


def test_float_round_trip_precision():
    text = render_csv(sample_records())
    cell = text.splitlines()[3].split(",")[2]
    assert float(cell) == 1.0 / 3.0
    assert len(cell.replace(".", "").replace("-", "").lstrip("0")) >= 17


def test_render_byte_identical():
    assert render_csv(sample_records()) == render_csv(sample_records())


def test_json_shape():
    payload = json.loads(render_json(sample_records()))
    assert payload["schema"] == 1
    assert payload["config"] == "abc123"
    assert [r["index"]["i"] for r in payload["records"]] == [1, 2]


def test_empty_records_render():
    text = render_csv([])
    assert text.startswith("# schema=1")
    assert render_json([]) == '{\n  "config": "",\n  "records": [],\n  "schema": 1\n}\n'


def test_write_records(tmp_path):
    out = tmp_path / "rows.csv"
    write_records(sample_records(), out, "csv")
    assert out.read_text().startswith("# schema=1")
