import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from grbf_spectrum.utils.atomic_write import atomic_write_frame, atomic_write_text
from grbf_spectrum.utils.json_serializer import dump_json, serialize
from grbf_spectrum.utils.manifest import RunManifest, manifest_path_for


def test_atomic_write_creates_parents_and_leaves_no_temp_files(tmp_path):
    target = tmp_path / "nested" / "out.txt"

    atomic_write_text(target, "first")
    atomic_write_text(target, "second")

    assert target.read_text(encoding="utf-8") == "second"
    assert [p.name for p in target.parent.iterdir()] == ["out.txt"]


def test_frame_floats_use_seventeen_digits(tmp_path):
    path = atomic_write_frame(pd.DataFrame({"v": [0.1, 1.0 / 3.0]}), tmp_path / "f.csv")

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "v"
    assert float(lines[2]) == 1.0 / 3.0
    assert lines[1] == "0.10000000000000001"


def test_serialize_numpy_values():
    document = {
        "array": np.arange(3),
        "float": np.float64(0.5),
        "flag": np.bool_(True),
        "path": Path("a/b"),
    }

    assert json.loads(serialize(document)) == {
        "array": [0, 1, 2],
        "float": 0.5,
        "flag": True,
        "path": "a/b",
    }


def test_serialize_rejects_nan():
    with pytest.raises(ValueError):
        serialize({"x": float("nan")})


def test_dump_json_ends_with_newline(tmp_path):
    path = dump_json({"a": 1}, tmp_path / "doc.json")

    assert path.read_text(encoding="utf-8").endswith("}\n")


def test_manifest_is_written_beside_the_output(tmp_path):
    output = tmp_path / "results.csv"
    manifest = RunManifest.start("cv", argv=["grbf-spectrum", "cv"], seed=3)
    manifest.outputs["results"] = str(output)

    path = manifest.write(output)

    assert path == manifest_path_for(output)
    assert path.name == "results.csv.manifest.json"
    document = json.loads(path.read_text(encoding="utf-8"))
    assert document["command"] == "cv"
    assert document["seed"] == 3
    assert document["argv"] == ["grbf-spectrum", "cv"]
    assert set(document) >= {"tool_version", "python_version", "created_at", "wall_time"}
