"""Seed derivation, config hashing, and self-describing CSV/JSON artifacts."""

import glob
import hashlib
import json
import os

import pytest

from identikit.artifacts import (
    ARTIFACT_VERSION,
    FORMAT_PREFIX,
    atomic_write_text,
    config_hash,
    csv_text,
    derive_seed,
    format_float,
    json_artifact_text,
    read_csv,
    write_csv,
    write_json,
)


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(7, "embedding") == derive_seed(7, "embedding")

    def test_label_changes_seed(self):
        assert derive_seed(7, "embedding") != derive_seed(7, "folds")

    def test_seed_changes_seed(self):
        assert derive_seed(7, "folds") != derive_seed(8, "folds")

    def test_range(self):
        for seed in (0, 1, 7, 2**31, -3):
            value = derive_seed(seed, "stage")
            assert 0 <= value < 2**63

    def test_matches_hash_recomputation(self):
        digest = hashlib.sha256(b"7:embedding").digest()
        expected = int.from_bytes(digest[:8], "big") % (2**63)
        assert derive_seed(7, "embedding") == expected


class TestConfigHash:
    def test_key_order_irrelevant(self):
        a = config_hash({"alpha": 1, "beta": [2, 3]})
        b = config_hash({"beta": [2, 3], "alpha": 1})
        assert a == b

    def test_value_sensitive(self):
        assert config_hash({"alpha": 1}) != config_hash({"alpha": 2})

    def test_shape(self):
        digest = config_hash({"stage": "train", "seed": 7})
        assert len(digest) == 16
        int(digest, 16)


class TestFormatFloat:
    @pytest.mark.parametrize(
        "value", [0.0, 1.0, -1.5, 0.1, 1e-300, 1.7976931348623157e308, 3.141592653589793]
    )
    def test_repr_round_trips(self, value):
        assert float(format_float(value)) == value

    def test_coerces_to_float(self):
        assert format_float(3) == "3.0"


class TestAtomicWrite:
    def test_writes_content(self, tmp_path):
        path = tmp_path / "out.txt"
        atomic_write_text(str(path), "hello\n")
        assert path.read_text(encoding="utf-8") == "hello\n"

    def test_replaces_existing(self, tmp_path):
        path = tmp_path / "out.txt"
        path.write_text("old", encoding="utf-8")
        atomic_write_text(str(path), "new\n")
        assert path.read_text(encoding="utf-8") == "new\n"

    def test_leaves_no_temp_files(self, tmp_path):
        atomic_write_text(str(tmp_path / "out.txt"), "x\n")
        names = {os.path.basename(p) for p in glob.glob(str(tmp_path / "*"))}
        assert names == {"out.txt"}


class TestCsvArtifacts:
    def test_text_structure(self):
        text = csv_text(
            "features",
            {"seed": 7, "config": "ab12"},
            ["user_id", "value"],
            [["u1", 0.5], ["u2", 2]],
        )
        lines = text.splitlines()
        assert lines[0] == f"# format: {FORMAT_PREFIX}/features v{ARTIFACT_VERSION}"
        assert "# seed: 7" in lines
        assert "# config: ab12" in lines
        assert lines[-3] == "user_id,value"
        assert lines[-2] == "u1,0.5"
        assert lines[-1] == "u2,2"

    def test_round_trip(self, tmp_path):
        path = str(tmp_path / "table.csv")
        rows = [["u1", 1.25, "yes"], ["u2", -0.5, "no"]]
        write_csv(path, "things", {"seed": 3}, ["id", "score", "flag"], rows)
        header, parsed = read_csv(path)
        assert header == ["id", "score", "flag"]
        assert parsed == [["u1", "1.25", "yes"], ["u2", "-0.5", "no"]]

    def test_read_skips_comments_and_blanks(self, tmp_path):
        path = tmp_path / "loose.csv"
        path.write_text("# note\n\na,b\n1,2\n\n# tail\n3,4\n", encoding="utf-8")
        header, rows = read_csv(str(path))
        assert header == ["a", "b"]
        assert rows == [["1", "2"], ["3", "4"]]

    def test_float_cells_round_trip_exactly(self, tmp_path):
        path = str(tmp_path / "floats.csv")
        value = 0.1 + 0.2
        write_csv(path, "floats", {}, ["v"], [[value]])
        _, rows = read_csv(path)
        assert float(rows[0][0]) == value


class TestJsonArtifacts:
    def test_text_structure(self):
        text = json_artifact_text("report", {"answer": 42})
        obj = json.loads(text)
        assert obj["format"] == f"{FORMAT_PREFIX}/report"
        assert obj["version"] == ARTIFACT_VERSION
        assert obj["answer"] == 42
        assert text.endswith("\n")

    def test_write_json(self, tmp_path):
        path = str(tmp_path / "report.json")
        write_json(path, "report", {"rows": [1, 2, 3]})
        with open(path, encoding="utf-8") as handle:
            obj = json.load(handle)
        assert obj["rows"] == [1, 2, 3]
        assert obj["format"] == f"{FORMAT_PREFIX}/report"
