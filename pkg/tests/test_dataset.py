import math

import pytest

from selfenergy.dataset import (
    BUNDLED_COEFFICIENTS,
    BUNDLED_CONSTANTS,
    TableFormatError,
    bundled_data_path,
    load_coefficients,
    load_constants,
    load_f_table,
    save_f_table,
    save_plotdata,
)
from selfenergy.quantities import UncertainValue, parse_state
from selfenergy.reduction import FSample, FSeries


GOOD_TABLE = """\
# demo table
state: 4D5/2
constants: CODATA-2018
20 0.0451 1e-6
25 0.0452 1e-6
30 0.0455 2e-6
40 0.0459 1e-6
50 0.0464 1e-6
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestFTable:
    def test_happy_path(self, tmp_path):
        series = load_f_table(write(tmp_path, "t.txt", GOOD_TABLE))
        assert series.state == parse_state("4D5/2")
        assert len(series) == 5
        assert series.constants_label == "CODATA-2018"
        assert series.samples[2].f == UncertainValue(0.0455, 2e-6)

    def test_duplicate_z_names_line(self, tmp_path):
        bad = GOOD_TABLE.replace("25 0.0452", "20 0.0452")
        with pytest.raises(TableFormatError) as err:
            load_f_table(write(tmp_path, "t.txt", bad))
        assert err.value.line == 5
        assert "duplicate Z" in str(err.value)

    def test_non_monotonic_rejected(self, tmp_path):
        bad = GOOD_TABLE.replace("25 0.0452", "19 0.0452")
        with pytest.raises(TableFormatError, match="must increase"):
            load_f_table(write(tmp_path, "t.txt", bad))

    def test_negative_sigma_rejected(self, tmp_path):
        bad = GOOD_TABLE.replace("30 0.0455 2e-6", "30 0.0455 -1")
        with pytest.raises(TableFormatError, match="sigma_F"):
            load_f_table(write(tmp_path, "t.txt", bad))

    def test_unknown_state_rejected(self, tmp_path):
        bad = GOOD_TABLE.replace("state: 4D5/2", "state: 4Q5/2")
        with pytest.raises(TableFormatError):
            load_f_table(write(tmp_path, "t.txt", bad))

    def test_missing_state_header(self, tmp_path):
        bad = GOOD_TABLE.replace("state: 4D5/2\n", "")
        with pytest.raises(TableFormatError, match="state"):
            load_f_table(write(tmp_path, "t.txt", bad))

    def test_label_mismatch_strict_and_lax(self, tmp_path):
        path = write(tmp_path, "t.txt", GOOD_TABLE)
        with pytest.raises(TableFormatError, match="label"):
            load_f_table(path, expected_constants_label="CODATA-2022")
        with pytest.warns(UserWarning):
            series = load_f_table(path, expected_constants_label="CODATA-2022",
                                  strict_label=False)
        assert len(series) == 5

    def test_save_load_round_trip(self, tmp_path):
        first = load_f_table(write(tmp_path, "t.txt", GOOD_TABLE))
        save_f_table(first, tmp_path / "copy.txt", comment="round trip")
        second = load_f_table(tmp_path / "copy.txt")
        assert second == first
        # idempotence: saving the reloaded series is byte-identical
        save_f_table(second, tmp_path / "copy2.txt", comment="round trip")
        assert (tmp_path / "copy.txt").read_bytes() == (tmp_path / "copy2.txt").read_bytes()

    def test_seventeen_digit_serialization(self, tmp_path):
        f = UncertainValue(0.1 + 0.2, 1.0 / 3.0)  # values with no short decimal form
        series = FSeries(parse_state("4D5/2"), (FSample(20, f),))
        save_f_table(series, tmp_path / "t.txt")
        back = load_f_table(tmp_path / "t.txt")
        assert back.samples[0].f.value == f.value
        assert back.samples[0].f.sigma == f.sigma


COEFF_ROW = '4P1/2 -0.1104 0 0.6894 0 -7.9 0 - - "literature"\n'


class TestCoefficients:
    def test_full_row(self, tmp_path):
        table = load_coefficients(write(tmp_path, "c.txt", COEFF_ROW))
        entry = table[parse_state("4P1/2")]
        assert entry.a40 == UncertainValue(-0.1104, 0.0)
        assert entry.a60 == UncertainValue(-7.9, 0.0)
        assert entry.gse_limit is None
        assert entry.source == "literature"

    def test_absent_a60_is_none_not_zero(self, tmp_path):
        row = '4P1/2 -0.1104 0 0.6894 0 - - 0.3 0.01 "lit"\n'
        entry = load_coefficients(write(tmp_path, "c.txt", row))[parse_state("4P1/2")]
        assert entry.a60 is None
        assert entry.gse_limit == UncertainValue(0.3, 0.01)

    def test_duplicate_state_rejected(self, tmp_path):
        with pytest.raises(TableFormatError, match="duplicate state"):
            load_coefficients(write(tmp_path, "c.txt", COEFF_ROW + COEFF_ROW))

    def test_mandatory_a40_a61(self, tmp_path):
        row = '4P1/2 - - 0.6894 0 - - - - "lit"\n'
        with pytest.raises(TableFormatError, match="mandatory"):
            load_coefficients(write(tmp_path, "c.txt", row))

    def test_empty_source_rejected(self, tmp_path):
        row = '4P1/2 -0.1104 0 0.6894 0 - - - - ""\n'
        with pytest.raises(TableFormatError, match="source"):
            load_coefficients(write(tmp_path, "c.txt", row))

    def test_half_absent_pair_rejected(self, tmp_path):
        row = '4P1/2 -0.1104 0 0.6894 0 -7.9 - - - "lit"\n'
        with pytest.raises(TableFormatError, match="both"):
            load_coefficients(write(tmp_path, "c.txt", row))


class TestConstants:
    def test_bundled(self):
        constants = load_constants()
        assert constants.label == "CODATA-2018"
        assert constants.alpha == pytest.approx(7.2973525693e-3, rel=1e-12)
        assert constants.electron_rest_frequency == pytest.approx(1.23558996e20, rel=1e-8)

    def test_missing_key(self, tmp_path):
        path = write(tmp_path, "c.txt", "alpha 7.3e-3\nlabel test\n")
        with pytest.raises(TableFormatError, match="me_c2_hz"):
            load_constants(path)

    def test_unknown_key(self, tmp_path):
        path = write(tmp_path, "c.txt", "alpha 7.3e-3\nme_c2_hz 1e20\nlabel t\nextra 3\n")
        with pytest.raises(TableFormatError, match="unknown"):
            load_constants(path)


class TestPlotData:
    RECORDS = [
        {"state": "4P1/2", "z": 10, "f": -0.13171681878826227, "sigma_f": 1.3e-6},
        {"state": "4P1/2", "z": 15, "f": -0.12356, "sigma_f": 1.2e-6},
    ]

    def test_empty_records_header_only(self, tmp_path):
        save_plotdata([], tmp_path / "o.csv", "csv", fields=["state", "z", "f"])
        assert (tmp_path / "o.csv").read_text() == "state,z,f\n"

    def test_determinism(self, tmp_path):
        save_plotdata(self.RECORDS, tmp_path / "a.csv", "csv")
        save_plotdata(self.RECORDS, tmp_path / "b.csv", "csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        save_plotdata(self.RECORDS, tmp_path / "a.jsonl", "jsonl")
        save_plotdata(self.RECORDS, tmp_path / "b.jsonl", "jsonl")
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()

    def test_17_digits(self, tmp_path):
        save_plotdata(self.RECORDS, tmp_path / "o.csv", "csv")
        text = (tmp_path / "o.csv").read_text()
        assert "-0.13171681878826227" in text

    def test_jsonl_parses(self, tmp_path):
        import json
        save_plotdata(self.RECORDS, tmp_path / "o.jsonl", "jsonl")
        lines = (tmp_path / "o.jsonl").read_text().splitlines()
        rows = [json.loads(line) for line in lines]
        assert rows[0]["state"] == "4P1/2"
        assert rows[0]["f"] == -0.13171681878826227

    def test_field_mismatch_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            save_plotdata([{"a": 1}], tmp_path / "o.csv", "csv", fields=["a", "b"])

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            save_plotdata(self.RECORDS, tmp_path / "o.x", "xml")


class TestBundledData:
    def test_all_files_exist(self):
        for name in (BUNDLED_CONSTANTS, BUNDLED_COEFFICIENTS,
                     "ftable_4P12_synthetic.txt", "ftable_4D52_synthetic.txt",
                     "ftable_5D52_synthetic.txt", "ftable_6D52_synthetic.txt"):
            assert bundled_data_path(name).exists()

    def test_bundled_coefficients_parse(self):
        table = load_coefficients()
        p4 = table[parse_state("4P1/2")]
        assert p4.a60 is not None and p4.gse_limit is None
        assert p4.source
        d4 = table[parse_state("4D5/2")]
        assert d4.gse_limit is not None

    def test_bundled_tables_parse_against_bundled_constants(self):
        constants = load_constants()
        for name in ("ftable_4P12_synthetic.txt", "ftable_4D52_synthetic.txt"):
            series = load_f_table(bundled_data_path(name),
                                  expected_constants_label=constants.label)
            assert len(series) >= 5
            assert all(s.f.sigma > 0 for s in series.samples)
