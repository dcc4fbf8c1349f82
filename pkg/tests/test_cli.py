"""
End-to-end tests of the mubhkit command line, called in-process through main(argv).
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the scripts directory to the path
project_root = Path(__file__).parent.parent
scripts_dir = project_root / "scripts"
sys.path.insert(0, str(project_root))
sys.path.insert(0, str(scripts_dir))

import mubhkit
import run_certification
from mubh.formats import load_scheme, read_report, save_matrix
from mubh.hadamard import sylvester


def run(*argv):
    return mubhkit.main([str(a) for a in argv])


def findings_of(report, kind):
    return [f for f in report['findings'] if f['type'] == kind]


def edit_cell(path, x, y, value):
    lines = path.read_text(encoding="ascii").split("\n")
    cells = lines[1 + x].split(" ")
    cells[y] = str(value)
    lines[1 + x] = " ".join(cells)
    path.write_text("\n".join(lines), encoding="ascii")


@pytest.fixture(scope="module")
def scheme_2_3(tmp_path_factory):
    out = tmp_path_factory.mktemp("schemes") / "class5.scheme"
    assert run("build-scheme", "--family", "5", "--n", 2, "--m", 3, "--out", out) == 0
    return out


class TestConstruct:
    """construct writes a certified family."""

    def test_family_2_3(self, tmp_path):
        assert run("construct", "--n", 2, "--m", 3, "--out", tmp_path) == 0
        assert sorted(p.name for p in tmp_path.glob("H_*.mat")) == ["H_1.mat", "H_2.mat", "H_3.mat"]
        report = read_report(tmp_path / "report.json")
        assert report['verdict'] == "certified"
        assert isinstance(report['elapsed_ms'], int)
        assert findings_of(report, 'krein_bound')[0]['q_12_1'] == "0/1"
        assert len(findings_of(report, 'pairwise_unbiased')) == 3

    def test_m_above_the_bound(self, tmp_path, capsys):
        assert run("construct", "--n", 2, "--m", 4, "--out", tmp_path) == 2
        assert "2n - 1 = 3" in capsys.readouterr().err

    def test_n_three(self, tmp_path):
        assert run("construct", "--n", 3, "--m", 2, "--out", tmp_path) == 2

    def test_missing_flag_is_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            run("construct", "--n", 2)
        assert excinfo.value.code == 2

    def test_missing_config(self, tmp_path):
        assert run("--config", tmp_path / "nope.yaml", "construct", "--n", 2, "--m", 3, "--out", tmp_path) == 2

    def test_malformed_config(self, tmp_path):
        config = tmp_path / "bad.yaml"
        config.write_text("grid: [\n", encoding="utf-8")
        assert run("--config", config, "construct", "--n", 2, "--m", 3, "--out", tmp_path) == 2


class TestBuildScheme:
    """build-scheme writes the scheme file and its report."""

    def test_class5_report(self, scheme_2_3):
        assert load_scheme(scheme_2_3).size == 64
        report = read_report(scheme_2_3.with_name("class5.report.json"))
        assert report['verdict'] == "certified"
        assert findings_of(report, 'krein_bound_value')[0]['q_12_1'] == "0/1"
        srg = findings_of(report, 'srg_deza_corollary')[0]
        assert srg['srg_A5'] == [64, 18, 2, 6]
        assert srg['deza_A4'] == [64, 18, 6, 2]
        assert len(report['krein']) == 6

    def test_class3_krein_matrix(self, tmp_path):
        out = tmp_path / "class3.scheme"
        assert run("build-scheme", "--family", "3", "--n", 2, "--m", 3, "--out", out) == 0
        report = read_report(tmp_path / "class3.report.json")
        krein = findings_of(report, 'printed_krein_matrix')[0]
        assert krein['passed'] and krein['index'] == 1

    def test_fusion4_flags(self, tmp_path):
        out = tmp_path / "fusion4.scheme"
        assert run("build-scheme", "--family", "fusion4", "--n", 2, "--m", 3, "--out", out) == 0
        flags = findings_of(read_report(tmp_path / "fusion4.report.json"), 'q_structure_flags')[0]
        assert flags['q_polynomial'] and flags['q_bipartite'] and flags['q_antipodal']

    def test_cover(self, tmp_path):
        out = tmp_path / "class8.scheme"
        assert run("build-scheme", "--family", "8", "--n", 2, "--m", 3, "--out", out) == 0
        tables = findings_of(read_report(tmp_path / "class8.report.json"), 'cover_tables')[0]
        assert tables['displayed_index'] == 8

    def test_from_constructed_files(self, tmp_path):
        assert run("construct", "--n", 2, "--m", 2, "--out", tmp_path / "family") == 0
        out = tmp_path / "from_files.scheme"
        assert run("build-scheme", "--family", "5", "--in", tmp_path / "family", "--out", out) == 0
        assert load_scheme(out).size == 48

    def test_three_class_needs_two_matrices(self, tmp_path):
        assert run("build-scheme", "--family", "3", "--n", 2, "--m", 1, "--out", tmp_path / "x.scheme") == 2

    @pytest.mark.parametrize("family", ["5", "8", "fusion4"])
    def test_smallest_parameters(self, family, tmp_path):
        out = tmp_path / f"{family}.scheme"
        assert run("build-scheme", "--family", family, "--n", 1, "--m", 1, "--out", out) == 0
        assert load_scheme(out).size == (8 if family == "5" else 16)

    def test_smallest_parameters_class3(self, tmp_path):
        assert run("build-scheme", "--family", "3", "--n", 1, "--m", 1, "--out", tmp_path / "x.scheme") == 2


class TestVerify:
    """verify on user files."""

    def test_constructed_family_passes(self, tmp_path):
        run("construct", "--n", 2, "--m", 3, "--out", tmp_path)
        files = sorted(tmp_path.glob("H_*.mat"))
        assert run("verify", "--what", "mubh", "--report", tmp_path / "v.json", *files) == 0

    def test_sylvester_is_not_bush_type(self, tmp_path):
        path = save_matrix(sylvester(4).body, tmp_path / "H_1.mat")
        assert run("verify", "--what", "mubh", "--report", tmp_path / "v.json", path) == 1
        report = read_report(tmp_path / "v.json")
        assert not findings_of(report, 'bush_type')[0]['passed']

    def test_scheme_passes(self, scheme_2_3, tmp_path):
        assert run("verify", "--what", "scheme", "--n", 2, "--m", 3, "--report", tmp_path / "v.json", scheme_2_3) == 0

    def test_single_flipped_cell(self, scheme_2_3, tmp_path):
        path = tmp_path / "flipped.scheme"
        path.write_bytes(scheme_2_3.read_bytes())
        y = int(np.flatnonzero(load_scheme(scheme_2_3).relmap[0] == 4)[0])
        edit_cell(path, 0, y, 5)
        assert run("verify", "--what", "scheme", "--report", tmp_path / "v.json", path) == 1
        finding = read_report(tmp_path / "v.json")['findings'][0]
        assert finding['counterexample'] == {"x": 0, "y": y}

    def test_flipped_symmetric_pair(self, scheme_2_3, tmp_path):
        path = tmp_path / "pair.scheme"
        path.write_bytes(scheme_2_3.read_bytes())
        y = int(np.flatnonzero(load_scheme(scheme_2_3).relmap[0] == 4)[0])
        edit_cell(path, 0, y, 5)
        edit_cell(path, y, 0, 5)
        assert run("verify", "--what", "scheme", "--report", tmp_path / "v.json", path) == 1
        axioms = findings_of(read_report(tmp_path / "v.json"), 'scheme_axioms')[0]
        assert set(axioms['counterexample']) == {"i", "j", "k", "x", "y"}

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.scheme"
        path.write_bytes(b"SCHEME 1 2\n0 1\n")
        assert run("verify", "--what", "scheme", "--report", tmp_path / "v.json", path) == 2

    def test_empty_scheme_file(self, tmp_path):
        path = tmp_path / "empty.scheme"
        path.write_bytes(b"SCHEME 0 0\n")
        assert run("verify", "--what", "scheme", "--report", tmp_path / "v.json", path) == 2

    def test_parameters_out_of_range(self, scheme_2_3, tmp_path):
        assert run("verify", "--what", "scheme", "--n", 2, "--m", 4, "--report", tmp_path / "v.json", scheme_2_3) == 2


class TestExtract:
    """extract recovers and re-certifies the family."""

    def test_round_trip(self, scheme_2_3, tmp_path):
        assert run("extract", "--scheme", scheme_2_3, "--n", 2, "--m", 3, "--out", tmp_path) == 0
        report = read_report(tmp_path / "report.json")
        assert report['permutation'] == list(range(64))
        assert findings_of(report, 'round_trip')[0]['passed']
        assert len(list(tmp_path.glob("H_*.mat"))) == 3

    def test_class3_file_is_rejected(self, tmp_path):
        out = tmp_path / "class3.scheme"
        run("build-scheme", "--family", "3", "--n", 2, "--m", 3, "--out", out)
        assert run("extract", "--scheme", out, "--n", 2, "--m", 3, "--out", tmp_path / "x") == 3


class TestRunCertification:
    """The grid runner's own flags."""

    def test_config_without_a_path(self, capsys):
        assert run_certification.main(["--config"]) == 2
        assert "Usage" in capsys.readouterr().err
