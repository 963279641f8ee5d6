"""Command-line client: formats, exit codes, permutation checks."""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from askein.cli import main

FLAGSHIP_BRAID = "3\n1 -2\n"
TREFOIL_BRAID = "2\n1 1 1\n"
UNKNOT_BRAID = "2\n1\n"
HEXAGON_SLICE = "2\nX 1 +\nU 1\nX 2 +\nX 2 +\nA 3\n"


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def files(tmp_path):
    paths = {}
    for name, text in [("flagship.braid", FLAGSHIP_BRAID),
                       ("trefoil.braid", TREFOIL_BRAID),
                       ("unknot.braid", UNKNOT_BRAID),
                       ("hexagon.slice", HEXAGON_SLICE),
                       ("flagship.txt", FLAGSHIP_BRAID),
                       ("broken.braid", "2\n1 99\n")]:
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


class TestOutput:
    def test_json_deterministic(self, runner, files):
        args = ["skein-homology", files["flagship.braid"]]
        a = runner.invoke(main, args)
        b = runner.invoke(main, args)
        assert a.exit_code == 0
        assert a.output == b.output
        body = json.loads(a.output)
        assert body["mode"] == "annular"
        keys = [(r["h"], r["q"], r["f"]) for r in body["gradings"]]
        assert keys == sorted(keys)

    def test_csv_format(self, runner, files):
        r = runner.invoke(main, ["--format", "csv",
                                 "khovanov-homology", files["trefoil.braid"]])
        assert r.exit_code == 0
        lines = r.output.strip().splitlines()
        assert lines[0].startswith("h,q")
        assert len(lines) == 6  # header + five groups of the trefoil

    def test_text_table_format(self, runner, files):
        r = runner.invoke(main, ["--format", "text-table",
                                 "skein-homology", files["flagship.braid"]])
        assert r.exit_code == 0
        lines = r.output.splitlines()
        assert lines[0].split() == ["h", "q", "f", "free_rank", "torsion"]
        assert set(lines[1]) <= {"-", " "}  # header underline

    def test_ring_z2(self, runner, files):
        r = runner.invoke(main, ["--ring", "Z2",
                                 "khovanov-homology", files["trefoil.braid"]])
        body = json.loads(r.output)
        assert body["ring"] == "Z2"
        assert all(row["torsion"] == [] for row in body["gradings"])

    def test_slice_input(self, runner, files):
        r = runner.invoke(main, ["skein-homology", files["hexagon.slice"]])
        assert r.exit_code == 0
        assert json.loads(r.output)["gradings"]


class TestExitCodes:
    def test_malformed_file_is_input_error(self, runner, files):
        r = runner.invoke(main, ["skein-homology", files["broken.braid"]])
        assert r.exit_code == 2

    def test_unknown_suffix_is_input_error(self, runner, tmp_path):
        p = tmp_path / "what.xyz"
        p.write_text(FLAGSHIP_BRAID)
        r = runner.invoke(main, ["skein-homology", str(p)])
        assert r.exit_code == 2

    def test_kind_override_accepts_other_suffix(self, runner, files):
        r = runner.invoke(main, ["--kind", "braid",
                                 "skein-homology", files["flagship.txt"]])
        assert r.exit_code == 0

    def test_compare_unequal_is_falsified_property(self, runner, files):
        r = runner.invoke(main, ["compare", files["trefoil.braid"],
                                 files["unknot.braid"]])
        assert r.exit_code == 1
        # the table is still printed before the failure is reported
        body = json.loads(r.output[:r.output.rindex("}") + 1])
        assert body["equal"] is False
        assert "differ" in r.output.splitlines()[-1]

    def test_compare_equal_is_success(self, runner, files, tmp_path):
        p = tmp_path / "conj.braid"
        p.write_text("3\n-2 1\n")
        r = runner.invoke(main, ["compare", files["flagship.braid"], str(p)])
        assert r.exit_code == 0
        assert json.loads(r.output)["equal"] is True

    def test_bad_permutation_spec_is_input_error(self, runner, files):
        r = runner.invoke(main, ["--permute-crossings", "bogus",
                                 "skein-homology", files["trefoil.braid"]])
        assert r.exit_code == 2


class TestPermuteCrossings:
    @pytest.mark.parametrize("spec", ["reverse", "seed:3", "2,0,1"])
    def test_specs_verify(self, runner, files, spec):
        r = runner.invoke(main, ["--permute-crossings", spec,
                                 "skein-homology", files["trefoil.braid"]])
        assert r.exit_code == 0
        body = json.loads(r.output)
        assert body["permutation_invariant"] is True
        assert sorted(body["permutation"]) == [0, 1, 2]

    def test_wrong_length_list_is_input_error(self, runner, files):
        r = runner.invoke(main, ["--permute-crossings", "1,0",
                                 "skein-homology", files["trefoil.braid"]])
        assert r.exit_code == 2


class TestAnalysisCommands:
    def test_transverse(self, runner, files):
        r = runner.invoke(main, ["transverse", files["flagship.braid"]])
        assert r.exit_code == 0
        body = json.loads(r.output)
        assert body["sl"] == -3 and body["ok"] is True
        assert body["oriented_extreme"] is True

    def test_transverse_shallow(self, runner, files):
        r = runner.invoke(main, ["transverse", "--shallow",
                                 files["flagship.braid"]])
        assert r.exit_code == 0
        assert "fh_min" not in json.loads(r.output)

    def test_decompose(self, runner, files):
        r = runner.invoke(main, ["decompose", files["flagship.braid"]])
        assert r.exit_code == 0
        assert json.loads(r.output)["ok"] is True

    def test_extreme_map_explicit_quantum(self, runner, files):
        r = runner.invoke(main, ["extreme-map", "-q", "-3",
                                 files["flagship.braid"]])
        assert r.exit_code == 0
        body = json.loads(r.output)
        assert body["q"] == -3 and body["subcomplex_closed"] is True

    def test_verify_moduli(self, runner, files):
        r = runner.invoke(main, ["--convention", "opposite",
                                 "verify-moduli", "--index", "3",
                                 "--list-limit", "2", files["hexagon.slice"]])
        assert r.exit_code == 0
        body = json.loads(r.output)
        assert body["ok"] is True
        assert body["convention"] == "opposite"
        assert body["violations"] == 0
        assert body["configurations"] >= 1
        assert len(body["entries"]) <= 2

    def test_selfcheck(self, runner):
        r = runner.invoke(main, ["selfcheck", "--limit", "5"])
        assert r.exit_code == 0
        body = json.loads(r.output)
        assert body["ok"] is True and body["entries_checked"] == 5


class TestServerMode:
    def test_server_flag_round_trips_through_http_layer(self, runner, files,
                                                        monkeypatch):
        import warnings

        import httpx

        from askein.service import create_app
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            from fastapi.testclient import TestClient
        seen = {}

        def fake_client(**kwargs):
            seen.update(kwargs)
            return TestClient(create_app())

        monkeypatch.setattr(httpx, "Client", fake_client)
        direct = runner.invoke(main, ["skein-homology",
                                      files["flagship.braid"]])
        via = runner.invoke(main, ["--server", "http://example.invalid",
                                   "skein-homology", files["flagship.braid"]])
        assert via.exit_code == 0
        assert via.output == direct.output
        assert seen["base_url"] == "http://example.invalid"
