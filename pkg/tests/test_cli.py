from __future__ import annotations

import csv
import json
import re

import pytest

from preslab.cli import DEFAULTS, SUITES, main, regress, run_suite


def test_every_suite_has_pinned_defaults():
    assert set(DEFAULTS) == set(SUITES)


@pytest.mark.parametrize("name", ["finite-lemma", "drop-hypothesis", "zigzag", "arc", "eersteex", "derdeex"])
def test_suites_pass_at_small_bounds(name, tmp_path):
    out = tmp_path / "r.json"
    args = ["suite", name, "--json", str(out), "--max-x", "2", "--max-y", "2", "--depth", "4", "--samples", "20"]
    assert main(args) == 0
    report = json.loads(out.read_text())
    assert report["schema_version"] == "1.0"
    assert report["suite"] == name
    assert report["violations"] == []
    assert "elapsed_ms" in report


def test_omega_fiber_small(tmp_path, capsys):
    assert main(["suite", "omega-fiber", "--max-exceptions", "1", "--max-value", "2"]) == 0
    assert "omega-fiber: PASS" in capsys.readouterr().out


def test_reports_are_byte_identical_without_timing():
    a = run_suite("arc", {"depth": 5}).dumps(timing=False)
    b = run_suite("arc", {"depth": 5}).dumps(timing=False)
    assert a == b and "elapsed_ms" not in a


def test_rationals_serialize_as_fraction_strings():
    report = run_suite("eersteex", {"samples": 3}).to_json()
    text = json.dumps(report)
    assert re.search(r'"\d+/\d+"', text)
    assert not re.search(r"\d\.\d", text.replace('"schema_version": "1.0"', ""))


def test_false_certificate_exits_one(monkeypatch):
    from preslab import cli, gallery

    real = gallery.certify_arc_noncompact

    def tampered(arc):
        arc.targets[1] = gallery.HALF
        return real(arc)

    monkeypatch.setattr(cli.gallery, "certify_arc_noncompact", tampered)
    assert main(["suite", "arc", "--depth", "3"]) == 1


def test_usage_errors_exit_two(capsys):
    assert main(["suite", "no-such-suite"]) == 2
    assert main(["build", "nope"]) == 2
    assert main([]) == 2
    assert main(["build", "zigzag", "--depth", "0"]) == 2


def test_build_tweedeex(tmp_path):
    j, c = tmp_path / "arc.json", tmp_path / "arc.csv"
    assert main(["build", "tweedeex", "--depth", "8", "--json", str(j), "--csv", str(c)]) == 0
    data = json.loads(j.read_text())
    assert len(data["arc"]["alphas"]) == 9
    rows = list(csv.reader(c.open()))
    assert rows[0] == ["segment", "x0", "y0", "x1", "y1"]
    assert [r[0] for r in rows[1:3]] == ["V0", "H0"]
    assert len(rows) == 1 + 2 * 9


def test_build_zigzag_nodes(tmp_path):
    c = tmp_path / "z.csv"
    assert main(["build", "zigzag", "--depth", "6", "--json", str(tmp_path / "z.json"), "--csv", str(c)]) == 0
    rows = list(csv.reader(c.open()))[1:]
    assert len(rows) == 64
    assert rows[0] == ["1", "1/1", "-1/1"] and rows[-1] == ["64", "1/64", "1/1"]


@pytest.mark.parametrize("name", ["eersteex", "derdeex"])
def test_build_other_examples(name, tmp_path, capsys):
    c = tmp_path / "x.csv"
    assert main(["build", name, "--depth", "3", "--csv", str(c)]) == 0
    assert json.loads(capsys.readouterr().out)["example"] == name
    assert len(c.read_text().splitlines()) > 2


def test_regress_round_trip_and_perturbation(tmp_path):
    suites = ("arc", "derdeex")
    assert regress(tmp_path, update=True, suites=suites) == 0
    assert regress(tmp_path, suites=suites) == 0
    arc = json.loads((tmp_path / "arc.json").read_text())
    pieces = arc["diagnostics"]["ledger"]["pieces"]
    pieces[0], pieces[1] = pieces[1], pieces[0]
    (tmp_path / "arc.json").write_text(json.dumps(arc, indent=2, sort_keys=True) + "\n")
    assert regress(tmp_path, suites=suites) == 1


def test_regress_missing_goldens(tmp_path):
    assert main(["regress", str(tmp_path / "absent")]) == 2
    assert regress(tmp_path, suites=("arc",)) == 2
