#!/usr/bin/env python3
"""
Test the command-line front end and its exit codes.

Usage:
    pytest tests/test_cli.py
"""

import json

import numpy as np
import pytest

from main import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from services.boundary import map_codomain
from services.generators import random_instance
from transports.instance.codec import write_instance


@pytest.fixture
def instance_path(tmp_path):
    path = tmp_path / "sym.json"
    assert main(["gen", "symmetric", "--dim", "3", "--seed", "1", "-o", str(path)]) == EXIT_OK
    return path


def test_gen_writes_a_readable_file(instance_path):
    document = json.loads(instance_path.read_text(encoding="utf-8"))
    assert document["kind"] == "symmetric"
    assert document["space"]["dim"] == 3


def test_gen_to_stdout(capsys):
    assert main(["gen", "qsc", "--dim", "2", "--seed", "3"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["kind"] == "qsc"


def test_verify_green(instance_path, tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "green", "-i", str(instance_path), "-o", str(out)]) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["passed"]
    assert report["suite"] == "green"


def test_verify_campaign(tmp_path):
    out = tmp_path / "campaign.json"
    argv = ["verify", "green", "--kind", "symmetric", "--dim", "3", "--instances", "3", "-o", str(out)]
    assert main(argv) == EXIT_OK
    summary = json.loads(out.read_text(encoding="utf-8"))
    assert summary["instances"] == 3
    assert [r["instance"] for r in summary["results"]] == ["symmetric/3/0", "symmetric/3/1", "symmetric/3/2"]


@pytest.mark.parametrize("kind", ["dualpair", "dbt", "pontryagin"])
def test_verify_all_campaign(kind, tmp_path):
    out = tmp_path / "campaign.json"
    argv = ["verify", "all", "--kind", kind, "--dim", "2", "--instances", "2", "-o", str(out)]
    assert main(argv) == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["instances"] == 2


def test_campaign_needs_a_kind():
    assert main(["verify", "green", "--instances", "2"]) == EXIT_USAGE


def test_broken_file_fails_verification(tmp_path):
    instance = random_instance("symmetric", 3, 1)
    bp = instance.bp
    broken = bp.model_copy(update={"GammaA": map_codomain(bp.GammaA, 2 * np.eye(bp.g_dim))})
    path = write_instance(tmp_path / "broken.json", instance.model_copy(update={"bp": broken}))
    assert main(["verify", "green", "-i", str(path)]) == EXIT_FAIL


def test_unreadable_files_are_usage_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json", encoding="utf-8")
    assert main(["verify", "green", "-i", str(bad)]) == EXIT_USAGE
    assert main(["classify", "-i", str(tmp_path / "absent.json")]) == EXIT_USAGE
    assert main(["verify", "green"]) == EXIT_USAGE


def test_classify(instance_path, capsys):
    assert main(["classify", "-i", str(instance_path)]) == EXIT_OK
    flags = json.loads(capsys.readouterr().out)
    assert flags["ibp"] and flags["bt"]


def test_weyl(instance_path, capsys):
    assert main(["weyl", "-i", str(instance_path), "--lam", "1+2i"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["lam"] == [1.0, 2.0]
    assert payload["value"] is not None


def test_weyl_rejects_bad_point(instance_path):
    assert main(["weyl", "-i", str(instance_path), "--lam", "abc"]) == EXIT_USAGE


def test_equiv_needs_two_files(instance_path):
    assert main(["equiv", "-i", str(instance_path)]) == EXIT_USAGE


def test_equiv_of_a_file_with_itself(instance_path, capsys):
    argv = ["equiv", "-i", str(instance_path), "-i", str(instance_path), "--grid", "i,2i,1+i,-1+2i"]
    assert main(argv) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["weyl_match"]
    assert report["unit_holds"]


def test_invalid_tolerance_is_a_usage_error(instance_path):
    assert main(["classify", "-i", str(instance_path), "--tol-rank", "2"]) == EXIT_USAGE


def test_unknown_command_exits_through_argparse():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE
