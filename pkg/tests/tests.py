import json
import time

import pytest

from src.config import DEFAULT_CONFIG
from src.corpus import DEFAULT_CORPUS, list_model_folders, load_model
from src.errors import InvalidModelError
from src.main import main
from src.paper_runner import execute_claims, verify_paper
from src.parser import Report, parse_report, serialize_report

EX5_1 = f"{DEFAULT_CORPUS}/ex5_1/surface.json"
EX5_2 = f"{DEFAULT_CORPUS}/ex5_2/surface.json"
EX5_3 = f"{DEFAULT_CORPUS}/ex5_3/surface.json"
STEEP = f"{DEFAULT_CORPUS}/steep_f1/surface.json"


def run_cli(capsys, *argv):
    code = main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, out


def records(out, kind):
    return [r for r in json.loads(out)["records"] if r["kind"] == kind]


def test_all_models():
    folders = list_model_folders()
    print(f"Starting replay of {len(folders)} models")
    testing_metadata = {}

    for folder in folders:
        entry = load_model(folder)
        report = Report(command="test")
        start_time = time.time()
        execute_claims(entry, DEFAULT_CONFIG, {}, report)
        runtime = time.time() - start_time
        testing_metadata[entry.name] = {
            "claims": len(entry.claims),
            "failures": report.failures,
            "runtime": runtime,
        }
        print(f"{entry.name}: {len(entry.claims)} claims, {len(report.failures)} failures, {runtime:.2f}s")

    for name, metadata in testing_metadata.items():
        assert metadata["failures"] == [], f"{name}: {metadata['failures']}"


def test_verify_paper_passes():
    report = verify_paper(family_b_max=4)
    assert report.failures == []
    assert report.exit_code == 0


def test_verify_paper_runs_every_suite_at_full_scope():
    report = verify_paper()
    assert report.failures == []
    properties = {r.subject: r.data for r in report.records if r.kind == "property"}
    assert sorted(properties) == [
        "cohomology engine",
        "family growth",
        "h1 propagation",
        "monotonicity and dominance",
        "vanishing inequalities",
    ]
    assert all(data["violations"] == [] for data in properties.values())
    families = {r.subject: r.data for r in report.records if r.kind == "family"}
    assert families["ex5_3 n=5"]["b_max"] == "30"
    assert families["ex5_4 n=2"]["solutions"] != "0"


def test_corrupted_claim_is_named():
    report = verify_paper(corrupt=["ex5_1.B2=3"], family_b_max=4)
    assert report.exit_code == 1
    assert len(report.failures) == 1
    assert report.failures[0].startswith("ex5_1.B2:")
    with pytest.raises(InvalidModelError):
        verify_paper(corrupt=["ex5_1.nonexistent=3"], family_b_max=4)


def test_cli_verify_paper(capsys):
    code, out = run_cli(capsys, "verify-paper", "--b-max", "4")
    assert code == 0
    assert json.loads(out)["failures"] == []
    code, out = run_cli(capsys, "verify-paper", "--b-max", "4", "--corrupt", "ex5_3.p_g=12")
    assert code == 1
    assert any("ex5_3.p_g" in f for f in json.loads(out)["failures"])
    code, _ = run_cli(capsys, "verify-paper", "--corrupt", "no_dot=1")
    assert code == 2


def test_cli_describe(capsys):
    code, out = run_cli(capsys, "describe", EX5_1)
    assert code == 0
    (inv,) = records(out, "invariants")
    assert (inv["data"]["B2"], inv["data"]["BK"], inv["data"]["K2"]) == ("2", "4", "8")
    assert (inv["data"]["p_g"], inv["data"]["q"]) == ("6", "0")
    (search,) = records(out, "search")
    assert search["data"]["regularity"] == "4"
    assert search["data"]["k_plus_b_provenance"] == "base-class check"

    code, out = run_cli(capsys, "describe", EX5_3)
    assert records(out, "search")[0]["data"]["least_n_2K"] == "2"

    code, out = run_cli(capsys, "describe", "--seed-corpus", DEFAULT_CORPUS)
    assert code == 0
    assert len(records(out, "invariants")) == len(list_model_folders())


def test_cli_coh(capsys):
    code, out = run_cli(capsys, "coh", EX5_1, "--class", "0", "--twists", "0:1")
    assert code == 0
    rows = {r["subject"]: r["data"] for r in records(out, "cohomology")}
    assert rows["t=0"]["h0"] == "1"
    assert rows["t=1"]["h1"] == "0"
    code, out = run_cli(capsys, "coh", EX5_3, "--class", "0", "0", "--twists", "3:3")
    assert records(out, "cohomology")[0]["data"]["h1"] == "0"
    code, _ = run_cli(capsys, "coh", EX5_3, "--class", "1", "--twists", "0:0")
    assert code == 2


def test_cli_certify(capsys):
    code, out = run_cli(capsys, "certify", EX5_2, "--p", "1")
    assert code == 0
    (cert,) = records(out, "certificate")
    assert cert["data"]["rule_id"] == "n1_3"
    assert int(cert["data"]["r"]) <= 5

    code, out = run_cli(capsys, "certify", STEEP, "--p", "0", "--r", "3")
    assert code == 1
    assert records(out, "inapplicable")[0]["data"]["blocking"]

    code, out = run_cli(capsys, "certify", f"{DEFAULT_CORPUS}/ex5_7/surface.json", "--p", "0", "--mult", "3", "3")
    assert code == 0
    assert records(out, "multiplication")[0]["data"]["rule_id"] == "mult_regular"

    code, _ = run_cli(capsys, "certify", EX5_1, "--p", "0", "--r", "2")
    assert code == 2


def test_cli_family(capsys):
    code, out = run_cli(capsys, "family", "ex5_3", "--n", "2", "--b-max", "10")
    assert code == 0
    subjects = [r["subject"] for r in records(out, "solution")]
    assert "ex5_3 n=2 b=4 m=5 degree=2" in subjects
    code, out = run_cli(capsys, "family", "classics")
    assert code == 0
    statuses = [r["data"]["status"] for r in records(out, "claim")]
    assert statuses.count("unverifiable") == 2
    code, out = run_cli(capsys, "family", "ex5_7", "--n", "3", "--m", "3")
    assert code == 0
    code, _ = run_cli(capsys, "family", "ex5_7", "--n", "3", "--m", "4")
    assert code == 2


def test_cli_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"base": {"kind": "plane"}, "cover": {"degree": 1, "branch_class": [5]}, "bundle": [1]}))
    code, _ = run_cli(capsys, "describe", str(bad))
    assert code == 2
    bad.write_text('{"base": ')
    code, _ = run_cli(capsys, "describe", str(bad))
    assert code == 2
    code, _ = run_cli(capsys, "describe", EX5_1, "--n-max", "1")
    assert code == 2


def test_machine_section_is_deterministic_and_round_trips(capsys):
    _, first = run_cli(capsys, "certify", EX5_3, "--p", "2", "--r", "5")
    _, second = run_cli(capsys, "certify", EX5_3, "--p", "2", "--r", "5")
    assert first == second
    assert serialize_report(parse_report(first)) + "\n" == first


def test_human_section(capsys):
    code = main(["describe", EX5_1])
    out = capsys.readouterr().out
    assert code == 0
    assert "describe: invariants" in out
    assert '"command": "describe"' in out


if __name__ == "__main__":
    test_all_models()
