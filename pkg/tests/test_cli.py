"""Job parsing, report structure, determinism, and exit codes."""

import io
import json

import pytest

from crepant.cli import (
    EXIT_CHECK_FAILED,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_PRECONDITION,
    JobError,
    PreconditionError,
    main,
    parse_job,
    render_report,
    run,
)
from crepant.mckay import ConsistencyError

from conftest import EX72_ROWS, Q8_ROWS


def doc(dimension, generators, **extra):
    return json.dumps(
        {"dimension": dimension, "generators": generators, **extra}
    )


EX72_DOC = doc(4, [EX72_ROWS])
Q8_DOC = doc(2, [[list(r) for r in m] for m in Q8_ROWS])
GL_DOC = doc(2, [[["-1", "0"], ["0", "1"]]])
TRIVIAL_DOC = doc(3, [[["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]])


# --- parse_job ----------------------------------------------------------------


def test_parse_job_fields():
    job = parse_job(EX72_DOC)
    assert job.dimension == 4
    assert len(job.generators) == 1
    assert job.mode == "analyze"
    assert job.character is None
    assert job.max_group_size == 20000
    assert job.twist == 1
    echo = job.canonical_generators()
    assert echo[0][2][2] == "-E(3)"
    assert echo[0][3][3] == "1+E(3)"


def test_parse_job_accepts_integer_entries():
    job = parse_job(doc(2, [[[1, 0], [0, -1]]]))
    assert job.generators[0].render_rows() == [["1", "0"], ["0", "-1"]]


def test_parse_job_reads_files(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(EX72_DOC)
    job = parse_job(str(path))
    assert job.dimension == 4
    with pytest.raises(JobError, match="cannot read"):
        parse_job(str(tmp_path / "missing.json"))


def test_parse_job_document_errors():
    with pytest.raises(JobError, match="invalid JSON"):
        parse_job("not json {")
    with pytest.raises(JobError, match="JSON object"):
        parse_job("[1, 2]")
    with pytest.raises(JobError, match="needs a dimension"):
        parse_job(json.dumps({"generators": [[["1"]]]}))
    with pytest.raises(JobError, match="positive integer"):
        parse_job(doc(0, [[["1"]]]))
    with pytest.raises(JobError, match="positive integer"):
        parse_job(json.dumps({"dimension": True, "generators": [[["1"]]]}))
    with pytest.raises(JobError, match="nonempty generator list"):
        parse_job(doc(2, []))
    with pytest.raises(JobError, match="unknown job fields: extra"):
        parse_job(doc(1, [[["1"]]], extra=1))


def test_parse_job_matrix_errors():
    with pytest.raises(JobError, match="generator 1: has 2 rows"):
        parse_job(doc(3, [[["1", "0"], ["0", "1"]]]))
    with pytest.raises(JobError, match="row 2: expected 2 entries"):
        parse_job(doc(2, [[["1", "0"], ["0"]]]))
    with pytest.raises(JobError, match="expression strings or integers"):
        parse_job(doc(1, [[[True]]]))
    try:
        parse_job(doc(2, [[["E(3", "0"], ["0", "1"]]]))
    except JobError as exc:
        message = str(exc)
        assert "generator 1, row 1, column 1" in message
        assert "position" in message
    else:
        pytest.fail("bad expression accepted")


def test_parse_job_character_validation():
    job = parse_job(EX72_DOC.replace("}", ', "character": [1]}'))
    assert job.character == (1,)
    with pytest.raises(JobError, match="list of integers"):
        parse_job(doc(1, [[["1"]]], character=["x"]))


def test_parse_job_option_validation():
    with pytest.raises(JobError, match="unknown mode"):
        parse_job(EX72_DOC, mode="explode")
    with pytest.raises(JobError, match="max group size"):
        parse_job(EX72_DOC, max_group_size=0)
    with pytest.raises(JobError, match="twist"):
        parse_job(EX72_DOC, twist=0)
    with pytest.raises(JobError, match="degree bound"):
        parse_job(EX72_DOC, degree_bound=0)
    with pytest.raises(JobError, match="format"):
        parse_job(EX72_DOC, output_format="xml")


# --- run: analyze -------------------------------------------------------------


def test_analyze_golden_report():
    report, status = run(parse_job(EX72_DOC))
    assert status == EXIT_OK
    assert report["schema_version"] == 1
    assert report["mode"] == "analyze"
    assert report["group"]["order"] == 6
    assert report["group"]["is_special_linear"] is True
    body = report["analyze"]
    assert body["free_rank"] == 2
    assert body["torsion"] == [2]
    assert body["is_free"] is False
    assert body["quotient_class_group"] == [6]
    assert body["abelianization"] == [6]
    assert body["junior_abelian_image"] == [3]
    assert body["junior"]["class_count"] == 2
    assert [b["id"] for b in body["junior"]["class_representatives"]] == [2, 4]
    assert body["junior"]["subgroup_order"] == 3
    assert [b["id"] for b in body["pushforward"]["free_images"]] == [2, 4]
    witnesses = body["pushforward"]["torsion_witnesses"]
    assert [b["id"] for b in witnesses] == [3]
    assert witnesses[0]["matrix"] == [
        ["-1", "0", "0", "0"],
        ["0", "-1", "0", "0"],
        ["0", "0", "-1", "0"],
        ["0", "0", "0", "-1"],
    ]
    assert body["all_checks_passed"] is True


def test_analyze_trivial_group():
    report, status = run(parse_job(TRIVIAL_DOC))
    assert status == EXIT_OK
    body = report["analyze"]
    assert body["free_rank"] == 0
    assert body["torsion"] == []
    assert body["is_free"] is True
    assert body["quotient_class_group"] == []
    assert body["junior"]["class_count"] == 0
    assert body["pushforward"]["free_images"] == []
    assert body["pushforward"]["torsion_witnesses"] == []
    assert body["all_checks_passed"] is True


def test_analyze_twist_stability():
    base, _ = run(parse_job(EX72_DOC))
    twisted, status = run(parse_job(EX72_DOC, twist=5))
    assert status == EXIT_OK
    assert twisted["analyze"]["free_rank"] == base["analyze"]["free_rank"]
    assert twisted["analyze"]["torsion"] == base["analyze"]["torsion"]


# --- run: age -----------------------------------------------------------------


def test_age_mode_on_q8():
    report, status = run(parse_job(Q8_DOC, mode="age"))
    assert status == EXIT_OK
    classes = report["age"]["conjugacy_classes"]
    assert sorted(c["class_size"] for c in classes) == [1, 1, 2, 2, 2]
    assert sorted(c["age"] for c in classes) == ["0", "1", "1", "1", "1"]
    assert classes[0]["representative"]["id"] == 0
    assert classes[0]["age"] == "0"
    assert report["age"]["junior_class_count"] == 4
    assert not any(c["is_reflection"] for c in classes)


def test_age_mode_allows_general_linear_and_fractions():
    report, status = run(parse_job(GL_DOC, mode="age"))
    assert status == EXIT_OK
    classes = report["age"]["conjugacy_classes"]
    assert [c["age"] for c in classes] == ["0", "1/2"]
    assert classes[1]["is_reflection"] is True
    assert report["group"]["is_special_linear"] is False


# --- run: invariant -----------------------------------------------------------


def test_invariant_mode_with_character():
    report, status = run(
        parse_job(EX72_DOC.replace("}", ', "character": [1]}'), mode="invariant")
    )
    assert status == EXIT_OK
    body = report["invariant"]
    assert body["character"]["invariant_factors"] == [6]
    assert body["character"]["exponents"] == [1]
    assert body["invariant"]["polynomial"] == "6*x3"
    assert body["invariant"]["total_degree"] == 1
    assert body["invariant"]["graded_residues"] == [
        {"generator_id": 1, "order": 6, "residue": 5}
    ]


def test_invariant_mode_defaults_to_trivial_character():
    report, status = run(parse_job(EX72_DOC, mode="invariant"))
    assert status == EXIT_OK
    body = report["invariant"]
    assert body["character"]["exponents"] == [0]
    assert body["invariant"]["polynomial"] == "6*x1^2"
    assert body["invariant"]["graded_residues"][0]["residue"] == 0


def test_invariant_character_length_checked():
    with pytest.raises(JobError, match="character needs 1 exponents"):
        run(parse_job(EX72_DOC.replace("}", ', "character": [1, 0]}'),
                      mode="invariant"))


def test_invariant_degree_bound_exhaustion():
    with pytest.raises(PreconditionError, match="degree 3"):
        run(parse_job(Q8_DOC, mode="invariant", degree_bound=3))


# --- run: check and sweep -----------------------------------------------------


def test_check_mode_passes_everything():
    report, status = run(parse_job(EX72_DOC, mode="check"))
    assert status == EXIT_OK
    body = report["check"]
    assert body["all_passed"] is True
    names = [c["name"] for c in body["checks"]]
    assert "order_product" in names
    assert "galois_sweep" in names
    assert "freeness_routes" in names
    # 8 structural checks + sweep + freeness + 3 per character of Z/6
    assert len(names) == 10 + 18
    assert body["summary"] == "28/28 checks passed"
    assert all(c["passed"] for c in body["checks"])


def test_sweep_mode_table():
    report, status = run(parse_job(EX72_DOC, mode="sweep"))
    assert status == EXIT_OK
    body = report["sweep"]
    assert body["consistent"] is True
    assert body["junior_count"] == 2
    assert body["torsion"] == [2]
    assert [e["twist"] for e in body["twists"]] == [1, 5]
    assert all(e["junior_element_ids"] == [2, 4] for e in body["twists"])


def test_sweep_inconsistency_surfaces_as_check_failure(monkeypatch):
    import crepant.cli as cli_module

    def boom(_grp):
        raise ConsistencyError("forced sweep mismatch")

    monkeypatch.setattr(cli_module, "galois_sweep", boom)
    report, status = run(parse_job(EX72_DOC, mode="sweep"))
    assert status == EXIT_CHECK_FAILED
    assert report["sweep"]["consistent"] is False
    assert "forced sweep mismatch" in report["sweep"]["error"]
    report, status = run(parse_job(EX72_DOC, mode="check"))
    assert status == EXIT_CHECK_FAILED
    sweep_check = next(
        c for c in report["check"]["checks"] if c["name"] == "galois_sweep"
    )
    assert sweep_check["passed"] is False


# --- rendering ----------------------------------------------------------------


def test_json_rendering_round_trips():
    report, _ = run(parse_job(EX72_DOC))
    text = render_report(report, "json")
    assert json.loads(text) == report
    assert text.endswith("\n")


def test_text_rendering_projects_the_structure():
    report, _ = run(parse_job(EX72_DOC))
    text = render_report(report, "text")
    assert "free_rank: 2" in text
    assert "torsion: [2]" in text
    assert "all_checks_passed: true" in text
    assert "- [-1, 0, 0, 0]" in text
    assert text.endswith("\n")


def test_reports_are_deterministic():
    a, _ = run(parse_job(EX72_DOC))
    b, _ = run(parse_job(EX72_DOC))
    assert render_report(a, "json") == render_report(b, "json")
    assert render_report(a, "text") == render_report(b, "text")


# --- main() and exit codes ------------------------------------------------------


def run_main(args, stdin_text=None, monkeypatch=None, capsys=None):
    if stdin_text is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_main_stdin_to_stdout(monkeypatch, capsys):
    code, out, err = run_main(
        ["analyze", "--format", "json"],
        stdin_text=EX72_DOC,
        monkeypatch=monkeypatch,
        capsys=capsys,
    )
    assert code == EXIT_OK
    assert err == ""
    payload = json.loads(out)
    assert payload["analyze"]["free_rank"] == 2


def test_main_output_file(tmp_path, monkeypatch, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_main(
        ["analyze", "--format", "json", "--output", str(target)],
        stdin_text=EX72_DOC,
        monkeypatch=monkeypatch,
        capsys=capsys,
    )
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(target.read_text())["analyze"]["torsion"] == [2]


def test_main_byte_identical_runs(tmp_path):
    source = tmp_path / "job.json"
    source.write_text(EX72_DOC)
    first = tmp_path / "a.txt"
    second = tmp_path / "b.txt"
    for target in (first, second):
        assert main(
            ["analyze", "--input", str(source), "--output", str(target)]
        ) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_main_input_error_exit(monkeypatch, capsys):
    code, out, err = run_main(
        ["analyze"], stdin_text="{bad", monkeypatch=monkeypatch, capsys=capsys
    )
    assert code == EXIT_INPUT
    assert out == ""
    assert err.startswith("error: invalid JSON")


def test_main_expression_error_mentions_location(monkeypatch, capsys):
    bad = doc(2, [[["E(3", "0"], ["0", "1"]]])
    code, _, err = run_main(
        ["analyze"], stdin_text=bad, monkeypatch=monkeypatch, capsys=capsys
    )
    assert code == EXIT_INPUT
    assert "generator 1, row 1, column 1" in err
    assert "position" in err


def test_main_precondition_exits(monkeypatch, capsys, tmp_path):
    code, _, err = run_main(
        ["analyze"], stdin_text=GL_DOC, monkeypatch=monkeypatch, capsys=capsys
    )
    assert code == EXIT_PRECONDITION
    assert "determinant-one" in err
    code, _, err = run_main(
        ["age"], stdin_text=GL_DOC, monkeypatch=monkeypatch, capsys=capsys
    )
    assert code == EXIT_OK
    seven = doc(1, [[["E(7)"]]])
    code, _, err = run_main(
        ["analyze", "--max-group-size", "5"],
        stdin_text=seven,
        monkeypatch=monkeypatch,
        capsys=capsys,
    )
    assert code == EXIT_PRECONDITION
    assert "exceeded 5" in err
    code, _, err = run_main(
        ["invariant", "--degree-bound", "3"],
        stdin_text=Q8_DOC,
        monkeypatch=monkeypatch,
        capsys=capsys,
    )
    assert code == EXIT_PRECONDITION
    assert "degree 3" in err


def test_main_bad_twist_is_input_error(monkeypatch, capsys):
    code, _, err = run_main(
        ["analyze", "--twist", "3"],
        stdin_text=EX72_DOC,
        monkeypatch=monkeypatch,
        capsys=capsys,
    )
    assert code == EXIT_INPUT
    assert "not invertible" in err


def test_main_rejects_unknown_mode():
    with pytest.raises(SystemExit) as exc:
        main(["explode"])
    assert exc.value.code == 2
