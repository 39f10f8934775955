"""CLI tests: command dispatch, exit codes, JSON shape, golden determinism.

Set DESCENT_KIT_UPDATE_GOLDENS=1 and run this module to regenerate the
expected outputs under tests/goldens/.
"""

import io
import json
import os

import pytest

from descent_kit import cli, descent, dsl
from descent_kit.errors import NotAForm

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "goldens")

T1 = 'tower { p 2 base t insep a1 { n 1 value "t" } }\n'
T3 = ('tower { p 3 base t sep i { minpoly "i^2 + 1" autos { c "2*i" } }'
      ' insep b { n 1 value "t" } }\n')

# golden name -> (document, command, extra flags, expected exit code)
GOLDEN_CASES = [
    ("describe_t1", "describe_t1.dk", "describe", (), 0),
    ("describe_t2", "describe_t2.dk", "describe", (), 0),
    ("describe_t2_pretty", "describe_t2.dk", "describe", ("--pretty",), 0),
    ("validate_t3", "validate_t3.dk", "validate", (), 0),
    ("validate_pdep_fail", "validate_pdep_fail.dk", "validate", (), 1),
    ("fixed_ring_t1", "fixed_ring_t1.dk", "fixed-ring", (), 0),
    ("apply_t1", "apply_t1.dk", "apply", (), 0),
    ("subspace_twisted_t1", "subspace_twisted_t1.dk", "check-subspace",
     ("--oracle",), 1),
    ("subspace_rational_t2", "subspace_rational_t2.dk", "check-subspace",
     ("--oracle",), 0),
    ("kform_t1", "kform_t1.dk", "kform", (), 0),
    ("ideal_reject_t1", "ideal_reject_t1.dk", "check-ideal", (), 1),
    ("ideal_accept_t1", "ideal_accept_t1.dk", "check-ideal", (), 0),
    ("morphism_t3", "morphism_t3.dk", "check-morphism", (), 1),
    ("deform_t3", "deform_t3.dk", "deform-check", ("--oracle",), 0),
]


def run_cli(args, stdin_text=None, monkeypatch=None, capsys=None):
    if stdin_text is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    code = cli.run(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def run_doc(capsys, command, path, flags=()):
    code = cli.run([command, "--input", path, *flags])
    out, err = capsys.readouterr()
    return code, out, err


# ------------------------------------------------------------------- goldens

def test_golden_corpus_byte_identical(capsys):
    update = os.environ.get("DESCENT_KIT_UPDATE_GOLDENS") == "1"
    assert len({doc for _, doc, _, _, _ in GOLDEN_CASES}) >= 10
    for name, doc, command, flags, want_code in GOLDEN_CASES:
        path = os.path.join(GOLDEN_DIR, doc)
        code1, out1, err1 = run_doc(capsys, command, path, flags)
        code2, out2, err2 = run_doc(capsys, command, path, flags)
        assert out1 == out2, "two runs of %s differ" % name
        assert err1 == err2 == ""
        assert code1 == code2 == want_code, name
        golden = os.path.join(GOLDEN_DIR, name + ".out")
        if update:
            with open(golden, "w", encoding="utf-8") as fh:
                fh.write(out1)
        else:
            with open(golden, "r", encoding="utf-8") as fh:
                assert out1 == fh.read(), "golden mismatch for %s" % name


def test_golden_reports_are_valid_sorted_json():
    for name, _, _, flags, _ in GOLDEN_CASES:
        if "--pretty" in flags:
            continue
        golden = os.path.join(GOLDEN_DIR, name + ".out")
        with open(golden, "r", encoding="utf-8") as fh:
            for line in fh.read().splitlines():
                rep = json.loads(line)
                assert list(rep) == sorted(rep)
                assert "task" in rep


# ------------------------------------------------------------- frozen shapes

def test_describe_t2_frozen_numbers(capsys):
    path = os.path.join(GOLDEN_DIR, "describe_t2.dk")
    code, out, _ = run_doc(capsys, "describe", path)
    rep = json.loads(out)
    assert code == 0
    assert rep["degree"] == "8"
    assert rep["exponent"] == "2"
    assert rep["truncation"] == "4"
    assert rep["basis"][0] == "1"
    assert len(rep["basis"]) == 8


def test_apply_phi1_frozen_image(capsys, monkeypatch):
    doc = T1 + "apply { map phi_1 to a1 }\n"
    code, out, _ = run_cli(["apply"], doc, monkeypatch, capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["result"] == "a1 + X"


def test_report_schema_invariants(capsys, monkeypatch):
    doc = T1 + "check-subspace { ambient 2 basis (a1, 1) }\n"
    code, out, _ = run_cli(["check-subspace"], doc, monkeypatch, capsys)
    rep = json.loads(out)
    assert code == 1
    assert rep["verdict"] == "not_defined_over_K"
    assert "k_form" not in rep
    assert set(rep["witness"]) == {"element", "generator", "image"}

    doc = T1 + "check-subspace { ambient 2 basis (a1, a1) }\n"
    code, out, _ = run_cli(["check-subspace"], doc, monkeypatch, capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "defined_over_K"
    assert rep["k_form"] == [["1", "1"]]
    assert "witness" not in rep


def test_emitted_elements_reparse(capsys, monkeypatch):
    doc = T3 + "check-subspace { ambient 2 basis (b, 1) }\n"
    code, out, _ = run_cli(["check-subspace"], doc, monkeypatch, capsys)
    rep = json.loads(out)
    spec = dsl.build_spec(dsl.parse_input(T3).decl)
    w = rep["witness"]
    vec = [dsl.eval_element(spec, dsl.parse_expression(s))
           for s in w["element"]]
    assert vec == [spec.generator("b"), spec.one()]


# ----------------------------------------------------------------- exit codes

def test_exit_code_2_on_syntax_error(capsys, monkeypatch):
    code, out, err = run_cli(["describe"], "tower { p }", monkeypatch, capsys)
    assert code == 2
    assert out == ""
    assert "input error" in err


def test_exit_code_2_on_missing_task(capsys, monkeypatch):
    code, out, err = run_cli(["kform"], T1, monkeypatch, capsys)
    assert code == 2
    assert "no kform task" in err


def test_exit_code_2_on_unresolvable_name(capsys, monkeypatch):
    doc = T1 + "check-subspace { ambient 1 basis (zz) }\n"
    code, out, err = run_cli(["check-subspace"], doc, monkeypatch, capsys)
    assert code == 2
    assert "zz" in err


def test_exit_code_2_on_invalid_action(capsys, monkeypatch):
    # multiplication by X is not invertible
    doc = T1 + "kform { dim 1 rho phi_1 ((X)) }\n"
    code, out, err = run_cli(["kform"], doc, monkeypatch, capsys)
    assert code == 2
    assert "not invertible" in err


def test_exit_code_3_on_oracle_disagreement(capsys, monkeypatch):
    doc = T1 + "check-subspace { ambient 2 basis (a1, 1) }\n"
    monkeypatch.setattr(descent, "oracle_subspace", lambda *a: True)
    code, out, err = run_cli(["check-subspace", "--oracle"], doc,
                             monkeypatch, capsys)
    assert code == 3
    assert out == ""
    assert "internal error" in err


def test_no_k_form_reported_as_negative_verdict(capsys, monkeypatch):
    doc = T1 + "kform { dim 1 rho phi_1 ((1)) }\n"
    monkeypatch.setattr(descent, "kform_from_action",
                        lambda rho: (_ for _ in ()).throw(
                            NotAForm("invariants too small", ["detail"])))
    code, out, _ = run_cli(["kform"], doc, monkeypatch, capsys)
    rep = json.loads(out)
    assert code == 1
    assert rep["verdict"] == "no_k_form"
    assert rep["diagnostics"] == ["invariants too small", "detail"]


def test_missing_input_file(capsys):
    code = cli.run(["describe", "--input", "/nonexistent/path.dk"])
    out, err = capsys.readouterr()
    assert code == 2
    assert "error" in err


# ------------------------------------------------------------------ behavior

def test_stdin_is_the_default_input(capsys, monkeypatch):
    code, out, _ = run_cli(["describe"], T1, monkeypatch, capsys)
    assert code == 0
    assert json.loads(out)["degree"] == "2"


def test_implicit_tasks_run_without_a_block(capsys, monkeypatch):
    for command in ("validate", "describe", "fixed-ring"):
        code, out, _ = run_cli([command], T1, monkeypatch, capsys)
        assert code == 0
        assert json.loads(out)["task"] == command


def test_multiple_tasks_emit_in_document_order(capsys, monkeypatch):
    doc = (T1
           + "apply { map phi_1 to a1 }\n"
           + "apply { map phi_1 to t }\n")
    code, out, _ = run_cli(["apply"], doc, monkeypatch, capsys)
    lines = out.splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["result"] == "a1 + X"
    assert json.loads(lines[1])["result"] == "t"


def test_pretty_output_is_indented_equivalent_json(capsys, monkeypatch):
    doc = T1 + "check-subspace { ambient 2 basis (a1, 1) }\n"
    _, compact, _ = run_cli(["check-subspace"], doc, monkeypatch, capsys)
    _, pretty, _ = run_cli(["check-subspace", "--pretty"], doc,
                           monkeypatch, capsys)
    assert pretty != compact
    assert json.loads(pretty) == json.loads(compact)


def test_trust_irreducible_is_reported(capsys, monkeypatch):
    code, out, _ = run_cli(["validate", "--trust-irreducible"], T3,
                           monkeypatch, capsys)
    rep = json.loads(out)
    assert code == 0
    names = {c["name"]: c["detail"] for c in rep["checks"]}
    assert "trusted" in names["separable-minpoly"]


def test_seed_flag_is_accepted(capsys, monkeypatch):
    code, out, _ = run_cli(["describe", "--seed", "7"], T1,
                           monkeypatch, capsys)
    assert code == 0


def test_fixed_ring_with_generator_subset(capsys, monkeypatch):
    # fixing only the Galois lift leaves the inseparable root free
    doc = T3 + "fixed-ring { gens phi_c }\n"
    code, out, _ = run_cli(["fixed-ring"], doc, monkeypatch, capsys)
    rep = json.loads(out)
    assert code == 1
    assert rep["verdict"] == "larger_than_base"
    assert len(rep["field_basis"]) == 3  # K(b) = K + K*b + K*b^2


def test_gha_apply_rejects_malformed_indices(capsys, monkeypatch):
    for bad in ("D_1", "D_1^(9)", "D_c*D_c", "Q_1^(1)", "D_7^(1)"):
        doc = T3 + 'apply { map "%s" to b }\n' % bad
        code, out, err = run_cli(["apply"], doc, monkeypatch, capsys)
        assert code == 2, bad
        assert out == ""


def test_gha_apply_identity_index(capsys, monkeypatch):
    doc = T1 + 'apply { map "1" to a1 }\n'
    code, out, _ = run_cli(["apply"], doc, monkeypatch, capsys)
    assert json.loads(out)["result"] == "a1"


def test_unknown_map_name_lists_generators(capsys, monkeypatch):
    doc = T1 + "apply { map phi_9 to a1 }\n"
    code, out, err = run_cli(["apply"], doc, monkeypatch, capsys)
    assert code == 2
    assert "phi_1" in err


def test_matrix_shape_violations(capsys, monkeypatch):
    doc = T1 + "kform { dim 2 rho phi_1 ((1, 0), (0)) }\n"
    code, _, err = run_cli(["kform"], doc, monkeypatch, capsys)
    assert code == 2
    assert "2 x 2" in err
    doc = T1 + "kform { dim 1 rho phi_1 ((1)) phi_1 ((1)) }\n"
    code, _, err = run_cli(["kform"], doc, monkeypatch, capsys)
    assert code == 2
    assert "duplicate" in err


def test_morphism_image_count_mismatch(capsys, monkeypatch):
    doc = T1 + "check-morphism { vars x y images (x) }\n"
    code, _, err = run_cli(["check-morphism"], doc, monkeypatch, capsys)
    assert code == 2
    assert "2 variables but 1 images" in err
