import json
from pathlib import Path

import pytest

from morincob.cli import EXIT_IDENTITY, EXIT_INVARIANT, EXIT_OK, EXIT_USAGE, run
from morincob.modelio import build_model, load_model, parse_poly

MODELS = Path(__file__).resolve().parent.parent / "models"


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def reports(out):
    return json.loads(out)["reports"]


def write(tmp_path, doc):
    p = tmp_path / "model.json"
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return p


def test_load_cp2_fixture():
    m = load_model(MODELS / "cp2.json")
    assert list(m.spaces) == ["cp2"]
    assert list(m.immersions) == ["cp2_r6"]


def test_boy_command(capsys):
    cmd = json.dumps({"op": "multipoint", "immersion": "boy", "r": 3})
    code, out, _ = call(capsys, "--input", MODELS / "boy.json", "--command", cmd)
    assert code == EXIT_OK
    (rep,) = reports(out)
    assert rep["result"] == {"[]": "1"}
    assert rep["field"] == "F2" and rep["dim"] == 0


def test_k3_and_sigma2(capsys):
    code, out, _ = call(capsys, "--input", MODELS / "k3.json")
    assert reports(out)[0]["result"] == {"[1]": "-48"}
    code, out, _ = call(capsys, "--input", MODELS / "cp2.json", "--command", '{"op":"thom-sigma2","map":"fc"}')
    assert reports(out)[0]["result"] == {"class": "-3*x^2", "number": "-3"}


def test_morin_rank_command(capsys):
    code, out, _ = call(capsys, "--input", MODELS / "morin.json", "--command", '{"op":"morin-rank","n":8,"k":3}')
    assert code == EXIT_OK and reports(out)[0]["result"] == 2


def test_check_command(capsys):
    cmd = '{"op":"check","suite":"double-product","seed":7,"cases":100}'
    code, out, _ = call(capsys, "--input", MODELS / "s2.json", "--command", cmd)
    assert code == EXIT_OK
    rep = reports(out)[0]
    assert rep["result"]["cases"] == 100
    assert rep["checks"] and all(c["passed"] for c in rep["checks"])


@pytest.mark.parametrize("model", sorted(p.name for p in MODELS.glob("*.json")))
def test_fixtures_run_and_are_deterministic(capsys, model):
    code1, out1, _ = call(capsys, "--input", MODELS / model, "--seed", 3)
    code2, out2, _ = call(capsys, "--input", MODELS / model, "--seed", 3)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2


def test_output_file_and_timing(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = call(capsys, "--input", MODELS / "k3.json", "--output", target, "--timing")
    assert code == EXIT_OK and out == ""
    rep = json.loads(target.read_text())["reports"][0]
    assert rep["timing"] >= 0


def test_no_verify_drops_checks(capsys):
    cmd = '{"op":"product-multi","immersions":["g1","g2"],"r":2}'
    code, out, _ = call(capsys, "--input", MODELS / "s2.json", "--command", cmd, "--no-verify")
    rep = reports(out)[0]
    assert rep["checks"] == [] and rep["result"] == {"[]": "-4"}


def test_odd_rat_generator(capsys, tmp_path):
    p = write(tmp_path, {"spaces": {"bad": {"generators": [["a", 1, 3]]}}})
    code, _, err = call(capsys, "--input", p)
    assert code == EXIT_INVARIANT
    assert "RAT algebras must be evenly graded" in err


def test_field_flag_allows_f2(capsys, tmp_path):
    p = write(tmp_path, {"spaces": {"rp2": {"generators": [["a", 1, 3]], "tangent": "1 + a + a^2"}},
                         "immersions": {"boy": {"space": "rp2", "codim": 1}},
                         "commands": [{"op": "multipoint", "immersion": "boy", "r": 3}]})
    code, out, _ = call(capsys, "--input", p, "--field", "F2")
    assert code == EXIT_OK and reports(out)[0]["result"] == {"[]": "1"}


def test_dangling_reference(capsys, tmp_path):
    p = write(tmp_path, {"spaces": {"s": {"generators": [["s", 2, 2]]}},
                         "immersions": {"g": {"space": "s", "codim": 2, "normal": "nu"}}})
    code, _, err = call(capsys, "--input", p)
    assert code == EXIT_USAGE
    assert "'nu'" in err and "immersions.g" in err


def test_parse_error_reports_position(capsys, tmp_path):
    p = write(tmp_path, {"spaces": {"s": {"generators": [["x", 2, 3]], "tangent": "1 + 3*y^2"}}})
    code, _, err = call(capsys, "--input", p)
    assert code == EXIT_USAGE
    assert "unknown generator 'y' at position 6" in err


@pytest.mark.parametrize("doc", ["{", "[]", '{"bogus": {}}'])
def test_malformed_files(capsys, tmp_path, doc):
    code, _, _ = call(capsys, "--input", write(tmp_path, doc))
    assert code == EXIT_USAGE


def test_missing_input_and_file(capsys, tmp_path):
    assert call(capsys)[0] == EXIT_USAGE
    assert call(capsys, "--input", tmp_path / "nope.json")[0] == EXIT_USAGE


def test_unknown_op_and_missing_argument(capsys):
    assert call(capsys, "--input", MODELS / "k3.json", "--command", '{"op":"frobnicate"}')[0] == EXIT_USAGE
    assert call(capsys, "--input", MODELS / "boy.json", "--command", '{"op":"multipoint","immersion":"boy"}')[0] == EXIT_USAGE


def test_invariant_violation_in_command(capsys):
    # Sigma^2 needs Pontrjagin data
    code, _, err = call(capsys, "--input", MODELS / "boy.json", "--command", '{"op":"thom-sigma2","map":"fold"}')
    assert code == EXIT_INVARIANT and "thom-sigma2" in err


def test_identity_failure_exit_code(capsys, monkeypatch):
    import morincob.multipoint as mp
    from morincob.cobordism import CobordismClass
    from morincob.algebra import Field

    monkeypatch.setattr(mp, "class_product", lambda a, b: CobordismClass(Field.RAT, 0, {(): 5}))
    cmd = '{"op":"product-multi","immersions":["g1","g2"],"r":2}'
    code, _, err = call(capsys, "--input", MODELS / "s2.json", "--command", cmd)
    assert code == EXIT_IDENTITY
    assert "identity check failed" in err


def test_whitney_constraint_named(capsys, tmp_path):
    p = write(tmp_path, {"spaces": {"c": {"generators": [["x", 2, 3]], "tangent": "1 + 3*x^2"}},
                         "bundles": {"nu": {"space": "c", "total": "1 + 3*x^2", "rank": 2, "euler": "0"}},
                         "immersions": {"g": {"space": "c", "codim": 2, "normal": "nu"}}})
    code, _, err = call(capsys, "--input", p)
    assert code == EXIT_INVARIANT and "Whitney" in err and "immersions.g" in err


def test_explicit_basis_and_product_space(capsys, tmp_path):
    doc = {
        "spaces": {
            "cp2": {"basis": [["1", 0], ["x", 2], ["xx", 4]], "products": {"x*x": "xx"},
                    "fundamental": "xx", "tangent": "1 + 3*xx"},
            "sq": {"product": ["cp2", "cp2"]},
        },
        "commands": [{"op": "class-product", "classes": ["cp2", "cp2"]},
                     {"op": "class-product", "classes": ["sq", {"dim": 0, "numbers": {"[]": "1"}}]}],
    }
    code, out, _ = call(capsys, "--input", write(tmp_path, doc))
    assert code == EXIT_OK
    a, b = reports(out)
    assert a["result"] == {"[2]": "9", "[1,1]": "18"} == b["result"]


def test_explicit_basis_must_be_associative(capsys, tmp_path):
    # (x*x)*y = u*y = t but x*(x*y) = 0
    doc = {"spaces": {"bad": {"basis": [["1", 0], ["x", 2], ["y", 2], ["u", 4], ["t", 6]],
                              "products": {"x*x": "u", "x*u": "t", "y*u": "t"}, "fundamental": "t"}}}
    code, _, err = call(capsys, "--input", write(tmp_path, doc))
    assert code == EXIT_INVARIANT and "assoc" in err


def test_general_target_and_herbert(capsys, tmp_path):
    doc = {
        "spaces": {"s": {"generators": [["s", 2, 2]]}},
        "bundles": {"nu": {"space": "s", "total": "1", "rank": 2, "euler": "2*s"}},
        "immersions": {"g": {"space": "s", "codim": 2, "normal": "nu", "target": "general",
                             "gysin_pull": {"[]": "3*s"}}},
        "commands": [{"op": "herbert", "immersion": "g", "r": 2},
                     {"op": "product-double", "immersions": ["g", "g"]}],
    }
    code, out, _ = call(capsys, "--input", write(tmp_path, doc))
    assert code == EXIT_OK
    h, d = reports(out)
    # m_2 = f^* n_1 - e beta(M) = 3s - 2s
    assert h["result"]["numbers"]["numbers"] == {"[]": "1"}
    assert d["checks"][0]["passed"]


def test_morin_from_prim(capsys, tmp_path):
    doc = {
        "spaces": {"s": {"generators": [["s", 2, 2]]}},
        "immersions": {"g": {"space": "s", "codim": 2, "euler": "2*s"}},
        "morin": {"p": {"prim": "g"}, "a": {"n": 4, "k": 1, "strata": {"0": {"numbers": {"[1]": "3"}}}}},
        "commands": [{"op": "morin-mul", "morin": ["p", "a"]}],
    }
    code, out, _ = call(capsys, "--input", write(tmp_path, doc))
    assert code == EXIT_OK
    r = reports(out)[0]["result"]
    assert (r["n"], r["k"]) == (6, 3)


def test_render_parse_roundtrip_of_reports(capsys):
    # polynomial strings in reports parse back to the same elements
    m = load_model(MODELS / "cp2.json")
    code, out, _ = call(capsys, "--input", MODELS / "cp2.json", "--command", '{"op":"beta","space":"cp2"}')
    alg = m.spaces["cp2"].algebra
    from morincob.charclass import beta_of
    from morincob.partitions import parse_partition

    series = beta_of(m.spaces["cp2"].tangent)
    for key, text in reports(out)[0]["result"].items():
        assert parse_poly(text, alg) == series[parse_partition(key)]


def test_build_model_rejects_unknown_sections():
    with pytest.raises(ValueError):
        build_model({"spaces": {}, "extra": 1})
