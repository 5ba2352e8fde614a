import json
import subprocess
import sys

import pytest

from invlattice.cli import main
from invlattice.problem import ParseError, fixture_names, load_problem, parse_problem


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fixtures_bundled():
    assert {"cyclic_z_gf2", "cyclic_z_mislabelled", "cyclic_z_gf3", "zero_map_gf2",
            "marked_sum_gf2", "nonmonotone_r_gf2", "nonsplit"} <= set(fixture_names())


def test_analyze_cyclic_z_gf2(capsys):
    code, out, _ = run(capsys, "analyze", "--input", "cyclic_z_gf2")
    assert code == 0
    assert "λ = 0, t = (1, 3), U = (e1, e2)" in out


def test_analyze_nonmonotone_r_gf2_with_r(capsys):
    code, out, _ = run(capsys, "analyze", "--input", "nonmonotone_r_gf2", "--r", "1,0", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["components"][0]["exponents"] == [2, 3]
    assert data["r"]["monotone"] is False and data["r"]["equal"] is False


def test_analyze_nonsplit(capsys):
    code, _, err = run(capsys, "analyze", "--input", "nonsplit")
    assert code == 3 and "NonSplitCharPoly" in err


def test_classify_cyclic_z_gf2(capsys):
    code, out, _ = run(capsys, "classify", "--input", "cyclic_z_gf2", "--subspace", "Z", "--json")
    z = json.loads(out)["subspaces"]["Z"]
    assert code == 0
    assert (z["invariant"], z["marked"], z["characteristic"], z["hyperinvariant"]) == \
        (True, False, True, False)
    assert z["witnesses"]["hyperinvariant"]["endomorphism"][0] == [1, 0, 0, 0]


def test_classify_zero_map_gf2(capsys):
    code, out, _ = run(capsys, "classify", "--input", "zero_map_gf2", "--json")
    x = json.loads(out)["subspaces"]["X"]
    assert x["marked"] is True and x["characteristic"] is False
    assert x["witnesses"]["characteristic"]["automorphism"] == [[1, 0], [1, 1]]


def test_classify_whole_space_and_bruteforce(tmp_path, capsys):
    doc = {"p": 2, "matrix": [[0, 0, 0], [1, 0, 0], [0, 0, 0]],
           "subspaces": {"V": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}}
    path = tmp_path / "v.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "classify", "--input", str(path), "--json", "--force-bruteforce")
    v = json.loads(out)["subspaces"]["V"]
    assert code == 0 and all(v[k] for k in ("invariant", "marked", "characteristic", "hyperinvariant"))


def test_classify_not_invariant(tmp_path, capsys):
    doc = {"p": 2, "matrix": [[0, 0], [1, 0]], "subspaces": {"X": [[1, 0]]}}
    path = tmp_path / "x.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "classify", "--input", str(path))
    assert code == 3 and "invariant=no" in out


def test_lattice_dot(tmp_path, capsys):
    dot = tmp_path / "h.dot"
    code, out, _ = run(capsys, "lattice", "--input", "cyclic_z_gf2", "--dot", str(dot))
    assert code == 0 and "Hinv: 6 subspaces" in out
    text = dot.read_text()
    assert text.count("->") == 6 and 'label="dim=0\\n0\\nW(1,3)"' in text
    dot2 = tmp_path / "h2.dot"
    run(capsys, "lattice", "--input", "cyclic_z_gf2", "--dot", str(dot2))
    assert dot2.read_bytes() == dot.read_bytes()


def test_lattice_small(tmp_path, capsys):
    for matrix, nodes in (([[0, 0], [0, 0]], 2),
                          ([[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]], 5)):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"p": 2, "matrix": matrix}))
        code, out, _ = run(capsys, "lattice", "--input", str(path), "--json")
        assert code == 0 and len(json.loads(out)["elements"]) == nodes


def test_lattice_chinv_and_inv(capsys):
    code, out, _ = run(capsys, "lattice", "--input", "cyclic_z_gf2", "--kind", "chinv", "--json")
    assert code == 0 and len(json.loads(out)["elements"]) == 7
    code, out, _ = run(capsys, "lattice", "--input", "cyclic_z_gf2", "--kind", "inv", "--json")
    assert code == 0 and len(json.loads(out)["elements"]) == 11


def test_search(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--input", "cyclic_z_gf2", "--json")
    assert code == 0 and [[1, 0, 1, 0], [0, 0, 0, 1]] in json.loads(out)["found"]
    code, _, err = run(capsys, "search", "--input", "cyclic_z_gf3")
    assert code == 3 and "WrongField" in err
    code, out, _ = run(capsys, "search", "--input", "cyclic_z_gf3", "--force", "--json")
    assert code == 0 and json.loads(out)["found"] == []
    path = tmp_path / "z.json"
    path.write_text(json.dumps({"p": 2, "matrix": [[0, 0], [0, 0]]}))
    code, out, _ = run(capsys, "search", "--input", str(path), "--json")
    assert json.loads(out)["found"] == []


def test_caps(capsys):
    code, _, err = run(capsys, "lattice", "--input", "marked_sum_gf2", "--kind", "inv",
                       "--cap-subspaces", "10")
    assert code == 4 and "EnumerationTooLarge" in err


def test_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "analyze", "--input", str(bad))[0] == 2
    assert run(capsys, "analyze", "--input", "no_such_thing")[0] == 2
    assert run(capsys, "classify", "--input", "cyclic_z_gf2", "--subspace", "Q")[0] == 2
    assert run(capsys, "analyze", "--input", "nonmonotone_r_gf2", "--r", "x")[0] == 2
    assert run(capsys, "analyze", "--input", "nonmonotone_r_gf2", "--r", "3,0")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


@pytest.mark.parametrize("doc", [
    {"p": 4, "matrix": [[0]]},
    {"p": 2, "matrix": [[0, 1]]},
    {"p": 2, "matrix": [[0, 0], [0, 0]], "subspaces": {"X": [[1, 0, 0]]}},
    {"p": 2, "matrix": [[0.5]]},
    [1, 2],
])
def test_parse_problem_rejects(doc):
    with pytest.raises(ParseError):
        parse_problem(doc)


def test_entries_reduced_mod_p():
    prob = parse_problem({"p": 3, "matrix": [[4, -1], [0, 3]]})
    assert prob.operator.matrix.tolist() == [[1, 2], [0, 0]]


def test_verify_fixtures_and_negative_control(capsys):
    assert run(capsys, "verify")[0] == 0
    code, out, _ = run(capsys, "verify", "--input", "cyclic_z_mislabelled", "--json")
    report = json.loads(out)
    assert code == 1 and not report["ok"]
    wit = report["properties"]["expectation"]["witnesses"][0]
    assert wit["witness"]["flag"] == "hyperinvariant"
    assert wit["witness"]["detail"]["endomorphism"][0] == [1, 0, 0, 0]


def test_verify_random_reproducible(capsys):
    a = run(capsys, "verify", "--random", "2", "4", "6", "--seed", "1", "--json")
    b = run(capsys, "verify", "--random", "2", "4", "6", "--seed", "1", "--json")
    assert a[0] == 0 and a[1] == b[1]


def test_verify_random_gf3_bruteforce(capsys):
    code, out, _ = run(capsys, "verify", "--random", "3", "3", "4", "--seed", "5",
                       "--force-bruteforce", "--json")
    assert code == 0 and json.loads(out)["properties"]["bruteforce"]["passed"] > 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "invlattice", "analyze", "--input", "cyclic_z_gf2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "t = (1, 3)" in proc.stdout


def test_load_problem_from_path(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"p": 5, "matrix": [[0, 1], [0, 0]], "r": [1]}))
    prob = load_problem(str(path))
    assert prob.p == 5 and prob.r == (1,) and prob.name == "p"
