import pytest

from almostsplit.dsl import DSLError, parse, parse_file, render
from almostsplit.infrep import coker_rep

from conftest import ARQ


@pytest.mark.parametrize("name", ["a2.arq", "a3.arq", "d4.arq", "rays.arq"])
def test_examples_round_trip(name):
    doc = parse_file(str(ARQ / name))
    text = render(doc)
    again = parse(text)
    assert again == doc
    assert render(again) == text


def test_a2_contents():
    doc = parse_file(str(ARQ / "a2.arq"))
    assert doc.reps["P1"].dimvec == (1, 1)
    assert doc.reps["P1"].mats["a"].tolist() == [[1]]
    assert doc.subcats["C"].gens == ("S1", "P1")
    assert doc.torsions["T"].free == ("S2", "P1")


def test_omitted_matrices_are_zero_and_semicolon_optional():
    doc = parse("quiver Q { vertices 1 2; arrow a: 1 -> 2 }\nrep M over Q prime 7 { dims { 1: 2; 2: 1 } }")
    assert doc.reps["M"].mats["a"].tolist() == [[0, 0]]
    assert doc.reps["M"].p == 7


def test_fprep_default_prime_from_argument():
    doc = parse_file(str(ARQ / "rays.arq"), default_prime=101)
    assert doc.fpreps["S2"].p == 101
    r = coker_rep(doc.fpreps["S2"])
    assert r.p == 101 and r.dims["t.1"] == 1 and r.dims["1"] == 0


@pytest.mark.parametrize("text, line, col, message", [
    ("quiver Q { vertices 1 2; arrow a: 1 -> 3 }", 1, 40, "unknown vertex"),
    ("quiver Q { vertices 1 2; arrow a: 1 -> 2 }\nrep M over Q prime 7 { dims { 1: 1; 2: 1 } mat c = [[1]] }", 2, None,
     "unknown arrow"),
    ("quiver Q { vertices 1 2; arrow a: 1 -> 2 }\nrep M over Q prime 7 { dims { 1: 1; 2: 1 } mat a = [[1, 2]] }",
     2, None, "shape"),
    ("quiver Q { vertices 1 2; arrow a: 1 -> 2 }\nrep M over Q prime 15 { dims { 1: 1 } }", 2, None, "prime"),
    ("quiver Q { vertices 1 2; arrow a: 1 -> 2; arrow b: 2 -> 1 }", 1, None, "cycl"),
    ("quiver Q { vertices 1 2; arrow a 1 -> 2 }", 1, 34, "expected ':'"),
    ("quiver Q { vertices 1 2 }\nrep M over Q { dims { 1: 1 } }", 2, 14, "expected 'prime'"),
    ("rep M over Nowhere prime 7 { dims { 1: 1 } }", 1, None, "Nowhere"),
])
def test_diagnostics_carry_positions(text, line, col, message):
    with pytest.raises(DSLError) as err:
        parse(text, "t.arq")
    e = str(err.value)
    assert e.startswith(f"t.arq:{line}:")
    if col is not None:
        assert e.startswith(f"t.arq:{line}:{col}:")
    assert message in e


def test_broken_example():
    with pytest.raises(DSLError) as err:
        parse_file(str(ARQ / "broken.arq"))
    assert "broken.arq:1:" in str(err.value) and "unknown vertex 3" in str(err.value)


def test_duplicate_names_rejected():
    with pytest.raises(DSLError):
        parse("quiver Q { vertices 1 }\nquiver Q { vertices 2 }")
