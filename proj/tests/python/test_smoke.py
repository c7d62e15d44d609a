# SPDX-License-Identifier: Apache-2.0
import pytest

import enumcnf

RUNNING_EXAMPLE = "(A1 & A2) | (((A3|A4)&(A5|A6)) <-> A7)"


def test_parse_and_print_roundtrip():
    f = enumcnf.parse(RUNNING_EXAMPLE)
    assert f.atoms() == ["A1", "A2", "A3", "A4", "A5", "A6", "A7"]
    again = enumcnf.parse(str(f))
    assert str(again) == str(f)


def test_residual():
    f = enumcnf.parse(RUNNING_EXAMPLE)
    assert f.residual({"A3": False, "A4": False, "A7": False}) == "true"
    assert f.residual({}) == "unknown"
    assert enumcnf.parse("(A & B) | (A & !B)").residual({"A": True}) == "unknown"
    assert enumcnf.parse("(A | B) & (A | !B)").residual({"A": True}) == "true"


def test_encoding_counts():
    f = enumcnf.parse(RUNNING_EXAMPLE)
    ts = enumcnf.encode(f, "ts")
    assert (ts.num_clauses, ts.num_vars) == (17, 12)
    pg = enumcnf.encode(f, "pg")
    assert (pg.num_clauses, pg.num_vars) == (14, 12)
    np = enumcnf.encode(f, "nnf-pg")
    assert (np.num_clauses, np.num_vars) == (19, 17)
    assert np.num_labels == 10
    assert enumcnf.encode(f, "nnf-pg", mutex=False).num_clauses == 16
    assert "p cnf 12 17" in ts.to_dimacs()


def test_enumerate_and_verify():
    f = enumcnf.parse(RUNNING_EXAMPLE)
    assert f.model_count() == 80
    for encoding in ("ts", "pg", "nnf-pg"):
        result = enumcnf.enumerate_projected(enumcnf.encode(f, encoding), mode="disjoint")
        assert result["stats"]["status"] == "complete"
        report = enumcnf.verify(f, result["assignments"], mode="disjoint")
        assert report["ok"]
        assert report["model_count"] == 80


def test_nnf_pg_enumerates_fewer():
    f = enumcnf.gen_random(seed=7, atoms=10, depth=5)
    counts = {}
    for encoding in ("ts", "nnf-pg"):
        result = enumcnf.enumerate_projected(enumcnf.encode(f, encoding), mode="non-disjoint")
        counts[encoding] = result["stats"]["n_assignments"]
    assert counts["nnf-pg"] <= counts["ts"]


def test_gen_random_is_deterministic():
    a = enumcnf.gen_random(seed=3, atoms=6, depth=4)
    b = enumcnf.gen_random(seed=3, atoms=6, depth=4)
    assert str(a) == str(b)


def test_aiger():
    f = enumcnf.load_aiger("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n")
    assert f.model_count() == 1
    result = enumcnf.enumerate_projected(enumcnf.encode(f, "ts"))
    assert result["cubes"] == [[1, 2]]


def test_errors():
    with pytest.raises(enumcnf.FormulaParseError):
        enumcnf.parse("a &&& b")
    with pytest.raises(enumcnf.AigerFormatError):
        enumcnf.load_aiger("aag 1 1 1 1 0\n")
    with pytest.raises(ValueError):
        enumcnf.encode(enumcnf.parse("a"), "bogus")
