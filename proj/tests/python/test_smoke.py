import pcris
import pytest


def test_suite_names():
    names = pcris.suite_names()
    assert "lattice-L" in names and "t-annihilation" in names


def test_lattice_report():
    rep = pcris.run_report("lattice-L")
    assert rep["status"] == "pass"
    assert rep["suites"]["lattice-L"]["passed"] == 3
    assert rep["config"]["p"] == 2


def test_same_seed_same_report():
    a = pcris.run_report(["eigen", "dp-laws"], seed=3)
    b = pcris.run_report(["dp-laws", "eigen"], seed=3, jobs=2)
    assert a == b


def test_p3_kummer():
    rep = pcris.run_report("kummer", p=3, c="one")
    assert rep["status"] == "pass"


def test_bad_config():
    with pytest.raises(ValueError):
        pcris.run_report([])
    with pytest.raises(ValueError):
        pcris.run_report("eigen", d=1, r=3)


def test_primitives():
    assert pcris.nilpotency_bound(2, 2) == 4
    assert pcris.nilpotency_bound(5, 2) == 10
    assert pcris.smith_exponents([[2, 0], [0, 1]], 2, 2) == [0, 1]
    assert pcris.smith_exponents([[0]], 2, 2) == []
    # (1, 1, 0 | 0) with r = 2 becomes pi
    assert pcris.normalize_exponent([2, 2, 0, 0], 2, 1, 2) == [0, 0, 0, 2]
    assert pcris.normalize_exponent([2, 2, 0, 0], 2, 1, 2, "one") == [2, 2, 0, 0]
