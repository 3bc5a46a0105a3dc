import pytest

import cobarlie


def test_verify_passes_and_flip_is_caught():
    rows = cobarlie.verify(n_max=4, pq_max=3)
    assert rows and all(r["pass"] for r in rows)
    flipped = [r for r in cobarlie.verify(n_max=4, pq_max=3, flip_sign=True) if not r["pass"]]
    assert flipped[0]["identity"] == "w_n^2 = n w_n"
    assert flipped[0]["instance"] == "n=3"


def test_w_terms():
    terms = cobarlie.w_terms(3)
    assert len(terms) == 4
    assert ([1, 2, 3], "1") in terms


def test_homotopy_s2():
    r = cobarlie.homotopy("S2", N=4, T=3, q_max=8)
    assert r["ranks"] == {"1": 1, "2": 1, "3": 0}
    assert r["certificates"]["all"] is True


def test_bar_and_compare():
    q = cobarlie.bar("H(S2)", N=4, T=3)
    assert q["qbar_ranks"] == {"1": 1, "2": 1, "3": 0}
    c = cobarlie.compare("S2 v S2", "H(S2vS2)", N=3, T=2)
    assert c["match"] is True


def test_errors():
    with pytest.raises(cobarlie.InvalidInput, match="window"):
        cobarlie.homotopy("S2", N=3, T=4)
    with pytest.raises(ValueError):
        cobarlie.show_space("Q7")
    with pytest.raises(cobarlie.BudgetExceeded):
        cobarlie.homotopy("S2", N=4, T=3, budget=50)


def test_show():
    assert len(cobarlie.show_cdga("H(S2 x S2)")["generators"]) == 3
    assert cobarlie.show_space("S2")
