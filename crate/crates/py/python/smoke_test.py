"""Smoke test for the persym extension module.

Build and install first, e.g. ``maturin develop -m crates/py/Cargo.toml``
or ``pip install crates/py``, then run ``python crates/py/python/smoke_test.py``.
"""

import persym


def main():
    d = persym.census(1, 10)
    assert d.counts == [1, 3, 2044], d
    assert d.total() == 2**11
    assert d == persym.census_naive(1, 10)

    d2 = persym.census(2, 10, workers=2)
    assert d2.counts == [1, 9, 6174, 42840, 4145280]
    assert [persym.gamma_k10(i, 2) for i in range(5)] == d2.counts

    for i in range(7):
        assert persym.gamma_general(i, 2, 7) == persym.census(2, 7)[i]

    cf = persym.closedform_distribution(1, 10)
    assert persym.r_qnk(4, 1, 10, cf) == 587 * 2**31
    assert persym.count_solutions_marginalized(4, 1, 10) == 587 * 2**31
    assert persym.count_solutions_bruteforce(1, 1, 1) == 5

    checks = persym.verify_moments(3, 10, source="closedform")
    assert all(ok for _, _, _, ok in checks), checks

    t = persym.CoeffTuple(1, 3, [1, 0, 1, 1])
    assert t.matrix() == [[1, 0, 1], [0, 1, 1]]
    assert t.rank() == 2
    assert persym.CoeffTuple.from_index(t.index(), 1, 3).matrix() == t.matrix()

    g7 = persym.fit_gamma7()
    assert g7["alpha"] == ["-39228", "2667/16"]
    k10 = persym.fit_k10_high_ranks()
    assert k10["consistent"] and k10[8][7] == "171955"

    rep = persym.adjudicate_transcriptions()
    assert rep["resolved"]
    assert dict(rep["y2"]) == {670888385: False, 67088385: True}

    try:
        persym.census(4, 10)
    except persym.BudgetError:
        pass
    else:
        raise AssertionError("expected BudgetError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
