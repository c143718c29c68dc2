import pytest

import mechkit


def test_builtin_and_constraint_basics():
    c = mechkit.builtin("house_allocation", 2, 3)
    assert c.agents == 2
    assert c.objects == 3
    assert len(c) == 6
    assert c.contains([0, 1])
    assert not c.contains([0, 0])
    rm = mechkit.builtin("roommates", 4, 4)
    assert rm.always_infeasible(0) == [0]


def test_custom_constraint_roundtrip():
    c = mechkit.Constraint(2, 2, [[0, 1], [1, 0]])
    assert sorted(c.feasible()) == [[0, 1], [1, 0]]
    with pytest.raises(mechkit.ArgumentError):
        mechkit.Constraint(2, 2, [[0, 2]])


def test_decompose_house():
    c = mechkit.builtin("house_allocation", 2, 3)
    d = mechkit.decompose(c)
    assert d["r1"] == [] and d["r2"] == []
    assert len(d["blocks"]) == 3
    assert d["count_sp_pe"] == 8


def test_serial_dictatorship_is_gsp_pe():
    c = mechkit.builtin("house_allocation", 2, 3)
    table = mechkit.serial_dictatorship(c, [0, 1])
    assert len(table) == 36
    assert mechkit.check(c, table, "gsp") is None
    assert mechkit.check(c, table, "gsp", fast_gsp=True) is None
    assert mechkit.check(c, table, "pe") is None


def test_check_returns_witness():
    c = mechkit.builtin("social_choice", 2, 2)
    constant = [[0, 0]] * 4
    w = mechkit.check(c, constant, "pe")
    assert w is not None
    assert w["axiom"] == "pe"
    assert w["before"] == [0, 0]
    assert w["after"] == [1, 1]


def test_search_matches_families():
    c = mechkit.builtin("social_choice", 2, 3)
    found = mechkit.search(c, ["sp", "pe"])
    assert len(found) == 2
    assert sorted(found) == sorted(mechkit.local_dictatorships(c))
    assert sorted(found) == sorted(mechkit.gsds(c))


def test_gsd_override_changes_second_dictator():
    c = mechkit.builtin("house_allocation", 3, 3)
    plain = mechkit.gsd(c, [0, 1, 2])
    assert plain == mechkit.serial_dictatorship(c, [0, 1, 2])
    swapped = mechkit.gsd(c, [0, 1, 2], overrides={(0, -1, -1): 2})
    assert swapped != plain


def test_budget_errors_surface():
    c = mechkit.builtin("house_allocation", 2, 3)
    with pytest.raises(mechkit.BudgetError):
        mechkit.search(c, ["sp"], node_budget=2)
