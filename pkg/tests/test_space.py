import pytest

from gdiff.errors import GroupTooLarge, NotTransitive
from gdiff.space import (FiniteSpace, alternate_transversal, dihedral_on_cycle,
                         enumerate_group, parse_cycles, perm_compose,
                         perm_inverse, stabilizer, transversal)


def test_dihedral_orders():
    assert dihedral_on_cycle(3).order == 6
    assert dihedral_on_cycle(4).order == 8
    assert dihedral_on_cycle(6).order == 12


def test_identity_is_element_zero(g3):
    assert g3.elements[0] == (0, 1, 2)
    assert all(g3.mult[0][g] == g for g in range(g3.order))
    assert all(g3.mult[g][0] == g for g in range(g3.order))


def test_multiplication_table_is_group(g4):
    n = g4.order
    for a in range(n):
        assert g4.mult[a][g4.inv[a]] == 0
        assert g4.mult[g4.inv[a]][a] == 0
        for b in range(n):
            ab = g4.mult[a][b]
            assert g4.elements[ab] == perm_compose(g4.elements[a], g4.elements[b])


def test_parse_cycles():
    assert parse_cycles("(1 2 3)", 3) == (1, 2, 0)
    assert parse_cycles("(2 3)", 3) == (0, 2, 1)
    assert parse_cycles("e", 4) == (0, 1, 2, 3)
    assert parse_cycles("(1 2)(3 4)", 4) == (1, 0, 3, 2)
    with pytest.raises(ValueError):
        parse_cycles("(1 2", 3)
    with pytest.raises(ValueError):
        parse_cycles("(1 5)", 3)


def test_not_transitive():
    space = FiniteSpace(("a", "b", "c", "d"))
    with pytest.raises(NotTransitive):
        enumerate_group(space, {"s": (1, 0, 2, 3)})


def test_group_cap():
    space = FiniteSpace.cycle(5)
    with pytest.raises(GroupTooLarge):
        enumerate_group(space, {"s": parse_cycles("(1 2 3 4 5)", 5),
                                "t": parse_cycles("(1 2)", 5)}, cap=10)


def test_stabilizer_order(g3, g4, g6):
    for g in (g3, g4, g6):
        sub = stabilizer(g, 0)
        assert sub.order * g.space.size == g.order
        assert all(g.elements[h][0] == 0 for h in sub.members)


def test_transversal_properties(g6):
    for builder in (transversal, alternate_transversal):
        sig = builder(g6)
        assert sig.sigma[0] == 0
        for y in range(g6.space.size):
            assert g6.elements[sig.sigma[y]][0] == y


def test_word_parsing(g3):
    s, t = g3.generators["s"], g3.generators["t"]
    assert g3.word("s*t") == g3.mult[s][t]
    assert g3.word("s^-1") == g3.inv[s]
    assert g3.word("s^3") == 0
    assert g3.word("e") == 0
    with pytest.raises(KeyError):
        g3.word("u")


def test_inverse_of_inverse(g4):
    for a in range(g4.order):
        assert g4.inv[g4.inv[a]] == a
        assert perm_inverse(g4.elements[a]) == g4.elements[g4.inv[a]]
