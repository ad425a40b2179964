import pytest

from conftest import equation_zoo, hom_dim_oracle, seeded_rng
from gdiff import equivalence, solver
from gdiff.equations import act, direct_sum, trivial_equation
from gdiff.errors import NotASolution
from gdiff.scalars import Fn
from gdiff.solver import (NOT_SIMPLE, SIMPLE, compose, decompose, hom_space,
                          identity_morphism, image, is_injective,
                          is_isomorphism, is_simple, is_surjective, kernel,
                          pointwise_map, symmetries, zero_morphism)


def test_hom_dims_match_full_system_oracle(g3, rational):
    zoo = equation_zoo(g3, rational)
    for a in zoo.values():
        for b in zoo.values():
            assert len(hom_space(a, b)) == hom_dim_oracle(a, b)


def test_hom_dims_match_fiber_intertwiners(g4, rational):
    zoo = equation_zoo(g4, rational)
    for a in zoo.values():
        for b in zoo.values():
            want = equivalence.intertwiner_dim(equivalence.fiber(a),
                                               equivalence.fiber(b))
            assert len(hom_space(a, b)) == want


def test_block_additivity(g3, rational):
    zoo = equation_zoo(g3, rational)
    e, ep, f = zoo["one"], zoo["sign"], zoo["rank2"]
    assert (len(hom_space(direct_sum(e, ep), f))
            == len(hom_space(e, f)) + len(hom_space(ep, f)))


def test_symmetries_contains_identity_and_closes(g3, rational):
    zoo = equation_zoo(g3, rational)
    basis = symmetries(zoo["both"])
    assert len(basis) == 2
    ident = identity_morphism(zoo["both"])
    # identity is in the span: hom_space of the difference stays valid
    for a in basis:
        for b in basis:
            composed = compose(a, b)
            composed.validate()  # closure under composition


def test_morphism_validation_rejects_junk(g3, rational):
    zoo = equation_zoo(g3, rational)
    one, sign = zoo["one"], zoo["sign"]
    bad = solver.Morphism(one, sign, identity_morphism(one).matrix)
    with pytest.raises(NotASolution):
        bad.validate()


def test_pointwise_equivariance(g3, rational):
    # F_phi^y o g = g o F_phi^{g^{-1}y}: on row coordinates,
    # E^g(y) . phi(y) = phi(g^{-1}y) . F^g(y)
    zoo = equation_zoo(g3, rational)
    basis = hom_space(zoo["rank2"], zoo["rank2"])
    phi = basis[0]
    e = zoo["rank2"]
    from gdiff import linalg
    for g in range(g3.order):
        ginv = g3.elements[g3.inv[g]]
        for y in range(3):
            lhs = linalg.mat_mul(e.conn[g].at_point(y),
                                 pointwise_map(phi, y), rational)
            rhs = linalg.mat_mul(pointwise_map(phi, ginv[y]),
                                 e.conn[g].at_point(y), rational)
            assert linalg.mat_eq(lhs, rhs, rational)


def test_injective_surjective_iso(g3, rational):
    zoo = equation_zoo(g3, rational)
    one, both = zoo["one"], zoo["both"]
    assert is_isomorphism(identity_morphism(both))
    z = zero_morphism(one, both)
    assert not is_injective(z) and not is_surjective(z)
    # inclusion of the first coordinate
    incl = hom_space(one, both)
    assert len(incl) == 1
    assert is_injective(incl[0]) and not is_surjective(incl[0])


def test_kernel_image_ranks(g3, rational):
    zoo = equation_zoo(g3, rational)
    one, both, sign = zoo["one"], zoo["both"], zoo["sign"]
    proj = hom_space(both, one)[0]
    ker_eq, ker_emb = kernel(proj)
    img_eq, img_emb = image(proj)
    assert ker_eq.rank + img_eq.rank == both.rank
    assert is_injective(ker_emb) and is_injective(img_emb)
    assert solver.find_isomorphism(ker_eq, sign) is not None
    assert solver.find_isomorphism(img_eq, one) is not None


def test_kernel_of_identity_and_image_of_zero(g3, rational):
    zoo = equation_zoo(g3, rational)
    both = zoo["both"]
    ker_eq, _ = kernel(identity_morphism(both))
    assert ker_eq.rank == 0
    img_eq, _ = image(zero_morphism(both, zoo["one"]))
    assert img_eq.rank == 0


def test_is_simple(g3, rational):
    zoo = equation_zoo(g3, rational)
    assert is_simple(zoo["one"]) == SIMPLE
    assert is_simple(zoo["sign"]) == SIMPLE
    assert is_simple(zoo["both"]) == NOT_SIMPLE
    assert is_simple(zoo["rank2"]) == NOT_SIMPLE


def test_decompose_one_and_both(g3, rational):
    zoo = equation_zoo(g3, rational)
    only = decompose(zoo["one"])
    assert len(only) == 1 and only[0][0].rank == 1
    parts = decompose(zoo["both"])
    assert sorted(p.rank for p, _ in parts) == [1, 1]
    kinds = set()
    for part, emb in parts:
        emb.validate()
        if solver.find_isomorphism(part, zoo["one"]) is not None:
            kinds.add("one")
        if solver.find_isomorphism(part, zoo["sign"]) is not None:
            kinds.add("sign")
    assert kinds == {"one", "sign"}


def test_decompose_sum_is_isomorphic_to_whole(g3, rational):
    zoo = equation_zoo(g3, rational)
    parts = decompose(zoo["rank2"])
    total = parts[0][0]
    for p, _ in parts[1:]:
        total = direct_sum(total, p)
    assert solver.find_isomorphism(total, zoo["rank2"]) is not None


def test_decompose_regular_fiber_module(g3, rational):
    # induced from the regular module of H = Z2: two rank-1 summands
    from gdiff.space import stabilizer, transversal
    sub = stabilizer(g3, 0)
    t = next(h for h in sub.members if h != 0)
    reg = equivalence.hmodule_from_matrices(
        sub, rational, {0: [[1, 0], [0, 1]], t: [[0, 1], [1, 0]]})
    eq = equivalence.induce(reg, transversal(g3))
    parts = decompose(eq)
    assert sorted(p.rank for p, _ in parts) == [1, 1]


def test_decompose_complex_backend(g6, cplx):
    zoo = equation_zoo(g6, cplx)
    parts = decompose(zoo["both"])
    assert sorted(p.rank for p, _ in parts) == [1, 1]
    for part, emb in parts:
        emb.validate()


def test_symmetries_map_solutions_to_solutions(g3, rational):
    zoo = equation_zoo(g3, rational)
    both, one = zoo["both"], zoo["one"]
    for sigma in symmetries(both):
        for psi in hom_space(both, one):
            compose(sigma, psi).validate()
