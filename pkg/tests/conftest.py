"""Shared fixtures: small dihedral groups, the standard equation zoo, and
independent sympy-based oracles for dimensions computed by the package."""

import random
from fractions import Fraction

import pytest
import sympy

from gdiff import equivalence
from gdiff.equations import (KMatrix, complete_connection, direct_sum,
                             trivial_equation)
from gdiff.scalars import Backend, Fn
from gdiff.space import dihedral_on_cycle, stabilizer, transversal


@pytest.fixture(scope="session")
def g3():
    return dihedral_on_cycle(3)


@pytest.fixture(scope="session")
def g4():
    return dihedral_on_cycle(4)


@pytest.fixture(scope="session")
def g6():
    return dihedral_on_cycle(6)


@pytest.fixture(scope="session")
def rational():
    return Backend.rational()


@pytest.fixture(scope="session")
def cplx():
    return Backend.complex()


def sign_equation(group, be):
    fam = equivalence.builtin_irreducibles(stabilizer(group, 0), be)
    return equivalence.induce(fam["sign"], transversal(group))


def rank2_equation(group, be, mat=((1, -2), (0, -1))):
    """Induced from a non-diagonal involution of the order-2 stabilizer."""
    sub = stabilizer(group, 0)
    t = next(h for h in sub.members if h != 0)
    mod = equivalence.hmodule_from_matrices(
        sub, be, {0: [[1, 0], [0, 1]], t: [list(r) for r in mat]})
    return equivalence.induce(mod, transversal(group))


def random_involution(rng):
    """P diag(1,-1) P^{-1} for a random invertible rational P."""
    while True:
        p = [[Fraction(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)]
        det = p[0][0] * p[1][1] - p[0][1] * p[1][0]
        if det != 0:
            break
    pinv = [[p[1][1] / det, -p[0][1] / det], [-p[1][0] / det, p[0][0] / det]]
    d = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]]
    tmp = [[sum(d[i][k] * pinv[k][j] for k in range(2)) for j in range(2)]
           for i in range(2)]
    return [[sum(p[i][k] * tmp[k][j] for k in range(2)) for j in range(2)]
            for i in range(2)]


def equation_zoo(group, be):
    one = trivial_equation(group, be)
    sign = sign_equation(group, be)
    return {
        "one": one,
        "sign": sign,
        "both": direct_sum(one, sign),
        "rank2": rank2_equation(group, be),
    }


# -- independent oracles (sympy elimination, full-group systems) -------------

def sympy_nullity(rows, ncols):
    """Nullspace dimension by sympy's elimination (exact inputs only)."""
    if not rows:
        return ncols
    m = sympy.Matrix([[sympy.Rational(x) for x in row] for row in rows])
    return ncols - m.rank()


def full_hom_system(src, dst):
    """The intertwining system assembled over ALL group elements (the
    package solves generators only); rows of exact rationals."""
    group = src.group
    n, m, size = src.rank, dst.rank, group.space.size

    def idx(i, j, y):
        return (i * m + j) * size + y

    rows = []
    for g in range(group.order):
        ginv_img = group.elements[group.inv[g]]
        for i in range(n):
            for k in range(m):
                for y in range(size):
                    row = [Fraction(0)] * (n * m * size)
                    for j in range(n):
                        row[idx(j, k, y)] += src.conn[g].entries[i][j].values[y]
                    for j in range(m):
                        row[idx(i, j, ginv_img[y])] -= dst.conn[g].entries[j][k].values[y]
                    rows.append(row)
    return rows


def hom_dim_oracle(src, dst):
    return sympy_nullity(full_hom_system(src, dst),
                         src.rank * dst.rank * src.group.space.size)


def seeded_rng(seed=0):
    return random.Random(seed)


def random_fn(rng, size, be):
    return Fn(tuple(be.random(rng) for _ in range(size)), be)


def random_kmatrix(rng, nrows, ncols, size, be):
    return KMatrix.from_rows(
        [[random_fn(rng, size, be) for _ in range(ncols)] for _ in range(nrows)], be)
