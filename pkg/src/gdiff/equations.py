"""Connection-presented difference equations and their tensor calculus.

An equation of rank n is a free k-module with the G-action recorded by one
n x n matrix of functions per group element (the connection), subject to
the cocycle law  E^{gg'} = g(E^{g'}) E^g  and E^e = id.

Coordinates are row vectors: an element with coordinate functions f
transforms as  f |-> g(f) . E^g.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .errors import BackendMismatch, InconsistentConnection, SingularGeneratorMatrix
from .scalars import Backend, Fn
from .space import Group

COCYCLE_EXHAUSTIVE_CAP = 64  # |G| above which only generators x elements are checked


@dataclass(frozen=True)
class KMatrix:
    """A matrix over k = F(S): entries are functions on the space."""

    entries: Tuple[Tuple[Fn, ...], ...]
    backend: Backend

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def npoints(self) -> int:
        return len(self.entries[0][0]) if self.entries and self.entries[0] else 0

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Fn]], backend: Backend) -> "KMatrix":
        return KMatrix(tuple(tuple(r) for r in rows), backend)

    @staticmethod
    def identity(n: int, size: int, backend: Backend) -> "KMatrix":
        one, zero = Fn.one(size, backend), Fn.zero(size, backend)
        return KMatrix(tuple(tuple(one if i == j else zero for j in range(n))
                             for i in range(n)), backend)

    @staticmethod
    def from_point_matrices(mats: Sequence[linalg.Matrix], backend: Backend) -> "KMatrix":
        """Build from one scalar matrix per point."""
        n = len(mats[0])
        m = len(mats[0][0]) if n else 0
        rows = []
        for i in range(n):
            row = []
            for j in range(m):
                row.append(Fn(tuple(backend.coerce(mat[i][j]) for mat in mats), backend))
            rows.append(tuple(row))
        return KMatrix(tuple(rows), backend)

    @staticmethod
    def from_scalar_matrix(mat: linalg.Matrix, size: int, backend: Backend) -> "KMatrix":
        """Constant-in-space matrix."""
        return KMatrix(tuple(tuple(Fn.constant(v, size, backend) for v in row)
                             for row in mat), backend)

    def at_point(self, y: int) -> linalg.Matrix:
        return [[f.values[y] for f in row] for row in self.entries]

    def mul(self, other: "KMatrix") -> "KMatrix":
        z = Fn.zero(self.npoints, self.backend)
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = z
                for t in range(self.ncols):
                    acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc)
            rows.append(tuple(row))
        return KMatrix(tuple(rows), self.backend)

    def add(self, other: "KMatrix") -> "KMatrix":
        return KMatrix(tuple(tuple(a + b for a, b in zip(ra, rb))
                             for ra, rb in zip(self.entries, other.entries)), self.backend)

    def sub(self, other: "KMatrix") -> "KMatrix":
        return KMatrix(tuple(tuple(a - b for a, b in zip(ra, rb))
                             for ra, rb in zip(self.entries, other.entries)), self.backend)

    def scale_fn(self, f: Fn) -> "KMatrix":
        return KMatrix(tuple(tuple(f * a for a in row) for row in self.entries), self.backend)

    def scale(self, c) -> "KMatrix":
        return KMatrix(tuple(tuple(a.scale(c) for a in row) for row in self.entries),
                       self.backend)

    def transpose(self) -> "KMatrix":
        return KMatrix(tuple(zip(*self.entries)), self.backend)

    def g_act(self, group: Group, g: int) -> "KMatrix":
        """Apply g to every entry: (g.f)(x) = f(g^{-1}x)."""
        ginv = group.elements[group.inv[g]]
        return KMatrix(tuple(tuple(f.translate(ginv) for f in row)
                             for row in self.entries), self.backend)

    def inverse(self) -> Optional["KMatrix"]:
        mats = []
        for y in range(self.npoints):
            m = linalg.inv(self.at_point(y), self.backend)
            if m is None:
                return None
            mats.append(m)
        return KMatrix.from_point_matrices(mats, self.backend)

    def det(self) -> Fn:
        vals = tuple(linalg.det(self.at_point(y), self.backend)
                     for y in range(self.npoints))
        return Fn(vals, self.backend)

    def kron(self, other: "KMatrix") -> "KMatrix":
        """Row (i,j), column (r,u): self_{ir} * other_{ju}, row-major."""
        rows = []
        for i in range(self.nrows):
            for j in range(other.nrows):
                row = []
                for r in range(self.ncols):
                    for u in range(other.ncols):
                        row.append(self.entries[i][r] * other.entries[j][u])
                rows.append(tuple(row))
        return KMatrix(tuple(rows), self.backend)

    def block_diag(self, other: "KMatrix") -> "KMatrix":
        z1 = Fn.zero(self.npoints, self.backend)
        rows = []
        for r in self.entries:
            rows.append(tuple(r) + (z1,) * other.ncols)
        for r in other.entries:
            rows.append((z1,) * self.ncols + tuple(r))
        return KMatrix(tuple(rows), self.backend)

    def eq(self, other: "KMatrix") -> bool:
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return all(a.eq(b) for ra, rb in zip(self.entries, other.entries)
                   for a, b in zip(ra, rb))

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.entries for f in row)


Coords = Tuple[Fn, ...]  # coordinates of a module element (row vector over k)


@dataclass(frozen=True)
class Equation:
    """A rank-n equation presented by its connection matrices."""

    group: Group
    backend: Backend
    rank: int
    conn: Tuple[KMatrix, ...]  # indexed by group element id

    def matrix(self, g: int) -> KMatrix:
        return self.conn[g]

    def validate(self) -> None:
        group, size = self.group, self.group.space.size
        ident = KMatrix.identity(self.rank, size, self.backend)
        if not self.conn[0].eq(ident):
            raise InconsistentConnection("E^e is not the identity")
        if group.order <= COCYCLE_EXHAUSTIVE_CAP:
            firsts = range(group.order)
        else:
            firsts = sorted(set(group.generators.values()))
        for g in firsts:
            for gp in range(group.order):
                lhs = self.conn[group.mult[g][gp]]
                rhs = self.conn[gp].g_act(group, g).mul(self.conn[g])
                if not lhs.eq(rhs):
                    raise InconsistentConnection(
                        f"cocycle violated at elements ({g}, {gp})")
        for g in range(group.order):
            invmat = self.conn[g].inverse()
            if invmat is None:
                raise InconsistentConnection(f"E^g singular for element {g}")
            if not invmat.eq(self.conn[group.inv[g]].g_act(group, g)):
                raise InconsistentConnection(f"inverse formula fails for element {g}")

    def zero_element(self) -> Coords:
        z = Fn.zero(self.group.space.size, self.backend)
        return tuple(z for _ in range(self.rank))


def trivial_equation(group: Group, backend: Backend, rank: int = 1) -> Equation:
    """The equation 1 (and its powers): identity connection everywhere."""
    size = group.space.size
    ident = KMatrix.identity(rank, size, backend)
    return Equation(group, backend, rank, tuple(ident for _ in range(group.order)))


def complete_connection(group: Group, backend: Backend,
                        generator_matrices: Dict[str, KMatrix]) -> Equation:
    """Extend generator connection data to all of G by the cocycle law.

    Raises InconsistentConnection when an element reached by two words gets
    conflicting matrices, SingularGeneratorMatrix for non-invertible input.
    """
    if set(generator_matrices) != set(group.generators):
        raise InconsistentConnection(
            f"need one matrix per generator {sorted(group.generators)}")
    size = group.space.size
    rank = next(iter(generator_matrices.values())).nrows
    for name, mat in generator_matrices.items():
        if mat.nrows != rank or mat.ncols != rank:
            raise InconsistentConnection(f"generator {name!r} has wrong shape")
        if mat.inverse() is None:
            raise SingularGeneratorMatrix(f"generator {name!r} singular at some point")

    conn: List[Optional[KMatrix]] = [None] * group.order
    conn[0] = KMatrix.identity(rank, size, backend)
    frontier = [0]
    while frontier:
        nxt = []
        for gp in frontier:
            for name, gid in group.generators.items():
                # E^{s g'} = s(E^{g'}) . E^s
                target = group.mult[gid][gp]
                mat = conn[gp].g_act(group, gid).mul(generator_matrices[name])
                if conn[target] is None:
                    conn[target] = mat
                    nxt.append(target)
                elif not conn[target].eq(mat):
                    raise InconsistentConnection(
                        f"element {target} reached with conflicting matrices")
        frontier = nxt
    if any(c is None for c in conn):
        raise InconsistentConnection("generators do not generate the group")
    eq = Equation(group, backend, rank, tuple(conn))
    eq.validate()
    return eq


def act(eq: Equation, g: int, coords: Sequence[Fn]) -> Coords:
    """Coordinates transform as f |-> g(f) . E^g."""
    group = eq.group
    ginv = group.elements[group.inv[g]]
    shifted = [f.translate(ginv) for f in coords]
    mat = eq.conn[g]
    out = []
    for j in range(eq.rank):
        acc = Fn.zero(group.space.size, eq.backend)
        for i in range(eq.rank):
            acc = acc + shifted[i] * mat.entries[i][j]
        out.append(acc)
    return tuple(out)


def _check_compatible(e: Equation, f: Equation) -> None:
    if e.group is not f.group and e.group != f.group:
        raise BackendMismatch("equations live over different groups")
    e.backend.check_same(f.backend)


def direct_sum(e: Equation, f: Equation) -> Equation:
    _check_compatible(e, f)
    conn = tuple(e.conn[g].block_diag(f.conn[g]) for g in range(e.group.order))
    return Equation(e.group, e.backend, e.rank + f.rank, conn)


def tensor(e: Equation, f: Equation) -> Equation:
    _check_compatible(e, f)
    conn = tuple(e.conn[g].kron(f.conn[g]) for g in range(e.group.order))
    return Equation(e.group, e.backend, e.rank * f.rank, conn)


def dual(e: Equation) -> Equation:
    """(E*)^g = ((E^g)^t)^{-1}."""
    conn = []
    for g in range(e.group.order):
        m = e.conn[g].transpose().inverse()
        if m is None:
            raise InconsistentConnection("singular connection in dual()")
        conn.append(m)
    return Equation(e.group, e.backend, e.rank, tuple(conn))


def hom(e: Equation, f: Equation) -> Equation:
    """Hom_k(E,F)^g = F^g (x) ((E^g)^t)^{-1}; basis d_{ij}, i over F, j over E."""
    _check_compatible(e, f)
    conn = []
    for g in range(e.group.order):
        t = e.conn[g].transpose().inverse()
        if t is None:
            raise InconsistentConnection("singular connection in hom()")
        conn.append(f.conn[g].kron(t))
    return Equation(e.group, e.backend, e.rank * f.rank, tuple(conn))


def sym2_basis(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def wedge2_basis(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def sym2(e: Equation) -> Equation:
    """Symmetric square on the basis {e_i e_j}, i <= j, lexicographic."""
    basis = sym2_basis(e.rank)
    conn = []
    for g in range(e.group.order):
        m = e.conn[g]
        rows = []
        for (i, j) in basis:
            row = []
            for (k, l) in basis:
                if k == l:
                    row.append(m.entries[i][k] * m.entries[j][k])
                else:
                    row.append(m.entries[i][k] * m.entries[j][l]
                               + m.entries[i][l] * m.entries[j][k])
            rows.append(tuple(row))
        conn.append(KMatrix(tuple(rows), e.backend))
    return Equation(e.group, e.backend, len(basis), tuple(conn))


def wedge2(e: Equation) -> Equation:
    """Exterior square on the basis {e_i ^ e_j}, i < j, lexicographic."""
    basis = wedge2_basis(e.rank)
    conn = []
    for g in range(e.group.order):
        m = e.conn[g]
        rows = []
        for (i, j) in basis:
            row = []
            for (k, l) in basis:
                row.append(m.entries[i][k] * m.entries[j][l]
                           - m.entries[i][l] * m.entries[j][k])
            rows.append(tuple(row))
        conn.append(KMatrix(tuple(rows), e.backend))
    return Equation(e.group, e.backend, len(basis), tuple(conn))


def wedge_top(e: Equation) -> Equation:
    """Top exterior power: rank 1 with connection det(E^g)."""
    conn = tuple(KMatrix(((m.det(),),), e.backend) for m in e.conn)
    return Equation(e.group, e.backend, 1, conn)
