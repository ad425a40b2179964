"""Solving equations: Hom_A(E,F) bases, kernels and images, isomorphism
search, simplicity tests and direct-sum decomposition.

A morphism E -> F with matrix phi (rank(E) x rank(F), row convention:
phi(e_i) = sum_j phi_{ij} f_j) intertwines the connections:
E^g . phi = g(phi) . F^g at every point, for every group element.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .equations import Equation, KMatrix
from .equivalence import HModule, fiber, induce, intertwiner_space
from .errors import NotASolution, SplittingInconclusive
from .scalars import Backend, Fn
from .space import BASE_POINT, transversal

SIMPLE = "simple"
NOT_SIMPLE = "not_simple"
UNDETERMINED = "undetermined"

DEFAULT_RETRY_BUDGET = 8


@dataclass(frozen=True)
class Morphism:
    source: Equation
    target: Equation
    matrix: KMatrix  # rank(source) x rank(target)

    def validate(self) -> None:
        group = self.source.group
        for g in range(group.order):
            lhs = self.source.conn[g].mul(self.matrix)
            rhs = self.matrix.g_act(group, g).mul(self.target.conn[g])
            if not lhs.eq(rhs):
                raise NotASolution(f"intertwining fails for group element {g}")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except NotASolution:
            return False
        return True

    def at_point(self, x: int) -> linalg.Matrix:
        return self.matrix.at_point(x)


def identity_morphism(eq: Equation) -> Morphism:
    return Morphism(eq, eq, KMatrix.identity(eq.rank, eq.group.space.size, eq.backend))


def zero_morphism(src: Equation, dst: Equation) -> Morphism:
    z = Fn.zero(src.group.space.size, src.backend)
    mat = KMatrix(tuple(tuple(z for _ in range(dst.rank)) for _ in range(src.rank)),
                  src.backend)
    return Morphism(src, dst, mat)


def compose(first: Morphism, second: Morphism) -> Morphism:
    """first: E -> F, second: F -> G; result E -> G (apply first, then second)."""
    if first.target.rank != second.source.rank:
        raise ValueError("composition shape mismatch")
    return Morphism(first.source, second.target, first.matrix.mul(second.matrix))


def pointwise_map(phi: Morphism, x: int) -> linalg.Matrix:
    """The fiber map F_phi^x of a morphism at the point x, as a scalar matrix."""
    return phi.at_point(x)


def _morphism_from_vector(src: Equation, dst: Equation, vec) -> Morphism:
    n, m, size = src.rank, dst.rank, src.group.space.size
    be = src.backend
    rows = []
    for i in range(n):
        row = []
        for j in range(m):
            base = (i * m + j) * size
            row.append(Fn(tuple(vec[base + y] for y in range(size)), be))
        rows.append(tuple(row))
    return Morphism(src, dst, KMatrix(tuple(rows), be))


def hom_space(src: Equation, dst: Equation) -> List[Morphism]:
    """F-basis of Hom_A(src, dst) via the generator-block intertwining system."""
    src.backend.check_same(dst.backend)
    group = src.group
    be = src.backend
    n, m, size = src.rank, dst.rank, group.space.size
    nunk = n * m * size

    def idx(i: int, j: int, y: int) -> int:
        return (i * m + j) * size + y

    rows = []
    for gid in set(group.generators.values()):
        e_g, f_g = src.conn[gid], dst.conn[gid]
        ginv_img = group.elements[group.inv[gid]]
        for i in range(n):
            for k in range(m):
                for y in range(size):
                    # sum_j E^g_{ij}(y) phi_{jk}(y) - sum_j phi_{ij}(g^-1 y) F^g_{jk}(y) = 0
                    row = [be.zero()] * nunk
                    for j in range(n):
                        row[idx(j, k, y)] = row[idx(j, k, y)] + e_g.entries[i][j].values[y]
                    gy = ginv_img[y]
                    for j in range(m):
                        row[idx(i, j, gy)] = row[idx(i, j, gy)] - f_g.entries[j][k].values[y]
                    rows.append(row)
    basis = linalg.nullspace(rows, nunk, be)
    out = []
    for vec in basis:
        phi = _morphism_from_vector(src, dst, vec)
        phi.validate()  # post-hoc check on all group elements
        out.append(phi)
    return out


def symmetries(eq: Equation) -> List[Morphism]:
    return hom_space(eq, eq)


def is_injective(phi: Morphism) -> bool:
    p = phi.at_point(BASE_POINT)
    return linalg.rank(p, phi.source.backend) == phi.source.rank


def is_surjective(phi: Morphism) -> bool:
    p = phi.at_point(BASE_POINT)
    return linalg.rank(p, phi.source.backend) == phi.target.rank


def is_isomorphism(phi: Morphism) -> bool:
    return phi.source.rank == phi.target.rank and is_injective(phi)


def _subfiber_module(fib: HModule, basis_rows: Sequence[linalg.Vector]) -> HModule:
    """The H-module carried by an H-stable row subspace of a fiber."""
    be = fib.backend
    d = len(basis_rows)
    bt = linalg.transpose(list(basis_rows)) if d else []
    rho = {}
    for h in fib.subgroup.members:
        mat = []
        for row in basis_rows:
            img = linalg.vec_mat(list(row), fib.rho[h], be)
            coeffs = linalg.solve(bt, img, be)
            if coeffs is None:
                raise ValueError("subspace is not H-stable")
            mat.append(coeffs)
        rho[h] = mat
    return HModule(fib.subgroup, be, d, rho)


def sub_equation(eq: Equation, basis_rows: Sequence[linalg.Vector]) -> Tuple[Equation, Morphism]:
    """Transport an H-stable subspace of the base fiber to a subobject.

    Returns the induced equation plus its embedding, whose matrix at y is
    B . E^{sigma(y)}(y) (transport of the fiber basis along the transversal).
    """
    group = eq.group
    be = eq.backend
    fib = fiber(eq)
    sub = _subfiber_module(fib, basis_rows)
    sig = transversal(group)
    sub_eq = induce(sub, sig)
    mats = []
    for y in range(group.space.size):
        t = eq.conn[sig.sigma[y]].at_point(y)
        mats.append(linalg.mat_mul([list(r) for r in basis_rows], t, be)
                    if basis_rows else [])
    emb = Morphism(sub_eq, eq, KMatrix.from_point_matrices(mats, be)
                   if basis_rows else KMatrix((), be))
    emb.validate()
    return sub_eq, emb


def kernel(phi: Morphism) -> Tuple[Equation, Morphism]:
    """The subobject {v : phi(v) = 0} of the source, with its embedding."""
    p = phi.at_point(BASE_POINT)
    be = phi.source.backend
    # left nullspace: rows v with v . p = 0
    basis = linalg.nullspace(linalg.transpose(p) if p else [],
                             phi.source.rank, be)
    return sub_equation(phi.source, basis)


def image(phi: Morphism) -> Tuple[Equation, Morphism]:
    """The image subobject of the target, with its embedding."""
    p = phi.at_point(BASE_POINT)
    be = phi.source.backend
    basis = linalg.row_space_basis(p, phi.target.rank, be)
    return sub_equation(phi.target, basis)


def factor_through_image(phi: Morphism, img_eq: Equation, emb: Morphism) -> Morphism:
    """The corestriction pi with phi = pi . emb, solved pointwise."""
    be = phi.source.backend
    size = phi.source.group.space.size
    d = img_eq.rank
    mats = []
    for y in range(size):
        psi_t = linalg.transpose(emb.at_point(y)) if d else []
        target = phi.at_point(y)
        rows = []
        for i in range(phi.source.rank):
            x = linalg.solve(psi_t, list(target[i]), be) if d else []
            if x is None:
                raise NotASolution("morphism does not factor through the image")
            rows.append(x)
        mats.append(rows)
    pi = Morphism(phi.source, img_eq, KMatrix.from_point_matrices(mats, be)
                  if phi.source.rank else KMatrix((), be))
    pi.validate()
    return pi


def find_isomorphism(src: Equation, dst: Equation, seed: int = 0,
                     budget: int = DEFAULT_RETRY_BUDGET) -> Optional[Morphism]:
    """An explicit isomorphism src -> dst found inside hom_space, or None."""
    if src.rank != dst.rank:
        return None
    basis = hom_space(src, dst)
    if not basis:
        return None if src.rank else identity_and_check(src, dst)
    for phi in basis:
        if is_isomorphism(phi):
            return phi
    rng = random.Random(seed)
    be = src.backend
    for _ in range(budget):
        mat = basis[0].matrix.scale(be.random(rng))
        for phi in basis[1:]:
            mat = mat.add(phi.matrix.scale(be.random(rng)))
        cand = Morphism(src, dst, mat)
        if is_isomorphism(cand):
            return cand
    return None


def identity_and_check(src: Equation, dst: Equation) -> Optional[Morphism]:
    """Rank-0 corner: the empty morphism is the unique isomorphism."""
    if src.rank == 0 and dst.rank == 0:
        return Morphism(src, dst, KMatrix((), src.backend))
    return None


def _is_scalar_matrix(m: linalg.Matrix, be: Backend) -> bool:
    n = len(m)
    return all(be.eq(m[i][j], m[0][0] if i == j else be.zero())
               for i in range(n) for j in range(n))


def is_simple(eq: Equation, seed: int = 0) -> str:
    """Tri-state simplicity via the fiber span criterion.

    Span of {rho(h)} of dimension d^2 certifies absolute simplicity; over
    the complex backend anything less is reducible (the span is the full
    commutant-of-commutant); over exact rationals a proper invariant
    subspace is exhibited when possible, else UNDETERMINED.
    """
    fib = fiber(eq)
    be = eq.backend
    d = fib.dim
    if d == 0:
        return NOT_SIMPLE
    span = linalg.RowSpace(d * d, be)
    for h in fib.subgroup.members:
        span.add(linalg.flatten(fib.rho[h]))
    if span.dim == d * d:
        return SIMPLE
    if not be.exact:
        return NOT_SIMPLE
    comm = intertwiner_space(fib, fib)
    if len(comm) == 1:
        # indecomposable with End = F; semisimple ambient category => simple
        return SIMPLE
    if _find_stable_splitting(fib, comm, seed) is not None:
        return NOT_SIMPLE
    return UNDETERMINED


def _generalized_eigenrows(m: linalg.Matrix, lam, d: int, be: Backend) -> List[linalg.Vector]:
    """Rows v with v . (M - lam I)^d = 0."""
    shifted = [row[:] for row in m]
    for i in range(d):
        shifted[i][i] = shifted[i][i] - lam
    power = linalg.mat_pow(shifted, d, be)
    return linalg.nullspace(linalg.transpose(power), d, be)


def _eigenvalue_split(m: linalg.Matrix, be: Backend) -> Optional[List[List[linalg.Vector]]]:
    """Partition of F^d (rows) into >= 2 generalized eigenspaces of M, or None."""
    d = len(m)
    if be.exact:
        coeffs = linalg.charpoly(m)
        roots = linalg.rational_roots(coeffs)
    else:
        vals = np.linalg.eigvals(np.array([[complex(x) for x in row] for row in m]))
        scale = 1 + max((abs(v) for v in vals), default=0.0)
        tol = max(be.eps * 1e3, 1e-7) * scale
        roots = []
        for v in vals:
            if all(abs(v - r) > tol for r in roots):
                roots.append(complex(v))
    if len(roots) < 2:
        return None
    spaces = []
    total = 0
    for lam in roots:
        basis = _generalized_eigenrows(m, lam, d, be)
        if basis:
            spaces.append(basis)
            total += len(basis)
    if len(spaces) < 2 or total != d:
        return None
    return spaces


def _find_stable_splitting(fib: HModule, comm: List[linalg.Matrix],
                           seed: int, budget: int = DEFAULT_RETRY_BUDGET
                           ) -> Optional[List[List[linalg.Vector]]]:
    """Generalized eigenspaces of a random commutant element, if separating."""
    be = fib.backend
    rng = random.Random(seed)
    candidates = [c for c in comm if not _is_scalar_matrix(c, be)]
    for _ in range(budget):
        for m in candidates:
            split = _eigenvalue_split(m, be)
            if split is not None:
                return split
        mixed = linalg.zeros(fib.dim, fib.dim, be)
        for c in comm:
            mixed = linalg.mat_add(mixed, linalg.mat_scale(be.random(rng), c))
        candidates = [mixed] if not _is_scalar_matrix(mixed, be) else []
    return None


def decompose(eq: Equation, seed: int = 0,
              budget: int = DEFAULT_RETRY_BUDGET) -> List[Tuple[Equation, Morphism]]:
    """Split into indecomposable summands with embeddings, by recursive
    random-endomorphism eigenspace splitting at the fiber level."""
    fib = fiber(eq)
    be = eq.backend
    ident = linalg.identity(eq.rank, be)
    leaves: List[List[linalg.Vector]] = []

    def recurse(basis_rows: List[linalg.Vector], depth: int) -> None:
        sub = _subfiber_module(fib, basis_rows)
        comm = intertwiner_space(sub, sub)
        if len(comm) <= 1:
            leaves.append(basis_rows)
            return
        split = _find_stable_splitting(sub, comm, seed + depth, budget)
        if split is None:
            raise SplittingInconclusive(
                "no separating endomorphism found within the retry budget")
        for coeff_basis in split:
            rows = [linalg.vec_mat(c, [list(r) for r in basis_rows], be)
                    for c in coeff_basis]
            recurse(rows, depth + 1)

    recurse([list(r) for r in ident], 0)
    return [sub_equation(eq, rows) for rows in leaves]
