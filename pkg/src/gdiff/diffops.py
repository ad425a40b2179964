"""Difference-operator calculus: the action map mu, the quotient module of
operators, composition, the equation attached to an operator, and classical
difference systems.

A raw operator from E1 (rank n) to E2 (rank m) is a coefficient tensor
theta^g (one n x m matrix of functions per group element); it acts on
coordinates f by

    (theta f)_j(y) = sum_{i,k,g} theta^g_{ij}(y) . f_k(g^{-1}y) . E1^g_{ki}(y)

Two raw operators are the same difference operator exactly when their
assembled F-linear action matrices agree (the quotient by ker mu).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .equations import Coords, Equation, KMatrix, trivial_equation
from .equivalence import HModule, induce
from .errors import GDiffError
from .scalars import Backend, Fn
from .skewalg import SkewOp
from .solver import Morphism, hom_space
from .space import BASE_POINT, Group, stabilizer, transversal


@dataclass(frozen=True)
class RawOperator:
    source: Equation
    target: Equation
    terms: Dict[int, KMatrix]  # g -> theta^g, rank(source) x rank(target)

    def add(self, other: "RawOperator") -> "RawOperator":
        out = dict(self.terms)
        for g, mat in other.terms.items():
            out[g] = out[g].add(mat) if g in out else mat
        return RawOperator(self.source, self.target, out)

    def scale(self, c) -> "RawOperator":
        return RawOperator(self.source, self.target,
                           {g: m.scale(c) for g, m in self.terms.items()})


def identity_raw(eq: Equation) -> RawOperator:
    ident = KMatrix.identity(eq.rank, eq.group.space.size, eq.backend)
    return RawOperator(eq, eq, {0: ident})


def zero_raw(src: Equation, dst: Equation) -> RawOperator:
    return RawOperator(src, dst, {})


def delta_op(a: SkewOp, eq: Equation) -> RawOperator:
    """The operator Delta_a : e -> a.e on eq itself."""
    size = eq.group.space.size
    ident = KMatrix.identity(eq.rank, size, eq.backend)
    return RawOperator(eq, eq, {g: ident.scale_fn(f) for g, f in a.terms})


def mu(theta: RawOperator) -> linalg.Matrix:
    """Action matrix from source coordinates (n|S| over F, index k|S|+p)
    to target coordinates (m|S|, index j|S|+y)."""
    src, dst = theta.source, theta.target
    group, be = src.group, src.backend
    n, m, size = src.rank, dst.rank, group.space.size
    mat = linalg.zeros(m * size, n * size, be)
    for g, coef in theta.terms.items():
        ginv_img = group.elements[group.inv[g]]
        e_g = src.conn[g]
        for y in range(size):
            p = ginv_img[y]
            for j in range(m):
                for k in range(n):
                    acc = be.zero()
                    for i in range(n):
                        acc = acc + coef.entries[i][j].values[y] * e_g.entries[k][i].values[y]
                    mat[j * size + y][k * size + p] = mat[j * size + y][k * size + p] + acc
    return mat


def apply_action(action: linalg.Matrix, coords: Sequence[Fn],
                 dst: Equation) -> Coords:
    """Apply a flattened action matrix to module-element coordinates."""
    be = dst.backend
    size = dst.group.space.size
    vec = [v for f in coords for v in f.values]
    out = linalg.mat_vec(action, vec, be)
    return tuple(Fn(tuple(out[j * size:(j + 1) * size]), be)
                 for j in range(dst.rank))


@dataclass(frozen=True)
class DiffOperator:
    """Canonical form (the mu-image matrix) plus one representative."""

    source: Equation
    target: Equation
    action: linalg.Matrix
    rep: RawOperator

    def eq(self, other: "DiffOperator") -> bool:
        return linalg.mat_eq(self.action, other.action, self.source.backend)

    def apply(self, coords: Sequence[Fn]) -> Coords:
        return apply_action(self.action, coords, self.target)


def canonicalize(theta: RawOperator) -> DiffOperator:
    return DiffOperator(theta.source, theta.target, mu(theta), theta)


def identity_op(eq: Equation) -> DiffOperator:
    return canonicalize(identity_raw(eq))


def compose_raw(theta2: RawOperator, theta1: RawOperator) -> RawOperator:
    """Representative of theta2 o theta1 (theta1 applied first) by the
    tensor formula: the g'g coefficient gains (E1^g')^{-1}.g'(C_g).E2^g'.D_g'
    with C from theta1 and D from theta2."""
    if theta1.target.rank != theta2.source.rank:
        raise GDiffError("operator composition shape mismatch")
    e1, e2 = theta1.source, theta1.target
    group = e1.group
    out: Dict[int, KMatrix] = {}
    for gp, d_mat in theta2.terms.items():
        e1_inv = e1.conn[gp].inverse()
        right = e2.conn[gp].mul(d_mat)
        for g, c_mat in theta1.terms.items():
            mat = e1_inv.mul(c_mat.g_act(group, gp)).mul(right)
            key = group.mult[gp][g]
            out[key] = out[key].add(mat) if key in out else mat
    return RawOperator(e1, theta2.target, out)


def compose(second: DiffOperator, first: DiffOperator) -> DiffOperator:
    """second o first; tensor-formula representative cross-checked against
    the product of the canonical action matrices."""
    rep = compose_raw(second.rep, first.rep)
    product = linalg.mat_mul(second.action, first.action, first.source.backend)
    assembled = mu(rep)
    if not linalg.mat_eq(assembled, product, first.source.backend):
        raise GDiffError("composition cross-check failed: tensor route "
                         "disagrees with the action-matrix product")
    return DiffOperator(first.source, second.target, product, rep)


def skew_action(a: SkewOp, theta: RawOperator) -> RawOperator:
    """The left A-action a.theta (so that mu(a.theta) = mu(Delta_a) mu(theta))."""
    e1, e2 = theta.source, theta.target
    group = theta.source.group
    out: Dict[int, KMatrix] = {}
    for g, a_g in a.terms:
        e1_inv = e1.conn[g].inverse()
        e2_g = e2.conn[g]
        for gp, c_mat in theta.terms.items():
            mat = e1_inv.mul(c_mat.g_act(group, g)).mul(e2_g).scale_fn(a_g)
            key = group.mult[g][gp]
            out[key] = out[key].add(mat) if key in out else mat
    return RawOperator(e1, e2, out)


def _single_term(src: Equation, dst: Equation, i: int, j: int, g: int,
                 y: int) -> RawOperator:
    be = src.backend
    size = src.group.space.size
    z = Fn.zero(size, be)
    rows = [[z] * dst.rank for _ in range(src.rank)]
    rows[i][j] = Fn.delta(y, size, be)
    return RawOperator(src, dst, {g: KMatrix.from_rows(rows, be)})


def ker_mu_basis(src: Equation, dst: Equation) -> List[RawOperator]:
    """F-basis of ker mu inside the free coefficient space (n.m.|G|.|S|)."""
    group, be = src.group, src.backend
    n, m, size = src.rank, dst.rank, group.space.size
    nunk = n * m * group.order * size

    def uidx(i: int, j: int, g: int, y: int) -> int:
        return ((i * m + j) * group.order + g) * size + y

    rows = []
    for g in range(group.order):
        ginv_img = group.elements[group.inv[g]]
        e_g = src.conn[g]
        for y in range(size):
            p = ginv_img[y]
            for j in range(m):
                for k in range(n):
                    # one row of mu per (output entry (j,y), input entry (k,p))
                    row = [be.zero()] * nunk
                    for i in range(n):
                        row[uidx(i, j, g, y)] = e_g.entries[k][i].values[y]
                    rows.append((j * size + y, k * size + p, row))
    # rows computed per (g, ...) target the same mu entry when g^{-1}y
    # collides; accumulate them
    acc: Dict[Tuple[int, int], list] = {}
    for out_i, in_i, row in rows:
        key = (out_i, in_i)
        if key in acc:
            acc[key] = [x + yv for x, yv in zip(acc[key], row)]
        else:
            acc[key] = row
    system = [acc[k] for k in sorted(acc)]
    basis = linalg.nullspace(system, nunk, be)
    out = []
    for vec in basis:
        terms = {}
        for g in range(group.order):
            ent = [[Fn(tuple(vec[uidx(i, j, g, y)] for y in range(size)), be)
                    for j in range(m)] for i in range(n)]
            km = KMatrix.from_rows(ent, be)
            if not km.is_zero():
                terms[g] = km
        out.append(RawOperator(src, dst, terms))
    return out


def classical_solutions(op: DiffOperator) -> List[Coords]:
    """F-basis of C(Delta) = {e : Delta(e) = 0} as coordinate vectors."""
    be = op.source.backend
    size = op.source.group.space.size
    n = op.source.rank
    basis = linalg.nullspace(op.action, n * size, be)
    return [tuple(Fn(tuple(vec[k * size:(k + 1) * size]), be) for k in range(n))
            for vec in basis]


# -- Difn(E, 1) as a concrete A-module and the equation of an operator ------

class _DifnModule:
    """Difn_*(E, 1) realized as the row space of mu-images, with the
    delta-idempotent and group actions needed to extract fibers."""

    def __init__(self, eq: Equation):
        self.eq = eq
        self.group = eq.group
        self.be = eq.backend
        self.size = eq.group.space.size
        self.n = eq.rank
        self.triv = trivial_equation(eq.group, eq.backend)
        self.ncols = self.n * self.size
        gens = []
        for i in range(self.n):
            for g in range(self.group.order):
                for y in range(self.size):
                    theta = _single_term(eq, self.triv, i, 0, g, y)
                    gens.append(linalg.flatten(mu(theta)))
        self.basis = linalg.row_space_basis(gens, self.size * self.ncols, self.be)

    def unflatten(self, vec) -> linalg.Matrix:
        return linalg.unflatten(list(vec), self.size, self.ncols)

    def act_delta(self, x: int, vec) -> list:
        """The idempotent delta_x in k: keep only output row x."""
        mat = self.unflatten(vec)
        out = linalg.zeros(self.size, self.ncols, self.be)
        out[x] = mat[x]
        return linalg.flatten(out)

    def act_g(self, g: int, vec) -> list:
        """g . L = P_g L with (P_g L)[y] = L[g^{-1}y] (post-composition)."""
        mat = self.unflatten(vec)
        ginv_img = self.group.elements[self.group.inv[g]]
        return linalg.flatten([mat[ginv_img[y]] for y in range(self.size)])


@dataclass
class _QuotientData:
    """E_Delta together with the data needed to evaluate cosets on
    classical solutions."""

    equation: Equation
    hmodule: HModule
    lifts: List[list]        # one W1-vector (flattened action matrix) per
                             # fiber basis element
    source_module: "_DifnModule"


def _quotient_module(op: DiffOperator) -> _QuotientData:
    be = op.source.backend
    group = op.source.group
    w1 = _DifnModule(op.source)
    w2 = _DifnModule(op.target)

    # image of phi^Delta : W2 -> W1, nabla -> nabla o Delta
    combined = linalg.RowSpace(w1.size * w1.ncols, be)
    for lvec in w2.basis:
        lmat = w2.unflatten(lvec)
        combined.add(linalg.flatten(linalg.mat_mul(lmat, op.action, be)))
    im_dim = combined.dim
    qreps = [b for b in w1.basis if combined.add(b)]
    r = len(qreps)

    def qcoords(vec) -> Optional[list]:
        c = combined.coords(vec)
        if c is None:
            return None
        return c[im_dim:]

    def q_lift(coeffs) -> list:
        out = [be.zero()] * (w1.size * w1.ncols)
        for c, rep in zip(coeffs, qreps):
            out = [x + c * yv for x, yv in zip(out, rep)]
        return out

    # fiber of the quotient at the base point: image of the delta idempotent
    dx_rows = []
    for rep in qreps:
        img = qcoords(w1.act_delta(BASE_POINT, rep))
        dx_rows.append(img)
    fiber_basis = linalg.row_space_basis(dx_rows, r, be) if r else []
    d = len(fiber_basis)

    sub = stabilizer(group, BASE_POINT)
    ft = linalg.transpose(fiber_basis) if d else []
    rho = {}
    for h in sub.members:
        mat = []
        for c in fiber_basis:
            img = qcoords(w1.act_g(h, q_lift(c)))
            coeffs = linalg.solve(ft, img, be)
            if coeffs is None:
                raise GDiffError("operator fiber is not stabilizer-stable")
            mat.append(coeffs)
        rho[h] = mat
    mod = HModule(sub, be, d, rho)
    mod.validate()
    eq_delta = induce(mod, transversal(group))
    lifts = [q_lift(c) for c in fiber_basis]
    return _QuotientData(eq_delta, mod, lifts, w1)


def equation_of(op: DiffOperator) -> Equation:
    """The equation attached to the operator: the cokernel of precomposition
    on Difn(target, 1), induced back from its base-point fiber."""
    return _quotient_module(op).equation


def solution_morphism(data: _QuotientData, coords: Coords) -> Morphism:
    """phi_e : E_Delta -> 1 attached to a classical solution e."""
    be = data.source_module.be
    size = data.source_module.size
    vec_e = [v for f in coords for v in f.values]
    entries = []
    for lift in data.lifts:
        lmat = data.source_module.unflatten(lift)
        vals = linalg.mat_vec(lmat, vec_e, be)
        # (sigma(y).b_i)(e) evaluated at y collapses to the base-point value
        entries.append((Fn.constant(vals[BASE_POINT], size, be),))
    triv = trivial_equation(data.source_module.group, be)
    phi = Morphism(data.equation, triv,
                   KMatrix(tuple(entries), be) if entries else KMatrix((), be))
    phi.validate()
    return phi


def embed_solutions(op: DiffOperator) -> Dict[str, object]:
    """Embed C(Delta) into Hom_A(E_Delta, 1) and report the comparison."""
    data = _quotient_module(op)
    sols = classical_solutions(op)
    be = op.source.backend
    size = op.source.group.space.size
    flat = []
    for coords in sols:
        phi = solution_morphism(data, coords)
        flat.append([v for row in phi.matrix.entries for f in row for v in f.values])
    injective = (linalg.rank(flat, be) == len(sols)) if sols else True
    triv = trivial_equation(op.source.group, be)
    hom_dim = len(hom_space(data.equation, triv))
    return {
        "solution_dim": len(sols),
        "hom_dim": hom_dim,
        "injective": injective,
        "embeds": injective and len(sols) <= hom_dim,
        "rank_equation": data.equation.rank,
    }


# -- classical systems -------------------------------------------------------

@dataclass(frozen=True)
class ClassicalSystem:
    """sum_k (sum_g c^j_{kg} g) f_k = 0 for j = 1..m, over n unknowns."""

    group: Group
    backend: Backend
    unknowns: int
    coeffs: Dict[Tuple[int, int, int], Fn]  # (j, k, g) -> c^j_{kg}

    @property
    def equations(self) -> int:
        return 1 + max((j for (j, _, _) in self.coeffs), default=-1)


def ingest_classical(sys: ClassicalSystem, n_equations: Optional[int] = None
                     ) -> DiffOperator:
    """Canonical operator for a classical system: trivial connections on
    both sides, theta^g_{kj} = c^j_{kg}."""
    be = sys.backend
    group = sys.group
    size = group.space.size
    m = n_equations if n_equations is not None else max(sys.equations, 0)
    src = trivial_equation(group, be, sys.unknowns)
    dst = trivial_equation(group, be, m)
    z = Fn.zero(size, be)
    terms: Dict[int, KMatrix] = {}
    gs = sorted({g for (_, _, g) in sys.coeffs})
    for g in gs:
        rows = [[z] * m for _ in range(sys.unknowns)]
        for (j, k, gg), fn in sys.coeffs.items():
            if gg == g:
                rows[k][j] = rows[k][j] + fn
        terms[g] = KMatrix.from_rows(rows, be)
    return canonicalize(RawOperator(src, dst, terms))
