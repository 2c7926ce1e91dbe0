"""Homology of dg-modules over fields and over Z.

Per degree the homology H_g = ker(delta_g) / im(delta_{g-1}) is presented by
generators and invariant factors: over Z the boundary image is put in Smith
normal form inside a saturated cycle basis, so the invariant factors form a
divisibility chain and the free rank is read off directly; over a field all
invariants are 0 (free).  Homology rings carry a multiplication table on the
surviving generators, homology modules an action table over the ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    Differential,
    GradedAlgebra,
    cycles_subalgebra,
    is_semisimple_algebra,
)
from .dgmodules import DgModule
from .lattice import ZLattice
from .linalg import Matrix, integer_kernel, integer_solve, smith_normal_form
from .rings import QQ, ZZ, Integers, RingError


class UnsupportedRing(RingError):
    pass


class NotGraded(ValueError):
    pass


# ---------------------------------------------------------------------------
# Graded chain data
# ---------------------------------------------------------------------------


@dataclass
class GradedChain:
    """Bases per degree (vectors in some ambient coordinate space) plus the
    boundary matrices between consecutive degrees, over `ring`."""

    ring: object
    degrees: list  # sorted distinct degrees
    bases: dict  # degree -> list of ambient vectors
    boundaries: dict  # degree g -> Matrix  (basis_g -> basis_{g+1} coordinates)


def chain_from_dg_module(M: DgModule) -> GradedChain:
    R = M.ring
    by_degree = M.degree_indices()
    degrees = sorted(by_degree)
    bases = {}
    for g in degrees:
        bases[g] = [M.basis_vector(i) for i in by_degree[g]]
    boundaries = {}
    for g in degrees:
        tgt = by_degree.get(g + 1, [])
        src = by_degree[g]
        rows = [[M.delta.rows[t][s] for s in src] for t in tgt]
        boundaries[g] = Matrix(R, rows) if tgt else Matrix.zeros(R, 0, len(src))
    return GradedChain(R, degrees, bases, boundaries)


def chain_from_lattice(L: ZLattice, dmat: Matrix, ambient_degrees) -> GradedChain:
    """Integral chain data of a d-stable graded lattice inside a rational
    graded space.  Raises NotGraded if the lattice is not the direct sum of
    its degree components."""
    distinct = sorted(set(ambient_degrees))
    comps = {}
    total_rank = 0
    for g in distinct:
        idx = [i for i, d in enumerate(ambient_degrees) if d == g]
        comp = L.restrict_to_coordinates(idx)
        comps[g] = comp
        total_rank += comp.rank
    if total_rank != L.rank:
        raise NotGraded("lattice is not graded (component ranks do not sum)")
    degrees = [g for g in distinct if comps[g].rank > 0]
    bases = {g: comps[g].vectors() for g in degrees}
    boundaries = {}
    for g in degrees:
        src = bases[g]
        nxt = comps.get(g + 1)
        if nxt is None or nxt.rank == 0:
            for v in src:
                img = dmat.apply(v)
                if any(x != 0 for x in img):
                    raise NotGraded("differential leaves the graded lattice")
            boundaries[g] = Matrix.zeros(ZZ, 0, len(src))
            continue
        cols = []
        for v in src:
            img = dmat.apply(v)
            c = nxt.coords(img)
            if c is None:
                raise NotGraded("differential image not in the next component")
            cols.append(c)
        boundaries[g] = Matrix.from_columns(ZZ, cols)
    return GradedChain(ZZ, degrees, bases, boundaries)


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


@dataclass
class DegreeComponent:
    """H_g presented by generator representatives (ambient vectors) with
    orders (0 = infinite); reduce() maps a cycle to its coordinate tuple."""

    degree: int
    orders: list
    generators: list
    _reduce: object = field(repr=False, default=None)

    @property
    def free_rank(self):
        return sum(1 for o in self.orders if o == 0)

    @property
    def torsion(self):
        return [o for o in self.orders if o >= 2]

    @property
    def invariants(self):
        return list(self.orders)

    def is_zero(self):
        return not self.orders

    def reduce(self, vec):
        return self._reduce(vec)


def _component_over_z(g, cycle_vectors, boundary_coords_in_cycles):
    """Quotient of the lattice spanned by cycle_vectors by the image whose
    coordinates (in that basis) are the columns of the given matrix."""
    k = len(cycle_vectors)
    if k == 0:
        return DegreeComponent(g, [], [], lambda vec: ())
    X = boundary_coords_in_cycles
    if X.n == 0 or X.is_zero():
        U = Matrix.identity(ZZ, k)
        svals = [0] * k
    else:
        Uu, S, V = smith_normal_form(X)
        # cycles basis change: aligned basis = cycle_matrix * Uu
        U = Uu
        svals = [S.rows[i][i] if i < min(S.m, S.n) else 0 for i in range(k)]
    aligned = []
    for i in range(k):
        vec = None
        for j in range(k):
            c = U.rows[j][i]
            if c == 0:
                continue
            term = [Fraction(c) * x for x in cycle_vectors[j]]
            vec = term if vec is None else [a + b for a, b in zip(vec, term)]
        aligned.append(vec)
    Uinv = U.to_ring(QQ).inverse()
    orders = []
    gens = []
    keep = []
    for i in range(k):
        s = svals[i]
        if s == 1:
            continue
        keep.append(i)
        orders.append(s)
        gens.append(aligned[i])
    cycle_cols = Matrix.from_columns(QQ, [[Fraction(x) for x in v] for v in cycle_vectors])

    def reduce(vec):
        w = cycle_cols.solve([Fraction(x) for x in vec])
        if w is None:
            raise ValueError("vector is not a cycle in this degree")
        coords = Uinv.apply(w)
        out = []
        for i, s in zip(keep, [svals[i] for i in keep]):
            c = coords[i]
            if Fraction(c).denominator != 1:
                raise ValueError("vector is not in the cycle lattice")
            c = int(c)
            out.append(c % s if s else c)
        return tuple(out)

    return DegreeComponent(g, orders, gens, reduce)


def _component_over_field(R, g, cycle_vectors, boundary_coords_in_cycles):
    k = len(cycle_vectors)
    if k == 0:
        return DegreeComponent(g, [], [], lambda vec: ())
    X = boundary_coords_in_cycles
    E, pivots = X.transpose().rref()
    free_idx = [i for i in range(k) if i not in pivots]

    def reduce_coords(w):
        v = list(w)
        for r, pj in enumerate(pivots):
            c = v[pj]
            if not R.is_zero(c):
                v = [R.sub(a, R.mul(c, b)) for a, b in zip(v, E.rows[r])]
        return tuple(v[j] for j in free_idx)

    cycle_cols = Matrix.from_columns(R, cycle_vectors)

    def reduce(vec):
        w = cycle_cols.solve(vec)
        if w is None:
            raise ValueError("vector is not a cycle in this degree")
        return reduce_coords(w)

    gens = [cycle_vectors[j] for j in free_idx]
    return DegreeComponent(g, [0] * len(free_idx), gens, reduce)


class HomologyPresentation:
    def __init__(self, components: dict):
        self.components = components  # degree -> DegreeComponent

    def component(self, g) -> DegreeComponent:
        if g in self.components:
            return self.components[g]
        return DegreeComponent(g, [], [], lambda vec: ())

    def degrees(self):
        return sorted(g for g, c in self.components.items() if not c.is_zero())

    def invariants_by_degree(self):
        return {g: self.components[g].invariants for g in self.degrees()}

    def free_rank(self, g):
        return self.component(g).free_rank

    def torsion(self, g):
        return self.component(g).torsion

    def is_zero(self):
        return not self.degrees()

    def total_generators(self):
        out = []
        for g in self.degrees():
            c = self.components[g]
            for order, vec in zip(c.orders, c.generators):
                out.append((g, order, vec))
        return out

    def __repr__(self):
        parts = [f"{g}: {self.components[g].invariants}" for g in self.degrees()]
        return "HomologyPresentation({" + ", ".join(parts) + "})"


def homology_of_chain(chain: GradedChain) -> HomologyPresentation:
    R = chain.ring
    comps = {}
    degrees = chain.degrees
    for g in degrees:
        basis = chain.bases[g]
        bmat = chain.boundaries[g]
        if isinstance(R, Integers):
            kern = integer_kernel(bmat) if bmat.m else [
                [1 if j == i else 0 for j in range(len(basis))] for i in range(len(basis))
            ]
            cycles = []
            for cvec in kern:
                vec = None
                for c, b in zip(cvec, basis):
                    if c == 0:
                        continue
                    term = [Fraction(c) * Fraction(x) for x in b]
                    vec = term if vec is None else [a + b2 for a, b2 in zip(vec, term)]
                cycles.append(vec if vec is not None else [Fraction(0)] * len(basis[0]))
            prev = chain.boundaries.get(g - 1)
            if prev is None or prev.m == 0 or prev.is_zero() or not cycles:
                X = Matrix.zeros(ZZ, len(cycles), 0)
            else:
                cycle_cols = Matrix.from_columns(
                    QQ, [[Fraction(x) for x in v] for v in cycles]
                )
                # boundary vectors live in degree g: prev maps basis_{g-1} -> basis_g
                cols = []
                for j in range(prev.n):
                    img = [Fraction(0)] * len(basis[0])
                    for t in range(prev.m):
                        c = prev.rows[t][j]
                        if c:
                            img = [a + Fraction(c) * Fraction(x) for a, x in zip(img, basis[t])]
                    cols.append(img)
                Xcols = []
                for img in cols:
                    w = cycle_cols.solve(img)
                    if w is None:
                        raise ValueError("boundary is not a cycle (d^2 != 0?)")
                    Xcols.append([int(x) for x in w])
                X = Matrix.from_columns(ZZ, Xcols) if Xcols else Matrix.zeros(ZZ, len(cycles), 0)
            comps[g] = _component_over_z(g, cycles, X)
        elif R.is_field:
            kern = bmat.kernel() if bmat.m else [
                [R.one() if j == i else R.zero() for j in range(len(basis))]
                for i in range(len(basis))
            ]
            cycles = []
            for cvec in kern:
                vec = [R.zero()] * len(basis[0])
                for c, b in zip(cvec, basis):
                    if not R.is_zero(c):
                        vec = [R.add(a, R.mul(c, x)) for a, x in zip(vec, b)]
                cycles.append(vec)
            prev = chain.boundaries.get(g - 1)
            if prev is None or prev.m == 0 or not cycles:
                X = Matrix.zeros(R, len(cycles), 0)
            else:
                cycle_cols = Matrix.from_columns(R, cycles)
                Xcols = []
                for j in range(prev.n):
                    img = [R.zero()] * len(basis[0])
                    for t in range(prev.m):
                        c = prev.rows[t][j]
                        if not R.is_zero(c):
                            img = [R.add(a, R.mul(c, x)) for a, x in zip(img, basis[t])]
                    w = cycle_cols.solve(img)
                    if w is None:
                        raise ValueError("boundary is not a cycle (d^2 != 0?)")
                    Xcols.append(w)
                X = Matrix.from_columns(R, Xcols) if Xcols else Matrix.zeros(R, len(cycles), 0)
            comps[g] = _component_over_field(R, g, cycles, X)
        else:
            raise UnsupportedRing(f"homology over {R!r} is not supported")
    return HomologyPresentation(comps)


def homology(M: DgModule) -> HomologyPresentation:
    """Per-degree homology of a dg-module over a field or over Z."""
    return homology_of_chain(chain_from_dg_module(M))


def lattice_homology(L: ZLattice, dmat: Matrix, ambient_degrees) -> HomologyPresentation:
    """Integral homology of a d-stable graded lattice."""
    return homology_of_chain(chain_from_lattice(L, dmat, ambient_degrees))


# ---------------------------------------------------------------------------
# Homology rings and modules
# ---------------------------------------------------------------------------


class HomologyRing:
    """Homology presentation of a dg-algebra (or an order inside it) together
    with the induced multiplication on generators."""

    def __init__(self, presentation, generators, mult_table, unit_coords, multiply_ambient):
        self.presentation = presentation
        self.generators = generators  # list of (degree, order, ambient vector)
        self.mult_table = mult_table  # (i, j) -> coordinate tuple dict per degree
        self.unit_coords = unit_coords
        self._multiply_ambient = multiply_ambient

    def degrees(self):
        return self.presentation.degrees()

    def invariants_by_degree(self):
        return self.presentation.invariants_by_degree()

    def is_zero(self):
        return self.presentation.is_zero()

    def multiply_classes(self, i, j):
        return self.mult_table[(i, j)]


def _ring_from_presentation(pres: HomologyPresentation, multiply, unit_vec):
    gens = pres.total_generators()
    table = {}
    for i, (gi, oi, vi) in enumerate(gens):
        for j, (gj, oj, vj) in enumerate(gens):
            prod = multiply(vi, vj)
            comp = pres.component(gi + gj)
            table[(i, j)] = comp.reduce(prod)
    unit = None
    if not pres.is_zero():
        comp0 = pres.component(0)
        if comp0.orders:
            unit = comp0.reduce(unit_vec)
    return HomologyRing(pres, gens, table, unit, multiply)


def homology_ring(A: GradedAlgebra, D: Differential) -> HomologyRing:
    """H(A, d) with its induced graded multiplication (field or Z)."""
    if isinstance(A.ring, Integers):
        AQ = A.to_ring(QQ)
        DQ = Differential(Matrix(QQ, D.matrix.rows))
        pres = lattice_homology(ZLattice.standard(A.n), DQ.matrix, AQ.degrees)
        return _ring_from_presentation(
            pres, lambda u, v: AQ.multiply(u, v), [Fraction(x) for x in AQ.unit]
        )
    M = DgModule.regular(A, D)
    pres = homology(M)
    return _ring_from_presentation(pres, lambda u, v: A.multiply(u, v), A.unit)


def order_homology_ring(A: GradedAlgebra, D: Differential, L: ZLattice) -> HomologyRing:
    """H(Lambda, d) over Z for a d-stable graded order lattice inside A."""
    pres = lattice_homology(L, D.matrix, A.degrees)
    return _ring_from_presentation(
        pres, lambda u, v: A.multiply(u, v), [Fraction(x) for x in A.unit]
    )


class HomologyModule:
    def __init__(self, presentation, ring: HomologyRing, action_table):
        self.presentation = presentation
        self.ring = ring
        self.action_table = action_table  # (ring gen i, module gen j) -> coords

    def invariants_by_degree(self):
        return self.presentation.invariants_by_degree()

    def is_zero(self):
        return self.presentation.is_zero()


def homology_module(M: DgModule, ring_homology: HomologyRing | None = None) -> HomologyModule:
    """H(M) as a module over H(A); the ring homology is recomputed from the
    parent when not supplied."""
    if ring_homology is None:
        ring_homology = homology_ring(M.algebra, M.algebra_d)
    pres = homology(M)
    table = {}
    for i, (gi, oi, vi) in enumerate(ring_homology.generators):
        for j, (gj, oj, vj) in enumerate(pres.total_generators()):
            prod = M.act([M.ring.coerce(x) for x in vi], vj)
            comp = pres.component(gi + gj)
            table[(i, j)] = comp.reduce(prod)
    return HomologyModule(pres, ring_homology, table)


# ---------------------------------------------------------------------------
# Semisimplicity tests
# ---------------------------------------------------------------------------


def algebra_semisimplicity(A: GradedAlgebra) -> bool:
    """Radical-zero test of the underlying (ungraded) algebra."""
    return is_semisimple_algebra(A)


@dataclass
class SemisimpleCategoryReport:
    acyclic: bool
    witness: list | None
    cycles_semisimple: bool
    decomposition: tuple | None
    verdict: bool


def semisimple_category_test(A: GradedAlgebra, D: Differential) -> SemisimpleCategoryReport:
    """The category-of-dg-modules semisimplicity criterion: acyclicity is the
    solvability of d(z) = 1, and the cycle subalgebra must be semisimple.
    When acyclic, A = ker(d) + z ker(d) is produced and checked to be a
    direct sum decomposition."""
    R = A.ring
    if not R.is_field:
        raise RingError("semisimple_category_test needs field coefficients")
    z = D.matrix.solve(A.unit)
    acyclic = z is not None
    Z, DZ, emb = cycles_subalgebra(A, D)
    cycles_ss = is_semisimple_algebra(Z)
    decomposition = None
    if acyclic:
        zker = []
        for j in range(emb.n):
            kv = emb.col(j)
            zker.append(A.multiply(z, kv))
        both = [emb.col(j) for j in range(emb.n)] + zker
        Mboth = Matrix.from_columns(R, both)
        if Mboth.rank() == A.n and 2 * emb.n == A.n:
            decomposition = ([emb.col(j) for j in range(emb.n)], zker)
    verdict = bool(acyclic and cycles_ss)
    return SemisimpleCategoryReport(acyclic, z, cycles_ss, decomposition, verdict)


def euler_characteristic(M: DgModule):
    dims = {}
    for g in M.degrees:
        dims[g] = dims.get(g, 0) + 1
    return sum((-1) ** g * d for g, d in dims.items())


def homology_euler_characteristic(pres: HomologyPresentation):
    return sum((-1) ** g * pres.free_rank(g) for g in pres.degrees())
