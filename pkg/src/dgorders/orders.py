"""dg-orders in rational dg-algebras.

An order is a full, unital, ring-closed, d-stable, graded Z-lattice whose
elements are integral; every certificate is an exact check.  The maximal-hull
search enlarges an order by radical idealizers at odd primes dividing the
discriminant, restricted back to the largest d-stable subring, and certifies
only "maximal under move set"; the report compares the result against a
classical (non-dg) hull and against the discriminant bound of a maximal
order in a split algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .algebra import (
    Differential,
    GradedAlgebra,
    VerificationReport,
    primitive_central_idempotents,
    radical_mod_p,
    is_semisimple_algebra,
)
from .dgmodules import DgModule
from .homology import HomologyPresentation, lattice_homology
from .lattice import ZLattice, preimage_lattice
from .linalg import Matrix, integer_kernel
from .rings import QQ, ZZ, GF


class NotFull(ValueError):
    pass


class NotDgLattice(ValueError):
    pass


class NotSplit(ValueError):
    pass


def prime_factors(n: int):
    n = abs(int(n))
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass
class DgOrder:
    algebra: GradedAlgebra
    differential: Differential
    lattice: ZLattice
    report: VerificationReport
    homology: HomologyPresentation | None = None

    @property
    def ok(self):
        return self.report.ok

    @property
    def proper(self):
        if self.homology is None:
            return None
        return all(not self.homology.torsion(g) for g in self.homology.degrees())

    def basis_vectors(self):
        return self.lattice.vectors()


def graded_components(L: ZLattice, degrees):
    comps = {}
    for g in sorted(set(degrees)):
        idx = [i for i, d in enumerate(degrees) if d == g]
        comps[g] = L.restrict_to_coordinates(idx)
    return comps


def is_dg_order(L: ZLattice, A: GradedAlgebra, D: Differential,
                check_proper=True, require_semisimple=True) -> DgOrder:
    """Certify the dg-order axioms for a lattice inside a rational dg-algebra.
    Every failed check is named with a witness in the report."""
    if A.ring is not QQ and not isinstance(A.ring, type(QQ)):
        raise ValueError("orders live in algebras over Q")
    rep = VerificationReport()
    rep.add("full-rank", L.is_full(), None if L.is_full() else (L.rank, A.n))
    if require_semisimple:
        rep.add("ambient-semisimple", is_semisimple_algebra(A), None)
    comps = graded_components(L, A.degrees)
    graded_ok = sum(c.rank for c in comps.values()) == L.rank
    rep.add("graded", graded_ok, None)
    rep.add("unital", A.unit in L, None)
    basis = L.vectors()
    witness = None
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            if A.multiply(u, v) not in L:
                witness = (i, j)
                break
        if witness:
            break
    rep.add("ring-closed", witness is None, witness)
    witness = None
    for i, u in enumerate(basis):
        if D(u) not in L:
            witness = (i,)
            break
    rep.add("d-stable", witness is None, witness)
    witness = None
    for i, u in enumerate(basis):
        cp = A.left_mult_matrix(u).charpoly()
        if any(Fraction(c).denominator != 1 for c in cp):
            witness = (i,)
            break
    rep.add("integral", witness is None, witness)
    order = DgOrder(A, D, L, rep)
    if check_proper and rep.ok:
        order.homology = lattice_homology(L, D.matrix, A.degrees)
    return order


# ---------------------------------------------------------------------------
# dg-lattices inside dg-modules
# ---------------------------------------------------------------------------


def _act_matrix_on_module(V: DgModule, avec):
    return V.act_matrix([V.ring.coerce(x) for x in avec])


def dg_lattice_in_module(order: DgOrder, V: DgModule) -> ZLattice:
    """A full d-stable action-stable lattice in V, built by the downward
    induction of the existence proof: start with any full lattice at the top
    degree, take delta-preimages below, rescale so the positive part of the
    order acts into the part already built, and finish with one closure pass
    under the order action."""
    A = order.algebra
    D = order.differential
    R = V.ring
    by_degree = V.degree_indices()
    degs = sorted(by_degree, reverse=True)
    ord_comps = graded_components(order.lattice, A.degrees)
    lam0 = ord_comps.get(0, ZLattice.zero(A.n)).vectors()
    lam_plus = []
    for g, comp in ord_comps.items():
        if g > 0:
            lam_plus.extend(comp.vectors())

    built = ZLattice.zero(V.m)  # direct sum of the components already chosen
    for g in degs:
        idx = by_degree[g]
        if built.rank == 0:
            cand = [V.basis_vector(i) for i in idx]
        else:
            # delta-preimage of the built lattice, inside degree g
            nxt_idx = by_degree.get(g + 1, [])
            nxt = built.restrict_to_coordinates(nxt_idx)
            kern_rows = []
            dm = V.delta
            block = Matrix(QQ, [[dm.rows[t][s] for s in idx] for t in range(V.m)])
            cand = []
            # saturated kernel of delta restricted to the component
            intblock_den = 1
            from math import lcm
            for row in block.rows:
                for x in row:
                    intblock_den = lcm(intblock_den, Fraction(x).denominator)
            intblock = Matrix(ZZ, [[int(Fraction(x) * intblock_den) for x in row] for row in block.rows])
            for kv in integer_kernel(intblock):
                vec = [Fraction(0)] * V.m
                for c, i in zip(kv, idx):
                    vec[i] = Fraction(c)
                cand.append(vec)
            # preimages of a basis of (delta(V_g) cap built_{g+1})
            if nxt.rank:
                img_vectors = [block.col(t) for t in range(len(idx))]
                img_span = [v for v in img_vectors if any(x != 0 for x in v)]
                inter = nxt.intersect_subspace(img_span) if img_span else ZLattice.zero(V.m)
                for w in inter.vectors():
                    sol = block.solve(w)
                    if sol is None:
                        raise NotDgLattice("preimage solve failed")
                    vec = [Fraction(0)] * V.m
                    for c, i in zip(sol, idx):
                        vec[i] = c
                    cand.append(vec)
        comp = ZLattice.from_vectors(cand, V.m)
        if comp.rank != len(idx):
            raise NotFull(f"component at degree {g} is not full")
        # stabilize under the degree-0 part of the order
        vecs = list(comp.vectors())
        for b in lam0:
            act = _act_matrix_on_module(V, b)
            vecs.extend(act.apply(v) for v in comp.vectors())
        comp = ZLattice.from_vectors(vecs, V.m)
        # rescale into the delta-preimage again (the lambda0 closure may have
        # left it) and so that the positive part acts into what is built
        scale = 1
        nxt_idx = by_degree.get(g + 1, [])
        nxt = built.restrict_to_coordinates(nxt_idx) if built.rank else None
        for v in comp.vectors():
            img = V.delta.apply(v)
            if any(x != 0 for x in img):
                if nxt is None:
                    raise NotDgLattice("differential leaves the top degree")
                c = nxt.coords(img)
                if c is None:
                    from math import lcm
                    B = nxt.basis_matrix()
                    sol = B.solve(img)
                    if sol is None:
                        raise NotDgLattice("differential image outside next component")
                    for x in sol:
                        scale = scale * Fraction(x).denominator // gcd(scale, Fraction(x).denominator)
        for b in lam_plus:
            act = _act_matrix_on_module(V, b)
            for v in comp.vectors():
                img = act.apply(v)
                if any(x != 0 for x in img):
                    sol = built.coords(img) if built.rank else None
                    if sol is None:
                        if built.rank == 0:
                            raise NotDgLattice("positive action leaves the window")
                        B = built.basis_matrix()
                        # solve in the span, collect denominators
                        cols = built.vectors()
                        Mcols = Matrix.from_columns(QQ, cols)
                        s = Mcols.solve(img)
                        if s is None:
                            raise NotDgLattice("positive action image outside built part")
                        from math import lcm
                        for x in s:
                            scale = lcm(scale, Fraction(x).denominator)
        if scale != 1:
            comp = comp.scale(Fraction(1, scale))
        built = built.add(comp)
    # closure pass under the full order action
    vecs = list(built.vectors())
    for b in order.lattice.vectors():
        act = _act_matrix_on_module(V, b)
        for v in built.vectors():
            vecs.append(act.apply(v))
    full = ZLattice.from_vectors(vecs, V.m)
    # certificates
    if full.rank != V.m:
        raise NotFull("constructed lattice is not full")
    for v in full.vectors():
        if V.delta.apply(v) not in full:
            raise NotDgLattice("constructed lattice is not delta-stable")
    for b in order.lattice.vectors():
        act = _act_matrix_on_module(V, b)
        for v in full.vectors():
            if act.apply(v) not in full:
                raise NotDgLattice("constructed lattice is not action-stable")
    return full


# ---------------------------------------------------------------------------
# Conductor orders
# ---------------------------------------------------------------------------


def _multiplication_preimage(A: GradedAlgebra, L: ZLattice, side: str) -> ZLattice:
    basis = L.vectors()
    blocks = []
    for v in basis:
        if side == "left":
            blocks.append(A.right_mult_matrix(v))  # x -> x * v
        else:
            blocks.append(A.left_mult_matrix(v))  # x -> v * x
    stacked = Matrix(QQ, [row for B in blocks for row in B.rows])
    big = _direct_sum_lattice([L] * len(basis))
    return preimage_lattice(stacked, big)


def _direct_sum_lattice(parts):
    n = sum(p.n for p in parts)
    vecs = []
    off = 0
    for p in parts:
        for v in p.vectors():
            vec = [Fraction(0)] * n
            for i, x in enumerate(v):
                vec[off + i] = x
            vecs.append(vec)
        off += p.n
    return ZLattice.from_vectors(vecs, n)


def left_order(L: ZLattice, A: GradedAlgebra, D: Differential) -> DgOrder:
    """O_l(L) = {x : x L <= L}; a d-stable dg-order when L is a full graded
    d-stable lattice (re-verified by the returned report)."""
    _require_dg_lattice(L, A, D)
    OL = _multiplication_preimage(A, L, "left")
    return is_dg_order(OL, A, D, check_proper=False)


def right_order(L: ZLattice, A: GradedAlgebra, D: Differential) -> DgOrder:
    _require_dg_lattice(L, A, D)
    OR = _multiplication_preimage(A, L, "right")
    return is_dg_order(OR, A, D, check_proper=False)


def _require_dg_lattice(L, A, D):
    if not L.is_full():
        raise NotFull("conductor orders need a full lattice")
    comps = graded_components(L, A.degrees)
    if sum(c.rank for c in comps.values()) != L.rank:
        raise NotDgLattice("lattice is not graded")
    for v in L.vectors():
        if D(v) not in L:
            raise NotDgLattice("lattice is not d-stable")


# ---------------------------------------------------------------------------
# Maximal hull search
# ---------------------------------------------------------------------------


def discriminant(A: GradedAlgebra, L: ZLattice):
    basis = L.vectors()
    lm = [A.left_mult_matrix(v) for v in basis]
    gram = Matrix.zeros(QQ, len(basis), len(basis))
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            t = (lm[i] * lm[j]).trace()
            gram.rows[i][j] = t
            gram.rows[j][i] = t
    return gram.det()


def split_block_sizes(A: GradedAlgebra, D: Differential):
    """Block dimensions of a split semisimple algebra as matrix sizes; raises
    NotSplit when a block is not a full matrix algebra over Q."""
    from .algebra import block_decompose

    sizes = []
    for B, _, _ in block_decompose(A, D):
        k = round(B.n ** 0.5)
        if k * k != B.n:
            raise NotSplit(f"block of dimension {B.n} is not square")
        sizes.append(k)
    return sizes


def maximal_discriminant_bound(A: GradedAlgebra, D: Differential):
    """|disc| of a maximal order of the split algebra Prod Mat_{n_i}(Q) with
    respect to the regular trace form: prod n_i^(n_i^2)."""
    out = 1
    for k in split_block_sizes(A, D):
        out *= k ** (k * k)
    return out


def radical_lattice_mod_p(A: GradedAlgebra, L: ZLattice, p: int) -> ZLattice:
    """Preimage in L of the Jacobson radical of L/pL."""
    basis = L.vectors()
    k = len(basis)
    Fp = GF(p)
    mult = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            prod = A.multiply(basis[i], basis[j])
            coords = L.coords(prod)
            if coords is None:
                raise ValueError("lattice is not ring-closed")
            mult[i][j] = [c % p for c in coords]
    unit_coords = L.coords(A.unit)
    degrees = [A.degree_of(v) if any(x != 0 for x in v) else 0 for v in basis]
    degrees = [0 if d is None else d for d in degrees]
    Abar = GradedAlgebra(Fp, degrees, mult, [c % p for c in unit_coords])
    rad = radical_mod_p(Abar)
    vecs = [v.copy() for v in (L.scale(p)).vectors()]
    for rv in rad:
        vec = [Fraction(0)] * A.n
        for c, b in zip(rv, basis):
            if c:
                vec = [a + c * x for a, x in zip(vec, b)]
        vecs.append(vec)
    return ZLattice.from_vectors(vecs, A.n)


def d_stable_suborder(L: ZLattice, D: Differential) -> ZLattice:
    """{x in L : D x in L}: a ring (by Leibniz), d-stable, containing any
    d-stable suborder of L."""
    n = L.n
    stacked = Matrix(QQ, [row for row in Matrix.identity(QQ, n).rows] + list(D.matrix.rows))
    big = _direct_sum_lattice([L, L])
    return preimage_lattice(stacked, big)


@dataclass
class HullResult:
    order: DgOrder
    trace: list
    classically_maximal: bool
    classical_hull_index: Fraction


def _hull_loop(A, D, L: ZLattice, d_restrict: bool, max_moves=64):
    trace = []
    current = L
    for _ in range(max_moves):
        disc = discriminant(A, current)
        primes = [p for p in prime_factors(Fraction(disc).numerator) if p != 2]
        improved = False
        for p in primes:
            rad = radical_lattice_mod_p(A, current, p)
            for side in ("left", "right"):
                enlarged = _multiplication_preimage(A, rad, side)
                if d_restrict:
                    enlarged = d_stable_suborder(enlarged, D)
                if enlarged.contains_lattice(current) and enlarged != current:
                    gain = current.index_in(enlarged)
                    trace.append({"prime": p, "side": side, "index_gain": str(gain)})
                    current = enlarged
                    improved = True
                    break
            if improved:
                break
        if not improved:
            break
    return current, trace


def dg_maximal_hull(order: DgOrder, max_moves=64) -> HullResult:
    """Enlarge a dg-order until no radical-idealizer move (restricted to its
    largest d-stable subring) makes it strictly bigger.  The certificate is
    "maximal under move set"; whether such an order must be classically
    maximal is precisely the open question tracked by the comparison field."""
    A, D = order.algebra, order.differential
    final, trace = _hull_loop(A, D, order.lattice, d_restrict=True, max_moves=max_moves)
    out = is_dg_order(final, A, D)
    classical, _ = _hull_loop(A, D, final, d_restrict=False, max_moves=max_moves)
    idx = final.index_in(classical) if classical.contains_lattice(final) else Fraction(0)
    bound = None
    try:
        bound = maximal_discriminant_bound(A, D)
    except NotSplit:
        pass
    disc = abs(Fraction(discriminant(A, final)))
    classically_maximal = bool(
        idx == 1 and bound is not None and _odd_part(disc.numerator) == _odd_part(bound)
    )
    return HullResult(out, trace, classically_maximal, idx)


def classical_maximal_hull(A: GradedAlgebra, D: Differential, L: ZLattice, max_moves=64):
    final, trace = _hull_loop(A, D, L, d_restrict=False, max_moves=max_moves)
    return final, trace


def _odd_part(n: int) -> int:
    n = abs(int(n))
    while n and n % 2 == 0:
        n //= 2
    return n
