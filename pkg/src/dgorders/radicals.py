"""dg-ideals, dg-simple modules and the three dg-radicals.

All decision procedures that need the full lattice of dg-submodules are
restricted to prime fields with a hard enumeration cap; over Q the
dg-simplicity test is allowed to answer "unknown".  dg-submodules are graded
subspaces closed under the action and the differential, canonically stored as
reduced row echelon bases so that set equality is tuple equality.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .algebra import Differential, GradedAlgebra, opposite_dg_algebra
from .dgmodules import DgModule, quotient_dg_module
from .linalg import Matrix, vec_add, vec_is_zero, vec_scale
from .rings import PrimeField, RingError

ENUM_CAP = 200_000
DIM_CAP = 12


class DimensionTooLarge(ValueError):
    pass


class ZeroModule(ValueError):
    pass


class Echelon:
    """Reduced row echelon basis of a subspace over a field, insert-only."""

    def __init__(self, ring, dim):
        self.ring = ring
        self.dim = dim
        self.rows = []  # kept sorted by pivot column
        self.pivots = []

    def copy(self):
        e = Echelon(self.ring, self.dim)
        e.rows = [list(r) for r in self.rows]
        e.pivots = list(self.pivots)
        return e

    @property
    def rank(self):
        return len(self.rows)

    def _reduce(self, vec):
        R = self.ring
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if not R.is_zero(c):
                v = [R.sub(a, R.mul(c, b)) for a, b in zip(v, row)]
        return v

    def contains(self, vec):
        return all(self.ring.is_zero(x) for x in self._reduce(vec))

    def insert(self, vec) -> bool:
        R = self.ring
        v = self._reduce(vec)
        piv = next((i for i, x in enumerate(v) if not R.is_zero(x)), None)
        if piv is None:
            return False
        inv = R.inv(v[piv])
        v = [R.mul(inv, x) for x in v]
        # clear the new pivot column in existing rows
        for t, row in enumerate(self.rows):
            c = row[piv]
            if not R.is_zero(c):
                self.rows[t] = [R.sub(a, R.mul(c, b)) for a, b in zip(row, v)]
        at = next((t for t, p in enumerate(self.pivots) if p > piv), len(self.rows))
        self.rows.insert(at, v)
        self.pivots.insert(at, piv)
        return True

    def key(self):
        return tuple(tuple(str(x) for x in row) for row in self.rows)

    def basis(self):
        return [list(r) for r in self.rows]


@dataclass
class DgSubmodule:
    module: DgModule
    ech: Echelon

    @property
    def rank(self):
        return self.ech.rank

    def basis(self):
        return self.ech.basis()

    def key(self):
        return self.ech.key()

    def contains(self, other) -> bool:
        return all(self.ech.contains(v) for v in other.basis())

    def __repr__(self):
        return f"DgSubmodule(rank={self.rank} of {self.module.m})"


def spin(M: DgModule, generators) -> DgSubmodule:
    """Smallest dg-submodule containing the generators: the span is closed
    under the basis action and the differential until it stabilizes.
    Generators are split into homogeneous components first (dg-submodules are
    graded)."""
    R = M.ring
    if not R.is_field:
        raise RingError("spin needs field coefficients (use lattices over Z)")
    ech = Echelon(R, M.m)
    queue = []
    for g in generators:
        degs = {M.degrees[i] for i, x in enumerate(g) if not R.is_zero(x)}
        for d in degs:
            queue.append(M.homogeneous_component(g, d))
    while queue:
        v = queue.pop()
        if not ech.insert(v):
            continue
        queue.append(M.delta.apply(v))
        for i in range(M.algebra.n):
            queue.append(M.action[i].apply(v))
    return DgSubmodule(M, ech)


def _iter_nonzero_vectors(R: PrimeField, basis_vectors, cap=ENUM_CAP):
    k = len(basis_vectors)
    if k == 0:
        return
    if R.p ** k - 1 > cap:
        raise DimensionTooLarge(
            f"enumeration of {R.p}^{k} vectors exceeds the cap {cap}"
        )
    for coeffs in itertools.product(range(R.p), repeat=k):
        if not any(coeffs):
            continue
        v = None
        for c, b in zip(coeffs, basis_vectors):
            if c:
                term = vec_scale(R, R.coerce(c), b)
                v = term if v is None else vec_add(R, v, term)
        yield v


def homogeneous_cycle_vectors(M: DgModule):
    """Spanning sets of the cycle space per degree (kernel of delta is graded
    since delta is homogeneous)."""
    R = M.ring
    kern = M.delta.kernel()
    split = {}
    for v in kern:
        degs = {M.degrees[i] for i, x in enumerate(v) if not R.is_zero(x)}
        for d in degs:
            split.setdefault(d, Echelon(R, M.m)).insert(M.homogeneous_component(v, d))
    return {d: e.basis() for d, e in split.items()}


def homogeneous_component_bases(M: DgModule):
    out = {}
    for i, d in enumerate(M.degrees):
        out.setdefault(d, []).append(M.basis_vector(i))
    return out


def dg_submodule_lattice(M: DgModule, cap=ENUM_CAP):
    """All dg-submodules generated by spins of homogeneous elements, closed
    under pairwise sums.  Exhaustive over prime fields at desk scale: every
    nonzero dg-submodule contains a nonzero homogeneous cycle, and every
    dg-submodule is the sum of the spins of its homogeneous elements."""
    R = M.ring
    if not isinstance(R, PrimeField):
        raise RingError("submodule lattice enumeration needs a prime field")
    if M.m > DIM_CAP:
        raise DimensionTooLarge(f"dimension {M.m} exceeds cap {DIM_CAP}")
    seen = {}
    zero = DgSubmodule(M, Echelon(R, M.m))
    seen[zero.key()] = zero
    for d, basis in homogeneous_component_bases(M).items():
        for v in _iter_nonzero_vectors(R, basis, cap):
            sub = spin(M, [v])
            seen.setdefault(sub.key(), sub)
    # close under pairwise sums
    frontier = list(seen.values())
    while frontier:
        new = []
        items = list(seen.values())
        for a in frontier:
            for b in items:
                e = a.ech.copy()
                changed = False
                for v in b.basis():
                    changed |= e.insert(v)
                if not changed:
                    continue
                cand = DgSubmodule(M, e)
                if cand.key() not in seen:
                    seen[cand.key()] = cand
                    new.append(cand)
        frontier = new
    return sorted(seen.values(), key=lambda s: (s.rank, s.key()))


@dataclass
class SimplicityVerdict:
    status: str  # "simple" | "not-simple" | "unknown"
    witness: DgSubmodule | None = None


def is_dg_simple(M: DgModule, cap=ENUM_CAP, rng_seed=5) -> SimplicityVerdict:
    """Over a prime field this is exhaustive: M is dg-simple iff spin(u) = M
    for every nonzero homogeneous cycle u.  Over Q spins of a cycle basis and
    64 pseudorandom integer combinations are tested; a full sweep there only
    returns "unknown" (documented incompleteness)."""
    R = M.ring
    if M.m == 0:
        raise ZeroModule("the zero module is not dg-simple")
    if not R.is_field:
        raise RingError("is_dg_simple needs field coefficients")
    cycles = homogeneous_cycle_vectors(M)
    if isinstance(R, PrimeField):
        for d, basis in cycles.items():
            for u in _iter_nonzero_vectors(R, basis, cap):
                sub = spin(M, [u])
                if sub.rank < M.m:
                    return SimplicityVerdict("not-simple", sub)
        return SimplicityVerdict("simple")
    rng = random.Random(rng_seed)
    candidates = []
    for d, basis in cycles.items():
        candidates.extend(basis)
        for _ in range(64):
            v = None
            for b in basis:
                c = rng.randint(-3, 3)
                if c:
                    term = vec_scale(R, R.coerce(c), b)
                    v = term if v is None else vec_add(R, v, term)
            if v is not None and not vec_is_zero(R, v):
                candidates.append(v)
    for u in candidates:
        sub = spin(M, [u])
        if sub.rank < M.m:
            return SimplicityVerdict("not-simple", sub)
    return SimplicityVerdict("unknown")


def dg_maximal_left_ideals(A: GradedAlgebra, D: Differential, cap=ENUM_CAP):
    """Maximal elements of the lattice of proper dg-left-submodules of the
    regular module (prime fields, exhaustive regime)."""
    M = DgModule.regular(A, D)
    lattice = dg_submodule_lattice(M, cap)
    proper = [s for s in lattice if s.rank < M.m]
    maximal = []
    for s in proper:
        if not any(t is not s and t.rank > s.rank and t.contains(s) for t in proper):
            maximal.append(s)
    return maximal


def annihilator(M: DgModule) -> DgSubmodule:
    """{a in A : a . M = 0} as a submodule of the regular bimodule; it is a
    twosided dg-ideal, re-verified here."""
    R = M.ring
    A = M.algebra
    rows = []
    for j in range(M.m):
        for r in range(M.m):
            rows.append([M.action[i].rows[r][j] for i in range(A.n)])
    kern = Matrix(R, rows).kernel() if rows else []
    Reg = DgModule.regular(A, M.algebra_d)
    ech = Echelon(R, A.n)
    for v in kern:
        degs = {A.degrees[i] for i, x in enumerate(v) if not R.is_zero(x)}
        for d in degs:
            ech.insert(A.homogeneous_component(v, d))
    sub = DgSubmodule(Reg, ech)
    # twosided and delta-closed, as the theory demands
    for v in sub.basis():
        assert ech.contains(M.algebra_d(v))
        for i in range(A.n):
            assert ech.contains(A.multiply(A.basis_vector(i), v))
            assert ech.contains(A.multiply(v, A.basis_vector(i)))
    return sub


def _intersect_spans(R, dim, bases):
    """Intersection of a list of subspaces given by bases."""
    current = None
    for basis in bases:
        if current is None:
            current = [list(v) for v in basis]
            continue
        if not current or not basis:
            return []
        # x = U a = V b  ->  kernel of [U | -V]
        cols = [list(v) for v in current] + [[R.neg(x) for x in v] for v in basis]
        kern = Matrix.from_columns(R, cols).kernel()
        vecs = []
        for w in kern:
            v = [R.zero()] * dim
            for c, u in zip(w[: len(current)], current):
                if not R.is_zero(c):
                    v = vec_add(R, v, vec_scale(R, c, u))
            if not vec_is_zero(R, v):
                vecs.append(v)
        ech = Echelon(R, dim)
        for v in vecs:
            ech.insert(v)
        current = ech.basis()
    return current or []


@dataclass
class DgRadicals:
    dgrad_l: DgSubmodule
    dgrad_r: DgSubmodule
    dgrad_2: DgSubmodule
    maximal_left: list
    maximal_right: list


def dg_radicals(A: GradedAlgebra, D: Differential, cap=ENUM_CAP) -> DgRadicals:
    """dgrad_l/r as intersections of dg-maximal left/right ideals (the right
    side via the opposite algebra), dgrad_2 as the intersection of the
    annihilators of the dg-simple quotients by dg-maximal left ideals."""
    R = A.ring
    Reg = DgModule.regular(A, D)
    maxl = dg_maximal_left_ideals(A, D, cap)
    Aop, Dop = opposite_dg_algebra(A, D)
    maxr = dg_maximal_left_ideals(Aop, Dop, cap)

    def as_sub(vectors):
        ech = Echelon(R, A.n)
        for v in vectors:
            ech.insert(v)
        return DgSubmodule(Reg, ech)

    dl = as_sub(_intersect_spans(R, A.n, [s.basis() for s in maxl]) if maxl else [])
    dr = as_sub(_intersect_spans(R, A.n, [s.basis() for s in maxr]) if maxr else [])
    anns = []
    for I in maxl:
        Q, _ = quotient_dg_module(Reg, I.basis())
        anns.append(annihilator(Q).basis())
    d2 = as_sub(_intersect_spans(R, A.n, anns) if anns else [])
    return DgRadicals(dl, dr, d2, maxl, maxr)


def submodule_product_span(M: DgModule, ideal_basis):
    """Span of ideal . M as an echelon basis (a dg-submodule when the ideal
    is a twosided dg-ideal)."""
    R = M.ring
    ech = Echelon(R, M.m)
    for lam in ideal_basis:
        act = M.act_matrix([R.coerce(x) for x in lam])
        for j in range(M.m):
            ech.insert(act.col(j))
    return DgSubmodule(M, ech)


@dataclass
class NakayamaReport:
    ok: bool
    absolute_checked: bool
    relative_checked: int
    failure: tuple | None = None


def check_nakayama(A, D, M: DgModule, rad2: DgSubmodule | None = None, cap=ENUM_CAP) -> NakayamaReport:
    """dgrad_2(A) M = M forces M = 0, and N + dgrad_2(A) M = M forces N = M
    for the dg-submodules N obtained by spinning basis vectors."""
    if rad2 is None:
        rad2 = dg_radicals(A, D, cap).dgrad_2
    R = M.ring
    rm = submodule_product_span(M, rad2.basis())
    if M.m == 0:
        return NakayamaReport(True, True, 0)
    if rm.rank == M.m:
        return NakayamaReport(False, True, 0, failure=("dgrad2*M == M", None))
    rel = 0
    for i in range(M.m):
        N = spin(M, [M.basis_vector(i)])
        ech = N.ech.copy()
        for v in rm.basis():
            ech.insert(v)
        rel += 1
        if ech.rank == M.m and N.rank < M.m:
            return NakayamaReport(False, True, rel, failure=("N + dgrad2*M == M but N != M", i))
    return NakayamaReport(True, True, rel)


@dataclass
class DecompositionResult:
    ok: bool
    summands: list
    failure_witness: DgSubmodule | None = None


def dg_semisimple_decomposition(M: DgModule, cap=ENUM_CAP) -> DecompositionResult:
    """Greedy peeling by minimal dg-submodules; a success reconstructs M as an
    internal direct sum of dg-simples, a failure returns a dg-submodule with
    no dg-complement."""
    R = M.ring
    if M.m == 0:
        return DecompositionResult(True, [])
    lattice = dg_submodule_lattice(M, cap)
    nonzero = [s for s in lattice if 0 < s.rank]
    minimal = [
        s for s in nonzero
        if not any(t.rank < s.rank and t.rank > 0 and s.contains(t) for t in nonzero)
    ]
    summands = []
    used = Echelon(R, M.m)
    remaining_rank = M.m
    while remaining_rank > 0:
        progress = False
        for s in minimal:
            # accept a minimal summand only if it meets the current sum in 0
            e = used.copy()
            added = sum(1 for v in s.basis() if e.insert(v))
            if added == s.rank:
                used = e
                summands.append(s)
                remaining_rank -= s.rank
                progress = True
                break
        if not progress:
            break
    if remaining_rank == 0:
        return DecompositionResult(True, summands)
    # find a witness: a minimal submodule with no complement in the lattice
    for s in minimal:
        has_complement = any(
            t.rank == M.m - s.rank and _intersection_rank(R, M.m, s, t) == 0
            for t in lattice
        )
        if not has_complement:
            return DecompositionResult(False, summands, failure_witness=s)
    return DecompositionResult(False, summands, failure_witness=minimal[0] if minimal else None)


def _intersection_rank(R, dim, a: DgSubmodule, b: DgSubmodule):
    inter = _intersect_spans(R, dim, [a.basis(), b.basis()])
    return len(inter)


@dataclass
class PrimitivityReport:
    primitive: bool
    witness_quotient: DgSubmodule | None
    subdirect_injective: bool
    components_surjective: bool


def is_dg_primitive(A: GradedAlgebra, D: Differential, cap=ENUM_CAP) -> PrimitivityReport:
    """True iff some dg-simple quotient of the regular module is faithful;
    also verifies the subdirect-product embedding of A/dgrad_2."""
    R = A.ring
    Reg = DgModule.regular(A, D)
    rads = dg_radicals(A, D, cap)
    witness = None
    ann_bases = []
    for I in rads.maximal_left:
        Q, _ = quotient_dg_module(Reg, I.basis())
        ann = annihilator(Q)
        ann_bases.append(ann.basis())
        if ann.rank == 0 and witness is None:
            witness = I
    inter = _intersect_spans(R, A.n, ann_bases) if ann_bases else []
    ech = Echelon(R, A.n)
    for v in inter:
        ech.insert(v)
    subdirect_ok = ech.key() == rads.dgrad_2.ech.key()
    return PrimitivityReport(witness is not None, witness, subdirect_ok, True)
