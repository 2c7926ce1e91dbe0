"""Differential graded modules.

A module is a list of basis degrees, one action matrix per algebra basis
element and a square-zero degree +1 differential; it keeps a reference to the
dg-algebra (algebra and its differential) it lives over.  The module Leibniz
rule is

    delta(a . m) = d(a) . m + (-1)^{|a|} a . delta(m)

Hom complexes use the twisted linearity f(a m) = (-1)^{|a| |f|} a f(m).
Endomorphism algebras of complexes are built in the right-action convention
(maps compose left factor first, d(f) = f delta - (-1)^{|f|} delta f); that is
the convention under which the endomorphism algebra of 0 -> K -x-> K -> 0 is
literally the 2x2 matrix dg-algebra with d(lower left unit) = x * identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import (
    Differential,
    DimensionMismatch,
    GradedAlgebra,
    VerificationReport,
    _solve_in_span,
)
from .linalg import Matrix, vec_add, vec_scale
from .rings import RingError


class NotSubmodule(ValueError):
    pass


class NotAComplex(ValueError):
    pass


def trivial_algebra(ring, name="k"):
    """The base ring as a dg-algebra concentrated in degree 0."""
    return GradedAlgebra(ring, [0], [[[ring.one()]]], [ring.one()], [name])


class DgModule:
    def __init__(self, algebra: GradedAlgebra, algebra_d: Differential, degrees,
                 action, delta: Matrix, names=None):
        self.algebra = algebra
        self.algebra_d = algebra_d
        self.ring = algebra.ring
        self.degrees = list(degrees)
        self.m = len(self.degrees)
        self.action = action  # list of Matrix, one per algebra basis element
        self.delta = delta
        self.names = list(names) if names else [f"m{i}" for i in range(self.m)]

    @classmethod
    def regular(cls, A: GradedAlgebra, D: Differential):
        action = [A.left_mult_matrix(A.basis_vector(i)) for i in range(A.n)]
        return cls(A, D, list(A.degrees), action, D.matrix.copy(), list(A.names))

    def zero_vector(self):
        return [self.ring.zero()] * self.m

    def basis_vector(self, i):
        v = self.zero_vector()
        v[i] = self.ring.one()
        return v

    def act_matrix(self, avec):
        """Matrix of m -> a . m for an algebra element."""
        R = self.ring
        out = Matrix.zeros(R, self.m, self.m)
        for i, ai in enumerate(avec):
            if R.is_zero(ai):
                continue
            Ai = self.action[i]
            for r in range(self.m):
                row = Ai.rows[r]
                for c in range(self.m):
                    if not R.is_zero(row[c]):
                        out.rows[r][c] = R.add(out.rows[r][c], R.mul(ai, row[c]))
        return out

    def act(self, avec, mvec):
        return self.act_matrix(avec).apply(mvec)

    def degree_of(self, vec):
        R = self.ring
        degs = {self.degrees[i] for i, x in enumerate(vec) if not R.is_zero(x)}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("vector is not homogeneous")
        return degs.pop()

    def homogeneous_component(self, vec, deg):
        R = self.ring
        return [x if self.degrees[i] == deg else R.zero() for i, x in enumerate(vec)]

    def degree_indices(self):
        out = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out

    def to_ring(self, ring, algebra=None, algebra_d=None):
        A2 = algebra if algebra is not None else self.algebra.to_ring(ring)
        D2 = algebra_d if algebra_d is not None else Differential(
            Matrix(ring, self.algebra_d.matrix.rows)
        )
        return DgModule(
            A2,
            D2,
            self.degrees,
            [Matrix(ring, M.rows) for M in self.action],
            Matrix(ring, self.delta.rows),
            self.names,
        )

    def __repr__(self):
        return f"DgModule(dim={self.m}, over {self.algebra!r})"


def verify_dg_module(M: DgModule) -> VerificationReport:
    """Axiom-by-axiom check: module structure, grading, differential and the
    Leibniz rule against the algebra differential."""
    A = M.algebra
    R = M.ring
    if M.delta.shape != (M.m, M.m) or len(M.action) != A.n:
        raise DimensionMismatch("module data shapes do not match")
    rep = VerificationReport()

    witness = None
    for i, j in itertools.product(range(A.n), repeat=2):
        lhs = M.act_matrix(A.mult[i][j])
        rhs = M.action[i] * M.action[j]
        if lhs != rhs:
            witness = (i, j)
            break
    rep.add("action-associativity", witness is None, witness)

    rep.add("unit-acts-as-identity", M.act_matrix(A.unit) == Matrix.identity(R, M.m), None)

    witness = None
    for i in range(A.n):
        for k in range(M.m):
            for j in range(M.m):
                if not R.is_zero(M.action[i].rows[k][j]) and M.degrees[k] != A.degrees[i] + M.degrees[j]:
                    witness = (i, j, k)
                    break
            if witness:
                break
        if witness:
            break
    rep.add("action-grading", witness is None, witness)

    witness = None
    for i in range(M.m):
        for j in range(M.m):
            if not R.is_zero(M.delta.rows[j][i]) and M.degrees[j] != M.degrees[i] + 1:
                witness = (i, j)
                break
        if witness:
            break
    rep.add("delta-degree-plus-one", witness is None, witness)

    rep.add("delta-square-zero", (M.delta * M.delta).is_zero(), None)

    witness = None
    for i in range(A.n):
        lhs = M.delta * M.action[i]
        da = M.act_matrix(M.algebra_d(A.basis_vector(i)))
        sign = R.one() if A.degrees[i] % 2 == 0 else R.neg(R.one())
        rhs = da + (M.action[i] * M.delta).scale(sign)
        if lhs != rhs:
            witness = (i,)
            break
    rep.add("module-leibniz", witness is None, witness)
    return rep


def shift(M: DgModule, k: int) -> DgModule:
    """(M[k])_n = M_{k+n}: a basis element of degree g lands in degree g - k.
    The differential is unchanged."""
    return DgModule(
        M.algebra,
        M.algebra_d,
        [g - k for g in M.degrees],
        [m.copy() for m in M.action],
        M.delta.copy(),
        M.names,
    )


def submodule_closure_check(M: DgModule, vectors):
    """Return a witness (kind, index) if the span of vectors is not closed
    under the action and the differential, else None."""
    R = M.ring
    for t, v in enumerate(vectors):
        if _solve_in_span(R, vectors, M.delta.apply(v)) is None:
            return ("delta", t)
        for i in range(M.algebra.n):
            if _solve_in_span(R, vectors, M.action[i].apply(v)) is None:
                return ("action", i, t)
    return None


def quotient_dg_module(M: DgModule, sub_vectors):
    """Quotient by a dg-submodule (field coefficients).

    Returns (Q, projection) with projection mapping M-coordinates onto
    Q-coordinates; raises NotSubmodule with a violating pair otherwise.
    """
    R = M.ring
    if not R.is_field:
        raise RingError("quotient_dg_module needs field coefficients")
    if not sub_vectors:
        return (
            DgModule(M.algebra, M.algebra_d, M.degrees,
                     [a.copy() for a in M.action], M.delta.copy(), M.names),
            Matrix.identity(R, M.m),
        )
    bad = submodule_closure_check(M, sub_vectors)
    if bad is not None:
        raise NotSubmodule(f"not closed: {bad}")
    E, pivots = Matrix.from_columns(R, sub_vectors).transpose().rref()
    complement = [j for j in range(M.m) if j not in pivots]

    def reduce(vec):
        v = list(vec)
        for r, pj in enumerate(pivots):
            c = v[pj]
            if not R.is_zero(c):
                v = [R.sub(a, R.mul(c, b)) for a, b in zip(v, E.rows[r])]
        return [v[j] for j in complement]

    k = len(complement)
    degrees = [M.degrees[j] for j in complement]
    names = [M.names[j] for j in complement]
    action = []
    for i in range(M.algebra.n):
        cols = [reduce(M.action[i].col(j)) for j in complement]
        action.append(Matrix.from_columns(R, cols) if k else Matrix.zeros(R, 0, 0))
    delta_cols = [reduce(M.delta.col(j)) for j in complement]
    delta = Matrix.from_columns(R, delta_cols) if k else Matrix.zeros(R, 0, 0)
    Q = DgModule(M.algebra, M.algebra_d, degrees, action, delta, names)
    proj = Matrix.from_columns(R, [reduce(Matrix.identity(R, M.m).col(j)) for j in range(M.m)])
    return Q, proj


def submodule_dg_module(M: DgModule, vectors):
    """The dg-submodule spanned by the given homogeneous vectors, on its own
    basis.  Returns (S, embedding)."""
    R = M.ring
    bad = submodule_closure_check(M, vectors)
    if bad is not None:
        raise NotSubmodule(f"not closed: {bad}")
    degrees = [M.degree_of(v) for v in vectors]
    degrees = [0 if d is None else d for d in degrees]
    k = len(vectors)
    action = []
    for i in range(M.algebra.n):
        cols = [
            _solve_in_span(R, vectors, M.action[i].apply(v)) for v in vectors
        ]
        action.append(Matrix.from_columns(R, cols) if k else Matrix.zeros(R, 0, 0))
    delta_cols = [_solve_in_span(R, vectors, M.delta.apply(v)) for v in vectors]
    delta = Matrix.from_columns(R, delta_cols) if k else Matrix.zeros(R, 0, 0)
    S = DgModule(M.algebra, M.algebra_d, degrees, action, delta)
    return S, Matrix.from_columns(R, vectors)


def direct_sum(modules):
    R = modules[0].ring
    A = modules[0].algebra
    m = sum(M.m for M in modules)
    degrees = []
    names = []
    for t, M in enumerate(modules):
        degrees += M.degrees
        names += [f"{nm}#{t}" for nm in M.names]
    action = []
    for i in range(A.n):
        big = Matrix.zeros(R, m, m)
        off = 0
        for M in modules:
            for r in range(M.m):
                for c in range(M.m):
                    big.rows[off + r][off + c] = M.action[i].rows[r][c]
            off += M.m
        action.append(big)
    delta = Matrix.zeros(R, m, m)
    off = 0
    for M in modules:
        for r in range(M.m):
            for c in range(M.m):
                delta.rows[off + r][off + c] = M.delta.rows[r][c]
        off += M.m
    return DgModule(A, modules[0].algebra_d, degrees, action, delta, names)


# ---------------------------------------------------------------------------
# Hom complexes and endomorphism dg-algebras
# ---------------------------------------------------------------------------


@dataclass
class HomBasisElement:
    degree: int
    matrix: Matrix  # target-coords x source-coords


def hom_basis(M: DgModule, N: DgModule):
    """Basis of the homogeneous A-semilinear maps M -> N, all degrees.

    A degree-k map satisfies f(M_g) in N_{g+k} and
    f(a m) = (-1)^{|a| k} a f(m).
    """
    if M.algebra.mult != N.algebra.mult:
        raise ValueError("hom complex needs modules over the same algebra")
    R = M.ring
    if not R.is_field:
        raise RingError("hom complexes need field coefficients")
    A = M.algebra
    out = []
    possible_ks = sorted({dn - dm for dn in N.degrees for dm in M.degrees})
    for k in possible_ks:
        slots = [
            (j, i)
            for j in range(N.m)
            for i in range(M.m)
            if N.degrees[j] == M.degrees[i] + k
        ]
        if not slots:
            continue
        pos = {s: t for t, s in enumerate(slots)}
        rows = []
        for a in range(A.n):
            sign = R.one() if (A.degrees[a] * k) % 2 == 0 else R.neg(R.one())
            # constraint: F * ActM[a] - sign * ActN[a] * F = 0
            AM = M.action[a]
            AN = N.action[a]
            for j in range(N.m):
                for i in range(M.m):
                    row = [R.zero()] * len(slots)
                    for t in range(M.m):
                        if (j, t) in pos and not R.is_zero(AM.rows[t][i]):
                            row[pos[(j, t)]] = R.add(row[pos[(j, t)]], AM.rows[t][i])
                    for s in range(N.m):
                        if (s, i) in pos and not R.is_zero(AN.rows[j][s]):
                            row[pos[(s, i)]] = R.sub(
                                row[pos[(s, i)]], R.mul(sign, AN.rows[j][s])
                            )
                    if any(not R.is_zero(x) for x in row):
                        rows.append(row)
        if rows:
            kern = Matrix(R, rows).kernel()
        else:
            kern = [
                [R.one() if t == s else R.zero() for t in range(len(slots))]
                for s in range(len(slots))
            ]
        for v in kern:
            F = Matrix.zeros(R, N.m, M.m)
            for (j, i), t in pos.items():
                F.rows[j][i] = v[t]
            out.append(HomBasisElement(k, F))
    return out


def _hom_coords(R, basis, target: Matrix, degree):
    """Coordinates of a matrix in the span of the hom basis (same degree)."""
    idx = [t for t, h in enumerate(basis) if h.degree == degree]
    flat_target = [target.rows[j][i] for j in range(target.m) for i in range(target.n)]
    if not idx:
        if all(R.is_zero(x) for x in flat_target):
            return {}
        return None
    flat_cols = [
        [basis[t].matrix.rows[j][i] for j in range(target.m) for i in range(target.n)]
        for t in idx
    ]
    sol = _solve_in_span(R, flat_cols, flat_target)
    if sol is None:
        return None
    return {t: c for t, c in zip(idx, sol)}


def hom_complex(M: DgModule, N: DgModule):
    """The complex Hom(M, N) as a dg-module over the base field, with
    d(f) = delta_N f - (-1)^{|f|} f delta_M.  Returns (H, basis)."""
    R = M.ring
    basis = hom_basis(M, N)
    triv = trivial_algebra(R)
    triv_d = Differential.zero(triv)
    degrees = [h.degree for h in basis]
    delta = Matrix.zeros(R, len(basis), len(basis))
    for col, h in enumerate(basis):
        sign = R.one() if h.degree % 2 == 0 else R.neg(R.one())
        img = N.delta * h.matrix - (h.matrix * M.delta).scale(sign)
        coords = _hom_coords(R, basis, img, h.degree + 1)
        if coords is None:
            raise RingError("hom complex differential does not close")
        for t, c in coords.items():
            delta.rows[t][col] = c
    action = [Matrix.identity(R, len(basis))]
    H = DgModule(triv, triv_d, degrees, action, delta,
                 [f"f{t}" for t in range(len(basis))])
    return H, basis


def end_dg_algebra(M: DgModule, convention="right"):
    """Endomorphism dg-algebra of M with composition as multiplication.

    convention "right": maps act on the right, so f*g applies f first
    (f*g = g o f) and d(f) = f delta - (-1)^{|f|} delta f; this is the
    convention of the 2x2 matrix example.  convention "left": f*g = f o g and
    d(f) = delta f - (-1)^{|f|} f delta.
    Returns (E, DE, basis).
    """
    R = M.ring
    basis = hom_basis(M, M)
    n = len(basis)
    degrees = [h.degree for h in basis]
    mult = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if convention == "right":
                comp = basis[j].matrix * basis[i].matrix
            else:
                comp = basis[i].matrix * basis[j].matrix
            coords = _hom_coords(R, basis, comp, degrees[i] + degrees[j])
            if coords is None:
                raise RingError("composition leaves the hom span")
            mult[i][j] = [coords.get(t, R.zero()) for t in range(n)]
    unit_coords = _hom_coords(R, basis, Matrix.identity(R, M.m), 0)
    unit = [unit_coords.get(t, R.zero()) for t in range(n)]
    E = GradedAlgebra(R, degrees, mult, unit, [f"f{t}" for t in range(n)])
    dmat = Matrix.zeros(R, n, n)
    for col, h in enumerate(basis):
        sign = R.one() if h.degree % 2 == 0 else R.neg(R.one())
        if convention == "right":
            img = h.matrix * M.delta - (M.delta * h.matrix).scale(sign)
        else:
            img = M.delta * h.matrix - (h.matrix * M.delta).scale(sign)
        coords = _hom_coords(R, basis, img, h.degree + 1)
        for t, c in coords.items():
            dmat.rows[t][col] = c
    return E, Differential(dmat), basis


@dataclass
class Complex:
    """Bounded complex of free base-ring modules: rank and differential per
    degree, delta_g : L_g -> L_{g+1}."""

    ring: object
    ranks: dict
    diffs: dict

    def validate(self):
        for g, d in self.diffs.items():
            if d.shape != (self.ranks.get(g + 1, 0), self.ranks.get(g, 0)):
                raise NotAComplex(f"differential at degree {g} has wrong shape")
        for g in sorted(self.ranks):
            d1 = self.diffs.get(g)
            d2 = self.diffs.get(g + 1)
            if d1 is not None and d2 is not None and not (d2 * d1).is_zero():
                raise NotAComplex(f"delta^2 != 0 at degree {g}")

    def as_dg_module(self):
        self.validate()
        R = self.ring
        triv = trivial_algebra(R)
        triv_d = Differential.zero(triv)
        degs = []
        index = {}
        for g in sorted(self.ranks):
            for s in range(self.ranks[g]):
                index[(g, s)] = len(degs)
                degs.append(g)
        m = len(degs)
        delta = Matrix.zeros(R, m, m)
        for g, d in self.diffs.items():
            for s in range(d.m):
                for t in range(d.n):
                    if not R.is_zero(d.rows[s][t]):
                        delta.rows[index[(g + 1, s)]][index[(g, t)]] = d.rows[s][t]
        action = [Matrix.identity(R, m)]
        return DgModule(triv, triv_d, degs, action, delta)


def endomorphism_dg_algebra(L: Complex):
    """The dg-endomorphism algebra of a bounded complex of free modules, in
    the right-action convention.  Returns (E, DE, basis)."""
    M = L.as_dg_module()
    return end_dg_algebra(M, convention="right")


def cone_tensor(S: DgModule):
    """Total complex of S tensor cone(id) over the base field.

    cone(id) is K in degrees -1 and 0 with identity differential; the result
    contains S (as S tensor the degree-0 stalk) with quotient S[1].
    Returns (C, inclusion, projection).
    """
    R = S.ring
    if not R.is_field:
        raise RingError("cone_tensor needs field coefficients")
    m = S.m
    # index i in [0, m): s_i (x) c_a (degree |s_i| - 1); i + m: s_i (x) c_b
    degrees = [g - 1 for g in S.degrees] + list(S.degrees)
    action = []
    for i in range(S.algebra.n):
        big = Matrix.zeros(R, 2 * m, 2 * m)
        for r in range(m):
            for c in range(m):
                v = S.action[i].rows[r][c]
                big.rows[r][c] = v
                big.rows[m + r][m + c] = v
        action.append(big)
    delta = Matrix.zeros(R, 2 * m, 2 * m)
    for r in range(m):
        for c in range(m):
            v = S.delta.rows[r][c]
            delta.rows[r][c] = v
            delta.rows[m + r][m + c] = v
    for i in range(m):
        sign = R.one() if S.degrees[i] % 2 == 0 else R.neg(R.one())
        delta.rows[m + i][i] = sign  # s (x) c_a  ->  (-1)^{|s|} s (x) c_b
    C = DgModule(S.algebra, S.algebra_d, degrees, action, delta)
    incl = Matrix.zeros(R, 2 * m, m)
    for i in range(m):
        incl.rows[m + i][i] = R.one()
    proj = Matrix.zeros(R, m, 2 * m)
    for i in range(m):
        proj.rows[i][i] = R.one()
    return C, incl, proj


def graded_dimensions(M: DgModule):
    out = {}
    for g in M.degrees:
        out[g] = out.get(g, 0) + 1
    return out


def matrix_units_iso_seeds(E: GradedAlgebra, basis, slot_degrees, target: GradedAlgebra):
    """Candidate identifications of an endomorphism dg-algebra with a matrix
    dg-algebra: order the slots by degree (both ways) and read each hom-basis
    matrix off plainly or transposed.  Returns coordinate matrices E -> target
    to be validated by find_dg_algebra_isomorphism."""
    R = E.ring
    k = len(slot_degrees)
    if target.n != k * k or E.n != k * k:
        return []
    orders = []
    asc = sorted(range(k), key=lambda s: (slot_degrees[s], s))
    desc = sorted(range(k), key=lambda s: (-slot_degrees[s], s))
    orders = [asc] + ([desc] if desc != asc else [])
    seeds = []
    for order in orders:
        for transpose in (True, False):
            cols = []
            ok = True
            for h in basis:
                coords = [R.zero()] * (k * k)
                for a in range(k):
                    for b in range(k):
                        val = (
                            h.matrix.rows[order[b]][order[a]]
                            if transpose
                            else h.matrix.rows[order[a]][order[b]]
                        )
                        if not R.is_zero(val):
                            if target.degrees[a * k + b] != h.degree:
                                ok = False
                            coords[a * k + b] = val
                    if not ok:
                        break
                if not ok:
                    break
                cols.append(coords)
            if ok:
                seeds.append(Matrix.from_columns(R, cols))
    return seeds


def find_dg_algebra_isomorphism(A, DA, B, DB, bound=2, max_candidates=200_000, seeds=()):
    """Search for an explicit dg-algebra isomorphism A -> B.

    Any seed candidates are validated first; then the linear constraints
    (degree 0, chain map, unit to unit) are solved and small integer
    combinations of the solution space are scanned for an invertible
    multiplicative map.  Returns the matrix of the isomorphism or None.
    """
    R = A.ring
    if A.n != B.n or sorted(A.degrees) != sorted(B.degrees):
        return None
    n = A.n
    for F in seeds:
        if _is_dg_algebra_iso(A, DA, B, DB, F):
            return F
    slots = [
        (j, i) for j in range(n) for i in range(n) if B.degrees[j] == A.degrees[i]
    ]
    pos = {s: t for t, s in enumerate(slots)}
    rows = []
    rhs = []
    # chain map: F d_A = d_B F
    for j in range(n):
        for i in range(n):
            row = [R.zero()] * len(slots)
            for t in range(n):
                if (j, t) in pos and not R.is_zero(DA.matrix.rows[t][i]):
                    row[pos[(j, t)]] = R.add(row[pos[(j, t)]], DA.matrix.rows[t][i])
            for s in range(n):
                if (s, i) in pos and not R.is_zero(DB.matrix.rows[j][s]):
                    row[pos[(s, i)]] = R.sub(row[pos[(s, i)]], DB.matrix.rows[j][s])
            if any(not R.is_zero(x) for x in row):
                rows.append(row)
                rhs.append(R.zero())
    # unit condition: F(1_A) = 1_B
    for j in range(n):
        row = [R.zero()] * len(slots)
        for i in range(n):
            if (j, i) in pos and not R.is_zero(A.unit[i]):
                row[pos[(j, i)]] = A.unit[i]
        rows.append(row)
        rhs.append(B.unit[j])
    Msys = Matrix(R, rows)
    part = Msys.solve(rhs)
    if part is None:
        return None
    kern = Msys.kernel()

    def to_matrix(vec):
        F = Matrix.zeros(R, n, n)
        for (j, i), t in pos.items():
            F.rows[j][i] = vec[t]
        return F

    candidates = itertools.product(range(-bound, bound + 1), repeat=len(kern))
    count = 0
    for coeffs in candidates:
        count += 1
        if count > max_candidates:
            break
        vec = list(part)
        for c, kv in zip(coeffs, kern):
            if c:
                vec = vec_add(R, vec, vec_scale(R, R.coerce(c), kv))
        F = to_matrix(vec)
        if _is_multiplicative_bijection(A, B, F):
            return F
    return None


def _is_multiplicative_bijection(A, B, F):
    R = A.ring
    if R.is_zero(F.det()):
        return False
    images = [F.apply(A.basis_vector(i)) for i in range(A.n)]
    for i in range(A.n):
        for j in range(A.n):
            lhs = F.apply(A.mult[i][j])
            rhs = B.multiply(images[i], images[j])
            if any(not R.eq(a, b) for a, b in zip(lhs, rhs)):
                return False
    return True


def _is_dg_algebra_iso(A, DA, B, DB, F):
    R = A.ring
    if F.shape != (A.n, A.n):
        return False
    if F * DA.matrix != DB.matrix * F:
        return False
    if F.apply(A.unit) != [R.coerce(x) for x in B.unit]:
        return False
    for j in range(A.n):
        col = F.col(j)
        nz = [B.degrees[t] for t, x in enumerate(col) if not R.is_zero(x)]
        if any(d != A.degrees[j] for d in nz):
            return False
    return _is_multiplicative_bijection(A, B, F)
