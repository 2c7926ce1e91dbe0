"""Graded algebras with differentials.

An algebra is stored basis-explicitly: an integer degree per basis element
and structure constants mult[i][j] = coordinates of b_i * b_j.  The same
representation serves matrix algebras, fiber products, cycle subalgebras and
quotients.  The differential is a square matrix acting on column vectors,
with column i holding the coordinates of d(b_i).

Sign conventions (fixed once, used everywhere):
    d(ab)   = d(a) b + (-1)^{|a|} a d(b)
    x *op y = (-1)^{|x||y|} y x
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Matrix, vec_add, vec_is_zero, vec_scale, vec_sub
from .rings import QQ, ZZ, CoefficientRing, Integers, PrimeField, RingError


class DimensionMismatch(ValueError):
    pass


class CharTwo(ValueError):
    pass


class NotSplit(ValueError):
    pass


@dataclass
class Check:
    name: str
    ok: bool
    witness: tuple | None = None
    note: str = ""


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def failure_names(self):
        return [c.name for c in self.checks if not c.ok]

    def add(self, name, ok, witness=None, note=""):
        self.checks.append(Check(name, ok, witness, note))

    def lines(self):
        out = []
        for c in self.checks:
            status = "pass" if c.ok else "FAIL"
            extra = f"  witness={c.witness}" if (not c.ok and c.witness) else ""
            out.append(f"{status:4}  {c.name}{extra}")
        return out


class GradedAlgebra:
    def __init__(self, ring, degrees, mult, unit, names=None):
        self.ring = ring
        self.degrees = list(degrees)
        self.n = len(self.degrees)
        self.mult = [
            [[ring.coerce(x) for x in mult[i][j]] for j in range(self.n)]
            for i in range(self.n)
        ]
        self.unit = [ring.coerce(x) for x in unit]
        self.names = list(names) if names else [f"b{i}" for i in range(self.n)]

    @property
    def dim(self):
        return self.n

    def zero_vector(self):
        return [self.ring.zero()] * self.n

    def basis_vector(self, i):
        v = self.zero_vector()
        v[i] = self.ring.one()
        return v

    def multiply(self, x, y):
        R = self.ring
        out = self.zero_vector()
        for i, xi in enumerate(x):
            if R.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if R.is_zero(yj):
                    continue
                c = R.mul(xi, yj)
                prod = self.mult[i][j]
                for k, pk in enumerate(prod):
                    if not R.is_zero(pk):
                        out[k] = R.add(out[k], R.mul(c, pk))
        return out

    def left_mult_matrix(self, x):
        """Matrix of y -> x*y."""
        R = self.ring
        rows = [[R.zero()] * self.n for _ in range(self.n)]
        for i, xi in enumerate(x):
            if R.is_zero(xi):
                continue
            for j in range(self.n):
                prod = self.mult[i][j]
                for k, pk in enumerate(prod):
                    if not R.is_zero(pk):
                        rows[k][j] = R.add(rows[k][j], R.mul(xi, pk))
        return Matrix(self.ring, rows)

    def right_mult_matrix(self, x):
        """Matrix of y -> y*x."""
        R = self.ring
        rows = [[R.zero()] * self.n for _ in range(self.n)]
        for j, xj in enumerate(x):
            if R.is_zero(xj):
                continue
            for i in range(self.n):
                prod = self.mult[i][j]
                for k, pk in enumerate(prod):
                    if not R.is_zero(pk):
                        rows[k][i] = R.add(rows[k][i], R.mul(xj, pk))
        return Matrix(self.ring, rows)

    def degree_indices(self):
        out = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out

    def degree_of(self, vec):
        """Degree of a homogeneous vector, None for 0, ValueError if mixed."""
        R = self.ring
        degs = {self.degrees[i] for i, x in enumerate(vec) if not R.is_zero(x)}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"vector is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def is_homogeneous(self, vec) -> bool:
        try:
            self.degree_of(vec)
            return True
        except ValueError:
            return False

    def homogeneous_component(self, vec, deg):
        R = self.ring
        return [
            x if self.degrees[i] == deg else R.zero() for i, x in enumerate(vec)
        ]

    def is_commutative(self) -> bool:
        R = self.ring
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if any(
                    not R.eq(a, b)
                    for a, b in zip(self.mult[i][j], self.mult[j][i])
                ):
                    return False
        return True

    def to_ring(self, ring):
        return GradedAlgebra(
            ring,
            self.degrees,
            [[list(self.mult[i][j]) for j in range(self.n)] for i in range(self.n)],
            list(self.unit),
            self.names,
        )

    def __repr__(self):
        return f"GradedAlgebra(dim={self.n}, ring={self.ring!r})"


class Differential:
    """Degree +1 square-zero derivation, stored as d(b_i) = column i."""

    def __init__(self, matrix: Matrix):
        self.matrix = matrix

    @classmethod
    def zero(cls, algebra: GradedAlgebra):
        return cls(Matrix.zeros(algebra.ring, algebra.n, algebra.n))

    @classmethod
    def from_images(cls, algebra: GradedAlgebra, images: dict):
        """images: basis index -> coordinate vector of d(b_i)."""
        M = Matrix.zeros(algebra.ring, algebra.n, algebra.n)
        for i, img in images.items():
            for j, x in enumerate(img):
                M.rows[j][i] = algebra.ring.coerce(x)
        return cls(M)

    def __call__(self, vec):
        return self.matrix.apply(vec)

    def is_zero(self):
        return self.matrix.is_zero()

    def __repr__(self):
        return f"Differential({self.matrix.m}x{self.matrix.n})"


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def verify_dg_algebra(A: GradedAlgebra, D: Differential) -> VerificationReport:
    R = A.ring
    if D.matrix.shape != (A.n, A.n):
        raise DimensionMismatch(
            f"differential is {D.matrix.shape}, algebra dimension {A.n}"
        )
    rep = VerificationReport()

    witness = None
    for i, j, k in itertools.product(range(A.n), repeat=3):
        left = A.multiply(A.mult[i][j], A.basis_vector(k))
        right = A.multiply(A.basis_vector(i), A.mult[j][k])
        if not vec_is_zero(R, vec_sub(R, left, right)):
            witness = (i, j, k)
            break
    rep.add("associativity", witness is None, witness)

    witness = None
    for i in range(A.n):
        b = A.basis_vector(i)
        if not vec_is_zero(R, vec_sub(R, A.multiply(A.unit, b), b)) or not vec_is_zero(
            R, vec_sub(R, A.multiply(b, A.unit), b)
        ):
            witness = (i,)
            break
    rep.add("unit-law", witness is None, witness)

    witness = None
    for i, j in itertools.product(range(A.n), repeat=2):
        for k, c in enumerate(A.mult[i][j]):
            if not R.is_zero(c) and A.degrees[k] != A.degrees[i] + A.degrees[j]:
                witness = (i, j, k)
                break
        if witness:
            break
    rep.add("grading", witness is None, witness)

    witness = None
    for i in range(A.n):
        for j in range(A.n):
            if not R.is_zero(D.matrix.rows[j][i]) and A.degrees[j] != A.degrees[i] + 1:
                witness = (i, j)
                break
        if witness:
            break
    rep.add("degree-plus-one", witness is None, witness)

    sq = D.matrix * D.matrix
    witness = None
    if not sq.is_zero():
        for i in range(A.n):
            if not vec_is_zero(R, sq.col(i)):
                witness = (i,)
                break
    rep.add("square-zero", witness is None, witness)

    witness = None
    for i, j in itertools.product(range(A.n), repeat=2):
        lhs = D(A.mult[i][j])
        da_b = A.multiply(D(A.basis_vector(i)), A.basis_vector(j))
        a_db = A.multiply(A.basis_vector(i), D(A.basis_vector(j)))
        sign = R.one() if A.degrees[i] % 2 == 0 else R.neg(R.one())
        rhs = vec_add(R, da_b, vec_scale(R, sign, a_db))
        if not vec_is_zero(R, vec_sub(R, lhs, rhs)):
            witness = (i, j)
            break
    rep.add("leibniz", witness is None, witness)

    rep.add("d-of-unit", vec_is_zero(R, D(A.unit)), None)
    return rep


# ---------------------------------------------------------------------------
# Subalgebras, quotients, cycles, opposites
# ---------------------------------------------------------------------------


def _solve_in_span(ring, span_vectors, target):
    """Coefficients expressing target in span_vectors (exact), or None."""
    M = Matrix.from_columns(ring, span_vectors)
    if ring.is_field:
        return M.solve(target)
    if isinstance(ring, Integers):
        from .linalg import integer_solve

        return integer_solve(M, target)
    raise RingError("solving needs a field or Z")


def subalgebra_on(A: GradedAlgebra, D: Differential, vectors, names=None, unit_vec=None):
    """Subalgebra spanned by the given homogeneous vectors (must be closed
    under multiplication and D, and contain its unit in the span; the unit
    defaults to the unit of A, blocks pass their idempotent).

    Returns (S, DS, embedding) where the embedding matrix has the chosen
    basis vectors as columns.
    """
    R = A.ring
    degrees = [A.degree_of(v) for v in vectors]
    degrees = [0 if d is None else d for d in degrees]
    unit = _solve_in_span(R, vectors, unit_vec if unit_vec is not None else A.unit)
    if unit is None:
        raise ValueError("unit is not in the span of the subalgebra basis")
    k = len(vectors)
    mult = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            prod = A.multiply(vectors[i], vectors[j])
            coeff = _solve_in_span(R, vectors, prod)
            if coeff is None:
                raise ValueError(f"span not closed under multiplication: ({i},{j})")
            mult[i][j] = coeff
    S = GradedAlgebra(R, degrees, mult, unit, names)
    dmat = Matrix.zeros(R, k, k)
    for i in range(k):
        img = D(vectors[i])
        coeff = _solve_in_span(R, vectors, img)
        if coeff is None:
            raise ValueError(f"span not closed under the differential: {i}")
        for j in range(k):
            dmat.rows[j][i] = coeff[j]
    return S, Differential(dmat), Matrix.from_columns(R, vectors)


def cycles_subalgebra(A: GradedAlgebra, D: Differential):
    """The graded subalgebra ker(d), with the unit as first basis vector when
    the coefficients form a field.  Returns (Z, DZ, embedding)."""
    R = A.ring
    kern = D.matrix.kernel()
    if R.is_field:
        # replace one kernel vector by the unit (d(1) = 0 so it is in there)
        coeff = _solve_in_span(R, kern, A.unit)
        if coeff is None:
            raise ValueError("unit not in kernel of d; algebra not verified?")
        pick = next(i for i, c in enumerate(coeff) if not R.is_zero(c))
        kern = [A.unit] + [v for i, v in enumerate(kern) if i != pick]
    # homogeneous basis: split every kernel vector into components
    homog = []
    seen = set()
    for v in kern:
        degs = {A.degrees[i] for i, x in enumerate(v) if not R.is_zero(x)}
        for g in sorted(degs):
            homog.append(A.homogeneous_component(v, g))
    # prune to an independent generating set, keeping order
    basis = _independent_subset(R, homog)
    return subalgebra_on(A, D, basis)


def _independent_subset(ring, vectors):
    if isinstance(ring, Integers):
        # keep a generating set for the lattice: HNF of all vectors
        from .lattice import ZLattice

        L = ZLattice.from_vectors([[Fraction(x) for x in v] for v in vectors])
        return [[int(x) for x in v] for v in L.vectors()]
    out = []
    for v in vectors:
        cand = out + [v]
        M = Matrix.from_columns(ring, cand)
        if M.rank() == len(cand):
            out.append(v)
    return out


def opposite_dg_algebra(A: GradedAlgebra, D: Differential):
    R = A.ring
    mult = [[None] * A.n for _ in range(A.n)]
    for i in range(A.n):
        for j in range(A.n):
            sign_flip = (A.degrees[i] * A.degrees[j]) % 2 == 1
            src = A.mult[j][i]
            mult[i][j] = [R.neg(x) for x in src] if sign_flip else list(src)
    Aop = GradedAlgebra(R, A.degrees, mult, A.unit, [f"{s}^op" for s in A.names])
    return Aop, Differential(D.matrix.copy())


def quotient_algebra(A: GradedAlgebra, D: Differential, ideal_vectors):
    """Quotient by a two-sided graded d-stable ideal (field coefficients).

    Returns (Q, DQ, projection) with projection mapping A-coordinates onto
    Q-coordinates.
    """
    R = A.ring
    if not R.is_field:
        raise RingError("quotient_algebra needs field coefficients")
    if not ideal_vectors:
        proj = Matrix.identity(R, A.n)
        return (
            GradedAlgebra(R, A.degrees, A.mult, A.unit, A.names),
            Differential(D.matrix.copy()),
            proj,
        )
    I = Matrix.from_columns(R, ideal_vectors).transpose()
    E, pivots = I.rref()
    complement = [j for j in range(A.n) if j not in pivots]
    if not complement:
        raise ValueError("quotient by the whole algebra")

    def reduce(vec):
        v = list(vec)
        for r, pj in enumerate(pivots):
            c = v[pj]
            if not R.is_zero(c):
                v = [R.sub(a, R.mul(c, b)) for a, b in zip(v, E.rows[r])]
        return [v[j] for j in complement]

    k = len(complement)
    degrees = [A.degrees[j] for j in complement]
    names = [A.names[j] for j in complement]
    mult = [[None] * k for _ in range(k)]
    for a in range(k):
        for b in range(k):
            mult[a][b] = reduce(A.mult[complement[a]][complement[b]])
    unit = reduce(A.unit)
    Q = GradedAlgebra(R, degrees, mult, unit, names)
    dmat = Matrix.zeros(R, k, k)
    for a in range(k):
        img = reduce(D(A.basis_vector(complement[a])))
        for b in range(k):
            dmat.rows[b][a] = img[b]
    proj = Matrix.from_columns(R, [reduce(Matrix.identity(R, A.n).col(j)) for j in range(A.n)])
    return Q, Differential(dmat), proj


# ---------------------------------------------------------------------------
# Radicals and semisimplicity of the underlying algebra
# ---------------------------------------------------------------------------


def trace_form_radical(A: GradedAlgebra):
    """Kernel of (x, y) -> trace(L_x L_y); equals the Jacobson radical in
    characteristic 0 (Dickson)."""
    R = A.ring
    lmats = [A.left_mult_matrix(A.basis_vector(i)) for i in range(A.n)]
    gram = Matrix.zeros(R, A.n, A.n)
    for i in range(A.n):
        for j in range(i, A.n):
            t = (lmats[i] * lmats[j]).trace()
            gram.rows[i][j] = t
            gram.rows[j][i] = t
    return gram.kernel()


def radical_mod_p(A: GradedAlgebra):
    """Jacobson radical over F_p by iterated kernels of characteristic
    polynomial coefficient maps (Friedl-Ronyai); needs a prime field."""
    R = A.ring
    if not isinstance(R, PrimeField):
        raise RingError("radical_mod_p needs a prime field")
    n = A.n
    current = [A.basis_vector(i) for i in range(n)]
    q = 1
    while True:
        if not current:
            return []
        rows = []
        for y in range(n):
            by = A.basis_vector(y)
            row = []
            for v in current:
                w = A.multiply(v, by)
                cp = A.left_mult_matrix(w).charpoly()
                row.append(cp[q] if q < len(cp) else R.zero())
            rows.append(row)
        M = Matrix(R, rows)
        combos = M.kernel()
        current = [
            _combine(R, current, c) for c in combos
        ]
        if q >= n:
            break
        q *= R.p
    return [v for v in current if not vec_is_zero(R, v)]


def _combine(R, vectors, coeffs):
    out = [R.zero()] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if not R.is_zero(c):
            out = vec_add(R, out, vec_scale(R, c, v))
    return out


def algebra_radical(A: GradedAlgebra):
    R = A.ring
    if R.characteristic == 0:
        return trace_form_radical(A)
    if isinstance(R, PrimeField):
        return radical_mod_p(A)
    raise RingError(f"no radical algorithm over {R!r}")


def is_semisimple_algebra(A: GradedAlgebra) -> bool:
    return not algebra_radical(A)


def center_basis(A: GradedAlgebra, degree_zero_only=False):
    R = A.ring
    rows = []
    for i in range(A.n):
        b = A.basis_vector(i)
        delta = A.left_mult_matrix(b) - A.right_mult_matrix(b)
        rows.extend(delta.rows)
    if degree_zero_only:
        for j in range(A.n):
            if A.degrees[j] != 0:
                row = [R.zero()] * A.n
                row[j] = R.one()
                rows.append(row)
    return Matrix(R, rows).kernel()


def minimal_polynomial(A: GradedAlgebra, vec):
    """Monic minimal polynomial coefficients [c0, c1, ..., 1] of an element,
    computed from the linear dependency of its powers."""
    R = A.ring
    powers = [A.unit]
    while True:
        powers.append(A.multiply(powers[-1], vec))
        M = Matrix.from_columns(R, powers)
        if M.rank() < len(powers):
            coeffs = Matrix.from_columns(R, powers[:-1]).solve(powers[-1])
            # x^k = sum coeffs_i x^i  ->  min poly x^k - sum coeffs_i x^i
            poly = [R.neg(c) for c in coeffs] + [R.one()]
            return poly


def _rational_roots(poly):
    """All rational roots of a polynomial with Fraction coefficients
    [c0, ..., ck] (c0 + c1 x + ...)."""
    den = 1
    from math import lcm as _lcm

    for c in poly:
        den = _lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in poly]
    while ints and ints[-1] == 0:
        ints.pop()
    if len(ints) <= 1:
        return []
    # strip powers of x
    shift = 0
    while ints[0] == 0:
        ints.pop(0)
        shift += 1
    roots = set()
    if shift:
        roots.add(Fraction(0))
    a0, ak = abs(ints[0]), abs(ints[-1])

    def divisors(v):
        out = []
        d = 1
        while d * d <= v:
            if v % d == 0:
                out.extend([d, v // d])
            d += 1
        return sorted(set(out))

    for pnum in divisors(a0):
        for qden in divisors(ak):
            for sign in (1, -1):
                x = Fraction(sign * pnum, qden)
                val = Fraction(0)
                for c in reversed(ints):
                    val = val * x + c
                if val == 0:
                    roots.add(x)
    return sorted(roots)


def central_homogeneous_idempotents(A: GradedAlgebra, D: Differential):
    """All central homogeneous idempotents (2^c of them for c primitive ones),
    each verified to satisfy e^2 = e, centrality, degree 0 and D e = 0."""
    R = A.ring
    if R.characteristic == 2:
        raise CharTwo("characteristic 2 is out of scope")
    if not R.is_field:
        raise RingError("idempotent search needs field coefficients")
    C0 = center_basis(A, degree_zero_only=True)
    prims = _primitive_idempotents_in_commutative(A, C0)
    out = []
    for subset in itertools.chain.from_iterable(
        itertools.combinations(prims, r) for r in range(len(prims) + 1)
    ):
        e = [R.zero()] * A.n
        for v in subset:
            e = vec_add(R, e, v)
        out.append(e)
    # canonical order and sanity assertions
    out.sort(key=lambda v: tuple(str(x) for x in v))
    for e in out:
        assert vec_is_zero(R, vec_sub(R, A.multiply(e, e), e))
        assert vec_is_zero(R, D(e)), "central idempotent must be a cycle"
        if not vec_is_zero(R, e):
            assert A.degree_of(e) == 0
    return out


def primitive_central_idempotents(A: GradedAlgebra, D: Differential):
    R = A.ring
    if R.characteristic == 2:
        raise CharTwo("characteristic 2 is out of scope")
    C0 = center_basis(A, degree_zero_only=True)
    prims = _primitive_idempotents_in_commutative(A, C0)
    prims.sort(key=lambda v: tuple(str(x) for x in v))
    for e in prims:
        assert vec_is_zero(R, D(e))
    return prims


def _primitive_idempotents_in_commutative(A: GradedAlgebra, basis):
    """Primitive idempotents of the (commutative, split) subalgebra spanned by
    `basis`.  Over F_p falls back to brute force when the space is small."""
    R = A.ring
    c = len(basis)
    if c == 0:
        return []
    if isinstance(R, PrimeField) and R.p ** c <= 200_000:
        idems = []
        for coeffs in itertools.product(range(R.p), repeat=c):
            v = [R.zero()] * A.n
            for ci, b in zip(coeffs, basis):
                if ci:
                    v = vec_add(R, v, vec_scale(R, ci, b))
            if vec_is_zero(R, vec_sub(R, A.multiply(v, v), v)):
                idems.append(v)
        nonzero = [v for v in idems if not vec_is_zero(R, v)]
        prims = []
        for e in nonzero:
            below = [
                f
                for f in nonzero
                if vec_is_zero(R, vec_sub(R, A.multiply(e, f), f))
            ]
            if len(below) == 1:
                prims.append(e)
        return prims
    # characteristic 0 (or large F_p): primitive element + Lagrange idempotents
    rng = random.Random(20240917)
    for attempt in range(64):
        coeffs = [rng.randint(-3 - attempt, 3 + attempt) for _ in range(c)]
        t = [R.zero()] * A.n
        for ci, b in zip(coeffs, basis):
            t = vec_add(R, t, vec_scale(R, R.coerce(ci), b))
        poly = minimal_polynomial(A, t)
        if len(poly) - 1 != c:
            continue
        roots = _rational_roots([Fraction(x) for x in poly]) if R.characteristic == 0 else _roots_mod_p(R, poly)
        if len(roots) != c:
            continue
        prims = []
        for lam in roots:
            e = A.unit
            denom = R.one()
            for mu in roots:
                if mu == lam:
                    continue
                shifted = vec_sub(R, t, vec_scale(R, R.coerce(mu), A.unit))
                e = A.multiply(e, shifted)
                denom = R.mul(denom, R.sub(R.coerce(lam), R.coerce(mu)))
            e = vec_scale(R, R.inv(denom), e)
            prims.append(e)
        return prims
    raise NotSplit("center does not split over the base field")


def _roots_mod_p(R, poly):
    roots = []
    for x in range(R.p):
        val = R.zero()
        for c in reversed(poly):
            val = R.add(R.mul(val, x), c)
        if R.is_zero(val):
            roots.append(x)
    return roots


def block_decompose(A: GradedAlgebra, D: Differential):
    """One dg-algebra per primitive central idempotent.

    Returns a list of (block, differential, embedding) triples; the embedding
    columns are the block basis written in A-coordinates.
    """
    prims = primitive_central_idempotents(A, D)
    R = A.ring
    blocks = []
    for e in prims:
        L = A.left_mult_matrix(e)
        cols = [L.col(j) for j in range(A.n)]
        basis = _independent_subset(R, [c for c in cols if not vec_is_zero(R, c)])
        blocks.append(subalgebra_on(A, D, basis, unit_vec=e))
    return blocks


def two_sided_ideal_generated(A: GradedAlgebra, vec):
    """Basis of the two-sided ideal generated by vec (field coefficients)."""
    R = A.ring
    span = []
    queue = [vec]
    while queue:
        v = queue.pop()
        cand = span + [v]
        if Matrix.from_columns(R, cand).rank() == len(cand):
            span.append(v)
            for i in range(A.n):
                queue.append(A.multiply(A.basis_vector(i), v))
                queue.append(A.multiply(v, A.basis_vector(i)))
    return span


def is_simple_algebra(A: GradedAlgebra) -> bool:
    """Simplicity of the underlying algebra.  For semisimple algebras this is
    a one-dimensional center; otherwise fall back to ideal generation from a
    sample of elements (exhaustive over small prime fields)."""
    if A.n == 0:
        return False
    if is_semisimple_algebra(A):
        return len(center_basis(A)) == 1
    R = A.ring
    samples = [A.basis_vector(i) for i in range(A.n)]
    if isinstance(R, PrimeField) and R.p ** A.n <= 50_000:
        samples = []
        for coeffs in itertools.product(range(R.p), repeat=A.n):
            if any(coeffs):
                samples.append([R.coerce(c) for c in coeffs])
    else:
        rng = random.Random(7)
        for _ in range(64):
            samples.append([R.coerce(rng.randint(-4, 4)) for _ in range(A.n)])
        samples = [s for s in samples if not vec_is_zero(R, s)]
    for s in samples:
        if len(two_sided_ideal_generated(A, s)) != A.n:
            return False
    return True
