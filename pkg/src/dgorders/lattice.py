"""Z-lattices inside Q^n.

A lattice is stored as (1/den) * rowspan_Z(B) with B an integer matrix in
Hermite normal form and gcd(den, content(B)) = 1, so equal lattices have
equal representations.  This is the workhorse for orders, ideals and all
localization arguments; everything reduces to HNF, saturated kernels and
exact solves.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .linalg import (
    Matrix,
    hermite_normal_form,
    integer_kernel,
    lattice_intersect_rows,
)
from .rings import QQ, ZZ


class LatticeError(ValueError):
    pass


def _hnf_rows(rows):
    rows = [row for row in rows if any(row)]
    if not rows:
        return []
    H, _ = hermite_normal_form(Matrix(ZZ, rows))
    return [list(r) for r in H.rows if any(r)]


class ZLattice:
    __slots__ = ("n", "den", "basis")

    def __init__(self, n: int, den: int, basis):
        self.n = n
        self.den = den
        self.basis = basis  # HNF integer rows, no zero rows

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_vectors(cls, vectors, n=None):
        """Lattice generated by rational vectors."""
        vecs = [[Fraction(x) for x in v] for v in vectors]
        if n is None:
            if not vecs:
                raise LatticeError("ambient dimension unknown")
            n = len(vecs[0])
        den = 1
        for v in vecs:
            for x in v:
                den = lcm(den, x.denominator)
        rows = [[int(x * den) for x in v] for v in vecs]
        return cls._normalized(n, den, _hnf_rows(rows))

    @classmethod
    def standard(cls, n: int):
        return cls(n, 1, [[1 if j == i else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int):
        return cls(n, 1, [])

    @classmethod
    def _normalized(cls, n, den, rows):
        if not rows:
            return cls(n, 1, [])
        g = den
        for row in rows:
            for x in row:
                g = gcd(g, x)
        if g > 1:
            den //= g
            rows = [[x // g for x in row] for row in rows]
        return cls(n, den, rows)

    # -- basic data --------------------------------------------------------

    @property
    def rank(self):
        return len(self.basis)

    def is_full(self):
        return self.rank == self.n

    def vectors(self):
        """Basis as rational vectors."""
        d = Fraction(1, self.den)
        return [[x * d for x in row] for row in self.basis]

    def basis_matrix(self):
        """Columns are the basis vectors (rational)."""
        return Matrix(QQ, [[Fraction(row[i], self.den) for row in self.basis]
                           for i in range(self.n)])

    def __eq__(self, other):
        return (
            isinstance(other, ZLattice)
            and self.n == other.n
            and self.den == other.den
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.n, self.den, tuple(tuple(r) for r in self.basis)))

    def __repr__(self):
        return f"ZLattice(n={self.n}, den={self.den}, rank={self.rank})"

    # -- membership and coordinates ----------------------------------------

    def coords(self, vec):
        """Integer coordinates of vec in the basis, or None."""
        target = [Fraction(x) * self.den for x in vec]
        coords = [0] * len(self.basis)
        for i, row in enumerate(self.basis):
            j = next(k for k, x in enumerate(row) if x)
            if target[j] == 0:
                continue
            q = target[j] / row[j]
            if q.denominator != 1:
                return None
            q = int(q)
            coords[i] = q
            for k in range(self.n):
                target[k] -= q * row[k]
        if any(target):
            return None
        return coords

    def __contains__(self, vec):
        return self.coords(vec) is not None

    def contains_lattice(self, other) -> bool:
        return all(v in self for v in other.vectors())

    # -- lattice arithmetic --------------------------------------------------

    def _common_den(self, other):
        d = lcm(self.den, other.den)
        a = [[x * (d // self.den) for x in row] for row in self.basis]
        b = [[x * (d // other.den) for x in row] for row in other.basis]
        return d, a, b

    def add(self, other):
        if self.n != other.n:
            raise LatticeError("ambient mismatch")
        d, a, b = self._common_den(other)
        return ZLattice._normalized(self.n, d, _hnf_rows(a + b))

    def intersect(self, other):
        if self.n != other.n:
            raise LatticeError("ambient mismatch")
        if not self.basis or not other.basis:
            return ZLattice.zero(self.n)
        d, a, b = self._common_den(other)
        rows = lattice_intersect_rows(a, b)
        return ZLattice._normalized(self.n, d, rows)

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return ZLattice.zero(self.n)
        num, den = abs(c.numerator), c.denominator
        rows = [[x * num for x in row] for row in self.basis]
        return ZLattice._normalized(self.n, self.den * den, _hnf_rows(rows))

    def apply_matrix(self, T: Matrix):
        """Image lattice T * L (T rational, acting on column vectors)."""
        vecs = [T.apply(v) for v in self.vectors()]
        vecs = [v for v in vecs if any(x != 0 for x in v)]
        if not vecs:
            return ZLattice.zero(T.m)
        return ZLattice.from_vectors(vecs, T.m)

    def index_in(self, other) -> Fraction:
        """Generalized index [other : self] as |det| of the change of basis;
        both lattices must have equal rank and self's span inside other's."""
        if self.rank != other.rank:
            raise LatticeError("rank mismatch for index")
        if not self.basis:
            return Fraction(1)
        B = other.basis_matrix()
        cols = []
        for v in self.vectors():
            # solve B * c = v over Q
            c = B.solve(v)
            if c is None:
                raise LatticeError("not contained in the span")
            cols.append(c)
        C = Matrix.from_columns(QQ, cols)
        sq = C if C.m == C.n else _maximal_square(C)
        return abs(sq.det())

    # -- structure ----------------------------------------------------------

    def intersect_subspace(self, spanning_vectors):
        """Sublattice of vectors lying in the rational span of the given
        vectors (the result is saturated inside self)."""
        if not self.basis:
            return ZLattice.zero(self.n)
        span_rows = Matrix(QQ, [[Fraction(x) for x in v] for v in spanning_vectors])
        forms = span_rows.kernel()  # linear forms vanishing on the span
        if not forms:
            return self
        # combos c of the basis with (forms . vector) = 0, saturated
        rows = []
        for phi in forms:
            rows.append([
                sum(Fraction(p) * Fraction(b, self.den) for p, b in zip(phi, row))
                for row in self.basis
            ])
        int_rows = []
        for phi_row in rows:
            d = 1
            for x in phi_row:
                d = lcm(d, Fraction(x).denominator)
            int_rows.append([int(Fraction(x) * d) for x in phi_row])
        combos = integer_kernel(Matrix(ZZ, int_rows)) if int_rows else []
        vecs = []
        for c in combos:
            v = [Fraction(0)] * self.n
            for ci, row in zip(c, self.basis):
                if ci:
                    v = [a + Fraction(ci * b, self.den) for a, b in zip(v, row)]
            if any(v):
                vecs.append(v)
        if not vecs:
            return ZLattice.zero(self.n)
        return ZLattice.from_vectors(vecs, self.n)

    def restrict_to_coordinates(self, idx):
        """Sublattice of vectors supported on the coordinate subset idx."""
        if not self.basis:
            return ZLattice.zero(self.n)
        outside = [j for j in range(self.n) if j not in set(idx)]
        if not outside:
            return self
        # combos c with (c . basis) zero outside idx
        proj = Matrix(ZZ, [[row[j] for row in self.basis] for j in outside])
        combos = integer_kernel(proj)
        vecs = []
        for c in combos:
            v = [0] * self.n
            for ci, row in zip(c, self.basis):
                for j in range(self.n):
                    v[j] += ci * row[j]
            vecs.append([Fraction(x, self.den) for x in v])
        vecs = [v for v in vecs if any(v)]
        if not vecs:
            return ZLattice.zero(self.n)
        return ZLattice.from_vectors(vecs, self.n)


def _maximal_square(C: Matrix) -> Matrix:
    # pick row subset giving a nonsingular square matrix (C has full col rank)
    E, pivots = C.transpose().rref()
    return C.submatrix(pivots, list(range(C.n)))


def preimage_lattice(D: Matrix, L: ZLattice) -> ZLattice:
    """{x in Q^n : D x in L} for an injective rational matrix D and a full
    lattice L; returns the (full rank n) preimage lattice."""
    if L.rank != L.n:
        raise LatticeError("preimage needs a full target lattice")
    if D.m != L.n:
        raise LatticeError("shape mismatch")
    # Work in L-coordinates: x maps to B^{-1} D x which must be integral.
    B = L.basis_matrix()
    C = B.inverse() * D
    # S = (column span of C) intersected with Z^m, a saturated lattice.
    left_kernel = C.transpose().kernel()
    if left_kernel:
        den = 1
        for v in left_kernel:
            for x in v:
                den = lcm(den, Fraction(x).denominator)
        E = Matrix(ZZ, [[int(Fraction(x) * den) for x in v] for v in left_kernel])
        S = integer_kernel(E)
    else:
        S = [[1 if j == i else 0 for j in range(C.m)] for i in range(C.m)]
    xs = []
    for s in S:
        x = C.solve([Fraction(v) for v in s])
        if x is None:
            raise LatticeError("preimage: inconsistent solve (D not injective?)")
        xs.append(x)
    if not xs:
        return ZLattice.zero(D.n)
    return ZLattice.from_vectors(xs, D.n)


def valuation(x, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise LatticeError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _containment_scale_valuation(inner: ZLattice, outer: ZLattice, p: int) -> int:
    """Smallest e >= 0 with p^e * inner contained in outer at p (computed from
    the denominators of the coordinates of inner's basis in outer's basis)."""
    B = outer.basis_matrix()
    e = 0
    for v in inner.vectors():
        c = B.solve(v)
        if c is None:
            raise LatticeError("lattices do not span the same space")
        for x in c:
            d = Fraction(x).denominator
            vp = 0
            while d % p == 0:
                d //= p
                vp += 1
            e = max(e, vp)
    return e


def patch(N: ZLattice, p: int, Lp: ZLattice) -> ZLattice:
    """The unique lattice agreeing with Lp at the prime p and with N at every
    other prime.  Both must be full in the same ambient space."""
    if not (N.is_full() and Lp.is_full()):
        raise LatticeError("patch needs full lattices")
    e = max(
        _containment_scale_valuation(N, Lp, p),
        _containment_scale_valuation(Lp, N, p),
    ) + 1
    pe = p ** e
    M = Lp.add(N.scale(pe)).intersect(N.scale(Fraction(1, pe)))
    # stability check: one more power of p must not change the result
    M2 = Lp.add(N.scale(pe * p)).intersect(N.scale(Fraction(1, pe * p)))
    if M != M2:
        raise LatticeError("patch did not stabilize")
    return M


class LocalLattice:
    """A lattice considered only through its localization at p."""

    __slots__ = ("p", "carrier")

    def __init__(self, p: int, carrier: ZLattice):
        self.p = p
        self.carrier = carrier

    def standardized(self) -> ZLattice:
        return patch(ZLattice.standard(self.carrier.n), self.p, self.carrier)

    def __eq__(self, other):
        return (
            isinstance(other, LocalLattice)
            and self.p == other.p
            and self.standardized() == other.standardized()
        )

    def __repr__(self):
        return f"LocalLattice(p={self.p}, {self.carrier!r})"


def localize(L: ZLattice, p: int) -> LocalLattice:
    return LocalLattice(p, L)


def globalize(local_data, default: ZLattice) -> ZLattice:
    """Lattice with prescribed localizations at finitely many primes and
    agreeing with `default` elsewhere."""
    M = default
    for entry in local_data:
        if isinstance(entry, LocalLattice):
            p, Lp = entry.p, entry.carrier
        else:
            p, Lp = entry
        if not Lp.is_full():
            raise LatticeError(f"local lattice at {p} is not full")
        M = patch(M, p, Lp)
    return M
