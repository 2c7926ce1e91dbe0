"""Exact dense linear algebra.

Field algorithms (rref, kernel, solve, inverse) work over any coefficient
ring whose ``is_field`` is true.  Integer algorithms (Hermite and Smith normal
forms, saturated kernels, lattice intersection) work on matrices over Z and
always return unimodular transforms, so every factorization can be re-checked
exactly.  Vectors are plain lists and matrices act on column vectors.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .rings import QQ, ZZ, CoefficientRing, Integers, RingError


class Matrix:
    __slots__ = ("ring", "m", "n", "rows")

    def __init__(self, ring: CoefficientRing, rows):
        self.ring = ring
        self.rows = [[ring.coerce(x) for x in row] for row in rows]
        self.m = len(self.rows)
        self.n = len(self.rows[0]) if self.rows else 0
        for row in self.rows:
            if len(row) != self.n:
                raise ValueError("ragged matrix")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, ring, m, n):
        M = cls.__new__(cls)
        M.ring, M.m, M.n = ring, m, n
        z = ring.zero()
        M.rows = [[z] * n for _ in range(m)]
        return M

    @classmethod
    def identity(cls, ring, n):
        M = cls.zeros(ring, n, n)
        one = ring.one()
        for i in range(n):
            M.rows[i][i] = one
        return M

    @classmethod
    def from_columns(cls, ring, cols):
        if not cols:
            return cls.zeros(ring, 0, 0)
        return cls(ring, [[col[i] for col in cols] for i in range(len(cols[0]))])

    def copy(self):
        M = Matrix.__new__(Matrix)
        M.ring, M.m, M.n = self.ring, self.m, self.n
        M.rows = [row[:] for row in self.rows]
        return M

    # -- basics ------------------------------------------------------------

    @property
    def shape(self):
        return (self.m, self.n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and all(
                self.ring.eq(a, b)
                for ra, rb in zip(self.rows, other.rows)
                for a, b in zip(ra, rb)
            )
        )

    def __hash__(self):
        return hash((self.m, self.n, tuple(tuple(r) for r in self.rows)))

    def is_zero(self):
        return all(self.ring.is_zero(x) for row in self.rows for x in row)

    def __add__(self, other):
        R = self.ring
        return Matrix(
            R,
            [
                [R.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __sub__(self, other):
        R = self.ring
        return Matrix(
            R,
            [
                [R.sub(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __neg__(self):
        R = self.ring
        return Matrix(R, [[R.neg(a) for a in row] for row in self.rows])

    def scale(self, c):
        R = self.ring
        c = R.coerce(c)
        return Matrix(R, [[R.mul(c, a) for a in row] for row in self.rows])

    def __mul__(self, other):
        R = self.ring
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.n != other.m:
            raise ValueError(f"shape mismatch {self.shape} * {other.shape}")
        B_cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for row in self.rows:
            new = []
            for col in B_cols:
                s = R.zero()
                for a, b in zip(row, col):
                    if not R.is_zero(a) and not R.is_zero(b):
                        s = R.add(s, R.mul(a, b))
                new.append(s)
            out.append(new)
        M = Matrix.__new__(Matrix)
        M.ring, M.m, M.n = R, self.m, other.n
        M.rows = out
        return M

    def apply(self, vec):
        """Matrix times column vector."""
        R = self.ring
        if len(vec) != self.n:
            raise ValueError("vector length mismatch")
        out = []
        for row in self.rows:
            s = R.zero()
            for a, x in zip(row, vec):
                if not R.is_zero(a) and not R.is_zero(x):
                    s = R.add(s, R.mul(a, x))
            out.append(s)
        return out

    def transpose(self):
        M = Matrix.__new__(Matrix)
        M.ring, M.m, M.n = self.ring, self.n, self.m
        M.rows = [list(col) for col in zip(*self.rows)] if self.rows else []
        return M

    def col(self, j):
        return [row[j] for row in self.rows]

    def submatrix(self, row_idx, col_idx):
        return Matrix(
            self.ring, [[self.rows[i][j] for j in col_idx] for i in row_idx]
        )

    def to_ring(self, ring):
        return Matrix(ring, self.rows)

    def __repr__(self):
        body = "; ".join(
            " ".join(self.ring.to_str(x) for x in row) for row in self.rows
        )
        return f"Matrix({self.ring!r}, [{body}])"

    # -- field algorithms ----------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (R, pivot_columns)."""
        R = self.ring
        if not R.is_field:
            raise RingError("rref needs a field")
        M = self.copy()
        pivots = []
        r = 0
        for j in range(M.n):
            pivot = None
            for i in range(r, M.m):
                if not R.is_zero(M.rows[i][j]):
                    pivot = i
                    break
            if pivot is None:
                continue
            M.rows[r], M.rows[pivot] = M.rows[pivot], M.rows[r]
            inv = R.inv(M.rows[r][j])
            M.rows[r] = [R.mul(inv, x) for x in M.rows[r]]
            for i in range(M.m):
                if i != r and not R.is_zero(M.rows[i][j]):
                    c = M.rows[i][j]
                    M.rows[i] = [
                        R.sub(a, R.mul(c, b)) for a, b in zip(M.rows[i], M.rows[r])
                    ]
            pivots.append(j)
            r += 1
            if r == M.m:
                break
        return M, pivots

    def rank(self):
        if self.ring.is_field:
            return len(self.rref()[1])
        return len(self.to_ring(QQ).rref()[1])

    def kernel(self):
        """Basis of the right kernel.  Over Z the basis spans the full
        (saturated) integer kernel lattice."""
        if isinstance(self.ring, Integers):
            return integer_kernel(self)
        R = self.ring
        E, pivots = self.rref()
        free = [j for j in range(self.n) if j not in pivots]
        basis = []
        for j in free:
            v = [R.zero()] * self.n
            v[j] = R.one()
            for r, pj in enumerate(pivots):
                v[pj] = R.neg(E.rows[r][j])
            basis.append(v)
        return basis

    def solve(self, b):
        """One solution of self * x = b over a field, or None."""
        R = self.ring
        aug = Matrix(R, [row + [bi] for row, bi in zip(self.rows, b)])
        E, pivots = aug.rref()
        if self.n in pivots:
            return None
        x = [R.zero()] * self.n
        for r, j in enumerate(pivots):
            x[j] = E.rows[r][self.n]
        return x

    def inverse(self):
        R = self.ring
        if self.m != self.n:
            raise ValueError("not square")
        aug = Matrix(
            R,
            [
                row + [R.one() if i == j else R.zero() for j in range(self.n)]
                for i, row in enumerate(self.rows)
            ],
        )
        E, pivots = aug.rref()
        if pivots != list(range(self.n)):
            raise RingError("matrix not invertible")
        return Matrix(R, [row[self.n :] for row in E.rows])

    def det(self):
        R = self.ring
        if self.m != self.n:
            raise ValueError("not square")
        if isinstance(R, Integers):
            cp = self.charpoly()
            d = cp[-1] if self.n % 2 == 0 else -cp[-1]
            return d
        M = self.copy()
        d = R.one()
        for j in range(M.n):
            pivot = None
            for i in range(j, M.m):
                if not R.is_zero(M.rows[i][j]):
                    pivot = i
                    break
            if pivot is None:
                return R.zero()
            if pivot != j:
                M.rows[j], M.rows[pivot] = M.rows[pivot], M.rows[j]
                d = R.neg(d)
            d = R.mul(d, M.rows[j][j])
            inv = R.inv(M.rows[j][j])
            for i in range(j + 1, M.m):
                if not R.is_zero(M.rows[i][j]):
                    c = R.mul(inv, M.rows[i][j])
                    M.rows[i] = [
                        R.sub(a, R.mul(c, b)) for a, b in zip(M.rows[i], M.rows[j])
                    ]
        return d

    def charpoly(self):
        """Coefficients [1, c1, ..., cn] of det(xI - A), by the division-free
        Berkowitz algorithm (valid over any commutative coefficient ring)."""
        if self.m != self.n:
            raise ValueError("not square")
        return _berkowitz(self.rows, self.ring)

    def trace(self):
        R = self.ring
        t = R.zero()
        for i in range(min(self.m, self.n)):
            t = R.add(t, self.rows[i][i])
        return t


def _berkowitz(rows, R):
    n = len(rows)
    if n == 0:
        return [R.one()]
    if n == 1:
        return [R.one(), R.neg(rows[0][0])]
    a = rows[0][0]
    r_vec = rows[0][1:]
    c_vec = [rows[i][0] for i in range(1, n)]
    A1 = [row[1:] for row in rows[1:]]
    T = [R.one(), R.neg(a)]
    vec = c_vec
    for k in range(n - 1):
        s = R.zero()
        for x, y in zip(r_vec, vec):
            s = R.add(s, R.mul(x, y))
        T.append(R.neg(s))
        if k < n - 2:
            vec = [
                _dot(A1_row, vec, R) for A1_row in A1
            ]
    q = _berkowitz(A1, R)
    out = [R.zero()] * (n + 1)
    for i, ti in enumerate(T):
        if R.is_zero(ti):
            continue
        for j, qj in enumerate(q):
            if i + j <= n:
                out[i + j] = R.add(out[i + j], R.mul(ti, qj))
    return out


def _dot(row, vec, R):
    s = R.zero()
    for a, b in zip(row, vec):
        s = R.add(s, R.mul(a, b))
    return s


def vec_add(R, u, v):
    return [R.add(a, b) for a, b in zip(u, v)]

def vec_sub(R, u, v):
    return [R.sub(a, b) for a, b in zip(u, v)]

def vec_scale(R, c, u):
    return [R.mul(c, a) for a in u]

def vec_is_zero(R, u):
    return all(R.is_zero(a) for a in u)


# ---------------------------------------------------------------------------
# Integer normal forms with unimodular transforms.
# ---------------------------------------------------------------------------


def _xgcd(a, b):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


def _as_int_rows(M):
    if isinstance(M, Matrix):
        if not isinstance(M.ring, Integers):
            rows = []
            for row in M.rows:
                irow = []
                for x in row:
                    f = Fraction(x)
                    if f.denominator != 1:
                        raise RingError("integer algorithm on non-integer matrix")
                    irow.append(int(f))
                rows.append(irow)
            return rows
        return [list(map(int, row)) for row in M.rows]
    return [list(map(int, row)) for row in M]


def hermite_normal_form(M):
    """Row-style Hermite normal form.

    Returns (H, U) with M = U * H, U unimodular, H with positive pivots,
    entries above each pivot reduced into [0, pivot), zero rows at the bottom.
    """
    A = _as_int_rows(M)
    m = len(A)
    n = len(A[0]) if A else 0
    # W tracks W*M = H; U tracks M = U*H.  Row ops on A and W, inverse
    # column ops on U.
    W = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def rowop(i, j, t11, t12, t21, t22):
        # (row_i, row_j) <- (t11 row_i + t12 row_j, t21 row_i + t22 row_j)
        # det of the 2x2 must be +-1; columns of U get the inverse transform.
        for X in (A, W):
            ri, rj = X[i], X[j]
            for k in range(len(ri)):
                a, b = ri[k], rj[k]
                ri[k] = t11 * a + t12 * b
                rj[k] = t21 * a + t22 * b
        det = t11 * t22 - t12 * t21
        # inverse of [[t11,t12],[t21,t22]] is [[t22,-t12],[-t21,t11]]/det
        for row in U:
            a, b = row[i], row[j]
            row[i] = (t22 * a - t21 * b) * det
            row[j] = (-t12 * a + t11 * b) * det

    r = 0
    for j in range(n):
        # find a row >= r with nonzero entry in column j
        piv = None
        for i in range(r, m):
            if A[i][j] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rowop(r, piv, 0, 1, 1, 0)
        for i in range(r + 1, m):
            if A[i][j] == 0:
                continue
            a, b = A[r][j], A[i][j]
            if b % a == 0:
                rowop(r, i, 1, 0, -(b // a), 1)
            else:
                g, x, y = _xgcd(a, b)
                rowop(r, i, x, y, -(b // g), a // g)
        r += 1
        if r == m:
            break
    # fix pivot signs, then reduce above-pivot entries
    pivots = []
    for i in range(m):
        j = next((k for k in range(n) if A[i][k] != 0), None)
        if j is None:
            continue
        if A[i][j] < 0:
            for k in range(n):
                A[i][k] = -A[i][k]
            for k in range(m):
                W[i][k] = -W[i][k]
            for row in U:
                row[i] = -row[i]
        pivots.append((i, j))
    # reduce entries above pivots
    for i, j in pivots:
        p = A[i][j]
        for i2 in range(i):
            q = A[i2][j] // p
            if q:
                for k in range(n):
                    A[i2][k] -= q * A[i][k]
                for k in range(m):
                    W[i2][k] -= q * W[i][k]
                for row in U:
                    row[i] += q * row[i2]
    H = Matrix(ZZ, A)
    return H, Matrix(ZZ, U)


def hnf_transform_pair(M):
    """(H, W) with W * M = H, W unimodular (companion to hermite_normal_form)."""
    H, U = hermite_normal_form(M)
    # W = U^{-1}; invert by solving over Q (entries come out integral).
    W = U.to_ring(QQ).inverse()
    return H, W.to_ring(ZZ)


def smith_normal_form(M):
    """Smith normal form with transforms.

    Returns (U, S, V) with M = U * S * V, U and V unimodular, S diagonal with
    nonnegative entries s1 | s2 | ... .
    """
    A = _as_int_rows(M)
    m = len(A)
    n = len(A[0]) if A else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def rowop(i, j, t11, t12, t21, t22):
        ri, rj = A[i], A[j]
        for k in range(n):
            a, b = ri[k], rj[k]
            ri[k] = t11 * a + t12 * b
            rj[k] = t21 * a + t22 * b
        det = t11 * t22 - t12 * t21
        for row in U:
            a, b = row[i], row[j]
            row[i] = (t22 * a - t21 * b) * det
            row[j] = (-t12 * a + t11 * b) * det

    def colop(i, j, t11, t12, t21, t22):
        # (col_i, col_j) <- (t11 col_i + t12 col_j, t21 col_i + t22 col_j)
        for row in A:
            a, b = row[i], row[j]
            row[i] = t11 * a + t12 * b
            row[j] = t21 * a + t22 * b
        det = t11 * t22 - t12 * t21
        ri, rj = V[i], V[j]
        for k in range(n):
            a, b = ri[k], rj[k]
            ri[k] = (t22 * a - t21 * b) * det
            rj[k] = (-t12 * a + t11 * b) * det

    def negate_row(i):
        for k in range(n):
            A[i][k] = -A[i][k]
        for row in U:
            row[i] = -row[i]

    size = min(m, n)
    for t in range(size):
        # move a nonzero entry of the remaining block to (t, t)
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0:
                    if piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            rowop(t, i0, 0, 1, 1, 0)
        if j0 != t:
            colop(t, j0, 0, 1, 1, 0)
        while True:
            # clear column t
            for i in range(t + 1, m):
                if A[i][t] == 0:
                    continue
                a, b = A[t][t], A[i][t]
                if b % a == 0:
                    rowop(t, i, 1, 0, -(b // a), 1)
                else:
                    g, x, y = _xgcd(a, b)
                    rowop(t, i, x, y, -(b // g), a // g)
            # clear row t
            for j in range(t + 1, n):
                if A[t][j] == 0:
                    continue
                a, b = A[t][t], A[t][j]
                if b % a == 0:
                    colop(t, j, 1, 0, -(b // a), 1)
                else:
                    g, x, y = _xgcd(a, b)
                    colop(t, j, x, y, -(b // g), a // g)
            if all(A[i][t] == 0 for i in range(t + 1, m)) and all(
                A[t][j] == 0 for j in range(t + 1, n)
            ):
                # pivot must divide the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % A[t][t] != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rowop(t, bad, 1, 1, 0, 1)  # row_t += row_bad, then repeat
        if A[t][t] < 0:
            negate_row(t)
    # enforce divisibility chain on diagonal
    for t in range(size - 1):
        a = A[t][t]
        b = A[t + 1][t + 1]
        if a == 0 and b != 0:
            rowop(t, t + 1, 0, 1, 1, 0)
            colop(t, t + 1, 0, 1, 1, 0)
            a, b = A[t][t], A[t + 1][t + 1]
        if a != 0 and b % a != 0:
            colop(t, t + 1, 1, 1, 0, 1)  # col_t += col_{t+1}: puts b in (t+1,t)
            # re-eliminate the 2x2 block
            g, x, y = _xgcd(a, b)
            rowop(t, t + 1, x, y, -(b // g), a // g)
            colop(t, t + 1, 1, 0, -(A[t][t + 1] // A[t][t]), 1)
            if A[t][t] < 0:
                negate_row(t)
            if A[t + 1][t + 1] < 0:
                negate_row(t + 1)
    return Matrix(ZZ, U), Matrix(ZZ, A), Matrix(ZZ, V)


def integer_kernel(M):
    """Basis of {x in Z^n : M x = 0}.  The basis generates the full kernel
    lattice (it is saturated by construction)."""
    Mt = Matrix(ZZ, _as_int_rows(M)).transpose()
    H, W = hnf_transform_pair(Mt)
    basis = []
    for i in range(H.m):
        if all(x == 0 for x in H.rows[i]):
            basis.append(list(W.rows[i]))
    return basis


def integer_solve(M, b):
    """One x in Z^n with M x = b, or None."""
    rows = _as_int_rows(M)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    U, S, V = smith_normal_form(Matrix(ZZ, rows))
    Ui = U.to_ring(QQ).inverse()
    c = Ui.apply([Fraction(x) for x in b])
    y = [Fraction(0)] * n
    for i in range(m):
        s = S.rows[i][i] if i < min(m, n) else 0
        if s == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % s != 0:
                return None
            if i < n:
                y[i] = c[i] / s
    Vi = V.to_ring(QQ).inverse()
    x = Vi.apply(y)
    out = []
    for xi in x:
        f = Fraction(xi)
        if f.denominator != 1:
            return None
        out.append(int(f))
    return out


def solve_mod(M, b, mods):
    """One x in Z^n with (M x)_i = b_i mod mods_i (mods_i >= 1), or None."""
    rows = _as_int_rows(M)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    aug = [rows[i] + [mods[i] if j == i else 0 for j in range(m)] for i in range(m)]
    sol = integer_solve(Matrix(ZZ, aug), list(b))
    if sol is None:
        return None
    return sol[:n]


def lattice_intersect_rows(B1, B2):
    """Intersection of the row-span lattices of two integer matrices; returns
    HNF basis rows of the intersection of span(B1) and span(B2)."""
    B1 = _as_int_rows(B1)
    B2 = _as_int_rows(B2)
    if not B1 or not B2:
        return []
    n = len(B1[0])
    stacked = Matrix(ZZ, B1 + [[-x for x in row] for row in B2]).transpose()
    r1 = len(B1)
    out = []
    for k in integer_kernel(stacked):
        a = k[:r1]
        vec = [0] * n
        for c, row in zip(a, B1):
            for j in range(n):
                vec[j] += c * row[j]
        if any(vec):
            out.append(vec)
    if not out:
        return []
    H, _ = hermite_normal_form(Matrix(ZZ, out))
    return [row for row in H.rows if any(row)]


def row_gcd_scale(rows):
    g = 0
    for row in rows:
        for x in row:
            g = gcd(g, x)
    return g or 1
