"""Finite quotient rings of orders and their unit groups.

A FiniteRing presents L/I for lattices I <= L of equal rank: per degree the
coordinates of I in a basis of L are put in Smith normal form, so elements
are integer tuples with one modulus per position and the basis stays
homogeneous.  Unit groups are enumerated (with a size cap); abelianizations
and quotients by normal subgroups are computed by closure, coset tagging and
element-order statistics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .lattice import ZLattice
from .linalg import Matrix, integer_solve, smith_normal_form
from .rings import QQ, ZZ

UNIT_ENUM_CAP = 2_000_000


class TooLarge(ValueError):
    pass


class FiniteRing:
    """Quotient of an order lattice by a full two-sided ideal sublattice."""

    def __init__(self, algebra, L: ZLattice, I: ZLattice, degrees=None, dmat=None):
        self.algebra = algebra
        self.L = L
        self.I = I
        if degrees is None:
            degrees = algebra.degrees
        basis_vectors = []
        moduli = []
        homdeg = []
        # per-degree Smith presentation keeps the basis homogeneous
        by_degree = {}
        for g in sorted(set(degrees)):
            idx = [i for i, d in enumerate(degrees) if d == g]
            Lg = L.restrict_to_coordinates(idx)
            Ig = I.restrict_to_coordinates(idx)
            if Lg.rank == 0:
                continue
            if Ig.rank != Lg.rank:
                raise ValueError("ideal not full in the degree component")
            coords = [Lg.coords(v) for v in Ig.vectors()]
            M = Matrix(ZZ, coords)
            U, S, V = smith_normal_form(M)
            r = Lg.rank
            svals = [S.rows[i][i] for i in range(r)]
            Lg_vecs = Lg.vectors()
            for i in range(r):
                vec = [Fraction(0)] * L.n
                for j in range(r):
                    c = V.rows[i][j]
                    if c:
                        vec = [a + c * x for a, x in zip(vec, Lg_vecs[j])]
                basis_vectors.append(vec)
                moduli.append(svals[i])
                homdeg.append(g)
        self.basis_vectors = basis_vectors
        self.moduli = moduli
        self.degrees = homdeg
        self.k = len(moduli)
        self.size = 1
        for s in moduli:
            self.size *= max(s, 1)
        self._basis_cols = Matrix.from_columns(
            QQ, [[Fraction(x) for x in v] for v in basis_vectors]
        ) if basis_vectors else None
        # multiplication table over the presentation
        self.mult = [[None] * self.k for _ in range(self.k)]
        for i in range(self.k):
            for j in range(self.k):
                prod = algebra.multiply(basis_vectors[i], basis_vectors[j])
                self.mult[i][j] = self.to_coords(prod)
        self.one = self.to_coords([Fraction(x) for x in algebra.unit])
        self.dbar = None
        if dmat is not None:
            self.dbar = [self.to_coords(dmat.apply(v)) for v in basis_vectors]
        self._prime_field = None
        if self.moduli and all(s == self.moduli[0] for s in self.moduli):
            p = self.moduli[0]
            if p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1)):
                self._prime_field = p

    # -- element plumbing ----------------------------------------------------

    def reduce(self, tup):
        return tuple(
            (c % s) if s else c for c, s in zip(tup, self.moduli)
        )

    def to_coords(self, ambient_vec):
        """Image of an ambient vector of L in the presentation."""
        if self._basis_cols is None:
            return ()
        sol = self._basis_cols.solve([Fraction(x) for x in ambient_vec])
        if sol is None:
            raise ValueError("vector is not in the span of the quotient basis")
        out = []
        for x in sol:
            f = Fraction(x)
            if f.denominator != 1:
                raise ValueError("vector is not in the lattice")
            out.append(int(f))
        return self.reduce(out)

    def lift(self, tup):
        vec = [Fraction(0)] * self.L.n
        for c, b in zip(tup, self.basis_vectors):
            if c:
                vec = [a + c * x for a, x in zip(vec, b)]
        return vec

    def zero(self):
        return tuple(0 for _ in range(self.k))

    def add(self, a, b):
        return self.reduce(tuple(x + y for x, y in zip(a, b)))

    def neg(self, a):
        return self.reduce(tuple(-x for x in a))

    def mul(self, a, b):
        out = [0] * self.k
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = self.mult[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                prod = row[j]
                for t, pt in enumerate(prod):
                    if pt:
                        out[t] += c * pt
        return self.reduce(out)

    def elements(self, cap=UNIT_ENUM_CAP):
        if self.size > cap:
            raise TooLarge(f"ring has {self.size} elements, cap {cap}")
        ranges = [range(max(s, 1)) for s in self.moduli]
        for tup in itertools.product(*ranges):
            yield tup

    def left_mult_matrix(self, a):
        rows = [[0] * self.k for _ in range(self.k)]
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(self.k):
                prod = self.mult[i][j]
                for t, pt in enumerate(prod):
                    if pt:
                        rows[t][j] += ai * pt
        return rows

    def inverse(self, a):
        """Two-sided inverse, or None (finite ring: one-sided is two-sided)."""
        if self.one is None:
            return None
        Lm = self.left_mult_matrix(a)
        if self._prime_field:
            x = _solve_mod_p(Lm, list(self.one), self._prime_field)
            if x is None:
                return None
            return self.reduce(tuple(x))
        from .linalg import solve_mod

        mods = [s if s else 0 for s in self.moduli]
        if any(s == 0 for s in mods):
            sol = integer_solve(Matrix(ZZ, Lm), list(self.one))
            return self.reduce(tuple(sol)) if sol is not None else None
        x = solve_mod(Matrix(ZZ, Lm), list(self.one), mods)
        if x is None:
            return None
        return self.reduce(tuple(x))

    def is_unit(self, a):
        if self._prime_field:
            return _rank_mod_p(self.left_mult_matrix(a), self._prime_field) == self.k
        return self.inverse(a) is not None

    def units(self, cap=UNIT_ENUM_CAP):
        out = []
        for a in self.elements(cap):
            if self.is_unit(a):
                out.append(a)
        return out

    def is_cycle(self, a):
        if self.dbar is None:
            return True
        img = [0] * self.k
        for i, ai in enumerate(a):
            if ai:
                for t, pt in enumerate(self.dbar[i]):
                    if pt:
                        img[t] += ai * pt
        return all((x % s if s else x) == 0 for x, s in zip(img, self.moduli))

    def is_homogeneous_degree0(self, a):
        return all(c == 0 for c, g in zip(a, self.degrees) if g != 0)


def _solve_mod_p(rows, rhs, p):
    n = len(rows)
    aug = [[rows[i][j] % p for j in range(n)] + [rhs[i] % p] for i in range(n)]
    r = 0
    piv_cols = []
    for j in range(n):
        piv = next((i for i in range(r, n) if aug[i][j] % p), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][j], -1, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][j]:
                c = aug[i][j]
                aug[i] = [(a - c * b) % p for a, b in zip(aug[i], aug[r])]
        piv_cols.append(j)
        r += 1
    x = [0] * n
    for rr, j in enumerate(piv_cols):
        x[j] = aug[rr][n]
    # consistency
    for i in range(r, n):
        if aug[i][n] % p:
            return None
    # verify (guards the non-square / deficient cases)
    for i in range(n):
        s = sum(rows[i][j] * x[j] for j in range(n)) - rhs[i]
        if s % p:
            return None
    return x


def _rank_mod_p(rows, p):
    n = len(rows)
    a = [[x % p for x in row] for row in rows]
    r = 0
    for j in range(n):
        piv = next((i for i in range(r, n) if a[i][j]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][j], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(n):
            if i != r and a[i][j]:
                c = a[i][j]
                a[i] = [(u - c * v) % p for u, v in zip(a[i], a[r])]
        r += 1
        if r == n:
            break
    return r


# ---------------------------------------------------------------------------
# Finite groups given by multiplication
# ---------------------------------------------------------------------------


class FiniteUnitGroup:
    def __init__(self, ring: FiniteRing, elements=None, cap=UNIT_ENUM_CAP):
        self.ring = ring
        self.elements = elements if elements is not None else ring.units(cap)
        self.identity = ring.reduce(tuple(ring.one))
        self._set = set(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def mul(self, a, b):
        return self.ring.mul(a, b)

    def inv(self, a):
        return self.ring.inverse(a)

    def subgroup_closure(self, gens):
        gens = [self.ring.reduce(tuple(g)) for g in gens]
        seen = {self.identity}
        frontier = [self.identity]
        gens = [g for g in gens if g != self.identity]
        for g in gens:
            if g not in seen:
                seen.add(g)
                frontier.append(g)
        while frontier:
            x = frontier.pop()
            for g in gens:
                for y in (self.mul(x, g), self.mul(g, x)):
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
        return seen

    def generating_set(self):
        gens = []
        span = {self.identity}
        for x in self.elements:
            if x not in span:
                gens.append(x)
                span = self.subgroup_closure(gens)
                if len(span) == self.order:
                    break
        return gens

    def normal_closure(self, gens, group_gens=None):
        if group_gens is None:
            group_gens = self.generating_set()
        current = list(gens)
        K = self.subgroup_closure(current)
        changed = True
        while changed:
            changed = False
            for s in group_gens:
                s_inv = self.inv(s)
                for k in list(K):
                    c = self.mul(self.mul(s, k), s_inv)
                    if c not in K:
                        current.append(c)
                        K = self.subgroup_closure(current)
                        changed = True
        return K

    def quotient_tags(self, K):
        """Coset tag for each group element; K must be a normal subgroup."""
        tags = {}
        reps = []
        for x in self.elements:
            if x in tags:
                continue
            rep_id = len(reps)
            reps.append(x)
            for k in K:
                tags[self.mul(x, k)] = rep_id
        return tags, reps

    def abelian_quotient_invariants(self, extra_normal_gens=()):
        """Invariant factors of G / <[G,G], extra>, with the coset tag map."""
        ggens = self.generating_set()
        comms = []
        for s in ggens:
            s_inv = self.inv(s)
            for t in ggens:
                t_inv = self.inv(t)
                comms.append(self.mul(self.mul(s, t), self.mul(s_inv, t_inv)))
        K = self.normal_closure(list(extra_normal_gens) + comms, ggens)
        tags, reps = self.quotient_tags(K)
        # quotient multiplication through representatives
        def qmul(i, j):
            return tags[self.mul(reps[i], reps[j])]

        invs = abelian_invariants_from_mult(len(reps), qmul, tags[self.identity])
        return invs, tags, reps


def abelian_invariants_from_mult(n, mul, identity_idx):
    """Invariant factors (ascending divisibility chain) of an abelian group
    of order n given by index-level multiplication.

    Element-order statistics determine the group: for each prime p the counts
    N_i = #{g : g^(p^i) = 1} = p^(sum_j min(i, lambda_j)) recover the p-part
    partition lambda."""
    if n == 1:
        return []
    orders = []
    for i in range(n):
        o = 1
        x = i
        while x != identity_idx:
            x = mul(x, i)
            o += 1
        orders.append(o)
    primes = sorted({p for o in orders for p in _factor(o)})
    partitions = {}
    for p in primes:
        a = []
        i = 0
        while True:
            q = p ** i
            N = sum(1 for o in orders if q % o == 0)
            a.append(_exact_log(N, p))
            if i > 0 and a[-1] == a[-2]:
                a.pop()
                break
            i += 1
        counts_ge = [a[t] - a[t - 1] for t in range(1, len(a))]
        lam = []
        if counts_ge:
            for j in range(counts_ge[0]):
                lam.append(sum(1 for c in counts_ge if c > j))
        partitions[p] = sorted(lam, reverse=True)
    height = max((len(v) for v in partitions.values()), default=0)
    invariants = []
    for t in range(height):
        d = 1
        for p, lam in partitions.items():
            if t < len(lam):
                d *= p ** lam[t]
        invariants.append(d)
    invariants.reverse()  # ascending chain d1 | d2 | ...
    return invariants


def _exact_log(N, p):
    e = 0
    while N > 1:
        if N % p:
            raise ValueError("element-order count is not a p-power")
        N //= p
        e += 1
    return e


def _factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out
