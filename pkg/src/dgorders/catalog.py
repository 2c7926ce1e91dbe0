"""Constructors for the worked examples used as regression fixtures.

Every builder returns a BuiltExample carrying the algebra, its differential,
optional order lattices and modules, a matrix-unit realization of the blocks
(used by the class group machinery for global units), and the expected
results the test suite asserts against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Differential, GradedAlgebra
from .dgmodules import DgModule
from .lattice import ZLattice
from .linalg import Matrix, integer_kernel
from .rings import QQ, ZZ, CoefficientRing, GF


class UnknownExample(KeyError):
    pass


@dataclass
class BuiltExample:
    name: str
    params: dict
    algebra: GradedAlgebra
    differential: Differential
    modules: dict = field(default_factory=dict)
    order: ZLattice | None = None
    blocks: list | None = None  # matrix-unit realization per block
    expected: dict = field(default_factory=dict)


def matrix_units_algebra(ring: CoefficientRing, k: int) -> GradedAlgebra:
    """Mat_k with the main-diagonal grading: deg(e_ab) = b - a."""
    n = k * k

    def idx(a, b):
        return a * k + b

    degrees = [(i % k) - (i // k) for i in range(n)]
    mult = [[[ring.zero()] * n for _ in range(n)] for _ in range(n)]
    for a in range(k):
        for b in range(k):
            for c in range(k):
                for d in range(k):
                    if b == c:
                        mult[idx(a, b)][idx(c, d)][idx(a, d)] = ring.one()
    unit = [ring.zero()] * n
    for a in range(k):
        unit[idx(a, a)] = ring.one()
    names = [f"e{a + 1}{b + 1}" for a in range(k) for b in range(k)]
    return GradedAlgebra(ring, degrees, mult, unit, names)


def scalar_algebra(ring: CoefficientRing, name="g") -> GradedAlgebra:
    return GradedAlgebra(ring, [0], [[[ring.one()]]], [ring.one()], [name])


def product_algebra(ring, algebras, names=None):
    dims = [B.n for B in algebras]
    n = sum(dims)
    offs = [sum(dims[:i]) for i in range(len(algebras))]
    degrees = []
    allnames = []
    for t, B in enumerate(algebras):
        degrees += B.degrees
        allnames += [f"{nm}.{t}" for nm in B.names]
    mult = [[[ring.zero()] * n for _ in range(n)] for _ in range(n)]
    for B, off in zip(algebras, offs):
        for i in range(B.n):
            for j in range(B.n):
                for k, c in enumerate(B.mult[i][j]):
                    mult[off + i][off + j][off + k] = c
    unit = [ring.zero()] * n
    for B, off in zip(algebras, offs):
        for k, c in enumerate(B.unit):
            unit[off + k] = c
    return GradedAlgebra(ring, degrees, mult, unit, names or allnames)


def _mat2_differential(A, ring, x, offset=0):
    """Images of d_x on a Mat_2 block at the given basis offset inside A."""
    x = ring.coerce(x)
    zero = [ring.zero()] * A.n
    images = {}
    img = list(zero)
    img[offset + 0] = x
    img[offset + 3] = x
    images[offset + 2] = img  # d(e21) = x (e11 + e22)
    img = list(zero)
    img[offset + 1] = ring.neg(x)
    images[offset + 0] = img  # d(e11) = -x e12
    img = list(zero)
    img[offset + 1] = x
    images[offset + 3] = img  # d(e22) = x e12
    return images


def mat2_dx(ring=QQ, x=1):
    A = matrix_units_algebra(ring, 2)
    D = Differential.from_images(A, _mat2_differential(A, ring, x))
    return A, D


def mat2_column_module(A, D, x, top_degree=0) -> DgModule:
    """The column dg-module of (Mat_2, d_x): delta(p, q) = (x q, 0), basis
    degrees (top_degree, top_degree - 1)."""
    R = A.ring
    x = R.coerce(x)
    # basis m1 = (1,0), m2 = (0,1); e_ab . m_c = delta_{b c} m_a
    action = [
        Matrix(R, [[1, 0], [0, 0]]),  # e11
        Matrix(R, [[0, 1], [0, 0]]),  # e12
        Matrix(R, [[0, 0], [1, 0]]),  # e21
        Matrix(R, [[0, 0], [0, 1]]),  # e22
    ]
    delta = Matrix(R, [[0, 0], [0, 0]])
    delta.rows[0][1] = x
    return DgModule(A, D, [top_degree, top_degree - 1], action, delta, ["m1", "m2"])


def mat3_complex(ring=QQ, a11=1, a21=1):
    """Mat_3 with the grading from the complex 0 -> R -(a11,a21)-> R^2 -> 0 and
    the induced differential."""
    A = matrix_units_algebra(ring, 3)
    # override the default grading: rows/cols indexed 1..3
    # deg(e31) = deg(e32) = -1, deg(e13) = deg(e23) = +1, rest 0
    def idx(a, b):
        return (a - 1) * 3 + (b - 1)

    degrees = [0] * 9
    degrees[idx(3, 1)] = degrees[idx(3, 2)] = -1
    degrees[idx(1, 3)] = degrees[idx(2, 3)] = 1
    A = GradedAlgebra(ring, degrees, A.mult, A.unit, A.names)
    a11 = ring.coerce(a11)
    a21 = ring.coerce(a21)
    zero = [ring.zero()] * 9
    images = {}

    def setimg(src, pairs):
        img = list(zero)
        for (a, b), c in pairs.items():
            img[idx(a, b)] = c
        images[idx(*src)] = img

    neg = ring.neg
    setimg((3, 1), {(1, 1): a11, (2, 1): a21, (3, 3): a11})
    setimg((3, 2), {(1, 2): a11, (2, 2): a21, (3, 3): a21})
    setimg((1, 1), {(1, 3): neg(a11)})
    setimg((1, 2), {(1, 3): neg(a21)})
    setimg((2, 1), {(2, 3): neg(a11)})
    setimg((2, 2), {(2, 3): neg(a21)})
    setimg((3, 3), {(1, 3): a11, (2, 3): a21})
    D = Differential.from_images(A, images)
    return A, D


def dual_numbers(ring=QQ):
    """K[X]/X^2 with deg X = -1, d(X) = 1."""
    A = GradedAlgebra(
        ring,
        [0, -1],
        [[[ring.one(), ring.zero()], [ring.zero(), ring.one()]],
         [[ring.zero(), ring.one()], [ring.zero(), ring.zero()]]],
        [ring.one(), ring.zero()],
        ["1", "X"],
    )
    D = Differential.from_images(A, {1: [ring.one(), ring.zero()]})
    return A, D


def congruence_lattice(C, p, N):
    """{v in Z^N : C v = 0 mod p} as a ZLattice (C integer, m x N)."""
    m = len(C)
    ext = [list(row) + [p if j == i else 0 for j in range(m)] for i, row in enumerate(C)]
    kern = integer_kernel(Matrix(ZZ, ext))
    vecs = [k[:N] for k in kern]
    return ZLattice.from_vectors([[Fraction(x) for x in v] for v in vecs], N)


def _mat2_block_realization(offset):
    return {"type": "matrix", "size": 2,
            "units": {(r, c): offset + 2 * r + c for r in range(2) for c in range(2)}}


def _scalar_block_realization(offset):
    return {"type": "matrix", "size": 1, "units": {(0, 0): offset}}


def mat2_zorder(x=1):
    """Mat_2(Z) inside (Mat_2(Q), d_x); d-stable iff x is an integer."""
    A, D = mat2_dx(QQ, x)
    L = ZLattice.standard(4)
    ex = BuiltExample(
        "mat2_zorder", {"x": x}, A, D,
        modules={"column": mat2_column_module(A, D, x)},
        order=L, blocks=[_mat2_block_realization(0)],
    )
    ex.expected["d_stable"] = Fraction(x).denominator == 1
    return ex


def lambda2_order(x=2):
    """The order [[Z, xZ], [x^{-1} Z, Z]] inside (Mat_2(Q), d_x); conjugate to
    Mat_2(Z), d-stable, acyclic for x != 0."""
    A, D = mat2_dx(QQ, x)
    x = Fraction(x)
    L = ZLattice.from_vectors(
        [[1, 0, 0, 0], [0, x, 0, 0], [0, 0, 1 / x, 0], [0, 0, 0, 1]], 4
    )
    ex = BuiltExample("lambda2_order", {"x": x}, A, D, order=L,
                      blocks=[_mat2_block_realization(0)])
    ex.expected["d_stable"] = True
    ex.expected["acyclic"] = True
    return ex


def zp_order(p=5, x=1):
    """Z + p Mat_2(Z) inside (Mat_2(Q), d_x)."""
    A, D = mat2_dx(QQ, x)
    L = ZLattice.from_vectors(
        [[1, 0, 0, 1], [p, 0, 0, 0], [0, p, 0, 0], [0, 0, p, 0]], 4
    )
    ex = BuiltExample(
        "zp_order", {"p": p, "x": x}, A, D,
        modules={"column": mat2_column_module(A, D, x)},
        order=L, blocks=[_mat2_block_realization(0)],
    )
    ex.expected["classical_class_order"] = 2 if (p - 1) % 4 == 0 else 1
    ex.expected["dg_class_order"] = 1
    return ex


def green_order(p=3, n_blocks=1, left_scalar=True, right_scalar=True, xs=None):
    """The common shape of the symmetric-group / Schur-algebra / polynomial
    functor orders: a chain of 2x2 blocks with scalar ends, glued by
    congruences a_{j+1} = d_j, c_j = 0 mod p."""
    factors = []
    if left_scalar:
        factors.append(scalar_algebra(QQ, "gL"))
    mat_offsets = []
    for t in range(n_blocks):
        mat_offsets.append(sum(B.n for B in factors))
        factors.append(matrix_units_algebra(QQ, 2))
    if right_scalar:
        factors.append(scalar_algebra(QQ, "gR"))
    A = product_algebra(QQ, factors)
    if xs is None:
        xs = [1] * n_blocks
    images = {}
    for off, x in zip(mat_offsets, xs):
        images.update(_mat2_differential(A, QQ, x, offset=off))
    D = Differential.from_images(A, images)
    N = A.n
    # congruences: chain of diagonal matches and c = 0 conditions
    cond = []
    prev_d = 0 if left_scalar else None  # index of previous "d" coordinate
    for off in mat_offsets:
        a_idx, c_idx, d_idx = off + 0, off + 2, off + 3
        if prev_d is not None:
            row = [0] * N
            row[a_idx] = 1
            row[prev_d] = -1
            cond.append(row)
        row = [0] * N
        row[c_idx] = 1
        cond.append(row)
        prev_d = d_idx
    if right_scalar and prev_d is not None:
        row = [0] * N
        row[N - 1] = 1
        row[prev_d] = -1
        cond.append(row)
    L = congruence_lattice(cond, p, N)
    blocks = []
    off = 0
    if left_scalar:
        blocks.append(_scalar_block_realization(0))
        off = 1
    for t in range(n_blocks):
        blocks.append(_mat2_block_realization(off))
        off += 4
    if right_scalar:
        blocks.append(_scalar_block_realization(off))
    name = "s3_order" if (n_blocks, left_scalar, right_scalar) == (1, True, True) else "green_order"
    ex = BuiltExample(name, {"p": p, "n_blocks": n_blocks, "xs": xs}, A, D,
                      order=L, blocks=blocks)
    return ex


def s3_order(p=3, x=1):
    """The group ring of the symmetric group on 3 letters in its fiber-product
    shape: {(d1, M, a3) : a2 = d1, c2 = 0, a3 = d2 mod p}."""
    return green_order(p=p, n_blocks=1, left_scalar=True, right_scalar=True, xs=[x])


def _example_mat2_dx(ring="Q", x=1, p=None):
    ring_obj = {"Q": QQ}.get(ring) if isinstance(ring, str) else ring
    if ring_obj is None and isinstance(ring, str) and ring.startswith("F"):
        ring_obj = GF(int(ring[1:]))
    if ring_obj is None:
        ring_obj = QQ
    A, D = mat2_dx(ring_obj, x)
    ex = BuiltExample("mat2_dx", {"x": x, "ring": ring}, A, D,
                      modules={"column": mat2_column_module(A, D, x)},
                      blocks=[_mat2_block_realization(0)])
    if ring_obj is QQ and Fraction(x).denominator == 1:
        ex.order = ZLattice.standard(4)
    ex.expected["acyclic"] = Fraction(x) != 0 if ring_obj is QQ else x != 0
    return ex


def _example_mat3(ring="Q", a11=1, a21=1):
    ring_obj = QQ
    if isinstance(ring, str) and ring.startswith("F"):
        ring_obj = GF(int(ring[1:]))
    A, D = mat3_complex(ring_obj, a11, a21)
    ex = BuiltExample("mat3_complex", {"a11": a11, "a21": a21, "ring": ring}, A, D)
    if ring_obj is QQ and Fraction(a11).denominator == 1 and Fraction(a21).denominator == 1:
        ex.order = ZLattice.standard(9)
    return ex


def _example_dual_numbers(ring="Q"):
    ring_obj = QQ
    if isinstance(ring, str) and ring.startswith("F"):
        ring_obj = GF(int(ring[1:]))
    A, D = dual_numbers(ring_obj)
    ex = BuiltExample("dual_numbers", {"ring": ring}, A, D)
    if ring_obj is QQ:
        ex.order = ZLattice.standard(2)
    ex.expected["semisimple_category"] = True
    return ex


CATALOG = {
    "mat2_dx": _example_mat2_dx,
    "mat3_complex": _example_mat3,
    "dual_numbers": _example_dual_numbers,
    "mat2_zorder": lambda x=1: mat2_zorder(x),
    "lambda2_order": lambda x=2: lambda2_order(x),
    "zp_order": lambda p=5, x=1: zp_order(p, x),
    "s3_order": lambda p=3, x=1: s3_order(p, x),
    "green_order": green_order,
}


def build(name, **params) -> BuiltExample:
    try:
        builder = CATALOG[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; known: {sorted(CATALOG)}")
    return builder(**params)
