"""The algebra description file format.

One file describes one algebra: ring, graded basis, structure constants and
differential, plus an optional order lattice and any number of module blocks.
Values are integers or fractions a/b.  Parse errors carry the line number.

    ring Q                  # or: ring Z | ring Z_loc 5 | ring F 5
    basis
      e11 0
      e12 1
    end
    mult
      e11 e11 e11 1         # b_i b_j = sum_k value * b_k
    end
    differential
      e21 e11 1             # d(b_src) += value * b_tgt
    end
    order                   # optional: rows of a lattice basis over Q
      1 0 0 1
    end
    module col              # optional, repeatable
      basis
        m1 0
      end
      action
        e11 m1 m1 1         # a . m_src += value * m_tgt
      end
      differential
        m2 m1 1
      end
    end
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Differential, GradedAlgebra
from .dgmodules import DgModule
from .lattice import ZLattice
from .rings import QQ, ZZ, GF, Zloc


class AlgebraFileError(ValueError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass
class ParsedFile:
    ring: object
    algebra: GradedAlgebra
    differential: Differential
    order: ZLattice | None = None
    modules: dict = field(default_factory=dict)


def _parse_value(tok, ring, lineno):
    try:
        return ring.coerce(Fraction(tok))
    except (ValueError, ZeroDivisionError) as exc:
        raise AlgebraFileError(lineno, f"bad value {tok!r}: {exc}")


def parse_algebra_file(text: str) -> ParsedFile:
    lines = text.splitlines()
    pos = 0

    def next_tokens():
        nonlocal pos
        while pos < len(lines):
            raw = lines[pos]
            pos += 1
            body = raw.split("#", 1)[0].strip()
            if body:
                return pos, body.split()
        return None, None

    ring = None
    names = []
    degrees = []
    mult_entries = []
    diff_entries = []
    order_rows = []
    modules = {}

    lineno, toks = next_tokens()
    if toks is None or toks[0] != "ring":
        raise AlgebraFileError(lineno or 1, "file must start with a ring line")
    if toks[1] == "Q":
        ring = QQ
    elif toks[1] == "Z":
        ring = ZZ
    elif toks[1] == "Z_loc":
        if len(toks) < 3:
            raise AlgebraFileError(lineno, "Z_loc needs a prime")
        ring = Zloc(int(toks[2]))
    elif toks[1] == "F":
        if len(toks) < 3:
            raise AlgebraFileError(lineno, "F needs a prime")
        ring = GF(int(toks[2]))
    else:
        raise AlgebraFileError(lineno, f"unknown ring {toks[1]!r}")

    def parse_module(modname):
        mnames, mdegrees = [], []
        maction, mdiff = [], []
        while True:
            ln, t = next_tokens()
            if t is None:
                raise AlgebraFileError(ln or pos, "unterminated module block")
            if t[0] == "end":
                return mnames, mdegrees, maction, mdiff
            if t[0] == "basis":
                while True:
                    ln2, t2 = next_tokens()
                    if t2 is None:
                        raise AlgebraFileError(ln2 or pos, "unterminated basis")
                    if t2[0] == "end":
                        break
                    if len(t2) != 2:
                        raise AlgebraFileError(ln2, "basis line: <name> <degree>")
                    mnames.append(t2[0])
                    mdegrees.append(int(t2[1]))
            elif t[0] == "action":
                while True:
                    ln2, t2 = next_tokens()
                    if t2 is None:
                        raise AlgebraFileError(ln2 or pos, "unterminated action")
                    if t2[0] == "end":
                        break
                    if len(t2) != 4:
                        raise AlgebraFileError(ln2, "action line: <a> <msrc> <mtgt> <value>")
                    maction.append((ln2, t2))
            elif t[0] == "differential":
                while True:
                    ln2, t2 = next_tokens()
                    if t2 is None:
                        raise AlgebraFileError(ln2 or pos, "unterminated differential")
                    if t2[0] == "end":
                        break
                    if len(t2) != 3:
                        raise AlgebraFileError(ln2, "differential line: <src> <tgt> <value>")
                    mdiff.append((ln2, t2))
            else:
                raise AlgebraFileError(ln, f"unknown module section {t[0]!r}")

    module_raw = {}
    while True:
        lineno, toks = next_tokens()
        if toks is None:
            break
        head = toks[0]
        if head == "basis":
            while True:
                ln, t = next_tokens()
                if t is None:
                    raise AlgebraFileError(ln or pos, "unterminated basis section")
                if t[0] == "end":
                    break
                if len(t) != 2:
                    raise AlgebraFileError(ln, "basis line: <name> <degree>")
                names.append(t[0])
                try:
                    degrees.append(int(t[1]))
                except ValueError:
                    raise AlgebraFileError(ln, f"bad degree {t[1]!r}")
        elif head == "mult":
            while True:
                ln, t = next_tokens()
                if t is None:
                    raise AlgebraFileError(ln or pos, "unterminated mult section")
                if t[0] == "end":
                    break
                if len(t) != 4:
                    raise AlgebraFileError(ln, "mult line: <bi> <bj> <bk> <value>")
                mult_entries.append((ln, t))
        elif head == "differential":
            while True:
                ln, t = next_tokens()
                if t is None:
                    raise AlgebraFileError(ln or pos, "unterminated differential section")
                if t[0] == "end":
                    break
                if len(t) != 3:
                    raise AlgebraFileError(ln, "differential line: <src> <tgt> <value>")
                diff_entries.append((ln, t))
        elif head == "order":
            while True:
                ln, t = next_tokens()
                if t is None:
                    raise AlgebraFileError(ln or pos, "unterminated order section")
                if t[0] == "end":
                    break
                try:
                    order_rows.append([Fraction(x) for x in t])
                except (ValueError, ZeroDivisionError):
                    raise AlgebraFileError(ln, "order rows must be rationals")
        elif head == "module":
            if len(toks) != 2:
                raise AlgebraFileError(lineno, "module line: module <name>")
            module_raw[toks[1]] = parse_module(toks[1])
        else:
            raise AlgebraFileError(lineno, f"unknown section {head!r}")

    if not names:
        raise AlgebraFileError(pos, "no basis section")
    n = len(names)
    index = {nm: i for i, nm in enumerate(names)}
    if len(index) != n:
        raise AlgebraFileError(pos, "duplicate basis names")
    mult = [[[ring.zero()] * n for _ in range(n)] for _ in range(n)]
    for ln, (bi, bj, bk, val) in mult_entries:
        for nm in (bi, bj, bk):
            if nm not in index:
                raise AlgebraFileError(ln, f"unknown basis name {nm!r}")
        mult[index[bi]][index[bj]][index[bk]] = _parse_value(val, ring, ln)
    # the unit is the element acting as identity: solve for it from the table
    unit = _find_unit(ring, n, mult)
    if unit is None:
        raise AlgebraFileError(pos, "multiplication table admits no unit element")
    A = GradedAlgebra(ring, degrees, mult, unit, names)
    dmat = [[ring.zero()] * n for _ in range(n)]
    for ln, (src, tgt, val) in diff_entries:
        for nm in (src, tgt):
            if nm not in index:
                raise AlgebraFileError(ln, f"unknown basis name {nm!r}")
        dmat[index[tgt]][index[src]] = _parse_value(val, ring, ln)
    from .linalg import Matrix

    D = Differential(Matrix(ring, dmat))

    order = None
    if order_rows:
        for row in order_rows:
            if len(row) != n:
                raise AlgebraFileError(pos, f"order rows need {n} entries")
        order = ZLattice.from_vectors(order_rows, n)

    out_modules = {}
    for mname, (mnames, mdegrees, maction, mdiff) in module_raw.items():
        m = len(mnames)
        midx = {nm: i for i, nm in enumerate(mnames)}
        action = [Matrix.zeros(ring, m, m) for _ in range(n)]
        for ln, (a, src, tgt, val) in maction:
            if a not in index:
                raise AlgebraFileError(ln, f"unknown algebra basis name {a!r}")
            if src not in midx or tgt not in midx:
                raise AlgebraFileError(ln, f"unknown module basis name in {a} {src} {tgt}")
            action[index[a]].rows[midx[tgt]][midx[src]] = _parse_value(val, ring, ln)
        delta = Matrix.zeros(ring, m, m)
        for ln, (src, tgt, val) in mdiff:
            if src not in midx or tgt not in midx:
                raise AlgebraFileError(ln, "unknown module basis name")
            delta.rows[midx[tgt]][midx[src]] = _parse_value(val, ring, ln)
        out_modules[mname] = DgModule(A, D, mdegrees, action, delta, mnames)

    return ParsedFile(ring, A, D, order, out_modules)


def _find_unit(ring, n, mult):
    """Solve sum_i u_i (b_i b_j) = b_j for all j."""
    from .linalg import Matrix

    solve_ring = ring if ring.is_field else QQ
    rows = []
    rhs = []
    for j in range(n):
        for k in range(n):
            rows.append([solve_ring.coerce(mult[i][j][k]) for i in range(n)])
            rhs.append(solve_ring.one() if k == j else solve_ring.zero())
    sol = Matrix(solve_ring, rows).solve(rhs)
    if sol is None:
        return None
    try:
        return [ring.coerce(x) for x in sol]
    except Exception:
        return None


def write_algebra_file(A: GradedAlgebra, D: Differential, order: ZLattice | None = None,
                       modules: dict | None = None, header: str | None = None) -> str:
    R = A.ring
    out = []
    if header:
        for line in header.splitlines():
            out.append(f"# {line}")
    if R is QQ or repr(R) == "Q":
        out.append("ring Q")
    elif repr(R) == "Z":
        out.append("ring Z")
    elif repr(R).startswith("Z_("):
        out.append(f"ring Z_loc {R.p}")
    elif hasattr(R, "p"):
        out.append(f"ring F {R.p}")
    else:
        raise ValueError(f"cannot serialize ring {R!r}")
    out.append("basis")
    for nm, d in zip(A.names, A.degrees):
        out.append(f"  {nm} {d}")
    out.append("end")
    out.append("mult")
    for i in range(A.n):
        for j in range(A.n):
            for k, c in enumerate(A.mult[i][j]):
                if not R.is_zero(c):
                    out.append(f"  {A.names[i]} {A.names[j]} {A.names[k]} {R.to_str(c)}")
    out.append("end")
    out.append("differential")
    for i in range(A.n):
        for j in range(A.n):
            c = D.matrix.rows[j][i]
            if not R.is_zero(c):
                out.append(f"  {A.names[i]} {A.names[j]} {R.to_str(c)}")
    out.append("end")
    if order is not None:
        out.append("order")
        for v in order.vectors():
            out.append("  " + " ".join(str(x) for x in v))
        out.append("end")
    for mname, M in (modules or {}).items():
        out.append(f"module {mname}")
        out.append("  basis")
        for nm, d in zip(M.names, M.degrees):
            out.append(f"    {nm} {d}")
        out.append("  end")
        out.append("  action")
        for i in range(A.n):
            for src in range(M.m):
                for tgt in range(M.m):
                    c = M.action[i].rows[tgt][src]
                    if not R.is_zero(c):
                        out.append(
                            f"    {A.names[i]} {M.names[src]} {M.names[tgt]} {R.to_str(c)}"
                        )
        out.append("  end")
        out.append("  differential")
        for src in range(M.m):
            for tgt in range(M.m):
                c = M.delta.rows[tgt][src]
                if not R.is_zero(c):
                    out.append(f"    {M.names[src]} {M.names[tgt]} {R.to_str(c)}")
        out.append("  end")
        out.append("end")
    return "\n".join(out) + "\n"


def detect_blocks(A: GradedAlgebra):
    """Detect a matrix-unit realization from the basis: diagonal idempotents
    summing to 1, with one basis element per off-diagonal position.  Returns
    the block list used by the class group machinery, or None."""
    R = A.ring
    n = A.n
    diag = []
    for i in range(n):
        b = A.basis_vector(i)
        if A.multiply(b, b) == b:
            diag.append(i)
    s = [R.zero()] * n
    for i in diag:
        s[i] = R.add(s[i], R.one())
    if s != [R.coerce(x) for x in A.unit]:
        return None
    # position of each basis element between diagonal units
    pos = {}
    for k in range(n):
        bk = A.basis_vector(k)
        row = [i for i in diag if A.multiply(A.basis_vector(i), bk) == bk]
        col = [j for j in diag if A.multiply(bk, A.basis_vector(j)) == bk]
        if len(row) != 1 or len(col) != 1:
            return None
        pos[k] = (row[0], col[0])
    # group the diagonal units into blocks by connectivity
    parent = {i: i for i in diag}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, (r, c) in pos.items():
        pr, pc = find(r), find(c)
        if pr != pc:
            parent[pr] = pc
    groups = {}
    for i in diag:
        groups.setdefault(find(i), []).append(i)
    blocks = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        rows = sorted(groups[root])
        size = len(rows)
        order_of = {i: t for t, i in enumerate(rows)}
        units = {}
        for k, (r, c) in pos.items():
            if find(r) == root:
                key = (order_of[r], order_of[c])
                if key in units:
                    return None
                units[key] = k
        if len(units) != size * size:
            return None
        # verify the matrix-unit relations with coefficient exactly 1
        for (r1, c1), k1 in units.items():
            for (r2, c2), k2 in units.items():
                prod = A.multiply(A.basis_vector(k1), A.basis_vector(k2))
                if c1 == r2:
                    if prod != A.basis_vector(units[(r1, c2)]):
                        return None
                elif any(not R.is_zero(x) for x in prod):
                    return None
        blocks.append({"type": "matrix", "size": size, "units": units})
    return blocks
