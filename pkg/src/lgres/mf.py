"""Z/2-graded matrix factorizations and their morphisms.

A factorization of ``W - lam`` on ``E = E0 + E1`` is stored through its two
odd blocks ``q01 : E1 -> E0`` and ``q10 : E0 -> E1``. Morphisms are kept as
full block matrices (rows: target ``E0`` then ``E1``; columns: source) of a
single parity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .rings.mpoly import MPoly

Matrix = list  # list[list[MPoly]]


# ---------------------------------------------------------------------------
# matrix helpers
# ---------------------------------------------------------------------------

def zeros(proto: MPoly, rows: int, cols: int) -> Matrix:
    z = proto.zero()
    return [[z for _ in range(cols)] for _ in range(rows)]


def identity_matrix(proto: MPoly, n: int) -> Matrix:
    m = zeros(proto, n, n)
    for i in range(n):
        m[i][i] = proto.one()
    return m


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def mat_mul(a: Matrix, b: Matrix, proto: MPoly) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    out = zeros(proto, ra, cb)
    for i in range(ra):
        for k in range(ca):
            aik = a[i][k]
            if not aik:
                continue
            for j in range(cb):
                bkj = b[k][j]
                if bkj:
                    out[i][j] = out[i][j] + aik * bkj
    return out


def mat_add(a: Matrix, b: Matrix, sign: int = 1) -> Matrix:
    if shape(a) != shape(b):
        raise ValueError(f"shape mismatch {shape(a)} vs {shape(b)}")
    if sign == 1:
        return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c) -> Matrix:
    return [[x * c for x in row] for row in a]


def mat_partial(a: Matrix, i) -> Matrix:
    return [[x.partial(i) for x in row] for row in a]


def mat_is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def mat_equal(a: Matrix, b: Matrix) -> bool:
    return shape(a) == shape(b) and mat_is_zero(mat_add(a, b, -1))


def _block(m: Matrix, r0: int, c0: int, r1: int, c1: int) -> Matrix:
    return [row[c0:c1] for row in m[r0:r1]]


def _assemble(b00: Matrix, b01: Matrix, b10: Matrix, b11: Matrix) -> Matrix:
    top = [ra + rb for ra, rb in zip(b00, b01)]
    bottom = [ra + rb for ra, rb in zip(b10, b11)]
    return top + bottom


# ---------------------------------------------------------------------------
# factorizations
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class MatrixFactorization:
    rank_even: int
    rank_odd: int
    q01: Matrix
    q10: Matrix
    potential: MPoly
    shift: object = 0

    def __post_init__(self):
        if shape(self.q01) != (self.rank_even, self.rank_odd) and self.rank_even * self.rank_odd:
            raise ValueError(f"q01 must be {self.rank_even}x{self.rank_odd}, got {shape(self.q01)}")
        if shape(self.q10) != (self.rank_odd, self.rank_even) and self.rank_even * self.rank_odd:
            raise ValueError(f"q10 must be {self.rank_odd}x{self.rank_even}, got {shape(self.q10)}")

    @property
    def rank(self) -> int:
        return self.rank_even + self.rank_odd

    @property
    def variables(self) -> tuple:
        return self.potential.variables

    def full_q(self) -> Matrix:
        p = self.potential
        return _assemble(zeros(p, self.rank_even, self.rank_even), self.q01,
                         self.q10, zeros(p, self.rank_odd, self.rank_odd))

    def same_as(self, other: MatrixFactorization) -> bool:
        return (self is other) or (
            self.rank_even == other.rank_even and self.rank_odd == other.rank_odd
            and self.potential == other.potential and self.shift == other.shift
            and mat_equal(self.q01, other.q01) and mat_equal(self.q10, other.q10)
        )


@dataclass
class ValidationReport:
    valid: bool
    discrepancies: list = field(default_factory=list)  # (block, row, col, MPoly)

    def render(self) -> list[dict]:
        return [{"block": b, "row": i, "col": j, "value": v.render()} for b, i, j, v in self.discrepancies]


def mf_validate(m: MatrixFactorization) -> ValidationReport:
    """Check ``q01 q10 = (W - lam) Id`` on E0 and ``q10 q01 = (W - lam) Id`` on E1."""
    p = m.potential
    if shape(m.q01) != (m.rank_even, m.rank_odd) or shape(m.q10) != (m.rank_odd, m.rank_even):
        raise ValueError("block shapes do not match the declared ranks")
    target = p - m.shift
    bad = []
    for name, prod, n in (("E0", mat_mul(m.q01, m.q10, p), m.rank_even),
                          ("E1", mat_mul(m.q10, m.q01, p), m.rank_odd)):
        for i in range(n):
            for j in range(n):
                d = prod[i][j] - target if i == j else prod[i][j]
                if d:
                    bad.append((name, i, j, d))
    return ValidationReport(not bad, bad)


def exterior_basis(n: int) -> list[tuple]:
    """Subsets of {0..n-1} ordered by (size, lex)."""
    return [s for k in range(n + 1) for s in combinations(range(n), k)]


def koszul_build(pairs, shift=0) -> MatrixFactorization:
    """Koszul factorization of ``sum a_i b_i`` with ``Q = sum a_i e_i^ + b_i iota_i``."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("koszul_build needs at least one pair")
    proto = pairs[0][0]
    for a, b in pairs:
        if a.variables != proto.variables or b.variables != proto.variables:
            raise ValueError("all pairs must share one variable set")
    n = len(pairs)
    basis = exterior_basis(n)
    even = [s for s in basis if len(s) % 2 == 0]
    odd = [s for s in basis if len(s) % 2 == 1]
    pos = {s: i for i, s in enumerate(even)}
    pos.update({s: i for i, s in enumerate(odd)})

    def action(src, dst):
        m = zeros(proto, len(dst), len(src))
        for col, s in enumerate(src):
            for i, (a, b) in enumerate(pairs):
                sign = -1 if sum(1 for t in s if t < i) % 2 else 1
                if i in s:
                    t = tuple(x for x in s if x != i)
                    m[pos[t]][col] = m[pos[t]][col] + (b if sign > 0 else -b)
                else:
                    t = tuple(sorted(s + (i,)))
                    m[pos[t]][col] = m[pos[t]][col] + (a if sign > 0 else -a)
        return m

    W = proto.zero()
    for a, b in pairs:
        W = W + a * b
    return MatrixFactorization(len(even), len(odd), action(odd, even), action(even, odd), W + shift, shift)


def koszul_tensor(pairs_a, pairs_b, shift=0) -> MatrixFactorization:
    """Tensor product of two Koszul factorizations (potential ``W_a + W_b``)."""
    return koszul_build(list(pairs_a) + list(pairs_b), shift)


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

class MFMorphism:
    """Homogeneous morphism ``source -> target`` of parity 0 (even) or 1 (odd).

    ``blocks`` are (Phi00, Phi11) for even and (Phi01, Phi10) for odd
    morphisms, where ``Phi_ij`` maps ``source^j`` to ``target^i``.
    """

    __slots__ = ("source", "target", "parity", "full")

    def __init__(self, source: MatrixFactorization, target: MatrixFactorization,
                 parity: int, blocks=None, *, full: Matrix | None = None):
        if parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        self.source, self.target, self.parity = source, target, parity
        t0, t1, s0, s1 = target.rank_even, target.rank_odd, source.rank_even, source.rank_odd
        p = source.potential
        if full is not None:
            if shape(full) != (t0 + t1, s0 + s1):
                raise ValueError("full matrix has the wrong shape")
            off = (_block(full, 0, s0, t0, s0 + s1), _block(full, t0, 0, t0 + t1, s0))
            diag = (_block(full, 0, 0, t0, s0), _block(full, t0, s0, t0 + t1, s0 + s1))
            if not all(mat_is_zero(b) for b in (off if parity == 0 else diag)):
                raise ValueError(f"matrix is not homogeneous of parity {parity}")
            self.full = full
            return
        a, b = blocks
        if parity == 0:
            if shape(a) != (t0, s0) and t0 * s0 or shape(b) != (t1, s1) and t1 * s1:
                raise ValueError("even blocks must be (t0 x s0, t1 x s1)")
            self.full = _assemble(a or zeros(p, t0, s0), zeros(p, t0, s1), zeros(p, t1, s0), b or zeros(p, t1, s1))
        else:
            if shape(a) != (t0, s1) and t0 * s1 or shape(b) != (t1, s0) and t1 * s0:
                raise ValueError("odd blocks must be (t0 x s1, t1 x s0)")
            self.full = _assemble(zeros(p, t0, s0), a or zeros(p, t0, s1), b or zeros(p, t1, s0), zeros(p, t1, s1))

    def block(self, i: int, j: int) -> Matrix:
        t0, s0 = self.target.rank_even, self.source.rank_even
        t1, s1 = self.target.rank_odd, self.source.rank_odd
        rows = (0, t0) if i == 0 else (t0, t0 + t1)
        cols = (0, s0) if j == 0 else (s0, s0 + s1)
        return _block(self.full, rows[0], cols[0], rows[1], cols[1])

    @property
    def blocks(self) -> tuple:
        return (self.block(0, 0), self.block(1, 1)) if self.parity == 0 else (self.block(0, 1), self.block(1, 0))

    def is_zero(self) -> bool:
        return mat_is_zero(self.full)

    def _like(self, full: Matrix, parity: int | None = None) -> MFMorphism:
        return MFMorphism(self.source, self.target, self.parity if parity is None else parity, full=full)

    def _check_same(self, other: MFMorphism) -> None:
        if self.parity != other.parity:
            raise ValueError("cannot add morphisms of different parity")
        if not (self.source.same_as(other.source) and self.target.same_as(other.target)):
            raise ValueError("endpoint mismatch")

    def __add__(self, other: MFMorphism) -> MFMorphism:
        self._check_same(other)
        return self._like(mat_add(self.full, other.full))

    def __sub__(self, other: MFMorphism) -> MFMorphism:
        self._check_same(other)
        return self._like(mat_add(self.full, other.full, -1))

    def __neg__(self) -> MFMorphism:
        return self._like(mat_scale(self.full, -1))

    def scale(self, c) -> MFMorphism:
        """Multiply by a ring element (coefficient or polynomial)."""
        return self._like(mat_scale(self.full, c))

    def __mul__(self, other: MFMorphism) -> MFMorphism:
        return morphism_compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MFMorphism):
            return NotImplemented
        return self.parity == other.parity and mat_equal(self.full, other.full)

    __hash__ = None

    def __repr__(self) -> str:
        return f"MFMorphism(parity={self.parity}, {shape(self.full)})"


def identity(m: MatrixFactorization) -> MFMorphism:
    return MFMorphism(m, m, 0, full=identity_matrix(m.potential, m.rank))


def zero_morphism(src: MatrixFactorization, tgt: MatrixFactorization, parity: int) -> MFMorphism:
    return MFMorphism(src, tgt, parity, full=zeros(src.potential, tgt.rank, src.rank))


def q_morphism(m: MatrixFactorization) -> MFMorphism:
    """``Q`` itself as an odd endomorphism."""
    return MFMorphism(m, m, 1, full=m.full_q())


def dQ(m: MatrixFactorization, i) -> MFMorphism:
    """``d Q / d x_i`` as an odd endomorphism."""
    return MFMorphism(m, m, 1, full=mat_partial(m.full_q(), i))


def morphism_compose(f: MFMorphism, g: MFMorphism) -> MFMorphism:
    """``f o g``; requires ``target(g) = source(f)``."""
    if not g.target.same_as(f.source):
        raise ValueError("endpoint mismatch: target(g) must equal source(f)")
    full = mat_mul(f.full, g.full, f.source.potential)
    return MFMorphism(g.source, f.target, (f.parity + g.parity) % 2, full=full)


def morphism_delta(f: MFMorphism) -> MFMorphism:
    """``delta f = Q_Y f - (-1)^|f| f Q_X``."""
    p = f.source.potential
    left = mat_mul(f.target.full_q(), f.full, p)
    right = mat_mul(f.full, f.source.full_q(), p)
    full = mat_add(left, right, 1 if f.parity else -1)
    return MFMorphism(f.source, f.target, 1 - f.parity, full=full)


def commutator(a: MFMorphism, b: MFMorphism) -> MFMorphism:
    """Graded commutator ``ab - (-1)^{|a||b|} ba``."""
    ab, ba = a * b, b * a
    return ab + ba if a.parity * b.parity else ab - ba


def supertrace(f: MFMorphism) -> MPoly:
    """``Tr(Phi00) - Tr(Phi11)`` of an endomorphism."""
    if f.source.rank_even != f.target.rank_even or f.source.rank_odd != f.target.rank_odd:
        raise ValueError("supertrace needs an endomorphism")
    p = f.source.potential
    if f.parity:
        return p.zero()
    r0 = f.source.rank_even
    total = p.zero()
    for i in range(f.source.rank):
        total = total + f.full[i][i] if i < r0 else total - f.full[i][i]
    return total


def product_with_dQ(f: MFMorphism, order) -> MFMorphism:
    """``f o dQ_{order[0]} o ... o dQ_{order[-1]}``."""
    out = f
    for i in order:
        out = out * dQ(f.source, i)
    return out


def monomials_upto(nvars: int, degree: int) -> list[tuple]:
    out = []

    def rec(prefix, left, k):
        if k == nvars:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e, k + 1)

    rec([], degree, 0)
    return sorted(out, key=lambda e: (sum(e), e))


def closed_morphisms(src: MatrixFactorization, tgt: MatrixFactorization, parity: int,
                     degree: int) -> list[MFMorphism]:
    """Basis of the closed morphisms of the given parity with entries of degree <= ``degree``."""
    from .linalg import nullspace

    p = src.potential
    t0, s0 = tgt.rank_even, src.rank_even
    qx, qy = src.full_q(), tgt.full_q()
    sign = -1 if parity == 0 else 1  # delta f = Q_Y f + sign * f Q_X
    slots = [(r, c) for r in range(tgt.rank) for c in range(src.rank)
             if ((r >= t0) != (c >= s0)) == bool(parity)]
    monos = monomials_upto(p.nvars, degree)
    unknowns = [(r, c, m) for r, c in slots for m in monos]
    rows: dict = {}
    for k, (r, c, m) in enumerate(unknowns):
        mono = MPoly.monomial(p.variables, m, 1, p.laurent)
        contrib = []
        for i in range(tgt.rank):
            if qy[i][r]:
                contrib.append(((i, c), qy[i][r] * mono))
        for j in range(src.rank):
            if qx[c][j]:
                contrib.append(((r, j), mono * qx[c][j] * sign))
        for pos, poly in contrib:
            for e, coef in poly.terms.items():
                rows.setdefault((pos, e), {})
                row = rows[(pos, e)]
                row[k] = row[k] + coef if k in row else coef
    eqs = [{k: v for k, v in row.items() if v} for row in rows.values()]
    basis = []
    for vec in nullspace(eqs, list(range(len(unknowns))), key=lambda k: -k):
        full = zeros(p, tgt.rank, src.rank)
        for k, coef in vec.items():
            r, c, m = unknowns[k]
            full[r][c] = full[r][c] + MPoly.monomial(p.variables, m, coef, p.laurent)
        basis.append(MFMorphism(src, tgt, parity, full=full))
    return basis
