"""Finite unital Frobenius algebras, Clifford models and their invariants.

Elements are sparse vectors ``{basis index: coefficient}``. Clifford basis
elements ``e_I`` are indexed by subsets ``I`` ordered by (size, lex) and have
degree ``|I|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .mf import exterior_basis
from .rings.rational import norm

Vector = dict


def _clean(v: dict) -> dict:
    return {k: norm(c) for k, c in v.items() if c}


def vadd(a: Vector, b: Vector, scale=1) -> Vector:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + scale * c
    return _clean(out)


def vscale(a: Vector, c) -> Vector:
    return _clean({k: v * c for k, v in a.items()})


@dataclass
class FrobeniusAlgebra:
    labels: list
    degrees: list
    table: dict                  # (i, j) -> Vector, product of basis elements
    unit: int
    pairing: list                # g_IJ
    n: int = 0                   # number of odd generators (used in sign formulas)
    pairing_inverse: list = field(default=None)

    def __post_init__(self):
        if self.pairing_inverse is None:
            self.pairing_inverse = linalg.frac_inverse(self.pairing)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis(self, i: int) -> Vector:
        return {i: 1}

    def mul(self, a: Vector, b: Vector) -> Vector:
        out: dict = {}
        for i, ca in a.items():
            for j, cb in b.items():
                for k, c in self.table.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return _clean(out)

    def pair(self, a: Vector, b: Vector):
        total = 0
        for i, ca in a.items():
            for j, cb in b.items():
                g = self.pairing[i][j]
                if g:
                    total += ca * cb * g
        return norm(total)

    def homogeneous_parts(self, a: Vector) -> dict:
        parts: dict = {}
        for k, c in a.items():
            parts.setdefault(self.degrees[k] % 2, {})[k] = c
        return parts

    def m2(self, a: Vector, b: Vector, convention: str = "fooo") -> Vector:
        """Product; ``fooo`` applies ``m2(a, b) = (-1)^{|a|(|b|+1)} a.b`` on homogeneous parts."""
        if convention == "cup":
            return self.mul(a, b)
        if convention != "fooo":
            raise ValueError(f"unknown m2 convention {convention!r}")
        out: dict = {}
        for da, pa in self.homogeneous_parts(a).items():
            for db, pb in self.homogeneous_parts(b).items():
                sign = -1 if da * (db + 1) % 2 else 1
                out = vadd(out, self.mul(pa, pb), sign)
        return out

    def frobenius_defect(self) -> list:
        """Triples (i, j, k) where ``<e_i e_j, e_k> != <e_i, e_j e_k>``."""
        bad = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    if self.pair(self.mul({i: 1}, {j: 1}), {k: 1}) != self.pair({i: 1}, self.mul({j: 1}, {k: 1})):
                        bad.append((i, j, k))
        return bad


def clifford_product(I: tuple, J: tuple, d) -> tuple:
    """``e_I e_J = sign * prod_{I & J} d_i * e_{I ^ J}``."""
    sign = 1
    for j in J:
        if sum(1 for i in I if i > j) % 2:
            sign = -sign
    coeff = Fraction(sign)
    for i in set(I) & set(J):
        coeff *= Fraction(d[i])
    return tuple(sorted(set(I) ^ set(J))), norm(coeff)


def clifford_build(n: int, d) -> FrobeniusAlgebra:
    """Cl(n, d) with pairing = top-class coefficient of the product."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d = [norm(Fraction(x)) for x in d]
    if len(d) != n:
        raise ValueError("need one d_i per generator")
    basis = exterior_basis(n)
    index = {s: k for k, s in enumerate(basis)}
    table = {}
    for a, I in enumerate(basis):
        for b, J in enumerate(basis):
            K, c = clifford_product(I, J, d)
            if c:
                table[(a, b)] = {index[K]: c}
    top = index[tuple(range(n))]
    pairing = [[table.get((a, b), {}).get(top, 0) for b in range(len(basis))] for a in range(len(basis))]
    labels = ["1" if not s else "e" + "".join(str(i + 1) for i in s) for s in basis]
    return FrobeniusAlgebra(labels, [len(s) for s in basis], table, 0, pairing, n)


def generators(alg: FrobeniusAlgebra) -> list[Vector]:
    """The degree-one basis vectors ``e_1..e_n`` of a Clifford model."""
    return [{k: 1} for k, deg in enumerate(alg.degrees) if deg == 1]


def z_invariant(alg: FrobeniusAlgebra):
    """Sum over all index tuples with nonzero inverse-pairing factors."""
    gi = alg.pairing_inverse
    n = alg.n
    base = -1 if (n * (n - 1) // 2) % 2 else 1
    nz = [(I, J, gi[I][J]) for I in range(alg.dim) for J in range(alg.dim) if gi[I][J]]
    u = alg.unit
    col = [(K, gi[K][u]) for K in range(alg.dim) if gi[K][u]]
    # <e_A e_B, e_C> tabulated once
    tri = {}
    for A in range(alg.dim):
        for B in range(alg.dim):
            prod = alg.table.get((A, B), {})
            for C, _ in col:
                v = alg.pair(prod, {C: 1}) if prod else 0
                if v:
                    tri[(A, B, C)] = v
    total = Fraction(0)
    for I1, J1, g1 in nz:
        s = base * (-1 if alg.degrees[I1] * alg.degrees[J1] % 2 else 1)
        for I2, J2, g2 in nz:
            left = sum((tri.get((I1, I2, I3), 0) * g3 for I3, g3 in col), Fraction(0))
            if not left:
                continue
            right = sum((tri.get((J1, J2, J3), 0) * g4 for J3, g4 in col), Fraction(0))
            total += s * g1 * g2 * left * right
    return norm(total)


def bracket(alg: FrobeniusAlgebra, gens: list[Vector], order=None, convention: str = "fooo") -> Vector:
    """``[X_{s(n)}, ..., X_{s(1)}] = m2(X_{s(n)}, m2(..., m2(X_{s(2)}, X_{s(1)})))``."""
    order = list(order) if order is not None else list(range(len(gens)))
    acc = gens[order[0]]
    for i in order[1:]:
        acc = alg.m2(gens[i], acc, convention)
    return acc


def top_part(alg: FrobeniusAlgebra, v: Vector) -> Vector:
    top = max(alg.degrees)
    return {k: c for k, c in v.items() if alg.degrees[k] == top}


def floer_volume(alg: FrobeniusAlgebra, gens: list[Vector], order=None, convention: str = "fooo") -> Vector:
    """``(-1)^{n+1}`` times the top-degree part of the bracket."""
    n = len(gens)
    return vscale(top_part(alg, bracket(alg, gens, order, convention)), -1 if (n + 1) % 2 else 1)


def volume_ratio(alg: FrobeniusAlgebra, gens: list[Vector], order=None, convention: str = "fooo"):
    """Floer volume divided by the classical volume ``X_1 ... X_n`` (top parts)."""
    vol = gens[0]
    for g in gens[1:]:
        vol = alg.mul(vol, g)
    vol = top_part(alg, vol)
    fv = floer_volume(alg, gens, order, convention)
    (k, c), = vol.items()
    ratio = Fraction(fv.get(k, 0)) / Fraction(c)
    if vadd(fv, vscale(vol, ratio), -1):
        raise ValueError("Floer volume is not proportional to the classical volume")
    return norm(ratio)


def b_invariant_model(alpha: Vector, alg: FrobeniusAlgebra, gens: list[Vector] | None = None,
                      order=None, convention: str = "fooo"):
    """B-invariant in a finite model, as the coefficient of ``dx_1 ^ ... ^ dx_n``.

    With the bracket taken in the order ``sigma`` the natural form is
    ``dx_{s(1)} ^ ... ^ dx_{s(n)}``; the returned scalar is re-expressed in
    the standard order by the factor ``sign(sigma)``.
    """
    gens = gens if gens is not None else generators(alg)
    n = len(gens)
    order = tuple(order) if order is not None else tuple(range(n))
    V = bracket(alg, gens, order, convention)
    total = Fraction(0)
    for k in range(alg.dim):
        dk = alg.degrees[k]
        out = alg.m2(alpha, alg.m2({k: 1}, V, convention), convention)
        c = out.get(k, 0)
        if c:
            sign = -1 if ((n - 1) * dk + dk) % 2 else 1  # operator sign times supertrace grading
            total += sign * c
    lead = -1 if (n * (n + 1) // 2 + 1) % 2 else 1
    return norm(lead * linalg.perm_sign(order) * total)


def conjugate(alg: FrobeniusAlgebra, alpha: Vector, p: Vector, q: Vector, convention: str = "fooo") -> Vector:
    """``Phi_{q,p}(alpha) = (-1)^{|alpha|} m2(q, m2(alpha, p))`` on homogeneous parts."""
    out: dict = {}
    for deg, part in alg.homogeneous_parts(alpha).items():
        v = alg.m2(q, alg.m2(part, p, convention), convention)
        out = vadd(out, v, -1 if deg else 1)
    return out


def invert(alg: FrobeniusAlgebra, a: Vector) -> Vector:
    """Two-sided inverse of ``a`` under the product; raises ValueError if none exists."""
    cols = [alg.mul(a, {k: 1}) for k in range(alg.dim)]
    rows = [{k: cols[k][i] for k in range(alg.dim) if i in cols[k]} for i in range(alg.dim)]
    rhs = [1 if i == alg.unit else 0 for i in range(alg.dim)]
    sol = linalg.solve(rows, rhs)
    if sol is None:
        raise ValueError("element is not invertible")
    inv = _clean(sol)
    if alg.mul(inv, a) != {alg.unit: 1}:
        raise ValueError("element has a one-sided inverse only")
    return inv


def congruence_diagonalize(H):
    """``A`` with ``det A = 1`` and ``A^T H A = 2 diag(d)``, by symmetric elimination with shears."""
    n = len(H)
    H = [[Fraction(x) for x in row] for row in H]
    if any(H[i][j] != H[j][i] for i in range(n) for j in range(n)):
        raise ValueError("H must be symmetric")
    if linalg.frac_det(H) == 0:
        raise ValueError("singular Hessian: not a Morse critical point")
    A = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    M = [row[:] for row in H]

    def shear(i, j, c):
        # column_i += c * column_j on A; congruence on M
        for r in range(n):
            A[r][i] += c * A[r][j]
        for r in range(n):
            M[r][i] += c * M[r][j]
        for r in range(n):
            M[i][r] += c * M[j][r]

    for k in range(n):
        if M[k][k] == 0:
            j = next((j for j in range(k + 1, n) if M[j][j] != 0), None)
            if j is not None:
                shear(k, j, Fraction(1) if 2 * M[k][j] + M[j][j] else Fraction(2))
            else:
                j = next(j for j in range(k + 1, n) if M[k][j] != 0)
                shear(k, j, Fraction(1))
        for j in range(k + 1, n):
            if M[k][j]:
                shear(j, k, -M[k][j] / M[k][k])
    d = [norm(M[i][i] / 2) for i in range(n)]
    A = [[norm(x) for x in row] for row in A]
    check = linalg.matmul(linalg.matmul(linalg.transpose(A), H), A)
    if any(check[i][j] != (2 * d[i] if i == j else 0) for i in range(n) for j in range(n)):
        raise AssertionError("congruence postcondition failed")
    if linalg.frac_det(A) != 1:
        raise AssertionError("determinant normalization failed")
    return A, d
