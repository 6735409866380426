"""Matrices of variables, minors, determinantal ideals and the SO/SL invariant families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import GroundField, Polynomial, VarSet
from .groebner import Ideal


def _entry_name(stem, i, j, rows, cols):
    if rows < 10 and cols < 10:
        return f"{stem}{i}{j}"
    return f"{stem}{i}_{j}"


class Matrix:
    """Rectangular array of polynomials sharing one ring."""

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        self._dets: dict = {}

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def field(self):
        return self.entries[0][0].field

    @property
    def vars(self):
        return self.entries[0][0].vars

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        zero = Polynomial.zero(self.field, self.vars)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def transpose(self) -> Matrix:
        return Matrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def minor(self, rows, cols) -> Polynomial:
        """Determinant of the submatrix on ``rows`` x ``cols`` (0-based), Laplace along the first row."""
        rows, cols = tuple(rows), tuple(cols)
        if len(rows) != len(cols):
            raise ValueError("minor needs as many rows as columns")
        key = (rows, cols)
        if key in self._dets:
            return self._dets[key]
        if not rows:
            det = Polynomial.one(self.field, self.vars)
        elif len(rows) == 1:
            det = self.entries[rows[0]][cols[0]]
        else:
            det = Polynomial.zero(self.field, self.vars)
            r0, rest = rows[0], rows[1:]
            for k, c in enumerate(cols):
                a = self.entries[r0][c]
                if not a:
                    continue
                sub = self.minor(rest, cols[:k] + cols[k + 1:])
                det = det + a * sub if k % 2 == 0 else det - a * sub
        self._dets[key] = det
        return det

    def det(self) -> Polynomial:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return self.minor(range(self.rows), range(self.cols))

    def substitute(self, images) -> Matrix:
        return Matrix([[e.substitute(images) for e in row] for row in self.entries])


@dataclass
class MatrixOfVariables:
    shape: tuple
    kind: str
    vars: VarSet
    matrix: Matrix
    names: list = field(default_factory=list)

    def __getitem__(self, ij):
        return self.matrix[ij]


def make_matrix(shape, kind: str = "generic", fld: GroundField | int = 3, stem: str = "y", vars: VarSet | None = None) -> MatrixOfVariables:
    """Matrix whose entries are variables ``{stem}{i}{j}`` (1-based).

    Symmetric matrices use one variable ``{stem}{i}{j}`` with ``i <= j``
    for both mirrored positions.  ``vars`` may be a larger ring that
    already contains every entry name.
    """
    if isinstance(fld, int):
        fld = GroundField(fld)
    rows, cols = shape
    if rows < 1 or cols < 1:
        raise ValueError("matrix shape must be positive")
    if kind == "symmetric" and rows != cols:
        raise ValueError("symmetric matrix must be square")
    if kind not in ("generic", "symmetric"):
        raise ValueError(f"unknown matrix kind {kind!r}")

    def name(i, j):
        if kind == "symmetric" and i > j:
            i, j = j, i
        return _entry_name(stem, i + 1, j + 1, rows, cols)

    names = []
    for i in range(rows):
        for j in range(cols):
            n = name(i, j)
            if n not in names:
                names.append(n)
    vs = vars if vars is not None else VarSet(names)
    entries = [[Polynomial.variable(fld, vs, name(i, j)) for j in range(cols)] for i in range(rows)]
    return MatrixOfVariables((rows, cols), kind, vs, Matrix(entries), names)


def subsets(size: int, n: int) -> list[tuple]:
    """``size``-element subsets of ``{0..n-1}`` in lexicographic order."""
    return list(itertools.combinations(range(n), size))


def minors(M, t: int) -> list[Polynomial]:
    """All nonzero ``t x t`` minors, deduplicated, in (rows, cols) lexicographic order."""
    mat = M.matrix if isinstance(M, MatrixOfVariables) else M
    if not 1 <= t <= min(mat.rows, mat.cols):
        raise ValueError(f"minor size {t} out of range for {mat.rows}x{mat.cols}")
    out, seen = [], set()
    for r in subsets(t, mat.rows):
        for c in subsets(t, mat.cols):
            d = mat.minor(r, c)
            if d and d not in seen and -d not in seen:
                seen.add(d)
                out.append(d)
    return out


def determinantal_ideal(M, size: int) -> Ideal:
    """Ideal of ``size x size`` minors; the zero ideal when ``size`` exceeds the shape."""
    mat = M.matrix if isinstance(M, MatrixOfVariables) else M
    if size < 1:
        raise ValueError("minor size must be positive")
    if size > min(mat.rows, mat.cols):
        return Ideal.zero(mat.field, mat.vars)
    return Ideal(minors(mat, size), mat.vars, mat.field)


# invariant generators


def label(index) -> str:
    """1-based label of a subset, e.g. (0, 2) -> '13'."""
    return "".join(str(i + 1) for i in index) if all(i < 9 for i in index) else "_".join(str(i + 1) for i in index)


@dataclass
class SOGenerators:
    n: int
    m: int
    X: Matrix
    vars: VarSet
    gram: dict  # (i, j), i <= j -> sum_c x_ic x_jc
    u: dict  # I -> det X[I, :]


def so_generators(fld: GroundField | int, n: int, m: int) -> SOGenerators:
    """Inner products and maximal minors of the ``m x n`` coordinate matrix (form = identity)."""
    if isinstance(fld, int):
        fld = GroundField(fld)
    if fld.p == 2:
        raise ValueError("SO invariants need p > 2")
    X = make_matrix((m, n), "generic", fld, stem="x")
    mat = X.matrix
    G = mat @ mat.transpose()
    gram = {(i, j): G[i, j] for i in range(m) for j in range(i, m)}
    u = {I: mat.minor(I, range(n)) for I in subsets(n, m)}
    return SOGenerators(n, m, mat, X.vars, gram, u)


@dataclass
class SLGenerators:
    n: int
    m: int
    q: int
    X: Matrix
    Z: Matrix
    vars: VarSet
    products: dict  # (a, b) -> (XZ)_ab
    u: dict  # I in I(n,m) -> det X[I, :]
    xi: dict  # J in I(n,q) -> det Z[:, J]

    @property
    def XZ(self) -> Matrix:
        return self.X @ self.Z


def _xz_vars(n, m, q):
    xs = [_entry_name("x", i + 1, c + 1, m, n) for i in range(m) for c in range(n)]
    zs = [_entry_name("z", c + 1, j + 1, n, q) for c in range(n) for j in range(q)]
    return VarSet(xs + zs)


def sl_generators(fld: GroundField | int, n: int, m: int, q: int) -> SLGenerators:
    """Entries of ``XZ``, n-minors ``u_I`` of ``X`` (m x n) and ``xi_J`` of ``Z`` (n x q)."""
    if isinstance(fld, int):
        fld = GroundField(fld)
    vs = _xz_vars(n, m, q)
    X = make_matrix((m, n), "generic", fld, stem="x", vars=vs).matrix
    Z = make_matrix((n, q), "generic", fld, stem="z", vars=vs).matrix
    XZ = X @ Z
    products = {(a, b): XZ[a, b] for a in range(m) for b in range(q)}
    u = {I: X.minor(I, range(n)) for I in subsets(n, m)} if m >= n else {}
    xi = {J: Z.minor(range(n), J) for J in subsets(n, q)} if q >= n else {}
    return SLGenerators(n, m, q, X, Z, vs, products, u, xi)


def verify_invariance_sl(g: Polynomial, n: int, m: int, q: int) -> bool:
    """Invariance under ``x -> x(1 + tE_st)``, ``z -> (1 - tE_st)z`` for all ``s != t``.

    Elementary matrices generate SL_n over a field, so passing every pair
    with a formal parameter is full SL-invariance.
    """
    fld = g.field
    base = _xz_vars(n, m, q)
    if g.vars != base:
        raise ValueError("polynomial must live in the x,z coordinate ring")
    tname = base.fresh_name("t")
    big = VarSet(base.names + (tname,))
    t = Polynomial.variable(fld, big, tname)
    X = make_matrix((m, n), "generic", fld, stem="x", vars=big).matrix
    Z = make_matrix((n, q), "generic", fld, stem="z", vars=big).matrix
    target = g.embed(big)
    for s in range(n):
        for r in range(n):
            if s == r:
                continue
            images = {}
            # x(1 + tE_sr): column r gains t * column s
            for i in range(m):
                for c in range(n):
                    v = X[i, c] + t * X[i, s] if c == r else X[i, c]
                    images[_entry_name("x", i + 1, c + 1, m, n)] = v
            # (1 - tE_sr)z: row s loses t * row r
            for c in range(n):
                for j in range(q):
                    v = Z[c, j] - t * Z[r, j] if c == s else Z[c, j]
                    images[_entry_name("z", c + 1, j + 1, n, q)] = v
            if g.substitute(images) != target:
                return False
    return True


def verify_invariance_so_lie(g: Polynomial, n: int, m: int) -> bool:
    """Annihilation by every derivation ``x_ic -> sum_e x_ie A_ec``, ``A = E_st - E_ts``.

    A necessary condition for SO(n)-invariance; not a proof of it in
    characteristic p.
    """
    fld = g.field
    X = make_matrix((m, n), "generic", fld, stem="x")
    if g.vars != X.vars:
        raise ValueError("polynomial must live in the x coordinate ring")
    names = [[_entry_name("x", i + 1, c + 1, m, n) for c in range(n)] for i in range(m)]
    for s in range(n):
        for r in range(s + 1, n):
            total = Polynomial.zero(fld, X.vars)
            for i in range(m):
                # A = E_sr - E_rs: D(x_ir) = x_is, D(x_is) = -x_ir
                total = total + g.diff(names[i][r]) * X[i, s] - g.diff(names[i][s]) * X[i, r]
            if total:
                return False
    return True


# presentations


class RelationCheckError(AssertionError):
    """A structural identity failed: an implementation bug, never a mathematical outcome."""


@dataclass
class InvariantPresentation:
    """Base ring ``R = F_p[y]/I`` with chart data.

    SO: ``charts`` is I(n,m), ``pairing[(I, J)] = det Y[I, J]`` and
    ``chart_element[I] = pairing[(I, I)]``.  SL: ``charts`` is I(n,m),
    ``cocharts`` is I(n,q) and ``pairing[(I, J)] = det Y[I, J]``.  When
    the base ring is a polynomial ring cut out by nothing (``m == n``),
    ``hypersurface`` holds the determinant ``f``.
    """

    group: str
    n: int
    m: int
    q: int | None
    field: GroundField
    vars: VarSet
    Y: Matrix
    ideal: Ideal
    charts: list
    cocharts: list
    pairing: dict
    chart_element: dict
    hypersurface: Polynomial | None = None

    def to_json(self):
        return {
            "group": self.group,
            "n": self.n,
            "m": self.m,
            "q": self.q,
            "p": self.field.p,
            "vars": list(self.vars),
            "ideal": [str(g) for g in self.ideal.generators],
            "charts": [
                {"index": label(I), "p": str(self.chart_element[I])} for I in self.charts
            ],
            "cocharts": [label(J) for J in self.cocharts],
            "pairings": [
                {"rows": label(I), "cols": label(J), "p": str(v)} for (I, J), v in self.pairing.items()
            ],
            "hypersurface": str(self.hypersurface) if self.hypersurface is not None else None,
        }


def presentation_so(fld: GroundField | int, n: int, m: int) -> InvariantPresentation:
    if isinstance(fld, int):
        fld = GroundField(fld)
    if fld.p == 2:
        raise ValueError("SO presentations need p > 2")
    if m < n:
        raise ValueError("m < n: the invariant ring is the polynomial ring itself")
    Yv = make_matrix((m, m), "symmetric", fld)
    Y = Yv.matrix
    ideal = determinantal_ideal(Y, n + 1)
    charts = subsets(n, m)
    pairing = {(I, J): Y.minor(I, J) for I in charts for J in charts}
    elements = {I: pairing[(I, I)] for I in charts}
    for I in charts:
        for J in charts:
            if pairing[(I, J)] != pairing[(J, I)]:
                raise RelationCheckError(f"p_{{{label(I)},{label(J)}}} is not symmetric")
            rel = pairing[(I, J)] ** 2 - elements[I] * elements[J]
            if ideal.normal_form(rel):
                raise RelationCheckError(f"p_{{{label(I)},{label(J)}}}^2 != p_I p_J mod I")
    hyper = Y.det() if m == n else None
    return InvariantPresentation("SO", n, m, None, fld, Yv.vars, Y, ideal, charts, [], pairing, elements, hyper)


def presentation_sl(fld: GroundField | int, n: int, m: int, q: int) -> InvariantPresentation:
    if isinstance(fld, int):
        fld = GroundField(fld)
    if m < n or q < n:
        raise ValueError("SL presentation needs m, q >= n")
    Yv = make_matrix((m, q), "generic", fld)
    Y = Yv.matrix
    ideal = determinantal_ideal(Y, n + 1)
    rows, cols = subsets(n, m), subsets(n, q)
    pairing = {(I, J): Y.minor(I, J) for I in rows for J in cols}
    pres = InvariantPresentation(
        "SL", n, m, q, fld, Yv.vars, Y, ideal, rows, cols, pairing, {},
        Y.det() if m == q == n else None,
    )
    for quad in well_definedness_quadruples(pres):
        if not well_defined(pres, *quad):
            raise RelationCheckError("p_{I,J} p_{I',J'} != p_{I,J'} p_{I',J} mod I for %s" % (quad,))
    return pres


def well_definedness_quadruples(pres: InvariantPresentation):
    for I, I2 in itertools.combinations(pres.charts, 2):
        for J, J2 in itertools.combinations(pres.cocharts, 2):
            yield I, J, I2, J2


def well_defined(pres: InvariantPresentation, I, J, I2, J2) -> bool:
    """``p_{I,J} p_{I',J'} == p_{I,J'} p_{I',J}`` modulo the base ideal."""
    P = pres.pairing
    rel = P[(I, J)] * P[(I2, J2)] - P[(I, J2)] * P[(I2, J)]
    return not pres.ideal.normal_form(rel)


# dimensions


def dim_determinantal(t: int, r: int, s: int) -> int:
    """Dimension of the ``r x s`` matrices of rank at most ``t``."""
    if not 0 <= t <= min(r, s):
        raise ValueError("rank bound out of range")
    return t * (r + s - t)


def dim_symmetric_determinantal(t: int, m: int) -> int:
    """Dimension of symmetric ``m x m`` matrices of rank at most ``t``."""
    if not 0 <= t <= m:
        raise ValueError("rank bound out of range")
    return t * m - t * (t - 1) // 2


@dataclass(frozen=True)
class SLDimensions:
    dimX: int
    dimZu: int
    dimZxi: int
    codimZu: int
    codimZxi: int

    def to_json(self):
        return {
            "dimX": self.dimX,
            "dimZu": self.dimZu,
            "dimZxi": self.dimZxi,
            "codimZu": self.codimZu,
            "codimZxi": self.codimZxi,
        }


def dims_sl(n: int, m: int, q: int) -> SLDimensions:
    """Dimensions for the SL_n quotient of ``M_{m,n} x M_{n,q}``.

    ``dimX = n(m+q) - (n^2-1)``: SL_n acts freely on pairs where the
    covector block has full rank.  ``Z_u`` is the quotient of
    ``D_{n-1}(M_{m,n}) x M_{n,q}``, ``Z_xi`` that of
    ``M_{m,n} x D_{n-1}(M_{n,q})``.
    """
    if not (n >= 1 and m >= n and q >= n):
        raise ValueError("need m, q >= n >= 1")
    sl = n * n - 1
    dimX = n * (m + q) - sl
    dimZu = dim_determinantal(n - 1, m, n) + n * q - sl
    dimZxi = dim_determinantal(n - 1, n, q) + n * m - sl
    dims = SLDimensions(dimX, dimZu, dimZxi, dimX - dimZu, dimX - dimZxi)
    if m > n and dims.codimZu < 2 or q > n and dims.codimZxi < 2:
        raise AssertionError(f"codimension below 2 for n={n}, m={m}, q={q}")
    return dims
