"""Exact linear algebra over Z: integer matrices, Smith normal form,
canonical solutions of linear systems, and finitely generated abelian
groups presented by relation matrices.

All entries are arbitrary-precision Python ints.  Matrices are immutable
(tuples of tuples) so values can be shared freely.
"""

from __future__ import annotations

import itertools
from math import gcd


def xgcd(a, b):
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b), g >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


class IntMatrix:
    """Immutable integer matrix.

    >>> IntMatrix.identity(2) * IntMatrix([[2, 0], [0, 3]])
    IntMatrix([[2, 0], [0, 3]])
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows_data):
        data = tuple(tuple(int(x) for x in row) for row in rows_data)
        self.data = data
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        assert all(len(r) == self.cols for r in data), "ragged rows"

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns, rows=None):
        columns = [tuple(c) for c in columns]
        if rows is None:
            assert columns, "need rows for an empty column list"
            rows = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(rows)])

    def column(self, j):
        return tuple(self.data[i][j] for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return IntMatrix([[self.data[i][j] for i in range(self.rows)]
                          for j in range(self.cols)])

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return "IntMatrix(%s)" % [list(r) for r in self.data]

    def __add__(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return IntMatrix([[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return IntMatrix([[a - b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.data, other.data)])

    def __neg__(self):
        return IntMatrix([[-a for a in r] for r in self.data])

    def __mul__(self, other):
        if isinstance(other, int):
            return IntMatrix([[other * a for a in r] for r in self.data])
        assert self.cols == other.rows, (self.cols, other.rows)
        ot = other.transpose().data
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot]
                          for row in self.data])

    __rmul__ = __mul__

    def apply(self, vec):
        """Matrix times column vector, returned as a tuple."""
        vec = tuple(vec)
        assert len(vec) == self.cols, (len(vec), self.cols)
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.data)

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        assert self.rows == self.cols
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self):
        return self.rows == self.cols and abs(self.det()) == 1


def smith_normal_form(M):
    """Return (U, D, V) with U*M*V == D, U and V unimodular, and D diagonal
    with d1 | d2 | ... and all d_i >= 0.

    >>> U, D, V = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    >>> [D.data[i][i] for i in range(2)]
    [2, 4]
    """
    rows, cols = M.rows, M.cols
    a = [list(r) for r in M.data]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in a:
            r[i] -= q * r[j]
        for r in v:
            r[i] -= q * r[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    n = min(rows, cols)
    t = 0
    while t < n:
        # find a pivot
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        # enforce divisibility of later entries by a[t][t]
        recheck = False
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t] != 0:
                    # add row i to row t, restart elimination at t
                    a[t] = [x + y for x, y in zip(a[t], a[i])]
                    u[t] = [x + y for x, y in zip(u[t], u[i])]
                    recheck = True
                    break
            if recheck:
                break
        if recheck:
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    U = IntMatrix(u)
    V = IntMatrix(v)
    D = IntMatrix(a)
    return U, D, V


_snf_cache = {}


def snf_cached(M):
    key = M.data
    hit = _snf_cache.get(key)
    if hit is None:
        hit = smith_normal_form(M)
        if len(_snf_cache) > 4096:
            _snf_cache.clear()
        _snf_cache[key] = hit
    return hit


def solve_integer(A, b):
    """Canonical integer solution x of A x = b, or None when unsolvable.

    The solution is deterministic: it has all free SNF coordinates equal
    to zero, so downstream constructions built on it are reproducible.
    """
    b = tuple(int(x) for x in b)
    assert len(b) == A.rows
    U, D, V = snf_cached(A)
    c = U.apply(b)
    n = min(A.rows, A.cols)
    y = [0] * A.cols
    for i in range(A.rows):
        d = D.data[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            if i < A.cols:
                y[i] = c[i] // d
    return V.apply(y)


def kernel_basis(A):
    """Basis (list of tuples) of the integer kernel lattice of A."""
    U, D, V = snf_cached(A)
    n = min(A.rows, A.cols)
    rank = sum(1 for i in range(n) if D.data[i][i] != 0)
    return [V.column(j) for j in range(rank, A.cols)]


def hnf_image_basis(A):
    """Basis of the column span of A (image lattice), via SNF."""
    U, D, V = snf_cached(A)
    # Columns of U^-1 * D span the image; U^-1 = adjugate route avoided:
    # solve U X = D columnwise using unimodularity of U.
    n = min(A.rows, A.cols)
    basis = []
    for j in range(n):
        d = D.data[j][j]
        if d == 0:
            break
        col = tuple(D.data[i][j] for i in range(A.rows))
        x = solve_integer(U, col)
        assert x is not None
        basis.append(x)
    return basis


def unimodular_inverse(M):
    """Exact inverse of a unimodular integer matrix."""
    assert M.rows == M.cols
    cols = []
    for j in range(M.rows):
        e = tuple(1 if i == j else 0 for i in range(M.rows))
        x = solve_integer(M, e)
        assert x is not None, "matrix is not unimodular"
        cols.append(x)
    return IntMatrix.from_columns(cols, M.rows)


def lattice_membership_matrix(basis, ambient_dim):
    """Matrix whose columns are the given lattice basis vectors."""
    if not basis:
        return IntMatrix.zero(ambient_dim, 0)
    return IntMatrix.from_columns(basis, ambient_dim)


class FGAbelian:
    """Finitely generated abelian group Z^g / (columns of R), with unique
    element normal forms derived from the Smith normal form of R.

    invariant factors d1 | d2 | ... (each >= 2) plus a free rank.

    >>> G = FGAbelian.from_relations(2, IntMatrix([[2, 0], [0, 1]]))
    >>> (G.torsion, G.free_rank)
    ((2,), 0)
    """

    __slots__ = ("ngens", "rels", "U", "torsion", "free_rank", "_coord_info")

    def __init__(self, ngens, rels):
        assert rels.rows == ngens
        self.ngens = ngens
        self.rels = rels
        U, D, V = snf_cached(rels)
        self.U = U
        n = min(rels.rows, rels.cols)
        torsion = []
        coord_info = []  # (index into U-coords, modulus or 0)
        for i in range(ngens):
            d = D.data[i][i] if i < n else 0
            if d == 1:
                continue
            coord_info.append((i, d))
            if d > 1:
                torsion.append(d)
        self.torsion = tuple(torsion)
        self.free_rank = sum(1 for _, d in coord_info if d == 0)
        self._coord_info = tuple(coord_info)

    @classmethod
    def from_relations(cls, ngens, rels=None):
        if rels is None:
            rels = IntMatrix.zero(ngens, 0)
        return cls(ngens, rels)

    @classmethod
    def free(cls, rank):
        return cls.from_relations(rank)

    def invariants(self):
        return self.torsion, self.free_rank

    @property
    def order(self):
        """Group order, or 0 when infinite."""
        if self.free_rank:
            return 0
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def is_trivial(self):
        return not self.torsion and self.free_rank == 0

    def nf(self, vec):
        """Normal form of an ambient vector: one residue per torsion factor
        followed by the free coordinates."""
        y = self.U.apply(vec)
        out = []
        for i, d in self._coord_info:
            out.append(y[i] % d if d else y[i])
        return tuple(out)

    def lift(self, coords):
        """An ambient vector with the given normal form."""
        coords = tuple(coords)
        assert len(coords) == len(self._coord_info)
        y = [0] * self.ngens
        for (i, _), c in zip(self._coord_info, coords):
            y[i] = c
        return solve_integer(self.U, y)

    def elements(self):
        """Iterate all normal forms (finite groups only)."""
        assert self.free_rank == 0, "infinite group"
        ranges = [range(d) for d in self.torsion]
        return itertools.product(*ranges)

    def same_invariants(self, other):
        return self.torsion == other.torsion and self.free_rank == other.free_rank

    def __repr__(self):
        parts = ["Z"] * self.free_rank + ["Z/%d" % d for d in self.torsion]
        return "FGAbelian(%s)" % (" + ".join(parts) if parts else "0")


class AbHom:
    """Homomorphism between FGAbelian groups, given by a matrix on ambient
    generators.  Well-definedness means the matrix maps the domain's
    relation lattice into the codomain's."""

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain, codomain, matrix):
        assert matrix.rows == codomain.ngens and matrix.cols == domain.ngens
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix

    def is_well_defined(self):
        for j in range(self.domain.rels.cols):
            img = self.matrix.apply(self.domain.rels.column(j))
            if any(self.codomain.nf(img)):
                return False
        return True

    def apply(self, vec):
        return self.matrix.apply(vec)

    def compose(self, other):
        """self after other."""
        assert other.codomain is self.domain or other.codomain.same_invariants(self.domain)
        return AbHom(other.domain, self.codomain, self.matrix * other.matrix)


class Subquotient:
    """Subquotient L / (B + R) of a quotient module Z^g / R, where the
    sublattice L and the boundary lattice B are given by generating vectors.

    Provides classify (ambient vector -> normal form in the quotient) and
    representative (normal form -> ambient vector), the presentation engine
    behind all Tate and hypercohomology groups.
    """

    __slots__ = ("ambient_dim", "L", "group", "_Lmat")

    def __init__(self, ambient_dim, sub_gens, bdry_gens, rel_gens=()):
        self.ambient_dim = ambient_dim
        sub = [tuple(v) for v in sub_gens]
        # Column-reduce the subgens to a basis via SNF image computation.
        M = lattice_membership_matrix(sub, ambient_dim)
        basis = hnf_image_basis(M)
        self._Lmat = lattice_membership_matrix(basis, ambient_dim)
        self.L = basis
        rels_in_L = []
        for v in list(bdry_gens) + list(rel_gens):
            c = solve_integer(self._Lmat, v)
            assert c is not None, "boundary vector outside the cycle lattice"
            rels_in_L.append(c)
        R = lattice_membership_matrix(rels_in_L, len(basis))
        self.group = FGAbelian(len(basis), R)

    def classify(self, vec):
        """Normal form of a vector of the sublattice; None if outside it."""
        c = solve_integer(self._Lmat, vec)
        if c is None:
            return None
        return self.group.nf(c)

    def representative(self, coords):
        c = self.group.lift(coords)
        return self._Lmat.apply(c)

    def elements(self):
        return self.group.elements()

    @property
    def order(self):
        return self.group.order
