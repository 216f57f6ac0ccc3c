"""Group cohomology of finite groups with f.g. abelian coefficients, Tate
groups H^n for n in {-1, 0, 1, 2}, cup products, hypercohomology of a
two-term complex T -> U, and finite-support chains with their homology
differential and coinflation.

Cochains are full tables on Q^n; every computed H^1/H^2 class carries a
normalized representative (vanishing when any argument is the identity) so
central extensions built from representatives are canonical.
"""

from __future__ import annotations

import itertools

from .lattice import (
    IntMatrix,
    FGAbelian,
    Subquotient,
    kernel_basis,
)


class GModule:
    """Coefficient module for a finite group Q: an ambient Z^g, an optional
    relation matrix (columns), and one action matrix per group element."""

    __slots__ = ("group", "ngens", "rels", "mats")

    def __init__(self, group, ngens, rels, mats, check=True):
        self.group = group
        self.ngens = ngens
        self.rels = rels if rels is not None else IntMatrix.zero(ngens, 0)
        self.mats = tuple(mats)
        if check:
            assert len(mats) == group.order
            assert self.mats[0] == IntMatrix.identity(ngens)
            fg = FGAbelian(ngens, self.rels)
            for m in self.mats:
                for j in range(self.rels.cols):
                    img = m.apply(self.rels.column(j))
                    assert not any(fg.nf(img)), "action not defined mod relations"

    @classmethod
    def from_action(cls, action):
        return cls(action.group, action.rank, None, action.matrices, check=False)

    @classmethod
    def trivial_ints(cls, group):
        return cls(group, 1, None, [IntMatrix.identity(1)] * group.order, check=False)

    @classmethod
    def finite(cls, group, invariants, mats):
        """Finite module with given invariant factors (d_1, ..., d_g)."""
        g = len(invariants)
        rels = IntMatrix([[invariants[i] if i == j else 0 for j in range(g)]
                          for i in range(g)])
        return cls(group, g, rels, mats)

    def act(self, g, vec):
        return self.mats[g].apply(vec)

    def fg(self):
        return FGAbelian(self.ngens, self.rels)

    @property
    def is_lattice(self):
        return self.rels.cols == 0

    def zero(self):
        return (0,) * self.ngens


def tuples(group, n):
    return list(itertools.product(range(group.order), repeat=n))


class Cochain:
    """Inhomogeneous n-cochain on Q with values in a GModule, stored as a
    full table indexed by Q^n.  For n = 0 the table has the single key ()."""

    __slots__ = ("gmod", "degree", "table")

    def __init__(self, gmod, degree, table):
        self.gmod = gmod
        self.degree = degree
        self.table = dict(table)
        assert len(self.table) == gmod.group.order ** degree

    @classmethod
    def zero(cls, gmod, degree):
        z = gmod.zero()
        return cls(gmod, degree, {t: z for t in tuples(gmod.group, degree)})

    def __call__(self, *args):
        return self.table[tuple(args)]

    def is_normalized(self):
        if self.degree == 0:
            return True
        zero = self.gmod.zero()
        for t, v in self.table.items():
            if 0 in t and tuple(v) != zero:
                if any(self.gmod.fg().nf(v)):
                    return False
        return True

    def add(self, other):
        return Cochain(self.gmod, self.degree,
                       {t: tuple(a + b for a, b in zip(v, other.table[t]))
                        for t, v in self.table.items()})

    def sub(self, other):
        return Cochain(self.gmod, self.degree,
                       {t: tuple(a - b for a, b in zip(v, other.table[t]))
                        for t, v in self.table.items()})

    def neg(self):
        return Cochain(self.gmod, self.degree,
                       {t: tuple(-a for a in v) for t, v in self.table.items()})

    def d(self):
        """Coboundary: (dx)(g0..gn) = g0.x(g1..gn) + sum (-1)^i x(..gi gi+1..)
        + (-1)^(n+1) x(g0..gn-1)."""
        gm = self.gmod
        Q = gm.group
        n = self.degree
        out = {}
        for t in tuples(Q, n + 1):
            acc = list(gm.act(t[0], self.table[t[1:]]))
            sign = -1
            for i in range(n):
                merged = t[:i] + (Q.mul(t[i], t[i + 1]),) + t[i + 2:]
                v = self.table[merged]
                acc = [a + sign * b for a, b in zip(acc, v)]
                sign = -sign
            v = self.table[t[:-1]]
            acc = [a + sign * b for a, b in zip(acc, v)]
            out[t] = tuple(acc)
        return Cochain(gm, n + 1, out)

    def to_vector(self):
        ts = tuples(self.gmod.group, self.degree)
        out = []
        for t in ts:
            out.extend(self.table[t])
        return tuple(out)

    @classmethod
    def from_vector(cls, gmod, degree, vec):
        ts = tuples(gmod.group, degree)
        g = gmod.ngens
        table = {t: tuple(vec[i * g:(i + 1) * g]) for i, t in enumerate(ts)}
        return cls(gmod, degree, table)


_d_matrix_cache = {}


def d_matrix(gmod, n):
    """Matrix of the coboundary C^n -> C^(n+1) on ambient coordinates."""
    key = (gmod.group.table, gmod.rels.data,
           tuple(m.data for m in gmod.mats), n)
    hit = _d_matrix_cache.get(key)
    if hit is not None:
        return hit
    g = gmod.ngens
    src = tuples(gmod.group, n)
    cols = []
    for i, t in enumerate(src):
        for k in range(g):
            x = Cochain.zero(gmod, n)
            v = [0] * g
            v[k] = 1
            x.table[t] = tuple(v)
            cols.append(x.d().to_vector())
    dim_out = g * gmod.group.order ** (n + 1)
    M = IntMatrix.from_columns(cols, dim_out) if cols else IntMatrix.zero(dim_out, 0)
    _d_matrix_cache[key] = M
    return M


def _block_diag_rels(gmod, n):
    """Relation columns of C^n = (ambient module)^(Q^n)."""
    g = gmod.ngens
    cnt = gmod.group.order ** n
    cols = []
    for i in range(cnt):
        for j in range(gmod.rels.cols):
            col = [0] * (g * cnt)
            rc = gmod.rels.column(j)
            for k in range(g):
                col[i * g + k] = rc[k]
            cols.append(col)
    return cols


def cocycle_sublattice(A, target_rel_cols):
    """Basis of {x : A x lies in the lattice spanned by target_rel_cols}."""
    if not target_rel_cols:
        return kernel_basis(A)
    R = IntMatrix.from_columns(target_rel_cols, A.rows)
    stacked = IntMatrix([[A.data[i][j] for j in range(A.cols)]
                         + [-R.data[i][j] for j in range(R.cols)]
                         for i in range(A.rows)])
    return [v[:A.cols] for v in kernel_basis(stacked)]


class CohomologyGroup:
    """H^n(Q, M) for n in {1, 2} with classify and representative maps."""

    def __init__(self, gmod, degree):
        self.gmod = gmod
        self.degree = degree
        dn = d_matrix(gmod, degree)
        rel_out = _block_diag_rels(gmod, degree + 1)
        zgens = cocycle_sublattice(dn, rel_out)
        rel_here = _block_diag_rels(gmod, degree)
        dprev = d_matrix(gmod, degree - 1)
        bdry = [dprev.column(j) for j in range(dprev.cols)] + rel_here
        dim = gmod.ngens * gmod.group.order ** degree
        self.sq = Subquotient(dim, zgens + rel_here, bdry)
        self.group = self.sq.group

    @property
    def order(self):
        return self.group.order

    def classify(self, cochain):
        assert cochain.degree == self.degree
        return self.sq.classify(cochain.to_vector())

    def representative(self, coords):
        vec = self.sq.representative(coords)
        x = Cochain.from_vector(self.gmod, self.degree, vec)
        return normalize_cocycle(x)

    def elements(self):
        return self.group.elements()


def normalize_cocycle(x):
    """Shift a 1- or 2-cocycle by a coboundary so it vanishes whenever an
    argument is the identity.  Degree-1 cocycles are automatically
    normalized; degree 2 uses the constant cochain c = x(1,1)."""
    if x.degree != 2:
        return x
    gm = x.gmod
    c0 = x.table[(0, 0)]
    if all(v == 0 for v in c0):
        return x
    shift = Cochain(gm, 1, {(g,): c0 for g in range(gm.group.order)})
    return x.sub(shift.d())


def tate_minus1(gmod):
    """H^-1 = ker(norm) / augmentation submodule, as a Subquotient of the
    ambient module."""
    g = gmod.ngens
    Q = gmod.group
    norm = IntMatrix.zero(g, g)
    for s in range(Q.order):
        norm = norm + gmod.mats[s]
    zgens = cocycle_sublattice(norm, list(gmod.rels.columns()))
    bdry = []
    ident = IntMatrix.identity(g)
    for s in range(Q.order):
        m = gmod.mats[s] - ident
        bdry.extend(m.columns())
    bdry.extend(gmod.rels.columns())
    return Subquotient(g, zgens + list(gmod.rels.columns()), bdry)


def tate_zero(gmod):
    """H^0 = invariants / image of the norm."""
    g = gmod.ngens
    Q = gmod.group
    ident = IntMatrix.identity(g)
    stacked_rows = []
    for s in range(Q.order):
        m = gmod.mats[s] - ident
        stacked_rows.extend(m.data)
    A = IntMatrix(stacked_rows)
    rel_target = []
    for j in range(gmod.rels.cols):
        rc = gmod.rels.column(j)
        for s in range(Q.order):
            col = [0] * (g * Q.order)
            for k in range(g):
                col[s * g + k] = rc[k]
            rel_target.append(col)
    zgens = cocycle_sublattice(A, rel_target)
    norm = IntMatrix.zero(g, g)
    for s in range(Q.order):
        norm = norm + gmod.mats[s]
    bdry = list(norm.columns()) + list(gmod.rels.columns())
    return Subquotient(g, zgens + list(gmod.rels.columns()), bdry)


def tate_group(gmod, n):
    """Tate cohomology in degree n of a finite group with f.g. coefficients.

    Degrees -1 and 0 return Subquotients of the ambient module; degrees 1
    and 2 return CohomologyGroup objects with cochain classify and
    normalized representatives.
    """
    if n == -1:
        return tate_minus1(gmod)
    if n == 0:
        return tate_zero(gmod)
    if n in (1, 2):
        return CohomologyGroup(gmod, n)
    raise ValueError("degree outside {-1, 0, 1, 2}: %r" % (n,))


def cup(x, y, pairing, out_gmod):
    """Cup product of cochains: (x u y)(g_1..g_{p+q}) =
    pairing(x(g_1..g_p), (g_1...g_p) . y(g_{p+1}..g_{p+q})) in out_gmod.

    `pairing` takes (value of x, value of y) to a value of out_gmod and must
    be bi-additive and equivariant for the three actions.
    """
    Q = x.gmod.group
    p, q = x.degree, y.degree
    out = {}
    for t in tuples(Q, p + q):
        left = t[:p]
        g = 0
        for s in left:
            g = Q.mul(g, s)
        yv = y.gmod.act(g, y.table[t[p:]])
        out[t] = pairing(x.table[left], yv)
    return Cochain(out_gmod, p + q, out)


class TwoTermComplex:
    """Complex T --f--> U of GModules for the same group, f equivariant."""

    __slots__ = ("T", "U", "f")

    def __init__(self, T, U, f):
        assert T.group.table == U.group.table, "complex needs one group"
        assert f.rows == U.ngens and f.cols == T.ngens
        for s in range(T.group.order):
            assert f * T.mats[s] == U.mats[s] * f, "f must be equivariant"
        self.T = T
        self.U = U
        self.f = f


class HyperH1:
    """H^1(Q, T -> U): pairs (z, c) with z in Z^1(Q, T), c in U, and
    f(z(s)) = s.c - c, modulo the boundaries (dt, f(t)) for t in T."""

    def __init__(self, cx):
        self.cx = cx
        gT, gU = cx.T.ngens, cx.U.ngens
        Q = cx.T.group
        N = Q.order
        d1 = d_matrix(cx.T, 1)  # C^1(T) -> C^2(T)
        d0U = d_matrix(cx.U, 0)  # U -> C^1(U)
        # F: C^1(T) -> C^1(U) applying f pointwise
        dimT1 = gT * N
        dimU1 = gU * N
        rows = [[0] * (dimT1 + gU) for _ in range(d1.rows + dimU1)]
        for i in range(d1.rows):
            for j in range(dimT1):
                rows[i][j] = d1.data[i][j]
        for blk in range(N):
            for r in range(gU):
                for c in range(gT):
                    rows[d1.rows + blk * gU + r][blk * gT + c] = cx.f.data[r][c]
            for r in range(gU):
                for c in range(gU):
                    rows[d1.rows + blk * gU + r][dimT1 + c] = -d0U.data[blk * gU + r][c]
        A = IntMatrix(rows)
        rel_target = _block_diag_rels(cx.T, 2)
        relU1 = _block_diag_rels(cx.U, 1)
        padded = [list(col) + [0] * dimU1 for col in rel_target]
        padded += [[0] * d1.rows + list(col) for col in relU1]
        zgens = cocycle_sublattice(A, padded)
        # boundaries (d0 t, f t)
        d0T = d_matrix(cx.T, 0)
        bdry = []
        for j in range(gT):
            col = list(d0T.column(j)) + list(cx.f.column(j))
            bdry.append(col)
        relT1 = _block_diag_rels(cx.T, 1)
        rel_here = [list(c) + [0] * gU for c in relT1]
        rel_here += [[0] * dimT1 + list(c) for c in _block_diag_rels(cx.U, 0)]
        self.sq = Subquotient(dimT1 + gU, zgens + rel_here, bdry + rel_here)
        self.group = self.sq.group
        self._dims = (dimT1, gU)

    @property
    def order(self):
        return self.group.order

    def is_pair(self, z, c):
        """Check the defining relation f(z(s)) = s.c - c and dz = 0, both in
        the quotient modules."""
        cx = self.cx
        fgT = cx.T.fg()
        for val in z.d().table.values():
            if any(fgT.nf(val)):
                return False
        fgU = cx.U.fg()
        for s in range(cx.T.group.order):
            lhs = cx.f.apply(z.table[(s,)])
            rhs = tuple(a - b for a, b in zip(cx.U.act(s, c), c))
            if any(fgU.nf(tuple(x - y for x, y in zip(lhs, rhs)))):
                return False
        return True

    def classify(self, z, c):
        assert self.is_pair(z, c), "not a hypercocycle for this complex"
        vec = tuple(z.to_vector()) + tuple(c)
        return self.sq.classify(vec)

    def representative(self, coords):
        vec = self.sq.representative(coords)
        dimT1, gU = self._dims
        z = Cochain.from_vector(self.cx.T, 1, vec[:dimT1])
        c = tuple(vec[dimT1:])
        return z, c

    def elements(self):
        return self.group.elements()

    def verify_exactness(self):
        """Exactness at this node of the long sequence
        H^0(U) -> H^1(T -> U) -> H^1(T) -> H^1(U): the kernel of the map to
        H^1(T) equals the image of the invariants of U, and the composite
        into H^1(U) vanishes.  Checked on generators via integer solving."""
        from .lattice import solve_integer

        cx = self.cx
        H1T = CohomologyGroup(cx.T, 1)
        H1U = CohomologyGroup(cx.U, 1)
        ngen = len(self.group.torsion) + self.group.free_rank

        def gen_coords(i):
            return tuple(1 if k == i else 0 for k in range(ngen))

        j_cols = []
        for i in range(ngen):
            z, c = self.representative(gen_coords(i))
            j_cols.append(H1T.classify(z))
            fz = Cochain(cx.U, 1, {k: cx.f.apply(v)
                                   for k, v in z.table.items()})
            if any(H1U.classify(fz)):
                return False  # composite into H^1(U) must vanish
        # classes of (0, u) for a basis of the invariants of U
        rowsU = []
        ident = IntMatrix.identity(cx.U.ngens)
        for s in range(cx.U.group.order):
            rowsU.extend((cx.U.mats[s] - ident).data)
        inv_basis = cocycle_sublattice(IntMatrix(rowsU),
                                       _block_diag_rels(cx.U, 1))
        z0 = Cochain.zero(cx.T, 1)
        from_h0 = [self.classify(z0, tuple(u)) for u in inv_basis]
        for cls in from_h0:
            z, _ = self.representative(cls)
            if any(H1T.classify(z)):
                return False  # image of H^0(U) must die in H^1(T)
        # kernel of j as a lattice in generator coefficients: J x = 0 modulo
        # the moduli of H^1(T) and of this group
        width = len(H1T.group.torsion) + H1T.group.free_rank
        if ngen == 0:
            return True
        if width == 0:
            kern = [gen_coords(i) for i in range(ngen)]
        else:
            J = IntMatrix([[j_cols[i][r] for i in range(ngen)]
                           for r in range(width)])
            moduli = []
            for r, d in enumerate(H1T.group.torsion):
                col = [0] * width
                col[r] = d
                moduli.append(tuple(col))
            kern = cocycle_sublattice(J, moduli)
        own_moduli = []
        for r, d in enumerate(self.group.torsion):
            col = [0] * ngen
            col[r] = d
            own_moduli.append(tuple(col))
        # every kernel generator must be a combination of H^0(U)-images
        span_cols = [list(g) for g in from_h0] + [list(c) for c in own_moduli]
        for v in kern:
            target = self.group.nf(self.group.lift(tuple(v)))
            if not span_cols:
                if any(target):
                    return False
                continue
            A = IntMatrix.from_columns(span_cols, ngen)
            if solve_integer(A, target) is None:
                return False
        return True


def hyper_h1(cx):
    return HyperH1(cx)


def enumerate_h_classes(gmod, degree, limit=200000):
    """Independent oracle for H^1/H^2 of a *finite* coefficient module:
    enumerate every cochain table, filter cocycles, and count classes as
    orbits under coboundary shifts.  Exponential; guarded by `limit` on the
    number of tables.  Cross-validates the SNF route."""
    import itertools as it

    assert degree in (1, 2)
    fg = gmod.fg()
    assert fg.free_rank == 0, "enumeration needs a finite module"
    elements = [fg.lift(c) for c in fg.elements()]
    N = gmod.group.order
    keys = tuples(gmod.group, degree)
    if len(elements) ** len(keys) > limit:
        raise ValueError("enumeration space too large")

    def is_cocycle(table):
        x = Cochain(gmod, degree, dict(zip(keys, table)))
        return all(not any(fg.nf(v)) for v in x.d().table.values())

    cocycles = [table for table in it.product(elements, repeat=len(keys))
                if is_cocycle(table)]
    cokeys = tuples(gmod.group, degree - 1)
    shifts = set()
    for lower in it.product(elements, repeat=len(cokeys)):
        x = Cochain(gmod, degree - 1, dict(zip(cokeys, lower)))
        d = x.d()
        shifts.add(tuple(fg.nf(d.table[k]) for k in keys))
    classes = set()
    for z in cocycles:
        canon = min(
            tuple(fg.nf(tuple(a + b for a, b in zip(v, fg.lift(s))))
                  for v, s in zip(z, shift))
            for shift in shifts)
        classes.add(canon)
    return len(classes)


# ---------------------------------------------------------------------------
# finite-support chains


class ChainDomain:
    """Domain of chain groups: a group W (possibly infinite) acting on a
    coefficient lattice through a finite quotient."""

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    one = None

    def act(self, w, vec):
        raise NotImplementedError


class ZDomain(ChainDomain):
    """The model Weil group W = Z mapping onto Q = Z/n; w acts on the
    coefficient lattice through sigma^w."""

    def __init__(self, n, sigma_matrix):
        self.n = n
        self.one = 0
        self.rank = sigma_matrix.rows
        mats = [IntMatrix.identity(self.rank)]
        for _ in range(n - 1):
            mats.append(sigma_matrix * mats[-1])
        assert sigma_matrix * mats[-1] == mats[0], "matrix order must divide n"
        self.mats = mats

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def act(self, w, vec):
        return self.mats[w % self.n].apply(vec)


class FiniteDomain(ChainDomain):
    """A finite group W with an action on the coefficient lattice."""

    def __init__(self, group, mats):
        self.group = group
        self.one = 0
        self.mats = mats

    def mul(self, a, b):
        return self.group.mul(a, b)

    def inv(self, a):
        return self.group.inv(a)

    def act(self, w, vec):
        return self.mats[w].apply(vec)


class FiniteSupportChain:
    """Degree-n chain: a finite-support map W^n -> Z^r."""

    __slots__ = ("domain", "degree", "rank", "support")

    def __init__(self, domain, degree, rank, support=None):
        self.domain = domain
        self.degree = degree
        self.rank = rank
        self.support = {}
        for k, v in (support or {}).items():
            v = tuple(v)
            if any(v):
                self.support[tuple(k)] = v

    def value(self, key):
        return self.support.get(tuple(key), (0,) * self.rank)

    def add_into(self, key, vec):
        key = tuple(key)
        cur = self.support.get(key, (0,) * self.rank)
        new = tuple(a + b for a, b in zip(cur, vec))
        if any(new):
            self.support[key] = new
        elif key in self.support:
            del self.support[key]

    def add(self, other):
        out = FiniteSupportChain(self.domain, self.degree, self.rank, self.support)
        for k, v in other.support.items():
            out.add_into(k, v)
        return out

    def neg(self):
        return FiniteSupportChain(
            self.domain, self.degree, self.rank,
            {k: tuple(-a for a in v) for k, v in self.support.items()})

    def boundary(self):
        """The three-term alternating-sum homology differential."""
        W = self.domain
        n = self.degree
        assert n >= 1
        out = FiniteSupportChain(W, n - 1, self.rank)
        for key, val in self.support.items():
            # first term: x^-1 . y(x, w_1..w_{n-1}) collected at (w_1..w_{n-1})
            x = key[0]
            out.add_into(key[1:], W.act(W.inv(x), val))
            # middle terms: (-1)^i at (w_1,..,w_{i-1}, w_i x^-1 twist..)
            sign = -1
            for i in range(1, n):
                # term i merges slots i and i+1: contributes y(..u, v..) to the
                # tuple with w_i = u v
                merged = key[:i - 1] + (W.mul(key[i - 1], key[i]),) + key[i + 1:]
                out.add_into(merged, tuple(sign * a for a in val))
                sign = -sign
            # last term: (-1)^n at (w_1..w_{n-1})
            out.add_into(key[:-1], tuple(sign * a for a in val))
        return out


def coinflation(chain, projection, target_domain):
    """Push a chain along w -> projection(w) coordinatewise: the value of the
    image at a tuple is the sum over the fiber, which for finite-support
    chains is the pushforward of the support."""
    out = FiniteSupportChain(target_domain, chain.degree, chain.rank)
    for key, val in chain.support.items():
        out.add_into(tuple(projection(w) for w in key), val)
    return out


def coinflation_pointwise(chain, fibers, target_domain, keys):
    """Evaluate coinflation at given keys by explicit fiber enumeration.

    `fibers` maps a target element to the finite list of its preimages;
    a missing or infinite fiber on the support is rejected.
    """
    out = FiniteSupportChain(target_domain, chain.degree, chain.rank)
    for key in keys:
        fib_lists = []
        for w in key:
            f = fibers(w)
            if f is None:
                raise ValueError("infinite fiber over %r" % (w,))
            fib_lists.append(list(f))
        total = (0,) * chain.rank
        for lifted in itertools.product(*fib_lists):
            total = tuple(a + b for a, b in zip(total, chain.value(lifted)))
        out.add_into(key, total)
    return out
