"""Finite computational model of an unramified nonarchimedean situation:
the model Weil group W = Z mapping onto a cyclic Q = Z/n with fundamental
2-cocycle c(i, j) = floor((i+j)/n), a torus given by its cocharacter
lattice with commuting Galois and component-group actions, and the exact
pairings living on this data.

Point models: K-points of the torus are X itself (valuations), points over
the algebraic closure are X (x) Q, F-points are the Galois invariants X^Q.
Dual-torus points are homomorphisms X -> Q/Z of finite order.

Sign conventions (recorded once, used everywhere):
  * the chain map `chain_map_phi` carries the built-in negation that turns
    the elementary pairing into the plain Langlands pairing on the
    H^0(U)-edge (the two negations cancel);
  * the invariant of a commuting pair (z, delta) for an automorphism a is
    the class of (-z, delta) on the complex with map 1 - a.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .lattice import IntMatrix, solve_integer, unimodular_inverse
from .qz import QZ, qz_sum
from .cohomology import (
    GModule,
    Cochain,
    d_matrix,
    ZDomain,
    FiniteSupportChain,
)


class LiftNotFound(RuntimeError):
    """The integer system behind a chain-level lift has no solution; the
    input is outside the model's image (or malformed)."""


class LocalModel:
    """Q = Z/n with marked generator sigma (the Frobenius image) and the
    fundamental 2-cocycle c(sigma^i, sigma^j) = floor((i + j)/n) valued in
    Z = the valuation model of K^x."""

    __slots__ = ("n",)

    def __init__(self, n):
        assert n >= 1
        self.n = n

    def c(self, i, j):
        n = self.n
        return ((i % n) + (j % n)) // n

    def fundamental_cochain(self, group_module):
        tab = {(i, j): (self.c(i, j),)
               for i in range(self.n) for j in range(self.n)}
        return Cochain(group_module, 2, tab)


class TorusModel:
    """Cocharacter lattice X with a Q-action (through the marked generator)
    and a commuting action of a finite component group A."""

    __slots__ = ("model", "galois", "comp", "rank", "_galois_dualT", "_comp_dualT")

    def __init__(self, model, galois_action, comp_action=None):
        assert galois_action.group.order == model.n
        self.model = model
        self.galois = galois_action
        self.comp = comp_action
        self.rank = galois_action.rank
        if comp_action is not None:
            assert comp_action.rank == galois_action.rank
            assert galois_action.commutes_with(comp_action), \
                "Galois and component actions must commute"
        self._galois_dualT = tuple(
            unimodular_inverse(m).transpose() for m in galois_action.matrices)
        self._comp_dualT = None if comp_action is None else tuple(
            unimodular_inverse(m).transpose() for m in comp_action.matrices)

    def gmodule(self):
        return GModule.from_action(self.galois)

    def sigma(self, i, vec):
        """Action of sigma^i on X."""
        return self.galois.act(i % self.model.n, vec)

    def comp_act(self, a, vec):
        return self.comp.act(a, vec)

    # dual-torus points: tuples of QZ, one per basis vector of X
    def dual_zero(self):
        return (QZ(0),) * self.rank

    def dual_eval(self, s, vec):
        """Evaluate s in Hom(X, Q/Z) at an integer vector."""
        return qz_sum(x * q for q, x in zip(s, vec))

    def dual_eval_rational(self, s, vec):
        """Q-linear extension: evaluate the canonical [0,1)-lift of s at a
        rational vector, then reduce mod 1.  Restricting to integer vectors
        recovers dual_eval."""
        total = Fraction(0)
        for q, x in zip(s, vec):
            total += q.frac * Fraction(x)
        return QZ(total)

    def dual_sigma(self, i, s):
        """Galois action on the dual torus: (sigma.s)(x) = s(sigma^-1 x)."""
        m = self._galois_dualT[i % self.model.n]
        return tuple(qz_sum(row[j] * s[j] for j in range(self.rank))
                     for row in m.data)

    def dual_comp(self, a, s):
        m = self._comp_dualT[a]
        return tuple(qz_sum(row[j] * s[j] for j in range(self.rank))
                     for row in m.data)

    def dual_add(self, s, t):
        return tuple(a + b for a, b in zip(s, t))

    def dual_sub(self, s, t):
        return tuple(a - b for a, b in zip(s, t))

    def dual_compose(self, s, mat):
        """s composed with an integer matrix: (s o m)(x) = s(m x)."""
        mt = mat.transpose()
        return tuple(qz_sum(row[j] * s[j] for j in range(self.rank))
                     for row in mt.data)

    def invariant_lattice(self):
        """Basis of X^Q."""
        from .lattice import kernel_basis

        rows = []
        ident = IntMatrix.identity(self.rank)
        for m in self.galois.matrices[1:]:
            rows.extend((m - ident).data)
        if not rows:
            return [tuple(ident.column(j)) for j in range(self.rank)]
        return kernel_basis(IntMatrix(rows))

    def norm_matrix(self):
        N = IntMatrix.zero(self.rank, self.rank)
        for m in self.galois.matrices:
            N = N + m
        return N


class Parameter:
    """Unramified Langlands parameter: a 1-cocycle of Q valued in the
    torsion points of the dual torus, determined by its value psi at the
    marked generator; the cocycle condition is N(psi) = 0 for the dual
    action."""

    __slots__ = ("torus", "psi", "table")

    def __init__(self, torus, psi):
        self.torus = torus
        self.psi = tuple(QZ(q) for q in psi)
        n = torus.model.n
        tab = {0: torus.dual_zero()}
        for i in range(1, n):
            tab[i] = torus.dual_add(tab[i - 1],
                                    torus.dual_sigma(i - 1, self.psi))
        self.table = tab
        total = torus.dual_add(tab[n - 1], torus.dual_sigma(n - 1, self.psi))
        assert all(q.is_zero() for q in total), \
            "value at the generator must have zero norm (cocycle identity)"

    def value(self, i):
        return self.table[i % self.torus.model.n]

    def value_on_w(self, w):
        """Inflation to the model Weil group W = Z."""
        return self.table[w % self.torus.model.n]

    def neg(self):
        return Parameter(self.torus, tuple(-q for q in self.psi))

    def act_comp(self, a):
        return Parameter(self.torus, self.torus.dual_comp(a, self.psi))


def tn_iso(torus, lam):
    """Tate-Nakayama map on a norm-zero lattice element:
    z(sigma^i) = sum_j c(i, j) * sigma^(i+j)(lam), a 1-cocycle of Q."""
    model = torus.model
    N = torus.norm_matrix()
    assert all(v == 0 for v in N.apply(lam)), "input must have zero norm"
    gm = torus.gmodule()
    tab = {}
    for i in range(model.n):
        acc = (0,) * torus.rank
        for j in range(model.n):
            cij = model.c(i, j)
            if cij:
                v = torus.sigma(i + j, lam)
                acc = tuple(a + cij * b for a, b in zip(acc, v))
        tab[(i,)] = acc
    return Cochain(gm, 1, tab)


def _cup_matrix(torus):
    """Matrix of lam -> tn_iso(lam) as a map X -> C^1(Q, X) (ambient)."""
    r = torus.rank
    model = torus.model
    cols = []
    for k in range(r):
        e = tuple(1 if i == k else 0 for i in range(r))
        col = []
        for i in range(model.n):
            acc = [0] * r
            for j in range(model.n):
                cij = model.c(i, j)
                if cij:
                    v = torus.sigma(i + j, e)
                    acc = [a + cij * b for a, b in zip(acc, v)]
            col.extend(acc)
        cols.append(tuple(col))
    return IntMatrix.from_columns(cols, r * model.n)


def tn_inverse(torus, z):
    """Inverse of tn_iso on classes: the canonical norm-zero lam with
    tn_iso(lam) cohomologous to z.  Raises LiftNotFound when z is not a
    cocycle class hit by the map (never, by bijectivity, for valid input)."""
    r = torus.rank
    model = torus.model
    CUP = _cup_matrix(torus)
    gm = torus.gmodule()
    D0 = d_matrix(gm, 0)
    N = torus.norm_matrix()
    # unknowns (lam, x): CUP lam - D0 x = z, N lam = 0
    rows = []
    for i in range(CUP.rows):
        rows.append(list(CUP.data[i]) + [-v for v in D0.data[i]])
    for i in range(r):
        rows.append(list(N.data[i]) + [0] * r)
    A = IntMatrix(rows)
    target = list(z.to_vector()) + [0] * r
    sol = solve_integer(A, target)
    if sol is None:
        raise LiftNotFound("no norm-zero preimage under the TN map")
    return tuple(sol[:r])


def kottwitz_character(torus, z, s):
    """The character of the component group of the Galois-fixed dual torus
    attached to a cocycle class: value s(lam_z) where lam_z inverts the TN
    map.  Accepts z as a Cochain or a precomputed norm-zero lam."""
    lam = z if isinstance(z, tuple) else tn_inverse(torus, z)
    return torus.dual_eval(s, lam)


def langlands_character(torus, phi, vec):
    """Single-Frobenius evaluation: the character of X^Q (the F-points
    model) attached to an unramified parameter, extended Q-linearly to
    rational invariant vectors via the canonical [0,1)-lift."""
    if all(isinstance(x, int) for x in vec):
        return torus.dual_eval(phi.value(1), vec)
    return torus.dual_eval_rational(phi.value(1), vec)


def chain_map_phi(torus, mu1):
    """Model of the restriction-to-kernel chain map C_1(W, X) -> X = U(K):

        phi(mu1) = - sum_{i in [0,n)} sum_w sigma^i(mu1(w)) *
                     (c(i, w mod n) + (w - w mod n)/n).

    The leading minus is the negation of the Langlands isomorphism noted in
    the module docstring."""
    model = torus.model
    n = model.n
    acc = (0,) * torus.rank
    for (w,), val in mu1.support.items():
        j = w % n
        base = (w - j) // n
        for i in range(n):
            factor = model.c(i, j) + base
            if factor:
                v = torus.sigma(i, val)
                acc = tuple(a - factor * b for a, b in zip(acc, v))
    return acc


def _phi_matrix(torus, window):
    """Matrix of chain_map_phi on chains supported on the given window."""
    r = torus.rank
    cols = []
    dom = ZDomain(torus.model.n, torus.galois.matrices[1]
                  if torus.model.n > 1 else IntMatrix.identity(r))
    for w in window:
        for k in range(r):
            e = [0] * r
            e[k] = 1
            mu = FiniteSupportChain(dom, 1, r, {(w,): tuple(e)})
            cols.append(chain_map_phi(torus, mu))
    return IntMatrix.from_columns(cols, r)


def _boundary_matrix(torus, window):
    """Matrix of the degree-1 homology differential on the window:
    mu -> sum_w (sigma^-w - 1) mu(w)."""
    r = torus.rank
    cols = []
    for w in window:
        for k in range(r):
            e = tuple(1 if i == k else 0 for i in range(r))
            v = torus.sigma(-w, e)
            cols.append(tuple(a - b for a, b in zip(v, e)))
    return IntMatrix.from_columns(cols, r)


def elementary_pairing(torus, dual_pair, chain_pair):
    """The chain-level pairing

        <(d, s), (lam, mu1)>  =  s(lam) - sum_w d(w)(mu1(w))

    between a dual-side hypercocycle (d an unramified dual cocycle given by
    a Parameter, s a dual point) and a chain-side hypercycle (lam a
    norm-zero lattice element, mu1 a finite-support 1-chain)."""
    d, s = dual_pair
    lam, mu1 = chain_pair
    total = torus.dual_eval(s, lam)
    for (w,), val in mu1.support.items():
        total = total - torus.dual_eval(d.value_on_w(w), val)
    return total


def validate_hyper_pair_dual(torus, fT, d, s):
    """Check (d, s) on the dual complex: s.sigma - s = d(sigma) o fT."""
    n = torus.model.n
    for i in range(n):
        lhs = torus.dual_sub(torus.dual_sigma(i, s), s)
        rhs = torus.dual_compose(d.value(i), fT)
        if any(not (a - b).is_zero() for a, b in zip(lhs, rhs)):
            return False
    return True


def hyper_pairing(torus, fT, pair_T, dual_pair, check=True):
    """Pairing of a class in H^1(Q, T --fT--> T) against a class on the
    dual complex, computed by lifting the T-side class through the
    chain-level maps and applying the elementary pairing.

    pair_T = (u, v): u a 1-cocycle of Q in X (a Cochain), v a vector over X
    (integers or Fractions) with fT(u(s)) = s.v - v.
    dual_pair = (d, s): d a Parameter-like dual cocycle, s a dual point with
    s.sigma - s = d(sigma) o fT.

    The lift solves, over Z (after clearing the denominator D of v):
        N lam = 0,
        cup(lam) - d0(t) = u,
        boundary(mu1) = fT lam,
        D*phi(mu1) - fT(p) = D*v      (t = p/D),
    with mu1 supported on a finite window, then evaluates
        s(lam) - sum_w d(w)(mu1(w)).
    """
    u, v = pair_T
    d, s = dual_pair
    r = torus.rank
    model = torus.model
    n = model.n
    v = tuple(Fraction(x) for x in v)
    D = lcm(*[f.denominator for f in v]) if v else 1
    if check:
        assert _check_pair_T(torus, fT, u, v), "T-side pair not a hypercocycle"
        assert validate_hyper_pair_dual(torus, fT, d, s), \
            "dual-side pair not on the dual complex"

    gm = torus.gmodule()
    CUP = _cup_matrix(torus)
    D0 = d_matrix(gm, 0)
    N = torus.norm_matrix()

    for halfwidth in (n, 2 * n, 4 * n):
        window = list(range(-halfwidth, halfwidth))
        PHI = _phi_matrix(torus, window)
        BD = _boundary_matrix(torus, window)
        ncols_mu = r * len(window)
        rows = []
        target = []
        # N lam = 0
        for i in range(r):
            rows.append(list(N.data[i]) + [0] * r + [0] * ncols_mu)
            target.append(0)
        # CUP lam - D0 p ... note t integral when D == 1; use p = D t
        # CUP lam - (1/D) D0 p = u  ->  D CUP lam - D0 p = D u
        for i in range(CUP.rows):
            rows.append([D * x for x in CUP.data[i]]
                        + [-x for x in D0.data[i]] + [0] * ncols_mu)
        target.extend(D * x for x in u.to_vector())
        # BD mu - fT lam = 0
        for i in range(r):
            rows.append([-x for x in fT.data[i]] + [0] * r + list(BD.data[i]))
            target.append(0)
        # D PHI mu - fT p = D v
        for i in range(r):
            rows.append([0] * r + [-x for x in fT.data[i]]
                        + [D * x for x in PHI.data[i]])
            dv = D * v[i]
            assert dv.denominator == 1
            target.append(int(dv))
        A = IntMatrix(rows)
        sol = solve_integer(A, target)
        if sol is None:
            continue
        lam = tuple(sol[:r])
        dom = ZDomain(n, torus.galois.matrices[1] if n > 1
                      else IntMatrix.identity(r))
        mu = FiniteSupportChain(dom, 1, r)
        for wi, w in enumerate(window):
            mu.add_into((w,), tuple(sol[2 * r + wi * r: 2 * r + (wi + 1) * r]))
        return elementary_pairing(torus, (d, s), (lam, mu))
    raise LiftNotFound("no chain-level lift found for the hyper pairing input")


def _check_pair_T(torus, fT, u, v):
    for val in u.d().table.values():
        if any(val):
            return False
    n = torus.model.n
    for i in range(n):
        lhs = fT.apply(u.table[(i,)])
        m = torus.galois.matrices[i]
        sv = tuple(sum(Fraction(m.data[a][b]) * v[b] for b in range(torus.rank))
                   for a in range(torus.rank))
        rhs = tuple(x - y for x, y in zip(sv, v))
        if any(Fraction(x) != y for x, y in zip(lhs, rhs)):
            return False
    return True
