from fractions import Fraction

from hypothesis import given, settings, strategies as st

from toruscheck.qz import QZ, Cyc, cyclotomic_poly, cyc_sum, cyc_div


def test_qz_basics():
    assert (QZ(1, 2) + QZ(1, 2)).is_zero()
    assert QZ(1, 3).order == 3
    assert 5 * QZ(1, 4) == QZ(1, 4)
    assert -QZ(1, 3) == QZ(2, 3)
    assert QZ(7, 3) == QZ(1, 3)


def test_cyclotomic_polys():
    assert list(cyclotomic_poly(1)) == [-1, 1]
    assert list(cyclotomic_poly(2)) == [1, 1]
    assert list(cyclotomic_poly(4)) == [1, 0, 1]
    assert list(cyclotomic_poly(6)) == [1, -1, 1]
    assert list(cyclotomic_poly(12)) == [1, 0, -1, 0, 1]


def test_cyc_root_sums():
    # 1 + zeta_3 + zeta_3^2 = 0
    s = cyc_sum(Cyc.root(QZ(k, 3)) for k in range(3))
    assert s.is_zero()
    # zeta_3 + zeta_3^2 = -1
    assert Cyc.root(QZ(1, 3)) + Cyc.root(QZ(2, 3)) == Cyc.integer(-1)
    # cross-level equality: e(1/2) = -1
    assert Cyc.root(QZ(1, 2)) == Cyc.integer(-1)
    # e(1/6) - e(1/3) - ... relations at level 6 hold exactly
    assert Cyc.root(QZ(1, 6)) == Cyc.root(QZ(1, 3)) + Cyc.integer(1)


def test_cyc_ring_ops():
    a = Cyc.root(QZ(1, 4))  # i
    assert a * a == Cyc.integer(-1)
    assert a.conj() * a == Cyc.integer(1)
    assert (a + a.conj()).is_zero()
    b = Cyc.rational(Fraction(1, 2)) * Cyc.integer(4)
    assert b == Cyc.integer(2)


def test_cyc_as_qz():
    assert Cyc.root(QZ(3, 8)).as_qz() == QZ(3, 8)
    assert Cyc.integer(1).as_qz() == QZ(0)
    assert (Cyc.root(QZ(1, 3)) + Cyc.root(QZ(2, 3))).as_qz() == QZ(1, 2)
    assert Cyc.integer(2).as_qz() is None


qz_values = st.builds(QZ, st.integers(-20, 20), st.integers(1, 12))
cyc_values = st.lists(
    st.tuples(qz_values, st.integers(-4, 4)), min_size=0, max_size=4,
).map(lambda ts: cyc_sum(Cyc.root(q, c) for q, c in ts))


@settings(max_examples=80, deadline=None)
@given(qz_values, qz_values, qz_values)
def test_qz_group_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a + (-a)).is_zero()
    assert a.order * a == QZ(0)


@settings(max_examples=60, deadline=None)
@given(cyc_values, cyc_values, cyc_values)
def test_cyc_ring_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert (x - x).is_zero()
    assert x.conj().conj() == x


@settings(max_examples=40, deadline=None)
@given(cyc_values, cyc_values)
def test_cyc_division_inverts_multiplication(x, y):
    if y.is_zero():
        return
    assert cyc_div(x * y, y) == x


def test_cyc_reduced_key_at_common_level():
    x = Cyc.root(QZ(1, 3)) + Cyc.root(QZ(2, 3))
    y = Cyc.integer(-1)
    assert x == y
    assert x.reduced_key(6) == y.reduced_key(6)
