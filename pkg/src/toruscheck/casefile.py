"""Declarative case files: one JSON document per case, schema-versioned.

Integers may be written as strings (required beyond 53 bits); values of
Q/Z are "p/q" strings.  Validation errors carry the offending field."""

from __future__ import annotations

import json
from fractions import Fraction

from .lattice import IntMatrix
from .qz import QZ
from .groups import FiniteGroup, GroupAction
from .cohomology import Cochain
from .weil import LocalModel, TorusModel, Parameter
from .suite import s3_action

SCHEMA_VERSION = 1


class CaseFileError(ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__("%s: %s" % (field, message))


def _as_int(v, field):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise CaseFileError(field, "expected an integer (or integer string)")
    try:
        return int(v)
    except ValueError:
        raise CaseFileError(field, "bad integer %r" % (v,))


def _as_matrix(v, field, size=None):
    if not isinstance(v, list) or not all(isinstance(r, list) for r in v):
        raise CaseFileError(field, "expected a matrix (list of rows)")
    rows = [[_as_int(x, field) for x in r] for r in v]
    m = IntMatrix(rows)
    if size is not None and (m.rows, m.cols) != (size, size):
        raise CaseFileError(field, "expected a %dx%d matrix" % (size, size))
    return m


def _as_qz(v, field):
    if isinstance(v, str):
        try:
            return QZ(Fraction(v))
        except (ValueError, ZeroDivisionError):
            raise CaseFileError(field, "bad rational %r" % (v,))
    if isinstance(v, int):
        return QZ(v)
    raise CaseFileError(field, "expected a 'p/q' string")


def _component_action(spec, rank):
    kind = spec.get("kind")
    if kind == "cyclic":
        order = _as_int(spec.get("order"), "component.order")
        m = _as_matrix(spec.get("matrix"), "component.matrix", rank)
        try:
            return GroupAction.cyclic(order, m)
        except AssertionError as e:
            raise CaseFileError("component.matrix", str(e))
    if kind == "s3":
        extra = rank - 2
        if extra < 0:
            raise CaseFileError("component", "s3 needs rank >= 2")
        return s3_action(extra_rank=extra)
    if kind == "trivial":
        return GroupAction.trivial(FiniteGroup.cyclic(1), rank)
    if kind == "table":
        table = spec.get("table")
        if not isinstance(table, list):
            raise CaseFileError("component.table", "expected a table")
        try:
            G = FiniteGroup([[_as_int(x, "component.table") for x in row]
                             for row in table])
        except AssertionError as e:
            raise CaseFileError("component.table", str(e))
        mats = spec.get("matrices")
        if not isinstance(mats, list) or len(mats) != G.order:
            raise CaseFileError("component.matrices",
                                "need one matrix per element")
        try:
            return GroupAction(G, [_as_matrix(m, "component.matrices", rank)
                                   for m in mats])
        except AssertionError as e:
            raise CaseFileError("component.matrices", str(e))
    raise CaseFileError("component.kind", "unknown kind %r" % (kind,))


def load_case(doc):
    """Build (torus, z, phi, extras) from a parsed JSON document."""
    if doc.get("schema") != SCHEMA_VERSION:
        raise CaseFileError("schema", "unsupported schema %r" % doc.get("schema"))
    rank = _as_int(doc.get("rank"), "rank")
    gal = doc.get("galois")
    if not isinstance(gal, dict):
        raise CaseFileError("galois", "expected an object")
    n = _as_int(gal.get("order"), "galois.order")
    gmat = _as_matrix(gal.get("matrix"), "galois.matrix", rank)
    try:
        galois = GroupAction.cyclic(n, gmat)
    except AssertionError as e:
        raise CaseFileError("galois.matrix", str(e))
    comp = _component_action(doc.get("component") or {"kind": "trivial"}, rank)
    try:
        torus = TorusModel(LocalModel(n), galois, comp)
    except AssertionError as e:
        raise CaseFileError("component", str(e))

    ztab = doc.get("z")
    if not isinstance(ztab, list) or len(ztab) != n:
        raise CaseFileError("z", "expected %d rows (one per sigma power)" % n)
    table = {}
    for i, row in enumerate(ztab):
        if not isinstance(row, list) or len(row) != rank:
            raise CaseFileError("z[%d]" % i, "expected %d entries" % rank)
        table[(i,)] = tuple(_as_int(x, "z[%d]" % i) for x in row)
    gm = torus.gmodule()
    z = Cochain(gm, 1, table)
    for key, val in z.d().table.items():
        if any(val):
            raise CaseFileError("z", "cocycle identity fails at %r" % (key,))

    phirow = doc.get("phi")
    if not isinstance(phirow, list) or len(phirow) != rank:
        raise CaseFileError("phi", "expected %d entries" % rank)
    psi = tuple(_as_qz(x, "phi") for x in phirow)
    try:
        phi = Parameter(torus, psi)
    except AssertionError as e:
        raise CaseFileError("phi", str(e))

    extras = {k: doc[k] for k in ("root_datum", "seed", "suite_size")
              if k in doc}
    return torus, z, phi, extras


def load_case_file(path):
    with open(path, "r", encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise CaseFileError("json", "line %d: %s" % (e.lineno, e.msg))
    return load_case(doc)


def encode_int(v):
    """Integers beyond 53-bit float safety are emitted as strings."""
    return v if abs(v) <= 2 ** 53 else str(v)


def encode_qz(q):
    return "%d/%d" % (q.frac.numerator, q.frac.denominator)


def encode_cyc(c):
    terms = []
    for q in sorted(c.terms, key=lambda t: t.sort_key()):
        coeff = c.terms[q]
        terms.append([encode_qz(q), "%d/%d" % (coeff.numerator,
                                               coeff.denominator)])
    return terms
