"""Emptiness gate: do n+1 forms in n+1 variables share a projective zero?

The decision runs at the classical Macaulay degree N = sum(e_j - 1) + 1.
If the forms have no common zero over the algebraic closure, every
degree-N monomial lies in the ideal, so the multiplication matrix
{m * g_j : deg m = N - e_j} has full column rank; conversely a common
zero x kills the full rank because X_j^N cannot vanish at x for every j.
Rank over F_q equals rank over any extension, so the verdict is
closure-correct.

A form that is identically zero imposes no condition: the remaining n
forms always meet in projective n-space, so the gate short-circuits to
"not empty" without building a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArityMismatch, EmptyInput, MixedFields
from .field import Field
from .poly import (CERTS, PolySystem, TestSystem, build_test_system,
                   monomial_index, monomials)


def macaulay_degree(degrees) -> int:
    degrees = list(degrees)
    if not degrees:
        raise EmptyInput("no degrees given")
    if any(e < 1 for e in degrees):
        raise ValueError("degrees must be positive")
    return sum(e - 1 for e in degrees) + 1


@dataclass(frozen=True)
class EmptinessVerdict:
    empty: bool
    rank: int
    degree: int
    nrows: int
    ncols: int


@dataclass(frozen=True)
class MacaulayInstance:
    """Multiplication matrix of a test system at its Macaulay degree.

    Columns are indexed by the degree-N monomials in canonical order; the
    rows are the coefficient vectors of m * g_j over all multiplier
    monomials m of degree N - deg(g_j).
    """

    degrees: tuple
    degree: int   # N = sum(e_j - 1) + 1
    ncols: int    # C(N + n, n)
    rows: tuple


def rank_mod_p(matrix, p: int) -> int:
    """Row-echelon rank of an integer matrix over the prime field F_p."""
    a = np.array(matrix, dtype=np.int64) % p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[r + 1:, c]
        hit = np.nonzero(col)[0]
        if hit.size:
            a[r + 1 + hit] = (a[r + 1 + hit] - np.outer(col[hit], a[r])) % p
        r += 1
        if r == nrows:
            break
    return r


def rank_over_field(rows, field: Field) -> int:
    """Rank of a dense matrix of element encodings over an arbitrary F_q."""
    if field.k == 1:
        if not rows:
            return 0
        return rank_mod_p(rows, field.p)
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.mul(inv, v) for v in a[r]]
        for i in range(r + 1, nrows):
            f = a[i][c]
            if f:
                row_r = a[r]
                a[i] = [field.sub(v, field.mul(f, w))
                        for v, w in zip(a[i], row_r)]
        r += 1
        if r == nrows:
            break
    return r


def macaulay_instance(ts: TestSystem) -> MacaulayInstance:
    """Build the degree-N multiplication matrix for a test system."""
    nvars = ts.nvars
    n_deg = macaulay_degree(ts.degrees)
    cols = monomial_index(nvars, n_deg)
    ncols = len(cols)
    rows = []
    for form, e in zip(ts.forms, ts.degrees):
        for mult in monomials(nvars, n_deg - e):
            row = [0] * ncols
            for exp, c in form.terms.items():
                target = tuple(a + b for a, b in zip(mult, exp))
                row[cols[target]] = c
            rows.append(row)
    return MacaulayInstance(degrees=tuple(ts.degrees), degree=n_deg,
                            ncols=ncols, rows=tuple(rows))


def projective_empty(ts: TestSystem) -> EmptinessVerdict:
    """Decide whether the test system's zero set in P^n is empty over the closure."""
    if len(ts.forms) != ts.nvars:
        raise ArityMismatch(
            f"{len(ts.forms)} forms in {ts.nvars} variables; need n+1 forms")
    for f in ts.forms:
        if f.field != ts.field:
            raise MixedFields("all forms must live in one field")
        if f.nvars != ts.nvars:
            raise ArityMismatch("form arity differs from the test system")
    n_deg = macaulay_degree(ts.degrees)
    if any(f.is_zero() for f in ts.forms):
        return EmptinessVerdict(empty=False, rank=0, degree=n_deg,
                                nrows=0, ncols=len(monomials(ts.nvars, n_deg)))
    inst = macaulay_instance(ts)
    rank = rank_over_field(inst.rows, ts.field)
    return EmptinessVerdict(empty=(rank == inst.ncols), rank=rank,
                            degree=inst.degree, nrows=len(inst.rows),
                            ncols=inst.ncols)


def certify(system: PolySystem, cert: str) -> bool:
    """True guarantees the certificate's geometric property for Z(f).

    False proves nothing: the underlying obstruction is a sufficient
    condition only.
    """
    return projective_empty(build_test_system(system, cert)).empty


def certify_all(system: PolySystem, certs=CERTS):
    return {cert: certify(system, cert) for cert in certs}
