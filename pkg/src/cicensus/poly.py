"""Sparse homogeneous polynomials over F_q and the certificate systems.

A polynomial is a map from exponent vectors (tuples of length nvars whose
entries sum to the degree) to nonzero field-element encodings.  The
canonical term order is graded reverse lexicographic; within one degree
that is ascending lexicographic order on the reversed exponent vector,
so X_0^d always leads.

Degrees are tracked explicitly so that the zero polynomial keeps the
nominal degree of the construction that produced it (a Jacobian minor of
degree sigma may collapse to zero in small characteristic).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import (ArityMismatch, FormatError, IncompatibleFields,
                     IndexOutOfRange, InhomogeneousInput, PatternViolation,
                     UnsupportedCertificate)
from .field import Field, parse_field_spec

CERTS = ("stci", "ci", "nons", "irr")


def grevlex_key(exp):
    """Sorting key: ascending over this key lists terms leading-first."""
    return tuple(reversed(exp))


@functools.lru_cache(maxsize=None)
def monomials(nvars: int, degree: int):
    """All exponent vectors of the given total degree, canonical order."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for head in range(degree, -1, -1):
        for tail in monomials(nvars - 1, degree - head):
            out.append((head,) + tail)
    out.sort(key=grevlex_key)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int):
    return {e: i for i, e in enumerate(monomials(nvars, degree))}


class Poly:
    """Homogeneous polynomial; terms map exponent tuples to nonzero encodings."""

    __slots__ = ("field", "nvars", "degree", "terms")

    def __init__(self, field: Field, nvars: int, degree: int, terms: dict):
        self.field = field
        self.nvars = nvars
        self.degree = degree
        self.terms = terms

    @classmethod
    def zero(cls, field, nvars, degree=0):
        return cls(field, nvars, degree, {})

    @classmethod
    def from_terms(cls, field, nvars, pairs, degree=None):
        """Merge (exponent, coefficient) pairs into canonical sparse form.

        Like terms are combined and zero coefficients dropped; the degree
        is taken from the raw input so full cancellation still yields a
        zero polynomial of the right nominal degree.
        """
        terms = {}
        for exp, c in pairs:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ArityMismatch(
                    f"exponent vector {exp} has {len(exp)} entries, expected {nvars}")
            if any(e < 0 for e in exp):
                raise FormatError(f"negative exponent in {exp}")
            d = sum(exp)
            if degree is None:
                degree = d
            elif d != degree:
                raise InhomogeneousInput(
                    f"term of degree {d} in a polynomial of degree {degree}")
            if field.k == 1:
                c %= field.p
            elif not 0 <= c < field.q:
                raise ValueError(
                    f"coefficient {c} is not an encoding of a {field.spec_str()} element")
            if exp in terms:
                terms[exp] = field.add(terms[exp], c)
            else:
                terms[exp] = c
        terms = {e: c for e, c in terms.items() if c != 0}
        return cls(field, nvars, 0 if degree is None else degree, terms)

    @classmethod
    def monomial(cls, field, nvars, exp, coeff=1):
        exp = tuple(exp)
        c = coeff % field.p if field.k == 1 else coeff
        if c == 0:
            return cls.zero(field, nvars, sum(exp))
        return cls(field, nvars, sum(exp), {exp: c})

    @classmethod
    def variable(cls, field, nvars, j):
        exp = tuple(1 if i == j else 0 for i in range(nvars))
        return cls(field, nvars, 1, {exp: 1})

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]))

    # -- arithmetic ---------------------------------------------------------

    def _check_compat(self, other):
        if self.field != other.field:
            raise IncompatibleFields("operands live in different fields")
        if self.nvars != other.nvars:
            raise ArityMismatch("operands have different variable counts")

    def __add__(self, other):
        self._check_compat(other)
        if not self.is_zero() and not other.is_zero() and self.degree != other.degree:
            raise InhomogeneousInput(
                f"cannot add degrees {self.degree} and {other.degree}")
        deg = other.degree if self.is_zero() else self.degree
        f = self.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = f.add(terms.get(e, 0), c)
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return Poly(f, self.nvars, deg, terms)

    def __neg__(self):
        f = self.field
        return Poly(f, self.nvars, self.degree,
                    {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_compat(other)
        f = self.field
        deg = self.degree + other.degree
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = f.add(terms.get(e, 0), f.mul(c1, c2))
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return Poly(f, self.nvars, deg, terms)

    def scale(self, c):
        f = self.field
        if c == 0:
            return Poly.zero(f, self.nvars, self.degree)
        return Poly(f, self.nvars, self.degree,
                    {e: f.mul(co, c) for e, co in self.terms.items()})

    def partial(self, j: int):
        """Formal partial derivative with respect to X_j (exponents mod p)."""
        if not 0 <= j < self.nvars:
            raise IndexOutOfRange(f"variable index {j} out of range")
        f = self.field
        deg = max(self.degree - 1, 0)
        terms = {}
        for e, c in self.terms.items():
            ej = e[j]
            if ej == 0:
                continue
            m = f.mul(c, f.from_int(ej))
            if m == 0:
                continue
            ne = e[:j] + (ej - 1,) + e[j + 1:]
            v = f.add(terms.get(ne, 0), m)
            if v:
                terms[ne] = v
            else:
                terms.pop(ne, None)
        return Poly(f, self.nvars, deg, terms)

    def eval_at(self, point, field: Field | None = None) -> int:
        """Exact value at a point, optionally over an extension field."""
        if len(point) != self.nvars:
            raise ArityMismatch(
                f"point has {len(point)} coordinates, expected {self.nvars}")
        E = self.field if field is None else field
        emb = None
        if E != self.field:
            emb = embedding_table(self.field, E)
        acc = 0
        for e, c in self.terms.items():
            t = c if emb is None else emb[c]
            for j, ej in enumerate(e):
                if ej:
                    t = E.mul(t, E.pow(point[j], ej))
            acc = E.add(acc, t)
        return acc

    # -- identity and text --------------------------------------------------

    def __eq__(self, other):
        return bool(isinstance(other, Poly) and self.field == other.field
                    and self.nvars == other.nvars and self.terms == other.terms
                    and (self.terms or self.degree == other.degree))

    def __hash__(self):
        return hash((self.field, self.nvars, self.degree,
                     tuple(self.sorted_terms())))

    def serialize(self) -> str:
        if not self.terms:
            zero_exp = (self.degree,) + (0,) * (self.nvars - 1)
            return "0:" + ",".join(str(e) for e in zero_exp)
        parts = []
        for e, c in self.sorted_terms():
            parts.append(self.field.coeff_str(c) + ":" + ",".join(str(x) for x in e))
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly[{self.field.spec_str()}]({self.serialize()})"


def embedding_table(base: Field, ext: Field):
    """Embedding of base into ext, or IncompatibleFields if unknown.

    Prime subfields embed identically under the integer encoding; other
    embeddings must have been created through base.extension(m).
    """
    if base == ext:
        return None
    if base.k == 1 and ext.p == base.p:
        return list(range(base.p))
    for e, emb in base._extensions.values():
        if e == ext:
            return emb
    raise IncompatibleFields(
        f"no embedding of {base.spec_str()} into {ext.spec_str()}")


def poly_parse(text: str, field: Field, nvars: int) -> Poly:
    """Parse 'c:e0,e1,... + c:e0,e1,...' into canonical sparse form."""
    pairs = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise FormatError(f"term {chunk!r} lacks a ':' separator")
        cs, es = chunk.split(":", 1)
        try:
            coeff = field.parse_coeff(cs)
            exp = tuple(int(t) for t in es.split(","))
        except ValueError as exc:
            raise FormatError(f"cannot parse term {chunk!r}: {exc}") from None
        if len(exp) != nvars:
            raise ArityMismatch(
                f"term {chunk!r} has {len(exp)} exponents, expected {nvars}")
        pairs.append((exp, coeff))
    if not pairs:
        raise FormatError("empty polynomial text")
    return Poly.from_terms(field, nvars, pairs)


# ---------------------------------------------------------------------------
# Degree patterns and systems


@dataclass(frozen=True)
class DegreePattern:
    """Ambient dimension n, form count s, nonincreasing degrees d."""

    n: int
    s: int
    d: tuple

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if not 0 < self.s < self.n:
            raise PatternViolation(f"need 0 < s < n, got s={self.s}, n={self.n}")
        if len(self.d) != self.s:
            raise PatternViolation(
                f"degree tuple has {len(self.d)} entries, expected s={self.s}")
        if any(self.d[i] < self.d[i + 1] for i in range(self.s - 1)):
            raise PatternViolation(f"degrees {self.d} are not nonincreasing")
        if self.d[-1] < 1:
            raise PatternViolation("degrees must be positive")
        if self.d[0] < 2:
            raise PatternViolation("leading degree must be at least 2")

    @property
    def delta(self) -> int:
        out = 1
        for x in self.d:
            out *= x
        return out

    @property
    def sigma(self) -> int:
        return sum(x - 1 for x in self.d)

    def coeff_counts(self):
        """Number of degree-d_i monomials in n+1 variables, per form."""
        return tuple(len(monomials(self.n + 1, di)) for di in self.d)


@dataclass(frozen=True)
class PolySystem:
    """Forms f_1..f_s realizing a degree pattern over one field."""

    pattern: DegreePattern
    field: Field
    forms: tuple

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple(self.forms))
        if len(self.forms) != self.pattern.s:
            raise PatternViolation(
                f"{len(self.forms)} forms for a pattern with s={self.pattern.s}")
        for i, (f, di) in enumerate(zip(self.forms, self.pattern.d), start=1):
            if f.field != self.field:
                raise IncompatibleFields(f"form {i} lives in a different field")
            if f.nvars != self.pattern.n + 1:
                raise ArityMismatch(
                    f"form {i} has {f.nvars} variables, expected {self.pattern.n + 1}")
            if f.is_zero():
                raise PatternViolation(f"form {i} is zero")
            if f.degree != di:
                raise PatternViolation(
                    f"form {i} has degree {f.degree}, pattern expects {di}")

    def serialize(self) -> str:
        return system_file_text(self)


@dataclass(frozen=True)
class TestSystem:
    """The n+1 derived forms fed to the emptiness gate for one certificate."""

    __test__ = False  # bare "Test" prefix; keep pytest collection away

    cert: str
    field: Field
    nvars: int
    forms: tuple
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple(self.forms))
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if len(self.forms) != self.nvars:
            raise ArityMismatch(
                f"{len(self.forms)} forms, expected nvars={self.nvars}")
        if len(self.degrees) != len(self.forms):
            raise ArityMismatch("degree list does not match form list")


def determinant(rows, field: Field, nvars: int, degree: int) -> Poly:
    """Cofactor-expansion determinant of a square matrix of polynomials.

    The declared degree is kept even when the expansion cancels to zero.
    """
    size = len(rows)
    if size == 1:
        f = rows[0][0]
        return Poly(field, nvars, degree, dict(f.terms))

    def expand(r, cols):
        if len(cols) == 1:
            return rows[r][cols[0]]
        acc = None
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if entry.is_zero():
                continue
            rest = cols[:pos] + cols[pos + 1:]
            sub = expand(r + 1, rest)
            term = entry * sub
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            deg = sum(rows[r + i][cols[i]].degree for i in range(len(cols)))
            return Poly.zero(field, nvars, deg)
        return acc

    result = expand(0, list(range(size)))
    return Poly(field, nvars, degree, dict(result.terms))


def jacobian_minor(system: PolySystem, k: int) -> Poly:
    """s x s minor J_k: partials of the forms along X_1..X_{s-1}, X_{k-1}."""
    n, s = system.pattern.n, system.pattern.s
    if not s + 1 <= k <= n + 1:
        raise IndexOutOfRange(f"k={k} outside [{s + 1}, {n + 1}]")
    cols = list(range(1, s)) + [k - 1]
    rows = [[f.partial(j) for j in cols] for f in system.forms]
    return determinant(rows, system.field, n + 1, system.pattern.sigma)


def jacobian_det(system: PolySystem) -> Poly:
    """det(df_i/dX_j : 1 <= i,j <= s); identical to J_{s+1}."""
    return jacobian_minor(system, system.pattern.s + 1)


def build_test_system(system: PolySystem, cert: str) -> TestSystem:
    """Assemble the n+1 forms whose emptiness decides the given certificate."""
    if cert not in CERTS:
        raise UnsupportedCertificate(f"unknown certificate {cert!r}")
    pat = system.pattern
    n, s = pat.n, pat.s
    field = system.field
    nvars = n + 1
    var = lambda j: Poly.variable(field, nvars, j)
    fs = list(system.forms)
    d = list(pat.d)
    sigma = pat.sigma
    if cert == "stci":
        forms = fs + [var(j) for j in range(s, n + 1)]
        degrees = d + [1] * (n - s + 1)
    elif cert == "ci":
        forms = fs + [jacobian_det(system)] + [var(j) for j in range(s + 1, n + 1)]
        degrees = d + [sigma] + [1] * (n - s)
    elif cert == "nons":
        forms = fs + [jacobian_minor(system, k) for k in range(s + 1, n + 2)]
        degrees = d + [sigma] * (n - s + 1)
    else:  # irr
        forms = fs + [jacobian_minor(system, s + 1), jacobian_minor(system, s + 2)]
        forms += [var(j) for j in range(s + 2, n + 1)]
        degrees = d + [sigma, sigma] + [1] * (n - s - 1)
    return TestSystem(cert, field, nvars, tuple(forms), tuple(degrees))


def compose_linear(f: Poly, matrix) -> Poly:
    """Substitute X_j -> sum_m matrix[j][m] X_m (matrix rows over the field)."""
    field, nvars = f.field, f.nvars
    if len(matrix) != nvars or any(len(r) != nvars for r in matrix):
        raise ArityMismatch("substitution matrix must be square of size nvars")
    images = [Poly.from_terms(field, nvars,
                              [(tuple(1 if i == m else 0 for i in range(nvars)), c)
                               for m, c in enumerate(row)], degree=1)
              for row in matrix]
    acc = Poly.zero(field, nvars, f.degree)
    one_exp = (0,) * nvars
    for e, c in f.terms.items():
        term = Poly(field, nvars, 0, {one_exp: c})
        for j, ej in enumerate(e):
            for _ in range(ej):
                term = term * images[j]
        acc = acc + Poly(field, nvars, f.degree, term.terms)
    return acc


# ---------------------------------------------------------------------------
# System file format
#
#   field 3            (or: field 2^2)
#   nvars 3
#   poly 1: 1:2,0,0 + 1:0,1,1
#   poly 2: ...


def system_file_text(system: PolySystem) -> str:
    lines = [f"field {system.field.spec_str()}",
             f"nvars {system.pattern.n + 1}"]
    for i, f in enumerate(system.forms, start=1):
        lines.append(f"poly {i}: {f.serialize()}")
    return "\n".join(lines) + "\n"


def parse_system_file(text: str) -> PolySystem:
    """Parse the line-based system format; errors cite line numbers."""
    field = None
    nvars = None
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("field "):
            if field is not None:
                raise FormatError("duplicate field line", lineno)
            try:
                field = parse_field_spec(line[6:])
            except Exception as exc:
                raise FormatError(f"bad field spec: {exc}", lineno) from None
        elif line.startswith("nvars "):
            try:
                nvars = int(line[6:])
            except ValueError:
                raise FormatError("nvars must be an integer", lineno) from None
            if nvars < 2:
                raise FormatError("nvars must be at least 2", lineno)
        elif line.startswith("poly "):
            if field is None or nvars is None:
                raise FormatError("poly line before field/nvars", lineno)
            body = line[5:]
            if ":" not in body:
                raise FormatError("poly line needs 'poly <i>: terms'", lineno)
            idx_s, terms_s = body.split(":", 1)
            try:
                idx = int(idx_s)
            except ValueError:
                raise FormatError("poly index must be an integer", lineno) from None
            if idx != len(polys) + 1:
                raise FormatError(
                    f"poly index {idx} out of order (expected {len(polys) + 1})",
                    lineno)
            try:
                polys.append(poly_parse(terms_s, field, nvars))
            except Exception as exc:
                raise FormatError(str(exc), lineno) from None
        else:
            raise FormatError(f"unrecognized line {line!r}", lineno)
    if field is None or nvars is None or not polys:
        raise FormatError("file must contain field, nvars and poly lines")
    pattern = DegreePattern(n=nvars - 1, s=len(polys),
                            d=tuple(f.degree for f in polys))
    return PolySystem(pattern=pattern, field=field, forms=tuple(polys))
