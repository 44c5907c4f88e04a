"""Exact arithmetic in finite fields F_q for q = p^k.

Elements are encoded as plain integers in [0, q).  A prime field stores
the residue itself; an extension field stores the coefficient vector
(c_0, ..., c_{k-1}) of the residue class modulo a monic irreducible,
packed in base p as c_0 + c_1*p + ... + c_{k-1}*p^(k-1).  The encoding
is canonical: distinct integers are distinct elements, 0 and 1 are the
additive and multiplicative identities in every field.

Small extension fields get lazily built operation tables; larger ones
fall back to per-operation polynomial reduction.  All arithmetic is
exact; cardinalities are expected to stay at desk scale.
"""

from __future__ import annotations

from .errors import (DegreeMismatch, DivisionByZero, NotPrime,
                     ReducibleModulus, TooLarge)

_TABLE_LIMIT = 1024
_MAX_ORDER = 1 << 62  # element encodings stay machine-word sized


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


# ---------------------------------------------------------------------------
# Dense univariate arithmetic over F_p, used only for modulus handling.
# Polynomials are lists of coefficients, ascending degree, trimmed.


def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, m, p):
    a = [c % p for c in a]
    dm = len(m) - 1
    while len(a) > dm:
        t = a[-1]
        if t:
            off = len(a) - 1 - dm
            for j in range(dm):
                a[off + j] = (a[off + j] - t * m[j]) % p
        a.pop()
    return _ptrim(a)


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a = _ptrim([c % p for c in a])
    b = _ptrim([c % p for c in b])
    while b:
        inv = pow(b[-1], -1, p)
        b = [c * inv % p for c in b]
        a, b = b, _pmod(a, b, p)
    return a


def _prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible_mod_poly(coeffs, p) -> bool:
    """Rabin test for a monic polynomial over F_p given as ascending coefficients."""
    m = _ptrim([c % p for c in coeffs])
    k = len(m) - 1
    if k < 1 or m[-1] != 1:
        raise DegreeMismatch("modulus must be monic of positive degree")
    if k == 1:
        return True
    x = [0, 1]
    h = list(x)
    for _ in range(k):
        h = _ppowmod(h, p, m, p)
    if _psub(h, x, p):
        return False  # x^(p^k) != x mod m
    for r in _prime_factors(k):
        h = list(x)
        for _ in range(k // r):
            h = _ppowmod(h, p, m, p)
        if len(_pgcd(_psub(h, x, p), m, p)) > 1:
            return False
    return True


def find_modulus(p, k):
    """Lexicographically smallest monic irreducible of degree k over F_p.

    Candidates x^k + a_{k-1} x^{k-1} + ... + a_0 are tried in ascending
    order of the integer a_0 + a_1 p + ... + a_{k-1} p^{k-1} read from the
    high coefficient down, which makes the search deterministic across
    machines.
    """
    for i in range(p ** k):
        digits = []
        v = i
        for _ in range(k):
            digits.append(v % p)
            v //= p
        if digits[0] == 0:
            continue  # divisible by x
        cand = digits + [1]
        if is_irreducible_mod_poly(cand, p):
            return tuple(cand)
    raise ReducibleModulus(f"no irreducible of degree {k} over F_{p}")  # pragma: no cover


class Field:
    """The finite field F_q, q = p^k, acting on integer-encoded elements."""

    __slots__ = ("p", "k", "q", "modulus", "_mul_table", "_neg_table",
                 "_inv_table", "_extensions")

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p >= 1 << 31:
            raise NotPrime(f"characteristic {p} exceeds 2^31")
        if k < 1:
            raise DegreeMismatch("extension degree must be >= 1")
        if p ** k >= _MAX_ORDER:
            raise TooLarge(f"field order {p}^{k} is beyond desk scale")
        if k == 1:
            if modulus is not None:
                raise DegreeMismatch("prime fields take no modulus")
            self.modulus = None
        else:
            if modulus is None:
                self.modulus = find_modulus(p, k)
            else:
                mod = tuple(int(c) % p for c in modulus)
                if len(mod) != k + 1 or mod[-1] != 1:
                    raise DegreeMismatch(
                        f"modulus must be monic of degree {k}")
                if not is_irreducible_mod_poly(list(mod), p):
                    raise ReducibleModulus(
                        f"modulus {list(mod)} is reducible over F_{p}")
                self.modulus = mod
        self.p = p
        self.k = k
        self.q = p ** k
        self._mul_table = None
        self._neg_table = None
        self._inv_table = None
        self._extensions = {}

    # -- identity -----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Field) and self.p == other.p
                and self.k == other.k and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"Field({self.spec_str()})"

    def spec_str(self) -> str:
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    # -- encoding -----------------------------------------------------------

    def coeffs(self, a: int):
        """Coefficient vector (c_0, ..., c_{k-1}) of the encoded element."""
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, vec) -> int:
        if len(vec) > self.k:
            raise DegreeMismatch(f"coefficient vector longer than {self.k}")
        a = 0
        for c in reversed(list(vec)):
            a = a * self.p + c % self.p
        return a

    def from_int(self, c: int) -> int:
        """Embed an integer via the prime subfield."""
        return c % self.p

    def elements(self):
        return range(self.q)

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self._neg_table is not None:
            return self._neg_table[a]
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if self._mul_table is None and self.q <= _TABLE_LIMIT:
            self._build_tables()
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_raw(a, b)

    def _mul_raw(self, a, b):
        p = self.p
        av = list(self.coeffs(a))
        bv = list(self.coeffs(b))
        prod = [0] * (2 * self.k - 1)
        for i, ai in enumerate(av):
            if ai:
                for j, bj in enumerate(bv):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        red = _pmod(prod, list(self.modulus), p)
        return self.from_coeffs(red + [0] * (self.k - len(red)))

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no inverse")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv_table is not None and self._inv_table[a] is not None:
            return self._inv_table[a]
        r = self.pow(a, self.q - 2)
        if self._inv_table is not None:
            self._inv_table[a] = r
        return r

    def pow(self, a: int, e: int) -> int:
        if self.k == 1:
            return pow(a, e, self.p)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def _build_tables(self):
        q = self.q
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            row = mul[a]
            for b in range(a, q):
                v = self._mul_raw(a, b)
                row[b] = v
                mul[b][a] = v
        self._mul_table = mul
        neg = [0] * q
        for a in range(q):
            p = self.p
            out = 0
            mult = 1
            v = a
            for _ in range(self.k):
                out += ((-v) % p) * mult
                v //= p
                mult *= p
            neg[a] = out
        self._neg_table = neg
        self._inv_table = [None] * q

    # -- extensions ---------------------------------------------------------

    def extension(self, m: int):
        """Return (E, emb) with E = F_{q^m} and emb the embedding table.

        emb maps every encoding of this field to its image in E.  Results
        are cached, so repeated requests return identical Field objects.
        """
        if m < 1:
            raise DegreeMismatch("extension degree must be >= 1")
        if m == 1:
            return self, list(range(self.q))
        if m in self._extensions:
            return self._extensions[m]
        ext = Field(self.p, self.k * m)
        if self.k == 1:
            emb = list(range(self.p))
        else:
            root = None
            mod = self.modulus
            for r in ext.elements():
                acc = 0
                for c in reversed(mod):
                    acc = ext.add(ext.mul(acc, r), c % self.p)
                if acc == 0:
                    root = r
                    break
            assert root is not None, "base modulus must split in the extension"
            emb = []
            for a in self.elements():
                img = 0
                rp = 1
                for c in self.coeffs(a):
                    img = ext.add(img, ext.mul(c, rp))
                    rp = ext.mul(rp, root)
                emb.append(img)
        self._extensions[m] = (ext, emb)
        return ext, emb

    # -- parsing ------------------------------------------------------------

    def parse_coeff(self, token: str) -> int:
        """Parse 'c' (prime) or 'c0|c1|...' (extension) into an encoding."""
        token = token.strip()
        if "|" in token:
            parts = [int(t) for t in token.split("|")]
            return self.from_coeffs(parts)
        return int(token) % self.p

    def coeff_str(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        return "|".join(str(c) for c in self.coeffs(a))


def parse_field_spec(spec: str) -> Field:
    """Build a field from 'p' or 'p^k' (e.g. '101', '2^4')."""
    spec = spec.strip()
    if "^" in spec:
        ps, ks = spec.split("^", 1)
        return Field(int(ps), int(ks))
    return Field(int(spec))


def field_from_order(q: int) -> Field:
    """Build F_q from its cardinality, which must be a prime power."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = q
    f = 2
    while f * f <= p:
        if p % f == 0:
            p = f
            break
        f += 1
    k = 0
    v = q
    while v % p == 0 and v > 1:
        v //= p
        k += 1
    if v != 1 or p ** k != q:
        raise NotPrime(f"{q} is not a prime power")
    return Field(p, k)
