"""Class expansions checked against an independent brute-force expander."""

import itertools
import random

import pytest

from cicensus import (ChowClass, IndexOutOfRange, PatternViolation,
                      UnsupportedCertificate, chow_class, extract_bound,
                      top_coefficient)


def _expand(factors, nvars):
    """Naive oracle: multiply out linear factors term by term, no truncation.

    Each factor is a dict {variable index: coefficient}; the result maps
    exponent tuples to integers.
    """
    out = {}
    for choice in itertools.product(*(f.items() for f in factors)):
        exp = [0] * nvars
        coeff = 1
        for j, c in choice:
            exp[j] += 1
            coeff *= c
        key = tuple(exp)
        out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}


def _oracle_class(cert, n, s, d):
    sigma = sum(x - 1 for x in d)
    factors = [{0: di, i: 1} for i, di in enumerate(d, start=1)]
    spread = {0: sigma, **{i: 1 for i in range(1, s + 1)}}
    if cert == "nons":
        factors += [spread] * (n - s + 1)
    else:
        factors += [spread] * 2 + [{0: 1}] * (n - s - 1)
    return _expand(factors, s + 1)


def test_example_nons_n2_s1_d3():
    # (3t0 + t1)(2t0 + t1)^2, frozen from the oracle expansion
    oracle = _oracle_class("nons", 2, 1, (3,))
    assert oracle[(3, 0)] == 12
    assert oracle[(2, 1)] == 16
    cls = chow_class("nons", 2, 1, (3,))
    assert top_coefficient(cls) == 12
    assert extract_bound(cls, 1) == 16


def test_example_nons_n3_s2_d22():
    oracle = _oracle_class("nons", 3, 2, (2, 2))
    assert oracle[(4, 0, 0)] == 16
    assert oracle[(3, 1, 0)] == 24 and oracle[(3, 0, 1)] == 24
    cls = chow_class("nons", 3, 2, (2, 2))
    assert top_coefficient(cls) == 16
    assert extract_bound(cls, 1) == 24 and extract_bound(cls, 2) == 24


def test_example_irr_n3_s2_d22():
    oracle = _oracle_class("irr", 3, 2, (2, 2))
    assert oracle[(3, 1, 0)] == 24
    cls = chow_class("irr", 3, 2, (2, 2))
    assert extract_bound(cls, 1) == 24
    assert top_coefficient(cls) == oracle[(4, 0, 0)] == 16


def test_truncated_class_matches_oracle_coefficients():
    rng = random.Random("chow-oracle")
    for _ in range(20):
        n = rng.choice((2, 3, 4))
        s = rng.randrange(1, n)
        d = tuple(sorted((rng.randrange(2, 5) if i == 0 else rng.randrange(1, 5)
                          for i in range(s)), reverse=True))
        for cert in ("nons", "irr"):
            oracle = _oracle_class(cert, n, s, d)
            cls = chow_class(cert, n, s, d)
            for exp, coeff in oracle.items():
                if exp[0] <= n + 1:
                    assert cls.coefficient(exp) == coeff
            for exp, coeff in cls.coeffs.items():
                assert oracle.get(exp) == coeff


def test_ring_laws():
    rng = random.Random("chow-ring")
    n, s = 4, 2

    def rand_class():
        coeffs = {}
        for _ in range(rng.randrange(1, 5)):
            exp = tuple(rng.randrange(3) for _ in range(s + 1))
            coeffs[exp] = coeffs.get(exp, 0) + rng.randrange(-5, 6)
        return ChowClass(n, s, {e: c for e, c in coeffs.items() if c})

    for _ in range(50):
        a, b, c = rand_class(), rand_class(), rand_class()
        assert (a * b).coeffs == (b * a).coeffs
        assert ((a * b) * c).coeffs == (a * (b * c)).coeffs


def test_errors():
    cls = chow_class("nons", 3, 2, (2, 2))
    with pytest.raises(IndexOutOfRange):
        extract_bound(cls, 3)
    with pytest.raises(IndexOutOfRange):
        extract_bound(cls, 0)
    with pytest.raises(UnsupportedCertificate):
        chow_class("stci", 3, 2, (2, 2))
    with pytest.raises(PatternViolation):
        chow_class("nons", 2, 2, (2, 2))


def test_truncation_drops_only_high_powers():
    cls = chow_class("nons", 2, 1, (4,))
    assert all(exp[0] <= 3 for exp in cls.coeffs)
    assert top_coefficient(cls) == 3 ** 2 * 4  # sigma^(n-s+1) * delta
