"""Sampling, exhaustive enumeration, certificate censuses, and the
brute-force oracles used to cross-check the emptiness gate.

Sampling model: each form is a uniform nonzero coefficient vector, so the
induced distribution on projective coefficient space is uniform (every
projective point has exactly q-1 nonzero representatives).  Per-trial
seeds are derived from the master seed by a counter construction, which
makes trials independent, parallelizable, and reproducible: identical
parameters and seed give byte-identical reports up to the volatile
timestamp/runtime fields.

Monte Carlo verdicts use Wilson score intervals at 3 sigma; "violated"
requires the whole interval below the theoretical floor, and floors whose
q-guard fails are reported as "vacuous" rather than asserted.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from multiprocessing import Pool

from .bounds import probability_lower_bound, projective_count
from .errors import PatternViolation, SearchSpaceTooLarge, TooLarge
from .field import Field, field_from_order
from .macaulay import certify, projective_empty
from .poly import (CERTS, DegreePattern, Poly, PolySystem, TestSystem,
                   monomials)

DEFAULT_EXHAUSTIVE_CAP = 10_000_000
DEFAULT_POINT_CAP = 200_000
DEFAULT_FACTOR_CAP = 200_000


def trial_seed(master, index: int) -> str:
    """Counter-derived per-trial seed; stable across platforms."""
    return f"{master}:{index}"


# ---------------------------------------------------------------------------
# Sampling and enumeration


def sample_system(n: int, s: int, d, q: int, seed) -> PolySystem:
    """Uniform system: each form a uniform nonzero coefficient vector."""
    pattern = DegreePattern(n=n, s=s, d=tuple(d))
    field = field_from_order(q)
    rng = random.Random(seed)
    forms = []
    for di in pattern.d:
        mons = monomials(n + 1, di)
        while True:
            vec = [rng.randrange(q) for _ in mons]
            if any(vec):
                break
        forms.append(Poly.from_terms(field, n + 1, zip(mons, vec), degree=di))
    return PolySystem(pattern=pattern, field=field, forms=tuple(forms))


def canonical_vectors(field: Field, length: int):
    """All vectors with first nonzero entry 1: one per projective point."""
    q = field.q
    for lead in range(length):
        prefix = (0,) * lead + (1,)
        for tail in itertools.product(range(q), repeat=length - lead - 1):
            yield prefix + tail


def system_space_size(n: int, s: int, d, q: int) -> int:
    """p_D = prod p_{D_i}, the number of projective coefficient tuples."""
    pattern = DegreePattern(n=n, s=s, d=tuple(d))
    total = 1
    for di in pattern.d:
        total *= projective_count(len(monomials(n + 1, di)) - 1, q)
    return total


def enumerate_systems(n: int, s: int, d, q: int,
                      cap: int | None = DEFAULT_EXHAUSTIVE_CAP):
    """Every system once, via canonical projective representatives."""
    pattern = DegreePattern(n=n, s=s, d=tuple(d))
    field = field_from_order(q)
    total = system_space_size(n, s, d, q)
    if cap is not None and total > cap:
        raise TooLarge(f"{total} systems exceed the exhaustive cap {cap}")
    mon_lists = [monomials(n + 1, di) for di in pattern.d]

    def rec(i):
        if i == s:
            yield ()
            return
        for head in canonical_vectors(field, len(mon_lists[i])):
            for tail in rec(i + 1):
                yield (head,) + tail

    for vecs in rec(0):
        forms = tuple(Poly.from_terms(field, n + 1, zip(mon_lists[i], vecs[i]),
                                      degree=pattern.d[i])
                      for i in range(s))
        yield PolySystem(pattern=pattern, field=field, forms=forms)


# ---------------------------------------------------------------------------
# Point iteration and counting


def projective_points(field: Field, n: int):
    """Canonical representatives of P^n(F_q): first nonzero coordinate 1."""
    q = field.q
    for lead in range(n + 1):
        prefix = (0,) * lead + (1,)
        for tail in itertools.product(range(q), repeat=n - lead):
            yield prefix + tail


def _prep_forms(forms, emb):
    """Order forms cheapest-first and embed coefficients.

    Linear forms get a direct dot-product path; the shared power table is
    built lazily, only when a point survives every linear form.
    """
    prepped = []
    for f in sorted(forms, key=lambda f: (f.degree, len(f.terms))):
        terms = [(e, emb[c]) for e, c in f.terms.items()]
        if f.degree <= 1:
            lin = [(next(j for j, ej in enumerate(e) if ej), c)
                   for e, c in terms]
            prepped.append((True, lin))
        else:
            prepped.append((False, terms))
    return prepped


def _vanishes_at(field: Field, prepped, point, maxdeg: int) -> bool:
    add, mul = field.add, field.mul
    powtab = None
    for is_linear, terms in prepped:
        acc = 0
        if is_linear:
            for j, c in terms:
                acc = add(acc, mul(c, point[j]))
        else:
            if powtab is None:
                powtab = []
                for xj in point:
                    row = [1, xj]
                    for _ in range(maxdeg - 1):
                        row.append(mul(row[-1], xj))
                    powtab.append(row)
            for e, c in terms:
                t = c
                for j, ej in enumerate(e):
                    if ej:
                        t = mul(t, powtab[j][ej])
                acc = add(acc, t)
        if acc:
            return False
    return True


def count_common_zeros(forms, field: Field, n: int, ext_degree: int = 1) -> int:
    """Number of common zeros in P^n(F_{q^m}) of forms defined over F_q."""
    ext, emb = field.extension(ext_degree)
    prepped = _prep_forms(forms, emb)
    maxdeg = max((f.degree for f in forms), default=1)
    return sum(1 for x in projective_points(ext, n)
               if _vanishes_at(ext, prepped, x, maxdeg))


def count_zf_points(system: PolySystem, ext_degree: int = 1) -> int:
    """F_{q^m}-rational points of Z(f) in projective n-space."""
    return count_common_zeros(system.forms, system.field,
                              system.pattern.n, ext_degree)


# ---------------------------------------------------------------------------
# Brute-force oracles


@dataclass(frozen=True)
class BruteForceVerdict:
    nonempty: bool
    witness: tuple | None
    ext_degree: int | None   # extension where the witness lives
    searched_up_to: int      # largest extension degree scanned


def feasible_max_ext(field: Field, n: int, point_cap: int, limit: int) -> int:
    """Largest m <= limit with sum_{i<=m} p_n(q^i) within the point budget."""
    total = 0
    m = 0
    while m < limit:
        step = projective_count(n, field.q ** (m + 1))
        if total + step > point_cap:
            break
        total += step
        m += 1
    return m


def brute_force_empty(ts: TestSystem, max_ext: int | None = None,
                      point_cap: int = DEFAULT_POINT_CAP) -> BruteForceVerdict:
    """Search P^n(F_{q^m}) for m = 1..max_ext for a common zero.

    Bounded-empty verdicts are pragmatic: a zero set may exist whose
    points all live in deeper extensions than the search reaches.
    """
    n = ts.nvars - 1
    field = ts.field
    if max_ext is None:
        prod = 1
        for e in ts.degrees:
            prod *= e
        max_ext = max(prod, 4)
    if max_ext < 1:
        raise SearchSpaceTooLarge("max_ext must be at least 1")
    total = sum(projective_count(n, field.q ** m)
                for m in range(1, max_ext + 1))
    if total > point_cap:
        raise SearchSpaceTooLarge(
            f"{total} points over extensions up to {max_ext} exceed cap {point_cap}")
    maxdeg = max((f.degree for f in ts.forms), default=1)
    for m in range(1, max_ext + 1):
        ext, emb = field.extension(m)
        prepped = _prep_forms(ts.forms, emb)
        for x in projective_points(ext, n):
            if _vanishes_at(ext, prepped, x, maxdeg):
                return BruteForceVerdict(nonempty=True, witness=x,
                                         ext_degree=m, searched_up_to=m)
    return BruteForceVerdict(nonempty=False, witness=None,
                             ext_degree=None, searched_up_to=max_ext)


def brute_force_absirr(f: Poly, max_ext: int | None = None,
                       factor_cap: int = DEFAULT_FACTOR_CAP) -> bool:
    """True iff f has no proper homogeneous factor over F_{q^m}, m <= max_ext.

    Exhaustive search over candidate factors of degree <= deg(f)/2; the
    cofactor is solved for by linear algebra.  A factor of an absolutely
    reducible form is defined over an extension of degree at most deg(f),
    hence the default search depth.
    """
    if f.is_zero():
        return False
    deg, nv = f.degree, f.nvars
    if deg > 4 or nv > 3:
        raise SearchSpaceTooLarge("factor search supports deg <= 4, nvars <= 3")
    if deg == 1:
        return True
    if max_ext is None:
        max_ext = deg
    field = f.field
    candidates = 0
    for m in range(1, max_ext + 1):
        for a in range(1, deg // 2 + 1):
            count_a = len(monomials(nv, a))
            candidates += projective_count(count_a - 1, field.q ** m)
    if candidates > factor_cap:
        raise SearchSpaceTooLarge(
            f"{candidates} candidate factors exceed cap {factor_cap}")
    from .macaulay import rank_over_field
    mons_f = monomials(nv, deg)
    f_index = {e: i for i, e in enumerate(mons_f)}
    for m in range(1, max_ext + 1):
        ext, emb = field.extension(m)
        f_vec = [0] * len(mons_f)
        for e, c in f.terms.items():
            f_vec[f_index[e]] = emb[c]
        for a in range(1, deg // 2 + 1):
            mons_a = monomials(nv, a)
            mons_b = monomials(nv, deg - a)
            for g_vec in canonical_vectors(ext, len(mons_a)):
                rows = [[0] * len(mons_b) for _ in mons_f]
                for ia, ea in enumerate(mons_a):
                    ga = g_vec[ia]
                    if not ga:
                        continue
                    for ib, eb in enumerate(mons_b):
                        tgt = tuple(x + y for x, y in zip(ea, eb))
                        rows[f_index[tgt]][ib] = ga
                plain = rank_over_field(rows, ext)
                augmented = rank_over_field(
                    [r + [v] for r, v in zip(rows, f_vec)], ext)
                if plain == augmented:
                    return False
    return True


# ---------------------------------------------------------------------------
# Census runs


def wilson_interval(count: int, total: int, z: float = 3.0):
    """Wilson score interval for a binomial proportion."""
    if total == 0:
        return (0.0, 1.0)
    phat = count / total
    z2 = z * z
    denom = 1.0 + z2 / total
    center = (phat + z2 / (2 * total)) / denom
    half = z * math.sqrt(phat * (1 - phat) / total + z2 / (4 * total * total)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class TrialRecord:
    index: int
    seed: str
    system_text: str
    verdicts: dict
    points: int | None = None

    def to_json_dict(self):
        return {"index": self.index, "seed": self.seed,
                "system": self.system_text, "verdicts": dict(self.verdicts),
                "points": self.points}


@dataclass(frozen=True)
class CertSummary:
    cert: str
    count: int
    total: int
    freq: Fraction
    interval: tuple | None
    bound: Fraction
    product_bound: Fraction
    guard_met: bool
    verdict: str  # consistent | violated | vacuous


@dataclass(frozen=True)
class CensusReport:
    n: int
    s: int
    d: tuple
    q: int
    mode: str
    seed: object
    total: int
    certs: tuple
    per_cert: dict
    point_check: dict | None
    trial_records: tuple | None
    runtime_ms: int
    timestamp: str

    def to_json_dict(self, include_volatile: bool = True) -> dict:
        per_cert = {}
        for cert, cs in self.per_cert.items():
            entry = {
                "count": cs.count,
                "total": cs.total,
                "freq": str(cs.freq),
                "freq_approx": float(cs.freq),
                "interval": list(cs.interval) if cs.interval else None,
                "bound": str(cs.bound),
                "bound_approx": float(cs.bound),
                "product_bound": str(cs.product_bound),
                "guard": "met" if cs.guard_met else "unmet",
                "verdict": cs.verdict,
            }
            per_cert[cert] = entry
        out = {
            "schema": 1,
            "params": {"n": self.n, "s": self.s, "d": list(self.d),
                       "q": self.q, "certs": list(self.certs)},
            "mode": self.mode,
            "seed": self.seed,
            "total": self.total,
            "per_cert": per_cert,
            "point_check": self.point_check,
        }
        if self.trial_records is not None:
            out["trials"] = [t.to_json_dict() for t in self.trial_records]
        if include_volatile:
            out["runtime_ms"] = self.runtime_ms
            out["timestamp"] = self.timestamp
        return out

    def to_json(self, include_volatile: bool = True) -> str:
        return json.dumps(self.to_json_dict(include_volatile),
                          indent=2, sort_keys=True)

    def csv_rows(self):
        rows = [("cert", "count", "total", "freq", "lo", "hi", "bound", "verdict")]
        for cert, cs in self.per_cert.items():
            lo, hi = cs.interval if cs.interval else ("", "")
            rows.append((cert, cs.count, cs.total, float(cs.freq),
                         lo, hi, str(cs.bound), cs.verdict))
        return rows

    @property
    def violated(self) -> bool:
        return any(cs.verdict == "violated" for cs in self.per_cert.values())


def _judge(system: PolySystem, certs, count_points: bool):
    verdicts = {cert: certify(system, cert) for cert in certs}
    points = count_zf_points(system) if count_points else None
    return verdicts, points


def _mc_worker(payload):
    (p, k, modulus, n, s, d, master, indices, certs, count_points,
     keep_trials) = payload
    field = Field(p, k, modulus)  # noqa: F841  (validates the spec tuple)
    counts = {cert: 0 for cert in certs}
    records = []
    ci_points = []
    for idx in indices:
        seed = trial_seed(master, idx)
        system = sample_system(n, s, d, field.q, seed)
        verdicts, points = _judge(system, certs, count_points)
        for cert, ok in verdicts.items():
            if ok:
                counts[cert] += 1
        if count_points and verdicts.get("ci"):
            ci_points.append(points)
        if keep_trials:
            records.append(TrialRecord(index=idx, seed=seed,
                                       system_text=system.serialize(),
                                       verdicts=verdicts, points=points))
    return counts, records, ci_points


def run_census(n: int, s: int, d, q: int, mode: str, *, trials: int | None = None,
               seed=None, certs=CERTS, jobs: int = 1, count_points: bool = False,
               keep_trials: bool = False,
               exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP) -> CensusReport:
    """Run a certificate census and compare against the theoretical floors."""
    t0 = time.monotonic()
    pattern = DegreePattern(n=n, s=s, d=tuple(d))
    field = field_from_order(q)
    certs = tuple(certs)
    for cert in certs:
        if cert not in CERTS:
            raise PatternViolation(f"unknown certificate {cert!r}")
    counts = {cert: 0 for cert in certs}
    records = [] if keep_trials else None
    ci_points = []

    if mode == "exhaustive":
        total = system_space_size(n, s, d, q)
        if total > exhaustive_cap:
            raise TooLarge(f"{total} systems exceed the exhaustive cap "
                           f"{exhaustive_cap}")
        enumerated = 0
        for idx, system in enumerate(
                enumerate_systems(n, s, d, q, cap=exhaustive_cap)):
            verdicts, points = _judge(system, certs, count_points)
            for cert, ok in verdicts.items():
                if ok:
                    counts[cert] += 1
            if count_points and verdicts.get("ci"):
                ci_points.append(points)
            if keep_trials:
                records.append(TrialRecord(
                    index=idx, seed="", system_text=system.serialize(),
                    verdicts=verdicts, points=points))
            enumerated += 1
        assert enumerated == total, "enumeration does not match p_D"
    elif mode == "monte_carlo":
        if trials is None or trials < 1:
            raise PatternViolation("monte_carlo mode needs a positive trial count")
        if seed is None:
            seed = random.randrange(1 << 48)
        total = trials
        indices = list(range(trials))
        if jobs > 1 and trials > 1:
            nchunks = min(jobs * 4, trials)
            chunks = [indices[i::nchunks] for i in range(nchunks)]
            payloads = [(field.p, field.k, field.modulus, n, s, tuple(d),
                         seed, tuple(chunk), certs, count_points, keep_trials)
                        for chunk in chunks if chunk]
            with Pool(jobs) as pool:
                results = pool.map(_mc_worker, payloads)
        else:
            results = [_mc_worker((field.p, field.k, field.modulus, n, s,
                                   tuple(d), seed, tuple(indices), certs,
                                   count_points, keep_trials))]
        for wcounts, wrecords, wpoints in results:
            for cert, c in wcounts.items():
                counts[cert] += c
            ci_points.extend(wpoints)
            if keep_trials:
                records.extend(wrecords)
        if keep_trials:
            records.sort(key=lambda r: r.index)
    else:
        raise PatternViolation(f"unknown census mode {mode!r}")

    per_cert = {}
    for cert in certs:
        pb = probability_lower_bound(n, s, d, q, cert)
        freq = Fraction(counts[cert], total)
        interval = None
        if mode == "monte_carlo":
            interval = wilson_interval(counts[cert], total)
        if not pb.guard_met:
            verdict = "vacuous"
        else:
            if mode == "exhaustive":
                below = freq < pb.bound
            else:
                below = interval[1] < float(pb.bound)
            verdict = "violated" if below else "consistent"
        per_cert[cert] = CertSummary(cert=cert, count=counts[cert], total=total,
                                     freq=freq, interval=interval,
                                     bound=pb.bound,
                                     product_bound=pb.product_bound,
                                     guard_met=pb.guard_met, verdict=verdict)

    point_check = None
    if count_points and "ci" in certs:
        bound = pattern.delta * projective_count(n - s, q)
        violations = sum(1 for pts in ci_points if pts > bound)
        point_check = {"bound": bound,
                       "ci_certified": len(ci_points),
                       "max_points": max(ci_points, default=None),
                       "violations": violations}

    runtime_ms = int((time.monotonic() - t0) * 1000)
    return CensusReport(n=n, s=s, d=tuple(d), q=q, mode=mode, seed=seed,
                        total=total, certs=certs, per_cert=per_cert,
                        point_check=point_check,
                        trial_records=tuple(records) if keep_trials else None,
                        runtime_ms=runtime_ms,
                        timestamp=datetime.now(timezone.utc).isoformat())


# ---------------------------------------------------------------------------
# Oracle cross-check: emptiness gate vs point search


def _degree_tuples(nforms: int, max_product: int):
    """All ordered degree tuples with product at most max_product."""
    out = []

    def rec(prefix, prod):
        if len(prefix) == nforms:
            out.append(tuple(prefix))
            return
        e = 1
        while prod * e <= max_product:
            rec(prefix + [e], prod * e)
            e += 1
    rec([], 1)
    return tuple(out)


def _random_form(rng, field, nvars, degree):
    mons = monomials(nvars, degree)
    while True:
        vec = [rng.randrange(field.q) for _ in mons]
        if any(vec):
            return Poly.from_terms(field, nvars, zip(mons, vec), degree=degree)


def _rooted_form(rng, field, nvars, degree, point):
    """Random form vanishing at the given canonical point."""
    lead = point.index(1)
    anchor = tuple(degree if j == lead else 0 for j in range(nvars))
    while True:
        f = _random_form(rng, field, nvars, degree)
        v = f.eval_at(point)
        if v:
            # anchor monomial evaluates to 1 at the point, so shifting its
            # coefficient by -v zeroes the value
            shift = Poly.from_terms(field, nvars, [(anchor, field.neg(v))],
                                    degree=degree)
            f = f + shift
        if not f.is_zero():
            return f


@dataclass(frozen=True)
class OracleReport:
    trials: int
    agreements: int
    agreement_rate: float
    point_cap: int
    disagreements: tuple
    records: tuple | None

    def to_json_dict(self):
        return {"trials": self.trials, "agreements": self.agreements,
                "agreement_rate": self.agreement_rate,
                "point_cap": self.point_cap,
                "disagreements": list(self.disagreements),
                "records": list(self.records) if self.records is not None else None}


def oracle_check(trials: int, seed, *, qs=(2, 3, 5), n_choices=(1, 2, 3),
                 max_bezout: int = 8, point_cap: int = DEFAULT_POINT_CAP,
                 keep_records: bool = False) -> OracleReport:
    """Randomized agreement test between the rank gate and point search.

    Half the instances are forced to contain a rational zero so both
    branches of the verdict are exercised.  The search depth is clamped to
    the point budget and recorded per instance; a gate verdict of
    "nonempty" with no witness found triggers one escalated search before
    a disagreement is recorded.
    """
    rng = random.Random(f"{seed}:oracle")
    agreements = 0
    disagreements = []
    records = [] if keep_records else None
    for t in range(trials):
        n = rng.choice(n_choices)
        q = rng.choice(qs)
        field = Field(q)
        degrees = rng.choice(_degree_tuples(n + 1, max_bezout))
        rooted = rng.random() < 0.5
        forms = []
        if rooted:
            point = rng.choice(list(projective_points(field, n)))
            forms = [_rooted_form(rng, field, n + 1, e, point) for e in degrees]
        else:
            forms = [_random_form(rng, field, n + 1, e) for e in degrees]
        ts = TestSystem("oracle", field, n + 1, tuple(forms), degrees)
        mac = projective_empty(ts)
        prod = 1
        for e in degrees:
            prod *= e
        requested = max(prod, 4)
        used = min(requested, feasible_max_ext(field, n, point_cap, requested))
        used = max(used, 1)
        brute = brute_force_empty(ts, max_ext=used, point_cap=point_cap * 2)
        if not mac.empty and not brute.nonempty and used < requested:
            # gate says a zero exists over the closure; look deeper once
            deeper = min(requested,
                         feasible_max_ext(field, n, point_cap * 20, requested))
            if deeper > used:
                brute = brute_force_empty(ts, max_ext=deeper,
                                          point_cap=point_cap * 40)
        agree = mac.empty == (not brute.nonempty)
        record = {"n": n, "q": q, "degrees": list(degrees), "rooted": rooted,
                  "gate_empty": mac.empty, "witness_found": brute.nonempty,
                  "witness_ext": brute.ext_degree,
                  "searched_up_to": brute.searched_up_to,
                  "requested_max_ext": requested,
                  "clamped": brute.searched_up_to < requested,
                  "agree": agree}
        if agree:
            agreements += 1
        else:
            disagreements.append(record)
        if keep_records:
            records.append(record)
    return OracleReport(trials=trials, agreements=agreements,
                        agreement_rate=agreements / trials if trials else 1.0,
                        point_cap=point_cap,
                        disagreements=tuple(disagreements),
                        records=tuple(records) if keep_records else None)
