"""Moment statistics of Frobenius traces and the Nagao-style rank estimator.

The r-th moment at p is A_r(p) = (1/p) * sum over t = 0..p-1 of a_t^r,
with a_t the trace of the fiber at T = t.  Moments are exact rationals;
the only floating-point values in the package are the two normalizations
of the Nagao partial sum (standard doubles).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Callable, Optional

from .curves import HyperFamily, trace_row
from .finite_field import PrimeCtx, PrimeRange, primes_in
from .polynomials import (
    BiPoly,
    IntPoly,
    degree_pattern_mod,
    mod_gcd,
    reduce_mod,
    root_count_mod,
    squarefree_over_q,
)


class NonGenericPrime(Exception):
    """A closed-form prediction does not apply at this prime; skip it."""


@dataclass(frozen=True)
class MomentRow:
    p: int
    value: Fraction              # A_r(p), exact
    predicted: Optional[Fraction]  # closed-form A_1(p) when applicable
    generic: Optional[bool]      # None when no prediction is defined

    @property
    def match(self) -> Optional[bool]:
        if self.predicted is None:
            return None
        return self.value == self.predicted


@dataclass(frozen=True)
class MomentSeries:
    label: str
    r: int
    rows: tuple[MomentRow, ...]


@dataclass(frozen=True)
class NagaoEstimate:
    """Partial sums of -A_1(p) under the two standard normalizations.

    s_theta divides the log-weighted sum by the cutoff P; s_pi divides the
    unweighted sum by the number of primes used.  Both converge to the same
    limit, so their agreement is a convergence diagnostic.
    """

    P: int
    s_theta: float
    s_pi: float
    n_primes: int
    skipped: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "P": self.P,
            "s_theta": self.s_theta,
            "s_pi": self.s_pi,
            "n_primes": self.n_primes,
            "skipped": list(self.skipped),
        }


def power_sum(fam: HyperFamily, r: int, ctx: PrimeCtx) -> int:
    """p * A_r(p) = sum of a_t^r over the full period, exact."""
    if r < 1:
        raise ValueError("moment order must be >= 1")
    return sum(a**r for a in trace_row(fam, ctx))


def moment(fam: HyperFamily, r: int, ctx: PrimeCtx) -> Fraction:
    """The exact r-th moment A_r(p)."""
    return Fraction(power_sum(fam, r, ctx), ctx.p)


def predict_first_moment(fam_kind: str, params, ctx: PrimeCtx) -> int:
    """Closed-form value of -p * A_1(p) for the built-in family kinds.

    shift_square  y^2 = f(x) + T^2      ->  (L_f - 1) * p
    linear_twist  y^2 = f(x) * T + 1    ->  L_f * p
    big_rank      quadratic-in-T model  ->  (4g + 2) * p

    with L_f the number of distinct roots of f mod p.  Raises
    NonGenericPrime when the stated genericity conditions fail (callers
    scanning prime ranges should skip such primes).
    """
    p = ctx.p
    if fam_kind == "shift_square":
        _require_squarefree_mod_p(params, ctx)
        return (root_count_mod(params, ctx) - 1) * p
    if fam_kind == "linear_twist":
        if params.lead % p == 0:
            raise NonGenericPrime(f"p = {p} divides the leading coefficient")
        _require_squarefree_mod_p(params, ctx)
        return root_count_mod(params, ctx) * p
    if fam_kind == "big_rank":
        if params.L % p == 0 or params.A % p == 0:
            raise NonGenericPrime(f"p = {p} divides the scaling data")
        squares = {r * r % p for r in params.rho}
        if len(squares) != len(params.rho):
            raise NonGenericPrime(f"prescribed roots collide mod {p}")
        return (4 * params.genus + 2) * p
    raise ValueError(f"unknown family kind {fam_kind!r}")


def _require_squarefree_mod_p(f: IntPoly, ctx: PrimeCtx) -> None:
    fbar = reduce_mod(f, ctx)
    if fbar.is_zero:
        raise NonGenericPrime(f"f vanishes identically mod {ctx.p}")
    if mod_gcd(fbar, fbar.derivative()).degree != 0:
        raise NonGenericPrime(f"f is not squarefree mod {ctx.p}")


@dataclass(frozen=True, eq=False)
class BuiltinFamily:
    """A family plus the data needed for its closed-form prediction."""

    kind: str
    fam: HyperFamily
    f: Optional[IntPoly] = None
    construction: object = None
    power: Optional[tuple[int, int, int]] = None

    def predict(self, ctx: PrimeCtx) -> Optional[int]:
        """-p * A_1 prediction, or None when the kind has no closed form."""
        if self.kind in ("shift_square", "linear_twist"):
            return predict_first_moment(self.kind, self.f, ctx)
        if self.kind == "big_rank":
            return predict_first_moment(self.kind, self.construction, ctx)
        return None


def make_shift_square(f: IntPoly, label: str | None = None) -> BuiltinFamily:
    """y^2 = f(x) + T^2 with deg f = 2g+1."""
    g = _genus_from_degree(f)
    F = BiPoly.from_x_poly(f) + BiPoly.term(1, 0, 2)
    fam = HyperFamily(label or f"shift_square({f})", g, F)
    return BuiltinFamily("shift_square", fam, f=f)


def make_linear_twist(f: IntPoly, label: str | None = None) -> BuiltinFamily:
    """y^2 = f(x) * T + 1 with deg f = 2g+1."""
    g = _genus_from_degree(f)
    F = BiPoly.from_x_poly(f, t_power=1) + BiPoly.const(1)
    fam = HyperFamily(label or f"linear_twist({f})", g, F)
    return BuiltinFamily("linear_twist", fam, f=f)


def make_power(n: int, h: int, k: int, label: str | None = None) -> BuiltinFamily:
    """y^2 = x^n + x^h T^k; only smooth shapes (h <= 1) form a valid family."""
    F = BiPoly.term(1, n, 0) + BiPoly.term(1, h, k)
    fam = HyperFamily(label or f"power({n},{h},{k})", (n - 1) // 2, F)
    return BuiltinFamily("power", fam, power=(n, h, k))


def make_big_rank(construction, label: str | None = None) -> BuiltinFamily:
    """Wrap a finished quadratic-in-T construction for moment scans."""
    fam = construction.family
    if label is not None:
        fam = HyperFamily(label, fam.genus, fam.F, fam.bad_primes)
    return BuiltinFamily("big_rank", fam, construction=construction)


def _genus_from_degree(f: IntPoly) -> int:
    if f.degree < 3 or f.degree % 2 == 0:
        raise ValueError(f"deg f = {f.degree}; an odd degree >= 3 is required")
    return (f.degree - 1) // 2


# ---------------------------------------------------------------------------
# series over prime ranges


def _power_sum_task(fam: HyperFamily, r: int, p: int) -> tuple[int, int]:
    return p, power_sum(fam, r, PrimeCtx(p))


def _power_sums(fam, r, primes, jobs) -> dict[int, int]:
    if jobs <= 1 or len(primes) <= 1:
        return {p: power_sum(fam, r, PrimeCtx(p)) for p in primes}
    task = partial(_power_sum_task, fam, r)
    chunk = max(1, len(primes) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return dict(pool.map(task, primes, chunksize=chunk))


def moment_series(
    source: BuiltinFamily | HyperFamily,
    r: int,
    prange: PrimeRange,
    jobs: int = 1,
) -> MomentSeries:
    """Exact per-prime moments with closed-form predictions where defined.

    Rows are emitted for every computed prime, ordered by p; non-generic
    primes keep their exact value with the generic flag cleared.
    """
    bf = source if isinstance(source, BuiltinFamily) else BuiltinFamily("custom", source)
    fam = bf.fam
    primes = [p for p in primes_in(prange) if p not in fam.bad_primes]
    sums = _power_sums(fam, r, primes, jobs)
    rows = []
    for p in primes:
        value = Fraction(sums[p], p)
        predicted = None
        generic = None
        if r == 1 and bf.kind in ("shift_square", "linear_twist", "big_rank"):
            try:
                predicted = Fraction(-bf.predict(PrimeCtx(p)), p)
                generic = True
            except NonGenericPrime:
                generic = False
        rows.append(MomentRow(p, value, predicted, generic))
    return MomentSeries(fam.label, r, tuple(rows))


def nagao_sum(
    fam: HyperFamily,
    prange: PrimeRange,
    jobs: int = 1,
    predictor: Optional[Callable[[int], int]] = None,
) -> NagaoEstimate:
    """Partial Nagao sums over [lo, hi] under both normalizations.

    By default -A_1(p) is computed exactly from the trace rows.  When
    ``predictor`` is given it must return the closed-form -p * A_1(p) (and
    may raise NonGenericPrime to exclude a prime); this is the cheap path
    for large cutoffs where the O(p^2) brute force is out of reach.
    """
    all_primes = primes_in(PrimeRange(prange.lo, prange.hi))
    skipped = [p for p in all_primes if p in prange.skip or p in fam.bad_primes]
    primes = [p for p in all_primes if p not in prange.skip and p not in fam.bad_primes]

    values: list[tuple[int, Fraction]] = []
    if predictor is not None:
        for p in primes:
            try:
                values.append((p, Fraction(predictor(p), p)))
            except NonGenericPrime:
                skipped.append(p)
    else:
        sums = _power_sums(fam, 1, primes, jobs)
        values = [(p, Fraction(-sums[p], p)) for p in primes]

    P = prange.hi
    theta = 0.0
    pi_sum = 0.0
    for p, v in sorted(values):
        fv = float(v)
        theta += fv * math.log(p)
        pi_sum += fv
    n = len(values)
    return NagaoEstimate(
        P=P,
        s_theta=theta / P if P > 0 else 0.0,
        s_pi=pi_sum / n if n else 0.0,
        n_primes=n,
        skipped=tuple(sorted(skipped)),
    )


# ---------------------------------------------------------------------------
# symmetric-group witness via factorization patterns


@dataclass(frozen=True)
class SnWitnessReport:
    """Heuristic certificate that Gal(f) is the full symmetric group.

    Collects factorization degree patterns of f mod p across a prime scan
    and reports FOUND when an n-cycle, an (n-1)-cycle and a transposition
    pattern have all appeared; those cycle types generate S_n.  This is a
    one-sided certificate: INCONCLUSIVE does not refute S_n.
    """

    degree: int
    found: bool
    witnesses: dict
    census: dict
    scanned: int
    ramified: int

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "status": "FOUND" if self.found else "INCONCLUSIVE",
            "witnesses": self.witnesses,
            "census": {
                "+".join(map(str, k)) if isinstance(k, tuple) else k: v
                for k, v in sorted(self.census.items(), key=lambda kv: str(kv[0]))
            },
            "scanned": self.scanned,
            "ramified": self.ramified,
        }


def sn_witness(f: IntPoly, prange: PrimeRange) -> SnWitnessReport:
    """Scan primes for the n-cycle / (n-1)-cycle / transposition patterns.

    For degree < 3 the certificate degenerates (the n-cycle and the
    transposition patterns coincide), so the scan always reports
    INCONCLUSIVE there, returning the pattern census only.
    """
    if f.is_zero or not squarefree_over_q(f):
        raise ValueError("polynomial must be squarefree over Q")
    n = f.degree
    targets = {
        "n_cycle": (n,),
        "n_minus_1_cycle": tuple(sorted((1, n - 1))),
        "transposition": tuple(sorted([1] * (n - 2) + [2])),
    }
    witnesses: dict[str, Optional[int]] = {k: None for k in targets}
    census: dict = {}
    scanned = 0
    ramified = 0
    for p in primes_in(prange):
        scanned += 1
        pattern = degree_pattern_mod(f, PrimeCtx(p))
        if pattern is None:
            ramified += 1
            census["ramified"] = census.get("ramified", 0) + 1
            continue
        census[pattern] = census.get(pattern, 0) + 1
        if sum(pattern) != n:
            continue  # degree dropped mod p; not usable as a cycle type
        for name, target in targets.items():
            if witnesses[name] is None and pattern == target:
                witnesses[name] = p
    found = n >= 3 and all(v is not None for v in witnesses.values())
    return SnWitnessReport(n, found, witnesses, census, scanned, ramified)
