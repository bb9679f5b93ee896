"""Odd-degree hyperelliptic families y^2 = F(x, T) and their Frobenius traces.

A family has genus g and x-degree 2g+1, so each fiber has a single point at
infinity and the trace of Frobenius at a good odd prime is the negated
Legendre sum of F(x, t) over x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from . import _kernels
from .finite_field import TABLE_LIMIT, PrimeCtx, legendre
from .polynomials import BiPoly, IntPoly, rat_gcd, reduce_mod


@dataclass(frozen=True, eq=False)
class HyperFamily:
    """One-parameter family y^2 = F(x, T) of genus g curves.

    Invariants checked at construction: deg_x F = 2g+1 and the generic
    fiber is squarefree (so the family is a genuine curve over Q(T), not a
    square times something smaller).
    """

    label: str
    genus: int
    F: BiPoly
    bad_primes: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "bad_primes", frozenset(self.bad_primes))
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        n = 2 * self.genus + 1
        if self.F.deg_x != n:
            raise ValueError(
                f"deg_x F = {self.F.deg_x} does not match 2*genus+1 = {n}"
            )
        if not _generic_fiber_squarefree(self.F):
            raise ValueError("generic fiber of the family is not squarefree")

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "genus": self.genus,
            "F": self.F.to_json(),
            "bad_primes": sorted(self.bad_primes),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HyperFamily":
        return cls(
            label=str(obj["label"]),
            genus=int(obj["genus"]),
            F=BiPoly.from_json(obj["F"]),
            bad_primes=frozenset(int(p) for p in obj.get("bad_primes", [])),
        )


def _generic_fiber_squarefree(F: BiPoly) -> bool:
    """Exact check that gcd_x(F, dF/dx) over Q(T) is constant.

    The x-discriminant of F is a nonzero polynomial in T of degree at most
    (2*deg_x - 1) * deg_T whenever the generic fiber is squarefree, and the
    x-leading coefficient has at most deg_T roots; so scanning one more
    integer specialization than those two bounds combined is conclusive.
    """
    n = F.deg_x
    m = max(F.deg_t, 0)
    bound = (2 * n - 1) * m + m + 1
    for t in range(bound + 1):
        ft = F.specialize_t(t)
        if ft.degree != n:
            continue
        if rat_gcd(ft.to_rat(), ft.derivative().to_rat()).degree == 0:
            return True
    return False


@dataclass(frozen=True, eq=False)
class Specialization:
    """The fiber of a family at an integer parameter value."""

    family: HyperFamily
    t: int
    fx: IntPoly

    def __post_init__(self):
        if self.fx != self.family.F.specialize_t(self.t):
            raise ValueError("fx does not equal F(x, t)")


def specialize(fam: HyperFamily, t: int) -> Specialization:
    return Specialization(fam, t, fam.F.specialize_t(t))


def trace(spec: Specialization, ctx: PrimeCtx) -> int:
    """Trace of Frobenius a(p) = p + 1 - #points = -sum_x (f(x)/p).

    Uses the naive affine character sum for every fiber, including singular
    ones and fibers whose reduction drops degree.
    """
    _check_prime(spec.family, ctx)
    return trace_of_poly(spec.fx, ctx)


def trace_of_poly(fx: IntPoly, ctx: PrimeCtx) -> int:
    """Negated Legendre sum of a single integer polynomial mod p."""
    p = ctx.p
    if p < TABLE_LIMIT:
        return -_kernels.legendre_sum(fx.coeffs, ctx)
    fbar = reduce_mod(fx, ctx)
    return -sum(legendre(fbar.evaluate(x), ctx) for x in range(p))


def trace_row(fam: HyperFamily, ctx: PrimeCtx) -> list[int]:
    """Traces of every specialization t = 0..p-1 at one prime.

    F is reduced mod p once; the double loop over (t, x) then runs entirely
    on residue tables.
    """
    _check_prime(fam, ctx)
    p = ctx.p
    Fbar = reduce_mod(fam.F, ctx)
    if p >= TABLE_LIMIT:
        return [trace_of_poly(fam.F.specialize_t(t), ctx) for t in range(p)]
    xs = np.arange(p, dtype=np.int64)
    deg_t = max(Fbar.deg_t, 0)
    rows = [
        _kernels.horner_vec(list(Fbar.t_coeff(j).coeffs), xs, p)
        for j in range(deg_t + 1)
    ]
    return _kernels.trace_row_vec(rows, ctx)


def hasse_weil_bound(genus: int, p: int) -> int:
    """Slack bound 2g * floor(2*sqrt(p)) on |a(p)| for good squarefree fibers."""
    return 2 * genus * isqrt(4 * p)


def _check_prime(fam: HyperFamily, ctx: PrimeCtx) -> None:
    if ctx.p in fam.bad_primes:
        raise ValueError(f"p = {ctx.p} is in the family's bad-prime skip set")
