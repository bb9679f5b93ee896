"""Vectorised inner loops for the O(p^2) character-sum computations.

All kernels take residues already reduced into [0, p) with p < 2^31, so
every intermediate product fits in int64.  Results are exact integers.
"""

from __future__ import annotations

import numpy as np

from .finite_field import TABLE_LIMIT, PrimeCtx

# Rows of t processed per block; keeps peak memory near CHUNK * p * 8 bytes.
CHUNK = 128


def horner_vec(coeffs, xs: np.ndarray, p: int) -> np.ndarray:
    """Evaluate a coefficient list (low to high) at every entry of xs, mod p."""
    if not coeffs:
        return np.zeros(len(xs), dtype=np.int64)
    acc = np.full(len(xs), coeffs[-1] % p, dtype=np.int64)
    for c in reversed(coeffs[:-1]):
        acc = (acc * xs + c % p) % p
    return acc


def powmod_vec(xs: np.ndarray, e: int, p: int) -> np.ndarray:
    """Elementwise xs^e mod p (e >= 0), with 0^0 = 1."""
    out = np.ones(len(xs), dtype=np.int64)
    base = xs % p
    while e:
        if e & 1:
            out = (out * base) % p
        base = (base * base) % p
        e >>= 1
    return out


def legendre_sum(coeffs, ctx: PrimeCtx) -> int:
    """Sum of the Legendre character of f(x) over x = 0..p-1."""
    p = ctx.p
    if p >= TABLE_LIMIT:
        raise ValueError(f"p = {p} too large for the vectorised kernel")
    xs = np.arange(p, dtype=np.int64)
    vals = horner_vec([c % p for c in coeffs], xs, p)
    return int(ctx.chi[vals].sum(dtype=np.int64))


def trace_row_vec(t_coeff_rows, ctx: PrimeCtx) -> list[int]:
    """Traces -sum_x chi(f(x, t)) for all t = 0..p-1.

    ``t_coeff_rows`` lists, for j = 0..deg_T, the values of the coefficient
    polynomial of T^j at every x, as int64 arrays of length p.
    """
    p = ctx.p
    chi = ctx.chi
    out = np.empty(p, dtype=np.int64)
    top = t_coeff_rows[-1]
    rest = t_coeff_rows[:-1]
    for lo in range(0, p, CHUNK):
        hi = min(lo + CHUNK, p)
        tb = np.arange(lo, hi, dtype=np.int64)[:, None]
        acc = np.broadcast_to(top, (hi - lo, p)).copy()
        for row in reversed(rest):
            acc = (acc * tb + row) % p
        out[lo:hi] = -chi[acc].sum(axis=1, dtype=np.int64)
    return out.tolist()
