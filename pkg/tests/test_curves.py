import pytest

from hyprank.curves import (
    HyperFamily,
    Specialization,
    hasse_weil_bound,
    specialize,
    trace,
    trace_row,
)
from hyprank.finite_field import PrimeCtx, _small_primes
from hyprank.polynomials import IntPoly, mod_gcd, parse_bipoly, reduce_mod


def fam_of(text, genus, label="test", bad=()):
    return HyperFamily(label, genus, parse_bipoly(text), frozenset(bad))


def test_family_validation():
    fam_of("x^3 + x + T", 1)
    with pytest.raises(ValueError):
        fam_of("x^3 + x + T", 2)  # genus mismatch
    with pytest.raises(ValueError):
        fam_of("x^4 + T", 1)  # even x-degree
    with pytest.raises(ValueError):
        HyperFamily("g0", 0, parse_bipoly("x + T"))
    with pytest.raises(ValueError):
        # (x + T)^2 * (x + 1): generic fiber has a double root
        fam_of("(x + T)*(x + T)*(x + 1)", 1)


def test_family_json_round_trip():
    fam = fam_of("x^5 + x*T + 3", 2, bad=(3, 11))
    back = HyperFamily.from_json(fam.to_json())
    assert back.label == fam.label
    assert back.genus == fam.genus
    assert back.F == fam.F
    assert back.bad_primes == frozenset({3, 11})


def test_specialization_invariant():
    fam = fam_of("x^3 + x + T", 1)
    spec = specialize(fam, 4)
    assert spec.fx == parse_bipoly("x^3 + x + 4").t_coeff(0)
    with pytest.raises(ValueError):
        Specialization(fam, 4, IntPoly((0, 1)))


def test_trace_examples():
    ctx = PrimeCtx(5)
    fam = fam_of("x^3 + x + T", 1)
    assert trace(specialize(fam, 0), ctx) == 2  # y^2 = x^3 + x has 4 points over F_5
    cusp = fam_of("x^3 + T", 1)
    assert trace(specialize(cusp, 0), ctx) == 0  # cubing permutes F_5
    # all non-constant coefficients divisible by p, constant a nonzero square
    fam7 = fam_of("7*x^3 + 7*x + 4 + 7*T", 1)
    assert trace(specialize(fam7, 1), PrimeCtx(7)) == -7


def test_trace_respects_bad_primes():
    fam = fam_of("x^3 + x + T", 1, bad=(5,))
    with pytest.raises(ValueError):
        trace(specialize(fam, 0), PrimeCtx(5))
    with pytest.raises(ValueError):
        trace_row(fam, PrimeCtx(5))


def test_trace_row_shape_and_sums():
    cusp = fam_of("x^3 + T", 1)
    row = trace_row(cusp, PrimeCtx(5))
    assert len(row) == 5
    assert sum(row) == 0  # inner t-sum is a complete linear character sum
    assert len(trace_row(cusp, PrimeCtx(3))) == 3
    shift = fam_of("x^3 + T^2", 1)
    assert sum(trace_row(shift, PrimeCtx(7))) == 0  # (L_f - 1) p with L_f = 1 for x^3


@pytest.mark.parametrize("text,genus", [("x^3 + x + T", 1), ("x^5 + x^2*T + T^2 + 3", 2)])
def test_trace_row_matches_pointwise_trace(text, genus):
    fam = fam_of(text, genus)
    for p in (3, 5, 11, 17):
        ctx = PrimeCtx(p)
        row = trace_row(fam, ctx)
        assert row == [trace(specialize(fam, t), ctx) for t in range(p)]


def test_trace_equals_point_count():
    # a(p) = p + 1 - #points, counting affine solutions plus one at infinity
    fam = fam_of("x^3 + x + T", 1)
    for p in [p for p in _small_primes(100) if p > 2]:
        ctx = PrimeCtx(p)
        for t in range(min(p, 6)):
            fx = fam.F.specialize_t(t)
            fbar = reduce_mod(fx, ctx)
            affine = 0
            for x in range(p):
                v = fbar.evaluate(x)
                if v == 0:
                    affine += 1
                elif ctx.is_qr(v):
                    affine += 2
            assert trace(specialize(fam, t), ctx) == p + 1 - (affine + 1)


def test_vector_kernel_matches_scalar_sum():
    import random

    from hyprank.curves import trace_of_poly
    from hyprank.finite_field import legendre
    from hyprank.polynomials import IntPoly

    rng = random.Random(42)
    for p in (3, 5, 13, 101, 257):
        ctx = PrimeCtx(p)
        for _ in range(5):
            f = IntPoly([rng.randint(-(10**9), 10**9) for _ in range(rng.randint(1, 8))])
            fbar = reduce_mod(f, ctx)
            scalar = -sum(legendre(fbar.evaluate(x), ctx) for x in range(p))
            assert trace_of_poly(f, ctx) == scalar


def test_hasse_weil_on_good_fibers():
    fam = fam_of("x^3 + x + T", 1)
    for p in [p for p in _small_primes(60) if p > 2]:
        ctx = PrimeCtx(p)
        bound = hasse_weil_bound(fam.genus, p)
        row = trace_row(fam, ctx)
        for t in range(p):
            fx = fam.F.specialize_t(t)
            fbar = reduce_mod(fx, ctx)
            if fbar.degree != 3:
                continue
            if mod_gcd(fbar, fbar.derivative()).degree != 0:
                continue  # singular fiber: the bound may fail
            assert abs(row[t]) <= bound
