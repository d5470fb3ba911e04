"""Exact analytic distribution of the decoder-input error vector.

Every coordinate of e' = x*r2 + r1*y + e is Bernoulli; its parameter is
computed in exact rational arithmetic:

  p_tilde -- probability that a coordinate of a product of two fixed-weight
             vectors is 1: sum over odd overlap sizes l of
             C(n,l) C(n-l, w-l) C(n-w, w_r-l), divided by C(n,w) C(n,w_r).
  p_star  -- parameter of a coordinate of e': the XOR of two independent
             p_tilde coordinates and an independent Bernoulli(w_e/n) bit.

The weight of e' is modelled as Binomial(length, p_star).  Single masses
stay exact rationals; large-length tail sums and quantiles are evaluated
with mpmath at >= 256 fractional bits (exact summation over tens of
thousands of 500-digit rationals is hopeless, and directed high-precision
evaluation keeps the error far below every reported digit).
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb

import mpmath as mp

MIN_PRECISION_BITS = 320
_EXACT_TAIL_MAX = 64


def p_tilde(n: int, w: int, w_r: int) -> Fraction:
    """Bernoulli parameter of one coordinate of a product of uniform
    weight-w and weight-w_r vectors in R."""
    _check_weights(n, w=w, w_r=w_r)
    num = 0
    for l in range(1, min(w, w_r) + 1, 2):
        num += comb(n, l) * comb(n - l, w - l) * comb(n - w, w_r - l)
    return Fraction(num, comb(n, w) * comb(n, w_r))


def p_star(n: int, w: int, w_r: int, w_e: int) -> Fraction:
    """Bernoulli parameter of one coordinate of the full error vector."""
    _check_weights(n, w=w, w_r=w_r, w_e=w_e)
    pt = p_tilde(n, w, w_r)
    t1 = 2 * pt * (1 - pt)              # coordinate of x*r2 + r1*y
    t0 = (1 - pt) ** 2 + pt * pt
    q = Fraction(w_e, n)
    return t1 * (1 - q) + t0 * q


def _check_weights(n: int, **weights: int) -> None:
    if n <= 0:
        raise ValueError("n must be positive")
    for name, w in weights.items():
        if not 0 <= w <= n:
            raise ValueError(f"{name}={w} out of range for n={n}")


def binomial_pmf(n: int, p: Fraction, d: int) -> Fraction:
    """Exact Pr[W = d] for W ~ Binomial(n, p)."""
    if not 0 <= d <= n:
        raise ValueError(f"d={d} out of range")
    p = Fraction(p)
    return comb(n, d) * p**d * (1 - p) ** (n - d)


def log2_frac(x: Fraction, prec: int = MIN_PRECISION_BITS) -> float:
    """log2 of a positive rational, evaluated at >= prec fractional bits
    before conversion to float (fixed-precision floats would underflow on
    tail masses near 2^-256; the scaled evaluation cannot)."""
    if x <= 0:
        raise ValueError("log2 of a non-positive value")
    with mp.workprec(max(prec, MIN_PRECISION_BITS)):
        v = mp.log(mp.mpf(x.numerator), 2) - mp.log(mp.mpf(x.denominator), 2)
        return float(v)


def format_log2(x: Fraction, decimals: int = 2, prec: int = MIN_PRECISION_BITS) -> str:
    """log2 value rounded half-even at the configured number of decimals."""
    with mp.workprec(max(prec, MIN_PRECISION_BITS)):
        v = mp.log(mp.mpf(x.numerator), 2) - mp.log(mp.mpf(x.denominator), 2)
        d = Decimal(mp.nstr(v, 40))
    return str(d.quantize(Decimal(1).scaleb(-decimals)))


def decimal_string(x: Fraction, digits: int = 50) -> str:
    """Decimal rendering of a rational at the given precision."""
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


class WeightPmf:
    """Binomial weight model Binomial(n, p) with exact masses and
    high-precision tails; tail evaluations are cached."""

    def __init__(self, n: int, p: Fraction, prec: int = MIN_PRECISION_BITS):
        if not 0 <= p <= 1:
            raise ValueError("p must lie in [0, 1]")
        self.n = n
        self.p = Fraction(p)
        self.prec = max(prec, MIN_PRECISION_BITS)
        self._tail_cache: dict[int, mp.mpf] = {}

    def mass(self, d: int) -> Fraction:
        return binomial_pmf(self.n, self.p, d)

    def tail_gt_exact(self, t: int) -> Fraction:
        """Exact Pr[W > t] over the common denominator den(p)^n; cost grows
        with n, intended for small n."""
        if t < 0:
            return Fraction(1)
        if t >= self.n:
            return Fraction(0)
        a, b = self.p.numerator, self.p.denominator
        c = b - a
        if a == 0:
            return Fraction(0)
        if c == 0:
            return Fraction(1)
        lo = t + 1
        num = 0
        apow = a**lo
        cpow = c ** (self.n - lo)
        for d in range(lo, self.n + 1):
            num += comb(self.n, d) * apow * cpow
            apow *= a
            cpow //= c
        return Fraction(num, b**self.n)

    def tail_gt(self, t: int) -> mp.mpf:
        """Pr[W > t] summed upward from t+1 until terms stop contributing
        at the working precision."""
        if t < 0:
            return mp.mpf(1)
        if t >= self.n:
            return mp.mpf(0)
        if t in self._tail_cache:
            return self._tail_cache[t]
        with mp.workprec(self.prec):
            n = self.n
            p_mp = mp.mpf(self.p.numerator) / mp.mpf(self.p.denominator)
            q_mp = 1 - p_mp
            k = t + 1
            log_term = (mp.loggamma(n + 1) - mp.loggamma(k + 1) - mp.loggamma(n - k + 1)
                        + k * mp.log(p_mp) + (n - k) * mp.log(q_mp))
            term = mp.e**log_term
            total = term
            eps = mp.mpf(2) ** (-self.prec + 8)
            while k < n:
                term = term * p_mp * (n - k) / (q_mp * (k + 1))
                total += term
                k += 1
                if term < total * eps:
                    break
        self._tail_cache[t] = total
        return total

    def log2_tail_gt(self, t: int) -> float:
        tail = self.tail_gt(t)
        if tail == 0:
            return float("-inf")
        with mp.workprec(self.prec):
            return float(mp.log(tail, 2))

    def upper_quantile(self, q) -> int:
        """Smallest t with Pr[W > t] <= q: the reported weight such that a
        fraction q of vectors weigh more than it.

        Small lengths are resolved in exact arithmetic so that ties on the
        boundary are decided correctly; at large lengths ties cannot occur
        within the working precision.
        """
        exact = self.n <= _EXACT_TAIL_MAX and isinstance(q, (Fraction, int))
        q_cmp = Fraction(q) if exact else _to_mpf(q, self.prec)
        if q_cmp < 0:
            raise ValueError("tail mass must be nonnegative")
        tail = self.tail_gt_exact if exact else self.tail_gt
        lo, hi = 0, self.n
        while lo < hi:
            mid = (lo + hi) // 2
            if tail(mid) <= q_cmp:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def mean(self) -> Fraction:
        return self.n * self.p

    def pmf_rows(self, lo: int | None = None, hi: int | None = None) -> list[tuple[int, float]]:
        """(weight, probability) rows covering the bulk of the mass, for
        histogram overlays; bounds default to mean +- 8 standard deviations."""
        if lo is None or hi is None:
            mu = float(self.mean())
            sigma = float(self.n * self.p * (1 - self.p)) ** 0.5
            lo = max(0, int(mu - 8 * sigma)) if lo is None else lo
            hi = min(self.n, int(mu + 8 * sigma) + 1) if hi is None else hi
        with mp.workprec(self.prec):
            p_mp = mp.mpf(self.p.numerator) / mp.mpf(self.p.denominator)
            q_mp = 1 - p_mp
            rows = []
            log_term = (mp.loggamma(self.n + 1) - mp.loggamma(lo + 1)
                        - mp.loggamma(self.n - lo + 1)
                        + lo * mp.log(p_mp) + (self.n - lo) * mp.log(q_mp))
            term = mp.e**log_term
            for d in range(lo, hi + 1):
                rows.append((d, float(term)))
                if d < self.n:
                    term = term * p_mp * (self.n - d) / (q_mp * (d + 1))
        return rows


def _to_mpf(q, prec: int) -> mp.mpf:
    with mp.workprec(prec):
        if isinstance(q, Fraction):
            return mp.mpf(q.numerator) / mp.mpf(q.denominator)
        if isinstance(q, str):
            return mp.mpf(q)
        return mp.mpf(q)


def model_report(n: int, w: int, w_r: int, w_e: int, *,
                 length: int | None = None,
                 tail_masses=(Fraction(1, 1000), Fraction(1, 10_000),
                              Fraction(1, 100_000), Fraction(1, 1_000_000)),
                 digits: int = 50) -> dict:
    """JSON-ready record of the analytic model for one parameter set."""
    pt = p_tilde(n, w, w_r)
    ps = p_star(n, w, w_r, w_e)
    length = n if length is None else length
    pmf = WeightPmf(length, ps)
    tails = []
    for q in tail_masses:
        t = pmf.upper_quantile(q)
        tails.append({
            "tail_mass": decimal_string(Fraction(q), 12),
            "quantile": t,
            "log2_tail_at_quantile": pmf.log2_tail_gt(t),
        })
    return {
        "n": n,
        "w": w,
        "w_r": w_r,
        "w_e": w_e,
        "length": length,
        "p_tilde": decimal_string(pt, digits),
        "p_star": decimal_string(ps, digits),
        "log2_tails": tails,
    }
