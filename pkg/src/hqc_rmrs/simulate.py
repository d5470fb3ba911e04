"""Reproducible Monte Carlo engine.

Four experiments:

  weights     -- sample the scheme's raw randomness, form the decoder-input
                 error x*r2 + r1*y + e, truncate to the code length and
                 histogram its Hamming weight; reports empirical tail
                 quantiles next to the analytic binomial ones.
  restricted  -- same error vector, weight measured on a short prefix
                 (a single inner-code support), with the matched binomial
                 pmf for overlay.
  rm_dfr      -- random inner codewords over a BSC(p), ML-decoded; the
                 failure frequency is the observed inner DFR.
  concat_dfr  -- full concatenated decoding per trial, either over a
                 BSC or with genuine scheme vectors (keygen/encrypt/decrypt),
                 swept over outer-code lengths.

Trials are processed in fixed-size batches; batch b draws from Philox
streams keyed (seed, domain) at counter b (see prng).  Results are exact
integer aggregates, so any worker count and any scheduling produce
bit-identical reports.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from multiprocessing import Pool

import numpy as np

from . import prng, scheme
from .concat import ConcatCode, concat_decode, concat_encode
from .error_model import WeightPmf, decimal_string, p_star
from .dfr import concat_dfr as concat_dfr_bound
from .dfr import quantize_up, rm_dfr_improved, rm_dfr_simple
from .params import HqcParams, WeightSimParams, get_params, get_weight_set
from .ring import validate_primitive_prime
from .rm import BASE_LENGTH, RmCode, codeword_table, correlations, decode_correlations
from .rs import DecodeFailure, RsCode

EXPERIMENTS = ("weights", "restricted", "rm_dfr", "concat_dfr")
TAIL_MASSES = (Fraction(1, 10**3), Fraction(1, 10**4),
               Fraction(1, 10**5), Fraction(1, 10**6))
MIN_TAIL_EXCEEDANCES = 100

WEIGHTS_BATCH = 512
RM_BATCH = 4096
CONCAT_BATCH = 128


@dataclass(frozen=True)
class TrialPlan:
    experiment: str
    trials: int
    seed: int
    workers: int = 1
    set_name: str | None = None
    n: int | None = None
    w: int | None = None
    w_r: int | None = None
    w_e: int | None = None
    truncate_len: int | None = None
    support_len: int | None = None
    p: str | None = None              # decimal string, parsed exactly
    multiplicity: int | None = None
    channel: str | None = None        # concat_dfr: "bsc" or "hqc"
    rs_length: int | None = None
    sweep: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"experiment must be one of {EXPERIMENTS}")
        if self.trials <= 0:
            raise ValueError("trials must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["sweep"] is not None:
            d["sweep"] = list(d["sweep"])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrialPlan":
        d = dict(d)
        if d.get("sweep") is not None:
            d["sweep"] = tuple(d["sweep"])
        return cls(**d)

    def weight_set(self) -> WeightSimParams:
        base = get_weight_set(self.set_name) if self.set_name else None
        n = self.n if self.n is not None else (base.n if base else None)
        w = self.w if self.w is not None else (base.w if base else None)
        w_r = self.w_r if self.w_r is not None else (base.w_r if base else None)
        w_e = self.w_e if self.w_e is not None else (base.w_e if base else None)
        if None in (n, w, w_r, w_e):
            raise ValueError("plan needs a set name or explicit n/w/w_r/w_e")
        trunc = self.truncate_len
        if trunc is None:
            trunc = base.truncate_len if base else n
        for name, v in (("w", w), ("w_r", w_r), ("w_e", w_e)):
            if not 0 <= v <= n:
                raise ValueError(f"{name}={v} out of range for n={n}")
        if not 0 <= trunc <= n:
            raise ValueError(f"truncate_len={trunc} out of range for n={n}")
        return WeightSimParams(self.set_name or "custom", n, w, w_r, w_e, trunc)


@dataclass
class TrialReport:
    plan: TrialPlan
    trials: int
    wall_time: float = 0.0
    failures: int | None = None
    histogram: dict[int, int] | None = None
    quantiles: dict[str, int] | None = None
    binomial_quantiles: dict[str, int] | None = None
    extras: dict = field(default_factory=dict)

    def content(self) -> dict:
        """Everything that must replay identically (wall time excluded)."""
        return {
            "plan": self.plan.to_dict(),
            "trials": self.trials,
            "failures": self.failures,
            "histogram": self.histogram,
            "quantiles": self.quantiles,
            "binomial_quantiles": self.binomial_quantiles,
            "extras": self.extras,
        }

    def to_json(self) -> str:
        d = self.content()
        d["wall_time"] = self.wall_time
        return json.dumps(d)


# --- batch workers ----------------------------------------------------------


def _fy_sample(n: int, w: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform w-subset of [0, n); exactly w draws, dict-backed partial
    Fisher-Yates (unsorted, which weight accounting never notices)."""
    draws = rng.integers(np.arange(w), n)
    pool: dict[int, int] = {}
    out = np.empty(w, dtype=np.int64)
    for i in range(w):
        j = int(draws[i])
        out[i] = pool.get(j, j)
        pool[j] = pool.get(i, i)
    return out


def _weights_batch(plan: TrialPlan, b: int) -> tuple[np.ndarray, np.ndarray]:
    ws = plan.weight_set()
    trunc = plan.support_len if plan.experiment == "restricted" else ws.truncate_len
    lo = b * WEIGHTS_BATCH
    hi = min(plan.trials, lo + WEIGHTS_BATCH)
    sec = prng.stream(plan.seed, prng.DOMAIN_SECRET, b)
    enc = prng.stream(plan.seed, prng.DOMAIN_ENCRYPT, b)
    n = ws.n
    hist = np.zeros(trunc + 1, dtype=np.int64)
    for _ in range(hi - lo):
        xs = _fy_sample(n, ws.w, sec)
        ys = _fy_sample(n, ws.w, sec)
        r1 = _fy_sample(n, ws.w_r, enc)
        r2 = _fy_sample(n, ws.w_r, enc)
        e = _fy_sample(n, ws.w_e, enc)
        idx = np.concatenate([
            ((xs[:, None] + r2[None, :]) % n).ravel(),
            ((r1[:, None] + ys[None, :]) % n).ravel(),
            e,
        ])
        parity = np.bincount(idx, minlength=n)[:trunc] & 1
        hist[int(parity.sum())] += 1
    nz = np.nonzero(hist)[0]
    return nz, hist[nz]


def _rm_threshold(plan: TrialPlan) -> int:
    if plan.p is None:
        raise ValueError("rm_dfr plan needs a transition probability p")
    p = Fraction(plan.p)
    if not 0 <= p <= 1:
        raise ValueError("p out of range")
    return round(p * 2**32)


def _rm_batch(plan: TrialPlan, b: int) -> tuple[int, int, int]:
    """(failures, strictly_beaten, ties_at_peak) for one batch; the last
    two feed the diagnostic tie-as-failure accounting."""
    code = RmCode(plan.multiplicity or 1)
    thr = _rm_threshold(plan)
    lo = b * RM_BATCH
    hi = min(plan.trials, lo + RM_BATCH)
    bt = hi - lo
    msg_rng = prng.stream(plan.seed, prng.DOMAIN_MESSAGE, b)
    ch_rng = prng.stream(plan.seed, prng.DOMAIN_CHANNEL, b)
    tie_rng = prng.stream(plan.seed, prng.DOMAIN_TIEBREAK, b)
    msgs = msg_rng.integers(0, 256, bt, dtype=np.uint8)
    words = codeword_table(code.multiplicity)[msgs]
    noise = ch_rng.integers(0, 1 << 32, (bt, code.length), dtype=np.uint32) < thr
    corr = correlations(words ^ noise, code)
    decoded = decode_correlations(corr, tie_rng)
    failures = int((decoded != msgs).sum())
    mags = np.abs(corr)
    peaks = mags.max(axis=1)
    sent_corr = (corr[np.arange(bt), msgs & 0x7F]
                 * np.where(msgs & 0x80, -1, 1))
    strict = sent_corr < peaks
    ncand = (mags == peaks[:, None]).sum(axis=1) + (peaks == 0) * BASE_LENGTH
    ties = (~strict) & (ncand > 1)
    return failures, int(strict.sum()), int(ties.sum())


def _concat_batch(plan: TrialPlan, b: int) -> int:
    code = ConcatCode(RsCode(plan.rs_length), RmCode(plan.multiplicity or 1))
    lo = b * CONCAT_BATCH
    hi = min(plan.trials, lo + CONCAT_BATCH)
    bt = hi - lo
    msg_rng = prng.stream(plan.seed, prng.DOMAIN_MESSAGE, b)
    tie_rng = prng.stream(plan.seed, prng.DOMAIN_TIEBREAK, b)
    failures = 0
    if plan.channel == "bsc":
        thr = _rm_threshold(plan)
        ch_rng = prng.stream(plan.seed, prng.DOMAIN_CHANNEL, b)
        raw = msg_rng.bytes(32 * bt)
        noise = ch_rng.integers(0, 1 << 32, (bt, code.n_bits), dtype=np.uint32) < thr
        for t in range(bt):
            msg = raw[32 * t:32 * (t + 1)]
            word = concat_encode(msg, code) ^ noise[t]
            try:
                if concat_decode(word, code, tie_rng) != msg:
                    failures += 1
            except DecodeFailure:
                failures += 1
    elif plan.channel == "hqc":
        params = _plan_scheme_params(plan)
        seeds = msg_rng.integers(0, 2**63, bt)
        raw = msg_rng.bytes(32 * bt)
        for t in range(bt):
            msg = raw[32 * t:32 * (t + 1)]
            kp = scheme.keygen(params, int(seeds[t]))
            ct = scheme.encrypt(kp.public, msg, int(seeds[t]))
            try:
                if scheme.decrypt(kp.secret, ct) != msg:
                    failures += 1
            except DecodeFailure:
                failures += 1
    else:
        raise ValueError("concat_dfr plan needs channel 'bsc' or 'hqc'")
    return failures


DEFAULT_SWEEP_RING = 20533  # ring of the 128-bit instance the sweep derives from


@lru_cache(maxsize=None)
def sweep_ring_length(n_bits: int) -> int:
    """Smallest primitive prime at least n_bits, for sweep instances."""
    n = max(n_bits, 3) | 1
    while not validate_primitive_prime(n):
        n += 2
    return n


def _plan_scheme_params(plan: TrialPlan) -> HqcParams:
    """Scheme instance for one concat point.  Swept instances keep the
    128-bit ring (so the per-coordinate error rate matches the production
    error model) and only shrink the outer code; explicit --n overrides,
    and codes too long for that ring get the nearest primitive prime."""
    if plan.set_name:
        return get_params(plan.set_name)
    code_bits = plan.rs_length * 128 * (plan.multiplicity or 1)
    if plan.n is not None:
        n = plan.n
    elif code_bits <= DEFAULT_SWEEP_RING:
        n = DEFAULT_SWEEP_RING
    else:
        n = sweep_ring_length(code_bits)
    return HqcParams(
        name=f"sweep-{plan.rs_length}",
        param_id=0,
        security_bits=0,
        n=n,
        w=plan.w if plan.w is not None else 67,
        w_r=plan.w_r if plan.w_r is not None else 77,
        w_e=plan.w_e if plan.w_e is not None else 77,
        rm_multiplicity=plan.multiplicity or 1,
        rs_length=plan.rs_length,
        gain_percent=0.0,
    )


def _batch_entry(args):
    plan_dict, b = args
    plan = TrialPlan.from_dict(plan_dict)
    if plan.experiment in ("weights", "restricted"):
        return _weights_batch(plan, b)
    if plan.experiment == "rm_dfr":
        return _rm_batch(plan, b)
    return _concat_batch(plan, b)


def _map_batches(plan: TrialPlan, batch_size: int):
    nbatches = -(-plan.trials // batch_size)
    args = [(plan.to_dict(), b) for b in range(nbatches)]
    if plan.workers <= 1 or nbatches == 1:
        yield from map(_batch_entry, args)
        return
    chunk = max(1, nbatches // (8 * plan.workers))
    with Pool(plan.workers) as pool:
        yield from pool.imap(_batch_entry, args, chunksize=chunk)


# --- experiment drivers -----------------------------------------------------


def run_plan(plan: TrialPlan):
    if plan.experiment in ("weights", "restricted"):
        return simulate_weights(plan)
    if plan.experiment == "rm_dfr":
        return simulate_rm_dfr(plan)
    return simulate_concat_dfr(plan)


def simulate_weights(plan: TrialPlan) -> TrialReport:
    """Weight histogram of the truncated error vector, with empirical and
    analytic tail quantiles."""
    if plan.experiment not in ("weights", "restricted"):
        raise ValueError("plan experiment mismatch")
    ws = plan.weight_set()
    if plan.experiment == "restricted":
        if plan.support_len is None:
            raise ValueError("restricted plan needs support_len")
        if plan.support_len > ws.truncate_len:
            raise ValueError("support_len exceeds the code length")
        trunc = plan.support_len
    else:
        trunc = ws.truncate_len
    start = time.monotonic()
    hist = np.zeros(trunc + 1, dtype=np.int64)
    for nz, counts in _map_batches(plan, WEIGHTS_BATCH):
        hist[nz] += counts
    ps = p_star(ws.n, ws.w, ws.w_r, ws.w_e)
    pmf = WeightPmf(trunc, ps) if trunc > 0 else None
    quantiles, binom_q, insufficient = {}, {}, []
    for q in TAIL_MASSES:
        key = decimal_string(q, 12)
        quantiles[key] = _empirical_quantile(hist, plan.trials, q)
        binom_q[key] = pmf.upper_quantile(q) if pmf else 0
        if plan.trials * q < MIN_TAIL_EXCEEDANCES:
            insufficient.append(key)
    mean_w = float((hist * np.arange(trunc + 1)).sum() / plan.trials)
    extras = {
        "p_star": decimal_string(ps, 20),
        "length": trunc,
        "mean_weight": mean_w,
        "binomial_pmf": pmf.pmf_rows() if pmf else [],
        "insufficient_tails": insufficient,
    }
    if plan.experiment == "restricted" and pmf:
        emp = hist / plan.trials
        ana = np.zeros(trunc + 1)
        for d, prob in pmf.pmf_rows(0, trunc):
            ana[d] = prob
        extras["tv_distance"] = float(0.5 * np.abs(emp - ana).sum())
    nzmask = np.nonzero(hist)[0]
    return TrialReport(
        plan=plan,
        trials=plan.trials,
        wall_time=time.monotonic() - start,
        histogram={int(d): int(hist[d]) for d in nzmask},
        quantiles=quantiles,
        binomial_quantiles=binom_q,
        extras=extras,
    )


def simulate_restricted_support(plan: TrialPlan) -> TrialReport:
    return simulate_weights(plan)


def _empirical_quantile(hist: np.ndarray, trials: int, q: Fraction) -> int:
    """Smallest t with #{W > t} <= q * trials (exact integer comparison)."""
    exceed = trials - np.cumsum(hist)
    ok = exceed * q.denominator <= q.numerator * trials
    return int(np.argmax(ok))


def simulate_rm_dfr(plan: TrialPlan) -> TrialReport:
    """Observed inner-code DFR: transmit random codewords over BSC(p),
    count message mismatches after ML decoding.

    The report carries the faithful failure count plus a diagnostic
    accounting in which every exact tie is charged as a failure
    (`log2_dfr_ties_lost`): the decoder itself always breaks ties fairly.
    """
    if plan.experiment != "rm_dfr":
        raise ValueError("plan experiment mismatch")
    start = time.monotonic()
    failures = strict = ties = 0
    for f, s, t in _map_batches(plan, RM_BATCH):
        failures += f
        strict += s
        ties += t
    code = RmCode(plan.multiplicity or 1)
    p = Fraction(plan.p)
    pess = strict + ties
    extras = {
        "d_i": code.min_distance,
        "p": plan.p,
        "bound_simple_log2": _safe_log2_frac(rm_dfr_simple(p, code.min_distance)),
        "bound_improved_log2": _safe_log2_frac(rm_dfr_improved(p, code.min_distance)),
        "strictly_beaten": strict,
        "ties_at_peak": ties,
        "log2_dfr_ties_lost": float(math.log2(pess / plan.trials)) if pess else None,
    }
    extras.update(_dfr_stats(failures, plan.trials))
    return TrialReport(plan=plan, trials=plan.trials, failures=failures,
                       wall_time=time.monotonic() - start, extras=extras)


def simulate_concat_dfr(plan: TrialPlan) -> list[TrialReport]:
    """Concatenated-code DFR, one report per swept outer length (a plan
    without a sweep is a single point)."""
    if plan.experiment != "concat_dfr":
        raise ValueError("plan experiment mismatch")
    if plan.channel not in ("bsc", "hqc"):
        raise ValueError("concat_dfr plan needs channel 'bsc' or 'hqc'")
    points = plan.sweep if plan.sweep else (plan.rs_length,)
    if any(x is None for x in points):
        raise ValueError("concat_dfr plan needs rs_length or a sweep")
    reports = []
    for n_e in points:
        sub = replace(plan, rs_length=int(n_e), sweep=None)
        sub = _with_channel_probability(sub)
        start = time.monotonic()
        failures = sum(_map_batches(sub, CONCAT_BATCH))
        code = ConcatCode(RsCode(sub.rs_length), RmCode(sub.multiplicity or 1))
        p_used = Fraction(sub.p)
        inner_bound = rm_dfr_improved(quantize_up(p_used), code.inner.min_distance)
        analytic = concat_dfr_bound(code.outer.n_e, code.outer.delta_e,
                                    quantize_up(inner_bound))
        extras = {
            "x": int(n_e),
            "channel": sub.channel,
            "p": sub.p,
            "ring_n": _plan_scheme_params(sub).n if sub.channel == "hqc" else None,
            "analytic_log2": _safe_log2_frac(analytic),
        }
        extras.update(_dfr_stats(failures, sub.trials))
        reports.append(TrialReport(plan=sub, trials=sub.trials, failures=failures,
                                   wall_time=time.monotonic() - start, extras=extras))
    return reports


def _with_channel_probability(plan: TrialPlan) -> TrialPlan:
    """Fill in the BSC probability: explicit p wins, otherwise the error
    model of the matched scheme instance (same ring, same weights)."""
    if plan.p is not None:
        return plan
    params = _plan_scheme_params(plan)
    ps = p_star(params.n, params.w, params.w_r, params.w_e)
    return replace(plan, p=decimal_string(ps, 20))


def _dfr_stats(failures: int, trials: int) -> dict:
    lo, hi = _wilson_log2(failures, trials)
    return {
        "log2_dfr": float(math.log2(failures / trials)) if failures else None,
        "ci_low_log2": lo,
        "ci_high_log2": hi,
    }


def _wilson_log2(failures: int, trials: int, z: float = 1.96) -> tuple[float | None, float | None]:
    """95% Wilson interval for the failure probability, in log2."""
    phat = failures / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = max(center - half, 0.0)
    hi = min(center + half, 1.0)
    return (math.log2(lo) if lo > 0 else None,
            math.log2(hi) if hi > 0 else None)


def _safe_log2_frac(x: Fraction) -> float | None:
    from .error_model import log2_frac

    return log2_frac(x) if x > 0 else None


# --- CSV output -------------------------------------------------------------


def _provenance(plan: TrialPlan) -> str:
    return "# " + json.dumps(plan.to_dict(), sort_keys=True)


def write_weights_csv(report: TrialReport, path) -> None:
    with open(path, "w") as f:
        f.write(_provenance(report.plan) + "\n")
        f.write("weight,count\n")
        for w in sorted(report.histogram):
            f.write(f"{w},{report.histogram[w]}\n")


def write_binomial_csv(report: TrialReport, path) -> None:
    with open(path, "w") as f:
        f.write(_provenance(report.plan) + "\n")
        f.write("weight,prob\n")
        for w, prob in report.extras["binomial_pmf"]:
            f.write(f"{w},{prob:.12e}\n")


def write_quantiles_csv(report: TrialReport, path) -> None:
    with open(path, "w") as f:
        f.write(_provenance(report.plan) + "\n")
        f.write("tail_mass,empirical,binomial\n")
        for key in report.quantiles:
            f.write(f"{key},{report.quantiles[key]},{report.binomial_quantiles[key]}\n")


def write_dfr_csv(reports: list[TrialReport], path) -> None:
    with open(path, "w") as f:
        f.write(_provenance(reports[0].plan) + "\n")
        f.write("x,failures,trials,log2_dfr,ci_low,ci_high\n")
        for r in reports:
            x = r.extras.get("x", r.extras.get("p", ""))
            row = [str(x), str(r.failures), str(r.trials)]
            for key in ("log2_dfr", "ci_low_log2", "ci_high_log2"):
                v = r.extras.get(key)
                row.append("" if v is None else f"{v:.4f}")
            f.write(",".join(row) + "\n")
