"""Command-line front end.

Subcommands: params, keygen, encrypt, decrypt, analyze (pstar, rm-bound,
concat-bound, end-to-end), simulate (weights, restricted, rm-dfr,
concat-dfr).  Every run prints a one-line summary to stdout and writes any
requested artifact to --out; failures print a machine-readable JSON object
to stderr and exit nonzero.
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click

from . import scheme
from .dfr import concat_dfr, end_to_end_report, parse_probability, rm_dfr_improved, rm_dfr_simple
from .error_model import decimal_string, log2_frac, model_report, p_star
from .params import PARAM_SETS, SIM_SETS, get_params, get_weight_set
from .simulate import (
    TrialPlan,
    run_plan,
    write_binomial_csv,
    write_dfr_csv,
    write_quantiles_csv,
    write_weights_csv,
)

WORKERS_ENV = "HQC_RMRS_WORKERS"


class StrictWarning(click.ClickException):
    exit_code = 3


def _default_workers() -> int:
    return int(os.environ.get(WORKERS_ENV, "1"))


def _fail_json(exc: BaseException) -> None:
    payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    click.echo(json.dumps(payload), err=True)


def json_errors(fn):
    """Convert exceptions into machine-readable JSON on stderr, exit 1."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except Exception as exc:
            _fail_json(exc)
            sys.exit(1)
    return wrapper


def _emit(payload: dict, out: str | None, summary: str) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as f:
            f.write(text + "\n")
    click.echo(summary)
    if not out:
        click.echo(text)


@click.group()
def main():
    """Quasi-cyclic encryption with a Reed-Muller/Reed-Solomon decoder:
    scheme operations, exact DFR analysis, Monte Carlo simulation."""


# --- params -----------------------------------------------------------------


@main.command("params")
@click.option("--list", "list_all", is_flag=True, help="List every built-in set.")
@click.option("--set", "set_name", default=None, help="Show one parameter set.")
@json_errors
def params_cmd(list_all, set_name):
    """Show built-in parameter sets."""
    def row(p):
        return {
            "name": p.name,
            "security_bits": p.security_bits,
            "w": p.w,
            "w_r": p.w_r,
            "w_e": p.w_e,
            "reed_muller": [128 * p.rm_multiplicity, 8, 64 * p.rm_multiplicity],
            "reed_solomon": [p.rs_length, 32, p.outer.d_e],
            "n": p.n,
            "n1n2": p.n1n2,
            "truncated_bits": p.l,
            "dfr_log2_target": -p.security_bits,
            "gain_percent": p.gain_percent,
        }

    if set_name and not list_all:
        if set_name in SIM_SETS:
            s = SIM_SETS[set_name]
            payload = {"name": s.name, "n": s.n, "w": s.w, "w_r": s.w_r,
                       "w_e": s.w_e, "truncate_len": s.truncate_len}
        else:
            payload = row(get_params(set_name))
        _emit(payload, None, f"parameter set {set_name}")
        return
    payload = {
        "scheme_sets": [row(p) for p in PARAM_SETS.values()],
        "simulation_sets": [
            {"name": s.name, "n": s.n, "w": s.w, "w_r": s.w_r, "w_e": s.w_e,
             "truncate_len": s.truncate_len}
            for s in SIM_SETS.values()
        ],
    }
    _emit(payload, None, f"{len(PARAM_SETS)} scheme sets, {len(SIM_SETS)} simulation sets")


# --- scheme operations ------------------------------------------------------


@main.command()
@click.option("--set", "set_name", required=True)
@click.option("--seed", type=int, required=True)
@click.option("--out-pk", "out_pk", required=True, type=click.Path(dir_okay=False))
@click.option("--out-sk", "out_sk", required=True, type=click.Path(dir_okay=False))
@json_errors
def keygen(set_name, seed, out_pk, out_sk):
    """Generate a key pair."""
    kp = scheme.keygen(get_params(set_name), seed)
    scheme.save_public_key(kp.public, out_pk)
    scheme.save_secret_key(kp.secret, out_sk)
    click.echo(f"keygen {set_name} seed={seed}: wrote {out_pk}, {out_sk}")


@main.command()
@click.option("--pk", "pk_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--in", "msg_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Raw 32-byte message file.")
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@json_errors
def encrypt(pk_path, msg_path, seed, out_path):
    """Encrypt a 32-byte message file."""
    pk = scheme.load_public_key(pk_path)
    with open(msg_path, "rb") as f:
        msg = f.read()
    if len(msg) != 32:
        raise ValueError(f"message file must hold exactly 32 bytes, got {len(msg)}")
    ct = scheme.encrypt(pk, msg, seed)
    scheme.save_ciphertext(ct, out_path)
    click.echo(f"encrypt {pk.params.name} seed={seed}: wrote {out_path}")


@main.command()
@click.option("--sk", "sk_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--in", "ct_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@json_errors
def decrypt(sk_path, ct_path, out_path):
    """Decrypt a ciphertext file to a 32-byte message file."""
    sk = scheme.load_secret_key(sk_path)
    ct = scheme.load_ciphertext(ct_path)
    msg = scheme.decrypt(sk, ct)
    with open(out_path, "wb") as f:
        f.write(msg)
    click.echo(f"decrypt {sk.params.name}: wrote {out_path}")


# --- analyze ----------------------------------------------------------------


@main.group()
def analyze():
    """Exact analytic calculators."""


def _weight_args(set_name, n, w, w_r, w_e):
    if set_name:
        s = get_weight_set(set_name)
        return s.n, s.w, s.w_r, s.w_e
    if None in (n, w, w_r, w_e):
        raise ValueError("need --set or all of --n/--w/--w-r/--w-e")
    return n, w, w_r, w_e


@analyze.command()
@click.option("--set", "set_name", default=None)
@click.option("--n", type=int, default=None)
@click.option("--w", type=int, default=None)
@click.option("--w-r", type=int, default=None)
@click.option("--w-e", type=int, default=None)
@click.option("--length", type=int, default=None,
              help="Binomial length for tail quantiles (defaults to the set's truncation).")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@json_errors
def pstar(set_name, n, w, w_r, w_e, length, out):
    """Per-coordinate error probability and binomial tail quantiles."""
    n, w, w_r, w_e = _weight_args(set_name, n, w, w_r, w_e)
    if length is None and set_name:
        length = get_weight_set(set_name).truncate_len
    rep = model_report(n, w, w_r, w_e, length=length)
    rep["params_id"] = set_name
    _emit(rep, out, f"p_star = {rep['p_star'][:8]} (n={n}, w={w}, w_r={w_r}, w_e={w_e})")


@analyze.command("rm-bound")
@click.option("--p", "p_text", default=None, help="Transition probability (decimal string).")
@click.option("--set", "set_name", default=None,
              help="Derive p from this set's exact error model.")
@click.option("--multiplicity", type=int, default=None)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@json_errors
def rm_bound(p_text, set_name, multiplicity, out):
    """Inner-code DFR bounds at a transition probability."""
    if set_name:
        params = get_params(set_name)
        multiplicity = multiplicity or params.rm_multiplicity
        p = p_star(params.n, params.w, params.w_r, params.w_e) if p_text is None \
            else parse_probability(p_text)
    else:
        if p_text is None or multiplicity is None:
            raise ValueError("need --set or both --p and --multiplicity")
        p = parse_probability(p_text)
    d_i = 64 * multiplicity
    simple = rm_dfr_simple(p, d_i)
    improved = rm_dfr_improved(p, d_i)
    payload = {
        "p": decimal_string(p, 20),
        "d_i": d_i,
        "p_i_simple": decimal_string(simple, 20),
        "p_i_improved": decimal_string(improved, 20),
        "log2_simple": log2_frac(simple),
        "log2_improved": log2_frac(improved),
    }
    _emit(payload, out,
          f"inner bounds at p={decimal_string(p, 8)}, d_i={d_i}: "
          f"simple {payload['log2_simple']:.2f}, improved {payload['log2_improved']:.2f}")


@analyze.command("concat-bound")
@click.option("--ne", type=int, required=True, help="Outer code length.")
@click.option("--delta", type=int, required=True, help="Outer correction radius.")
@click.option("--p-inner", "pi_text", required=True,
              help="Inner failure rate (decimal string).")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@json_errors
def concat_bound(ne, delta, pi_text, out):
    """Concatenated-code DFR bound from an inner failure rate."""
    pi = parse_probability(pi_text)
    dfr = concat_dfr(ne, delta, pi)
    payload = {"n_e": ne, "delta_e": delta, "p_i": pi_text,
               "dfr": decimal_string(dfr, 20), "dfr_log2": log2_frac(dfr) if dfr else None}
    _emit(payload, out, f"concat bound: log2 = {payload['dfr_log2']}")


@analyze.command("end-to-end")
@click.option("--set", "set_name", required=True)
@click.option("--bound", type=click.Choice(["simple", "improved"]), default="improved")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@json_errors
def end_to_end(set_name, bound, out):
    """Full analytic pipeline for one parameter set."""
    rep = end_to_end_report(get_params(set_name))
    rep["bound"] = bound
    value = rep["dfr_log2"] if bound == "improved" else rep["dfr_log2_simple"]
    rep["dfr_log2_selected"] = value
    _emit(rep, out, f"{set_name}: log2 DFR <= {value:.2f} ({bound} bound)")


# --- simulate ---------------------------------------------------------------


def _sim_options(fn):
    fn = click.option("--trials", type=int, required=True)(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--workers", type=int, default=None,
                      help=f"Defaults to ${WORKERS_ENV} or 1.")(fn)
    fn = click.option("--out", "out_dir", default=None, type=click.Path(file_okay=False),
                      help="Directory for output artifacts.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                      default="csv", show_default=True,
                      help="Artifact format under --out.")(fn)
    fn = click.option("--strict", is_flag=True,
                      help="Escalate insufficient-trial warnings to errors.")(fn)
    return fn


def _write_json_report(reports, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "report.json")
    if isinstance(reports, list):
        body = "[\n" + ",\n".join(r.to_json() for r in reports) + "\n]\n"
    else:
        body = reports.to_json() + "\n"
    with open(path, "w") as f:
        f.write(body)
    click.echo(f"wrote report.json in {out_dir}")


@main.group()
def simulate():
    """Monte Carlo experiments."""


def _finish_weight_run(report, out_dir, strict, label, fmt="csv"):
    warn = report.extras.get("insufficient_tails", [])
    if warn:
        msg = (f"trials too low for tail masses {', '.join(warn)} "
               f"(need >= {100} expected exceedances)")
        if strict:
            raise StrictWarning(msg)
        click.echo(f"warning: {msg}", err=True)
    if out_dir and fmt == "json":
        _write_json_report(report, out_dir)
    elif out_dir:
        os.makedirs(out_dir, exist_ok=True)
        write_weights_csv(report, os.path.join(out_dir, "weights.csv"))
        write_binomial_csv(report, os.path.join(out_dir, "binomial.csv"))
        write_quantiles_csv(report, os.path.join(out_dir, "quantiles.csv"))
        click.echo(f"wrote weights.csv, binomial.csv, quantiles.csv in {out_dir}")
    q = report.quantiles.get("0.001")
    b = report.binomial_quantiles.get("0.001")
    click.echo(f"{label}: trials={report.trials} mean={report.extras['mean_weight']:.1f} "
               f"q(0.1%)={q} binomial={b} [{report.wall_time:.1f}s]")


@simulate.command("weights")
@click.option("--set", "set_name", default=None)
@click.option("--n", type=int, default=None)
@click.option("--w", type=int, default=None)
@click.option("--w-r", type=int, default=None)
@click.option("--w-e", type=int, default=None)
@click.option("--truncate", "truncate_len", type=int, default=None)
@_sim_options
@json_errors
def sim_weights(set_name, n, w, w_r, w_e, truncate_len, trials, seed, workers,
                out_dir, fmt, strict):
    """Histogram the truncated error-vector weight."""
    plan = TrialPlan(experiment="weights", trials=trials, seed=seed,
                     workers=workers or _default_workers(), set_name=set_name,
                     n=n, w=w, w_r=w_r, w_e=w_e, truncate_len=truncate_len)
    _finish_weight_run(run_plan(plan), out_dir, strict, "weights", fmt)


@simulate.command("restricted")
@click.option("--set", "set_name", default=None)
@click.option("--n", type=int, default=None)
@click.option("--w", type=int, default=None)
@click.option("--w-r", type=int, default=None)
@click.option("--w-e", type=int, default=None)
@click.option("--support-len", type=int, default=256, show_default=True)
@_sim_options
@json_errors
def sim_restricted(set_name, n, w, w_r, w_e, support_len, trials, seed, workers,
                   out_dir, fmt, strict):
    """Error weight restricted to a short support prefix."""
    plan = TrialPlan(experiment="restricted", trials=trials, seed=seed,
                     workers=workers or _default_workers(), set_name=set_name,
                     n=n, w=w, w_r=w_r, w_e=w_e, support_len=support_len)
    report = run_plan(plan)
    _finish_weight_run(report, out_dir, strict, "restricted", fmt)
    if "tv_distance" in report.extras:
        click.echo(f"tv distance to binomial: {report.extras['tv_distance']:.4f}")


@simulate.command("rm-dfr")
@click.option("--p", "p_text", required=True, help="BSC transition probability.")
@click.option("--multiplicity", type=int, required=True)
@_sim_options
@json_errors
def sim_rm_dfr(p_text, multiplicity, trials, seed, workers, out_dir, fmt, strict):
    """Observed ML decoding failure rate of the inner code."""
    parse_probability(p_text)
    plan = TrialPlan(experiment="rm_dfr", trials=trials, seed=seed,
                     workers=workers or _default_workers(), p=p_text,
                     multiplicity=multiplicity)
    report = run_plan(plan)
    expected = trials * 2.0 ** report.extras["bound_improved_log2"]
    if report.failures < 100:
        msg = (f"only {report.failures} failures observed; "
               f"log2 estimate noisy (expected ~{expected:.0f} under the bound)")
        if strict and report.failures == 0:
            raise StrictWarning(msg)
        click.echo(f"warning: {msg}", err=True)
    if out_dir and fmt == "json":
        _write_json_report(report, out_dir)
    elif out_dir:
        os.makedirs(out_dir, exist_ok=True)
        write_dfr_csv([report], os.path.join(out_dir, "dfr.csv"))
        click.echo(f"wrote dfr.csv in {out_dir}")
    log2v = report.extras["log2_dfr"]
    shown = "none" if log2v is None else f"{log2v:.3f}"
    click.echo(f"rm-dfr p={p_text} m={multiplicity}: failures={report.failures}/{trials} "
               f"log2={shown} [{report.wall_time:.1f}s]")


def _parse_sweep(text):
    """a:b or a:b:step outer-length range; default step 2 keeps the parity
    symbol count even (a dimension-32 outer code needs n_e >= 34)."""
    if text is None:
        return None
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError("sweep must be a:b or a:b:step")
    a, b = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 2
    return tuple(range(a, b + 1, step))


@simulate.command("concat-dfr")
@click.option("--channel", type=click.Choice(["bsc", "hqc"]), required=True)
@click.option("--set", "set_name", default=None,
              help="Full scheme set (hqc channel at production scale).")
@click.option("--ne", "rs_length", type=int, default=None, help="Outer length for one point.")
@click.option("--sweep", default=None,
              help="Outer length range a:b or a:b:step (default step 2).")
@click.option("--multiplicity", type=int, default=2, show_default=True)
@click.option("--p", "p_text", default=None,
              help="BSC probability (default: matched error model).")
@click.option("--n", "ring_n", type=int, default=None,
              help="Ring length (default: the 128-bit instance's ring).")
@click.option("--w", type=int, default=None)
@click.option("--w-r", type=int, default=None)
@click.option("--w-e", type=int, default=None)
@_sim_options
@json_errors
def sim_concat_dfr(channel, set_name, rs_length, sweep, multiplicity, p_text,
                   ring_n, w, w_r, w_e, trials, seed, workers, out_dir, fmt, strict):
    """Concatenated DFR over a BSC or with genuine scheme vectors."""
    if set_name:
        params = get_params(set_name)
        rs_length = rs_length or params.rs_length
        multiplicity = params.rm_multiplicity
        w = params.w if w is None else w
        w_r = params.w_r if w_r is None else w_r
        w_e = params.w_e if w_e is None else w_e
    plan = TrialPlan(experiment="concat_dfr", trials=trials, seed=seed,
                     workers=workers or _default_workers(), set_name=set_name,
                     channel=channel, rs_length=rs_length, sweep=_parse_sweep(sweep),
                     multiplicity=multiplicity, p=p_text, n=ring_n,
                     w=w, w_r=w_r, w_e=w_e)
    reports = run_plan(plan)
    zero = [r.extras["x"] for r in reports if r.failures == 0]
    if zero:
        msg = f"zero failures at x={zero}; DFR below measurement resolution"
        if strict:
            raise StrictWarning(msg)
        click.echo(f"warning: {msg}", err=True)
    if out_dir and fmt == "json":
        _write_json_report(reports, out_dir)
    elif out_dir:
        os.makedirs(out_dir, exist_ok=True)
        write_dfr_csv(reports, os.path.join(out_dir, "dfr.csv"))
        click.echo(f"wrote dfr.csv in {out_dir}")
    for r in reports:
        log2v = r.extras["log2_dfr"]
        shown = "censored" if log2v is None else f"{log2v:.3f}"
        click.echo(f"concat-dfr {channel} n_e={r.extras['x']}: "
                   f"failures={r.failures}/{r.trials} log2={shown} "
                   f"analytic<={r.extras['analytic_log2']:.2f} [{r.wall_time:.1f}s]")


if __name__ == "__main__":
    main()
