"""Batch command-line front end.

Every command prints one JSON envelope on stdout.  Exit codes: 0 success,
2 input or domain error, 3 certification failure, 4 bound-soundness failure
(1 is used only by ``replay`` when a rerun differs from the recorded results).
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .bounds import (PRESETS, BoundReport, baseline_bounds, corollary1_bounds, corollary2_interval,
                     corollary2_ratio, generic_constants, pair_generators, specialized_constants,
                     taylor_sandwich, theorem1_reverse_pinsker, theorem2_ratio_bounds,
                     tightness_condition)
from .errors import DomainError, FDBoundsError, NotCertified, RatioUnbounded, UnknownScenario
from .generators import (CHI_SQUARED, KL, TV, DiscreteDistribution, get_generator)
from .gof import make_experiment, run_experiment
from .measures import (DiscretePair, LocalGaussian, Mixture, TruncatedBall, TruncatedShell,
                       ball_tail_asymptotic, exact_divergence, gaussian_tv_small_t, shell_mass)
from .neighborhood import NeighborhoodSpec, certify, tightest_spec_discrete

EXIT_OK, EXIT_MISMATCH, EXIT_DOMAIN, EXIT_CERT, EXIT_SOUNDNESS = 0, 1, 2, 3, 4
SUM_TOL = 1e-9
LN2 = math.log(2.0)


class CertificationFailed(FDBoundsError):
    pass


# --------------------------------------------------------------------------
# JSON helpers

def encode_floats(obj):
    """Replace non-finite floats by the strings "+inf", "-inf" and "nan"."""
    if isinstance(obj, dict):
        return {str(k): encode_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode_floats(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode_floats(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "+inf" if x > 0 else "-inf"
        return x
    return obj


def decode_floats(obj):
    if isinstance(obj, dict):
        return {k: decode_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode_floats(v) for v in obj]
    if obj == "+inf":
        return math.inf
    if obj == "-inf":
        return -math.inf
    if obj == "nan":
        return math.nan
    return obj


def envelope(command: str, inputs: dict, results) -> dict:
    return {"command": command, "inputs_echo": inputs, "results": encode_floats(results),
            "version": __version__,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat()}


def _write_csv(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else v for v in row])


# --------------------------------------------------------------------------
# inputs

def parse_distribution(text: str, normalize: bool = False) -> DiscreteDistribution:
    """Inline comma list or ``uniform:k``."""
    text = text.strip()
    if text.lower().startswith("uniform:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise DomainError(f"bad uniform shorthand {text!r}") from exc
        return DiscreteDistribution.uniform(k)
    try:
        w = np.array([float(v) for v in text.split(",") if v.strip()], dtype=float)
    except ValueError as exc:
        raise DomainError(f"cannot parse distribution {text!r}") from exc
    return _finish(w, normalize)


def _finish(w: np.ndarray, normalize: bool, labels=None) -> DiscreteDistribution:
    if w.size == 0:
        raise DomainError("empty distribution")
    if normalize:
        return DiscreteDistribution.from_weights(w, labels)
    if np.any(w < 0) or abs(w.sum() - 1.0) > SUM_TOL:
        raise DomainError(f"probabilities must be nonnegative and sum to 1 (sum = {w.sum():.12g}); "
                          "pass --normalize to rescale")
    return DiscreteDistribution(w / w.sum(), labels)


def read_csv_pair(path: str, normalize: bool = False):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or not {"label", "p", "q"} <= set(rows[0]):
        raise DomainError(f"{path}: expected a header 'label,p,q'")
    labels = [r["label"] for r in rows]
    try:
        p = np.array([float(r["p"]) for r in rows])
        q = np.array([float(r["q"]) for r in rows])
    except ValueError as exc:
        raise DomainError(f"{path}: non-numeric probability") from exc
    return _finish(p, normalize, labels), _finish(q, normalize, labels)


def build_pair(args):
    """A DistributionPair from --family or from --p/--q/--file."""
    fam = getattr(args, "family", None)
    if fam in (None, "discrete"):
        if getattr(args, "file", None):
            p, q = read_csv_pair(args.file, args.normalize)
        elif args.p and args.q:
            p, q = parse_distribution(args.p, args.normalize), parse_distribution(args.q, args.normalize)
        else:
            raise DomainError("give --p and --q, --file, or --family")
        return DiscretePair(p, q)
    if fam == "local-gaussian":
        return LocalGaussian(args.t)
    if fam == "mixture":
        if args.p and args.q:
            comp = (parse_distribution(args.p, args.normalize), parse_distribution(args.q, args.normalize))
        else:
            comp = (LocalGaussian(args.t), LocalGaussian(0.0))
        return Mixture(args.lam, *comp)
    if fam == "truncated-ball":
        return TruncatedBall(args.variance, args.y, int(args.dim))
    if fam == "truncated-shell":
        return TruncatedShell(args.variance, args.mu, int(args.dim))
    raise DomainError(f"unknown family {fam!r}")


def build_spec(args, pair) -> NeighborhoodSpec:
    if getattr(args, "infer_spec", False):
        if not isinstance(pair, DiscretePair):
            raise DomainError("--infer-spec needs a discrete pair")
        return tightest_spec_discrete(pair.p1, pair.p0, args.epsilon)
    if args.big_m is None or args.small_m is None:
        raise DomainError("give --M and --m, or --infer-spec")
    return NeighborhoodSpec(args.epsilon, args.big_m, args.small_m, args.region)


# --------------------------------------------------------------------------
# commands

def cmd_divergence(args) -> dict:
    g = get_generator(args.g)
    pair = build_pair(args)
    value = exact_divergence(pair, g)
    res = {"generator": g.name, "value": value, "unit": "nats"}
    if args.bits:
        res.update({"value": value / LN2, "value_nats": value, "unit": "bits"})
    return res


def cmd_certify(args) -> dict:
    pair = build_pair(args)
    spec = build_spec(args, pair)
    gens = [get_generator(n) for n in (args.g or [])]
    cert = certify(pair, spec, gens)
    res = cert.to_dict()
    res["all_hold"] = cert.all_hold
    if not cert.all_hold:
        raise CertificationFailed(json.dumps(encode_floats(res)))
    return res


def _certificate(args, gens):
    pair = build_pair(args)
    spec = build_spec(args, pair)
    cert = certify(pair, spec, gens)
    if not cert.all_hold:
        raise CertificationFailed(json.dumps(encode_floats(cert.to_dict())))
    return cert


def _bound_reports(args) -> list[BoundReport]:
    g = get_generator(args.g)
    src = args.source
    if src == "specialized":
        g1, g2 = pair_generators(args.pair, args.alpha)
        cert = _certificate(args, [g1, g2])
        consts = specialized_constants(args.pair, cert.spec.epsilon, cert.spec.big_m,
                                       cert.spec.small_m, args.alpha)
        if g2 is TV:
            return [corollary1_bounds(cert, g1, consts["c"])]
        return [corollary2_ratio(cert, g1, g2, consts["c1"], consts["c_bar1"],
                                 consts["c2"], consts["c_bar2"])]
    g2 = get_generator(args.g2) if args.g2 else CHI_SQUARED
    cert = _certificate(args, [g, g2])
    if src == "theorem1":
        return [theorem1_reverse_pinsker(cert, g, args.c, honor_witness=args.honor_witness)]
    if src == "theorem2":
        return [theorem2_ratio_bounds(cert, g, g2)]
    if src == "corollary1":
        return [corollary1_bounds(cert, g, args.c)]
    if src == "corollary2":
        return [corollary2_ratio(cert, g, g2)]
    raise DomainError(f"unknown bound source {src!r}")


def cmd_bound(args) -> dict:
    reports = _bound_reports(args)
    return {"reports": [r.to_dict() for r in reports],
            "all_hold": all(r.holds for r in reports)}


def _row(r: BoundReport) -> list:
    return [r.name or r.source, r.source, r.lower, r.upper, r.exact, r.slack, r.holds]


ROW_HEADER = ["name", "source", "lower", "upper", "exact", "slack", "holds"]


def cmd_compare(args) -> dict:
    res: dict = {}
    has_pair = bool(args.p or args.file or args.family)
    if args.pair:
        g1, g2 = pair_generators(args.pair, args.alpha)
        if args.big_m is not None and args.small_m is not None:
            e, M, m = args.epsilon, args.big_m, args.small_m
            lo, hi = corollary2_interval(g1, g2, e, M, m)
            res["interval"] = [lo, hi]
            res["specialized_constants"] = specialized_constants(args.pair, e, M, m, args.alpha)
            res["generic_constants"] = generic_constants(args.pair, e, M, m, args.alpha)
    reports: list[BoundReport] = []
    if has_pair:
        g = get_generator(args.g)
        gens = [g, CHI_SQUARED] + ([g1, g2] if args.pair else [])
        cert = _certificate(args, gens)
        reports.append(theorem1_reverse_pinsker(cert, g, honor_witness=args.honor_witness))
        if cert.full_support:
            reports.append(corollary1_bounds(cert, g))
            reports.append(taylor_sandwich(cert, g))
            if args.pair:
                reports.append(corollary2_ratio(cert, g1, g2))
        reports.extend(baseline_bounds(cert, g))
        res["certificate"] = {"spec": cert.spec.to_dict(), "delta": cert.delta,
                              "tilde_c": cert.tilde_c}
        if args.tightness:
            n, m, k, c = args.tightness
            res["tightness"] = tightness_condition(int(n), m, k, c)
    if not res and not reports:
        raise DomainError("compare needs --pair with --epsilon/--M/--m, or a distribution pair")
    res["table"] = [dict(zip(ROW_HEADER, _row(r))) for r in reports]
    res["all_hold"] = all(r.holds for r in reports)
    if args.csv and reports:
        _write_csv(args.csv, ROW_HEADER, (_row(r) for r in reports))
    return res


def cmd_gof(args) -> dict:
    p = parse_distribution(args.p, args.normalize).masses if args.p else None
    exp = make_experiment(args.k if p is None else p.size, args.n, args.R, args.statistic,
                          args.g, args.seed, args.normalized, p)
    result = run_experiment(exp)
    if args.csv:
        _write_csv(args.csv, ["replicate", "statistic"], enumerate(result.statistic_samples.tolist()))
    return result.to_dict()


# --------------------------------------------------------------------------
# reproducible scenarios

def _check(checks: list, name: str, ok: bool, **info) -> None:
    checks.append({"check": name, "passed": bool(ok), **info})


def _scenario_categorical(args, checks) -> dict:
    n, m, k = int(args.cells), float(args.m), float(args.k)
    eps = 1.0 / k
    q = np.full(n, 1.0 / n)
    p = q.copy()
    p[0] += 1.0 / (m * n)
    p[1] -= 1.0 / (m * n)
    pair = DiscretePair(DiscreteDistribution(p), DiscreteDistribution(q))
    spec = tightest_spec_discrete(pair.p1, pair.p0, eps)
    cert = certify(pair, spec, [KL])
    tv = exact_divergence(pair, TV)
    kl = exact_divergence(pair, KL)
    series = (1.0 / n) * (1.0 / m**2 + 2.0 / (3.0 * m**4))
    _check(checks, "tv_equals_1_over_mn", abs(tv - 1.0 / (m * n)) <= 1e-15, tv=tv)
    _check(checks, "delta_equals_2k2_over_nm2", abs(cert.delta - 2 * k * k / (n * m * m)) <= 1e-12,
           delta=cert.delta)
    lo_min = corollary1_bounds(cert, KL)
    lo_preset = corollary1_bounds(cert, KL, PRESETS["coarse_c"])
    _check(checks, "corollary1_lower_below_tv_minimal_c", lo_min.holds, lower=lo_min.lower)
    _check(checks, "corollary1_lower_below_tv_preset_c", lo_preset.holds, lower=lo_preset.lower)
    return {"n": n, "m": m, "k": k, "epsilon": eps, "spec": spec.to_dict(),
            "tv": tv, "delta": cert.delta, "kl": kl, "kl_series": series,
            "kl_series_relative_error": abs(kl - series) / kl,
            "corollary1_minimal_c": lo_min.to_dict(), "corollary1_preset_c": lo_preset.to_dict(),
            "tightness": tightness_condition(n, m, k, lo_min.constants["c"])}


def _scenario_local_gaussian(args, checks) -> dict:
    ts = _floats(args.t_values)
    spec = NeighborhoodSpec(args.epsilon, args.big_m or 1.0, args.small_m or 1.0)
    rows = []
    for t in ts:
        fam = LocalGaussian(t)
        chi_cf, chi_q = fam.closed_form(CHI_SQUARED), fam.quadrature_divergence(CHI_SQUARED)
        tv = fam.closed_form(TV)
        _check(checks, f"chi2_closed_form_t={t}", abs(chi_cf - chi_q) <= 1e-8 * max(1.0, chi_cf))
        row = {"t": t, "chi2_closed_form": chi_cf, "chi2_quadrature": chi_q, "tv": tv,
               "tv_small_t": gaussian_tv_small_t(t)}
        cert = certify(fam, spec, [KL])
        if cert.all_hold:
            rep = theorem1_reverse_pinsker(cert, KL)
            _check(checks, f"theorem1_kl_t={t}", rep.holds)
            row.update({"tilde_c": cert.tilde_c, "theorem1_lower": rep.lower,
                        "theorem1_upper": rep.upper})
        rows.append(row)
    return {"spec": spec.to_dict(), "rows": rows}, ("local_gaussian.csv", rows)


def _scenario_mixture(args, checks) -> dict:
    spec = NeighborhoodSpec(args.epsilon, args.big_m or 1.0, args.small_m or 1.0)
    fam = Mixture(args.lam, LocalGaussian(args.t), LocalGaussian(0.0))
    chi2 = fam.closed_form(CHI_SQUARED)
    chi_q = fam.quadrature_divergence(CHI_SQUARED)
    _check(checks, "chi2_equals_lambda2_component", abs(chi2 - chi_q) <= 1e-8 * chi2)
    cert = certify(fam, spec, [KL])
    bound = fam.markov_complement_bound(spec.epsilon, spec.big_m, spec.small_m)
    _check(checks, "markov_complement_bound", cert.complement_mass <= bound + 1e-12,
           complement_mass=cert.complement_mass, bound=bound)
    res = {"lam": args.lam, "t": args.t, "chi2": chi2, "chi2_quadrature": chi_q,
           "certificate": cert.to_dict()}
    if cert.all_hold:
        rep = theorem1_reverse_pinsker(cert, KL)
        _check(checks, "theorem1_kl", rep.holds)
        res["theorem1"] = rep.to_dict()
    return res


def _scenario_truncated_ball(args, checks) -> dict:
    dim = int(args.dim)
    fam = TruncatedBall(args.variance, args.y, dim)
    theta = fam.theta
    tv, chi2 = fam.closed_form(TV), fam.closed_form(CHI_SQUARED)
    _check(checks, "tv_equals_1_minus_theta", abs(tv - (1.0 - theta)) <= 1e-15)
    _check(checks, "chi2_equals_tail_over_theta", abs(chi2 - (1.0 - theta) / theta) <= 1e-15 * max(1, chi2))
    tail_ratio = fam.tail / ball_tail_asymptotic(dim, args.y)
    _check(checks, "tail_asymptotic_within_5pct", abs(tail_ratio - 1.0) <= 0.05, ratio=tail_ratio)
    eps = args.epsilon
    spec = NeighborhoodSpec(eps, 1.0, min(1.0, 1.0 / eps))
    cert = certify(fam, spec, [KL, CHI_SQUARED])
    res = {"theta": theta, "tv": tv, "chi2": chi2, "tail_ratio": tail_ratio,
           "certificate": cert.to_dict()}
    if cert.all_hold:
        chi = theorem1_reverse_pinsker(cert, CHI_SQUARED)
        kl_literal = theorem1_reverse_pinsker(cert, KL)
        kl = theorem1_reverse_pinsker(cert, KL, honor_witness=True)
        _check(checks, "theorem1_chi2", chi.holds)
        _check(checks, "theorem1_kl_with_witness", kl.holds)
        res.update({"theorem1_chi2": chi.to_dict(), "theorem1_kl": kl.to_dict(),
                    "theorem1_kl_sign_shortcut": kl_literal.to_dict()})
    return res


def _scenario_sphere(args, checks):
    dims = [int(v) for v in _floats(args.dims)]
    rows = []
    for d in dims:
        mass = shell_mass(TruncatedShell(args.variance, args.mu, d))
        rows.append({"n": d, "shell_mass": mass, "tv": 1.0 - mass})
    tvs = [r["tv"] for r in rows]
    _check(checks, "tv_monotone_decreasing", all(a > b for a, b in zip(tvs, tvs[1:])))
    return {"mu": args.mu, "rows": rows}, ("sphere_hardening.csv", rows)


def _gof_scenario(statistic: str, normalized: bool, k: int, n: int, R: int, threshold: float):
    def run(args, checks):
        kk = args.k_cells or k
        nn = args.samples or n
        rr = args.R or R
        gen = "kl" if statistic == "fdiv" else None
        out = {}
        stats = ["chi2", "fdiv"] if statistic == "chi2" else [statistic]
        for s in stats:
            exp = make_experiment(kk, nn, rr, s, gen or ("kl" if s == "fdiv" else None),
                                  args.seed, normalized)
            r = run_experiment(exp)
            _check(checks, f"ks_{s}", r.ks_distance < threshold, ks=r.ks_distance)
            out[s] = r.to_dict()
        return out
    return run


SCENARIOS: dict[str, Callable] = {
    "example-categorical": _scenario_categorical,
    "local-gaussian": _scenario_local_gaussian,
    "mixture": _scenario_mixture,
    "truncated-ball": _scenario_truncated_ball,
    "sphere-hardening": _scenario_sphere,
    "gof-chi2": _gof_scenario("chi2", False, 10, 100_000, 10_000, 0.02),
    "gof-tv": _gof_scenario("tv", False, 10, 100_000, 10_000, 0.05),
    "gof-normal": _gof_scenario("fdiv", True, 200, 1_000_000, 2_000, 0.05),
}


def _floats(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v.strip()]


def cmd_reproduce(args) -> dict:
    if args.name not in SCENARIOS:
        raise UnknownScenario(f"unknown scenario {args.name!r}; expected one of {', '.join(SCENARIOS)}")
    checks: list = []
    out = SCENARIOS[args.name](args, checks)
    table = None
    if isinstance(out, tuple):
        out, table = out
    res = {"scenario": args.name, "results": out, "checks": checks,
           "all_passed": all(c["passed"] for c in checks)}
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{args.name}.json").write_text(json.dumps(encode_floats(res), indent=2))
        if table:
            fname, rows = table
            _write_csv(str(d / fname), list(rows[0]), ([r.get(c) for c in rows[0]] for r in rows))
    return res


def cmd_replay(args) -> dict:
    recorded = json.loads(Path(args.envelope).read_text())
    inputs = dict(recorded["inputs_echo"])
    sub = build_parser()
    ns = argparse.Namespace(**{**vars(sub.parse_args([inputs["command"]] + _required(inputs))),
                               **inputs})
    rerun = encode_floats(HANDLERS[inputs["command"]](ns))
    same = rerun == recorded["results"]
    return {"identical": same, "command": inputs["command"],
            "recorded_version": recorded.get("version")}


def _required(inputs: dict) -> list:
    # positional arguments needed for parse_args to succeed; echoed values override them
    return [inputs["name"]] if inputs["command"] == "reproduce" else (
        [inputs["envelope"]] if inputs["command"] == "replay" else [])


HANDLERS = {
    "divergence": cmd_divergence, "certify": cmd_certify, "bound": cmd_bound,
    "compare": cmd_compare, "gof": cmd_gof, "reproduce": cmd_reproduce, "replay": cmd_replay,
}


# --------------------------------------------------------------------------
# parser

def _add_pair_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", help="P1 as a comma list or uniform:k")
    p.add_argument("--q", help="P0 as a comma list or uniform:k")
    p.add_argument("--file", help="CSV file with header label,p,q")
    p.add_argument("--normalize", action="store_true", help="rescale inputs to sum to one")
    p.add_argument("--family", choices=["discrete", "local-gaussian", "mixture",
                                        "truncated-ball", "truncated-shell"])
    p.add_argument("--t", type=float, default=0.1, help="Gaussian shift")
    p.add_argument("--lam", type=float, default=0.1, help="mixture weight")
    p.add_argument("--variance", type=float, default=1.0)
    p.add_argument("--y", type=float, default=100.0, help="ball radius^2 / variance")
    p.add_argument("--mu", type=float, default=0.9, help="shell ratio")
    p.add_argument("--dim", type=int, default=4, help="dimension of truncated families")


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--M", dest="big_m", type=float)
    p.add_argument("--m", dest="small_m", type=float)
    p.add_argument("--region", choices=["full", "band"])
    p.add_argument("--infer-spec", action="store_true",
                   help="use the tightest (M, m) of a discrete pair")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fdbounds", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("divergence", help="compute an f-divergence")
    p.add_argument("--g", required=True, help="generator name, e.g. kl or hellinger:0.5")
    p.add_argument("--bits", action="store_true")
    _add_pair_args(p)

    p = sub.add_parser("certify", help="check the neighborhood conditions")
    p.add_argument("--g", action="append", help="generator whose remainder to check (repeatable)")
    _add_pair_args(p)
    _add_spec_args(p)

    p = sub.add_parser("bound", help="evaluate one bound family")
    p.add_argument("--source", required=True,
                   choices=["theorem1", "theorem2", "corollary1", "corollary2", "specialized"])
    p.add_argument("--g", default="kl")
    p.add_argument("--g2", help="second generator for ratio bounds (default chi2)")
    p.add_argument("--pair", help="divergence pair id for --source specialized")
    p.add_argument("--alpha", type=float)
    p.add_argument("--c", type=float, help="override the minimal c")
    p.add_argument("--honor-witness", action="store_true",
                   help="keep the remainder witness even when the sign shortcut would drop it")
    _add_pair_args(p)
    _add_spec_args(p)

    p = sub.add_parser("compare", help="compare bounds and baselines")
    p.add_argument("--pair", help="divergence pair id, e.g. kl-rkl or hellinger-tv:0.5")
    p.add_argument("--alpha", type=float)
    p.add_argument("--g", default="kl")
    p.add_argument("--honor-witness", action="store_true")
    p.add_argument("--tightness", type=float, nargs=4, metavar=("N", "M", "K", "C"),
                   help="evaluate the neighborhood-vs-finite-alphabet tightness condition")
    p.add_argument("--csv", help="write the comparison table to this CSV file")
    _add_pair_args(p)
    _add_spec_args(p)

    p = sub.add_parser("gof", help="Monte Carlo goodness-of-fit experiment")
    p.add_argument("--statistic", choices=["chi2", "fdiv", "tv"], default="chi2")
    p.add_argument("--g", help="generator for --statistic fdiv (default kl)")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--p", help="cell probabilities (default uniform over k)")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--R", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalized", action="store_true", help="compare with N(0,1)")
    p.add_argument("--csv", help="write the statistic samples to this CSV file")

    p = sub.add_parser("reproduce", help="run a scripted example")
    p.add_argument("name", help=", ".join(SCENARIOS))
    p.add_argument("--out-dir", default="fdbounds-artifacts")
    p.add_argument("--cells", type=int, default=5, help="categorical alphabet size")
    p.add_argument("--m", type=float, default=100.0, help="categorical perturbation scale")
    p.add_argument("--k", type=float, default=20.0, help="categorical 1/epsilon")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--M", dest="big_m", type=float)
    p.add_argument("--small-m", dest="small_m", type=float)
    p.add_argument("--t", type=float, default=0.1)
    p.add_argument("--t-values", default="0.1,0.5,1")
    p.add_argument("--lam", type=float, default=0.1)
    p.add_argument("--variance", type=float, default=1.0)
    p.add_argument("--y", type=float, default=100.0)
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--mu", type=float, default=0.9)
    p.add_argument("--n", dest="dims", default="100,200,400", help="dimensions for sphere-hardening")
    p.add_argument("--k-cells", type=int, help="gof scenarios: number of cells")
    p.add_argument("--samples", type=int, help="gof scenarios: sample size")
    p.add_argument("--R", type=int, help="gof scenarios: replications")
    p.add_argument("--seed", type=int, default=7)

    p = sub.add_parser("replay", help="rerun a recorded envelope and compare results")
    p.add_argument("envelope")
    return ap


def _emit(env: dict, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(env, indent=2, allow_nan=False) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    inputs = encode_floats({k: v for k, v in vars(args).items()})
    try:
        results = HANDLERS[args.command](args)
    except CertificationFailed as exc:
        _emit(envelope(args.command, inputs, {"error": "certification_failed",
                                              "certificate": json.loads(str(exc))}))
        return EXIT_CERT
    except (RatioUnbounded, NotCertified) as exc:
        _emit(envelope(args.command, inputs, {"error": type(exc).__name__, "message": str(exc)}))
        return EXIT_CERT
    except (DomainError, OSError) as exc:
        _emit(envelope(args.command, inputs, {"error": type(exc).__name__, "message": str(exc)}))
        return EXIT_DOMAIN
    env = envelope(args.command, inputs, results)
    _emit(env)
    if args.command == "replay":
        return EXIT_OK if results["identical"] else EXIT_MISMATCH
    if args.command == "reproduce":
        return EXIT_OK if results["all_passed"] else EXIT_SOUNDNESS
    if isinstance(results, dict) and results.get("all_hold") is False and args.command in ("bound", "compare"):
        return EXIT_SOUNDNESS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
