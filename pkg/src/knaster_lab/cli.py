"""Command-line front end.

Groups: pl (exact PL map algebra), tent (tent maps and block sums),
conj (conjugacy invariants and synthesis), knaster (truncated-tower
objects), verify (seeded law campaigns), experiment (density).

Maps, points, and certificates travel as JSON files; bare rationals are
"p/q" strings. Exit codes: 0 all checks passed, 1 a verification or
synthesis failure (with a replay file for campaigns), 2 usage errors.
"""

import argparse
import json
import sys
from pathlib import Path

from . import knaster as kn
from .config import ExperimentConfig
from .conjugator import (
    ConjugatorError,
    GridNotFixedError,
    OrbitCapError,
    SignatureMismatchError,
    SnapMarginError,
    approx_conjugator,
    conjugator_certificate,
    grid_block_conjugate,
    snap_to_grid,
)
from .experiments import (
    VERIFY_SUITES,
    render_table,
    replay_config,
    run_density_experiment,
    run_verify_suite,
)
from .lemmas import CounterexampleError
from .plmap import compose, degree, from_json_dict, reflect, sup_dist, to_json_dict
from .rational import format_rational, parse_rational
from .signatures import decide_conjugate, signature, signature_to_string
from .tents import oplus_power, straighten, tent, verify_semiconjugacy

_RUNTIME_ERRORS = (
    ConjugatorError,
    SignatureMismatchError,
    OrbitCapError,
    SnapMarginError,
    GridNotFixedError,
    CounterexampleError,
)


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_map(path):
    return from_json_dict(_read_json(path))


def _load_point(path):
    return kn.TruncatedKnasterPoint.from_json_dict(_read_json(path))


def _load_diagonal(path, coord=0):
    data = _read_json(path)
    if "inducer" in data:
        return kn.DiagonalHomeo.from_json_dict(data)
    return kn.DiagonalHomeo(coord, from_json_dict(data))


def _emit(data, out):
    text = json.dumps(data, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# ------------------------------------------------------------------- pl


def _cmd_pl_eval(args):
    f = _load_map(args.f)
    print(format_rational(f(parse_rational(args.x))))
    return 0


def _cmd_pl_compose(args):
    _emit(to_json_dict(compose(_load_map(args.f), _load_map(args.g))), args.output)
    return 0


def _cmd_pl_invert(args):
    _emit(to_json_dict(_load_map(args.f).invert()), args.output)
    return 0


def _cmd_pl_dist(args):
    print(format_rational(sup_dist(_load_map(args.f), _load_map(args.g))))
    return 0


def _cmd_pl_degree(args):
    print(degree(_load_map(args.f)))
    return 0


def _cmd_pl_reflect(args):
    _emit(to_json_dict(reflect(_load_map(args.f))), args.output)
    return 0


# ----------------------------------------------------------------- tent


def _cmd_tent_build(args):
    _emit(to_json_dict(tent(args.d)), args.output)
    return 0


def _cmd_tent_oplus(args):
    _emit(to_json_dict(oplus_power(_load_map(args.f), args.d)), args.output)
    return 0


def _cmd_tent_semiconj(args):
    g = _load_map(args.f)
    if verify_semiconjugacy(g, args.d):
        print(f"ok: map o tent({args.d}) = tent({args.d}) o blocksum")
        return 0
    print("FAIL: semiconjugacy identity does not hold", file=sys.stderr)
    return 1


def _cmd_tent_straighten(args):
    h = straighten(_load_map(args.f), _load_map(args.g))
    _emit(to_json_dict(h), args.output)
    return 0


# ----------------------------------------------------------------- conj


def _cmd_conj_signature(args):
    print(signature_to_string(signature(_load_map(args.f))) or "(none)")
    return 0


def _cmd_conj_decide(args):
    same = decide_conjugate(_load_map(args.f), _load_map(args.g))
    print("conjugate" if same else "not conjugate")
    return 0


def _cmd_conj_synthesize(args):
    f, g = _load_map(args.f), _load_map(args.g)
    eta = parse_rational(args.eta)
    h = approx_conjugator(f, g, eta)
    cert = conjugator_certificate(f, g, h, eta)
    _emit(cert, args.output)
    return 0 if cert["ok"] else 1


def _cmd_conj_blockwise(args):
    f = _load_map(args.f)
    h = _load_map(args.target)
    g = grid_block_conjugate(f, args.d, h, parse_rational(args.eta))
    _emit(to_json_dict(g), args.output)
    return 0


def _cmd_conj_snap(args):
    h = _load_map(args.f)
    ref = _load_map(args.reference)
    out = snap_to_grid(h, args.d, ref, parse_rational(args.delta))
    _emit(to_json_dict(out), args.output)
    return 0


# -------------------------------------------------------------- knaster


def _primes(args):
    spec = args.primes
    if "," in spec:
        return kn.PrimeSequence([int(p) for p in spec.split(",")])
    return kn.PrimeSequence(spec)


def _cmd_knaster_point(args):
    P = _primes(args)
    x = kn.extend_point(parse_rational(args.x), args.n, P)
    _emit(x.to_json_dict(), args.output)
    return 0


def _cmd_knaster_dist(args):
    P = _primes(args)
    d = kn.knaster_dist(_load_point(args.x), _load_point(args.y), P)
    _emit(d.to_json_dict(), args.output)
    return 0


def _cmd_knaster_lift(args):
    P = _primes(args)
    F = _load_diagonal(args.f, args.coord)
    _emit(kn.lift(F, args.to, P).to_json_dict(), args.output)
    return 0


def _cmd_knaster_evaldiag(args):
    P = _primes(args)
    F = _load_diagonal(args.f, args.coord)
    y = kn.eval_diagonal(F, _load_point(args.x), P)
    _emit(y.to_json_dict(), args.output)
    return 0


def _cmd_knaster_degree(args):
    P = _primes(args)
    data = _read_json(args.w)
    if "window" in data:
        G = kn.GeneralDiagonalMap.from_json_dict(data)
    elif "inducer" in data:
        raise ValueError(
            "degree expects a window JSON (target_coord/source_coord/window)"
            " or a bare map plus --target/--source, not a coherent diagonal"
        )
    else:
        G = kn.GeneralDiagonalMap(args.target, args.source, from_json_dict(data))
    print(format_rational(kn.degree_diagonal(G, P)))
    return 0


# ----------------------------------------------------- verify / experiment

_PARAM_FLAGS = {
    "d_max": int,
    "d": int,
    "n_max": int,
    "m": int,
    "generic_k": int,
    "max_breakpoints": int,
    "delta": str,
    "eps": str,
    "eta": str,
    "method": str,
    "target": str,
}


def _campaign_config(args, suite):
    if args.config:
        cfg = ExperimentConfig.from_file(args.config)
        cfg.suite = suite
    else:
        cfg = ExperimentConfig(suite=suite)
    if args.trials is not None:
        cfg.trials = args.trials
    if args.seed is not None:
        cfg.seed = args.seed
    if args.primes is not None:
        spec = args.primes
        cfg.primes = kn.PrimeSequence(
            [int(p) for p in spec.split(",")] if "," in spec else spec
        )
    if args.output is not None:
        cfg.output = args.output
    for name in _PARAM_FLAGS:
        val = getattr(args, name, None)
        if val is not None:
            cfg.params[name] = val
    return cfg


def _finish_campaign(report):
    print(render_table(report))
    if report.config.output:
        Path(report.config.output).write_text(report.to_json() + "\n")
        print(f"report written to {report.config.output}")
    if report.all_ok():
        return 0
    stem = Path(report.config.output).stem if report.config.output else report.suite
    for o in report.outcomes:
        if o.ok:
            continue
        path = Path(f"{stem}-replay-trial{o.index}.json")
        path.write_text(json.dumps(replay_config(report, o.index), indent=2) + "\n")
        print(f"replay file written to {path}", file=sys.stderr)
    return 1


def _cmd_verify(args):
    cfg = _campaign_config(args, args.suite)
    return _finish_campaign(run_verify_suite(cfg))


def _cmd_experiment_density(args):
    cfg = _campaign_config(args, "density")
    return _finish_campaign(run_density_experiment(cfg))


# ----------------------------------------------------------------- parser


def _add_out(p):
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")


def _add_campaign_flags(p, params):
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--primes", help='"diagonal", "all2", or comma list like 2,3,5')
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--output", help="write the JSON report here")
    for name in params:
        kind = _PARAM_FLAGS[name]
        p.add_argument(f"--{name.replace('_', '-')}", type=kind, dest=name)


def build_parser():
    top = argparse.ArgumentParser(
        prog="knaster-lab",
        description="Exact PL interval dynamics and certified Knaster-tower bounds",
    )
    sub = top.add_subparsers(dest="group", required=True)

    pl = sub.add_parser("pl", help="exact piecewise-linear map algebra")
    pls = pl.add_subparsers(dest="cmd", required=True)
    p = pls.add_parser("eval")
    p.add_argument("-f", required=True)
    p.add_argument("-x", required=True, help='argument as "p/q"')
    p.set_defaults(func=_cmd_pl_eval)
    p = pls.add_parser("compose")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_pl_compose)
    p = pls.add_parser("invert")
    p.add_argument("-f", required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_pl_invert)
    p = pls.add_parser("dist")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    p.set_defaults(func=_cmd_pl_dist)
    p = pls.add_parser("degree")
    p.add_argument("-f", required=True)
    p.set_defaults(func=_cmd_pl_degree)
    p = pls.add_parser("reflect")
    p.add_argument("-f", required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_pl_reflect)

    te = sub.add_parser("tent", help="tent maps, block sums, straightening")
    tes = te.add_subparsers(dest="cmd", required=True)
    p = tes.add_parser("build")
    p.add_argument("-d", type=int, required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_tent_build)
    p = tes.add_parser("oplus")
    p.add_argument("-f", required=True)
    p.add_argument("-d", type=int, required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_tent_oplus)
    p = tes.add_parser("semiconj")
    p.add_argument("-f", required=True)
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=_cmd_tent_semiconj)
    p = tes.add_parser("straighten")
    p.add_argument("-f", required=True, help="target open map")
    p.add_argument("-g", required=True, help="model open map")
    _add_out(p)
    p.set_defaults(func=_cmd_tent_straighten)

    co = sub.add_parser("conj", help="conjugacy invariants and synthesis")
    cos = co.add_subparsers(dest="cmd", required=True)
    p = cos.add_parser("signature")
    p.add_argument("-f", required=True)
    p.set_defaults(func=_cmd_conj_signature)
    p = cos.add_parser("decide")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    p.set_defaults(func=_cmd_conj_decide)
    p = cos.add_parser("synthesize")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    p.add_argument("--eta", default="1/100")
    _add_out(p)
    p.set_defaults(func=_cmd_conj_synthesize)
    p = cos.add_parser("blockwise")
    p.add_argument("-f", required=True, help="block model map")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--target", required=True, help="grid-fixing target map")
    p.add_argument("--eta", default="1/100")
    _add_out(p)
    p.set_defaults(func=_cmd_conj_blockwise)
    p = cos.add_parser("snap")
    p.add_argument("-f", required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--delta", required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_conj_snap)

    kk = sub.add_parser("knaster", help="truncated tower points and diagonals")
    kks = kk.add_subparsers(dest="cmd", required=True)
    p = kks.add_parser("point")
    p.add_argument("-x", required=True, help='top coordinate as "p/q"')
    p.add_argument("-n", type=int, required=True, help="truncation level")
    p.add_argument("--primes", default="diagonal")
    _add_out(p)
    p.set_defaults(func=_cmd_knaster_point)
    p = kks.add_parser("dist")
    p.add_argument("-x", required=True)
    p.add_argument("-y", required=True)
    p.add_argument("--primes", default="diagonal")
    _add_out(p)
    p.set_defaults(func=_cmd_knaster_dist)
    p = kks.add_parser("lift")
    p.add_argument("-f", required=True, help="diagonal (or inducer) JSON")
    p.add_argument("--coord", type=int, default=0, help="coord for bare inducers")
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--primes", default="diagonal")
    _add_out(p)
    p.set_defaults(func=_cmd_knaster_lift)
    p = kks.add_parser("evaldiag")
    p.add_argument("-f", required=True)
    p.add_argument("-x", required=True, help="point JSON file")
    p.add_argument("--coord", type=int, default=0)
    p.add_argument("--primes", default="diagonal")
    _add_out(p)
    p.set_defaults(func=_cmd_knaster_evaldiag)
    p = kks.add_parser("degree")
    p.add_argument("-w", required=True, help="window JSON, or a bare open map")
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--source", type=int, default=1)
    p.add_argument("--primes", default="diagonal")
    p.set_defaults(func=_cmd_knaster_degree)

    ve = sub.add_parser("verify", help="seeded verification campaigns")
    ves = ve.add_subparsers(dest="suite_cmd", required=True)
    suite_params = {
        "semiconj": ["d_max", "max_breakpoints"],
        "oplus-scaling": ["d_max"],
        "grid-fix": ["d_max"],
        "mod-bound": ["eps", "n_max"],
        "tent-witness": ["delta", "d", "method"],
        "separation": ["eta", "n_max"],
        "comod": ["delta"],
        "signature-laws": ["d_max"],
    }
    assert set(suite_params) == set(VERIFY_SUITES)
    for name, params in suite_params.items():
        p = ves.add_parser(name)
        _add_campaign_flags(p, params)
        p.set_defaults(func=_cmd_verify, suite=name)

    ex = sub.add_parser("experiment", help="end-to-end certified experiments")
    exs = ex.add_subparsers(dest="cmd", required=True)
    p = exs.add_parser("density")
    _add_campaign_flags(p, ["m", "eta", "generic_k", "target"])
    p.set_defaults(func=_cmd_experiment_density)

    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _RUNTIME_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        payload = getattr(err, "payload", None)
        if payload:
            print(json.dumps(payload, indent=2), file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
