"""Seeded verification campaigns and the density experiment.

A campaign is fully determined by its ExperimentConfig: one campaign
seed, one derived stream per trial, order-independent aggregation. A
failed trial never raises out of the runner; it lands in the report
with enough detail to replay (see replay_config), and the CLI turns it
into a standalone replay file plus a nonzero exit code.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from time import perf_counter

from .config import ExperimentConfig, radius_schedule
from .conjugator import (
    ConjugatorError,
    OrbitCapError,
    PseudoGenericSpec,
    SignatureMismatchError,
    approx_conjugator,
    pseudo_generic,
)
from .knaster import DiagonalHomeo, diag_dist, lift
from .lemmas import (
    CounterexampleError,
    certify_mod_bound,
    check_tent_witness,
    comod_lower_bound_check,
    separation_lower_bound,
    tent_witness,
)
from .plmap import compose, identity, reflect, sup_dist, to_json_dict
from .randgen import (
    derive_rng,
    perturb_homeo,
    rand_homeo,
    rand_nudge,
    rand_signature_homeo,
)
from .rational import format_rational
from .signatures import (
    signature,
    signature_oplus,
    signature_reflect,
    signature_to_string,
)
from .tents import oplus_power, tent


class CheckFailure(Exception):
    """An exact law failed on a concrete trial; details are JSON-ready."""

    def __init__(self, message, details):
        super().__init__(message)
        self.details = details


_TRIAL_ERRORS = (
    CheckFailure,
    CounterexampleError,
    ConjugatorError,
    SignatureMismatchError,
    OrbitCapError,
)


@dataclass(frozen=True)
class TrialOutcome:
    index: int
    ok: bool
    details: dict
    seconds: float

    def to_json_dict(self, with_timing=True):
        out = {"trial": self.index, "ok": self.ok, "details": self.details}
        if with_timing:
            out["seconds"] = round(self.seconds, 6)
        return out


@dataclass(frozen=True)
class CertificateReport:
    suite: str
    config: ExperimentConfig
    outcomes: tuple
    elapsed_seconds: float

    @property
    def passed(self):
        return sum(1 for o in self.outcomes if o.ok)

    @property
    def failed(self):
        return sum(1 for o in self.outcomes if not o.ok)

    def all_ok(self):
        return self.failed == 0

    def to_json_dict(self, with_timing=True):
        out = {
            "suite": self.suite,
            "config": self.config.to_json_dict(),
            "summary": {
                "trials": len(self.outcomes),
                "passed": self.passed,
                "failed": self.failed,
            },
            "trials": [o.to_json_dict(with_timing) for o in self.outcomes],
        }
        if with_timing:
            out["elapsed_seconds"] = round(self.elapsed_seconds, 6)
        return out

    def to_json(self, with_timing=True):
        return json.dumps(self.to_json_dict(with_timing), indent=2, sort_keys=True)


def render_table(report):
    """Human-readable report: one row per trial, then the tally."""
    lines = [f"suite {report.suite}  (seed {report.config.resolved_seed()})"]
    for o in report.outcomes:
        status = "ok  " if o.ok else "FAIL"
        parts = "  ".join(f"{k}={v}" for k, v in o.details.items())
        lines.append(f"  trial {o.index:>4}  {status}  {parts}")
    lines.append(
        f"  {len(report.outcomes)} trials: {report.passed} passed, "
        f"{report.failed} failed"
    )
    return "\n".join(lines)


def replay_config(report, index):
    """Config that reruns exactly one trial through the same subcommand."""
    data = report.config.to_json_dict()
    data["params"] = dict(data["params"], replay_trial=index)
    data["seed"] = report.config.resolved_seed()
    data["output"] = None
    return data


def _run_campaign(cfg, trial_fn):
    seed = cfg.resolved_seed()
    if "replay_trial" in cfg.params:
        indices = [cfg.integer("replay_trial")]
    else:
        indices = range(cfg.trials)
    outcomes = []
    t0 = perf_counter()
    for i in indices:
        rng = derive_rng(seed, cfg.suite, i)
        s0 = perf_counter()
        try:
            details = trial_fn(cfg, rng)
            ok = True
        except _TRIAL_ERRORS as err:
            ok = False
            details = {"error": str(err)}
            extra = getattr(err, "details", None) or getattr(err, "payload", None)
            if extra:
                details["diagnostics"] = extra
        outcomes.append(TrialOutcome(i, ok, details, perf_counter() - s0))
    return CertificateReport(cfg.suite, cfg, tuple(outcomes), perf_counter() - t0)


# ----------------------------------------------------------- verify suites


def _t_semiconj(cfg, rng):
    d_max = cfg.integer("d_max", 7)
    g = rand_homeo(rng, cfg.integer("max_breakpoints", 12))
    for d in range(1, d_max + 1):
        if compose(g, tent(d)) != compose(tent(d), oplus_power(g, d)):
            raise CheckFailure(
                "semiconjugacy identity failed",
                {"d": d, "g": to_json_dict(g)},
            )
    return {"breakpoints": len(g.breakpoints), "d_max": d_max}


def _t_oplus_scaling(cfg, rng):
    d = rng.randint(1, cfg.integer("d_max", 7))
    g1 = rand_homeo(rng, 8)
    g2 = rand_homeo(rng, 8)
    want = sup_dist(g1, g2) / d
    got = sup_dist(oplus_power(g1, d), oplus_power(g2, d))
    if got != want:
        raise CheckFailure(
            "block sum did not contract by exactly d",
            {"d": d, "g1": to_json_dict(g1), "g2": to_json_dict(g2)},
        )
    return {"d": d, "distance": format_rational(got)}


def _t_grid_fix(cfg, rng):
    d = rng.randint(1, cfg.integer("d_max", 7))
    g = rand_homeo(rng, 8)
    h = oplus_power(g, d)
    for i in range(d + 1):
        p = Fraction(i, d)
        if h(p) != p:
            raise CheckFailure(
                "block sum moved a grid point",
                {"d": d, "i": i, "g": to_json_dict(g)},
            )
    return {"d": d}


def _t_mod_bound(cfg, rng):
    P = cfg.primes
    eps = cfg.fraction("eps", Fraction(1, 10))
    n = rng.randint(0, cfg.integer("n_max", 3))
    g = rand_homeo(rng, 5)
    h, _ = rand_nudge(rng, g, eps / P.product(1, n))
    cert = certify_mod_bound(g, h, n, eps, P)
    if not (cert.certified and cert.distance.upper < eps):
        raise CheckFailure("mod bound not certified", cert.to_json_dict())
    return {
        "n": n,
        "eps": format_rational(eps),
        "upper": format_rational(cert.distance.upper),
        "N": cert.distance.truncation,
    }


def _gapped_pair(rng, delta, d, base):
    """base plus a forced perturbation at sup distance >= delta/d."""
    x0 = Fraction(rng.randint(1, 36), 37)
    y = base(x0)
    need = delta / d + Fraction(rng.randint(1, 8), 256)
    y0 = y + need if y + need < 1 else y - need
    return perturb_homeo(base, x0, y0)


def _t_tent_witness(cfg, rng):
    delta = cfg.fraction("delta", Fraction(1, 5))
    d = cfg.integer("d") or rng.choice([2, 3, 4, 6, 8])
    method = cfg.params.get("method", "search")
    f = rand_homeo(rng, 6)
    g = _gapped_pair(rng, delta, d, f)
    w = tent_witness(f, g, d, delta, method=method)
    if not check_tent_witness(f, g, d, delta, w):
        raise CheckFailure(
            "witness certificate failed its exact recheck",
            {"x": format_rational(w.x), "case": w.case},
        )
    return {
        "d": d,
        "delta": format_rational(delta),
        "x": format_rational(w.x),
        "case": w.case,
    }


def _t_separation(cfg, rng):
    P = cfg.primes
    eta = cfg.fraction("eta", Fraction(1, 40))
    n = rng.randint(0, cfg.integer("n_max", 1))
    m = n + rng.randint(1, 2)
    F = DiagonalHomeo(n, rand_homeo(rng, 4))
    d = P.product(n + 1, m)
    shift = 2 * eta + Fraction(rng.randint(0, 8), 128)
    window = perturb_homeo(
        rand_homeo(rng, 4), Fraction(1, d), Fraction(1, d) + shift
    )
    cert = separation_lower_bound(F, window, m, eta, P)
    return {
        "n": n,
        "m": m,
        "bound": format_rational(cert.bound),
        "lower": format_rational(cert.distance.lower),
    }


def _t_comod(cfg, rng):
    P = cfg.primes
    delta = cfg.fraction("delta", Fraction(1, 5))
    j = rng.choice([2, 3])
    n = j + rng.randint(0, 1)
    pj = P.prime(j)
    if delta >= Fraction(1, pj):
        delta = Fraction(1, 2 * pj)
    g_phi = rand_homeo(rng, 3)
    lifted = lift(DiagonalHomeo(j, g_phi), n, P).inducer
    p_prime = _gapped_pair(rng, delta, P.product(j + 1, n), lifted)
    cert = comod_lower_bound_check(p_prime, n, g_phi, j, delta, P)
    alpha = radius_schedule(delta, j, n, P)
    return {
        "j": j,
        "n": n,
        "delta": format_rational(delta),
        "route": cert.route,
        "coordinate": cert.coordinate,
        "bound": format_rational(cert.bound),
        "achieved": format_rational(cert.achieved),
        "alpha": [[c, format_rational(a)] for c, a in alpha],
    }


def _t_signature_laws(cfg, rng):
    f = rand_homeo(rng, 8)
    d = rng.randint(1, cfg.integer("d_max", 5))
    sig = signature(f)
    if signature(reflect(f)) != signature_reflect(sig):
        raise CheckFailure("reflection law failed", {"f": to_json_dict(f)})
    if signature(oplus_power(f, d)) != signature_oplus(sig, d):
        raise CheckFailure(
            "block sum law failed", {"f": to_json_dict(f), "d": d}
        )
    phi = rand_homeo(rng, 6)
    conj = compose(compose(phi.invert(), f), phi)
    if signature(conj) != sig:
        raise CheckFailure(
            "conjugation moved the signature",
            {"f": to_json_dict(f), "phi": to_json_dict(phi)},
        )
    return {"signs": signature_to_string(sig) or "(none)", "d": d}


VERIFY_SUITES = {
    "semiconj": _t_semiconj,
    "oplus-scaling": _t_oplus_scaling,
    "grid-fix": _t_grid_fix,
    "mod-bound": _t_mod_bound,
    "tent-witness": _t_tent_witness,
    "separation": _t_separation,
    "comod": _t_comod,
    "signature-laws": _t_signature_laws,
}


def run_verify_suite(cfg):
    try:
        fn = VERIFY_SUITES[cfg.suite]
    except KeyError:
        raise ValueError(f"unknown verify suite {cfg.suite!r}") from None
    return _run_campaign(cfg, fn)


# ------------------------------------------------------- density experiment


def proof_slack_sum(m, P):
    """Sum of prod(p_i..p_m)/prod(p_1..p_i) for i = 1..m."""
    return sum(
        (Fraction(P.product(i, m), P.product(1, i)) for i in range(1, m + 1)),
        Fraction(0),
    )


def _t_density(cfg, rng):
    P = cfg.primes
    m = cfg.integer("m", 1)
    eta = cfg.fraction("eta", Fraction(1, 4))
    eps = eta / (4 * proof_slack_sum(m, P))
    if cfg.params.get("target") == "identity":
        fm = identity()
        target = identity()
        h = identity()
    else:
        k = cfg.integer("generic_k", 2)
        spec = PseudoGenericSpec(k, seed=rng.getrandbits(32))
        f0 = pseudo_generic(spec)
        fm = lift(DiagonalHomeo(0, f0), m, P).inducer
        target = rand_signature_homeo(rng, signature(fm))
        h = approx_conjugator(fm, target, eps)
    conj = compose(compose(h.invert(), fm), h)
    gap = sup_dist(conj, target)
    dist = None
    for N in range(m, m + 9):
        dist = diag_dist(
            DiagonalHomeo(m, conj), DiagonalHomeo(m, target), N, P
        )
        if dist.upper < eta:
            break
    else:
        raise CheckFailure(
            "could not certify the conjugated distance under eta",
            {"upper": format_rational(dist.upper)},
        )
    tail_used = dist.upper - dist.lower
    return {
        "m": m,
        "eta": format_rational(eta),
        "eps": format_rational(eps),
        "signs": signature_to_string(signature(fm)) or "(none)",
        "sup_gap": format_rational(gap),
        "lower": format_rational(dist.lower),
        "upper": format_rational(dist.upper),
        "N": dist.truncation,
        "tail_ok": tail_used < eta / 2,
    }


def run_density_experiment(cfg):
    """Per trial: random same-signature target at coordinate m, conjugator
    from the synthesis engine at the proof's epsilon, then a certified
    upper bound under eta. Synthesis failures are reported, not raised.
    """
    m = cfg.integer("m", 1)
    eta = cfg.fraction("eta", Fraction(1, 4))
    if eta <= 0:
        raise ValueError("eta must be positive")
    if m < 0:
        raise ValueError("target coordinate must be nonnegative")
    return _run_campaign(cfg, _t_density)


def run_suite(cfg):
    if cfg.suite == "density":
        return run_density_experiment(cfg)
    return run_verify_suite(cfg)
