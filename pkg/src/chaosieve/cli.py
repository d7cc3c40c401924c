"""Command-line interface: ``chaosieve <subcommand> [options]``.

Settings are resolved as command-line flags > ``--config`` file > defaults.
The config file holds ``key = value`` lines (``#`` starts a comment), with
keys named like the long options (``samples = 100000``, ``seed = 7``).

Exit codes: 0 success, 1 usage, 2 domain error, 3 capacity, 4 too few
samples / too little data.  The worker count comes from ``--threads`` or
the ``CHAOSIEVE_THREADS`` environment variable; results never depend on it.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import chaos, geometry, optimizer, predictor, primes, ratio, tuples, weights
from ._streams import default_workers
from .errors import ChaosieveError, DomainError

SCHEMA = 1


def _number(text: str) -> int:
    """Integer that may be written as 1e8 or 10**8."""
    text = str(text).strip().replace("_", "")
    if "**" in text:
        base, exp = text.split("**", 1)
        return int(base) ** int(exp)
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not value.is_integer():
            raise argparse.ArgumentTypeError(f"not an integer: {text}")
        return int(value)


def _int_list(text: str) -> list[int]:
    return [_number(x) for x in str(text).split(",") if x.strip()]


def _flag(text) -> bool:
    if isinstance(text, bool):
        return text
    return str(text).strip().lower() in ("1", "true", "yes", "on")


# key -> (converter, default); defaults follow the toy Monte Carlo listings
OPTIONS: dict[str, tuple[Callable[[Any], Any], Any]] = {
    "k": (int, 6),
    "tau": (float, 0.45),
    "delta": (float, 0.9),
    "eps": (float, 0.0),
    "r": (float, chaos.DEFAULT_R),
    "iterations": (int, chaos.DEFAULT_ITERATIONS),
    "samples": (_number, 500_000),
    "seed": (int, 42),
    "limit": (_number, 10**7),
    "thresholds": (_int_list, [700, 180, 8]),
    "top": (int, 10),
    "segment_bytes": (_number, primes.DEFAULT_SEGMENT_BYTES),
    "d": (int, 2),
    "budget": (_number, tuples.DEFAULT_BUDGET),
    "y0": (float, chaos.DEFAULT_Y0),
    "n": (_number, 10**6),
    "burn_in": (_number, chaos.DEFAULT_BURN_IN),
    "bins": (int, 10),
    "region": (str, "both"),
    "exact": (_flag, False),
    "poly": (str, None),
    "poly_out": (str, None),
    "m_base": (float, None),
    "blocks": (int, 10),
    "threads": (int, None),
    "format": (str, "json"),
    "output": (str, None),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def read_config(path: str) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = OPTIONS[key][0](value)
    return values


def _add(p: argparse.ArgumentParser, *names: str) -> None:
    for name in names:
        conv = OPTIONS[name][0]
        flag = "--" + name.replace("_", "-")
        if conv is _flag:
            p.add_argument(flag, action="store_true", default=argparse.SUPPRESS)
        else:
            p.add_argument(flag, type=conv, default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaosieve", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None)
    common.add_argument("--format", choices=["json", "csv", "text"], default=argparse.SUPPRESS)
    _add(common, "output", "threads")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add(sub.add_parser("gaps", parents=[common], help="prime gap statistics"),
         "limit", "thresholds", "top", "segment_bytes")
    _add(sub.add_parser("tuple", parents=[common], help="narrow admissible tuple"), "k", "budget")
    _add(sub.add_parser("chaos", parents=[common], help="logistic orbit diagnostics"),
         "r", "y0", "n", "burn_in", "bins")
    _add(sub.add_parser("volume", parents=[common], help="volumes of R and R'"),
         "k", "tau", "delta", "eps", "r", "iterations", "samples", "seed", "exact")
    _add(sub.add_parser("ratio", parents=[common], help="sieve ratio M(F)"),
         "k", "tau", "delta", "eps", "r", "iterations", "samples", "seed", "region", "exact", "poly")
    _add(sub.add_parser("optimize", parents=[common], help="maximize M over a symmetric basis"),
         "k", "d", "tau", "delta", "eps", "r", "iterations", "samples", "seed", "exact",
         "poly_out", "blocks")
    _add(sub.add_parser("predict", parents=[common], help="heuristic formula calculator"),
         "k", "delta", "eps", "m_base")
    _add(sub.add_parser("reproduce", parents=[common], help="rerun the toy experiments"),
         "limit", "samples", "seed")
    return parser


def resolve(args: argparse.Namespace) -> dict[str, Any]:
    cfg = {key: default for key, (_, default) in OPTIONS.items()}
    if args.config:
        cfg.update(read_config(args.config))
    cfg.update({k: v for k, v in vars(args).items() if k in OPTIONS})
    cfg["command"] = args.command
    if cfg["threads"] is None:
        cfg["threads"] = default_workers()
    return cfg


def _spec(cfg) -> geometry.PolytopeSpec:
    return geometry.PolytopeSpec(
        k=cfg["k"], tau=cfg["tau"], delta=cfg["delta"],
        logistic=chaos.LogisticParams(cfg["r"], cfg["iterations"]),
    )


def _test_function(cfg) -> weights.SymmetricPolynomial:
    if cfg["poly"]:
        return weights.loads_polynomial(Path(cfg["poly"]).read_text(), cfg["k"])
    return weights.SymmetricPolynomial.constant(cfg["k"])


def run_gaps(cfg) -> dict:
    summary = primes.gap_summary(cfg["limit"], cfg["thresholds"], cfg["top"],
                                 cfg["segment_bytes"], cfg["threads"])
    out = summary.to_dict()
    out["reference_comparison"] = primes.compare_with_reference(summary)
    out["_csv"] = primes.histogram_csv(summary)
    return out


def run_tuple(cfg) -> dict:
    t = tuples.narrowest_tuple(cfg["k"], cfg["budget"])
    return {"k": cfg["k"], "budget": cfg["budget"], "offsets": list(t),
            "diameter": tuples.diameter(t), "admissible": tuples.is_admissible(t)}


def run_chaos(cfg) -> dict:
    stats = chaos.orbit_statistics(cfg["y0"], cfg["r"], cfg["n"], cfg["burn_in"], cfg["bins"])
    dist = chaos.invariant_density_distance(cfg["r"], cfg["n"], cfg["bins"], cfg["y0"], cfg["burn_in"])
    return {
        "r": cfg["r"], "y0": cfg["y0"], "n": cfg["n"], "burn_in": cfg["burn_in"],
        "mean": stats.mean, "min": stats.min, "max": stats.max,
        "eta_margin": stats.eta_margin, "degenerate": stats.degenerate,
        "histogram": [[e, c] for e, c in stats.histogram],
        "arcsine_distance": dist,
    }


def run_volume(cfg) -> dict:
    if cfg["exact"]:
        est = geometry.exact_base_volume(cfg["k"], cfg["tau"])
        return {"k": cfg["k"], "tau": cfg["tau"], "method": "inclusion-exclusion",
                "vol_R": est.absolute_volume, "fraction_R": est.box_fraction}
    spec = _spec(cfg)
    out = geometry.mc_volume(spec, cfg["samples"], cfg["seed"], cfg["threads"]).to_dict()
    _, lemma = geometry.check_lemma_bound(spec, cfg["eps"], cfg["samples"], cfg["seed"], cfg["threads"])
    out["lemma_bound"] = lemma
    exact = geometry.exact_base_volume(cfg["k"], cfg["tau"])
    out["exact_fraction_R"] = exact.box_fraction
    return out


def run_ratio(cfg) -> dict:
    F = _test_function(cfg)
    if cfg["exact"]:
        return ratio.exact_ratio(F).to_dict()
    spec = _spec(cfg)
    Fp = weights.PerturbedFunction(F, cfg["eps"])
    regions = ["base", "perturbed"] if cfg["region"] == "both" else [cfg["region"]]
    out = {"k": cfg["k"], "tau": cfg["tau"], "delta": cfg["delta"], "eps": cfg["eps"],
           "samples": cfg["samples"], "seed": cfg["seed"]}
    for reg in regions:
        out[reg] = ratio.mc_ratio(Fp, spec, reg, cfg["samples"], cfg["seed"], cfg["threads"]).to_dict()
    if len(regions) == 2:
        out["relative_change_percent"] = (out["perturbed"]["M"] / out["base"]["M"] - 1.0) * 100.0
    return out


def run_optimize(cfg) -> dict:
    basis = optimizer.enumerate_basis(cfg["k"], cfg["d"])
    if cfg["exact"]:
        res = optimizer.maximize_ratio(basis)
    else:
        res = optimizer.optimize_perturbed(basis, _spec(cfg), cfg["eps"], cfg["samples"],
                                           cfg["seed"], cfg["threads"], cfg["blocks"])
    out = res.sidecar()
    if not cfg["exact"]:
        out.update(seed=cfg["seed"], samples=cfg["samples"], tau=cfg["tau"], delta=cfg["delta"])
    out["basis"] = [",".join(map(str, a)) if a != optimizer.XI else a for a in res.labels]
    out["coefficients"] = [float(c) for c in res.coefficients]
    text = weights.dumps_polynomial(res.polynomial(), [f"m_opt = {res.m_opt!r}", f"mode = {res.mode}"])
    if cfg["poly_out"]:
        Path(cfg["poly_out"]).write_text(text)
    out["_text"] = text
    return out


def run_predict(cfg) -> dict:
    return predictor.predict(cfg["k"], cfg["delta"], cfg["eps"], cfg["m_base"]).to_dict()


def _compare(reference: float, computed: float, tol: float) -> dict:
    dev = computed - reference
    return {
        "reference": reference,
        "computed": computed,
        "abs_deviation": dev,
        "rel_deviation": dev / reference if reference else None,
        "tolerance": tol,
        "within_tolerance": abs(dev) <= tol,
    }


def run_reproduce(cfg) -> dict:
    threads = cfg["threads"]
    spec = geometry.PolytopeSpec()
    sections: dict[str, dict] = {}

    def section(name, fn):
        try:
            sections[name] = {"status": "ok", **fn()}
        except ChaosieveError as exc:
            sections[name] = {"status": "error", "error": f"{type(exc).__name__}: {exc}"}

    def toy_ratio():
        F = weights.PerturbedFunction(weights.SymmetricPolynomial.constant(spec.k), 0.0)
        base = ratio.mc_ratio(F, spec, "base", cfg["samples"], cfg["seed"], threads)
        pert = ratio.mc_ratio(F, spec, "perturbed", cfg["samples"], cfg["seed"], threads)
        change = (pert.M / base.M - 1.0) * 100.0
        return {
            "M_base": _compare(0.15065, base.M, 0.002),
            "M_perturbed": _compare(0.15059, pert.M, 0.002),
            "relative_change_percent": _compare(-0.04, change, 0.5),
            "hits_base": base.hits,
            "hits_perturbed": pert.hits,
        }

    def volumes():
        rep = geometry.mc_volume(spec, cfg["samples"], cfg["seed"], threads)
        exact = geometry.exact_base_volume(spec.k, spec.tau)
        return {
            "fraction_R": _compare(0.139704, rep.base.box_fraction, 0.002),
            "fraction_Rp": _compare(0.593178, rep.perturbed.box_fraction, 0.01),
            "ratio": _compare(4.2460, rep.ratio, 0.1),
            "exact_fraction_R": exact.box_fraction,
            "hits_R": rep.base.hit_count,
            "hits_Rp": rep.perturbed.hit_count,
        }

    def gaps():
        summary = primes.gap_summary(cfg["limit"], (700, 180, 8), 10, workers=threads)
        cmp = primes.compare_with_reference(summary)
        return {"summary": summary.to_dict(), **cmp}

    section("toy_ratio", toy_ratio)
    section("volume_expansion", volumes)
    section("prime_gaps", gaps)
    return {"samples": cfg["samples"], "seed": cfg["seed"], "limit": cfg["limit"],
            "sections": sections}


COMMANDS = {
    "gaps": run_gaps,
    "tuple": run_tuple,
    "chaos": run_chaos,
    "volume": run_volume,
    "ratio": run_ratio,
    "optimize": run_optimize,
    "predict": run_predict,
    "reproduce": run_reproduce,
}


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def render(cfg: dict, result: dict, timestamp: str | None = None) -> str:
    fmt = cfg["format"]
    side = {k: result.pop(k) for k in ("_csv", "_text") if k in result}
    if fmt == "csv":
        if "_csv" not in side:
            raise DomainError(f"csv output is only available for histograms (gaps), not {cfg['command']}")
        return side["_csv"]
    doc = {"schema": SCHEMA, "command": cfg["command"], **_clean(result)}
    if fmt == "text":
        lines = [f"{k}: {json.dumps(v)}" for k, v in doc.items()]
        if "_text" in side:
            lines.append(side["_text"].rstrip("\n"))
        return "\n".join(lines) + "\n"
    doc["timestamp"] = timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat()
    return json.dumps(doc, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        result = COMMANDS[cfg["command"]](cfg)
        text = render(cfg, result)
    except ChaosieveError as exc:
        print(f"chaosieve: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"chaosieve: {exc}", file=sys.stderr)
        return 1
    if cfg["output"]:
        Path(cfg["output"]).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
