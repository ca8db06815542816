"""``conic-census`` command line: counts as CSV, predicted constants, local densities, invariant suites."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import census
from .errors import CapacityError, CensusError, DomainError
from .family import FamilyParams, parse_triple

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

SCALAR_HEADER = ["bound", "raw_count", "normalized", "predicted", "ratio"]
BOX_HEADER = ["x1", "x2", "x3", "raw_count", "normalized", "predicted", "ratio"]

#: defaults applied after the config file, so flags > config > defaults
DEFAULTS = {
    "prime_bound": 10**6,
    "depth": 4,
    "workers": 1,
    "b": "1,1,1",
    "m": "1,1,1",
    "a": -1,
    "g": "x0**2+x1**2",
}


def fmt(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _int_like(text: str) -> int:
    """Accept 1000, 1e6, 10**6."""
    text = str(text).strip()
    try:
        if "**" in text:
            base, exp = text.split("**")
            return int(base) ** int(exp)
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val != int(val):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(val)


def _int_list(text: str) -> list[int]:
    return [_int_like(t) for t in str(text).split(",") if t.strip()]


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    bounds: list[int] = field(default_factory=list)
    boxes: list[tuple[int, int, int]] = field(default_factory=list)
    params: FamilyParams | None = None
    prime_bound: int = 10**6
    depth: int = 4
    workers: int = 1
    out: str | None = None
    g: str = "x0**2+x1**2"
    a: int = -1

    def __post_init__(self):
        if self.workers < 1:
            raise DomainError("--workers must be >= 1")
        if any(b < 1 for b in self.bounds):
            raise DomainError("bounds must be positive")
        if any(min(x) < 1 for x in self.boxes):
            raise DomainError("box sides must be positive")


def read_config(path: str) -> dict[str, str]:
    """key = value lines; keys are flag names without dashes (bmax, prime-bound or prime_bound, ...)."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line without '=': {raw!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime-bound", "-P", dest="prime_bound", type=_int_like, default=None)
    common.add_argument("--depth", type=int, default=None)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--config", default=None, help="key = value file mirroring the flags")
    common.add_argument("--b", default=None, help="b1,b2,b3")
    common.add_argument("--m", default=None, help="m12,m13,m23")
    common.add_argument("--g", default=None, help="homogeneous form in x0, x1, ...")
    common.add_argument("--a", type=int, default=None)

    parser = argparse.ArgumentParser(prog="conic-census", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("count", parents=[common], help="run a census and write CSV")
    pc.add_argument("family", choices=["conics", "conics-all", "genguo", "two-squares", "norm-form"])
    pc.add_argument("--bmax", default=None, help="bound or comma-separated grid of bounds")
    pc.add_argument("--x", action="append", default=None, help="X1,X2,X3 (repeat for a grid)")

    pp = sub.add_parser("predict", parents=[common], help="print predicted constants")
    pp.add_argument("family", choices=["conics", "genguo", "two-squares", "norm-form"])

    pd = sub.add_parser("density", parents=[common], help="local density at one place")
    pd.add_argument("--family", required=True, choices=["conic", "two-squares", "norm-form"])
    pd.add_argument("--p", required=True, help="prime or 'inf'")

    pv = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    pv.add_argument("suite_pos", nargs="?", choices=["hilbert", "detectors", "densities", "assembly", "selberg"])
    pv.add_argument("--suite", choices=["hilbert", "detectors", "densities", "assembly", "selberg"])
    return parser


def _merge(ns: argparse.Namespace) -> argparse.Namespace:
    conf = read_config(ns.config) if getattr(ns, "config", None) else {}
    for key, val in conf.items():
        if not hasattr(ns, key):
            raise DomainError(f"unknown config key {key!r}")
        if getattr(ns, key) is None:
            if key in ("prime_bound",):
                val = _int_like(val)
            elif key in ("depth", "workers", "a"):
                val = int(val)
            elif key == "x":
                val = [v.strip() for v in val.split(";")]
            setattr(ns, key, val)
    for key, val in DEFAULTS.items():
        if getattr(ns, key, None) is None:
            setattr(ns, key, val)
    return ns


def make_config(ns: argparse.Namespace) -> RunConfig:
    bounds = _int_list(ns.bmax) if getattr(ns, "bmax", None) else []
    boxes = [parse_triple(x) for x in ns.x] if getattr(ns, "x", None) else []
    params = None
    if ns.command in ("count", "predict") and ns.family == "genguo":
        params = FamilyParams(parse_triple(ns.b), parse_triple(ns.m))
    return RunConfig(
        command=ns.command,
        family=getattr(ns, "family", None),
        bounds=bounds,
        boxes=boxes,
        params=params,
        prime_bound=ns.prime_bound,
        depth=ns.depth,
        workers=ns.workers,
        out=ns.out,
        g=ns.g,
        a=ns.a,
    )


# -- subcommands ----------------------------------------------------------------


def _predicted_scalar(cfg: RunConfig) -> tuple[float, int]:
    """(predicted coefficient, projective dimension n for the normalization)."""
    from .constants import predict_conics, predict_two_squares
    from .normform import Form, predict_norm_form

    if cfg.family == "conics":
        return predict_conics(cfg.prime_bound).route1, 2
    if cfg.family == "conics-all":
        return predict_conics(cfg.prime_bound).all_triples, 2
    if cfg.family == "two-squares":
        return predict_two_squares(cfg.prime_bound).value, 1
    form = Form.parse(cfg.g)
    return predict_norm_form(form, cfg.a, depth=min(cfg.depth, 3)).naive, form.n


def _normalization(family: str, B: int, n: int) -> float:
    if family in ("conics", "conics-all"):
        return census.normalization_conics(B)
    if family == "two-squares":
        return census.normalization_two_squares(B)
    return census.normalization_norm_form(B, n)


def cmd_count(cfg: RunConfig) -> list[list[str]]:
    rows: list[list[str]] = []
    if cfg.family == "genguo":
        if not cfg.boxes:
            raise DomainError("count genguo needs --x X1,X2,X3")
        from .constants import predict_genguo

        pred = predict_genguo(cfg.params, cfg.prime_bound)
        for X in cfg.boxes:
            raw = census.count_generalized(cfg.params, X, workers=cfg.workers)
            rec = census.CountRecord(X, raw, census.normalization_generalized(X), pred)
            rows.append([*map(str, X), str(raw), fmt(rec.normalized), fmt(pred), fmt(rec.ratio)])
        return [BOX_HEADER, *rows]
    if not cfg.bounds:
        raise DomainError(f"count {cfg.family} needs --bmax")
    pred, n = _predicted_scalar(cfg)
    top = max(cfg.bounds)
    sieve = None
    if cfg.family in ("conics", "conics-all", "two-squares"):
        from .arith import build_sieve

        sieve = build_sieve(max(top, 2))
    for B in cfg.bounds:
        if cfg.family == "conics":
            raw = census.count_primitive_conics(B, sieve, cfg.workers)
        elif cfg.family == "conics-all":
            raw = census.count_all_conics(B, sieve, cfg.workers)
        elif cfg.family == "two-squares":
            raw = census.count_two_squares(B, sieve, cfg.workers)
        else:
            raw = census.count_norm_form(cfg.g, cfg.a, B)
        rec = census.CountRecord((B,), raw, _normalization(cfg.family, B, n), pred)
        rows.append([str(B), str(raw), fmt(rec.normalized), fmt(pred), fmt(rec.ratio)])
    return [SCALAR_HEADER, *rows]


def cmd_predict(cfg: RunConfig) -> list[tuple[str, object]]:
    from . import constants as C

    P = cfg.prime_bound
    if cfg.family == "conics":
        c = C.predict_conics(P)
        return [
            ("route1", c.route1),
            ("route2", c.route2),
            ("route2_closed_factor", c.route2_closed),
            ("assembly", c.assembly),
            ("max_relative_delta", c.max_route_delta),
            ("all_triples", c.all_triples),
            ("all_triples_zeta3", c.all_triples_zeta),
            ("two_adic_gamma", c.two_adic_gamma),
            ("prime_bound", P),
            ("tail_bound", c.tail_bound),
        ]
    if cfg.family == "two-squares":
        t = C.predict_two_squares(P)
        naive = C.two_squares_naive_partials([10**4, 10**5, min(P, 10**6)])
        return [
            ("regularized", t.value),
            ("regular_product", t.regular_product),
            ("naive_truncation_1e4", naive[0]),
            ("naive_truncation_1e5", naive[1]),
            ("naive_truncation_max", naive[2]),
            ("prime_bound", P),
            ("tail_bound", t.tail_bound),
        ]
    if cfg.family == "genguo":
        p = cfg.params
        kv = C.kappa_value(P)
        return [
            ("coefficient", C.predict_genguo(p, P)),
            ("beta", C.beta_bm(p, P)),
            ("beta_direct", C.beta_bm_direct(p, P)),
            ("c_bm", C.c_bm(p)),
            ("tau_m_odd", C.tau(p.m_odd)),
            ("guo_constant", C.guo_constant(P)),
            ("kappa", kv.value),
            ("prime_bound", P),
            ("tail_bound", kv.tail_bound),
        ]
    from .normform import predict_norm_form

    pr = predict_norm_form(cfg.g, cfg.a, prime_bound=min(P, 10**4), depth=min(cfg.depth, 3))
    return [
        ("naive", pr.naive),
        ("anticanonical", pr.anticanonical),
        ("omega_inf", pr.omega_inf),
        ("padic_product", pr.padic_product),
        ("truncation_sensitivity", pr.truncation_sensitivity),
        ("undetermined_mass", pr.undetermined_mass),
        ("prime_bound", pr.prime_bound),
        ("depth", pr.depth),
    ]


def cmd_density(cfg: RunConfig, family: str, place: str) -> list[tuple[str, object]]:
    from . import densities as D

    if family == "norm-form":
        from .normform import Form, omega_p

        om = omega_p(Form.parse(cfg.g), cfg.a, int(place), cfg.depth)
        return [("omega", om.value), ("volume", om.volume), ("undetermined", om.undetermined), ("depth", om.depth)]
    if place in ("inf", "oo", "infinity", "real"):
        d = D.local_density_conic_real() if family == "conic" else D.local_density_two_squares("inf")
        return [("closed", d.value)]
    p = int(place)
    if family == "conic":
        e, c = D.local_density_conic(p, cfg.depth), D.local_density_conic_closed(p)
    else:
        e = D.local_density_two_squares(p, "enumeration", cfg.depth)
        c = D.local_density_two_squares(p, "closed")
    return [("enumeration", e.value), ("closed", c.value), ("match", e.value == c.value), ("tail_mass", e.tail_mass)]


def cmd_verify(suite: str):
    from .verify import run_suite

    return run_suite(suite)


# -- entry point -------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _kv_text(pairs) -> str:
    return "".join(f"{k}: {fmt(v)}\n" for k, v in pairs)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        ns = _merge(ns)
        cfg = make_config(ns)
        if ns.command == "count":
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(cmd_count(cfg))
            _emit(buf.getvalue(), cfg.out)
        elif ns.command == "predict":
            _emit(_kv_text(cmd_predict(cfg)), cfg.out)
        elif ns.command == "density":
            _emit(_kv_text(cmd_density(cfg, ns.family, ns.p)), cfg.out)
        else:
            suite = ns.suite or ns.suite_pos
            if suite is None:
                parser.error("verify needs a suite")
            results = cmd_verify(suite)
            _emit("".join(r.line() + "\n" for r in results), cfg.out)
            return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CensusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
