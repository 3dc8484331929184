"""Command-line front end: ``vircft <subcommand> [options]``.

Every number is printed as an exact string. Exit status is 0 when every
requested check passes, 1 when a check fails and 2 on a bad command line.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import cache
from .coeffs import C, ScalarPoly, bareiss_det, format_rational, parse_rational
from .fock import fock_bracket_check, fock_inner, monomials_of_weight
from .formal import GuardTooSmall, WindowExhausted, delta_identity_suite, describe_field, locality_order, ope_coeffs
from .partitions import weight
from .verma import (
    discrete_series,
    gram,
    gram_at,
    kac_det_direct,
    kac_det_formula,
    point_engine,
    quotient_graded_dims,
    singular_vectors,
    symbolic_engine,
    unitarity_classify,
)
from . import voa as voa_mod

MAX_CUTOFF = 12


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    level: int | None = None
    cutoff: int | None = None
    c: Fraction | ScalarPoly | None = None
    h: Fraction | None = None
    mu: Fraction | None = None
    symbolic: bool = False
    format: str = "json"
    parallel: int = 0
    options: dict = field(default_factory=dict)


@dataclass
class Report:
    payload: object
    ok: bool = True
    rows: list[dict] = field(default_factory=list)


# ---------------------------------------------------------------------------
# parsing


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational literal: {text!r}") from exc


def _c_value(text: str | None):
    if text is None or text == "c":
        return C
    return _rational(text)


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _f_spec(text: str) -> dict[int, Fraction]:
    """``"0:1,2:-1/3"`` is 1 - (1/3) z^2."""
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        try:
            k, v = item.split(":")
            out[int(k)] = _rational(v)
        except ValueError as exc:
            raise ConfigError(f"bad polynomial term {item!r}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vircft", description="Exact Virasoro representation computations.")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--parallel", type=int, default=0, help="worker processes for scans (0 = serial)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("kac-det", help="Gram determinant at level N")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--symbolic", action="store_true")
    s.add_argument("--c")
    s.add_argument("--h")

    s = sub.add_parser("gram", help="Shapovalov Gram matrix at level N")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--symbolic", action="store_true")
    s.add_argument("--c")
    s.add_argument("--h")

    s = sub.add_parser("unitarity-scan", help="definiteness of Gram matrices over a (c, h) grid")
    s.add_argument("--c-list", required=True)
    s.add_argument("--h-list", required=True)
    s.add_argument("--level-max", type=int, required=True)

    s = sub.add_parser("discrete-series", help="unitary (c, h) values below c = 1")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--extended-range", action="store_true")

    s = sub.add_parser("singular", help="kernel of the Gram matrix at a point")
    s.add_argument("--c", required=True)
    s.add_argument("--h", required=True)
    s.add_argument("--level", type=int, required=True)

    s = sub.add_parser("quotient-dims", help="graded dimensions of the irreducible quotient")
    s.add_argument("--c", required=True)
    s.add_argument("--h", default="0")
    s.add_argument("--level-max", type=int, required=True)
    s.add_argument("--vacuum", action="store_true", help="use the parts >= 2 vacuum module (h is ignored)")

    s = sub.add_parser("fock-verify", help="Virasoro brackets on the Fock space")
    s.add_argument("--cutoff", type=int, required=True)
    s.add_argument("--mu", default="0")
    s.add_argument("--mode-max", type=int, default=3)

    s = sub.add_parser("delta-check", help="formal delta identities on a window")
    s.add_argument("--window", type=int, required=True)
    s.add_argument("--guard", type=int, required=True)
    s.add_argument("--f", default="0:1,1:-2,2:1/3", help="Laurent polynomial as k:coef pairs")
    s.add_argument("--j-max", type=int, default=3)

    s = sub.add_parser("ope", help="OPE of the Virasoro field with itself")
    s.add_argument("--c", default="c")
    s.add_argument("--cutoff", type=int, default=6)

    s = sub.add_parser("voa-verify", help="vertex algebra axioms at a truncation")
    s.add_argument("--c", default="c")
    s.add_argument("--cutoff", type=int, default=6)
    s.add_argument("--borcherds-level", type=int, default=3)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, format=args.format, parallel=args.parallel)
    if cfg.parallel < 0:
        raise ConfigError("--parallel must be >= 0")
    for name in ("level", "cutoff", "level_max", "m", "window", "guard", "j_max", "mode_max", "borcherds_level"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be nonnegative")
    cfg.level = getattr(args, "level", None)
    cfg.cutoff = getattr(args, "cutoff", None)
    if cfg.cutoff is not None and cfg.cutoff > MAX_CUTOFF:
        raise ConfigError(f"--cutoff {cfg.cutoff} exceeds the limit {MAX_CUTOFF}")
    cfg.symbolic = getattr(args, "symbolic", False)
    if args.command in ("ope", "voa-verify"):
        cfg.c = _c_value(args.c)
    elif getattr(args, "c", None) is not None:
        cfg.c = _rational(args.c)
    if getattr(args, "h", None) is not None:
        cfg.h = _rational(args.h)
    if getattr(args, "mu", None) is not None:
        cfg.mu = _rational(args.mu)
    if args.command in ("kac-det", "gram"):
        if cfg.symbolic and (cfg.c is not None or cfg.h is not None):
            raise ConfigError("--symbolic excludes --c/--h")
        if not cfg.symbolic and (cfg.c is None) != (cfg.h is None):
            raise ConfigError("give both --c and --h, or --symbolic")
        if cfg.c is None:
            cfg.symbolic = True
    opts = {}
    for name in ("level_max", "m", "extended_range", "window", "guard", "j_max", "mode_max", "borcherds_level", "vacuum"):
        if hasattr(args, name):
            opts[name] = getattr(args, name)
    if hasattr(args, "c_list"):
        opts["c_list"] = _rational_list(args.c_list)
        opts["h_list"] = _rational_list(args.h_list)
    if hasattr(args, "f"):
        opts["f"] = _f_spec(args.f)
    cfg.options = opts
    return cfg


# ---------------------------------------------------------------------------
# serialization


def _s(x) -> str:
    if isinstance(x, ScalarPoly):
        return str(x)
    return format_rational(Fraction(x))


def _matrix(rows) -> list[list[str]]:
    return [[_s(x) for x in row] for row in rows]


def _vector(vec: dict) -> list[dict]:
    return [{"partition": list(lam), "coef": _s(v)} for lam, v in sorted(vec.items(), reverse=True)]


# ---------------------------------------------------------------------------
# commands


def cmd_kac_det(cfg: RunConfig) -> Report:
    N = cfg.level
    if cfg.symbolic:
        g = gram(N)
        fac = kac_det_formula(N)
        payload = {
            "level": N,
            "basis": [list(b) for b in g.basis],
            "gram": g.matrix.to_strings(),
            "det": str(kac_det_direct(N)),
            "K": _s(fac.K),
            "phi_exponents": [{"p": p, "q": q, "exp": e} for p, q, e in fac.exponents],
        }
        return Report(payload, rows=[{"level": N, "det": payload["det"], "K": payload["K"]}])
    det = bareiss_det(gram_at(cfg.c, cfg.h, N))
    payload = {"level": N, "c": _s(cfg.c), "h": _s(cfg.h), "det": _s(det)}
    return Report(payload, rows=[payload])


def cmd_gram(cfg: RunConfig) -> Report:
    N = cfg.level
    if cfg.symbolic:
        g = gram(N)
        basis, entries = g.basis, g.matrix.entries
        payload = {"level": N, "basis": [list(b) for b in basis], "gram": _matrix(entries)}
    else:
        eng = point_engine(cfg.c, cfg.h)
        basis, entries = eng.basis(N), gram_at(cfg.c, cfg.h, N)
        payload = {"level": N, "c": _s(cfg.c), "h": _s(cfg.h), "basis": [list(b) for b in basis], "gram": _matrix(entries)}
    rows = [
        {"row": ",".join(map(str, a)), "col": ",".join(map(str, b)), "entry": payload["gram"][i][j]}
        for i, a in enumerate(basis)
        for j, b in enumerate(basis)
    ]
    return Report(payload, rows=rows)


def _scan_point(args):
    c0, h0, n_max = args
    return [(v.level, v.verdict.value, v.nullity) for v in unitarity_classify(c0, h0, n_max)]


def _map(fn, tasks, workers: int):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def cmd_unitarity_scan(cfg: RunConfig) -> Report:
    o = cfg.options
    tasks = [(c0, h0, o["level_max"]) for c0 in o["c_list"] for h0 in o["h_list"]]
    results = _map(_scan_point, tasks, cfg.parallel)
    points, rows = [], []
    for (c0, h0, _), verdicts in zip(tasks, results):
        levels = [{"level": N, "verdict": v, "nullity": k} for N, v, k in verdicts]
        points.append({"c": _s(c0), "h": _s(h0), "levels": levels})
        rows.extend({"c": _s(c0), "h": _s(h0), **lv} for lv in levels)
    return Report({"level_max": o["level_max"], "points": points}, rows=rows)


def cmd_discrete_series(cfg: RunConfig) -> Report:
    ds = discrete_series(cfg.options["m"], cfg.options["extended_range"])
    payload = {
        "m": ds.m,
        "c": _s(ds.c),
        "h": [_s(h) for _, _, h in ds.weights],
        "pairs": [{"p": p, "q": q, "h": _s(h)} for p, q, h in ds.weights],
    }
    rows = [{"m": ds.m, "c": payload["c"], **pq} for pq in payload["pairs"]]
    return Report(payload, rows=rows)


def cmd_singular(cfg: RunConfig) -> Report:
    vecs = singular_vectors(cfg.c, cfg.h, cfg.level)
    eng = point_engine(cfg.c, cfg.h)
    kernel = []
    rows = []
    for i, v in enumerate(vecs):
        annihilated = not eng.act(1, v) and not eng.act(2, v)
        kernel.append({"vector": _vector(v), "annihilated_by_L1_L2": annihilated})
        rows.extend({"index": i, "partition": ",".join(map(str, t["partition"])), "coef": t["coef"]} for t in _vector(v))
    payload = {"c": _s(cfg.c), "h": _s(cfg.h), "level": cfg.level, "nullity": len(vecs), "kernel": kernel}
    ok = all(k["annihilated_by_L1_L2"] for k in kernel)
    return Report(payload, ok=ok, rows=rows)


def cmd_quotient_dims(cfg: RunConfig) -> Report:
    n_max = cfg.options["level_max"]
    if cfg.options["vacuum"]:
        dims = voa_mod.quotient_voa_dims(cfg.c, n_max)
        payload = {"c": _s(cfg.c), "module": "vacuum", "dims": dims}
    else:
        dims = quotient_graded_dims(cfg.c, cfg.h, n_max)
        payload = {"c": _s(cfg.c), "h": _s(cfg.h), "module": "verma", "dims": dims}
    return Report(payload, rows=[{"level": N, "dim": d} for N, d in enumerate(dims)])


def _fock_task(args):
    m, n, cutoff, mu = args
    r = fock_bracket_check(m, n, cutoff, mu)
    return {
        "check": "fock_bracket",
        "m": m,
        "n": n,
        "cutoff": cutoff,
        "mu": _s(mu),
        "ok": r.ok,
        "counterexample": None if r.counterexample is None else [list(p) for p in r.counterexample],
    }


def cmd_fock_verify(cfg: RunConfig) -> Report:
    K = cfg.options["mode_max"]
    cutoff, mu = cfg.cutoff, cfg.mu
    if K > cutoff:
        raise ConfigError("--mode-max must not exceed --cutoff")
    pairs = [(m, n) for m in range(-K, K + 1) for n in range(-K, K + 1)]
    tasks = [(m, n, cutoff, mu) for m, n in pairs if abs(m + n) <= cutoff and max(0, -m, -n, -m - n) <= cutoff]
    records = _map(_fock_task, tasks, cfg.parallel)
    # adjointness <a_n f, g> = <f, a_-n g> and <L_n f, g> = <f, L_-n g> at mu
    from .fock import fock_L, heis_act

    adj_ok = True
    top = min(cutoff, 5)
    monos = [m for w in range(top + 1) for m in monomials_of_weight(w)]
    for n in range(1, K + 1):
        for f in monos:
            for g in monos:
                F, G = {f: Fraction(1)}, {g: Fraction(1)}
                if fock_inner(heis_act(n, F, mu), G) != fock_inner(F, heis_act(-n, G, mu)):
                    adj_ok = False
                if fock_inner(fock_L(n, F, mu), G) != fock_inner(F, fock_L(-n, G, mu)):
                    adj_ok = False
    adjoint = {"check": "fock_adjoint", "max_weight": top, "mode_max": K, "mu": _s(mu), "ok": adj_ok}
    ok = adj_ok and all(r["ok"] for r in records)
    rows = [{k: v for k, v in r.items() if k != "counterexample"} for r in records]
    return Report({"checks": records, "adjoint": adjoint, "ok": ok}, ok=ok, rows=rows)


def cmd_delta_check(cfg: RunConfig) -> Report:
    o = cfg.options
    try:
        rep = delta_identity_suite(o["window"], o["guard"], o["f"], o["j_max"])
    except GuardTooSmall as exc:
        raise ConfigError(str(exc)) from exc
    payload = {"window": rep.window, "guard": rep.guard, "parts": dict(sorted(rep.parts.items())), "ok": rep.ok}
    rows = [{"part": k, "ok": v} for k, v in sorted(rep.parts.items())]
    return Report(payload, ok=rep.ok, rows=rows)


def cmd_ope(cfg: RunConfig) -> Report:
    V = voa_mod.build_voa(cfg.c, cfg.cutoff)
    L = V.basis_field(voa_mod.NU)
    N = locality_order(L, L, 8)
    if N is None:
        payload = {"pair": ["L", "L"], "locality_order": None, "coeffs": []}
        return Report(payload, ok=False)
    try:
        coeffs = ope_coeffs(L, L, N)
    except WindowExhausted:
        return Report({"pair": ["L", "L"], "locality_order": N, "coeffs": []}, ok=False)
    named = {"id": V.basis_field(voa_mod.VACUUM), "L": L, "dL": L.derivative()}
    table = [{"j": j, "field": describe_field(f, named)} for j, f in enumerate(coeffs)]
    payload = {"pair": ["L", "L"], "c": _s(cfg.c), "cutoff": cfg.cutoff, "locality_order": N, "coeffs": table}
    return Report(payload, rows=table)


def _borcherds_task(args):
    c_text, cutoff, a, b = args
    c = C if c_text == "c" else parse_rational(c_text)
    V = voa_mod.build_voa(c, cutoff)
    rep = voa_mod.borcherds_check(V, tuple(a), tuple(b))
    return rep.ok, [str(f) for f in rep.failures], rep.compared


def cmd_voa_verify(cfg: RunConfig) -> Report:
    V = voa_mod.build_voa(cfg.c, cfg.cutoff)
    top = cfg.options["borcherds_level"]
    if top > cfg.cutoff - 2:
        raise ConfigError("--borcherds-level must be <= cutoff - 2")
    reports = [
        voa_mod.translation_axiom_check(V),
        voa_mod.locality_check(V),
        voa_mod.vacuum_axiom_check(V),
    ]
    basis = V.all_basis(top)
    tasks = [("c" if isinstance(cfg.c, ScalarPoly) else _s(cfg.c), cfg.cutoff, a, b) for a in basis for b in basis]
    bor = voa_mod.AxiomReport("borcherds", cfg.cutoff)
    for ok, fails, k in _map(_borcherds_task, tasks, cfg.parallel):
        bor.ok &= ok
        bor.failures.extend(fails)
        bor.compared += k
    reports += [bor, voa_mod.sl2_check(V), voa_mod.invariant_form_check(V)]
    verdicts = [r.to_json() for r in reports]
    ok = all(r.ok for r in reports)
    rows = [{"axiom": v["axiom"], "cutoff": v["cutoff"], "ok": v["ok"]} for v in verdicts]
    return Report({"c": _s(cfg.c), "cutoff": cfg.cutoff, "verdicts": verdicts, "ok": ok}, ok=ok, rows=rows)


COMMANDS = {
    "kac-det": cmd_kac_det,
    "gram": cmd_gram,
    "unitarity-scan": cmd_unitarity_scan,
    "discrete-series": cmd_discrete_series,
    "singular": cmd_singular,
    "quotient-dims": cmd_quotient_dims,
    "fock-verify": cmd_fock_verify,
    "delta-check": cmd_delta_check,
    "ope": cmd_ope,
    "voa-verify": cmd_voa_verify,
}


# ---------------------------------------------------------------------------
# output


def dumps_json(payload) -> str:
    return json.dumps(payload, indent=2)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return dumps_json(report.payload)
    if fmt == "csv":
        rows = report.rows or [report.payload if isinstance(report.payload, dict) else {"value": report.payload}]
        buf = io.StringIO()
        keys = list(dict.fromkeys(k for r in rows for k in r))
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        return buf.getvalue().rstrip("\n")
    return _pretty(report.payload)


def _pretty(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(
            f"{pad}-\n{_pretty(x, indent + 1)}" if isinstance(x, (dict, list)) and not _flat(x) else f"{pad}- {_inline(x)}"
            for x in obj
        )
    return f"{pad}{_inline(obj)}"


def _flat(v) -> bool:
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values())
    return all(not isinstance(x, (dict, list)) or _flat(x) for x in v) and len(str(v)) < 100


def _inline(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


# ---------------------------------------------------------------------------
# entry point


def _engines_used(cfg: RunConfig):
    engines = [symbolic_engine()]
    if point_engine.cache_info().currsize:
        # lru_cache offers no iteration; rebuild the keys we know were touched
        pts = []
        if cfg.c is not None and cfg.h is not None and not isinstance(cfg.c, ScalarPoly):
            pts.append((cfg.c, cfg.h))
        for c0 in cfg.options.get("c_list", []):
            for h0 in cfg.options.get("h_list", []):
                pts.append((c0, h0))
        engines += [point_engine(c0, h0) for c0, h0 in pts]
    return engines


def run(cfg: RunConfig) -> tuple[int, str]:
    use_cache = cache.cache_dir() is not None
    if use_cache:
        cache.restore(symbolic_engine())
        if cfg.c is not None and cfg.h is not None and not isinstance(cfg.c, ScalarPoly):
            cache.restore(point_engine(cfg.c, cfg.h))
    report = COMMANDS[cfg.command](cfg)
    if use_cache:
        for eng in _engines_used(cfg):
            cache.persist(eng)
    return (0 if report.ok else 1), render(report, cfg.format)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        status, text = run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
