"""Command-line driver: one subcommand per verification, plus ``report``.

Exit codes: 0 all claims verified, 1 usage error, 2 verification failure,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from itertools import combinations

from . import __version__
from .config import build_incidence, configuration_params, is_symmetric, verify_design
from .geom import ProjLine, line_through, points_on_line
from .gf import NonPrime, TooLarge, create_field, is_prime
from .lines import chord_condition, enumerate_lines
from .pencil import build_pencil, pencil_sweep, quasi_elliptic_report, unirational_samples
from .surface import Surface, hermitian_form, hermitian_model_map, on_surface
from .unitary import (
    anti_hermitian_enum, gu_order, line_orbit, model_lines, stabilizer_count,
    stabilizer_enum, stabilizer_group_checks, stabilizer_order, STAB_CAP,
)

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    p: int
    a: int = 1
    level: str = "quadratic"
    fmt: str = "json"
    line: str | None = None
    sample: int = 3
    workers: int = 1
    all_quartic: bool = False
    all_lines: bool = False
    list_items: bool = False
    timing: bool = False
    out: str | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise UsageError(f"--p {self.p} is not prime")
        if self.a < 1:
            raise UsageError("--a must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")

    @property
    def q(self):
        return self.p**self.a


def _claim(name, expected, observed, ok=None):
    return {"claim": name, "expected": expected, "observed": observed,
            "ok": bool(expected == observed) if ok is None else bool(ok)}


def _pt(P):
    return ",".join(map(str, P))


def _select_line(surface, selector):
    lines = enumerate_lines(surface)
    if selector is None:
        return lines[0]
    if selector.lstrip("-").isdigit():
        i = int(selector)
        if not 0 <= i < len(lines):
            raise UsageError(f"--line index {i} out of range 0..{len(lines) - 1}")
        return lines[i]
    try:
        line = ProjLine.from_key(surface.ctx, selector)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad --line key {selector!r}: {exc}")
    if line not in set(lines):
        raise UsageError(f"--line {selector!r} is not a line of the surface")
    return line


# -- commands ------------------------------------------------------------------

def cmd_points(cfg, surface):
    if cfg.level not in ("base", "quadratic"):
        raise UsageError("points accepts --level base or quadratic")
    pts = surface.enumerate_points(cfg.level)
    expected = surface.expected_point_count(cfg.level)
    body = {"level": cfg.level, "count": len(pts), "expected": expected}
    field = "F_{q^2}" if cfg.level == "quadratic" else "F_q"
    claims = [_claim(f"point count over {field}", expected, len(pts))]
    if cfg.level == "quadratic":
        chart = surface.chart_counts()
        body["chart_counts"] = chart
        claims.append(_claim("affine chart and boundary case counts",
                             surface.expected_chart_counts(), chart))
        claims.append(_claim("surface is smooth at every point", True, surface.smoothness_check()))
    if cfg.list_items:
        body["points"] = [_pt(P) for P in pts]
    return body, claims


def chord_equivalence(surface):
    """(pairs checked, mismatches) between the chord test and the point test."""
    ctx = surface.ctx
    pts = surface.enumerate_points()
    bad = 0
    n = 0
    for P, Q in combinations(pts, 2):
        n += 1
        on_line = all(on_surface(ctx, X) for X in points_on_line(ctx, line_through(ctx, P, Q)))
        bad += chord_condition(ctx, P, Q) != on_line
    return n, bad


def cmd_lines(cfg, surface):
    if cfg.level not in ("base", "quadratic"):
        raise UsageError("lines accepts --level base or quadratic")
    lines = enumerate_lines(surface, cfg.level)
    expected = surface.expected_line_count(cfg.level)
    q = surface.q
    through = {len(surface.tangent_cone_lines(P)) for P in surface.enumerate_points()}
    body = {"level": cfg.level, "count": len(lines), "expected": expected,
            "lines_per_point": sorted(through)}
    claims = [_claim("line count", expected, len(lines)),
              _claim("q+1 lines through every point", [q + 1], sorted(through))]
    if surface.q <= 2:
        n, bad = chord_equivalence(surface)
        body["chord_pairs_checked"] = n
        claims.append(_claim("chord condition iff line on surface (all pairs)", 0, bad))
    if cfg.list_items:
        body["lines"] = [L.key for L in lines]
    return body, claims


def cmd_config(cfg, surface):
    if cfg.level not in ("base", "quadratic"):
        raise UsageError("config accepts --level base or quadratic")
    q, ctx = surface.q, surface.ctx
    I = build_incidence(ctx, surface.enumerate_points(cfg.level),
                        enumerate_lines(surface, cfg.level), cfg.level)
    params = configuration_params(I)
    if not params:
        return {"level": cfg.level, "configuration": False}, [
            _claim("incidence is a configuration", True, False)]
    if cfg.level == "quadratic":
        exp = [(q**3 + 1) * (q**2 + 1), q + 1, (q**3 + 1) * (q + 1), q**2 + 1]
    else:
        n = q**3 + q**2 + q + 1
        exp = [n, q + 1, n, q + 1]
    got = [params.v, params.k, params.b, params.r]
    sym = is_symmetric(I)
    design = verify_design(I, 1, q + 1)
    body = {"level": cfg.level, "v": params.v, "k": params.k, "b": params.b, "r": params.r,
            "symmetric": sym, "design_1": design, "notation": str(params),
            "incidences": len(I.incidence)}
    claims = [_claim(f"configuration {str(params)}", exp, got),
              _claim("symmetric configuration", cfg.level == "base", sym),
              _claim(f"1-({exp[0]}, {q + 1}, {q + 1}) design", True, design)]
    return body, claims


def cmd_pencil(cfg, surface):
    if cfg.level not in ("quadratic", "quartic"):
        raise UsageError("pencil accepts --level quadratic or quartic")
    q = surface.q
    line = _select_line(surface, cfg.line)
    sample = cfg.sample
    report = build_pencil(surface, line, sample=sample, all_quartic=cfg.all_quartic)
    s = report.summary()
    body = {k: v for k, v in s.items() if k != "checks"}
    body["components_each"] = s["components_each"][0] if len(s["components_each"]) == 1 else s["components_each"]
    claims = [
        _claim("singular fibers", q**2 + 1, s["singular_fibers"]),
        _claim("components per singular fiber", q, body["components_each"]),
        _claim("sections", q**4, s["sections"]),
    ]
    claims += [_claim(f"pencil check: {k}", True, v) for k, v in s["checks"].items()]
    if cfg.list_items:
        body["fibers"] = [{
            "param": list(f.base_param), "hyperplane": _pt(f.hyperplane),
            "apex": _pt(f.classification.apex),
            "components": [L.key for L in f.classification.components],
        } for f in report.fibers]
        body["section_lines"] = [L.key for L in report.sections]
    if cfg.all_lines:
        sweep = pencil_sweep(surface.p, surface.a, sample=sample, workers=cfg.workers)
        shapes = {(x["singular_fibers"], x["fiber_lines"], x["sections"]) for x in sweep}
        body["lines_swept"] = len(sweep)
        claims.append(_claim("identical pencil counts for every line", 1, len(shapes)))
        claims.append(_claim("all pencil checks pass for every line", True,
                             all(all(x["checks"].values()) for x in sweep)))
    samples = unirational_samples(surface, n=1000, seed=0)
    body["unirational_samples"] = len(samples)
    claims.append(_claim("unirational parametrization lands on S (1000 samples)",
                         len(samples), sum(ok for *_, ok in samples)))
    if (surface.p, surface.a) == (3, 1):
        qe = quasi_elliptic_report(surface, lines=None if cfg.all_lines else [line],
                                   workers=cfg.workers)
        body["quasi_elliptic"] = qe
        claims.append(_claim("quasi-elliptic counts 112 = 30 + 1 + 81",
                             [112, 10, 30, 81],
                             [qe["total_lines"], qe["singular_fibers"], qe["fiber_lines"], qe["sections"]]))
    return body, claims


def cmd_stabilizer(cfg, surface):
    ctx, q = surface.ctx, surface.q
    M = anti_hermitian_enum(ctx)
    claims = [_claim("anti-Hermitian 2x2 count", q**4, len(M))]
    body = {"anti_hermitian": len(M), "expected_order": stabilizer_order(q), "gu_order": gu_order(q)}
    if stabilizer_order(q) <= STAB_CAP:
        S = stabilizer_enum(ctx)
        checks = stabilizer_group_checks(ctx, S)
        order = len(S)
        body["mode"] = "enumerate"
        body["group_checks"] = checks
        closed = checks["product_closed"] and checks["inverse_closed"] and checks["has_identity"]
        claims.append(_claim("stabilizer members unitary and fixing the line", True,
                             checks["unitary"] and checks["fixes_line"] and checks["distinct"]))
    else:
        order, bad = stabilizer_count(ctx)
        body["mode"] = "count"
        closed = None
        claims.append(_claim("streamed members unitary and fixing the line", 0, bad))
    body["order"] = order
    body["group_closed"] = closed
    claims.append(_claim("stabilizer order", stabilizer_order(q), order))
    if closed is not None:
        claims.append(_claim("stabilizer is a group", True, closed))
    orbit = line_orbit(ctx)
    body["orbit"] = len(orbit)
    body["consistent"] = len(orbit) * order == gu_order(q)
    claims.append(_claim("line orbit size", (q + 1) * (q**3 + 1), len(orbit)))
    claims.append(_claim("|orbit| * |stabilizer| = |GU_4(q)|", gu_order(q), len(orbit) * order))
    return body, claims


def cmd_orbit(cfg, surface):
    ctx, q = surface.ctx, surface.q
    orbit = line_orbit(ctx)
    lines = model_lines(surface)
    phi = hermitian_model_map(ctx)
    image_ok = all(hermitian_form(ctx, phi.forward(ctx, P)) == 0 for P in surface.enumerate_points())
    body = {"orbit": len(orbit), "expected": (q + 1) * (q**3 + 1), "lambda": phi.lam,
            "matches_surface_lines": orbit == lines}
    claims = [_claim("line orbit size", (q + 1) * (q**3 + 1), len(orbit)),
              _claim("orbit equals the surface's lines in the Hermitian model", True, orbit == lines),
              _claim("coordinate change carries S into the Hermitian model", True, image_ok)]
    if cfg.list_items:
        body["lines"] = [L.key for L in orbit]
    return body, claims


def cmd_report(cfg, surface):
    claims, skipped = [], []
    parts = [("points", cmd_points, "quadratic"), ("points", cmd_points, "base"),
             ("lines", cmd_lines, "quadratic"), ("lines", cmd_lines, "base"),
             ("config", cmd_config, "quadratic"), ("config", cmd_config, "base"),
             ("pencil", cmd_pencil, "quadratic"), ("stabilizer", cmd_stabilizer, None),
             ("orbit", cmd_orbit, None)]
    seen = set()
    for name, fn, level in parts:
        sub = RunConfig(**{**cfg.__dict__, "level": level or "quadratic", "list_items": False})
        try:
            _, cl = fn(sub, surface)
        except TooLarge as exc:
            skipped.append({"command": name, "reason": str(exc)})
            continue
        for c in cl:
            key = (c["claim"], json.dumps(c["expected"], sort_keys=True))
            if key not in seen:
                seen.add(key)
                claims.append({**c, "claim": f"{name}: {c['claim']}"})
    body = {"claims_checked": len(claims), "skipped": skipped}
    return body, claims


COMMANDS = {
    "points": cmd_points,
    "lines": cmd_lines,
    "config": cmd_config,
    "pencil": cmd_pencil,
    "stabilizer": cmd_stabilizer,
    "orbit": cmd_orbit,
    "report": cmd_report,
}


# -- output --------------------------------------------------------------------

def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        else:
            yield key, v


def _cell(v):
    return v if isinstance(v, str) else json.dumps(v, sort_keys=True)


def render(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    rows = [(k, _cell(v)) for k, v in _flatten({k: v for k, v in doc.items() if k != "claims"})]
    claims = [(c["claim"], _cell(c["expected"]), _cell(c["observed"]), "pass" if c["ok"] else "FAIL")
              for c in doc["claims"]]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["claim", "expected", "observed", "status"])
        w.writerows(claims)
        w.writerow([])
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "md":
        esc = lambda s: str(s).replace("|", "\\|")
        lines = ["| claim | expected | observed | status |", "|---|---|---|---|"]
        lines += ["| " + " | ".join(esc(x) for x in r) + " |" for r in claims]
        lines += ["", "| key | value |", "|---|---|"]
        lines += [f"| {esc(k)} | {esc(v)} |" for k, v in rows]
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def run(command, cfg):
    """Execute ``command``; returns (document, exit code)."""
    if cfg.level == "quartic" and command != "pencil":
        raise UsageError("--level quartic is only accepted by pencil")
    t0 = time.perf_counter()
    surface = Surface.over(cfg.p, cfg.a)
    body, claims = COMMANDS[command](cfg, surface)
    ok = all(c["ok"] for c in claims)
    doc = {"command": command, "params": {"p": cfg.p, "a": cfg.a, "q": cfg.q},
           "version": __version__, "result": body, "claims": claims, "ok": ok}
    if cfg.timing:
        doc["meta"] = {"elapsed_s": round(time.perf_counter() - t0, 3), "workers": cfg.workers}
    code = EXIT_OK if ok else EXIT_FAIL
    if ok and body.get("skipped"):
        code = EXIT_CAP
    return doc, code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="hermitian", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=int, required=True, help="characteristic")
        sp.add_argument("--a", type=int, default=1, help="q = p^a")
        sp.add_argument("--level", choices=["base", "quadratic", "quartic"], default="quadratic")
        sp.add_argument("--format", dest="fmt", choices=["json", "csv", "md"], default="json")
        sp.add_argument("--line", help="canonical line key or index into the sorted line list")
        sp.add_argument("--sample", type=int, default=3, help="quartic fibers sampled per pencil")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--all-quartic", action="store_true", help="classify every member over F_{q^4}")
        sp.add_argument("--all-lines", action="store_true", help="pencil: sweep every line")
        sp.add_argument("--list", dest="list_items", action="store_true", help="include full lists")
        sp.add_argument("--timing", action="store_true", help="add a runtime metadata block")
        sp.add_argument("--out", help="write output here instead of stdout")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(args).items() if k != "command"}
    try:
        cfg = RunConfig(**opts)
        doc, code = run(args.command, cfg)
        text = render(doc, cfg.fmt)
    except (UsageError, NonPrime) as exc:
        print(f"hermitian: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooLarge as exc:
        print(f"hermitian: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_FAIL:
        failed = [c["claim"] for c in doc["claims"] if not c["ok"]]
        print(json.dumps({"error": "verification failed", "claims": failed}), file=sys.stderr)
    return code
