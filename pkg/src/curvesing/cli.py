"""Command line front end: germ files in, text or JSON reports out.

Germ file format (line oriented, ``#`` starts a comment)::

    vars: x,y,z
    param: t                          # optional
    equations:                        # one polynomial per line
      x*y
      y*z
      x*z
    end
    parametrization: u^3, u^4, u^5    # optional, single line
    samples: 0, 1, 2                  # optional, for family/whitney
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .basis import DEFAULT_STEP_BUDGET, INFINITE
from .errors import CurveSingError, ParseError
from .ideal import PARAM_VAR, ColengthMode, Ideal, colength
from .invariants import (
    CurveGerm,
    FamilyGerm,
    RunConfig,
    family_profile,
    milnor_number,
    monomial_semigroup,
    whitney_check,
)
from .oracle import milnor_from_delta, semigroup_delta
from .poly import ConstMatrix, parse_poly
from .rational import format_rational, to_rational

__all__ = ["GermFile", "parse_germ_file", "run_command", "main", "COMMANDS", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1
COMMANDS = ("invariants", "milnor", "family", "whitney", "oracle", "colength")

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_KEYS = ("vars", "param", "equations", "parametrization", "samples")


@dataclass
class GermFile:
    """Parsed germ file; nothing is implicitized until a command runs."""

    vars: tuple
    equations: list = field(default_factory=list)
    param: Optional[str] = None
    parametrization: Optional[list] = None
    samples: tuple = ()
    digest: str = ""

    @property
    def full_ring(self) -> tuple:
        return self.vars + ((self.param,) if self.param else ())

    def curve(self, step_budget=DEFAULT_STEP_BUDGET) -> CurveGerm:
        """The germ itself, or its t = 0 fiber for a family file."""
        if self.param:
            return self.family(step_budget).fiber(0)
        if self.equations:
            return CurveGerm(self.vars, tuple(self.equations), self.parametrization, step_budget)
        return CurveGerm.from_parametrization(self.parametrization, self.vars, step_budget)

    def family(self, step_budget=DEFAULT_STEP_BUDGET) -> FamilyGerm:
        if not self.param:
            raise ParseError("this command needs a family: add a 'param:' line")
        return FamilyGerm(
            self.vars,
            self.param,
            equations=tuple(self.equations) if self.equations else None,
            parametrization=tuple(self.parametrization) if self.parametrization else None,
            samples=self.samples,
            step_budget=step_budget,
        )


def _split_list(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def parse_germ_file(text: str) -> GermFile:
    """Parse the germ-file format; errors carry 1-based line numbers."""
    sections = {}
    equation_lines = []
    in_equations = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if in_equations is not None:
            if line == "end":
                in_equations = None
            else:
                equation_lines.append((lineno, line))
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in _KEYS:
            raise ParseError(f"expected one of {', '.join(k + ':' for k in _KEYS)}, got {line!r}", lineno)
        if key in sections:
            raise ParseError(f"duplicate section {key!r}", lineno)
        sections[key] = (lineno, value.strip())
        if key == "equations":
            if value.strip():
                raise ParseError("equations go on the following lines, one per line, closed by 'end'", lineno)
            in_equations = lineno
    if in_equations is not None:
        raise ParseError("equations block is not closed by 'end'", in_equations)

    if "vars" not in sections:
        raise ParseError("missing section 'vars:'")
    lineno, value = sections["vars"]
    names = _split_list(value)
    if not names:
        raise ParseError("no variables listed", lineno)
    for v in names:
        if not _NAME.match(v):
            raise ParseError(f"bad variable name {v!r}", lineno)
    if len(set(names)) != len(names):
        raise ParseError("repeated variable name", lineno)
    if PARAM_VAR in names:
        raise ParseError(f"{PARAM_VAR!r} is reserved for parametrizations", lineno)

    param = None
    if "param" in sections:
        lineno, param = sections["param"]
        if not _NAME.match(param) or param in names or param == PARAM_VAR:
            raise ParseError(f"bad parameter name {param!r}", lineno)

    if "equations" not in sections and "parametrization" not in sections:
        raise ParseError("missing section: need 'equations:' or 'parametrization:'")

    ring = tuple(names) + ((param,) if param else ())
    equations = []
    if "equations" in sections:
        if not equation_lines:
            raise ParseError("equations block is empty", sections["equations"][0])
        for lineno, line in equation_lines:
            equations.append(_parse_at(line, ring, lineno))

    parametrization = None
    if "parametrization" in sections:
        lineno, value = sections["parametrization"]
        entries = _split_list(value)
        if len(entries) != len(names):
            raise ParseError(f"parametrization needs {len(names)} entries, got {len(entries)}", lineno)
        uring = (PARAM_VAR,) + ((param,) if param else ())
        parametrization = [_parse_at(e, uring, lineno) for e in entries]

    samples = ()
    if "samples" in sections:
        lineno, value = sections["samples"]
        samples = tuple(_rational_at(s, lineno) for s in _split_list(value))

    return GermFile(
        vars=tuple(names),
        equations=equations,
        param=param,
        parametrization=parametrization,
        samples=samples,
        digest="sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest(),
    )


def _parse_at(text, ring, lineno):
    try:
        return parse_poly(text, ring)
    except ParseError as exc:
        raise ParseError(exc.message, lineno) from None


def _rational_at(text, lineno):
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational number {text!r}", lineno) from None


def parse_matrix(text: str) -> ConstMatrix:
    """``"1,1,0;1,0,1"`` -> 2 x 3 constant matrix."""
    try:
        rows = [[to_rational(v) for v in _split_list(r)] for r in text.split(";") if r.strip()]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad matrix {text!r}") from None
    if not rows or len({len(r) for r in rows}) != 1 or not rows[0]:
        raise ParseError(f"matrix rows must be nonempty and of equal length: {text!r}")
    return ConstMatrix(rows)


# ---------------------------------------------------------------------------
# commands


def _num(v):
    return "infinite" if v == INFINITE else int(v)


def _cmd_milnor(gf: GermFile, cfg: RunConfig, samples):
    report = milnor_number(gf.curve(cfg.step_budget), cfg)
    body = report.as_dict()
    if gf.param:
        body["notes"].append(f"family file: computed for the fiber at {gf.param} = 0")
    return body


def _cmd_family(gf: GermFile, cfg: RunConfig, samples):
    F = gf.family(cfg.step_budget)
    return family_profile(F, samples, cfg).as_dict()


def _cmd_whitney(gf: GermFile, cfg: RunConfig, samples):
    F = gf.family(cfg.step_budget)
    return whitney_check(F, samples, cfg).as_dict()


def _cmd_oracle(gf: GermFile, cfg: RunConfig, samples):
    param = gf.parametrization
    if param and gf.param:
        param = [p.embed((PARAM_VAR, gf.param)).specialize(gf.param, 0) for p in param]
    exps = monomial_semigroup(param) if param else None
    if exps is None:
        raise ParseError("the oracle needs a monomial parametrization (one term u^a per entry)")
    delta, gaps = semigroup_delta(exps)
    return {
        "semigroup": list(exps),
        "delta": delta,
        "gaps": gaps,
        "branches": 1,
        "mu": milnor_from_delta(delta, 1),
    }


def _cmd_colength(gf: GermFile, cfg: RunConfig, samples):
    if gf.param:
        I = gf.family(cfg.step_budget).fiber_ideal(0)
    elif gf.equations:
        I = Ideal(gf.vars, gf.equations, cfg.step_budget)
    else:
        I = gf.curve(cfg.step_budget).ideal
    return {
        "generators": [str(g) for g in I.nonzero_gens()],
        "local": _num(colength(I, ColengthMode.AT_ORIGIN)),
        "global": _num(colength(I, ColengthMode.GLOBAL)),
    }


_DISPATCH = {
    "invariants": _cmd_milnor,
    "milnor": _cmd_milnor,
    "family": _cmd_family,
    "whitney": _cmd_whitney,
    "oracle": _cmd_oracle,
    "colength": _cmd_colength,
}


def run_command(command: str, text: str, config: RunConfig = RunConfig(), samples=None, timings=False):
    """Run ``command`` on germ-file ``text``; returns ``(exit_code, body_dict)``.

    ``body_dict`` has an ``"error"`` entry exactly when the exit code is nonzero.
    """
    if command not in _DISPATCH:
        raise ValueError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    body = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input_digest": "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "seed": config.seed,
    }
    start = time.perf_counter()
    try:
        gf = parse_germ_file(text)
        if samples is None:
            samples = gf.samples
        samples = tuple(to_rational(s) for s in samples)
        if command in ("family", "whitney") and not samples:
            raise ParseError("no samples: add a 'samples:' line or pass --samples")
        result = _DISPATCH[command](gf, config, samples)
        code = 0
    except CurveSingError as exc:
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        code = exc.exit_code
    body.update(result)
    body["exit_code"] = code
    body["timings_ms"] = {"total": round(1000 * (time.perf_counter() - start), 3)} if timings else None
    return code, body


# ---------------------------------------------------------------------------
# text rendering


def _render_text(body) -> str:
    if "error" in body:
        return f"error ({body['error']['type']}): {body['error']['message']}"
    cmd = body["command"]
    lines = []
    if cmd in ("invariants", "milnor"):
        for k in ("m", "e_jac", "i0", "mu", "polar_degree"):
            lines.append(f"{k:<13}= {body[k]}")
        lines.append("W0           = (" + ", ".join(body["w0_generators"]) + ")")
        lines.append("matrix A     = " + "; ".join(",".join(r) for r in body["ci_matrix"]))
        trials = ", ".join(f"seed {t['seed']}: ({t['m']}, {t['e_jac']}, {t['i0']})" for t in body["trials"])
        lines.append(f"trials       = {trials}")
        lines.append(f"agreement    = {body['agreement']}")
        lines.append(f"saturation   = {body['saturation_rounds']} quotient(s)")
        if body.get("oracle"):
            o = body["oracle"]
            lines.append(f"oracle       = delta {o['delta']}, mu {o['mu']} ({'agrees' if o['agrees'] else 'DISAGREES'})")
        lines.extend(f"note: {n}" for n in body["notes"])
    elif cmd == "family":
        lines.append("matrix A = " + "; ".join(",".join(r) for r in body["ci_matrix"]))
        lines.append(f"{'t':>8}  {'global':>6}  {'points':>6}  transversal")
        for r in body["rows"]:
            pts = "-" if r["point_count"] is None else r["point_count"]
            tr = "-" if r["transversal"] is None else r["transversal"]
            lines.append(f"{r['t']:>8}  {r['global_intersection']:>6}  {pts:>6}  {tr}")
        lines.append(f"constant for t != 0: {body['constant_for_nonzero_t']}")
    elif cmd == "whitney":
        lines.append(f"{'t':>8}  {'m':>3}  {'e_jac':>5}  {'i0':>4}  {'e-i0':>4}  {'mu':>4}")
        for r in body["rows"]:
            lines.append(
                f"{r['t']:>8}  {r['m']:>3}  {r['e_jac']:>5}  {r['i0']:>4}  {r['difference']:>4}  {r['mu']:>4}"
            )
        tail = f" (difference {body['difference']})" if "difference" in body else ""
        lines.append(f"verdict: {body['verdict']}{tail}")
    elif cmd == "oracle":
        lines.append(f"semigroup = <{', '.join(map(str, body['semigroup']))}>")
        lines.append(f"delta     = {body['delta']}")
        lines.append(f"gaps      = {body['gaps']}")
        lines.append(f"mu        = {body['mu']}  (2*delta - r + 1, r = 1)")
    elif cmd == "colength":
        lines.append(f"local  = {body['local']}")
        lines.append(f"global = {body['global']}")
    if body.get("timings_ms"):
        lines.append(f"time: {body['timings_ms']['total']} ms")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="curvesing",
        description="Milnor numbers and Whitney audits of space curve germs.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="germ file, or - for stdin")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=2, help="independent seeds that must agree (>= 2)")
    p.add_argument("--max-retries", type=int, default=5)
    p.add_argument("--step-budget", type=int, default=DEFAULT_STEP_BUDGET)
    p.add_argument("--samples", help="comma separated parameter values; overrides the file")
    p.add_argument("--matrix", help="fixed complete-intersection matrix, rows separated by ';'")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not deterministic)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return 2

    matrix = None
    samples = None
    try:
        if args.matrix:
            matrix = parse_matrix(args.matrix)
        if args.samples is not None:
            samples = [_rational_at(s, None) for s in _split_list(args.samples)]
        config = RunConfig(
            seed=args.seed,
            trials=args.trials,
            max_retries=args.max_retries,
            step_budget=args.step_budget,
            matrix=matrix,
        )
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    code, body = run_command(args.command, text, config, samples, args.timings)
    if args.json:
        print(json.dumps(body, indent=2))
    elif code == 0:
        print(_render_text(body))
    else:
        print(_render_text(body), file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
