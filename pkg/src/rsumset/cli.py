"""Command-line interface: ``rsumset {sumset,classify,gaps,verify}``.

Exit codes: 0 clean, 1 a sweep found counterexamples, 2 usage, parse or
hypothesis errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from .classify import predict_critical
from .errors import BudgetExceeded, CheckpointError, HypothesisViolation, ModulusMismatch
from .gaps import MODES, exponent_profile
from .sets import (
    IntSet, ModP, ModSet, cd_lower_bound, eh_lower_bound, is_critical_pair, parse_set,
    restricted_sumset, sumset,
)
from .verify import SELECTORS, SweepInterrupted, SweepSpec, run_theorem_sweep
from .verify.spec import MOD_ONLY

FORMATS = ("text", "json", "csv")


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    window: int = 10
    primes: list = field(default_factory=lambda: [5, 7, 11, 13])
    workers: int = 1
    format: str = "text"
    checkpoint_dir: Optional[str] = None
    cap: int = 100


def _parse_value(key: str, raw: str):
    if key in ("window", "workers", "cap"):
        try:
            v = int(raw)
        except ValueError:
            raise UsageError(f"config: {key} must be an integer, got {raw!r}") from None
        if v < (0 if key == "cap" else 1):
            raise UsageError(f"config: {key} out of range: {v}")
        return v
    if key == "primes":
        try:
            return [int(t) for t in raw.replace(",", " ").split()]
        except ValueError:
            raise UsageError(f"config: primes must be integers, got {raw!r}") from None
    if key == "format":
        if raw not in FORMATS:
            raise UsageError(f"config: format must be one of {FORMATS}")
        return raw
    return raw or None


def load_config(path: Optional[str]) -> CliConfig:
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    cfg = CliConfig()
    if path is None:
        return cfg
    known = {f.name for f in fields(CliConfig)}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {n}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise UsageError(f"config line {n}: unknown key {key!r}")
        setattr(cfg, key, _parse_value(key, raw))
    return cfg


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--json", action="store_true", help="shorthand for --format json", **d)
    p.add_argument("--format", choices=FORMATS, **({"default": None} | d))
    p.add_argument("--config", metavar="PATH", **({"default": None} | d))
    p.add_argument("--workers", type=int, metavar="K", **({"default": None} | d))
    p.add_argument("--out", metavar="PATH", **({"default": None} | d))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsumset", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sumset", parents=[common], help="A+B, A+^B, bounds and criticality")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--mod", type=int, metavar="P")

    c = sub.add_parser("classify", parents=[common], help="structural criticality verdict")
    c.add_argument("A")
    c.add_argument("B")
    c.add_argument("--mod", type=int, metavar="P")
    c.add_argument("--check", action="store_true", help="also print the brute-force verdict")

    g = sub.add_parser("gaps", parents=[common], help="exponent profiles and longest gaps")
    g.add_argument("X")
    g.add_argument("--mod", type=int, metavar="P")
    g.add_argument("--gen", type=int, metavar="D")
    g.add_argument("--mode", choices=MODES, default="linear")

    v = sub.add_parser("verify", parents=[common], help="exhaustive theorem sweep")
    v.add_argument("--theorem", required=True, choices=SELECTORS)
    v.add_argument("--window", type=int, metavar="N")
    v.add_argument("--mod", type=int, action="append", metavar="P")
    v.add_argument("--min-size", type=int, default=None)
    v.add_argument("--max-size", type=int, default=None)
    v.add_argument("--no-normalize", action="store_true")
    v.add_argument("--gap-mode", choices=("linear", "cyclic", "both"), default="both")
    v.add_argument("--search", action="store_true", help="report-only: never exit 1")
    v.add_argument("--relax", action="store_true", help="search mode: drop the p >= |A|+|B|-2 gate")
    v.add_argument("--band-only", action="store_true", help="only pairs with p < |A|+|B|")
    v.add_argument("--cap", type=int, default=None, help="counterexamples kept in the report")
    v.add_argument("--budget", type=int, default=None)
    v.add_argument("--chunk-pairs", type=int, default=None)
    v.add_argument("--checkpoint", metavar="PATH")
    v.add_argument("--resume", metavar="PATH")
    return parser


def _settings(args) -> tuple[CliConfig, str, int]:
    cfg = load_config(args.config)
    fmt = "json" if args.json else (args.format or cfg.format)
    workers = args.workers if args.workers is not None else cfg.workers
    if workers < 1:
        raise UsageError("--workers must be at least 1")
    return cfg, fmt, workers


def _operand(text: str, mod: Optional[int]):
    X = parse_set(text)
    if mod is None:
        return X
    ModP(mod)
    if isinstance(X, ModSet):
        if X.modulus != mod:
            raise UsageError(f"literal {text!r} is mod {X.modulus}, but --mod {mod} was given")
        return X
    return ModSet(mod, X.elements)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _kv_csv(rows: list[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(rows)
    return buf.getvalue()


def cmd_sumset(args, fmt: str) -> tuple[str, int]:
    A, B = _operand(args.A, args.mod), _operand(args.B, args.mod)
    if type(A) is not type(B) or A.context != B.context:
        raise UsageError("operands must live in the same group")
    ctx = A.context
    full, restricted = sumset(A, B), restricted_sumset(A, B)
    crit = is_critical_pair(A, B) if len(A) >= 2 and len(B) >= 2 else None
    data = {
        "context": str(ctx),
        "A": str(A), "B": str(B),
        "sumset": str(full), "sumset_size": len(full),
        "restricted_sumset": str(restricted), "restricted_sumset_size": len(restricted),
        "cd_lower_bound": cd_lower_bound(len(A), len(B), ctx),
        "eh_lower_bound": eh_lower_bound(len(A), len(B), ctx),
        "critical": crit,
    }
    if fmt == "json":
        return json.dumps(data, sort_keys=True) + "\n", 0
    if fmt == "csv":
        return _kv_csv(list(data.items())), 0
    crit_s = "n/a (needs |A|, |B| >= 2)" if crit is None else str(crit).lower()
    lines = [
        f"group      {ctx}",
        f"A+B        {full}  (size {len(full)})",
        f"A+^B       {restricted}  (size {len(restricted)})",
        f"CD bound   {data['cd_lower_bound']}",
        f"EH bound   {data['eh_lower_bound']}",
        f"critical   {crit_s}",
    ]
    return "\n".join(lines) + "\n", 0


def cmd_classify(args, fmt: str) -> tuple[str, int]:
    A, B = _operand(args.A, args.mod), _operand(args.B, args.mod)
    if type(A) is not type(B) or A.context != B.context:
        raise UsageError("operands must live in the same group")
    verdict = predict_critical(A, B)
    data = verdict.to_dict()
    if args.check:
        data["oracle_critical"] = is_critical_pair(A, B)
        data["restricted_sumset_size"] = len(restricted_sumset(A, B))
    if fmt == "json":
        return json.dumps(data, sort_keys=True) + "\n", 0
    if fmt == "csv":
        rows = [(k, json.dumps(v) if isinstance(v, dict) else v) for k, v in data.items()]
        return _kv_csv(rows), 0
    lines = [str(verdict), f"critical   {str(verdict.critical).lower()}"]
    if args.check:
        agree = "agrees" if data["oracle_critical"] == verdict.critical else "DISAGREES"
        lines.append(f"oracle     {str(data['oracle_critical']).lower()} "
                     f"(|A+^B| = {data['restricted_sumset_size']}, {agree})")
    return "\n".join(lines) + "\n", 0


def cmd_gaps(args, fmt: str) -> tuple[str, int]:
    X = _operand(args.X, args.mod)
    if not isinstance(X, ModSet):
        raise UsageError("gaps needs a set in Z/pZ: use 'mod p: {...}' or --mod p")
    gens = [args.gen] if args.gen is not None else range(1, X.modulus)
    if args.gen is not None and args.gen % X.modulus == 0:
        raise UsageError("generator must be nonzero mod p")
    profiles = [exponent_profile(X, d, args.mode) for d in gens]
    if fmt == "json":
        return json.dumps([pr.to_dict() for pr in profiles], sort_keys=True) + "\n", 0
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "d", "mode", "longest_gap", "exponents", "blocks"])
        for pr in profiles:
            w.writerow([pr.modulus, pr.generator, pr.mode, pr.longest_gap,
                        " ".join(map(str, pr.exponents)),
                        " ".join(f"[{a},{b}]" for a, b in pr.blocks)])
        return buf.getvalue(), 0
    lines = [f"{X}  ({args.mode} gaps)", f"{'d':>4}  {'longest_gap':>11}  exponents / blocks"]
    for pr in profiles:
        blocks = " ".join(f"[{a},{b}]" for a, b in pr.blocks)
        lines.append(f"{pr.generator:>4}  {pr.longest_gap:>11}  {list(pr.exponents)}  {blocks}")
    return "\n".join(lines) + "\n", 0


def _report_text(rep) -> str:
    s = rep.spec
    where = f"Z window {s['window']}" if s["window"] is not None else f"Z/{s['prime']}Z"
    norm = "normalized" if s["normalize"] else "raw"
    mode = "search" if s["search"] else "assert"
    c = rep.counts
    lines = [
        f"theorem {s['theorem']}  [{where}, {norm}, {mode}]",
        f"  enumerated           {c['enumerated']:>12}",
        f"  after normalization  {c['after_normalization']:>12}",
        f"  checked              {c['checked']:>12}",
        f"  agreements           {c['agreements']:>12}",
        f"  counterexamples      {rep.counterexamples_total:>12}",
    ]
    if rep.boundary_band is not None:
        b = rep.boundary_band
        lines.append(f"  boundary band        {b['checked']:>12} checked, {b['agreements']} agree")
    if rep.lemmas:
        for name, t in rep.lemmas.items():
            lines.append(f"  {name:<20} {t['checked']:>12} checked, {t['violations']} violations")
    if rep.gaps:
        for m, margin in rep.gaps["min_margin"].items():
            lines.append(f"  gap margin ({m:<6})  {'-' if margin is None else margin:>12}")
    for cx in rep.counterexamples:
        lines.append(f"  ! A={cx['A']} B={cx['B']} |A+^B|={cx['sumset_size']} "
                     f"oracle={cx['oracle']} predicted={cx['predicted']} {','.join(cx['violated'])}")
    lines.append(f"  elapsed              {rep.elapsed_ms:>9} ms")
    return "\n".join(lines) + "\n"


def cmd_verify(args, fmt: str, cfg: CliConfig, workers: int) -> tuple[str, int]:
    if args.window is not None and args.mod:
        raise UsageError("give either --window or --mod, not both")
    if args.resume and args.checkpoint and args.resume != args.checkpoint:
        raise UsageError("--resume already names the checkpoint file")
    if args.window is not None:
        contexts = [{"window": args.window}]
    elif args.mod:
        contexts = [{"prime": p} for p in args.mod]
    elif args.theorem in MOD_ONLY:
        contexts = [{"prime": p} for p in cfg.primes]
    else:
        contexts = [{"window": cfg.window}]
    if (args.resume or args.checkpoint) and len(contexts) > 1:
        raise UsageError("checkpointing needs a single window or modulus")

    base = {"theorem": args.theorem, "normalize": not args.no_normalize,
            "gap_mode": args.gap_mode, "search": args.search, "relax": args.relax,
            "band_only": args.band_only, "workers": workers,
            "cap": args.cap if args.cap is not None else cfg.cap}
    for key in ("min_size", "max_size", "budget", "chunk_pairs"):
        if getattr(args, key) is not None:
            base[key] = getattr(args, key)

    reports = []
    for ctx in contexts:
        spec = SweepSpec(**base, **ctx)
        path = args.resume or args.checkpoint
        if path is None and cfg.checkpoint_dir:
            path = os.path.join(cfg.checkpoint_dir, f"sweep-{spec.spec_hash()}.ckpt")
        if args.resume and not os.path.exists(args.resume):
            raise UsageError(f"cannot resume: {args.resume} does not exist")
        spec = replace(spec, checkpoint=path)
        resume = bool(args.resume) or bool(path and cfg.checkpoint_dir and os.path.exists(path))
        reports.append(run_theorem_sweep(spec, resume=resume))

    failed = any(not r.clean for r in reports) and not args.search
    if fmt == "json":
        doc = reports[0].to_dict() if len(reports) == 1 else {"reports": [r.to_dict() for r in reports]}
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    elif fmt == "csv":
        text = "".join(r.to_csv() if k == 0 else r.to_csv().split("\n", 1)[1] for k, r in enumerate(reports))
    else:
        text = "".join(_report_text(r) for r in reports)
    return text, 1 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, fmt, workers = _settings(args)
        if args.command == "sumset":
            text, code = cmd_sumset(args, fmt)
        elif args.command == "classify":
            text, code = cmd_classify(args, fmt)
        elif args.command == "gaps":
            text, code = cmd_gaps(args, fmt)
        else:
            text, code = cmd_verify(args, fmt, cfg, workers)
    except HypothesisViolation as exc:
        print(f"rsumset: hypothesis violated: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"rsumset: budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, ModulusMismatch, CheckpointError, OverflowError,
            ZeroDivisionError, SweepInterrupted) as exc:
        print(f"rsumset: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"rsumset: {exc}", file=sys.stderr)
        return 2
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
