"""Exhaustive theorem sweeps: oracle vs. structural prediction over every pair."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from typing import Optional

from .. import _pykernel as K
from .. import kernel
from ..classify import detect_ap, is_standard_pair
from ..gaps import check_gap_theorem, longest_gap_over_generators
from ..sets import restricted_sumset
from .checkpoint import Checkpoint
from .spec import SweepSpec, pair_count
from .universe import Universe, build_universe

COLLECT_CAP = 1_000_000


class SweepInterrupted(RuntimeError):
    """Raised when a sweep stops early on request; the checkpoint holds its progress."""


@dataclass(frozen=True)
class KernelParams:
    mode: int
    need_size: int = 0
    large_min: int = 0
    slack: int = -1
    sum_below: int = 0
    collect_min: int = 0


def kernel_params(spec: SweepSpec) -> KernelParams:
    sel = spec.theorem
    slack = -1
    if spec.is_mod and not spec.relax:
        slack = 0 if sel in ("T6", "T7") else 2
    if sel in ("T1", "T2", "T3"):
        return KernelParams(K.MODE_PREDICT, need_size=int(sel[1]) + 1, slack=slack)
    if sel == "T4":
        return KernelParams(K.MODE_PREDICT, large_min=5, slack=slack)
    if sel == "T5":
        return KernelParams(K.MODE_PREDICT, slack=slack, sum_below=1)
    if sel == "KAROLYI":
        return KernelParams(K.MODE_PREDICT, slack=slack)
    if sel in ("T6", "T7"):
        return KernelParams(K.MODE_COLLECT, large_min=5, slack=slack, collect_min=5)
    return KernelParams(K.MODE_LEMMAS, collect_min=0 if spec.is_mod else 5)


# worker-process state, installed once per process
_STATE: dict = {}


def _init_worker(uni: Universe, params: KernelParams) -> None:
    _STATE["uni"] = uni
    _STATE["params"] = params


def _run_chunk(rows, uni: Universe, params: KernelParams, scan=None):
    scan = scan or kernel.scan_rows
    spec = uni.spec
    counts, viols, collected = scan(
        rows, uni.masks, uni.sizes, uni.maxel, uni.struct, uni.canon, uni.shift, uni.colstop,
        uni.kind, spec.width, uni.norm, params.mode, params.need_size, params.large_min,
        params.slack, int(spec.band_only), params.sum_below, params.collect_min,
        spec.cap, COLLECT_CAP,
    )
    return list(counts), [tuple(v) for v in viols], [tuple(c) for c in collected]


def _worker_chunk(k: int, rows):
    return k, _run_chunk(rows, _STATE["uni"], _STATE["params"])


@dataclass
class VerifyReport:
    spec: dict
    counts: dict
    counterexamples: list
    counterexamples_total: int
    boundary_band: Optional[dict] = None
    lemmas: Optional[dict] = None
    gaps: Optional[dict] = None
    extra: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    @property
    def clean(self) -> bool:
        return self.counterexamples_total == 0

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "spec": self.spec,
            "counts": self.counts,
            "counterexamples": self.counterexamples,
            "counterexamples_total": self.counterexamples_total,
            "boundary_band": self.boundary_band,
        }
        for key in ("lemmas", "gaps"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.extra:
            d["extra"] = self.extra
        if timing:
            d["elapsed_ms"] = self.elapsed_ms
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["A", "B", "oracle", "predicted", "sumset_size", "violated"])
        for c in self.counterexamples:
            w.writerow([c["A"], c["B"], c["oracle"], c["predicted"], c["sumset_size"], ";".join(c["violated"])])
        return buf.getvalue()


def _merge(results: list) -> tuple[list, list, list]:
    counts = [0] * K.N_COUNTS
    viols: list = []
    collected: list = []
    for c, vs, cs in results:
        counts = [x + y for x, y in zip(counts, c)]
        viols.extend(vs)
        collected.extend(cs)
    return counts, viols, collected


def _execute(uni: Universe, params: KernelParams, chunks, spec: SweepSpec,
             ckpt: Optional[Checkpoint], ckpt_path: Optional[str], stop_after: Optional[int]) -> dict:
    done: dict[int, tuple] = dict(ckpt.chunks) if ckpt else {}
    todo = [k for k in range(len(chunks)) if k not in done]
    finished = 0

    def record(k, res):
        nonlocal finished
        done[k] = res
        finished += 1
        if ckpt is not None:
            ckpt.chunks[k] = res
            ckpt.save(ckpt_path)
        if stop_after is not None and finished >= stop_after and len(done) < len(chunks):
            raise SweepInterrupted(f"stopped after {finished} chunks")

    if spec.workers == 1 or len(todo) <= 1:
        for k in todo:
            record(k, _run_chunk(chunks[k], uni, params))
    else:
        with ProcessPoolExecutor(spec.workers, initializer=_init_worker, initargs=(uni, params)) as ex:
            futures = [ex.submit(_worker_chunk, k, chunks[k]) for k in todo]
            try:
                for fut in as_completed(futures):
                    k, res = fut.result()
                    record(k, res)
            except BaseException:
                for f in futures:
                    f.cancel()
                raise
    return done


def _viol_names(spec: SweepSpec, flags: int) -> list[str]:
    if spec.theorem != "LEMMAS":
        return [spec.theorem]
    names = (("CD", "EH") if spec.is_mod else ("L1", "L2")) + ("L5", "L6")
    return [n for bit, n in zip((K.FLAG_L1, K.FLAG_L2, K.FLAG_L5, K.FLAG_L6), names) if flags & bit]


def _record(A, B, oracle, predicted, rs, violated, **detail) -> dict:
    rec = {"A": _lit(A), "B": _lit(B), "oracle": oracle, "predicted": predicted,
           "sumset_size": rs, "violated": violated}
    rec.update(detail)
    return rec


def _lit(X) -> str:
    return "{" + ",".join(map(str, X.elements)) + "}"


def _orientations(A, B):
    yield A, B
    if A != B:
        yield B, A


def _check_large_mod(spec: SweepSpec, uni: Universe, collected: list):
    """Gap bound and standard-pair conclusion on critical pairs with |A| >= 5."""
    modes = ("linear", "cyclic") if spec.gap_mode == "both" else (spec.gap_mode,)
    checked = agree = 0
    records = []
    min_margin = {m: None for m in modes}
    nonstandard = []
    for i, j, rs in collected:
        A0, B0 = uni.subset(i), uni.subset(j)
        qualifying = False
        ok = True
        detail = {}
        for A, B in _orientations(A0, B0):
            if len(A) < 5 or spec.prime < len(A) + len(B):
                continue
            if detect_ap(A) is None:
                nonstandard.append({"A": _lit(A), "B": _lit(B),
                                    "gaps": {m: check_gap_stats(B, m) for m in modes}})
                continue
            qualifying = True
            if spec.theorem == "T6":
                for m in modes:
                    res = check_gap_theorem(A, B, m)
                    margin = res.min_gap - len(A)
                    if min_margin[m] is None or margin < min_margin[m]:
                        min_margin[m] = margin
                    if not res.passed:
                        ok = False
                        detail[f"gap_{m}"] = res.min_gap
            else:
                if is_standard_pair(A, B) is None:
                    ok = False
        if not qualifying:
            continue
        checked += 1
        if ok:
            agree += 1
        else:
            records.append(_record(A0, B0, True, False, rs, [spec.theorem], **detail))
    gaps = None
    if spec.theorem == "T6":
        gaps = {"modes": list(modes), "min_margin": min_margin}
    return checked, agree, records, gaps, nonstandard


def check_gap_stats(B, mode: str) -> int:
    """Largest longest-gap of B over all generators (report-only data)."""
    return max(g for _, g in longest_gap_over_generators(B, mode))


def _check_descent(uni: Universe, collected: list):
    """Critical, |A| >= 5, B inside A: max A = max B and the pair minus maxima stays critical."""
    checked = viol = viol_equal = 0
    records = []
    for i, j, rs in collected:
        A0, B0 = uni.subset(i), uni.subset(j)
        for A, B in _orientations(A0, B0):
            if len(A) < 5 or not B.issubset(A):
                continue
            checked += 1
            top_a, top_b = A.elements[-1], B.elements[-1]
            X, Y = A.remove(top_a), B.remove(top_b)
            ok = top_a == top_b and len(restricted_sumset(X, Y)) == len(X) + len(Y) - 3
            if not ok:
                viol += 1
                viol_equal += i == j
                records.append(_record(A, B, True, None, rs, ["L3"]))
    return checked, viol, viol_equal, records


def run_theorem_sweep(spec: SweepSpec, *, resume: bool = False,
                      stop_after: Optional[int] = None) -> VerifyReport:
    """Sweep every pair of the spec's universe and tally oracle/predictor agreement.

    With ``spec.checkpoint`` set, progress is written after every chunk;
    ``resume=True`` continues from that file.  ``stop_after`` ends the run
    with :class:`SweepInterrupted` after that many new chunks (for testing
    resumption).
    """
    t0 = time.perf_counter()
    spec = spec.validate()
    uni = build_universe(spec)
    params = kernel_params(spec)
    chunks = uni.chunks()

    ckpt = None
    if spec.checkpoint:
        if resume:
            ckpt = Checkpoint.load(spec.checkpoint)
            ckpt.check_compatible(spec.spec_hash(), len(chunks))
        else:
            ckpt = Checkpoint(spec.spec_hash(), len(chunks))
            ckpt.save(spec.checkpoint)
    elif resume:
        raise ValueError("resume needs a checkpoint path")

    done = _execute(uni, params, chunks, spec, ckpt, spec.checkpoint, stop_after)
    counts, viols, collected = _merge([done[k] for k in range(len(chunks))])

    records = []
    for i, j, rs, ss, flags in viols[: spec.cap]:
        A, B = uni.subset(i), uni.subset(j)
        oracle = rs == len(A) + len(B) - 3
        predicted = None
        if params.mode == K.MODE_PREDICT:
            predicted = bool(i == j and uni.struct[i])
        rec = _record(A, B, oracle, predicted, rs, _viol_names(spec, flags))
        if params.mode == K.MODE_LEMMAS:
            rec["full_sumset_size"] = ss
        records.append(rec)
    total = counts[K.VIOL_TOTAL]
    checked, agree = counts[K.CHECKED], counts[K.AGREE]

    band = None
    if spec.is_mod and params.mode == K.MODE_PREDICT:
        band = {"checked": counts[K.BAND_CHECKED], "agreements": counts[K.BAND_AGREE],
                "definition": "|A|+|B|-2 <= p < |A|+|B|"}

    lemmas = gaps = None
    extra: dict = {}
    if counts[K.COLLECT_TOTAL] > len(collected):
        extra["collected_truncated"] = counts[K.COLLECT_TOTAL]
    if spec.theorem in ("T6", "T7"):
        checked, agree, recs, gaps, nonstandard = _check_large_mod(spec, uni, collected)
        total = checked - agree
        records = recs[: spec.cap]
        extra["critical_nonstandard"] = {"count": len(nonstandard), "examples": nonstandard[: spec.cap]}
    elif spec.theorem == "LEMMAS":
        names = ("CD", "EH") if spec.is_mod else ("L1", "L2")
        lemmas = {
            names[0]: {"checked": counts[K.L1_CHECKED], "violations": counts[K.L1_VIOL]},
            names[1]: {"checked": counts[K.L2_CHECKED], "violations": counts[K.L2_VIOL]},
        }
        if not spec.is_mod:
            lemmas["L5"] = {"checked": counts[K.L5_CHECKED], "violations": counts[K.L5_VIOL]}
            lemmas["L6"] = {"checked": counts[K.L6_CHECKED], "violations": counts[K.L6_VIOL]}
            l3c, l3v, l3_equal, recs = _check_descent(uni, collected)
            lemmas["L3"] = {"checked": l3c, "violations": l3v}
            agree -= l3_equal
            total += l3_equal
            records = (records + recs)[: spec.cap]

    report = VerifyReport(
        spec=spec.echo(),
        counts={
            "enumerated": pair_count(spec, normalized=False),
            "after_normalization": counts[K.ENUM],
            "checked": checked,
            "agreements": agree,
        },
        counterexamples=records,
        counterexamples_total=total,
        boundary_band=band,
        lemmas=lemmas,
        gaps=gaps,
        extra=extra,
    )
    report.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return report


def search_counterexamples(spec: SweepSpec, **kw) -> VerifyReport:
    """Like :func:`run_theorem_sweep` but report-only: violations never fail the run."""
    return run_theorem_sweep(replace(spec, search=True), **kw)
