import json
from itertools import combinations

import pytest

import rsumset.verify.universe as universe_mod
from rsumset import BudgetExceeded, CheckpointError, ModSet, PairClassification, CaseTag
from rsumset import is_critical_pair, predict_critical
from rsumset.verify import (
    Checkpoint, SweepInterrupted, SweepSpec, enumerate_pairs, pair_count, run_theorem_sweep,
    search_counterexamples,
)


def _key(A, B):
    return frozenset([A.elements, B.elements]) if A != B else frozenset([A.elements])


def test_pair_count_examples():
    assert pair_count(SweepSpec("T1", window=3), normalized=False) == 10
    assert pair_count(SweepSpec("KAROLYI", prime=5), normalized=False) == 351
    assert pair_count(SweepSpec("T1", window=1), normalized=False) == 0


def test_enumerate_pairs_examples():
    pairs = list(enumerate_pairs(SweepSpec("T1", window=3, normalize=False)))
    assert len(pairs) == 10 and len({_key(A, B) for A, B in pairs}) == 10
    assert len(list(enumerate_pairs(SweepSpec("KAROLYI", prime=5, normalize=False)))) == 351
    assert list(enumerate_pairs(SweepSpec("T1", window=1))) == []


@pytest.mark.parametrize("spec", [
    SweepSpec("T1", window=6), SweepSpec("LEMMAS", window=5, min_size=1),
    SweepSpec("KAROLYI", prime=5), SweepSpec("KAROLYI", prime=7, max_size=4),
])
def test_enumeration_matches_closed_form(spec):
    pairs = list(enumerate_pairs(spec))
    assert len(pairs) == pair_count(spec, normalized=True)
    assert run_theorem_sweep(spec).counts["after_normalization"] == len(pairs)


@pytest.mark.parametrize("p", [5, 7])
def test_mod_normalization_hits_every_orbit_once(p):
    subsets = [ModSet(p, s) for k in range(2, p + 1) for s in combinations(range(p), k)]
    orbit_of = {}
    for i, A in enumerate(subsets):
        for B in subsets[i:]:
            orbit = min(sorted(_key(A.translate(t), B.translate(t)), key=sorted) for t in range(p))
            orbit_of[_key(A, B)] = tuple(orbit)
    reps = [orbit_of[_key(A, B)] for A, B in enumerate_pairs(SweepSpec("KAROLYI", prime=p))]
    assert len(reps) == len(set(reps)) == len(set(orbit_of.values()))


def test_z_normalization_is_min_zero():
    for A, B in enumerate_pairs(SweepSpec("T2", window=6)):
        assert min(A.elements[0], B.elements[0]) == 0


@pytest.mark.parametrize("theorem", ["T1", "T2", "T3", "T4"])
def test_small_z_sweeps_clean(theorem):
    rep = run_theorem_sweep(SweepSpec(theorem, window=8))
    assert rep.clean and rep.counts["checked"] == rep.counts["agreements"] > 0


def test_t1_window_6_example():
    rep = run_theorem_sweep(SweepSpec("T1", window=6))
    assert rep.counterexamples == [] and rep.counterexamples_total == 0


def test_normalized_and_raw_sweeps_agree():
    norm = run_theorem_sweep(SweepSpec("T3", window=7))
    raw = run_theorem_sweep(SweepSpec("T3", window=7, normalize=False))
    assert norm.clean and raw.clean
    assert raw.counts["after_normalization"] == raw.counts["enumerated"]
    assert norm.counts["after_normalization"] < raw.counts["after_normalization"]


def test_t5_p11():
    rep = run_theorem_sweep(SweepSpec("T5", prime=11))
    assert rep.clean and rep.spec["normalize"] is False
    assert rep.counts["checked"] > 0


def test_t5_hypothesis_filter_matches_brute_force():
    p = 7
    subsets = [ModSet(p, s) for k in range(2, p + 1) for s in combinations(range(p), k)]
    expected = sum(1 for i, A in enumerate(subsets) for B in subsets[i:]
                   if p >= len(A) + len(B) - 2 and A.elements[-1] + B.elements[-1] < p)
    assert run_theorem_sweep(SweepSpec("T5", prime=p)).counts["checked"] == expected


def test_karolyi_and_band():
    rep = run_theorem_sweep(SweepSpec("KAROLYI", prime=7))
    assert rep.clean
    band = rep.boundary_band
    assert band["checked"] == band["agreements"] > 0
    only = run_theorem_sweep(SweepSpec("KAROLYI", prime=7, band_only=True))
    assert only.counts["checked"] == band["checked"]


def test_lemmas_window_8():
    rep = run_theorem_sweep(SweepSpec("LEMMAS", window=8))
    assert rep.clean
    assert set(rep.lemmas) == {"L1", "L2", "L3", "L5", "L6"}
    assert all(v["violations"] == 0 for v in rep.lemmas.values())
    assert rep.lemmas["L3"]["checked"] > 0


def test_lemmas_mod():
    rep = run_theorem_sweep(SweepSpec("LEMMAS", prime=7, min_size=1))
    assert rep.clean and set(rep.lemmas) == {"CD", "EH"}


def test_t6_t7_p11():
    for th in ("T6", "T7"):
        rep = run_theorem_sweep(SweepSpec(th, prime=11))
        assert rep.clean and rep.counts["checked"] > 0
    rep = run_theorem_sweep(SweepSpec("T6", prime=11, gap_mode="cyclic"))
    assert rep.gaps["modes"] == ["cyclic"] and rep.gaps["min_margin"]["cyclic"] >= 0


def test_search_reports_without_failing():
    rep = search_counterexamples(SweepSpec("KAROLYI", prime=5, relax=True))
    assert rep.spec["search"] is True
    # outside the gate the structural reading is not the truth, e.g. A = B = Z/5Z
    assert rep.counterexamples_total > 0
    full = [c for c in rep.counterexamples if c["A"] == c["B"] == "{0,1,2,3,4}"]
    assert full and full[0]["oracle"] is False and full[0]["predicted"] is True


def test_t3_pattern_scan():
    rep = search_counterexamples(SweepSpec("T3", window=9))
    assert rep.clean


def test_validation():
    with pytest.raises(BudgetExceeded) as exc:
        SweepSpec("T4", prime=19).validate()
    assert exc.value.estimated > exc.value.cap
    SweepSpec("T4", prime=19, max_size=3).validate()
    for bad in (SweepSpec("T9", window=4), SweepSpec("T1"), SweepSpec("T1", window=4, prime=5),
                SweepSpec("T1", window=17), SweepSpec("T1", prime=9), SweepSpec("T5", window=8),
                SweepSpec("KAROLYI", prime=5, relax=True), SweepSpec("T1", window=6, band_only=True),
                SweepSpec("T1", window=6, min_size=1), SweepSpec("T6", prime=29, max_size=3)):
        with pytest.raises(ValueError):
            bad.validate()


def test_report_counts_invariant():
    rep = run_theorem_sweep(SweepSpec("KAROLYI", prime=7))
    c = rep.counts
    assert c["agreements"] + rep.counterexamples_total == c["checked"]


def _break_predictor(monkeypatch):
    def wrong(A, B, ctx=None):
        return PairClassification(False, CaseTag.NOT_CRITICAL)
    monkeypatch.setattr(universe_mod, "predict_critical", wrong)


def test_counterexamples_are_recorded_and_capped(monkeypatch):
    _break_predictor(monkeypatch)
    rep = run_theorem_sweep(SweepSpec("T1", window=6, cap=3))
    assert not rep.clean
    assert len(rep.counterexamples) == 3
    assert rep.counterexamples_total == rep.counts["checked"] - rep.counts["agreements"]
    cx = rep.counterexamples[0]
    assert cx["A"] == cx["B"] and cx["oracle"] is True and cx["predicted"] is False
    assert cx["violated"] == ["T1"] and cx["sumset_size"] == 1
    assert rep.to_csv().splitlines()[0] == "A,B,oracle,predicted,sumset_size,violated"


def test_determinism_and_worker_independence():
    spec = SweepSpec("KAROLYI", prime=7, chunk_pairs=50)
    one = run_theorem_sweep(spec).to_json(timing=False)
    again = run_theorem_sweep(spec).to_json(timing=False)
    three = run_theorem_sweep(SweepSpec("KAROLYI", prime=7, chunk_pairs=50, workers=3)).to_json(timing=False)
    assert one == again == three
    assert "elapsed_ms" not in json.loads(one)


def test_interrupt_and_resume(tmp_ckpt):
    spec = SweepSpec("KAROLYI", prime=7, chunk_pairs=40, checkpoint=tmp_ckpt)
    with pytest.raises(SweepInterrupted):
        run_theorem_sweep(spec, stop_after=5)
    ck = Checkpoint.load(tmp_ckpt)
    assert ck.done.count("1") == 5 and len(ck.done) > 10
    resumed = run_theorem_sweep(spec, resume=True)
    straight = run_theorem_sweep(SweepSpec("KAROLYI", prime=7, chunk_pairs=40))
    assert resumed.to_json(timing=False) == straight.to_json(timing=False)


def test_resume_with_other_workers(tmp_ckpt):
    spec = SweepSpec("T3", window=8, chunk_pairs=500, checkpoint=tmp_ckpt)
    with pytest.raises(SweepInterrupted):
        run_theorem_sweep(spec, stop_after=2)
    resumed = run_theorem_sweep(SweepSpec("T3", window=8, chunk_pairs=500, checkpoint=tmp_ckpt, workers=2),
                                resume=True)
    assert resumed.to_json(timing=False) == run_theorem_sweep(SweepSpec("T3", window=8, chunk_pairs=500)).to_json(timing=False)


def test_resume_with_altered_spec(tmp_ckpt):
    with pytest.raises(SweepInterrupted):
        run_theorem_sweep(SweepSpec("KAROLYI", prime=7, chunk_pairs=40, checkpoint=tmp_ckpt), stop_after=1)
    with pytest.raises(CheckpointError, match="checkpoint was written for"):
        run_theorem_sweep(SweepSpec("KAROLYI", prime=7, chunk_pairs=40, cap=5, checkpoint=tmp_ckpt), resume=True)


def test_resume_missing_and_corrupt(tmp_path):
    with pytest.raises(FileNotFoundError):
        run_theorem_sweep(SweepSpec("T1", window=5, checkpoint=str(tmp_path / "nope")), resume=True)
    bad = tmp_path / "bad.ckpt"
    bad.write_text("{not json")
    with pytest.raises(CheckpointError):
        run_theorem_sweep(SweepSpec("T1", window=5, checkpoint=str(bad)), resume=True)
    bad.write_text(json.dumps({"format": "something-else"}))
    with pytest.raises(CheckpointError):
        Checkpoint.load(str(bad))


def test_spec_hash_ignores_workers_and_path():
    a = SweepSpec("T1", window=6)
    assert a.spec_hash() == SweepSpec("T1", window=6, workers=4, checkpoint="x").spec_hash()
    assert a.spec_hash() != SweepSpec("T1", window=7).spec_hash()


def test_sweep_agrees_with_direct_calls():
    # pair-level cross-check of the kernel against the library on a small universe
    spec = SweepSpec("KAROLYI", prime=5)
    checked = 0
    for A, B in enumerate_pairs(spec):
        if 5 >= len(A) + len(B) - 2:
            checked += 1
            assert predict_critical(A, B).critical == is_critical_pair(A, B)
    assert run_theorem_sweep(spec).counts["checked"] == checked
