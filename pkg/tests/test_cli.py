import json

import pytest

import rsumset.verify.universe as universe_mod
from rsumset import CaseTag, PairClassification
from rsumset.cli import CliConfig, load_config, main, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sumset_text(capsys):
    code, out, _ = run(capsys, "sumset", "{0,1}", "{0,1}")
    assert code == 0
    assert "A+^B       {1}  (size 1)" in out and "critical   true" in out


def test_sumset_json(capsys):
    code, out, _ = run(capsys, "sumset", "{0,3,5,8}", "{0,3,5,8}", "--json")
    d = json.loads(out)
    assert code == 0 and d["restricted_sumset_size"] == 5 and d["critical"] is True
    assert json.dumps(json.loads(out), sort_keys=True) + "\n" == out


def test_sumset_composite_modulus(capsys):
    code, out, err = run(capsys, "sumset", "{0,1}", "{0,1,2}", "--mod", "4")
    assert code == 2 and out == "" and "not prime" in err


def test_sumset_mod_literal_mismatch(capsys):
    code, _, err = run(capsys, "sumset", "mod 5: {0,1}", "{0,1}", "--mod", "7")
    assert code == 2 and "mod 5" in err


def test_parse_error(capsys):
    code, _, err = run(capsys, "sumset", "{1,1}", "{0}")
    assert code == 2 and "duplicate" in err


def test_classify(capsys):
    assert run(capsys, "classify", "{0,2,4,6,8}", "{0,2,4,6,8}")[1].startswith("StandardPair(0,2,5)")
    assert run(capsys, "classify", "{0,1,3,4}", "{0,1,3,4}")[1].startswith("BiPair(0,3,1)")


def test_classify_check_json(capsys):
    code, out, _ = run(capsys, "--json", "classify", "{0,1,3,4}", "{0,1,3,5}", "--check")
    d = json.loads(out)
    assert code == 0 and d["critical"] is False and d["oracle_critical"] is False


def test_classify_guard(capsys):
    assert run(capsys, "classify", "{0,1}", "{0,3}", "--mod", "3")[0] == 2
    code, _, err = run(capsys, "classify", "mod 5: {0,1,2,3}", "mod 5: {0,1,2,3}")
    assert code == 2 and "hypothesis" in err and "|A| + |B| - 2" in err


def test_gaps(capsys):
    code, out, _ = run(capsys, "gaps", "mod 11: {0,1,2,3,4}", "--gen", "1", "--json")
    assert code == 0 and json.loads(out)[0]["longest_gap"] == 6
    code, out, _ = run(capsys, "gaps", "mod 5: {0}", "--json")
    assert [r["longest_gap"] for r in json.loads(out)] == [4, 4, 4, 4]
    code, out, _ = run(capsys, "gaps", "mod 11: {0,2,4,6,8}", "--gen", "2")
    assert code == 0 and "   2            6" in out
    code, out, _ = run(capsys, "--format", "csv", "gaps", "{0,1}", "--mod", "5", "--gen", "1")
    assert out.splitlines()[1] == "5,1,linear,3,0 1,\"[0,1]\""


def test_gaps_errors(capsys):
    assert run(capsys, "gaps", "mod 7: {0,1}", "--gen", "7")[0] == 2
    assert run(capsys, "gaps", "mod 9: {0,1}")[0] == 2
    assert run(capsys, "gaps", "{0,1}")[0] == 2


def test_verify_clean(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "T1", "--window", "6")
    assert code == 0 and "counterexamples                 0" in out
    code, out, _ = run(capsys, "verify", "--theorem", "KAROLYI", "--mod", "7", "--json")
    assert code == 0 and json.loads(out)["counterexamples_total"] == 0


def test_verify_budget(capsys):
    code, out, err = run(capsys, "verify", "--theorem", "T4", "--mod", "19")
    assert code == 2 and "budget" in err and "7233091056" in err


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify", "--theorem", "T1", "--window", "6", "--mod", "7")[0] == 2
    assert run(capsys, "verify", "--theorem", "T5", "--window", "6")[0] == 2
    assert run(capsys, "verify", "--theorem", "KAROLYI", "--mod", "7", "--relax")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--theorem", "T0"])
    assert exc.value.code == 2


def test_verify_counterexample_exit(capsys, monkeypatch, tmp_path):
    monkeypatch.setattr(universe_mod, "predict_critical",
                        lambda A, B, ctx=None: PairClassification(False, CaseTag.NOT_CRITICAL))
    code, out, _ = run(capsys, "verify", "--theorem", "T1", "--window", "5", "--format", "csv")
    assert code == 1 and out.splitlines()[1].startswith('"{0,1}","{0,1}",True,False,1,T1')
    assert run(capsys, "verify", "--theorem", "T1", "--window", "5", "--search")[0] == 0


def test_verify_multiple_primes(capsys):
    code, out, _ = run(capsys, "--json", "verify", "--theorem", "KAROLYI", "--mod", "5", "--mod", "7")
    reps = json.loads(out)["reports"]
    assert code == 0 and [r["spec"]["prime"] for r in reps] == [5, 7]


def test_verify_out_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--theorem", "T2", "--window", "6", "--json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["spec"]["theorem"] == "T2"


def test_verify_resume(capsys, tmp_path):
    ck = str(tmp_path / "run.ckpt")
    code, first, _ = run(capsys, "--json", "verify", "--theorem", "T3", "--window", "7", "--checkpoint", ck)
    assert code == 0
    code, again, _ = run(capsys, "--json", "verify", "--theorem", "T3", "--window", "7", "--resume", ck)
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "elapsed_ms"}
    assert code == 0 and strip(first) == strip(again)
    code, _, err = run(capsys, "verify", "--theorem", "T3", "--window", "7", "--resume", str(tmp_path / "nope"))
    assert code == 2 and "does not exist" in err
    code, _, err = run(capsys, "verify", "--theorem", "T3", "--window", "8", "--resume", ck)
    assert code == 2 and "checkpoint" in err


def test_config_file_and_precedence(capsys, tmp_path):
    cfg = tmp_path / "rs.conf"
    cfg.write_text("# defaults for the lab machine\nwindow = 5\nprimes = 5, 7\nformat = json\ncap = 7\nworkers = 2\n")
    loaded = load_config(str(cfg))
    assert loaded == CliConfig(window=5, primes=[5, 7], workers=2, format="json", checkpoint_dir=None, cap=7)

    code, out, _ = run(capsys, "--config", str(cfg), "verify", "--theorem", "T1")
    d = json.loads(out)
    assert code == 0 and d["spec"]["window"] == 5 and d["spec"]["cap"] == 7
    code, out, _ = run(capsys, "--config", str(cfg), "verify", "--theorem", "T1", "--window", "6", "--cap", "3")
    d = json.loads(out)
    assert d["spec"]["window"] == 6 and d["spec"]["cap"] == 3
    code, out, _ = run(capsys, "--config", str(cfg), "--format", "text", "verify", "--theorem", "KAROLYI")
    assert out.startswith("theorem KAROLYI  [Z/5Z") and "[Z/7Z" in out
    assert CliConfig().window == 10 and CliConfig().format == "text"


def test_config_checkpoint_dir(capsys, tmp_path):
    cfg = tmp_path / "rs.conf"
    cfg.write_text(f"checkpoint_dir = {tmp_path}\n")
    assert run(capsys, "--config", str(cfg), "verify", "--theorem", "T2", "--window", "6")[0] == 0
    assert len(list(tmp_path.glob("sweep-*.ckpt"))) == 1
    assert run(capsys, "--config", str(cfg), "verify", "--theorem", "T2", "--window", "6")[0] == 0


@pytest.mark.parametrize("text", ["colour = red\n", "window = ten\n", "format = yaml\n", "justtext\n", "workers = 0\n"])
def test_config_validation(capsys, tmp_path, text):
    cfg = tmp_path / "bad.conf"
    cfg.write_text(text)
    with pytest.raises(UsageError):
        load_config(str(cfg))
    assert run(capsys, "--config", str(cfg), "sumset", "{0}", "{1}")[0] == 2


def test_missing_config(capsys, tmp_path):
    code, _, err = run(capsys, "--config", str(tmp_path / "none.conf"), "sumset", "{0}", "{1}")
    assert code == 2 and "cannot read config" in err


def test_workers_flag(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "KAROLYI", "--mod", "7", "--workers", "2",
                       "--chunk-pairs", "100", "--json")
    assert code == 0 and "workers" not in json.loads(out)["spec"]
    assert run(capsys, "--workers", "0", "sumset", "{0}", "{1}")[0] == 2
