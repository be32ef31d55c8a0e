import json
import subprocess
import sys
from pathlib import Path

import pytest

from psl2units.cli import main
from psl2units.errors import InadmissiblePair
from psl2units.sweep import (
    SweepRecord, admissible_primes, check_single, odd_prime_powers, run_sweep,
    task_seed,
)


def test_admissible_primes():
    assert admissible_primes(13) == [7]
    assert admissible_primes(27) == [7]
    assert admissible_primes(37) == [19]
    assert admissible_primes(53) == []          # 54 = 2 * 3^3
    assert admissible_primes(9) == []           # 10 = 2 * 5, no p > 5
    assert admissible_primes(2197) == [7, 157]  # 2198 = 2 * 7 * 157


def test_odd_prime_powers_range():
    qs = [pp.q for pp in odd_prime_powers(7, 50)]
    assert qs == [7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49]


def test_task_seed_stable():
    assert task_seed(1, 13, 7) == task_seed(1, 13, 7)
    assert task_seed(1, 13, 7) != task_seed(2, 13, 7)
    assert task_seed(1, 13, 7) != task_seed(1, 27, 7)


def test_admissibility_matches_order_condition_below_2000():
    # on the gating range every swept pair satisfies the order condition;
    # the first exception in the stretch range is (2197, 7)
    from psl2units.classify import ORDER_CONDITION, dpc_predicate
    for pp in odd_prime_powers(7, 1999):
        for p in admissible_primes(pp.q):
            assert dpc_predicate(pp.q, p).reason == ORDER_CONDITION, (pp.q, p)
    assert dpc_predicate(2197, 7).predicate is False
    assert dpc_predicate(2197, 157).reason == ORDER_CONDITION


def test_check_single_exhaustive_13():
    rec = check_single(13, 7, exhaustive=True)
    assert rec.satisfied and rec.mode == "EXHAUSTIVE"
    assert rec.fraction == (1078, 1078)
    assert rec.tries == 1078
    assert rec.d == 1 and rec.l == 13 and rec.r == 1


def test_check_single_exhaustive_25():
    rec = check_single(25, 13, exhaustive=True)
    assert rec.fraction == (7774, 7774)


def test_check_single_exhaustive_27():
    rec = check_single(27, 7, exhaustive=True)
    num, den = rec.fraction
    assert den == 9828 - 28
    assert 0 < num < den  # not every h works at q = 27


def test_check_single_sampled_deterministic():
    r1 = check_single(13, 7, samples=200, seed=5)
    r2 = check_single(13, 7, samples=200, seed=5)
    assert r1.h == r2.h and r1.tries == r2.tries
    assert r1.satisfied and r1.mode == "SAMPLED"
    assert r1.fraction is None


def test_check_single_inadmissible():
    with pytest.raises(InadmissiblePair) as exc:
        check_single(16, 17)
    assert exc.value.reason == "q even"
    with pytest.raises(InadmissiblePair) as exc:
        check_single(15, 7)
    assert exc.value.reason == "q not a prime power"
    with pytest.raises(InadmissiblePair) as exc:
        check_single(13, 6)
    assert exc.value.reason == "p not prime"
    with pytest.raises(InadmissiblePair) as exc:
        check_single(9, 5)
    assert exc.value.reason == "p <= 5"
    with pytest.raises(InadmissiblePair) as exc:
        check_single(13, 11)
    assert exc.value.reason == "p does not divide q+1"


def test_record_json_roundtrip():
    rec = check_single(13, 7, exhaustive=True)
    data = json.loads(rec.to_json_line())
    assert list(data) == ["q", "l", "r", "p", "d", "t_encoding", "h", "tries",
                          "satisfied", "fraction", "elapsed_ms", "mode"]
    back = SweepRecord.from_json_dict(data)
    assert back.digest() == rec.digest()


def test_run_sweep_deterministic(tmp_path):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    s1 = run_sweep(7, 120, samples=50, seed=3, jobs=1, out_path=out1)
    s2 = run_sweep(7, 120, samples=50, seed=3, jobs=1, out_path=out2)
    assert s1.all_satisfied

    def strip(path):
        lines = []
        for line in path.read_text().splitlines():
            d = json.loads(line)
            d.pop("elapsed_ms")
            lines.append(json.dumps(d))
        return lines

    assert strip(out1) == strip(out2)


def test_run_sweep_parallel_matches_serial(tmp_path):
    out1 = tmp_path / "serial.jsonl"
    out2 = tmp_path / "par.jsonl"
    run_sweep(7, 200, samples=50, seed=3, jobs=1, out_path=out1)
    run_sweep(7, 200, samples=50, seed=3, jobs=4, out_path=out2)

    def strip(path):
        out = []
        for line in path.read_text().splitlines():
            d = json.loads(line)
            d.pop("elapsed_ms")
            out.append(json.dumps(d))
        return out

    assert strip(out1) == strip(out2)


def test_run_sweep_resume(tmp_path):
    out = tmp_path / "full.jsonl"
    summary = run_sweep(7, 150, samples=50, seed=4, jobs=1, out_path=out)
    full_lines = out.read_text().splitlines()
    journal_lines = (tmp_path / "full.jsonl.journal").read_text().splitlines()
    assert len(full_lines) == len(journal_lines) == summary.pairs

    # simulate a crash: keep the first 3 completed records plus one
    # orphan record whose journal line was never written
    crash = tmp_path / "crash.jsonl"
    crash.write_text("\n".join(full_lines[:4]) + "\n")
    (tmp_path / "crash.jsonl.journal").write_text("\n".join(journal_lines[:3]) + "\n")

    resumed = run_sweep(7, 150, samples=50, seed=4, jobs=1, out_path=crash,
                        resume=True)
    assert resumed.all_satisfied

    def strip(lines):
        out = []
        for line in lines:
            d = json.loads(line)
            d.pop("elapsed_ms")
            out.append(json.dumps(d))
        return out

    assert strip(crash.read_text().splitlines()) == strip(full_lines)


def test_run_sweep_emits_expected_pairs(tmp_path):
    out = tmp_path / "pairs.jsonl"
    run_sweep(7, 100, samples=50, seed=0, jobs=1, out_path=out)
    keys = [(json.loads(line)["q"], json.loads(line)["p"])
            for line in out.read_text().splitlines()]
    assert keys == [(13, 7), (25, 13), (27, 7), (37, 19), (41, 7), (43, 11),
                    (61, 31), (67, 17), (73, 37), (81, 41), (83, 7), (97, 7)]


# -- CLI ----------------------------------------------------------------------


def test_cli_check(capsys):
    rc = main(["check", "--q", "13", "--p", "7", "--exhaustive"])
    out = capsys.readouterr().out
    assert rc == 0
    data = json.loads(out)
    assert data["fraction"] == "1078/1078"


def test_cli_check_inadmissible(capsys):
    rc = main(["check", "--q", "16", "--p", "17"])
    assert rc == 2
    assert "inadmissible" in capsys.readouterr().err


def test_cli_classify(capsys):
    rc = main(["classify", "--q", "13", "--p", "7", "--brute-force"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["predicate"] is True and data["witnessed"] is True


def test_cli_spectral(capsys):
    # find a witness h first
    rec = check_single(13, 7, samples=20, seed=1)
    h = ",".join(str(x) for x in rec.h)
    rc = main(["spectral", "--q", "13", "--p", "7", "--k", "2", "--m", "21",
               "--h", h, "--numeric"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["ok"] is True
    assert data["oracles_agree"] is True
    assert data["b_plus"] == 1 and data["b_minus"] == 3


def test_cli_spectral_dihedralizer_error(capsys):
    from psl2units.finite_fields import PrimePower, build_setup
    from psl2units.projective import make_generators
    setup = build_setup(PrimePower.make(13, 1))
    gens = make_generators(setup, 7)
    h = ",".join(str(x) for x in gens.g)
    rc = main(["spectral", "--q", "13", "--p", "7", "--k", "2", "--m", "21",
               "--h", h])
    assert rc == 2
    assert "normalizes" in capsys.readouterr().err


def test_cli_spectral_bad_matrix(capsys):
    rc = main(["spectral", "--q", "13", "--p", "7", "--k", "2", "--m", "21",
               "--h", "1,0,0,2"])
    assert rc == 2


def test_cli_sweep(tmp_path, capsys):
    out = tmp_path / "cli.jsonl"
    rc = main(["sweep", "--q-min", "7", "--q-max", "60", "--samples", "50",
               "--seed", "2", "--out", str(out), "--quiet"])
    assert rc == 0
    assert out.exists()
    printed = capsys.readouterr().out
    assert "pairs satisfied" in printed


def test_cli_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "psl2units.cli", "check",
                           "--q", "13", "--p", "7", "--exhaustive"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["satisfied"] is True
