"""Sweep driver: find a companion witness for every admissible (q, p).

For every odd prime power q in range and every prime p > 5 dividing
q + 1 a task searches G - D for an element satisfying the companion
condition, either by seeded sampling or by deterministic exhaustion.
Results are streamed as JSON lines in canonical (q, p) order; an
append-only journal of digests makes interrupted runs resumable with
exactly-once semantics.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .classify import ORDER_CONDITION, dpc_predicate
from .criteria import search_companion
from .engine import ConditionEngine
from .errors import InadmissiblePair
from .finite_fields import PrimePower, build_setup, factorize, is_prime
from .orbits import build_orbits
from .projective import make_generators

log = logging.getLogger(__name__)

SAMPLED = "SAMPLED"
EXHAUSTIVE = "EXHAUSTIVE"


@dataclass
class SweepRecord:
    q: int
    l: int
    r: int
    p: int
    d: int
    t_encoding: int
    h: Optional[list[int]]
    tries: int
    satisfied: bool
    fraction: Optional[tuple[int, int]]  # unreduced (satisfied, total)
    elapsed_ms: int
    mode: str

    @property
    def fraction_value(self) -> Optional[Fraction]:
        if self.fraction is None:
            return None
        return Fraction(*self.fraction)

    def to_json_dict(self) -> dict:
        out = {"q": self.q, "l": self.l, "r": self.r, "p": self.p, "d": self.d,
               "t_encoding": self.t_encoding}
        if self.h is not None:
            out["h"] = self.h
        out["tries"] = self.tries
        out["satisfied"] = self.satisfied
        if self.fraction is not None:
            out["fraction"] = f"{self.fraction[0]}/{self.fraction[1]}"
        out["elapsed_ms"] = self.elapsed_ms
        out["mode"] = self.mode
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(", ", ": "))

    def digest(self) -> str:
        payload = {k: v for k, v in self.to_json_dict().items() if k != "elapsed_ms"}
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()

    @classmethod
    def from_json_dict(cls, d: dict) -> "SweepRecord":
        frac = None
        if "fraction" in d:
            num, den = d["fraction"].split("/")
            frac = (int(num), int(den))
        return cls(q=d["q"], l=d["l"], r=d["r"], p=d["p"], d=d["d"],
                   t_encoding=d["t_encoding"], h=d.get("h"), tries=d["tries"],
                   satisfied=d["satisfied"], fraction=frac,
                   elapsed_ms=d["elapsed_ms"], mode=d["mode"])


def admissible_primes(q: int) -> list[int]:
    """Prime divisors of q + 1 exceeding 5, in increasing order."""
    return sorted(p for p in factorize(q + 1) if p > 5)


def odd_prime_powers(lo: int, hi: int):
    for q in range(lo | 1, hi + 1, 2):
        try:
            pp = PrimePower.from_q(q)
        except ValueError:
            continue
        yield pp


def task_seed(seed: int, q: int, p: int) -> int:
    """Stable per-task seed (independent of Python hash randomization)."""
    digest = hashlib.sha256(f"{seed}:{q}:{p}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def evaluate_pair(q: int, p: int, samples: int, seed: int, exhaustive: bool,
                  exhaustive_fallback: bool = False) -> SweepRecord:
    """Run the witness search for one admissible pair and build its record."""
    started = time.monotonic()
    pp = PrimePower.from_q(q)
    verdict = dpc_predicate(q, p)
    if verdict.reason != ORDER_CONDITION:
        log.warning("(q=%d, p=%d): swept pair is not an order-condition pair (%s)",
                    q, p, verdict.reason)
    setup = build_setup(pp)
    gens = make_generators(setup, p)
    tab = build_orbits(gens)

    h = None
    tries = 0
    fraction = None
    mode = EXHAUSTIVE if exhaustive else SAMPLED
    if exhaustive:
        survey = ConditionEngine(gens, tab).survey()
        h = survey.first_h
        tries = survey.total
        fraction = (survey.satisfied, survey.total)
    else:
        rng = random.Random(task_seed(seed, q, p))
        result = search_companion(gens, tab, rng, max_tries=samples)
        h, tries = result.h, result.tries
        if h is None and exhaustive_fallback:
            survey = ConditionEngine(gens, tab).survey()
            h = survey.first_h
            tries += survey.total
            fraction = (survey.satisfied, survey.total)
            mode = EXHAUSTIVE
    elapsed_ms = int((time.monotonic() - started) * 1000)
    return SweepRecord(
        q=q, l=pp.l, r=pp.r, p=p, d=gens.d, t_encoding=setup.t,
        h=list(h) if h is not None else None, tries=tries,
        satisfied=h is not None, fraction=fraction,
        elapsed_ms=elapsed_ms, mode=mode,
    )


def check_single(q: int, p: int, exhaustive: bool = False, samples: int = 200,
                 seed: int | None = None) -> SweepRecord:
    """Validated single-pair check; raises InadmissiblePair with the reason."""
    if q % 2 == 0:
        raise InadmissiblePair(q, p, "q even")
    try:
        PrimePower.from_q(q)
    except ValueError:
        raise InadmissiblePair(q, p, "q not a prime power") from None
    if not is_prime(p):
        raise InadmissiblePair(q, p, "p not prime")
    if p <= 5:
        raise InadmissiblePair(q, p, "p <= 5")
    if (q + 1) % p != 0:
        raise InadmissiblePair(q, p, "p does not divide q+1")
    return evaluate_pair(q, p, samples=samples, seed=seed if seed is not None else 0,
                         exhaustive=exhaustive)


# ---------------------------------------------------------------------------
# Journal and resumable runs


def _journal_path(out_path: Path) -> Path:
    return out_path.with_name(out_path.name + ".journal")


def _load_journal(out_path: Path) -> dict[tuple[int, int], str]:
    path = _journal_path(out_path)
    done: dict[tuple[int, int], str] = {}
    if path.exists():
        for line in path.read_text().splitlines():
            if not line.strip():
                continue
            entry = json.loads(line)
            done[(entry["q"], entry["p"])] = entry["digest"]
    return done


def _compact_output(out_path: Path, done: dict[tuple[int, int], str]) -> list[str]:
    """Keep exactly one journaled record per key, dropping orphans."""
    kept: dict[tuple[int, int], str] = {}
    if out_path.exists():
        for line in out_path.read_text().splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            key = (rec["q"], rec["p"])
            if key in done and key not in kept:
                kept[key] = line
    return [kept[k] for k in sorted(kept)]


@dataclass
class SweepSummary:
    pairs: int
    satisfied: int
    counterexamples: list[tuple[int, int]]
    out_path: str

    @property
    def all_satisfied(self) -> bool:
        return not self.counterexamples


def _run_task(args) -> tuple[tuple[int, int], SweepRecord]:
    q, p, samples, seed, exhaustive_fallback = args
    rec = evaluate_pair(q, p, samples=samples, seed=seed, exhaustive=False,
                        exhaustive_fallback=exhaustive_fallback)
    return (q, p), rec


def run_sweep(q_min: int, q_max: int, samples: int = 200, seed: int = 0,
              jobs: int = 1, out_path: str | Path = "sweep.jsonl",
              resume: bool = False, exhaustive_fallback: bool = False,
              progress=None) -> SweepSummary:
    """Sweep all admissible pairs in [q_min, q_max] and write JSON lines.

    Records are emitted in canonical (q, p) order regardless of worker
    completion order, so identical flags and seed produce byte-identical
    output up to the elapsed_ms field.
    """
    out_path = Path(out_path)
    pairs = [(pp.q, p) for pp in odd_prime_powers(q_min, q_max)
             for p in admissible_primes(pp.q)]
    done = _load_journal(out_path) if resume else {}
    kept_lines = _compact_output(out_path, done) if resume else []
    pending = [key for key in pairs if key not in done]

    journal = _journal_path(out_path)
    if not resume:
        journal.unlink(missing_ok=True)
    counterexamples = []
    satisfied = 0
    for line in kept_lines:
        rec = json.loads(line)
        if rec["satisfied"]:
            satisfied += 1
        else:
            counterexamples.append((rec["q"], rec["p"]))

    with open(out_path, "w") as out, open(journal, "a") as jn:
        for line in kept_lines:
            out.write(line + "\n")
        out.flush()

        def emit(key, rec: SweepRecord):
            nonlocal satisfied
            out.write(rec.to_json_line() + "\n")
            out.flush()
            jn.write(json.dumps({"q": key[0], "p": key[1], "digest": rec.digest()}) + "\n")
            jn.flush()
            if rec.satisfied:
                satisfied += 1
            else:
                counterexamples.append(key)
                log.warning("POSSIBLE_COUNTEREXAMPLE at (q=%d, p=%d)", *key)
            if progress:
                progress(key, rec)

        task_args = [(q, p, samples, seed, exhaustive_fallback) for q, p in pending]
        if jobs <= 1:
            for args in task_args:
                key, rec = _run_task(args)
                emit(key, rec)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for key, rec in pool.map(_run_task, task_args, chunksize=1):
                    emit(key, rec)

    return SweepSummary(pairs=len(pairs), satisfied=satisfied,
                        counterexamples=counterexamples, out_path=str(out_path))
