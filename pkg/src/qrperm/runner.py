"""Range scans: suite dispatch, ordered parallel execution, JSONL output, checkpoints."""

from __future__ import annotations

import json
import multiprocessing
import os
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

from . import arith, classfield, congr, conjectures, cyclo, perms, trigeval
from .verdict import Verdict, bundle

CHECKPOINT_EVERY = 64
CHECKPOINT_VERSION = 1

BASE_SUITES = ("thm11", "zolotarev", "thm12", "thm13_exact", "thm13_numeric", "thm14",
               "thm15", "thm16", "lemmas", "mordell", "classnum")
SEQUENCES = ("s_p", "t_p", "h_minus", "h_plus", "sign_sp")

# default half-width of the (a, b, c) grid per suite
DEFAULT_GRID = {"thm12": 3, "thm16": 2, "lemmas": 3}


class UsageError(ValueError):
    """Bad suite name, range or option; the CLI maps it to exit code 2."""


def all_suites() -> list[str]:
    return list(BASE_SUITES) + [f"conj:{cid}" for cid in conjectures.CONJECTURES]


def parse_suite(name: str) -> str:
    if name in BASE_SUITES:
        return name
    if name.startswith("conj:") and name[5:] in conjectures.CONJECTURES:
        return name
    if name in conjectures.CONJECTURES:
        return "conj:" + name
    raise UsageError(f"unknown suite {name!r}; choose from {', '.join(all_suites())}")


@dataclass(frozen=True)
class SuiteOptions:
    """Everything besides the range that determines a suite's output."""

    a: Optional[tuple[int, ...]] = None  # None: {1, smallest non-residue}
    grid: Optional[int] = None  # None: the suite default
    tolerance: float = trigeval.DEFAULT_TOL
    ratio: bool = False  # also emit the report-only ratio rows for conjecture 6.5

    def to_json(self) -> dict:
        out = asdict(self)
        out["a"] = None if self.a is None else list(self.a)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SuiteOptions":
        a = data.get("a")
        return cls(a=None if a is None else tuple(a), grid=data.get("grid"),
                   tolerance=float(data.get("tolerance", trigeval.DEFAULT_TOL)),
                   ratio=bool(data.get("ratio", False)))


# ---------------------------------------------------------------- parameters

def _odd_range(lo: int, hi: int) -> Iterator[int]:
    start = max(3, lo + (lo % 2 == 0))
    return iter(range(start, hi + 1, 2))


def _primes(lo: int, hi: int) -> list[int]:
    if hi < 3:
        return []
    return [int(p) for p in arith.sieve_primes(max(3, lo), hi)]


def param_key(suite: str) -> str:
    if suite in ("thm11", "zolotarev", "lemmas", "conj:6.8"):
        return "n" if suite == "conj:6.8" else "m"
    return "p"


def residue_filter(suite: str) -> str:
    return {
        "thm11": "odd m >= 3",
        "zolotarev": "odd n >= 3",
        "lemmas": "odd m >= 3",
        "thm13_exact": "primes p >= 5",
        "thm13_numeric": "primes p >= 5",
        "mordell": "primes 3 < p = 3 (mod 4)",
        "conj:6.8": "odd n >= 3",
    }.get(suite, "odd primes" if not suite.startswith("conj:")
          else f"odd primes where conjecture {suite[5:]} applies")


def suite_params(suite: str, lo: int, hi: int) -> list[int]:
    """Qualifying parameters in [lo, hi], ascending."""
    if lo > hi:
        raise UsageError(f"empty range: from {lo} exceeds to {hi}")
    if suite in ("thm11", "zolotarev", "lemmas", "conj:6.8"):
        return list(_odd_range(lo, hi))
    primes = _primes(lo, hi)
    if suite in ("thm13_exact", "thm13_numeric"):
        return [p for p in primes if p > 3]
    if suite == "mordell":
        return [p for p in primes if p % 4 == 3 and p > 3]
    if suite.startswith("conj:"):
        return [p for p in primes if conjectures.applicable(suite[5:], p)]
    return primes


def a_values(p: int, options: SuiteOptions) -> list[int]:
    if options.a is None:
        return sorted({1, arith.smallest_nonresidue(p)})
    return [a for a in options.a if a % p]


def grid_points(suite: str, options: SuiteOptions) -> list[tuple[int, int, int]]:
    g = DEFAULT_GRID.get(suite, 2) if options.grid is None else options.grid
    return congr.abc_grid(-g, g)


# ---------------------------------------------------------------- evaluation

@dataclass
class ParamResult:
    """One parameter's verdict plus the bookkeeping the report needs."""

    param: int
    verdict: Verdict
    skipped: Counter = field(default_factory=Counter)  # sub-check exclusions by reason
    elapsed_ms: float = 0.0


def _sign_check(name: str, params: dict, table: dict[int, int], expected: Callable[[int], int]) -> Verdict:
    bad = {a: s for a, s in table.items() if s != expected(a)}
    return Verdict(name, params, not bad, lhs=len(table), rhs=len(table) - len(bad),
                   note="" if not bad else f"mismatched multipliers {sorted(bad)[:10]}")


def _eval_zolotarev(n: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    params = {"n": n}
    items = []
    if arith.is_prime(n):
        items.append(_sign_check("zolotarev-prime", params, perms.multiplier_signs(n, "prime"),
                                 lambda a: arith.legendre(a, n)))
    items.append(_sign_check("frobenius", params, perms.multiplier_signs(n, "frobenius"),
                             lambda a: arith.jacobi(a, n)))
    items.append(_sign_check("pan", params, perms.multiplier_signs(n, "pan"),
                             lambda a: arith.jacobi(a, n) ** ((n + 1) // 2)))
    return items


def _eval_thm12(p: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    items = [congr.verify_eq_1_5_1_6(p)]
    found, excluded = congr.thm_1_2_grid_checks(p, grid_points("thm12", options))
    items += found
    if excluded:
        skipped["grid point fails the part preconditions"] += excluded
    return items


def _eval_thm13_exact(p: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    items = []
    if p > cyclo.PART_I_CAP:
        skipped[f"above the exact-ring cap {cyclo.PART_I_CAP}"] += 1
        return items
    for a in a_values(p, options):
        items.append(cyclo.verify_thm13_part_i(p, a))
        if p <= cyclo.PART_II_CAP:
            items.append(cyclo.verify_thm13_part_ii(p, a))
    if p <= cyclo.PART_II_CAP and p % 4 == 1:
        items.append(cyclo.verify_dirichlet_product(p))
    return items


def _eval_thm13_numeric(p: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    return [trigeval.verify_thm13_numeric(p, a, options.tolerance) for a in a_values(p, options)]


def sign_sp_check(p: int) -> Verdict:
    """sign(S_p) = (-1)^s(p) = (-1)^t(p), and for p = 3 (mod 4) the class-number closed form."""
    st = perms.sp_stats(p, fast=True)
    params = {"p": p}
    signs = [st.sign_sp, (-1) ** st.s_p, (-1) ** st.t_p]
    if p % 4 == 3:
        h = classfield.h_minus_dirichlet(p)
        closed = 1 if p % 8 == 3 else (-1) ** ((h + 1) // 2)
        oracle = classfield.h_minus_forms_oracle(p)
        items = [
            Verdict("sign-sp", params, len(set(signs)) == 1 and signs[0] == closed,
                    lhs=signs, rhs=closed, note=f"s={st.s_p} t={st.t_p} h={h}"),
            Verdict("h-minus-forms", params, h == oracle, lhs=h, rhs=oracle),
        ]
        return bundle("sign-sp", params, items)
    # no closed form is claimed for p = 1 (mod 4); record the parities only
    return Verdict("sign-sp", params, None, lhs=signs, note=f"s={st.s_p} t={st.t_p}; no closed form",
                   observed_sign=signs[0] * signs[2])


def _eval_thm14(p: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    items = [sign_sp_check(p)]
    items += [trigeval.verify_thm_1_4(p, a, options.tolerance) for a in a_values(p, options)]
    return items


def _eval_thm15(p: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    items = []
    for a in a_values(p, options):
        if p > 3:
            items.append(trigeval.verify_cor_1_1(p, a, options.tolerance))
        items.append(trigeval.verify_thm_1_5_and_cor_1_2(p, a, options.tolerance))
    return items


def _eval_thm16(p: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    items = [trigeval.verify_thm_1_6_part_i(p, a, options.tolerance) for a in a_values(p, options)]
    for a, b, c in grid_points("thm16", options):
        if (a * c * (a + b + c)) % p == 0:
            skipped["p divides ac(a+b+c)"] += 1
            continue
        items.append(trigeval.verify_thm_1_6_part_ii(p, a, b, c, options.tolerance))
    return items


def _eval_lemmas(m: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    items = [congr.verify_lemma_2_1(m)]
    if arith.is_prime(m):
        items.append(congr.verify_support_lemmas(m, grid_points("lemmas", options)))
    return items


def _eval_mordell(p: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    return [classfield.mordell_check(p)]


def classnum_check(p: int) -> Verdict:
    params = {"p": p}
    if p % 4 == 3:
        h = classfield.h_minus_dirichlet(p)
        oracle = classfield.h_minus_forms_oracle(p)
        return Verdict("h-minus", params, h == oracle, lhs=h, rhs=oracle)
    unit = classfield.fundamental_unit(p)
    h = classfield.h_plus_analytic(p, unit)
    cycles = classfield.h_plus_cycles(p)
    return bundle("h-plus", params, [
        Verdict("h-plus-cycles", params, h == cycles, lhs=h, rhs=cycles),
        Verdict("unit-norm-power", params, unit.norm ** h == -1, lhs=unit.norm ** h, rhs=-1,
                note=f"norm {unit.norm}, h(p) = {h}"),
    ])


def _eval_classnum(p: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    return [classnum_check(p)]


def _eval_conj(cid: str, p: int, options: SuiteOptions, skipped: Counter) -> list[Verdict]:
    if cid in ("6.2", "6.3", "6.7") and options.a is not None:
        out: list[Verdict] = []
        for a in a_values(p, options):
            out += conjectures.conjecture_checks(cid, p, a, options.ratio)
        return out
    return list(conjectures.conjecture_checks(cid, p, 1, options.ratio))


_EVALUATORS = {
    "thm11": lambda m, o, s: [perms.verify_theorem_1_1(m)],
    "zolotarev": _eval_zolotarev,
    "thm12": _eval_thm12,
    "thm13_exact": _eval_thm13_exact,
    "thm13_numeric": _eval_thm13_numeric,
    "thm14": _eval_thm14,
    "thm15": _eval_thm15,
    "thm16": _eval_thm16,
    "lemmas": _eval_lemmas,
    "mordell": _eval_mordell,
    "classnum": _eval_classnum,
}


def evaluate(suite: str, param: int, options: SuiteOptions) -> ParamResult:
    """Run every check the suite has at one parameter and bundle them."""
    t0 = time.perf_counter()
    skipped: Counter = Counter()
    if suite.startswith("conj:"):
        items = _eval_conj(suite[5:], param, options, skipped)
    else:
        items = _EVALUATORS[suite](param, options, skipped)
    params = {param_key(suite): param}
    verdict = bundle(suite, params, items)
    if not items or all(v.passed is None for v in items):
        verdict.passed = None
    return ParamResult(param, verdict, skipped, (time.perf_counter() - t0) * 1e3)


def _evaluate_task(task: tuple[str, int, SuiteOptions]) -> ParamResult:
    return evaluate(*task)


# ---------------------------------------------------------------- report

def failing_verdicts(v: Verdict) -> Iterator[Verdict]:
    """Deepest failing nodes: a failure whose own items all pass is reported whole."""
    if v.passed is not False:
        return
    inner = [item for item in v.items if item.passed is False]
    if not inner:
        yield v
    for item in inner:
        yield from failing_verdicts(item)


def leaf_verdicts(v: Verdict) -> Iterator[Verdict]:
    if v.items:
        for item in v.items:
            yield from leaf_verdicts(item)
    else:
        yield v


@dataclass
class RunReport:
    """Tallies of one suite run; passes + failures + skipped = attempted."""

    suite: str
    lo: int
    hi: int
    residue: str
    options: dict
    total_params: int = 0
    attempted: int = 0
    passes: int = 0
    failures: list[dict] = field(default_factory=list)
    skipped: int = 0
    skip_reasons: dict = field(default_factory=dict)
    excluded_subchecks: dict = field(default_factory=dict)
    observations: list[dict] = field(default_factory=list)
    series: list[list[int]] = field(default_factory=list)
    last_completed_param: Optional[int] = None
    halted_at: Optional[int] = None
    wall_time: float = 0.0

    @property
    def complete(self) -> bool:
        return self.halted_at is None and self.attempted == self.total_params

    @property
    def ok(self) -> bool:
        return not self.failures

    def check_invariant(self) -> None:
        if self.passes + len(self.failures) + self.skipped != self.attempted:
            raise AssertionError("report tallies do not add up")

    def add(self, res: ParamResult) -> None:
        v = res.verdict
        key = param_key(self.suite)
        self.attempted += 1
        fails = 0
        if v.passed is None:
            self.skipped += 1
            reason = "report-only" if v.items or v.note else "no applicable checks"
            self.skip_reasons[reason] = self.skip_reasons.get(reason, 0) + 1
        elif v.passed:
            self.passes += 1
        else:
            bad = [node.to_json() for node in failing_verdicts(v)]
            fails = len(bad)
            self.failures.append({key: res.param, "check": v.check, "failed": bad})
        for reason, n in res.skipped.items():
            self.excluded_subchecks[reason] = self.excluded_subchecks.get(reason, 0) + n
        for leaf in leaf_verdicts(v):
            if leaf.passed is None:
                obs = {key: res.param, "check": leaf.check, "params": leaf.to_json()["params"],
                       "lhs": leaf.to_json()["lhs"], "rhs": leaf.to_json()["rhs"]}
                if leaf.observed_sign is not None:
                    obs["observed_sign"] = leaf.observed_sign
                self.observations.append(obs)
        n_leaves = sum(1 for _ in leaf_verdicts(v))
        self.series.append([res.param, n_leaves - fails, fails, int(v.passed is None)])
        self.last_completed_param = res.param

    def to_json(self, timing: bool = False) -> dict:
        """Deterministic record of the run; wall time only on request."""
        out = {
            "suite": self.suite,
            "range": {"lo": self.lo, "hi": self.hi, "filter": self.residue},
            "options": self.options,
            "total_params": self.total_params,
            "attempted": self.attempted,
            "passes": self.passes,
            "failures": self.failures,
            "skipped": self.skipped,
            "skip_reasons": dict(sorted(self.skip_reasons.items())),
            "excluded_subchecks": dict(sorted(self.excluded_subchecks.items())),
            "observations": self.observations,
            "series": self.series,
            "last_completed_param": self.last_completed_param,
            "halted_at": self.halted_at,
            "complete": self.complete,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RunReport":
        rep = cls(data["suite"], data["range"]["lo"], data["range"]["hi"], data["range"]["filter"],
                  data["options"])
        for name in ("total_params", "attempted", "passes", "failures", "skipped", "skip_reasons",
                     "excluded_subchecks", "observations", "series", "last_completed_param",
                     "halted_at"):
            setattr(rep, name, data[name])
        rep.wall_time = float(data.get("wall_time", 0.0))
        return rep

    def summary_lines(self) -> list[str]:
        lines = [
            f"suite {self.suite}  range [{self.lo}, {self.hi}]  ({self.residue})",
            f"attempted {self.attempted}/{self.total_params}  passed {self.passes}  "
            f"failed {len(self.failures)}  skipped {self.skipped}  time {self.wall_time:.2f}s",
        ]
        for reason, n in sorted(self.skip_reasons.items()):
            lines.append(f"  skipped {n}: {reason}")
        for reason, n in sorted(self.excluded_subchecks.items()):
            lines.append(f"  sub-checks excluded {n}: {reason}")
        if self.halted_at is not None:
            lines.append(f"halted at {param_key(self.suite)} = {self.halted_at} (first counterexample)")
        for fail in self.failures:
            lines.append("FAIL " + json.dumps(fail, sort_keys=False))
        return lines


# ---------------------------------------------------------------- execution

def jsonl_record(suite: str, res: ParamResult) -> dict:
    """One output line: suite, the scanned parameter, then the verdict fields."""
    body = res.verdict.to_json()
    rec = {"suite": suite, param_key(suite): res.param, "params": body["params"], "pass": body["pass"],
           "lhs": body["lhs"], "rhs": body["rhs"]}
    if "observed_sign" in body:
        rec["observed_sign"] = body["observed_sign"]
    if "items" in body:
        rec["items"] = body["items"]
    if res.skipped:
        rec["excluded"] = dict(sorted(res.skipped.items()))
    rec["elapsed_ms"] = round(res.elapsed_ms, 3)
    return rec


def _results(tasks: list[tuple[str, int, SuiteOptions]], jobs: int) -> Iterator[ParamResult]:
    if jobs <= 1 or len(tasks) <= 1:
        for task in tasks:
            yield _evaluate_task(task)
        return
    with multiprocessing.get_context("fork").Pool(jobs) as pool:
        # imap keeps submission order, so the sink sees parameters ascending
        yield from pool.imap(_evaluate_task, tasks, chunksize=1)


def _write_checkpoint(path: Path, state: dict) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(state, indent=1) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def run_suite(suite: str, lo: int, hi: int, options: SuiteOptions | None = None, jobs: int = 1,
              out: str | Path | None = None, checkpoint: str | Path | None = None,
              halt_on_failure: Optional[bool] = None, limit: Optional[int] = None,
              _resume: Optional[dict] = None,
              progress: Optional[Callable[[ParamResult], None]] = None) -> RunReport:
    """Run a suite over [lo, hi]; results reach the sinks in parameter order.

    Conjecture suites stop at the first counterexample unless halt_on_failure is
    False. `limit` caps the parameters processed in this call (the checkpoint
    then lets `resume` finish the run).
    """
    suite = parse_suite(suite)
    options = options or SuiteOptions()
    if jobs < 1:
        raise UsageError("jobs must be at least 1")
    if halt_on_failure is None:
        halt_on_failure = suite.startswith("conj:")
    params = suite_params(suite, lo, hi)
    if _resume is not None:
        report = RunReport.from_json(_resume["report"])
        start = _resume["next_index"]
    else:
        report = RunReport(suite, lo, hi, residue_filter(suite), options.to_json())
        start = 0
    report.total_params = len(params)
    t0 = time.perf_counter() - report.wall_time

    out_path = Path(out) if out else None
    ckpt_path = Path(checkpoint) if checkpoint else None
    fh = None
    if out_path is not None:
        fh = open(out_path, "ab" if _resume is not None else "wb")

    def state(next_index: int) -> dict:
        report.wall_time = time.perf_counter() - t0
        if fh is not None:
            fh.flush()
            os.fsync(fh.fileno())
        return {
            "version": CHECKPOINT_VERSION,
            "suite": suite, "lo": lo, "hi": hi, "options": options.to_json(),
            "halt_on_failure": halt_on_failure,
            "next_index": next_index,
            "last_completed_param": report.last_completed_param,
            "out": str(out_path) if out_path else None,
            "out_bytes": fh.tell() if fh is not None else 0,
            "report": report.to_json(timing=True),
        }

    pending = params[start:] if report.halted_at is None else []
    if limit is not None:
        pending = pending[:max(0, limit)]
    tasks = [(suite, p, options) for p in pending]
    index = start
    try:
        for res in _results(tasks, jobs):
            report.add(res)
            if fh is not None:
                fh.write((json.dumps(jsonl_record(suite, res)) + "\n").encode("utf-8"))
            index += 1
            if progress is not None:
                progress(res)
            if res.verdict.passed is False and halt_on_failure:
                report.halted_at = res.param
                break
            if ckpt_path is not None and (index - start) % CHECKPOINT_EVERY == 0:
                _write_checkpoint(ckpt_path, state(index))
        if ckpt_path is not None:
            _write_checkpoint(ckpt_path, state(index))
        report.wall_time = time.perf_counter() - t0
    finally:
        if fh is not None:
            fh.close()
    report.check_invariant()
    return report


def load_checkpoint(path: str | Path) -> dict:
    """Parse and sanity-check a checkpoint; ValueError on anything malformed."""
    try:
        state = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError:
        raise
    except (ValueError, UnicodeDecodeError) as exc:
        raise ValueError(f"checkpoint {path} does not parse: {exc}") from exc
    need = ("version", "suite", "lo", "hi", "options", "next_index", "report", "out", "out_bytes")
    if not isinstance(state, dict) or any(k not in state for k in need):
        raise ValueError(f"checkpoint {path} is missing fields")
    if state["version"] != CHECKPOINT_VERSION:
        raise ValueError(f"checkpoint version {state['version']} is not supported")
    parse_suite(state["suite"])
    rep = state["report"]
    if rep.get("suite") != state["suite"] or rep.get("attempted") != state["next_index"]:
        raise ValueError(f"checkpoint {path} is inconsistent")
    return state


def resume(checkpoint: str | Path, suite: Optional[str] = None, jobs: int = 1,
           limit: Optional[int] = None,
           progress: Optional[Callable[[ParamResult], None]] = None) -> RunReport:
    """Continue a checkpointed run; the final report matches an uninterrupted one."""
    state = load_checkpoint(checkpoint)
    if suite is not None and parse_suite(suite) != state["suite"]:
        raise UsageError(f"checkpoint is for suite {state['suite']}, not {suite}")
    out = state["out"]
    if out is not None:
        # drop any lines written after the checkpoint was taken
        with open(out, "r+b") as fh:
            fh.truncate(state["out_bytes"])
    return run_suite(state["suite"], state["lo"], state["hi"], SuiteOptions.from_json(state["options"]),
                     jobs=jobs, out=out, checkpoint=checkpoint,
                     halt_on_failure=state.get("halt_on_failure"), limit=limit, _resume=state,
                     progress=progress)


# ---------------------------------------------------------------- b-files

def _sequence_value(task: tuple[str, int]) -> int:
    name, p = task
    if name == "s_p":
        return perms.count_inversions(arith.prime_ctx(p).squares())
    if name == "t_p":
        return perms.t_count_fast(p)
    if name == "sign_sp":
        return perms.inversion_sign(perms.square_list(p))[0]
    if name == "h_minus":
        return classfield.h_minus_dirichlet(p)
    if name == "h_plus":
        return classfield.h_plus(p, cross_check=False)
    raise UsageError(f"unknown sequence {name!r}")


def sequence_primes(name: str, lo: int = 3, hi: Optional[int] = None,
                    first: Optional[int] = None) -> list[int]:
    """Odd primes indexed by the sequence: all, or the residue class it lives on."""
    if name not in SEQUENCES:
        raise UsageError(f"unknown sequence {name!r}; choose from {', '.join(SEQUENCES)}")
    keep = {"h_minus": lambda p: p % 4 == 3, "h_plus": lambda p: p % 4 == 1}.get(name, lambda p: True)
    if hi is not None:
        if lo > hi:
            return []
        return [p for p in _primes(lo, hi) if keep(p)]
    if first is None:
        raise UsageError("give an upper bound or a count")
    out: list[int] = []
    span = max(64, first * 16)
    start = max(3, lo)
    while len(out) < first:
        out += [p for p in _primes(start, start + span) if keep(p)]
        start += span + 1
    return out[:first]


def sequence_values(name: str, primes: Iterable[int], jobs: int = 1) -> list[int]:
    tasks = [(name, p) for p in primes]
    if jobs <= 1 or len(tasks) <= 1:
        return [_sequence_value(t) for t in tasks]
    with multiprocessing.get_context("fork").Pool(jobs) as pool:
        return pool.map(_sequence_value, tasks, chunksize=max(1, len(tasks) // (8 * jobs)))


def bfile_text(values: Iterable[int]) -> str:
    return "".join(f"{i} {v}\n" for i, v in enumerate(values, start=1))


def export_bfile(name: str, path: str | Path, lo: int = 3, hi: Optional[int] = None,
                 first: Optional[int] = None, jobs: int = 1) -> list[int]:
    """Write the b-file and return the values, indexed from 1 over the primes in order."""
    primes = sequence_primes(name, lo, hi, first)
    values = sequence_values(name, primes, jobs)
    Path(path).write_bytes(bfile_text(values).encode("ascii"))
    return values

