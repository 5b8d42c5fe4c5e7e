"""End-to-end replay of the case analysis, with JSON/CSV reports.

Each ``run_*`` function returns a :class:`CaseReport`.  Reported solutions
are re-verified with exact integer arithmetic before they are added.
"""

from __future__ import annotations

import configparser
import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable

from .bigseq import (SequenceSpec, intersection_bruteforce, is_trivial_solution,
                     merge_coincidences, solve_three_times_power, term, terms,
                     terms_up_to, three_times_power_exponent)
from .errors import DomainError, PrecisionLimitError, ReductionFailure
from .linforms import (bound_m_of_k, bound_m_of_n, large_k_case1_chain,
                       large_k_case2_chain, small_k_chain)
from .precreal import DEFAULT_PRECISION, PRECISION_CEILING, PrecReal
from .reduction import (SIGNS_LARGE, SIGNS_SMALL, ConvergentCache,
                        baker_davenport_reduce, build_large_k_problem,
                        build_small_k_problem)

CASE_IDS = ("small_k", "m_small_case", "large_k_case1", "large_k_case2",
            "final_bruteforce", "corollaries")

# M values fed to the large-order reductions
M_CASE1_PASS1 = 775 * 10 ** 269
M_CASE1_PASS2 = 57 * 10 ** 46
M_CASE2 = 91 * 10 ** 23

SMALL_K_W_CLAIM = 1600
CASE1_HALF_K_CLAIM = 2980
CASE1_K_CLAIM = 740
CASE2_N_CLAIM = 185
LARGE_K_FLOOR = 800


@dataclass(frozen=True)
class PipelineConfig:
    small_k: tuple[int, int] = (3, 30)
    case1_l: tuple[int, int] = (2, 50)
    case1_pass2_l: tuple[int, int] = (2, 50)
    case2_l: tuple[int, int] = (2, 30)
    m_cap: int = 1600
    corollary_k_max: int = 15
    corollary_limit: int = 10 ** 30
    power_k_max: int = 12
    power_n_max: int = 200
    precision_ceiling: int = PRECISION_CEILING
    jobs: int = 1
    cache_dir: str | None = None
    checkpoint_dir: str | None = None
    full_scale: bool = False

    def __post_init__(self):
        for name in ("small_k", "case1_l", "case1_pass2_l", "case2_l"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise DomainError(f"{name} range is empty: {lo}..{hi}")
        if self.small_k[0] < 3 and self.small_k[1] >= 3:
            object.__setattr__(self, "small_k", (3, self.small_k[1]))
        if self.jobs < 1:
            raise DomainError("jobs must be at least 1")

    def scaled_up(self) -> "PipelineConfig":
        """The ranges of the full computation (hours of CPU)."""
        return replace(self, small_k=(3, 800), case1_l=(2, 2970),
                       case1_pass2_l=(2, 360), case2_l=(2, 180), full_scale=True)

    def small_pairs(self) -> list[tuple[int, int]]:
        lo, hi = self.small_k
        return [(k, l) for k in range(max(lo, 3), hi + 1) for l in range(2, k)]

    @classmethod
    def from_sources(cls, path: str | None = None, *, full_scale: bool = False,
                     env: dict | None = None, **overrides) -> "PipelineConfig":
        """Defaults, then an INI file ([pipeline] section), then env vars, then overrides."""
        env = os.environ if env is None else env
        values: dict[str, Any] = {}
        if path:
            parser = configparser.ConfigParser()
            if not parser.read(path):
                raise DomainError(f"cannot read config file {path}")
            sec = parser["pipeline"] if parser.has_section("pipeline") else parser.defaults()
            for key, raw in sec.items():
                values[key] = _parse_config_value(key, raw)
        if env.get("GENLUCAS_CACHE_DIR"):
            values["cache_dir"] = env["GENLUCAS_CACHE_DIR"]
        if env.get("GENLUCAS_JOBS"):
            values["jobs"] = int(env["GENLUCAS_JOBS"])
        values.update({k: v for k, v in overrides.items() if v is not None})
        unknown = set(values) - set(cls.__dataclass_fields__)
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**values)
        if full_scale or values.get("full_scale"):
            cfg = cfg.scaled_up()
        return cfg


def _parse_config_value(key: str, raw: str):
    raw = raw.strip()
    if key in ("small_k", "case1_l", "case1_pass2_l", "case2_l"):
        lo, hi = raw.replace(",", "-").split("-")
        return int(lo), int(hi)
    if key in ("cache_dir", "checkpoint_dir"):
        return raw or None
    if key == "full_scale":
        return raw.lower() in ("1", "true", "yes", "on")
    if key == "corollary_limit":
        return int(Fraction(raw))
    return int(raw)


def _dec(x) -> str:
    """Decimal string for JSON; exact for integers."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else repr(float(x))
    if isinstance(x, PrecReal):
        return x.digits(20)
    if isinstance(x, float):
        return repr(x)
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return _dec(obj)


@dataclass
class CaseReport:
    case_id: str
    params: dict = field(default_factory=dict)
    maxima: dict = field(default_factory=dict)
    solutions: list[dict] = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    precision_events: list[dict] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    subreports: list["CaseReport"] = field(default_factory=list)

    def nontrivial(self) -> list[dict]:
        out = [s for s in self.solutions if not s["trivial"]]
        for sub in self.subreports:
            out.extend(sub.nontrivial())
        return out

    def all_failures(self) -> list[dict]:
        out = list(self.failures)
        for sub in self.subreports:
            out.extend(sub.all_failures())
        return out

    def failed_checks(self) -> list[str]:
        out = [f"{self.case_id}:{k}" for k, ok in self.checks.items() if ok is False]
        for sub in self.subreports:
            out.extend(sub.failed_checks())
        return out

    @property
    def ok(self) -> bool:
        return not self.nontrivial() and not self.all_failures() and not self.failed_checks()

    def to_dict(self) -> dict:
        d = {
            "case_id": self.case_id,
            "params": self.params,
            "maxima": self.maxima,
            "solutions": self.solutions,
            "timings": self.timings,
            "precision_events": self.precision_events,
            "records": self.records,
            "failures": self.failures,
            "checks": self.checks,
            "ok": self.ok,
        }
        d = _jsonable(d)
        d["subreports"] = [s.to_dict() for s in self.subreports]
        return d

    def write_json(self, path: str | os.PathLike) -> None:
        _atomic_write(Path(path), json.dumps(self.to_dict(), indent=2))

    def iter_records(self) -> Iterable[tuple[str, dict]]:
        for r in self.records:
            yield self.case_id, r
        for sub in self.subreports:
            yield from sub.iter_records()

    def write_csv(self, path: str | os.PathLike) -> None:
        cols = ["case_id", "k", "l", "sign", "q_digits", "epsilon_sign", "w_bound"]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for case_id, r in self.iter_records():
                w.writerow([case_id] + [_dec(r.get(c, "")) for c in cols[1:]])

    def summary_lines(self, indent: str = "") -> list[str]:
        status = "ok" if self.ok else "FAILED"
        lines = [f"{indent}{self.case_id}: {status} "
                 f"({self.timings.get('total', 0):.2f}s, {len(self.records)} reductions, "
                 f"{len(self.solutions)} coincidences, {len(self.nontrivial())} nontrivial)"]
        for name, v in self.maxima.items():
            lines.append(f"{indent}  {name} = {_dec(v)}")
        for name, ok in self.checks.items():
            lines.append(f"{indent}  [{'pass' if ok else 'FAIL'}] {name}")
        for f in self.failures:
            lines.append(f"{indent}  failure {f['label']}: {f['error']}")
        for sub in self.subreports:
            lines.extend(sub.summary_lines(indent + "  "))
        return lines


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".{os.getpid()}.tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _solution(n: int, k: int | None, m: int, l: int, value: int) -> dict:
    """Verify a coincidence exactly and package it.

    k=None stands for an order above n, where L_n^(k) = 3 * 2^(n-2) (n >= 2).
    """
    left = term(SequenceSpec.lucas(k), n) if k is not None else _large_order_term(n)
    right = term(SequenceSpec.lucas(l), m)
    if not left == right == value:
        raise AssertionError(f"unverified coincidence n={n} k={k} m={m} l={l}")
    trivial = n == m and 0 <= n <= l
    if k is not None:
        trivial = is_trivial_solution(n, k, m, l)
    return {"n": n, "k": k, "m": m, "l": l, "value": value, "trivial": trivial}


def _large_order_term(n: int) -> int:
    if n == 0:
        return 2
    if n == 1:
        return 1
    return 3 << (n - 2)


# -- parallel map with per-item checkpoints ------------------------------------

def _pmap(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (8 * jobs))))


class _Checkpoints:
    def __init__(self, root: str | None, case: str):
        self.dir = Path(root) / case if root else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def get(self, key: str) -> dict | None:
        if not self.dir:
            return None
        try:
            return json.loads((self.dir / f"{key}.json").read_text())
        except (OSError, ValueError):
            return None

    def put(self, key: str, rec: dict) -> None:
        if self.dir:
            _atomic_write(self.dir / f"{key}.json", json.dumps(rec))


def _reduce_task(task: tuple) -> dict:
    """Worker: one reduction, returned as a plain record (picklable)."""
    kind, k, l, sign, M, ceiling, cache_dir = task
    if kind == "small":
        prob = build_small_k_problem(k, l, sign, M)
        key = f"small_{k}_{l}_{sign}"
    else:
        prob = build_large_k_problem(l, sign, M)
        key = f"large_{l}_{sign}_{M.bit_length()}"
    cache = ConvergentCache(cache_dir) if cache_dir else None
    base = {"k": k, "l": l, "sign": sign, "M_bits": M.bit_length()}
    t0 = time.perf_counter()
    try:
        r = baker_davenport_reduce(prob, cache=cache, cache_key=key, ceiling=ceiling)
    except (ReductionFailure, PrecisionLimitError) as exc:
        return {**base, "failure": f"{type(exc).__name__}: {exc}", "label": prob.label}
    start = max(DEFAULT_PRECISION, r.q.bit_length() + M.bit_length() + 64)
    return {**base, "q_digits": r.q_digits, "epsilon_sign": r.epsilon.sign(),
            "epsilon": r.epsilon.digits(12), "w_bound": r.w_bound,
            "convergent_index": r.convergent_index, "attempts": r.attempts,
            "precision": r.precision, "escalated": r.precision > start,
            "seconds": time.perf_counter() - t0, "label": prob.label}


def _run_reductions(report: CaseReport, tasks: list[tuple], cfg: PipelineConfig,
                    ckpt_case: str) -> list[dict]:
    ckpt = _Checkpoints(cfg.checkpoint_dir, ckpt_case)
    keyed = [(f"{t[1]}_{t[2]}_{t[3]}", t) for t in tasks]
    done = {key: ckpt.get(key) for key, _ in keyed}
    todo = [t for key, t in keyed if done[key] is None]
    for (key, _), rec in zip([kt for kt in keyed if done[kt[0]] is None],
                             _pmap(_reduce_task, todo, cfg.jobs)):
        ckpt.put(key, rec)
        done[key] = rec
    out = []
    for key, _ in keyed:
        rec = done[key]
        if "failure" in rec:
            report.failures.append({"label": rec["label"], "error": rec["failure"]})
            continue
        out.append(rec)
        report.records.append({c: rec[c] for c in ("k", "l", "sign", "M_bits", "q_digits",
                                                  "epsilon_sign", "w_bound", "attempts")})
        if rec["escalated"] or rec["attempts"] > 1:
            report.precision_events.append({"label": rec["label"], "bits": rec["precision"],
                                            "attempts": rec["attempts"]})
    if out:
        report.maxima.setdefault("max_precision_bits", 0)
        report.maxima["max_precision_bits"] = max(report.maxima["max_precision_bits"],
                                                  max(r["precision"] for r in out))
    return out


# -- cases ----------------------------------------------------------------------

def _pair_coincidences(k: int, l: int, m_max: int) -> list[tuple[int, int, int]]:
    """All L_n^(k) = L_m^(l) with m <= m_max (any n), from exact terms."""
    right = [(m, v) for m, v in enumerate(terms(SequenceSpec.lucas(l), m_max)) if v]
    left = terms_up_to(SequenceSpec.lucas(k), right[-1][1])
    return merge_coincidences(left, right)


def _small_k_brute(args: tuple[int, int, int]) -> list[tuple[int, int, int]]:
    return _pair_coincidences(*args)


def run_small_k(config: PipelineConfig) -> CaseReport:
    """Both orders small: reduce each (k, l, sign), then search m up to the reduced bound."""
    t0 = time.perf_counter()
    rep = CaseReport("small_k", params={"k_range": list(config.small_k), "l_range": "2..k-1",
                                        "m_cap": config.m_cap,
                                        "full_scale": config.full_scale})
    pairs = config.small_pairs()
    mk = {k: bound_m_of_k(k) for k in {k for k, _ in pairs}}
    tasks = [("small", k, l, s, mk[k], config.precision_ceiling, config.cache_dir)
             for k, l in pairs for s in SIGNS_SMALL]
    recs = _run_reductions(rep, tasks, config, "small_k")
    t1 = time.perf_counter()
    per_pair: dict[tuple[int, int], float] = {}
    for r in recs:
        key = (r["k"], r["l"])
        per_pair[key] = max(per_pair.get(key, 0.0), r["w_bound"])
    w_max = max(per_pair.values(), default=0.0)
    rep.maxima["w_bound"] = w_max
    rep.maxima["max_M_k"] = max(mk.values(), default=0)
    rep.checks["all_epsilon_positive"] = all(r["epsilon_sign"] > 0 for r in recs)
    rep.checks[f"w_bound_below_{SMALL_K_W_CLAIM}"] = w_max < SMALL_K_W_CLAIM
    if pairs:
        kmax = config.small_k[1]
        chain = small_k_chain(kmax)
        rep.maxima["m_bound_chain"] = chain.bound
        rep.checks["m_bound_chain_within_M_k"] = chain.bound <= chain.reference_value * 1.01

    # exponents w are m-1 or n-1 < m, so m <= floor(w) + 1 bounds the search
    search = [(k, l, max(math.floor(per_pair.get((k, l), 0.0)) + 1, config.m_cap))
              for k, l in pairs]
    for (k, l, m_max), found in zip(search, _pmap(_small_k_brute, search, config.jobs)):
        for n, m, v in found:
            rep.solutions.append(_solution(n, k, m, l, v))
    rep.maxima["m_searched"] = max((s[2] for s in search), default=0)
    rep.checks["only_trivial_coincidences"] = not rep.nontrivial()
    rep.timings = {"reduction": t1 - t0, "bruteforce": time.perf_counter() - t1,
                   "total": time.perf_counter() - t0}
    return rep


def run_case_m_small(config: PipelineConfig | None = None) -> CaseReport:
    """k > 800 with m <= 2^(l/2): compare L_m^(l) with the prefix form 3 * 2^(n-2)."""
    t0 = time.perf_counter()
    n_max, m_max = 36, 37
    # 2^(l/2) < m_max + 1  <=>  2^l < (m_max + 1)^2
    l_gate = max(l for l in range(2, 64) if 2 ** l < (m_max + 1) ** 2)
    rep = CaseReport("m_small_case", params={"l_range": [2, l_gate], "n_max": n_max,
                                             "m_max": m_max, "k": "> 800"})
    rep.checks["l_gate_is_10"] = l_gate == 10
    stand_in = terms(SequenceSpec.lucas(LARGE_K_FLOOR + 1), n_max)
    rep.checks["prefix_form_matches_order_801"] = all(
        stand_in[n] == _large_order_term(n) for n in range(n_max + 1))
    left = [(n, _large_order_term(n)) for n in range(n_max + 1)]
    for l in range(2, l_gate + 1):
        right = [(m, v) for m, v in enumerate(terms(SequenceSpec.lucas(l), m_max)) if v]
        for n, m, v in merge_coincidences(left, right):
            rep.solutions.append(_solution(n, None, m, l, v))
    rep.checks["only_trivial_coincidences"] = not rep.nontrivial()
    rep.timings = {"total": time.perf_counter() - t0}
    return rep


def run_large_k_case1(config: PipelineConfig) -> CaseReport:
    """k > 800 with Gamma = k/2: bound chain, then two reduction passes."""
    t0 = time.perf_counter()
    rep = CaseReport("large_k_case1", params={
        "pass1_l": list(config.case1_l), "pass1_M": M_CASE1_PASS1,
        "pass2_l": list(config.case1_pass2_l), "pass2_M": M_CASE1_PASS2,
        "full_scale": config.full_scale})
    chain = large_k_case1_chain()
    rep.maxima["k_bound_chain"] = chain.bound
    rep.maxima["l_max_chain"] = chain.derived["l_max"]
    rep.checks["k_chain_within_1pct"] = chain.within_upward_slack()

    def sweep(lrange, M, tag):
        tasks = [("large", None, l, s, M, config.precision_ceiling, config.cache_dir)
                 for l in range(lrange[0], lrange[1] + 1) for s in SIGNS_LARGE]
        recs = _run_reductions(rep, tasks, config, f"large_k_case1_{tag}")
        return max((r["w_bound"] for r in recs), default=0.0)

    w1 = sweep(config.case1_l, M_CASE1_PASS1, "pass1")
    rep.maxima["pass1_half_k"] = w1
    rep.checks[f"pass1_half_k_at_most_{CASE1_HALF_K_CLAIM}"] = w1 <= CASE1_HALF_K_CLAIM
    k1 = 2 * math.floor(w1) + 1          # k/2 < w1, so k <= 2 floor(w1) + 1
    l1 = math.floor(41 * math.log(k1)) if k1 > 1 else 0
    M2 = bound_m_of_k(k1) if k1 >= 2 else 0
    rep.maxima["pass1_k_cap"] = k1
    rep.maxima["pass1_l_cap"] = l1
    rep.maxima["pass1_m_cap"] = M2
    rep.checks["pass2_M_covers_pass1"] = M2 <= M_CASE1_PASS2

    w2 = sweep(config.case1_pass2_l, M_CASE1_PASS2, "pass2")
    k2 = 2 * w2
    rep.maxima["pass2_half_k"] = w2
    rep.maxima["pass2_k_bound"] = k2
    rep.checks[f"pass2_k_below_{CASE1_K_CLAIM}"] = k2 < CASE1_K_CLAIM
    rep.checks["contradiction_with_k_above_800"] = k2 < LARGE_K_FLOOR
    rep.timings = {"total": time.perf_counter() - t0}
    return rep


def run_final_bruteforce(config: PipelineConfig | None = None) -> CaseReport:
    """L_m^(l) = 3 * 2^(n-2) for 2 <= l <= 17, l+1 < m <= 290, 6 <= n <= 190."""
    t0 = time.perf_counter()
    l_max, m_max, n_min, n_max = 17, 290, 6, 190
    rep = CaseReport("final_bruteforce", params={"l_range": [2, l_max],
                                                 "m_range": "l+2..290",
                                                 "n_range": [n_min, n_max]})
    checked = 0
    for l in range(2, l_max + 1):
        seq = terms(SequenceSpec.lucas(l), m_max)
        for m in range(l + 2, m_max + 1):
            checked += 1
            a = three_times_power_exponent(seq[m])
            if a is not None and n_min <= a + 2 <= n_max:
                rep.solutions.append(_solution(a + 2, None, m, l, seq[m]))
    rep.maxima["pairs_checked"] = checked
    rep.checks["no_solutions"] = not rep.solutions
    rep.timings = {"total": time.perf_counter() - t0}
    return rep


def run_large_k_case2(config: PipelineConfig) -> CaseReport:
    """k > 800 with Gamma = n - 2: reduction, derived caps, final search."""
    t0 = time.perf_counter()
    rep = CaseReport("large_k_case2", params={"l_range": list(config.case2_l),
                                              "M": M_CASE2, "full_scale": config.full_scale})
    chain = large_k_case2_chain()
    rep.maxima["m_bound_chain"] = chain.bound
    rep.maxima["l_max_chain"] = chain.derived["l_max"]
    rep.checks["m_chain_within_1pct"] = chain.within_upward_slack()
    rep.checks["l_chain_at_most_180"] = chain.derived["l_max"] <= 180

    lo, hi = config.case2_l
    tasks = [("large", None, l, s, M_CASE2, config.precision_ceiling, config.cache_dir)
             for l in range(lo, hi + 1) for s in SIGNS_LARGE]
    recs = _run_reductions(rep, tasks, config, "large_k_case2")
    w = max((r["w_bound"] for r in recs), default=0.0)
    rep.maxima["n_minus_2"] = w
    rep.checks[f"n_minus_2_at_most_{CASE2_N_CLAIM}"] = w <= CASE2_N_CLAIM
    n_cap = math.floor(w) + 2
    m_cap = math.floor(bound_m_of_n(max(n_cap, 1)))
    l_cap = math.floor(3 * math.log(m_cap)) if m_cap > 1 else 0
    rep.maxima.update({"n_cap": n_cap, "m_cap": m_cap, "l_cap": l_cap})
    # the final search runs over the stated caps, which contain the derived ones
    rep.checks["derived_caps_inside_search_box"] = n_cap <= 190 and m_cap <= 290 and l_cap <= 17
    rep.checks["stated_caps_consistent"] = (
        math.floor(bound_m_of_n(190)) <= 290 and math.floor(3 * math.log(290)) <= 17)
    rep.subreports.append(run_final_bruteforce(config))
    rep.timings = {"total": time.perf_counter() - t0}
    return rep


def run_corollaries(config: PipelineConfig) -> CaseReport:
    """Common values of two Lucas orders, and the values of the form 3 * 2^a."""
    t0 = time.perf_counter()
    kmax = config.corollary_k_max
    rep = CaseReport("corollaries", params={"k_max": kmax, "limit": config.corollary_limit,
                                            "power_k_max": config.power_k_max,
                                            "power_n_max": config.power_n_max})
    sizes_ok = True
    for k in range(3, kmax + 1):
        for l in range(2, k):
            found = intersection_bruteforce(k, l, config.corollary_limit)
            sizes_ok &= len(found) == l + 1
            for n, m, v in found:
                rep.solutions.append(_solution(n, k, m, l, v))
    rep.checks["intersection_size_is_l_plus_1"] = sizes_ok
    if config.power_k_max >= 2:
        sols = solve_three_times_power(config.power_k_max, config.power_n_max,
                                       config.power_n_max)
        expected = {(n, k, n - 2) for k in range(2, config.power_k_max + 1)
                    for n in range(2, k + 1)}
        rep.maxima["power_solutions"] = len(sols)
        rep.checks["powers_exactly_prefix"] = set(sols) == expected
    rep.timings = {"total": time.perf_counter() - t0}
    return rep


RUNNERS: dict[str, Callable[[PipelineConfig], CaseReport]] = {
    "small_k": run_small_k,
    "m_small_case": run_case_m_small,
    "large_k_case1": run_large_k_case1,
    "large_k_case2": run_large_k_case2,
    "final_bruteforce": run_final_bruteforce,
    "corollaries": run_corollaries,
}


def run_case(case_id: str, config: PipelineConfig) -> CaseReport:
    try:
        runner = RUNNERS[case_id]
    except KeyError:
        raise DomainError(f"unknown case {case_id!r}; choose from {', '.join(CASE_IDS)}")
    return runner(config)


def run_all(config: PipelineConfig) -> CaseReport:
    t0 = time.perf_counter()
    rep = CaseReport("all", params=_jsonable(asdict(config)))
    for cid in ("small_k", "m_small_case", "large_k_case1", "large_k_case2", "corollaries"):
        rep.subreports.append(run_case(cid, config))
    rep.timings = {"total": time.perf_counter() - t0}
    return rep
