"""Verification harness: seeded simulation and statistical checks.

Every entry point takes an explicit seed and reports exactly the same
numbers for the same seed, regardless of execution order: trial t of a
simulation uses random stream t, and vectorized checks consume streams in
fixed-size chunks.  Revenue aggregation is exact integer summation, so means
and variances do not depend on accumulation order.  Statistical gates use
three standard errors throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Literal, Sequence

import numpy as np

from .analysis import approx_factors, ruin_bounds, ruin_probability_finite
from .auction import PartitionAssignment, SamplingBias, _mechanism_core
from .benchmark import TieRule, envy_free_optimal
from .extractor import extraction_params, profit_extract
from .profiles import (
    Environment,
    Money,
    ValuationProfile,
    dominates,
    drop_highest,
    lower_highest_to_second,
    make_profile,
)
from .seeding import RandomSource

_CHUNK = 20_000  # fixed vectorization chunk; results never depend on it

ProfileKind = Literal["equal_revenue", "uniform", "bimodal", "constant"]
_GROUP_CODE = {"A": 0, "B": 1, "C": 2}


@dataclass(frozen=True)
class SimConfig:
    """One simulation request: profile, environment, bias, trials, seed."""

    profile: ValuationProfile
    env: Environment
    bias: SamplingBias
    trials: int
    master_seed: int
    source: str = ""

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class StatSummary:
    """Sample statistics of per-trial revenue with a 3-sigma band."""

    trials: int
    mean: float
    stddev: float
    stderr: float
    low3: float
    high3: float


@dataclass(frozen=True)
class IcViolation:
    """A profitable misreport found by the deviation scan."""

    agent_id: int
    group: str
    true_value: Money
    deviation_bid: Money
    truthful_utility: int
    deviation_utility: int


def _summary(total: int, total_sq: int, trials: int) -> StatSummary:
    mean = total / trials
    if trials >= 2:
        var = (trials * total_sq - total * total) / (trials * (trials - 1))
        var = max(var, 0.0)
    else:
        var = 0.0
    stddev = math.sqrt(var)
    stderr = stddev / math.sqrt(trials)
    return StatSummary(trials, mean, stddev, stderr, mean - 3 * stderr, mean + 3 * stderr)


def _prep(profile: ValuationProfile):
    """Sorted entries plus the permutation from ascending-id draw order."""
    entries = [(val, aid) for aid, val in profile.sorted_entries]
    ids_asc = sorted(aid for aid, _ in profile.entries)
    pos = {aid: i for i, aid in enumerate(ids_asc)}
    perm = np.array([pos[aid] for _, aid in entries], dtype=np.intp)
    return entries, ids_asc, perm


def _draw_labels(
    rng: np.random.Generator, n: int, p: float, perm: np.ndarray
) -> list[int]:
    """Group codes aligned to sorted order; identical to `auction.partition`."""
    u = rng.random(n)
    codes = np.where(u < p, 0, np.where(u < 2 * p, 1, 2))
    return codes[perm].tolist()


def iter_trial_revenues(config: SimConfig) -> Iterator[Money]:
    """Exact revenue of each trial, in trial order."""
    entries, ids_asc, perm = _prep(config.profile)
    n = len(ids_asc)
    units = config.env.units
    p = config.bias.p
    source = RandomSource(config.master_seed)
    for t in range(config.trials):
        labels = _draw_labels(source.stream(t), n, p, perm)
        _, payments = _mechanism_core(entries, labels, units)
        yield sum(payments.values())


def summarize(revenues: Iterator[Money] | Sequence[Money]) -> StatSummary:
    """Exact-integer summary statistics of a revenue stream."""
    total = 0
    total_sq = 0
    count = 0
    for rev in revenues:
        total += rev
        total_sq += rev * rev
        count += 1
    if count == 0:
        raise ValueError("cannot summarize zero trials")
    return _summary(total, total_sq, count)


def run_trials(config: SimConfig) -> StatSummary:
    """Simulate the auction `config.trials` times; trial t uses stream t."""
    return summarize(iter_trial_revenues(config))


def exact_expected_revenue(
    profile: ValuationProfile,
    env: Environment,
    p: float,
    bump_enabled: bool = True,
    tie: TieRule = "smallest",
) -> float:
    """Expected revenue by enumerating all 3^n group assignments.

    Exact up to float weighting; the per-assignment revenue is an integer.
    Guarded to n <= 12.
    """
    if not (0.0 < p < 0.5):
        raise ValueError(f"bias must satisfy 0 < p < 0.5, got {p}")
    entries, ids_asc, perm = _prep(profile)
    n = len(ids_asc)
    if n > 12:
        raise ValueError(f"exhaustive oracle limited to 12 agents, got {n}")
    perm_list = perm.tolist()
    pow_p = [p**i for i in range(n + 1)]
    pow_c = [(1.0 - 2.0 * p) ** i for i in range(n + 1)]
    expected = 0.0
    for assign in product((0, 1, 2), repeat=n):
        labels = [assign[j] for j in perm_list]
        _, payments = _mechanism_core(entries, labels, env.units, bump_enabled, tie)
        coins = sum(1 for g in assign if g != 2)
        weight = pow_p[coins] * pow_c[n - coins]
        expected += weight * sum(payments.values())
    return expected


# ---------------------------------------------------------------------------
# deviation scan


def deviation_grid(profile: ValuationProfile) -> list[Money]:
    """Candidate misreports: every bid, zero, top bid plus one, each +-1.

    Allocation, orientation, reserve, and payment changes all happen when a
    bid crosses another bid (or zero), so scanning these values and their
    unit neighbors covers every behavioral region of the mechanism.
    """
    base = {0}
    top = 0
    for _, val in profile.entries:
        base.add(val)
        top = max(top, val)
    base.add(top + 1)
    grid = set()
    for b in base:
        for x in (b - 1, b, b + 1):
            if x >= 0:
                grid.add(x)
    return sorted(grid)


def ic_scan(
    bids: ValuationProfile,
    env: Environment,
    assignment: PartitionAssignment,
    bump_enabled: bool = True,
    tie: TieRule = "smallest",
) -> list[IcViolation]:
    """Scan every agent and every grid misreport for a utility gain.

    The group assignment stays fixed while the full mechanism (orientation
    swap included) reruns on each deviated profile.  Utilities are exact
    integers; any strict gain is returned as a violation.
    """
    entries = [(val, aid) for aid, val in bids.sorted_entries]
    code_of = {aid: _GROUP_CODE[assignment.group_of(aid)] for aid, _ in bids.entries}
    labels = [code_of[aid] for _, aid in entries]
    served, payments = _mechanism_core(entries, labels, env.units, bump_enabled, tie)
    grid = deviation_grid(bids)

    violations: list[IcViolation] = []
    for aid, value in bids.entries:
        truthful = value - payments[aid] if aid in served else 0
        rest = [e for e in entries if e[1] != aid]
        for dev in grid:
            if dev == value:
                continue
            dev_entries = sorted(rest + [(dev, aid)], key=lambda e: (-e[0], e[1]))
            dev_labels = [code_of[a] for _, a in dev_entries]
            dev_served, dev_payments = _mechanism_core(
                dev_entries, dev_labels, env.units, bump_enabled, tie
            )
            gained = value - dev_payments[aid] if aid in dev_served else 0
            if gained > truthful:
                violations.append(
                    IcViolation(
                        aid,
                        assignment.group_of(aid),
                        value,
                        dev,
                        truthful,
                        gained,
                    )
                )
    return violations


# ---------------------------------------------------------------------------
# profile generators


def generate_profile(
    kind: ProfileKind, n: int, seed: int, scale: int = 1000
) -> ValuationProfile:
    """Deterministic test profiles.

    equal_revenue: value i is scale // i, so every prefix earns about the
    same; uniform: integers in [1, scale]; bimodal: each agent is low
    ([1, scale/10]) or high ([9 scale/10, scale]) with equal odds; constant:
    every value is scale.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if scale < 1:
        raise ValueError(f"need scale >= 1, got {scale}")
    rng = RandomSource(seed).stream(0)
    if kind == "equal_revenue":
        values = [scale // i for i in range(1, n + 1)]
    elif kind == "uniform":
        values = [int(x) for x in rng.integers(1, scale + 1, size=n)]
    elif kind == "bimodal":
        low_hi = max(1, scale // 10)
        high_lo = max(low_hi, 9 * scale // 10)
        low = rng.integers(1, low_hi + 1, size=n)
        high = rng.integers(high_lo, scale + 1, size=n)
        pick_high = rng.random(n) < 0.5
        values = [int(h if hi else lo) for lo, h, hi in zip(low, high, pick_high)]
    elif kind == "constant":
        values = [scale] * n
    else:
        raise ValueError(f"unknown profile kind {kind!r}")
    return make_profile(values)


def default_battery() -> list[tuple[str, ValuationProfile, Environment]]:
    """Fixed battery covering all generator kinds, n in {5, 10, 50}, and
    unit counts 1, n/2, n."""
    specs = [
        ("equal_revenue", 5, 1, 3600, 101),
        ("constant", 5, 3, 100, 102),
        ("uniform", 10, 5, 1000, 103),
        ("bimodal", 10, 10, 1000, 104),
        ("equal_revenue", 50, 25, 3600, 105),
        ("uniform", 50, 50, 1000, 106),
    ]
    battery = []
    for kind, n, k, scale, seed in specs:
        label = f"{kind}-n{n}-k{k}"
        battery.append((label, generate_profile(kind, n, seed, scale), Environment(k)))
    return battery


# ---------------------------------------------------------------------------
# checks


def check_ruin(p: float, n: int, trials: int, seed: int) -> dict:
    """Walk simulation against the dynamic program and the closed form.

    Simulates `trials` biased walks of n steps; ruin means the running
    position drops below the start.  The conditional variant fixes the first
    of n steps forward (start at one, n-1 random steps) and reuses the same
    draws.  PASS needs empirical within 3 sigma of the dynamic program and
    the dynamic program at or below the closed form.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    bounds = ruin_bounds(p)
    dp_u = ruin_probability_finite(p, n, start=0)
    dp_c = ruin_probability_finite(p, n - 1, start=1)
    source = RandomSource(seed)
    ruined_u = 0
    ruined_c = 0
    done = 0
    chunk_index = 0
    while done < trials:
        m = min(_CHUNK, trials - done)
        rng = source.stream(chunk_index)
        back = rng.random((m, n)) < p
        steps = np.where(back, -1, 1).astype(np.int8)
        walk = np.cumsum(steps, axis=1, dtype=np.int16)
        ruined_u += int(np.count_nonzero(walk.min(axis=1) <= -1))
        if n >= 2:
            ruined_c += int(np.count_nonzero(walk[:, : n - 1].min(axis=1) <= -2))
        done += m
        chunk_index += 1
    emp_u = ruined_u / trials
    emp_c = ruined_c / trials
    se_u = math.sqrt(dp_u * (1.0 - dp_u) / trials)
    se_c = math.sqrt(dp_c * (1.0 - dp_c) / trials)
    ok = (
        abs(emp_u - dp_u) <= 3 * se_u + 1e-12
        and abs(emp_c - dp_c) <= 3 * se_c + 1e-12
        and dp_u <= bounds.q + 1e-12
        and dp_c <= bounds.q_conditional + 1e-12
    )
    return {
        "p": p,
        "n": n,
        "trials": trials,
        "empirical": emp_u,
        "empirical_conditional": emp_c,
        "dp": dp_u,
        "dp_conditional": dp_c,
        "closed_form": bounds.q,
        "closed_form_conditional": bounds.q_conditional,
        "pass": bool(ok),
    }


def check_sampling(
    profile: ValuationProfile, env: Environment, p: float, trials: int, seed: int
) -> dict:
    """Random-subset benchmark selection check.

    Draws subsets with inclusion probability p and verifies, per draw, that
    the benchmark of the subset is at least the subset's contribution to the
    full benchmark (exact), and on average that the mean contribution equals
    p times the full benchmark and the mean subset benchmark is no lower,
    both within 3 sigma.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    best = envy_free_optimal(profile, env)
    entries, ids_asc, perm = _prep(profile)
    n = len(ids_asc)
    units = env.units
    sorted_vals = [val for val, _ in entries]
    win_sorted = np.array(
        [1 if aid in best.winners else 0 for _, aid in entries], dtype=np.int64
    )
    source = RandomSource(seed)
    tot_c = 0
    tot_c_sq = 0
    tot_e = 0
    tot_e_sq = 0
    pointwise_failures = 0
    done = 0
    chunk_index = 0
    while done < trials:
        m = min(_CHUNK, trials - done)
        rng = source.stream(chunk_index)
        mask = rng.random((m, n)) < p
        mask_sorted = mask[:, perm]
        contrib = (mask_sorted @ win_sorted) * best.uniform_price
        for row in range(m):
            rev = 0
            j = 0
            for col in range(n):
                if mask_sorted[row, col]:
                    j += 1
                    if j > units:
                        break
                    rev = max(rev, j * sorted_vals[col])
            c = int(contrib[row])
            if rev < c:
                pointwise_failures += 1
            tot_c += c
            tot_c_sq += c * c
            tot_e += rev
            tot_e_sq += rev * rev
        done += m
        chunk_index += 1
    sum_c = _summary(tot_c, tot_c_sq, trials)
    sum_e = _summary(tot_e, tot_e_sq, trials)
    target = p * best.revenue
    ok = (
        pointwise_failures == 0
        and abs(sum_c.mean - target) <= 3 * sum_c.stderr + 1e-12
        and sum_e.mean >= target - 3 * sum_e.stderr - 1e-12
    )
    return {
        "p": p,
        "trials": trials,
        "benchmark": best.revenue,
        "expected_contribution": target,
        "mean_contribution": sum_c.mean,
        "stderr_contribution": sum_c.stderr,
        "mean_subset_benchmark": sum_e.mean,
        "stderr_subset_benchmark": sum_e.stderr,
        "pointwise_failures": pointwise_failures,
        "pass": bool(ok),
    }


def check_extractor(instances: int, seed: int) -> dict:
    """Extractor contract fuzz: dominance and positive commitment imply
    revenue at least the commitment; otherwise nobody is served.  Exact,
    zero tolerance."""
    if instances < 1:
        raise ValueError(f"instances must be >= 1, got {instances}")
    rng = RandomSource(seed).stream(0)
    served_cases = 0
    rejected_cases = 0
    failures = 0
    for _ in range(instances):
        nt = int(rng.integers(1, 9))
        nb = int(rng.integers(1, 9))
        k = int(rng.integers(1, 9))
        target = make_profile([int(x) for x in rng.integers(0, 31, size=nt)])
        if rng.random() < 0.5:
            # dominate by construction: cover each target position, extend
            tvals = sorted(
                (int(x) for x in rng.integers(0, 31, size=nt)), reverse=True
            )
            target = make_profile(tvals)
            bvals = [
                (tvals[i] if i < nt else 0) + int(rng.integers(0, 5))
                for i in range(nb)
            ]
            bids = make_profile(bvals)
        else:
            bids = make_profile([int(x) for x in rng.integers(0, 31, size=nb)])
        env = Environment(k)
        params = extraction_params(target, env)
        outcome = profit_extract(target, bids, env)
        should_serve = dominates(bids, target) and params.target_revenue > 0
        if should_serve:
            served_cases += 1
            if not outcome.served:
                failures += 1
            elif outcome.revenue < params.target_revenue:
                failures += 1
            elif len(outcome.served) > k:
                failures += 1
            elif any(
                outcome.payments[aid] < params.reserve
                or outcome.payments[aid] > bids.value_of(aid)
                for aid in outcome.served
            ):
                failures += 1
        else:
            rejected_cases += 1
            if outcome.served:
                failures += 1
    return {
        "instances": instances,
        "served_cases": served_cases,
        "rejected_cases": rejected_cases,
        "failures": failures,
        "pass": failures == 0,
    }


_REGRESSION_VALUES = [80, 40, 70, 90, 50]
_REGRESSION_GROUPS = ["A", "A", "B", "C", "C"]


def regression_instance() -> tuple[ValuationProfile, Environment, PartitionAssignment]:
    """Fixed instance where the bump and the smallest-count tie rule matter."""
    profile = make_profile(_REGRESSION_VALUES)
    labels = {aid: g for (aid, _), g in zip(profile.entries, _REGRESSION_GROUPS)}
    return profile, Environment(5), PartitionAssignment(labels)


def check_ic(instances: int, seed: int, n_max: int = 5) -> dict:
    """Deviation scan over random instances, every assignment each.

    Also replays the fixed regression instance: disabling the payment bump
    and switching the benchmark tie rule to largest must expose a profitable
    deviation, while the shipped settings must not.
    """
    if instances < 1:
        raise ValueError(f"instances must be >= 1, got {instances}")
    if not (2 <= n_max <= 8):
        raise ValueError(f"n_max must be in [2, 8], got {n_max}")
    rng = RandomSource(seed).stream(0)
    assignments = 0
    deviations = 0
    violations: list[IcViolation] = []
    for _ in range(instances):
        n = int(rng.integers(2, n_max + 1))
        values = [int(x) for x in rng.integers(0, 13, size=n)]
        k = int(rng.integers(1, n + 1))
        profile = make_profile(values)
        env = Environment(k)
        ids = [aid for aid, _ in profile.entries]
        # every bid sits on the grid, so each agent skips exactly one point
        grid_size = n * (len(deviation_grid(profile)) - 1)
        for assign in product("ABC", repeat=n):
            assignment = PartitionAssignment(dict(zip(ids, assign)))
            found = ic_scan(profile, env, assignment)
            violations.extend(found)
            assignments += 1
            deviations += grid_size
    reg_profile, reg_env, reg_assignment = regression_instance()
    broken = ic_scan(
        reg_profile, reg_env, reg_assignment, bump_enabled=False, tie="largest"
    )
    clean = ic_scan(reg_profile, reg_env, reg_assignment)
    ok = not violations and len(broken) >= 1 and not clean
    return {
        "instances": instances,
        "assignments": assignments,
        "deviations": deviations,
        "violations": [
            {
                "agent_id": v.agent_id,
                "group": v.group,
                "true_value": v.true_value,
                "deviation_bid": v.deviation_bid,
                "truthful_utility": v.truthful_utility,
                "deviation_utility": v.deviation_utility,
            }
            for v in violations[:20]
        ],
        "violation_count": len(violations),
        "regression_broken_violations": len(broken),
        "regression_clean_violations": len(clean),
        "pass": bool(ok),
    }


def check_bounds(
    profile: ValuationProfile, env: Environment, p: float, trials: int, seed: int
) -> dict:
    """Mean revenue against the three revenue guarantees.

    Rows: r1 times the benchmark without the top entry; r2 times the second
    value (guaranteed from five agents up); benchmark of the top-lowered
    profile divided by the combined ratio (same guard).  A row passes when
    the mean is no more than 3 sigma below its bound; inapplicable rows are
    reported but do not gate."""
    n = profile.size
    factors = approx_factors(p)
    summary = run_trials(
        SimConfig(profile, env, SamplingBias(p), trials, seed)
    )
    efo_minus = (
        envy_free_optimal(drop_highest(profile), env).revenue if n >= 1 else 0
    )
    second = profile.sorted_view[1] if n >= 2 else 0
    efo_capped = envy_free_optimal(lower_highest_to_second(profile), env).revenue
    rows = []
    overall = True
    for name, bound, applicable in (
        ("r1_x_benchmark_minus_top", factors.r1 * efo_minus, True),
        ("r2_x_second_value", factors.r2 * second, n >= 5),
        ("benchmark_capped_over_ratio", efo_capped / factors.ratio, n >= 5),
    ):
        ok = summary.mean >= bound - 3 * summary.stderr - 1e-9
        rows.append(
            {
                "row": name,
                "bound": bound,
                "mean": summary.mean,
                "stderr": summary.stderr,
                "applicable": bool(applicable),
                "pass": bool(ok),
            }
        )
        if applicable and not ok:
            overall = False
    return {
        "n": n,
        "units": env.units,
        "p": p,
        "trials": trials,
        "mean": summary.mean,
        "stderr": summary.stderr,
        "rows": rows,
        "pass": overall,
    }


# ---------------------------------------------------------------------------
# verify driver


_DEFAULTS = {
    "ruin_trials": 1_000_000,
    "sampling_trials": 10_000,
    "extractor_instances": 100_000,
    "ic_instances": 200,
    "bounds_trials": 100_000,
}

VERIFY_CHECKS = ("ruin", "sampling", "extractor", "ic", "bounds")


def run_verify(
    which: str,
    seed: int,
    trials: int | None = None,
    instances: int | None = None,
) -> dict:
    """Run one named check suite (or `all`) and build a JSON-ready report.

    `trials` overrides the Monte Carlo counts (walks, sampling draws,
    auction trials); `instances` overrides the fuzz instance counts.  The
    report is deterministic for a given seed and sizes.
    """
    if which != "all" and which not in VERIFY_CHECKS:
        raise ValueError(f"unknown check {which!r}")
    selected = VERIFY_CHECKS if which == "all" else (which,)
    sizes = dict(_DEFAULTS)
    if trials is not None:
        if trials < 1:
            raise ValueError(f"trials must be >= 1, got {trials}")
        sizes["ruin_trials"] = trials
        sizes["sampling_trials"] = trials
        sizes["bounds_trials"] = trials
    if instances is not None:
        if instances < 1:
            raise ValueError(f"instances must be >= 1, got {instances}")
        sizes["extractor_instances"] = instances
        sizes["ic_instances"] = instances

    checks: dict[str, object] = {}
    overall = True
    if "ruin" in selected:
        rows = [
            check_ruin(p, 200, sizes["ruin_trials"], seed) for p in (0.10, 0.26, 0.40)
        ]
        ok = all(r["pass"] for r in rows)
        checks["ruin"] = {"rows": rows, "pass": ok}
        overall &= ok
    if "sampling" in selected:
        rows = []
        for label, profile, env in default_battery():
            row = check_sampling(profile, env, 0.26, sizes["sampling_trials"], seed)
            row["profile"] = label
            rows.append(row)
        ok = all(r["pass"] for r in rows)
        checks["sampling"] = {"rows": rows, "pass": ok}
        overall &= ok
    if "extractor" in selected:
        res = check_extractor(sizes["extractor_instances"], seed)
        checks["extractor"] = res
        overall &= res["pass"]
    if "ic" in selected:
        res = check_ic(sizes["ic_instances"], seed)
        checks["ic"] = res
        overall &= res["pass"]
    if "bounds" in selected:
        rows = []
        for label, profile, env in default_battery():
            row = check_bounds(profile, env, 0.26, sizes["bounds_trials"], seed)
            row["profile"] = label
            rows.append(row)
        ok = all(r["pass"] for r in rows)
        checks["bounds"] = {"rows": rows, "pass": ok}
        overall &= ok
    return {"seed": seed, "checks": checks, "pass": bool(overall)}
