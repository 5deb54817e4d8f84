"""Envy-free optimal revenue benchmark for multi-unit environments.

The benchmark sells to the j highest-valued agents at the uniform price equal
to the j-th highest value, choosing j (up to the unit supply) to maximize
revenue.  Winners do not envy losers and losers do not envy winners at that
price, and no envy-free uniform-price outcome earns more.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from .profiles import Environment, Money, ValuationProfile

TieRule = Literal["smallest", "largest"]


@dataclass(frozen=True)
class EnvyFreeSolution:
    """Optimal envy-free uniform-price sale: count, price, revenue, winners."""

    winner_count: int
    uniform_price: Money
    revenue: Money
    winners: frozenset[int]


def optimal_winner_count(
    values: tuple[Money, ...], units: int, tie: TieRule = "smallest"
) -> int:
    """Revenue-maximizing number of winners over a sorted value tuple.

    Returns 0 for an empty tuple.  With `tie="smallest"` the least maximizing
    count is chosen; `"largest"` picks the greatest (used only by the
    truthfulness scan to probe the alternative rule).
    """
    limit = min(units, len(values))
    best_j = 0
    best_rev = -1
    for j in range(1, limit + 1):
        rev = j * values[j - 1]
        if rev > best_rev or (tie == "largest" and rev == best_rev):
            best_rev = rev
            best_j = j
    return best_j


def envy_free_optimal(
    profile: ValuationProfile, env: Environment, tie: TieRule = "smallest"
) -> EnvyFreeSolution:
    """Compute the envy-free optimal uniform-price sale.

    Winners are the `winner_count` highest entries under the canonical tie
    order.  An all-zero profile sells one unit at price zero; an empty
    profile sells nothing.
    """
    values = profile.sorted_view
    j = optimal_winner_count(values, env.units, tie)
    if j == 0:
        return EnvyFreeSolution(0, 0, 0, frozenset())
    price = values[j - 1]
    winners = frozenset(aid for aid, _ in profile.sorted_entries[:j])
    return EnvyFreeSolution(j, price, j * price, winners)


def envy_free_contribution(
    profile: ValuationProfile, env: Environment, subset: Iterable[int]
) -> Money:
    """Revenue share of `subset`: winners in the subset times the uniform price."""
    members = set(subset)
    known = {aid for aid, _ in profile.entries}
    unknown = members - known
    if unknown:
        raise ValueError(f"subset contains unknown agent ids {sorted(unknown)}")
    best = envy_free_optimal(profile, env)
    return len(best.winners & members) * best.uniform_price


def envy_free_bruteforce(profile: ValuationProfile, env: Environment) -> Money:
    """Independent benchmark oracle: enumerate every (count, price) pair.

    Tries each winner count j and each candidate uniform price drawn from the
    profile values, keeps the pairs where the j highest agents all meet the
    price and no loser exceeds it, and returns the best revenue found.
    Guarded to small profiles; quadratic in size.
    """
    if profile.size > 12:
        raise ValueError(f"brute force limited to 12 entries, got {profile.size}")
    values = profile.sorted_view
    best: Money = 0
    for j in range(1, min(env.units, len(values)) + 1):
        for price in values:
            if price > values[j - 1]:
                continue  # some winner would pay above value
            if j < len(values) and price < values[j]:
                continue  # some loser would envy the winners
            best = max(best, j * price)
    return best
