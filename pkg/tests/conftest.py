"""Shared test oracles, deliberately independent of the library internals.

The critical-payment oracle re-runs the allocation for every integer bid
instead of trusting the closed form; the walk oracle enumerates every path
with exact rationals instead of trusting the dynamic program.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from bspe import Environment, ValuationProfile, extractor_allocation, make_profile


def critical_payment_bruteforce(
    target: ValuationProfile,
    bids: ValuationProfile,
    env: Environment,
    agent_id: int,
    tie: str = "smallest",
) -> int | None:
    """Smallest integer bid with which `agent_id` is served, scanning from 0.

    Service is monotone in the agent's own bid, so the first served bid is
    the threshold.  Returns None when no bid up to the scan ceiling wins.
    """
    ceiling = max(
        [val for _, val in bids.entries] + list(target.sorted_view) + [0]
    ) + 2
    for b in range(0, ceiling + 1):
        trial = bids.replace_value(agent_id, b)
        if agent_id in extractor_allocation(target, trial, env, tie):
            return b
    return None


def ruin_bruteforce(p_num: int, p_den: int, steps: int, start: int) -> Fraction:
    """Exact ruin probability by enumerating all 2^steps walks."""
    pb = Fraction(p_num, p_den)
    pf = 1 - pb
    total = Fraction(0)
    for path in product((-1, 1), repeat=steps):
        weight = Fraction(1)
        pos = start
        ruined = False
        for step in path:
            weight *= pb if step == -1 else pf
            pos += step
            if pos < 0:
                ruined = True
        if ruined:
            total += weight
    return total


@pytest.fixture
def small_profile() -> ValuationProfile:
    return make_profile([9, 7, 7, 3, 0])
