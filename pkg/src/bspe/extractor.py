"""Profit extraction from a bid profile against a target profile.

Given a target profile, the extractor commits to the target's envy-free
optimal revenue R = j* x r, where j* is the optimal winner count and r the
matching uniform price.  It serves nobody unless the bid profile dominates
the target position by position; when it does, it runs a k-unit Vickrey sale
with reserve r: the up-to-k highest bidders at or above r win, and each
winner pays the lowest bid that would still have won against the others.
Dominance guarantees at least j* bidders clear the reserve, so the extracted
revenue is at least R whenever anyone is served.

Critical payments have a closed form.  A winner must stay above the reserve,
must keep her rank among the other bids, and must keep the combined profile
dominant over the target; each requirement is monotone in her own bid, so
her payment is the largest of the three individual minima.  The dominance
minimum comes from a single backward scan that finds how far her bid can
sink before some target position would be left uncovered by the other bids.
"""

from __future__ import annotations

from dataclasses import dataclass

from .benchmark import TieRule, optimal_winner_count
from .profiles import Environment, Money, Outcome, ValuationProfile, is_padding

# Entries of a sorted bid list: (value, agent_id), non-increasing value,
# ties by ascending id.
SortedBids = list[tuple[Money, int]]


@dataclass(frozen=True)
class ExtractionParams:
    """Reserve, revenue commitment, and winner quota derived from a target."""

    target: ValuationProfile
    reserve: Money
    target_revenue: Money
    winner_quota: int


def extraction_params(
    target: ValuationProfile, env: Environment, tie: TieRule = "smallest"
) -> ExtractionParams:
    """Derive (winner quota, reserve, committed revenue) from the target."""
    values = target.sorted_view
    quota = optimal_winner_count(values, env.units, tie)
    reserve = values[quota - 1] if quota > 0 else 0
    return ExtractionParams(target, reserve, quota * reserve, quota)


def _sorted_bids(profile: ValuationProfile) -> SortedBids:
    return [(val, aid) for aid, val in profile.sorted_entries]


def _extract_core(
    target_vals: tuple[Money, ...],
    market: SortedBids,
    units: int,
    tie: TieRule = "smallest",
) -> tuple[list[int], dict[int, Money], tuple[int, Money, Money]]:
    """Allocation and payments over pre-sorted inputs.

    `target_vals` must be non-increasing; `market` must be sorted by
    (-value, id).  Profiles of unequal length are read as zero-extended.
    Returns (served ids in rank order, payments, (quota, reserve, revenue)).
    """
    length = max(len(target_vals), len(market))
    quota = optimal_winner_count(target_vals, units, tie)
    reserve = target_vals[quota - 1] if quota > 0 else 0
    committed = quota * reserve
    params = (quota, reserve, committed)
    if committed == 0:
        return [], {}, params

    bid_at = [market[i][0] if i < len(market) else 0 for i in range(length)]
    tgt_at = [target_vals[i] if i < len(target_vals) else 0 for i in range(length)]
    for i in range(length):
        if bid_at[i] < tgt_at[i]:
            return [], {}, params

    served: list[int] = []
    for rank, (val, aid) in enumerate(market):
        if val < reserve:
            break  # sorted, and padding bids are zero < reserve
        served.append(rank)
        if len(served) == units:
            break
    if not served:
        return [], {}, params

    # first_gap[i]: smallest i' >= i where the bids shifted up one rank stop
    # covering the target (bid_at[i'+1] < tgt_at[i']); sentinel length-1.
    first_gap = [length - 1] * length
    for i in range(length - 2, -1, -1):
        if bid_at[i + 1] < tgt_at[i]:
            first_gap[i] = i
        else:
            first_gap[i] = first_gap[i + 1]

    n_market = len(market)
    payments: dict[int, Money] = {}
    for rank in served:
        val, aid = market[rank]
        gap = first_gap[rank]
        floor_dom = max(tgt_at[gap], bid_at[gap + 1] if gap + 1 < length else 0)

        floor_rank = 0
        if n_market - 1 >= units:
            # k-th highest rival bid; she must beat (or tie-win) it.
            rival = market[units - 1] if units - 1 < rank else market[units]
            bid = rival[0]
            beaters = 0
            for j, (v2, a2) in enumerate(market):
                if j == rank:
                    continue
                if v2 > bid:
                    beaters += 1
                elif v2 == bid:
                    if a2 < aid:
                        beaters += 1
                else:
                    break
            floor_rank = bid if beaters <= units - 1 else bid + 1

        pay = max(reserve, floor_dom, floor_rank)
        if pay > val:
            raise AssertionError(
                f"critical payment {pay} above winning bid {val} for agent {aid}"
            )
        payments[aid] = pay

    return [market[rank][1] for rank in served], payments, params


def extractor_allocation(
    target: ValuationProfile,
    bids: ValuationProfile,
    env: Environment,
    tie: TieRule = "smallest",
) -> frozenset[int]:
    """Set of served agents: empty unless the bids dominate the target and
    the committed revenue is positive; otherwise the up-to-k highest bidders
    at or above the reserve."""
    served, _, _ = _extract_core(target.sorted_view, _sorted_bids(bids), env.units, tie)
    return frozenset(served)


def critical_payment(
    target: ValuationProfile,
    bids: ValuationProfile,
    env: Environment,
    agent_id: int,
    tie: TieRule = "smallest",
) -> Money:
    """Lowest bid with which `agent_id` would still have been served.

    Raises if the agent is not served under the actual bids.  The payment is
    never below the reserve and never above the agent's own bid.
    """
    served, payments, _ = _extract_core(
        target.sorted_view, _sorted_bids(bids), env.units, tie
    )
    if agent_id not in payments:
        raise ValueError(f"agent {agent_id} is not served")
    return payments[agent_id]


def profit_extract(
    target: ValuationProfile,
    bids: ValuationProfile,
    env: Environment,
    tie: TieRule = "smallest",
) -> Outcome:
    """Run the extractor: dominance-gated reserve sale at critical payments.

    Whenever the outcome serves anyone, its revenue is at least the
    committed revenue of the target.  Padding entries in `bids` are never
    served.
    """
    served, payments, _ = _extract_core(
        target.sorted_view, _sorted_bids(bids), env.units, tie
    )
    assert all(not is_padding(aid) for aid in served)
    return Outcome(frozenset(served), payments)
