"""The biased-sampling profit-extraction auction.

Each agent lands in group A or B with probability p each, otherwise in C.
Groups A and B are relabeled if needed so that the highest bid in A is at
least the highest bid in B (a tie keeps the labels).  B becomes the sample;
A and C form the market.  Both sides are zero-padded to a common length and
the market is sold by the profit extractor with the sample as target.

Payment bump: when the extractor serves the top bidder of post-swap A and
removing her bid would flip the relabeling decision, her payment is raised
to the sample's highest bid.  The bump is what stops a coin-group agent
from steering the orientation with her report: without it, a sample agent
could overbid to flip the orientation and buy into the market below her own
value, and tie cases would let the market top duck the floor.

Fallback: when the extractor serves nobody, the overall highest bidder is
served at the second-highest overall bid (zero if she is alone).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .benchmark import TieRule
from .extractor import _extract_core
from .profiles import (
    Environment,
    Money,
    Outcome,
    ValuationProfile,
    is_padding,
)

Group = Literal["A", "B", "C"]
_GROUP_CODE: dict[str, int] = {"A": 0, "B": 1, "C": 2}
_CODE_GROUP: tuple[str, ...] = ("A", "B", "C")


@dataclass(frozen=True)
class SamplingBias:
    """Probability p of joining each of the two coin groups; 0 < p < 1/2."""

    p: float

    def __post_init__(self) -> None:
        if not (0.0 < self.p < 0.5):
            raise ValueError(f"bias must satisfy 0 < p < 0.5, got {self.p}")


@dataclass(frozen=True)
class PartitionAssignment:
    """Group label for every agent id."""

    labels: Mapping[int, Group]

    def __post_init__(self) -> None:
        for aid, group in self.labels.items():
            if group not in _GROUP_CODE:
                raise ValueError(f"agent {aid} has unknown group {group!r}")

    def group_of(self, agent_id: int) -> Group:
        return self.labels[agent_id]

    def members(self, group: Group) -> frozenset[int]:
        return frozenset(aid for aid, g in self.labels.items() if g == group)


@dataclass(frozen=True)
class Orientation:
    """Post-swap split: market ids, sample ids, and whether A/B were swapped."""

    market_ids: frozenset[int]
    sample_ids: frozenset[int]
    swapped: bool


def partition(
    agent_ids: Iterable[int], bias: SamplingBias, rng: np.random.Generator
) -> PartitionAssignment:
    """Draw one group label per agent, in ascending agent id order.

    Each agent independently joins A with probability p, B with probability
    p, and C otherwise.  The draw order is fixed so a given stream always
    produces the same assignment.
    """
    ids = sorted(agent_ids)
    for aid in ids:
        if is_padding(aid):
            raise ValueError(f"padding entry {aid} cannot be partitioned")
    draws = rng.random(len(ids))
    labels: dict[int, Group] = {}
    for aid, u in zip(ids, draws):
        if u < bias.p:
            labels[aid] = "A"
        elif u < 2 * bias.p:
            labels[aid] = "B"
        else:
            labels[aid] = "C"
    return PartitionAssignment(labels)


def orient(
    assignment: PartitionAssignment, bids: ValuationProfile
) -> Orientation:
    """Swap A and B if B holds the strictly higher maximum bid.

    The maximum of an empty group is zero and a tie keeps the labels.  The
    market is post-swap A plus C; the sample is post-swap B.
    """
    max_a = max_b = 0
    for aid, val in bids.sorted_entries:
        group = assignment.group_of(aid)
        if group == "A":
            max_a = max(max_a, val)
        elif group == "B":
            max_b = max(max_b, val)
    swapped = max_b > max_a
    sample_group: Group = "A" if swapped else "B"
    sample = assignment.members(sample_group)
    market = frozenset(assignment.labels) - sample
    return Orientation(market, sample, swapped)


def _sorted_entries(bids: ValuationProfile) -> list[tuple[Money, int]]:
    return [(val, aid) for aid, val in bids.sorted_entries]


def _mechanism_core(
    entries: Sequence[tuple[Money, int]],
    labels: Sequence[int],
    units: int,
    bump_enabled: bool = True,
    tie: TieRule = "smallest",
) -> tuple[frozenset[int], dict[int, Money]]:
    """Full auction over pre-sorted entries with fixed group labels.

    `entries` is (value, id) sorted by (-value, id); `labels[i]` is the group
    code (0=A, 1=B, 2=C) of `entries[i]`.  Shared by the public runners, the
    Monte Carlo loop, the exhaustive-assignment oracle, and the deviation
    scan, so every caller exercises exactly the same mechanism.
    """
    max_a = max_b = 0
    seen_a = seen_b = False
    for (val, _), lbl in zip(entries, labels):
        if lbl == 0 and not seen_a:
            max_a, seen_a = val, True
        elif lbl == 1 and not seen_b:
            max_b, seen_b = val, True
        if seen_a and seen_b:
            break
    swapped = max_b > max_a
    sample_code = 0 if swapped else 1

    market: list[tuple[Money, int]] = []
    target_vals: list[Money] = []
    for entry, lbl in zip(entries, labels):
        if lbl == sample_code:
            target_vals.append(entry[0])
        else:
            market.append(entry)

    served, payments, _ = _extract_core(tuple(target_vals), market, units, tie)

    if served and bump_enabled:
        # Price floor for the coin agent whose bid decides the orientation.
        # If removing the served top bidder of the post-swap first coin
        # group would flip the swap decision, her payment rises to the
        # sample's highest bid.  Removal mirrors the swap rule's asymmetry:
        # unswapped needs the sample max strictly above her group's second
        # bid, swapped needs only a tie.  Without the floor, an agent could
        # flip the orientation in her favor and pay less than her value, or
        # duck below a groupmate to shed the floor.
        post_a_code = 1 - sample_code
        top_a = None
        own_second = 0
        sample_max = 0
        seen_sample = False
        for (val, aid), lbl in zip(entries, labels):
            if lbl == post_a_code:
                if top_a is None:
                    top_a = aid
                else:
                    own_second = max(own_second, val)
            elif lbl == sample_code and not seen_sample:
                sample_max, seen_sample = val, True
        if top_a is not None and top_a in payments:
            pivotal = sample_max > own_second or (
                swapped and sample_max == own_second
            )
            if pivotal:
                payments[top_a] = max(payments[top_a], sample_max)

    if not served and entries and units >= 1:
        top_id = entries[0][1]
        price = entries[1][0] if len(entries) >= 2 else 0
        return frozenset((top_id,)), {top_id: price}

    return frozenset(served), payments


def _labels_for(
    bids: ValuationProfile, assignment: PartitionAssignment
) -> list[int]:
    ids = bids.real_ids
    if len(ids) != bids.size:
        raise ValueError("bid profile must not contain padding entries")
    labeled = set(assignment.labels)
    if labeled != ids:
        raise ValueError(
            f"assignment covers {sorted(labeled)} but profile has {sorted(ids)}"
        )
    return [_GROUP_CODE[assignment.group_of(aid)] for aid, _ in bids.sorted_entries]


def run_on_assignment(
    bids: ValuationProfile,
    env: Environment,
    assignment: PartitionAssignment,
    bump_enabled: bool = True,
    tie: TieRule = "smallest",
) -> Outcome:
    """Deterministic auction outcome for a fixed group assignment."""
    labels = _labels_for(bids, assignment)
    served, payments = _mechanism_core(
        _sorted_entries(bids), labels, env.units, bump_enabled, tie
    )
    return Outcome(served, payments)


def run_auction(
    bids: ValuationProfile,
    env: Environment,
    bias: SamplingBias,
    rng: np.random.Generator,
    bump_enabled: bool = True,
    tie: TieRule = "smallest",
) -> Outcome:
    """Partition with the given stream, then run the fixed-assignment auction."""
    assignment = partition((aid for aid, _ in bids.entries), bias, rng)
    return run_on_assignment(bids, env, assignment, bump_enabled, tie)


def vickrey_single_item(bids: ValuationProfile) -> Outcome:
    """Second-price sale of one unit; the reference for the fallback step."""
    if bids.size == 0:
        return Outcome(frozenset(), {})
    entries = _sorted_entries(bids)
    top_id = entries[0][1]
    if is_padding(top_id):
        return Outcome(frozenset(), {})
    price = entries[1][0] if len(entries) >= 2 else 0
    return Outcome(frozenset((top_id,)), {top_id: price})
