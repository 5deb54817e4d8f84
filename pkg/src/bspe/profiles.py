"""Valuation profiles, environments, and outcomes with exact integer money.

All bids, values, prices, and payments are non-negative integers.  Every
comparison and sum on money is exact; floats appear nowhere in this module.
Profiles keep a canonical sorted view (non-increasing value, ties broken by
ascending agent id) that the benchmark and the mechanism both rely on.

Padding entries carry negative agent ids.  They act as zero bids when
profiles of different lengths are compared position by position, and they
are never served and never pay.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

# Money is a plain int, restricted to >= 0 at every construction boundary.
Money = int


def check_money(value: object, what: str = "value") -> Money:
    """Validate a single money amount and return it as a plain int."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{what} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{what} must be non-negative, got {value}")
    return int(value)


def is_padding(agent_id: int) -> bool:
    """Padding entries are the ones with negative agent ids."""
    return agent_id < 0


@dataclass(frozen=True)
class Environment:
    """A downward-closed multi-unit environment: up to `units` agents served."""

    units: int

    def __post_init__(self) -> None:
        if isinstance(self.units, bool) or not isinstance(self.units, int):
            raise ValueError(f"units must be an integer, got {self.units!r}")
        if self.units < 1:
            raise ValueError(f"units must be >= 1, got {self.units}")


@dataclass(frozen=True)
class ValuationProfile:
    """An immutable multiset of (agent_id, value) entries.

    `entries` preserves construction order; `sorted_entries` is the canonical
    non-increasing view used everywhere a rank or a tie matters.
    """

    entries: tuple[tuple[int, Money], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for agent_id, value in self.entries:
            if isinstance(agent_id, bool) or not isinstance(agent_id, int):
                raise ValueError(f"agent id must be an integer, got {agent_id!r}")
            check_money(value, f"value of agent {agent_id}")
            if agent_id in seen:
                raise ValueError(f"duplicate agent id {agent_id}")
            seen.add(agent_id)

    @cached_property
    def sorted_entries(self) -> tuple[tuple[int, Money], ...]:
        """Entries sorted by non-increasing value, ties by ascending agent id."""
        return tuple(
            (aid, val)
            for val, aid in sorted(
                ((val, aid) for aid, val in self.entries),
                key=lambda pair: (-pair[0], pair[1]),
            )
        )

    @cached_property
    def sorted_view(self) -> tuple[Money, ...]:
        """Values in non-increasing order."""
        return tuple(val for _, val in self.sorted_entries)

    @cached_property
    def values_by_id(self) -> Mapping[int, Money]:
        return {aid: val for aid, val in self.entries}

    @property
    def size(self) -> int:
        return len(self.entries)

    @cached_property
    def real_ids(self) -> frozenset[int]:
        """Ids of non-padding agents."""
        return frozenset(aid for aid, _ in self.entries if not is_padding(aid))

    def value_of(self, agent_id: int) -> Money:
        try:
            return self.values_by_id[agent_id]
        except KeyError:
            raise ValueError(f"unknown agent id {agent_id}") from None

    def subprofile(self, agent_ids: Iterable[int]) -> "ValuationProfile":
        """Restriction to the given agent ids (order of `entries` preserved)."""
        wanted = set(agent_ids)
        unknown = wanted - {aid for aid, _ in self.entries}
        if unknown:
            raise ValueError(f"unknown agent ids {sorted(unknown)}")
        return ValuationProfile(
            tuple((aid, val) for aid, val in self.entries if aid in wanted)
        )

    def replace_value(self, agent_id: int, value: Money) -> "ValuationProfile":
        """Copy of the profile with one agent's value replaced."""
        check_money(value, f"value of agent {agent_id}")
        if agent_id not in self.values_by_id:
            raise ValueError(f"unknown agent id {agent_id}")
        return ValuationProfile(
            tuple(
                (aid, value if aid == agent_id else val) for aid, val in self.entries
            )
        )


def make_profile(
    values: Sequence[int], agent_ids: Sequence[int] | None = None
) -> ValuationProfile:
    """Build a profile from values, assigning ids 1..n when none are given.

    Supplied ids must be unique non-negative integers; negative ids are
    reserved for padding entries.
    """
    if agent_ids is None:
        agent_ids = range(1, len(values) + 1)
    agent_ids = list(agent_ids)
    if len(agent_ids) != len(values):
        raise ValueError(
            f"got {len(values)} values but {len(agent_ids)} agent ids"
        )
    for aid in agent_ids:
        if isinstance(aid, bool) or not isinstance(aid, int):
            raise ValueError(f"agent id must be an integer, got {aid!r}")
        if aid < 0:
            raise ValueError(f"agent ids must be >= 0 (negative ids mark padding), got {aid}")
    return ValuationProfile(tuple(zip(agent_ids, (check_money(v) for v in values))))


def pad(profile: ValuationProfile, length: int) -> ValuationProfile:
    """Extend a profile with zero-value padding entries up to `length`.

    Padding ids are fresh negative integers, so they are distinguishable from
    real agents, sort after nothing (value 0 puts them at the bottom of the
    sorted view), and are never served.
    """
    if length < profile.size:
        raise ValueError(
            f"cannot pad to length {length}: profile already has {profile.size} entries"
        )
    lowest = min((aid for aid, _ in profile.entries), default=0)
    next_pad = min(lowest, 0) - 1
    extra = []
    for offset in range(length - profile.size):
        extra.append((next_pad - offset, 0))
    return ValuationProfile(profile.entries + tuple(extra))


def dominates(profile: ValuationProfile, other: ValuationProfile) -> bool:
    """Position-wise comparison of sorted views, shorter side read as zeros.

    True when the i-th highest value of `profile` is >= the i-th highest value
    of `other` for every position i.
    """
    left = profile.sorted_view
    right = other.sorted_view
    for i in range(max(len(left), len(right))):
        lv = left[i] if i < len(left) else 0
        rv = right[i] if i < len(right) else 0
        if lv < rv:
            return False
    return True


def lower_highest_to_second(profile: ValuationProfile) -> ValuationProfile:
    """Copy of the profile with the top value lowered to the second highest.

    The single-agent case maps to a zero value; the empty profile is returned
    unchanged.  Ties for the top replace the lowest-id holder (a no-op on the
    multiset of values).
    """
    if profile.size == 0:
        return profile
    top_id, _ = profile.sorted_entries[0]
    second = profile.sorted_view[1] if profile.size >= 2 else 0
    return profile.replace_value(top_id, second)


def drop_highest(profile: ValuationProfile) -> ValuationProfile:
    """Copy of the profile without its highest entry (ties: lowest agent id)."""
    if profile.size == 0:
        raise ValueError("cannot drop the highest entry of an empty profile")
    top_id, _ = profile.sorted_entries[0]
    return ValuationProfile(
        tuple((aid, val) for aid, val in profile.entries if aid != top_id)
    )


@dataclass(frozen=True)
class Outcome:
    """Served agents and their exact payments.

    Invariants: every paying agent is served, payments are non-negative
    integers, and padding entries never appear.  Agents outside `payments`
    pay zero and are unserved.
    """

    served: frozenset[int]
    payments: Mapping[int, Money] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for aid in self.served:
            if is_padding(aid):
                raise ValueError(f"padding entry {aid} cannot be served")
        for aid, pay in self.payments.items():
            if aid not in self.served:
                raise ValueError(f"agent {aid} pays {pay} but is not served")
            check_money(pay, f"payment of agent {aid}")

    @property
    def revenue(self) -> Money:
        return sum(self.payments.values())

    def payment_of(self, agent_id: int) -> Money:
        return self.payments.get(agent_id, 0)


def validate_outcome(
    outcome: Outcome, profile: ValuationProfile, env: Environment
) -> None:
    """Check feasibility and individual rationality against a bid profile."""
    if len(outcome.served) > env.units:
        raise ValueError(
            f"{len(outcome.served)} agents served but only {env.units} units"
        )
    for aid in outcome.served:
        bid = profile.value_of(aid)
        pay = outcome.payment_of(aid)
        if pay > bid:
            raise ValueError(f"agent {aid} pays {pay} above bid {bid}")
