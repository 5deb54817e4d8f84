"""Profiles, environments, and outcome validation."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bspe import (
    Environment,
    Outcome,
    ValuationProfile,
    dominates,
    drop_highest,
    is_padding,
    lower_highest_to_second,
    make_profile,
    pad,
    validate_outcome,
)

values_lists = st.lists(st.integers(min_value=0, max_value=50), min_size=0, max_size=8)


class TestEnvironment:
    def test_units_stored(self):
        assert Environment(3).units == 3

    @pytest.mark.parametrize("bad", [0, -1, 2.0, True, "3"])
    def test_rejects_bad_units(self, bad):
        with pytest.raises((TypeError, ValueError)):
            Environment(bad)


class TestProfileValidation:
    def test_rejects_negative_value(self):
        with pytest.raises(ValueError):
            make_profile([5, -1])

    @pytest.mark.parametrize("bad", [1.5, True, "7", None])
    def test_rejects_non_integer_value(self, bad):
        with pytest.raises((TypeError, ValueError)):
            make_profile([bad])

    def test_rejects_duplicate_ids(self):
        with pytest.raises(ValueError):
            make_profile([4, 4], agent_ids=[1, 1])

    def test_rejects_negative_ids(self):
        # negative ids are reserved for padding entries
        with pytest.raises(ValueError):
            make_profile([4], agent_ids=[-1])

    def test_default_ids_start_at_one(self):
        prof = make_profile([10, 20, 30])
        assert prof.real_ids == (1, 2, 3)

    def test_mismatched_lengths(self):
        with pytest.raises(ValueError):
            make_profile([1, 2], agent_ids=[1])


class TestCanonicalOrder:
    def test_sorted_by_value_then_id(self):
        prof = make_profile([7, 9, 7, 3], agent_ids=[4, 2, 1, 8])
        assert prof.sorted_entries == ((2, 9), (1, 7), (4, 7), (8, 3))
        assert prof.sorted_view == (9, 7, 7, 3)

    def test_value_of(self):
        prof = make_profile([7, 9], agent_ids=[4, 2])
        assert prof.value_of(4) == 7
        assert prof.value_of(2) == 9
        with pytest.raises(KeyError):
            prof.value_of(99)

    def test_replace_value(self):
        prof = make_profile([7, 9], agent_ids=[4, 2])
        swapped = prof.replace_value(4, 11)
        assert swapped.value_of(4) == 11
        assert prof.value_of(4) == 7
        assert swapped.sorted_entries[0] == (4, 11)

    def test_subprofile(self):
        prof = make_profile([7, 9, 5], agent_ids=[4, 2, 6])
        sub = prof.subprofile({6, 2})
        assert sub.real_ids == (2, 6)
        assert sub.sorted_view == (9, 5)


class TestPadding:
    def test_pad_adds_fresh_negative_ids(self):
        prof = make_profile([8, 5])
        padded = pad(prof, 4)
        assert padded.size == 4
        fresh = [aid for aid, _ in padded.entries if is_padding(aid)]
        assert len(fresh) == 2
        assert all(padded.value_of(aid) == 0 for aid in fresh)
        assert padded.real_ids == (1, 2)

    def test_pad_noop_at_same_length(self):
        prof = make_profile([8, 5])
        assert pad(prof, 2) is prof

    def test_pad_below_size_raises(self):
        with pytest.raises(ValueError):
            pad(make_profile([8, 5]), 1)

    def test_double_pad_ids_distinct(self):
        prof = pad(pad(make_profile([8]), 2), 3)
        ids = [aid for aid, _ in prof.entries]
        assert len(set(ids)) == 3

    def test_padding_sorts_last(self):
        padded = pad(make_profile([0, 3]), 4)
        # real zero-value agent outranks padding via smaller positive id
        assert [aid for aid, _ in padded.sorted_entries][:2] == [2, 1]


class TestDominates:
    def test_zero_extension(self):
        big = make_profile([5, 4, 3])
        small = make_profile([5, 4], agent_ids=[7, 8])
        assert dominates(big, small)
        assert not dominates(small, big)

    def test_ignores_ids(self):
        a = make_profile([6, 2], agent_ids=[10, 20])
        b = make_profile([2, 6], agent_ids=[1, 2])
        assert dominates(a, b) and dominates(b, a)

    @given(values_lists)
    def test_reflexive(self, vals):
        prof = make_profile(vals)
        assert dominates(prof, prof)

    @given(values_lists, values_lists, values_lists)
    def test_transitive(self, xs, ys, zs):
        a, b, c = make_profile(xs), make_profile(ys), make_profile(zs)
        if dominates(a, b) and dominates(b, c):
            assert dominates(a, c)

    @given(values_lists, st.lists(st.integers(min_value=0, max_value=5), max_size=8))
    def test_pointwise_raise_preserves(self, vals, bumps):
        base = make_profile(vals)
        raised = make_profile(
            [v + b for v, b in zip(vals, bumps)] + vals[len(bumps):]
        )
        assert dominates(raised, base)


class TestHighestTransforms:
    def test_lower_highest_to_second(self):
        prof = make_profile([9, 4, 7])
        assert lower_highest_to_second(prof).sorted_view == (7, 7, 4)

    def test_lower_highest_single_goes_to_zero(self):
        assert lower_highest_to_second(make_profile([9])).sorted_view == (0,)

    def test_lower_highest_empty(self):
        prof = make_profile([])
        assert lower_highest_to_second(prof) is prof

    def test_lower_highest_keeps_ids(self):
        prof = make_profile([9, 4], agent_ids=[3, 5])
        assert lower_highest_to_second(prof).value_of(3) == 4

    def test_drop_highest(self):
        prof = make_profile([7, 9, 7], agent_ids=[4, 2, 1])
        assert drop_highest(prof).real_ids == (1, 4)

    def test_drop_highest_tie_uses_smallest_id(self):
        prof = make_profile([7, 7], agent_ids=[4, 2])
        assert drop_highest(prof).real_ids == (4,)

    def test_drop_highest_empty_raises(self):
        with pytest.raises(ValueError):
            drop_highest(make_profile([]))


class TestOutcome:
    def test_revenue_and_defaults(self):
        out = Outcome(served=frozenset({1, 2}), payments={1: 5})
        assert out.revenue == 5
        assert out.payment_of(2) == 0
        assert out.payment_of(99) == 0

    def test_rejects_payment_for_unserved(self):
        with pytest.raises(ValueError):
            Outcome(served=frozenset({1}), payments={2: 5})

    def test_rejects_negative_payment(self):
        with pytest.raises(ValueError):
            Outcome(served=frozenset({1}), payments={1: -1})

    def test_rejects_padding_winner(self):
        with pytest.raises(ValueError):
            Outcome(served=frozenset({-1}), payments={})

    def test_validate_outcome_caps_units(self, small_profile):
        out = Outcome(served=frozenset({1, 2}), payments={})
        with pytest.raises(ValueError):
            validate_outcome(out, small_profile, Environment(1))
        validate_outcome(out, small_profile, Environment(2))

    def test_validate_outcome_caps_payment_at_bid(self, small_profile):
        over = Outcome(served=frozenset({1}), payments={1: 10})
        with pytest.raises(ValueError):
            validate_outcome(over, small_profile, Environment(3))
        at_bid = Outcome(served=frozenset({1}), payments={1: 9})
        validate_outcome(at_bid, small_profile, Environment(3))

    def test_validate_outcome_unknown_winner(self, small_profile):
        out = Outcome(served=frozenset({42}), payments={})
        with pytest.raises(ValueError):
            validate_outcome(out, small_profile, Environment(3))
