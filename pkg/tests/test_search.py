"""
Destabilizer search tests for LlamaTilt.

This module contains tests for the lattice enumeration of numerical
destabilizer candidates and the 2c case split.
"""

import math
import random
from fractions import Fraction

import pytest

from llamatilt.chern import P3, ChernVector, CurveData, TiltParameter, line_bundle, shift, twisted_ideal_sheaf
from llamatilt.search import (
    CASE_LABELS,
    UNCLASSIFIED,
    SearchBounds,
    case_split_2c,
    destabilizer_search,
    in_first_tilt,
    lattice_points,
)
from llamatilt.tilt import slope_nu_hat
from llamatilt.utils import DomainError

F = Fraction

O_MINUS_ONE_SHIFTED = ChernVector(-1, 1, F(-1, 2), F(1, 6))


def naive_candidates(v, p, rank_bound, ch2_bound, check_quotient=True):
    """Brute-force search written directly from the feasibility conditions."""
    beta, A = p.beta, p.alpha_sq

    def tw(x):
        return (x[0], x[1] - beta * x[0], x[2] - beta * x[1] + beta * beta * x[0] / 2)

    def delta_bar(x):
        return A * A * (x[1] * x[1] - 2 * x[0] * x[2])

    def nu(t):
        return None if t[1] == 0 else (t[2] - A * t[0] / 6) / t[1]

    t_v = tw((v.v0, v.v1, v.v2))
    nu_v = nu(t_v)
    lo = math.floor(-rank_bound * abs(beta)) - 1
    hi = math.ceil(rank_bound * abs(beta) + abs(t_v[1])) + 1
    finite, infinite = [], []
    for w0 in range(-rank_bound, rank_bound + 1):
        for w1 in range(lo, hi + 1):
            for twice_w2 in range(-2 * ch2_bound, 2 * ch2_bound + 1):
                w = (F(w0), F(w1), F(twice_w2, 2))
                if w == (0, 0, 0) or w == (v.v0, v.v1, v.v2):
                    continue
                t_w = tw(w)
                if not 0 <= t_w[1] <= t_v[1]:
                    continue
                if t_w[1] == 0 and not (t_w[0] <= 0 and t_w[2] >= 0):
                    continue
                if delta_bar(w) < 0:
                    continue
                q = (v.v0 - w[0], v.v1 - w[1], v.v2 - w[2])
                if check_quotient:
                    if delta_bar(q) < 0:
                        continue
                    t_q = tw(q)
                    if t_q[1] == 0 and not (t_q[0] <= 0 and t_q[2] >= 0):
                        continue
                nu_w = nu(t_w)
                if nu_w is None:
                    infinite.append(w)
                elif nu_w >= nu_v:
                    finite.append(w + (nu_w > nu_v,))
    return sorted(finite), sorted(infinite)


def summary(result):
    finite = [(c.w.v0, c.w.v1, c.w.v2, c.strict) for c in result.candidates]
    infinite = [(c.w.v0, c.w.v1, c.w.v2) for c in result.infinite_slope]
    return finite, infinite


def ws(candidates):
    return [c.w for c in candidates]


class TestHelpers:
    """Tests for the enumeration helpers."""

    def test_lattice_points(self):
        """Test the points of a scaled lattice inside an interval."""
        assert list(lattice_points(F(-1, 2), F(3, 2), 2)) == [F(-1, 2), 0, F(1, 2), 1, F(3, 2)]
        assert list(lattice_points(F(1, 3), F(2, 3), 1)) == []
        assert list(lattice_points(F(0), F(0), 6)) == [0]

    def test_in_first_tilt(self):
        """Test the sign condition for pieces with t1 = 0."""
        assert in_first_tilt(ChernVector(0, 0, 1, 0))
        assert in_first_tilt(ChernVector(-1, 0, 0, 0))
        assert not in_first_tilt(ChernVector(1, 0, 1, 0))
        assert not in_first_tilt(ChernVector(-1, 0, F(-1, 2), 0))

    @pytest.mark.parametrize("rank_bound,ch2_bound", [(-1, 4), (F(3, 2), 4), (2, -1)])
    def test_bounds_validation(self, rank_bound, ch2_bound):
        """Test that negative or fractional bounds are rejected."""
        with pytest.raises(DomainError):
            SearchBounds(rank_bound, ch2_bound)

    def test_zero_bounds_allowed(self):
        """Test that the empty box is a valid bound."""
        assert SearchBounds(0, 0).ch2_bound == 0


class TestDestabilizerSearch:
    """Tests for destabilizer_search."""

    def test_line_bundle_shift_at_threshold(self):
        """Test that O(-1)[1] at alpha^2 = 3 has no strict candidate."""
        result = destabilizer_search(O_MINUS_ONE_SHIFTED, TiltParameter(3), P3, SearchBounds(6, 6))
        assert result.nu_hat_v == 0
        assert result.strict == ()

    def test_equal_candidates_without_quotient_check(self):
        """Test the equal-slope candidates at alpha^2 = 3."""
        result = destabilizer_search(
            O_MINUS_ONE_SHIFTED, TiltParameter(3), P3, SearchBounds(6, 6), check_quotient=False
        )
        equal = ws(result.equal)
        assert ChernVector(0, 1, 0, 0) in equal
        assert ChernVector(1, 1, F(1, 2), 0) in equal

    def test_strict_candidate_below_threshold(self):
        """Test that (0,1,0,0) is strict at alpha^2 = 2 when the quotient is not checked."""
        result = destabilizer_search(
            O_MINUS_ONE_SHIFTED, TiltParameter(2), P3, SearchBounds(6, 6), check_quotient=False
        )
        assert result.nu_hat_v == F(-1, 6)
        strict = {c.w: c for c in result.strict}
        assert ChernVector(0, 1, 0, 0) in strict
        assert strict[ChernVector(0, 1, 0, 0)].nu_hat_w == 0

    def test_quotient_check_excludes(self):
        """Test that (0,1,0,0) is dropped when its quotient fails the sign condition."""
        result = destabilizer_search(O_MINUS_ONE_SHIFTED, TiltParameter(2), P3, SearchBounds(6, 6))
        assert ChernVector(0, 1, 0, 0) not in ws(result.all_candidates())

    def test_infinite_slope_rejected(self):
        """Test that v with t1 = 0 is a domain error."""
        with pytest.raises(DomainError):
            destabilizer_search(ChernVector(0, 0, 1, 0), TiltParameter(1), P3, SearchBounds(2, 2))

    def test_negative_t1_gives_nothing(self):
        """Test that t1(v) < 0 leaves no room for candidates."""
        result = destabilizer_search(ChernVector(1, -1, 0, 0), TiltParameter(1), P3, SearchBounds(4, 4))
        assert result.candidates == () and result.infinite_slope == ()

    def test_candidate_invariants(self):
        """Test the invariants of every reported candidate."""
        v = twisted_ideal_sheaf(CurveData(1, -1), P3)
        p = TiltParameter(5, F(1, 2))
        result = destabilizer_search(v, p, P3, SearchBounds(3, 3))
        assert result.all_candidates()
        keys = [c.sort_key for c in result.candidates]
        assert keys == sorted(keys)
        for candidate in result.all_candidates():
            assert candidate.sub_delta_bar >= 0
            assert candidate.quotient_delta_bar >= 0
            assert candidate.w.v3 == 0
            assert candidate.nu_hat_w >= result.nu_hat_v
            assert candidate.strict == (candidate.nu_hat_w > result.nu_hat_v)
        for candidate in result.infinite_slope:
            assert candidate.nu_hat_w.is_infinite

    def test_matches_naive_enumeration(self):
        """Test agreement with a brute-force search on random small instances."""
        rng = random.Random(97)
        betas = [F(0), F(1, 2), F(-1, 3), F(1), F(2, 3)]
        checked = 0
        while checked < 50:
            v = ChernVector(
                rng.randint(-2, 2),
                rng.randint(-2, 3),
                F(rng.randint(-6, 6), 2),
                F(rng.randint(-6, 6), 6),
            )
            p = TiltParameter(F(rng.randint(1, 12), rng.randint(1, 3)), rng.choice(betas))
            if v.is_zero() or slope_nu_hat(v, p, P3).is_infinite:
                continue
            rank_bound, ch2_bound = rng.randint(0, 4), rng.randint(0, 4)
            check_quotient = rng.random() < 0.7
            result = destabilizer_search(
                v, p, P3, SearchBounds(rank_bound, ch2_bound), check_quotient=check_quotient
            )
            finite, infinite = naive_candidates(v, p, rank_bound, ch2_bound, check_quotient)
            assert summary(result) == (finite, infinite)
            checked += 1

    @pytest.mark.parametrize("k", [-1, -2])
    @pytest.mark.parametrize("extra", [0, 3])
    def test_pruning_is_sound(self, k, extra):
        """Test that the slope-bound pruning never changes the output for O(k)[1]."""
        v = shift(line_bundle(k), 1)
        p = TiltParameter(6 * k * k + extra)
        bounds = SearchBounds(4, 4)
        assert destabilizer_search(v, p, P3, bounds, prune=True) == destabilizer_search(v, p, P3, bounds)
        assert (
            destabilizer_search(v, p, P3, bounds, check_quotient=False, prune=True)
            == destabilizer_search(v, p, P3, bounds, check_quotient=False)
        )

    def test_monotone_in_bounds(self):
        """Test that enlarging the box never removes a candidate."""
        v = twisted_ideal_sheaf(CurveData(1, -1), P3)
        for p in (TiltParameter(6), TiltParameter(2, F(1, 2)), TiltParameter(F(1, 2), -1)):
            small = destabilizer_search(v, p, P3, SearchBounds(2, 2))
            large = destabilizer_search(v, p, P3, SearchBounds(4, 4))
            assert set(ws(small.all_candidates())) <= set(ws(large.all_candidates()))

    @pytest.mark.slow
    def test_workers_do_not_change_output(self):
        """Test that the result does not depend on the number of workers."""
        v = twisted_ideal_sheaf(CurveData(1, -1), P3)
        p = TiltParameter(3, F(1, 2))
        bounds = SearchBounds(4, 4)
        assert destabilizer_search(v, p, P3, bounds, workers=2) == destabilizer_search(v, p, P3, bounds, workers=1)

    def test_workers_from_environment(self, monkeypatch):
        """Test that LLAMATILT_WORKERS is honored when workers is not given."""
        monkeypatch.setenv("LLAMATILT_WORKERS", "1")
        v = twisted_ideal_sheaf(CurveData(1, -1), P3)
        result = destabilizer_search(v, TiltParameter(6), P3, SearchBounds(2, 2))
        assert result == destabilizer_search(v, TiltParameter(6), P3, SearchBounds(2, 2), workers=1)


class TestCaseSplit:
    """Tests for the 2c case split."""

    @pytest.fixture
    def line_twist(self):
        """ch(L^2 (x) I_C) for a line in P^3."""
        return twisted_ideal_sheaf(CurveData(1, -1), P3)

    def test_buckets(self, line_twist):
        """Test that every candidate falls into one of the three cases."""
        split = case_split_2c(line_twist, TiltParameter(6), P3, SearchBounds(4, 4))
        assert split.c == 6
        assert split.buckets[UNCLASSIFIED] == ()
        assert ChernVector(0, 1, F(1, 2), 0) in ws(split.buckets["c,c"])
        assert split.infinite_side == {"2c,0": "quotient", "c,c": None, "0,2c": "sub"}
        for label in CASE_LABELS:
            assert label in split.buckets

    def test_empty_bounds(self, line_twist):
        """Test that the empty box leaves all buckets empty."""
        split = case_split_2c(line_twist, TiltParameter(6), P3, SearchBounds(0, 0))
        assert all(bucket == () for bucket in split.buckets.values())

    def test_wrong_multiple_rejected(self):
        """Test that omega^2 tch_1 = 3c is a domain error."""
        with pytest.raises(DomainError):
            case_split_2c(ChernVector(1, 3, 0, 0), TiltParameter(1), P3, SearchBounds(2, 2))
