import itertools

import numpy as np
import pytest

from sarimacast.errors import AllCandidatesFailed, NoAdmissibleCandidate, SeriesTooShort
from sarimacast.fitting import FittedModel
from sarimacast.model import CoefficientSet, ModelOrder
from sarimacast.selection import (
    Candidate,
    CandidateRanking,
    SearchBounds,
    choose_differencing,
    grid_search,
    select_best,
    selection_decision,
)
from sarimacast.series import MonthStamp, TimeSeries, TransformSpec
from sarimacast.simulate import simulate

START = MonthStamp(2005, 1)


def stub_candidate(p, q, P, Q, aic, converged=True, roots_ok=True, significant=True):
    order = ModelOrder(p, 0, q, P, 0, Q, 12)
    model = FittedModel(
        order=order,
        coefficients=CoefficientSet(
            phi=(0.1,) * p, theta=(0.1,) * q, sphi=(0.1,) * P, stheta=(0.1,) * Q
        ),
        stderr=None,
        t_stats=None,
        p_values=None,
        loglik=-aic / 2.0,
        aic=aic,
        residuals=TimeSeries(START, [0.1, -0.2, 0.3]),
        converged=converged,
        iterations=1,
        n_obs=100,
    )
    return Candidate(
        order=order,
        model=model,
        aic=aic,
        converged=converged,
        roots_ok=roots_ok,
        significant=significant,
    )


def ranking_of(*candidates):
    return CandidateRanking(candidates=tuple(candidates))


class TestSelectBest:
    def test_parsimony_band_prefers_fewer_parameters(self):
        big = stub_candidate(2, 2, 0, 0, aic=100.0)
        small = stub_candidate(1, 1, 0, 0, aic=101.5)
        chosen = select_best(ranking_of(big, small))
        assert chosen.order == small.order

    def test_outside_band_aic_wins(self):
        big = stub_candidate(2, 2, 0, 0, aic=100.0)
        small = stub_candidate(1, 1, 0, 0, aic=103.0)
        chosen = select_best(ranking_of(big, small))
        assert chosen.order == big.order

    def test_single_admissible_candidate_wins(self):
        only = stub_candidate(1, 0, 0, 0, aic=50.0)
        assert select_best(ranking_of(only)).order == only.order

    def test_seasonal_parameters_break_parameter_ties(self):
        seasonal = stub_candidate(0, 0, 1, 1, aic=100.0)
        plain = stub_candidate(1, 1, 0, 0, aic=100.5)
        chosen = select_best(ranking_of(seasonal, plain))
        assert chosen.order == plain.order

    def test_insignificant_winner_replaced_within_band(self):
        insig = stub_candidate(1, 0, 0, 0, aic=100.0, significant=False)
        sig = stub_candidate(1, 1, 0, 0, aic=101.0, significant=True)
        chosen, trail = selection_decision(ranking_of(insig, sig))
        assert chosen.order == sig.order
        assert any("insignificant" in line for line in trail)

    def test_insignificant_winner_kept_when_no_alternative(self):
        insig = stub_candidate(1, 0, 0, 0, aic=100.0, significant=False)
        worse = stub_candidate(2, 0, 0, 0, aic=104.0, significant=True)
        chosen = select_best(ranking_of(insig, worse))
        assert chosen.order == insig.order

    def test_inadmissible_candidates_never_selected(self):
        broken = stub_candidate(0, 0, 0, 0, aic=10.0, roots_ok=False)
        unconverged = stub_candidate(1, 0, 0, 0, aic=20.0, converged=False)
        ok = stub_candidate(1, 1, 0, 0, aic=90.0)
        chosen = select_best(ranking_of(broken, unconverged, ok))
        assert chosen.order == ok.order

    def test_no_admissible_raises(self):
        broken = stub_candidate(0, 0, 0, 0, aic=10.0, roots_ok=False)
        with pytest.raises(NoAdmissibleCandidate):
            select_best(ranking_of(broken))

    def test_invariant_under_input_permutation(self, rng):
        base = [
            stub_candidate(p, q, P, Q, aic=100.0 + 0.7 * (p + 2 * q + 3 * P + 4 * Q))
            for p, q, P, Q in itertools.product(range(2), repeat=4)
        ]
        reference = select_best(ranking_of(*base)).order
        for _ in range(10):
            shuffled = list(base)
            rng.shuffle(shuffled)
            assert select_best(ranking_of(*shuffled)).order == reference


class TestGridSearch:
    def test_grid_of_size_one(self, rng):
        ts = TimeSeries(START, rng.normal(5.0, 1.0, 60))
        bounds = SearchBounds(max_p=0, max_q=0, max_P=0, max_Q=0)
        ranking = grid_search(ts, bounds, TransformSpec(False, 0, 0, 12))
        assert len(ranking) == 1

    def test_every_candidate_appears_exactly_once(self, rng):
        ts = TimeSeries(START, rng.normal(5.0, 1.0, 120))
        bounds = SearchBounds(max_p=1, max_q=1, max_P=1, max_Q=1)
        ranking = grid_search(ts, bounds, TransformSpec(False, 0, 0, 12))
        orders = [str(c.order) for c in ranking.candidates]
        assert len(orders) == 16
        assert len(set(orders)) == 16

    def test_admissible_sorted_by_aic(self, rng):
        ts = TimeSeries(START, rng.normal(5.0, 1.0, 120))
        bounds = SearchBounds(max_p=1, max_q=1, max_P=0, max_Q=0)
        ranking = grid_search(ts, bounds, TransformSpec(False, 0, 0, 12))
        aics = [c.aic for c in ranking.candidates if c.admissible]
        assert aics == sorted(aics)

    def test_selected_model_is_always_admissible(self, rng):
        ts = TimeSeries(START, rng.normal(5.0, 1.0, 150))
        bounds = SearchBounds(max_p=1, max_q=1, max_P=0, max_Q=0)
        ranking = grid_search(ts, bounds, TransformSpec(False, 0, 0, 12))
        winner, _ = selection_decision(ranking)
        assert winner.converged and winner.roots_ok

    def test_all_candidates_failed(self, rng):
        # 21 points minus one seasonal difference leaves 9 < the fitting floor
        ts = TimeSeries(START, rng.normal(5.0, 1.0, 21))
        bounds = SearchBounds(max_p=0, max_q=0, max_P=0, max_Q=0)
        with pytest.raises(AllCandidatesFailed):
            grid_search(ts, bounds, TransformSpec(False, 0, 1, 12))

    def test_white_noise_selects_null_order(self):
        bounds = SearchBounds(max_p=1, max_q=1, max_P=1, max_Q=1)
        hits = 0
        for seed in range(3):
            data = np.random.default_rng(seed).normal(7.0, 0.5, 240)
            ts = TimeSeries(START, data)
            ranking = grid_search(ts, bounds, TransformSpec(False, 0, 0, 12))
            winner, _ = selection_decision(ranking)
            hits += winner.order.n_coef == 0
        assert hits >= 2

    def test_enlarging_bounds_never_worsens_beyond_band(self):
        order = ModelOrder(1, 0, 0, 0, 0, 0, 12)
        spec = TransformSpec(False, 0, 0, 12)
        for seed in range(3):
            ts = simulate(order, CoefficientSet(phi=(0.5,), const=5.0), 300, seed=seed)
            small = grid_search(ts, SearchBounds(max_p=1, max_q=0, max_P=0, max_Q=0), spec)
            large = grid_search(ts, SearchBounds(max_p=1, max_q=1, max_P=1, max_Q=0), spec)
            pick_small, _ = selection_decision(small)
            pick_large, _ = selection_decision(large)
            best_small = min(c.aic for c in small.admissible())
            best_large = min(c.aic for c in large.admissible())
            assert best_large <= best_small + 1e-9
            assert pick_large.aic <= pick_small.aic + 2.0 + 1e-9


class TestChooseDifferencing:
    def test_white_noise_needs_nothing(self, rng):
        ts = TimeSeries(START, rng.normal(10.0, 1.0, 240))
        assert choose_differencing(ts, SearchBounds()) == (0, 0)

    def test_seasonal_pattern_takes_one_seasonal_difference(self, rng):
        pattern = np.tile(5.0 * np.sin(2 * np.pi * np.arange(12) / 12.0), 20)
        ts = TimeSeries(START, pattern + rng.normal(0, 0.5, 240))
        assert choose_differencing(ts, SearchBounds()) == (0, 1)

    def test_trend_plus_seasonal_takes_both(self, rng):
        walk = np.cumsum(rng.normal(2.0, 1.0, 240))
        seasonal = np.zeros(240)
        eta = rng.normal(0, 0.3, 240)
        for t in range(12, 240):
            seasonal[t] = seasonal[t - 12] + eta[t]
        ts = TimeSeries(START, walk + seasonal)
        assert choose_differencing(ts, SearchBounds()) == (1, 1)

    def test_short_series_raises(self, rng):
        ts = TimeSeries(START, rng.normal(size=20))
        with pytest.raises(SeriesTooShort):
            choose_differencing(ts, SearchBounds())
