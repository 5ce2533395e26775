"""Tests for action choice, quantile labelling, and track records."""

import pytest

from riskcal.elicitation import RISK_CLASSES, RiskCategory, class_for_category
from riskcal.models import Lottery, ModelSpec
from riskcal.policy import (
    AIRPORT_LEAD_HOURS,
    ActionMenu,
    MenuAction,
    PORTFOLIO_MENU,
    PolicyError,
    TravelDomainConfig,
    airport_policy,
    choose_action,
    format_track_record,
    portfolio_for_class,
    quantile_action_label,
    run_track_record,
)

SURE_THREE = Lottery.degenerate(3.0)
SMALL_COIN = Lottery([(0.5, 10.0), (0.5, -1.0)])


def two_action_menu():
    return ActionMenu(
        domain="bets",
        actions=(
            MenuAction("stay", SURE_THREE, "extremely safe", 0),
            MenuAction("bet", SMALL_COIN, "extremely risky", 1),
        ),
    )


class TestChooseAction:
    def test_ev_maximiser_takes_the_bet(self):
        # The 4.5-EV coin beats the sure 3 for a risk-neutral bettor.
        assert choose_action(two_action_menu(), ModelSpec.eu()) == "bet"

    def test_tail_weighted_model_evaluates_both(self):
        # Hand evaluation: REU(k=2) of the coin = -1 + 0.25 * 11 = 1.75 < 3.
        model = ModelSpec.reu(k=2.0)
        assert model.value(SMALL_COIN) == pytest.approx(1.75)
        assert choose_action(two_action_menu(), model) == "stay"

    def test_single_action_menu(self):
        menu = ActionMenu(domain="one", actions=(MenuAction("only", SURE_THREE, "moderate", 0),))
        assert choose_action(menu, ModelSpec.eu()) == "only"

    def test_tie_breaks_toward_safer_label(self):
        menu = ActionMenu(
            domain="ties",
            actions=(
                MenuAction("wild", Lottery([(0.5, 0.0), (0.5, 6.0)]), "risky", 1),
                MenuAction("calm", SURE_THREE, "safe", 0),
            ),
        )
        assert choose_action(menu, ModelSpec.eu()) == "calm"

    def test_eu_choice_invariant_under_positive_affine_outcomes(self):
        menu = two_action_menu()
        for a, b in [(2.0, 5.0), (0.3, -4.0), (10.0, 0.0)]:
            scaled = ActionMenu(
                domain="scaled",
                actions=tuple(
                    MenuAction(
                        act.action_id,
                        Lottery([(p, a * x + b) for p, x in act.lottery.branches]),
                        act.risk_label,
                        act.risk_rank,
                    )
                    for act in menu.actions
                ),
            )
            assert choose_action(scaled, ModelSpec.eu()) == choose_action(menu, ModelSpec.eu())

    def test_duplicate_ranks_rejected(self):
        with pytest.raises(PolicyError):
            ActionMenu(
                domain="bad",
                actions=(
                    MenuAction("x", SURE_THREE, "safe", 0),
                    MenuAction("y", SMALL_COIN, "risky", 0),
                ),
            )

    def test_empty_menu_rejected(self):
        with pytest.raises(PolicyError):
            ActionMenu(domain="none", actions=())


class TestQuantileLabels:
    def test_degenerate_action_ranks_safer(self):
        labels = quantile_action_label(
            [("spread", [-10.0, 10.0]), ("fixed", [0.0])], q=0.05
        )
        assert labels[0].action_id == "fixed"
        assert labels[0].risk_label == "extremely safe"
        assert labels[1].risk_label == "extremely risky"

    def test_nested_spreads_order_by_spread(self):
        actions = [
            ("wide", [-100.0, 0.0, 100.0]),
            ("narrow", [-10.0, 0.0, 10.0]),
            ("medium", [-50.0, 0.0, 50.0]),
        ]
        labels = quantile_action_label(actions, q=0.05)
        assert [l.action_id for l in labels] == ["narrow", "medium", "wide"]
        assert [l.risk_label for l in labels] == ["extremely safe", "moderate", "extremely risky"]

    def test_full_quantile_ranks_by_maximum(self):
        labels = quantile_action_label([("low", [0.0, 1.0]), ("high", [-5.0, 2.0])], q=1.0)
        assert labels[0].action_id == "high"

    def test_shift_invariance(self):
        actions = [("a", [0.0, 4.0, 9.0]), ("b", [2.0, 2.5, 3.0]), ("c", [-8.0, 10.0, 30.0])]
        shifted = [(name, [x + 123.4 for x in xs]) for name, xs in actions]
        order = [l.action_id for l in quantile_action_label(actions)]
        shifted_order = [l.action_id for l in quantile_action_label(shifted)]
        assert order == shifted_order

    def test_empty_samples_rejected(self):
        with pytest.raises(PolicyError):
            quantile_action_label([("a", [])])
        with pytest.raises(PolicyError):
            quantile_action_label([])


class TestAirportPolicy:
    @pytest.mark.parametrize(
        "category,hours",
        [
            (RiskCategory.EXTREME_AVERSION, 6.0),
            (RiskCategory.ADDITIONAL_AVERSION, 4.0),
            (RiskCategory.DEFAULT, 3.0),
            (RiskCategory.ADDITIONAL_LOVE, 2.0),
            (RiskCategory.EXTREME_LOVE, 1.0),
        ],
    )
    def test_lead_times(self, category, hours):
        assert airport_policy(class_for_category(category)) == hours
        assert airport_policy(category) == hours

    def test_lead_times_strictly_decrease_with_risk_love(self):
        leads = [airport_policy(rc) for rc in RISK_CLASSES]
        assert all(b < a for a, b in zip(leads, leads[1:]))


class TestPortfolioMenu:
    def test_exact_fixture_numbers(self):
        rows = {o.name: o for o in PORTFOLIO_MENU.options}
        assert (rows["conservative"].stocks_pct, rows["conservative"].bonds_pct, rows["conservative"].cash_pct) == (30.0, 50.0, 20.0)
        assert (rows["moderate"].stocks_pct, rows["moderate"].bonds_pct, rows["moderate"].cash_pct) == (60.0, 30.0, 10.0)
        assert (rows["aggressive"].stocks_pct, rows["aggressive"].bonds_pct, rows["aggressive"].cash_pct) == (80.0, 15.0, 5.0)
        assert [o.growth_of_10k for o in PORTFOLIO_MENU.options] == [389_519.0, 676_126.0, 892_028.0]
        assert [o.annualized_return_pct for o in PORTFOLIO_MENU.options] == [8.1, 9.4, 10.0]
        assert [o.volatility_pct for o in PORTFOLIO_MENU.options] == [9.1, 15.6, 20.5]
        assert [o.max_loss_pct for o in PORTFOLIO_MENU.options] == [-14.0, -32.3, -44.4]

    def test_percentages_sum_to_hundred(self):
        for option in PORTFOLIO_MENU.options:
            assert option.stocks_pct + option.bonds_pct + option.cash_pct == 100.0

    def test_class_to_portfolio(self):
        assert portfolio_for_class(RiskCategory.DEFAULT).name == "moderate"
        assert portfolio_for_class(RiskCategory.EXTREME_AVERSION).name == "conservative"
        assert portfolio_for_class(RiskCategory.EXTREME_LOVE).name == "aggressive"


class TestTrackRecord:
    def test_bounded_gate_time_means_no_misses(self):
        config = TravelDomainConfig(max_gate_hours=5.0)
        record = run_track_record(6.0, config, episodes=2000, seed=1)
        assert record.miss_rate == 0.0

    def test_coupled_runs_are_monotone_in_lead_time(self):
        config = TravelDomainConfig()
        short = run_track_record(1.0, config, episodes=5000, seed=3)
        long = run_track_record(6.0, config, episodes=5000, seed=3)
        assert short.miss_rate >= long.miss_rate
        assert short.mean_wait_hours <= long.mean_wait_hours

    def test_single_episode_aggregates_are_that_episode(self):
        config = TravelDomainConfig()
        record = run_track_record(3.0, config, episodes=1, seed=4)
        assert record.miss_rate in (0.0, 1.0)
        quantile_values = set(record.expense_quantiles.values())
        assert len(quantile_values) == 1  # every quantile of one sample is the sample

    def test_deterministic_given_seed(self):
        config = TravelDomainConfig()
        assert run_track_record(2.0, config, 500, seed=9) == run_track_record(2.0, config, 500, seed=9)

    def test_quantiles_are_monotone(self):
        record = run_track_record(3.0, TravelDomainConfig(), episodes=3000, seed=5)
        qs = sorted(record.expense_quantiles)
        values = [record.expense_quantiles[q] for q in qs]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_miss_rates_nonincreasing_across_classes(self):
        config = TravelDomainConfig()
        leads = [airport_policy(rc) for rc in RISK_CLASSES]  # 6, 4, 3, 2, 1
        records = [run_track_record(lead, config, 5000, seed=7) for lead in leads]
        miss = [r.miss_rate for r in records]
        assert all(b >= a for a, b in zip(miss, miss[1:]))  # shorter lead, more misses

    def test_invalid_configuration(self):
        with pytest.raises(PolicyError):
            TravelDomainConfig(gate_median_hours=-1.0)
        with pytest.raises(PolicyError):
            run_track_record(0.0, TravelDomainConfig(), 10, 0)
        with pytest.raises(PolicyError):
            run_track_record(3.0, TravelDomainConfig(), 0, 0)

    def test_text_report_mentions_key_metrics(self):
        record = run_track_record(3.0, TravelDomainConfig(), episodes=100, seed=0)
        text = format_track_record(record)
        assert "flights missed" in text
        assert "mean airport wait" in text
        assert "p95" in text

    def test_round_trip_config(self):
        config = TravelDomainConfig(gate_median_hours=1.2, max_gate_hours=4.0)
        assert TravelDomainConfig.from_dict(config.to_dict()) == config
