"""Acceptance suite: one test per release criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line
per criterion. Each test pins the criterion's stated tolerance; the
timed criteria assert their stated wall-clock budgets.
"""

import json
import math
import random
import subprocess
import sys
import time

import pytest

from riskcal.calibration import SimAgent, compare, fit, recovery_battery, simulate_battery
from riskcal.elicitation import (
    RISK_CLASSES,
    allais_consistency,
    class_for_category,
    deterministic_answers,
    dohmen_classify,
    holt_laury_list,
    switch_point,
)
from riskcal.models import (
    IdentityRisk,
    LinearUtility,
    Lottery,
    ModelSpec,
    PowerRisk,
    PowerUtility,
    QuarticRootDampingWeight,
    TableUtility,
    expected_utility,
    expected_utility_rank_form,
    mix,
    reu,
    wlu,
)
from riskcal.policy import PORTFOLIO_MENU, TravelDomainConfig, airport_policy, run_track_record

LINEAR = LinearUtility()
COIN_BET = Lottery([(0.5, 200.0), (0.5, -100.0)])


def passed(name: str, started: float) -> None:
    print(f"PASS  {name}  ({time.perf_counter() - started:.2f}s)")


def test_reu_worked_example():
    started = time.perf_counter()
    assert reu(COIN_BET, LINEAR, PowerRisk(2.0)) == pytest.approx(-25.0, abs=1e-9)
    assert reu(COIN_BET, LINEAR, IdentityRisk()) == pytest.approx(50.0, abs=1e-9)
    passed("REU worked example (-25 squared / 50 identity)", started)


def test_equal_expected_utility_bets():
    started = time.perf_counter()
    bet_a = Lottery([(0.5, 10.0), (0.5, -1.0)])
    bet_b = Lottery([(0.5, 1_000_010.0), (0.5, -1_000_001.0)])
    bet_c = Lottery([(1e-6, 5_499_999.0), (1.0 - 1e-6, -1.0)])
    for bet in (bet_a, bet_b, bet_c):
        assert expected_utility(bet, LINEAR) == pytest.approx(4.5, abs=1e-6)
    passed("equal-EU bets A/B/C all evaluate to 4.5", started)


def test_price_list_table_and_neutral_switch():
    started = time.perf_counter()
    published = [1.17, 0.83, 0.50, 0.16, -0.18, -0.51, -0.85, -1.18, -1.52, -1.85]
    diffs = holt_laury_list(1.0).ev_differences()
    for got, expected in zip(diffs, published):
        assert abs(got - expected) <= 0.005 + 1e-9
    answers = deterministic_answers(holt_laury_list(1.0), ModelSpec.eu())
    result = switch_point(answers)
    assert (result.switch_row, result.classification) == (5, "neutral")
    passed("price-list table and EV-maximiser switch at row 5", started)


def test_allais_logic_exhaustive():
    started = time.perf_counter()
    rng = random.Random(20240101)
    bet_a = Lottery.degenerate(1e6)
    bet_b = Lottery([(0.89, 1e6), (0.01, 0.0), (0.10, 5e6)])
    bet_c = Lottery([(0.89, 0.0), (0.11, 1e6)])
    bet_d = Lottery([(0.90, 0.0), (0.10, 5e6)])
    for _ in range(10_000):
        u_one = rng.uniform(1e-3, 1e3)
        u_five = u_one * rng.uniform(1.0 + 1e-6, 50.0)
        u = TableUtility([(0.0, 0.0), (1e6, u_one), (5e6, u_five)])
        prefers_a = expected_utility(bet_a, u) > expected_utility(bet_b, u)
        prefers_d = expected_utility(bet_d, u) > expected_utility(bet_c, u)
        assert not (prefers_a and prefers_d), (u_one, u_five)
    flagged = {
        (first, second): allais_consistency(first, second).eu_consistent
        for first in "AB"
        for second in "AB"
    }
    assert flagged == {("A", "A"): True, ("B", "B"): True, ("A", "B"): False, ("B", "A"): False}
    assert time.perf_counter() - started < 1.0
    passed("common-consequence logic over 10^4 utility draws", started)


def test_general_risk_classification_and_airport_policy():
    started = time.perf_counter()
    expected_by_score = (
        ["ExtremeAversion"] * 2 + ["AdditionalAversion"] * 2 + ["Default"] * 3
        + ["AdditionalLove"] * 2 + ["ExtremeLove"] * 2
    )
    for score, expected in enumerate(expected_by_score):
        assert dohmen_classify(score).category.value == expected
    leads = [airport_policy(rc) for rc in RISK_CLASSES]
    assert leads == [6.0, 4.0, 3.0, 2.0, 1.0]
    passed("0-10 score classification and 6/4/3/2/1 lead times", started)


def test_rank_form_equivalence_bulk():
    started = time.perf_counter()
    rng = random.Random(77)
    for trial in range(10_000):
        n = rng.randint(1, 8)
        raw = [rng.uniform(0.01, 1.0) for _ in range(n)]
        total = sum(raw)
        if trial % 2 == 0:
            outcomes = [rng.uniform(-1000.0, 1000.0) for _ in range(n)]
            u = LINEAR
        else:
            outcomes = [rng.uniform(0.0, 1000.0) for _ in range(n)]
            u = PowerUtility(rng.uniform(0.2, 1.0))
        lottery = Lottery([(w / total, x) for w, x in zip(raw, outcomes)])
        direct = expected_utility(lottery, u)
        ranked = expected_utility_rank_form(lottery, u)
        assert abs(ranked - direct) <= 1e-9, (lottery, direct, ranked)
    assert time.perf_counter() - started < 1.0
    passed("rank form equals direct form on 10^4 lotteries", started)


def _random_nonneg_lottery(rng: random.Random) -> Lottery:
    n = rng.randint(2, 3)
    raw = [rng.uniform(0.05, 1.0) for _ in range(n)]
    total = sum(raw)
    return Lottery([(w / total, rng.uniform(0.0, 100.0)) for w in raw])


def _match_two_branch(value_fn, target, q, hi_start=200.0) -> Lottery:
    """Find t with value_fn({q: 0, 1-q: t}) == target by bisection."""

    def candidate(t: float) -> Lottery:
        return Lottery([(q, 0.0), (1.0 - q, t)])

    hi = hi_start
    while value_fn(candidate(hi)) < target:
        hi *= 2.0
        if hi > 1e9:
            raise AssertionError("matching outcome out of range")
    lo = 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if value_fn(candidate(mid)) < target:
            lo = mid
        else:
            hi = mid
    return candidate(0.5 * (lo + hi))


def test_betweenness_probe():
    started = time.perf_counter()
    weight = QuarticRootDampingWeight()

    def wlu_value(lot: Lottery) -> float:
        return wlu(lot, LINEAR, weight)

    def reu_value(lot: Lottery) -> float:
        return reu(lot, LINEAR, PowerRisk(2.0))

    rng = random.Random(1234)
    wlu_worst = 0.0
    reu_violations = 0
    trials = 10_000
    for trial in range(trials):
        first = _random_nonneg_lottery(rng)
        alpha = rng.uniform(0.01, 0.99)
        for value_fn, is_wlu in ((wlu_value, True), (reu_value, False)):
            target = value_fn(first)
            if trial % 2 == 0:
                second = Lottery.degenerate(target)
            else:
                second = _match_two_branch(value_fn, target, rng.uniform(0.1, 0.9))
            assert abs(value_fn(second) - target) <= 1e-9  # matched premise
            mixture_value = value_fn(mix(first, second, alpha))
            deviation = abs(mixture_value - target)
            if is_wlu:
                wlu_worst = max(wlu_worst, deviation)
            elif deviation > 1e-6:
                reu_violations += 1
    assert wlu_worst <= 1e-6, f"worst mixture deviation {wlu_worst}"
    assert reu_violations >= 1
    assert time.perf_counter() - started < 10.0
    passed(
        f"betweenness probe: no mixture deviation for the relative-weight family "
        f"(worst {wlu_worst:.1e}), {reu_violations} tail-weighted violations",
        started,
    )


def test_parameter_recovery_and_model_selection():
    started = time.perf_counter()
    questions = recovery_battery(200)
    averse_agent = SimAgent(model=ModelSpec.reu(k=2.0), sharpness=1.0, seed=2)
    fitted = fit(simulate_battery(averse_agent, questions), "reu")
    assert 1.75 <= fitted.model.params["k"] <= 2.25, fitted.model.params
    neutral_agent = SimAgent(model=ModelSpec.eu(), sharpness=1.0, seed=7)
    ranked = compare(simulate_battery(neutral_agent, questions), ["eu", "reu"])
    assert ranked.fits["eu"].bic <= ranked.fits["reu"].bic
    assert time.perf_counter() - started < 30.0
    passed(
        f"recovery: fitted k={fitted.model.params['k']:.3f} in [1.75, 2.25]; "
        "simpler family wins BIC on its own data",
        started,
    )


def test_portfolio_fixture_exact():
    started = time.perf_counter()
    options = PORTFOLIO_MENU.options
    table = [
        (option.stocks_pct, option.bonds_pct, option.cash_pct, option.growth_of_10k,
         option.annualized_return_pct, option.volatility_pct, option.max_loss_pct)
        for option in options
    ]
    assert table == [
        (30.0, 50.0, 20.0, 389_519.0, 8.1, 9.1, -14.0),
        (60.0, 30.0, 10.0, 676_126.0, 9.4, 15.6, -32.3),
        (80.0, 15.0, 5.0, 892_028.0, 10.0, 20.5, -44.4),
    ]
    returns = [o.annualized_return_pct for o in options]
    vols = [o.volatility_pct for o in options]
    losses = [o.max_loss_pct for o in options]
    assert returns == sorted(returns) and len(set(returns)) == 3
    assert vols == sorted(vols) and len(set(vols)) == 3
    assert losses == sorted(losses, reverse=True) and len(set(losses)) == 3
    passed("portfolio fixture matches the published table exactly", started)


def test_track_record_monotonicity():
    started = time.perf_counter()
    config = TravelDomainConfig()
    leads = sorted(airport_policy(rc) for rc in RISK_CLASSES)  # 1, 2, 3, 4, 6
    records = [run_track_record(lead, config, episodes=10_000, seed=99) for lead in leads]
    miss = [r.miss_rate for r in records]
    wait = [r.mean_wait_hours for r in records]
    assert all(later <= earlier for earlier, later in zip(miss, miss[1:])), miss
    assert all(later >= earlier for earlier, later in zip(wait, wait[1:])), wait
    assert time.perf_counter() - started < 10.0
    passed(
        f"track record over 10^4 episodes: miss {['%.3f' % m for m in miss]} falls, "
        f"wait {['%.2f' % w for w in wait]} rises with lead time",
        started,
    )


def test_end_to_end_without_ui(tmp_path):
    started = time.perf_counter()
    store = tmp_path / "store"
    cli = [sys.executable, "-m", "riskcal.cli", "--store", str(store)]
    elicited = subprocess.run(
        cli + ["--format", "json", "elicit", "--protocol", "mpl", "--seed", "7"],
        input="AAAABBBBBB\n",
        capture_output=True,
        text=True,
        timeout=30,
    )
    assert elicited.returncode == 0, elicited.stderr
    session_id = json.loads(elicited.stdout)["session_id"]
    report = subprocess.run(
        cli + ["report", "--session", session_id],
        capture_output=True,
        text=True,
        timeout=30,
    )
    assert report.returncode == 0, report.stderr
    assert "neutral" in report.stdout
    assert "Default" in report.stdout
    assert "3 h" in report.stdout
    assert time.perf_counter() - started < 1.0
    passed("terminal elicit + report shows neutral / Default / 3 h", started)
