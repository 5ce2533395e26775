"""Mapping risk classes and fitted models to concrete actions.

Two stylized decision domains are provided:

- airport arrivals: each of the five risk classes fixes how many hours
  before an international flight the agent arrives, and a seeded travel
  simulator turns that lead time into a track record (flights missed,
  time spent waiting, expense distribution);
- retirement portfolios: a fixture menu of conservative / moderate /
  aggressive model portfolios with published hypothetical performance,
  used for classification demos.

Action menus can also be labelled data-driven, ranking actions by a
worst-case quantile of their outcome samples.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .elicitation import RiskCategory, RiskClass
from .models import Lottery, ModelSpec

FIVE_POINT_LABELS = (
    "extremely safe",
    "safe",
    "moderate",
    "risky",
    "extremely risky",
)


class PolicyError(ValueError):
    """Invalid policy input (empty menus, bad domain configuration)."""


# ---------------------------------------------------------------------------
# Action menus and model-based choice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MenuAction:
    action_id: str
    lottery: Lottery
    risk_label: str
    risk_rank: int


@dataclass(frozen=True)
class ActionMenu:
    """Candidate actions with outcome lotteries, ordered by riskiness.

    ``risk_rank`` must totally order the menu (no two actions share a
    rank); lower rank means safer.
    """

    domain: str
    actions: tuple[MenuAction, ...]

    def __post_init__(self):
        if not self.actions:
            raise PolicyError("an action menu needs at least one action")
        ranks = [a.risk_rank for a in self.actions]
        if len(set(ranks)) != len(ranks):
            raise PolicyError("risk ranks must totally order the menu")


def choose_action(menu: ActionMenu, model: ModelSpec) -> str:
    """The menu action with the highest model value.

    Value ties break toward the safer risk label: when in doubt, err on
    the side of caution.
    """
    best: Optional[MenuAction] = None
    best_value = -math.inf
    for action in menu.actions:
        value = model.value(action.lottery)
        if (
            best is None
            or value > best_value
            or (value == best_value and action.risk_rank < best.risk_rank)
        ):
            best = action
            best_value = value
    return best.action_id


def _quantile(samples: Sequence[float], q: float) -> float:
    """Linear-interpolation quantile of a sample (q in [0, 1])."""
    if not samples:
        raise PolicyError("quantile of an empty sample")
    if not 0.0 <= q <= 1.0:
        raise PolicyError(f"quantile level must be in [0,1], got {q}")
    ordered = sorted(samples)
    pos = q * (len(ordered) - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if lo == hi:
        return ordered[lo]
    t = pos - lo
    return ordered[lo] * (1.0 - t) + ordered[hi] * t


@dataclass(frozen=True)
class ActionLabel:
    action_id: str
    quantile_outcome: float
    risk_rank: int
    risk_label: str


def quantile_action_label(
    action_samples: Sequence[tuple[str, Sequence[float]]],
    q: float = 0.05,
) -> list[ActionLabel]:
    """Label actions from extremely safe to extremely risky by worst case.

    Actions are ranked by the q-quantile of their outcome samples
    (default: the worst-case 5% quantile); the best worst case ranks
    safest. Labels interpolate a five-point scale across the menu, and
    the ordering is invariant to shifting all samples by a constant.
    """
    if not action_samples:
        raise PolicyError("no actions to label")
    for action_id, samples in action_samples:
        if not samples:
            raise PolicyError(f"action {action_id!r} has no outcome samples")
    quantiles = [(action_id, _quantile(samples, q)) for action_id, samples in action_samples]
    # Safest first: highest worst-case outcome. Ties keep input order.
    order = sorted(range(len(quantiles)), key=lambda i: (-quantiles[i][1], i))
    n = len(order)
    labels = []
    for rank, idx in enumerate(order):
        action_id, value = quantiles[idx]
        label_idx = 0 if n == 1 else round(rank * (len(FIVE_POINT_LABELS) - 1) / (n - 1))
        labels.append(
            ActionLabel(
                action_id=action_id,
                quantile_outcome=value,
                risk_rank=rank,
                risk_label=FIVE_POINT_LABELS[label_idx],
            )
        )
    return labels


# ---------------------------------------------------------------------------
# Airport arrival policy
# ---------------------------------------------------------------------------

AIRPORT_LEAD_HOURS = {
    RiskCategory.EXTREME_AVERSION: 6.0,
    RiskCategory.ADDITIONAL_AVERSION: 4.0,
    RiskCategory.DEFAULT: 3.0,
    RiskCategory.ADDITIONAL_LOVE: 2.0,
    RiskCategory.EXTREME_LOVE: 1.0,
}


def airport_policy(risk_class: RiskClass | RiskCategory) -> float:
    """Hours before an international flight for the given risk class."""
    category = risk_class.category if isinstance(risk_class, RiskClass) else risk_class
    return AIRPORT_LEAD_HOURS[RiskCategory(category)]


# ---------------------------------------------------------------------------
# Portfolio fixture
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PortfolioOption:
    name: str
    stocks_pct: float
    bonds_pct: float
    cash_pct: float
    growth_of_10k: float
    annualized_return_pct: float
    volatility_pct: float
    max_loss_pct: float

    def __post_init__(self):
        total = self.stocks_pct + self.bonds_pct + self.cash_pct
        if abs(total - 100.0) > 1e-9:
            raise PolicyError(f"{self.name}: allocation sums to {total}, not 100")


@dataclass(frozen=True)
class PortfolioMenu:
    """Conservative / moderate / aggressive model portfolios.

    Fixture data from a published illustrative table of hypothetical
    1970-2014 performance; returns and volatility must rise and the
    maximum loss worsen from conservative to aggressive.
    """

    options: tuple[PortfolioOption, ...]

    def __post_init__(self):
        returns = [o.annualized_return_pct for o in self.options]
        vols = [o.volatility_pct for o in self.options]
        losses = [o.max_loss_pct for o in self.options]
        if not all(b > a for a, b in zip(returns, returns[1:])):
            raise PolicyError("annualized returns must strictly increase")
        if not all(b > a for a, b in zip(vols, vols[1:])):
            raise PolicyError("volatility must strictly increase")
        if not all(b < a for a, b in zip(losses, losses[1:])):
            raise PolicyError("maximum loss must strictly worsen")

    def by_name(self, name: str) -> PortfolioOption:
        for option in self.options:
            if option.name == name:
                return option
        raise PolicyError(f"no portfolio named {name!r}")


PORTFOLIO_MENU = PortfolioMenu(
    options=(
        PortfolioOption("conservative", 30.0, 50.0, 20.0, 389_519.0, 8.1, 9.1, -14.0),
        PortfolioOption("moderate", 60.0, 30.0, 10.0, 676_126.0, 9.4, 15.6, -32.3),
        PortfolioOption("aggressive", 80.0, 15.0, 5.0, 892_028.0, 10.0, 20.5, -44.4),
    )
)

PORTFOLIO_FOR_CLASS = {
    RiskCategory.EXTREME_AVERSION: "conservative",
    RiskCategory.ADDITIONAL_AVERSION: "conservative",
    RiskCategory.DEFAULT: "moderate",
    RiskCategory.ADDITIONAL_LOVE: "aggressive",
    RiskCategory.EXTREME_LOVE: "aggressive",
}


def portfolio_for_class(risk_class: RiskClass | RiskCategory) -> PortfolioOption:
    category = risk_class.category if isinstance(risk_class, RiskClass) else risk_class
    return PORTFOLIO_MENU.by_name(PORTFOLIO_FOR_CLASS[RiskCategory(category)])


# ---------------------------------------------------------------------------
# Travel-domain track records
# ---------------------------------------------------------------------------

EXPENSE_QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


@dataclass(frozen=True)
class TravelDomainConfig:
    """Generative model of one airport trip.

    Time to reach the gate (security, walking, boarding) is lognormal with
    the given median and log-scale sigma, optionally truncated at
    ``max_gate_hours``. Ticket prices scatter lognormally around the base
    price; a missed flight adds the rebooking cost.
    """

    gate_median_hours: float = 0.8
    gate_sigma: float = 0.5
    max_gate_hours: Optional[float] = None
    ticket_price: float = 400.0
    price_sigma: float = 0.2
    rebook_cost: float = 300.0

    def __post_init__(self):
        if self.gate_median_hours <= 0 or self.gate_sigma <= 0:
            raise PolicyError("gate-time distribution parameters must be positive")
        if self.max_gate_hours is not None and self.max_gate_hours <= 0:
            raise PolicyError("max gate time must be positive when set")
        if self.ticket_price <= 0 or self.price_sigma < 0 or self.rebook_cost < 0:
            raise PolicyError("expense parameters must be nonnegative (price positive)")

    def to_dict(self) -> dict:
        return {
            "gate_median_hours": self.gate_median_hours,
            "gate_sigma": self.gate_sigma,
            "max_gate_hours": self.max_gate_hours,
            "ticket_price": self.ticket_price,
            "price_sigma": self.price_sigma,
            "rebook_cost": self.rebook_cost,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TravelDomainConfig":
        return cls(**payload)


@dataclass(frozen=True)
class TrackRecord:
    """Aggregate outcomes of a policy over simulated episodes."""

    policy_lead_hours: float
    episodes: int
    miss_rate: float
    mean_wait_hours: float
    expense_quantiles: dict[float, float] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.miss_rate <= 1.0:
            raise PolicyError(f"miss rate must be in [0,1], got {self.miss_rate}")
        values = [self.expense_quantiles[q] for q in sorted(self.expense_quantiles)]
        if any(b < a for a, b in zip(values, values[1:])):
            raise PolicyError("expense quantiles must be monotone")

    def to_dict(self) -> dict:
        return {
            "policy_lead_hours": self.policy_lead_hours,
            "episodes": self.episodes,
            "miss_rate": self.miss_rate,
            "mean_wait_hours": self.mean_wait_hours,
            "expense_quantiles": {str(q): v for q, v in self.expense_quantiles.items()},
        }


def run_track_record(
    lead_hours: float,
    config: TravelDomainConfig = TravelDomainConfig(),
    episodes: int = 10_000,
    seed: int = 0,
) -> TrackRecord:
    """Simulate airport trips under an arrival lead time.

    Episode draws depend only on the seed and episode index, never on the
    policy, so runs with the same seed are coupled across lead times: a
    longer lead can only convert misses into (longer) waits.
    """
    if episodes < 1:
        raise PolicyError(f"episodes must be >= 1, got {episodes}")
    if lead_hours <= 0:
        raise PolicyError(f"lead time must be positive, got {lead_hours}")
    rng = random.Random(seed)
    mu = math.log(config.gate_median_hours)
    misses = 0
    total_wait = 0.0
    expenses = []
    for _ in range(episodes):
        gate_time = rng.lognormvariate(mu, config.gate_sigma)
        if config.max_gate_hours is not None:
            gate_time = min(gate_time, config.max_gate_hours)
        price = config.ticket_price * rng.lognormvariate(0.0, config.price_sigma)
        if gate_time > lead_hours:
            misses += 1
            price += config.rebook_cost
        # Idle time at the gate; zero when the flight was missed. Pointwise
        # nondecreasing in the lead time, so coupled runs are monotone.
        total_wait += max(lead_hours - gate_time, 0.0)
        expenses.append(price)
    return TrackRecord(
        policy_lead_hours=lead_hours,
        episodes=episodes,
        miss_rate=misses / episodes,
        mean_wait_hours=total_wait / episodes,
        expense_quantiles={q: _quantile(expenses, q) for q in EXPENSE_QUANTILES},
    )


def format_track_record(record: TrackRecord) -> str:
    """Plain-text report table for a track record."""
    lines = [
        f"policy lead time      {record.policy_lead_hours:.1f} h",
        f"episodes              {record.episodes}",
        f"flights missed        {100.0 * record.miss_rate:.2f} %",
        f"mean airport wait     {record.mean_wait_hours:.2f} h",
        "expense quantiles:",
    ]
    for q in sorted(record.expense_quantiles):
        lines.append(f"  p{int(q * 100):02d}                 {record.expense_quantiles[q]:10.2f}")
    return "\n".join(lines)
