"""Decision models for lotteries over monetary outcomes.

Implements the model families used throughout the toolkit:

- expected utility (EU), both in its probability-weighted-average form and
  in the equivalent rank form (worst-case baseline plus tail-weighted
  increments),
- risk-weighted expected utility (REU), which applies a risk function to
  the tail cumulative probabilities of the rank form (Quiggin 1982,
  Buchak 2013),
- weighted-linear utility (WLU), which re-weights outcomes by an
  outcome-dependent relative weight that penalises better outcomes
  (Bottomley & Williamson 2023),
- prospect-theory value (PT), the separable 1979 form with a
  reference-dependent value function and probability weighting
  (Kahneman & Tversky 1979).

Also provides certainty equivalents and risk premiums for any model via
monotone bisection.

All functions here are pure; inputs are immutable dataclasses and safe to
share across threads.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

PROBABILITY_TOLERANCE = 1e-9

CE_TOLERANCE = 1e-7
CE_MAX_ITERATIONS = 200


class LotteryError(ValueError):
    """A lottery violates its invariants (probabilities, branch count)."""


class DomainError(ValueError):
    """An outcome lies outside a utility/weight function's domain."""


class DegenerateWeightError(ValueError):
    """The WLU normalising denominator is not strictly positive."""


class BracketError(ValueError):
    """A root-finding target is not bracketed by the search interval."""


# ---------------------------------------------------------------------------
# Lotteries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lottery:
    """A finite probability distribution over scalar monetary outcomes.

    ``branches`` is a sequence of ``(probability, outcome)`` pairs.
    Probabilities must be nonnegative and sum to 1 within 1e-9; at least
    one branch is required.
    """

    branches: tuple[tuple[float, float], ...]

    def __init__(self, branches: Iterable[tuple[float, float]]):
        object.__setattr__(self, "branches", tuple((float(p), float(x)) for p, x in branches))
        if not self.branches:
            raise LotteryError("a lottery needs at least one branch")
        for i, (p, _) in enumerate(self.branches):
            if p < 0:
                raise LotteryError(f"branch {i} has negative probability {p}")
        total = math.fsum(p for p, _ in self.branches)
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise LotteryError(f"probabilities sum to {total!r}, not 1")

    @classmethod
    def degenerate(cls, outcome: float) -> "Lottery":
        return cls([(1.0, outcome)])

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "Lottery":
        """Build from the wire format: an array of ``[p, x]`` pairs."""
        return cls([(p, x) for p, x in pairs])

    def to_pairs(self) -> list[list[float]]:
        return [[p, x] for p, x in self.branches]

    @property
    def outcomes(self) -> tuple[float, ...]:
        return tuple(x for _, x in self.branches)

    @property
    def expected_value(self) -> float:
        return math.fsum(p * x for p, x in self.branches)

    def merged(self) -> "Lottery":
        """Combine equal-outcome branches and drop zero-probability ones.

        Rank-dependent evaluation requires a canonical branch list; for a
        strictly increasing utility, equal utilities occur exactly at
        equal outcomes, so merging by outcome is model-independent.
        """
        acc: dict[float, float] = {}
        for p, x in self.branches:
            if p > 0.0:
                acc[x] = acc.get(x, 0.0) + p
        if not acc:
            # All probabilities were zero except rounding; keep the first branch.
            return Lottery([(1.0, self.branches[0][1])])
        return Lottery([(p, x) for x, p in sorted(acc.items())])


def mix(a: Lottery, b: Lottery, alpha: float) -> Lottery:
    """Probabilistic mixture: play ``a`` with probability ``alpha``, else ``b``."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"mixture weight must lie in [0,1], got {alpha}")
    branches = [(alpha * p, x) for p, x in a.branches]
    branches += [((1.0 - alpha) * p, x) for p, x in b.branches]
    return Lottery(branches).merged()


# ---------------------------------------------------------------------------
# Utility, risk, and outcome-weight functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearUtility:
    family = "linear"

    def __call__(self, x: float) -> float:
        return x


@dataclass(frozen=True)
class PowerUtility:
    """u(x) = x**exponent on x >= 0. Negative outcomes are a domain error."""

    exponent: float
    family = "power"

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError(f"power utility exponent must be > 0, got {self.exponent}")

    def __call__(self, x: float) -> float:
        if x < 0:
            raise DomainError(f"power utility is undefined for negative outcome {x}")
        return x ** self.exponent


@dataclass(frozen=True)
class ReflectedPowerUtility:
    """Sign-symmetric power utility: u(x) = sign(x) * |x|**exponent.

    Extends the power family to the whole real line (strictly increasing,
    u(1) = 1), which keeps EU/REU/WLU estimable on data with losses.
    """

    exponent: float
    family = "reflected-power"

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError(f"utility exponent must be > 0, got {self.exponent}")

    def __call__(self, x: float) -> float:
        if x >= 0:
            return x ** self.exponent
        return -((-x) ** self.exponent)


@dataclass(frozen=True)
class TableUtility:
    """Piecewise-linear utility through strictly increasing (x, u) points.

    Evaluation outside the tabulated x-range is a domain error.
    """

    points: tuple[tuple[float, float], ...]
    family = "table"

    def __init__(self, points: Iterable[tuple[float, float]]):
        pts = tuple((float(x), float(u)) for x, u in points)
        if len(pts) < 2:
            raise ValueError("a utility table needs at least two points")
        for (x0, u0), (x1, u1) in zip(pts, pts[1:]):
            if not (x1 > x0 and u1 > u0):
                raise ValueError("utility table must be strictly increasing in x and u")
        object.__setattr__(self, "points", pts)

    def __call__(self, x: float) -> float:
        xs = [p[0] for p in self.points]
        if x < xs[0] or x > xs[-1]:
            raise DomainError(f"outcome {x} outside utility table domain [{xs[0]}, {xs[-1]}]")
        i = bisect_left(xs, x)
        if xs[i] == x:
            return self.points[i][1]
        (x0, u0), (x1, u1) = self.points[i - 1], self.points[i]
        t = (x - x0) / (x1 - x0)
        return u0 + t * (u1 - u0)


UtilityFunction = Union[LinearUtility, PowerUtility, ReflectedPowerUtility, TableUtility]


@dataclass(frozen=True)
class IdentityRisk:
    family = "identity"

    def __call__(self, p: float) -> float:
        return p


@dataclass(frozen=True)
class PowerRisk:
    """r(p) = p**k. k > 1 discounts better outcomes (risk averse); k < 1
    amplifies them (risk seeking); k = 1 recovers expected utility."""

    k: float
    family = "power"

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError(f"risk exponent must be > 0, got {self.k}")

    def __call__(self, p: float) -> float:
        return p ** self.k


RiskFunction = Union[IdentityRisk, PowerRisk]


@dataclass(frozen=True)
class ConstantWeight:
    c: float
    family = "constant"

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError(f"constant weight must be > 0, got {self.c}")

    def __call__(self, x: float) -> float:
        return self.c


@dataclass(frozen=True)
class QuarticRootDampingWeight:
    """w(x) = 1 / (1 + x**(1/4)) on x >= 0.

    The standard money weighting for WLU: heavier weight on worse
    outcomes, asymptotically vanishing weight on very good ones.
    Undefined for losses; negative input is a domain error.
    """

    family = "quartic-root-damping"

    def __call__(self, x: float) -> float:
        if x < 0:
            raise DomainError(f"quartic-root damping weight is undefined for negative outcome {x}")
        return 1.0 / (1.0 + x ** 0.25)


@dataclass(frozen=True)
class TableWeight:
    """Piecewise-linear strictly positive weight through (x, w) points."""

    points: tuple[tuple[float, float], ...]
    family = "table"

    def __init__(self, points: Iterable[tuple[float, float]]):
        pts = tuple((float(x), float(w)) for x, w in points)
        if len(pts) < 2:
            raise ValueError("a weight table needs at least two points")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x1 > x0:
                raise ValueError("weight table x values must be strictly increasing")
        if any(w <= 0 for _, w in pts):
            raise ValueError("weight table values must be strictly positive")
        object.__setattr__(self, "points", pts)

    def __call__(self, x: float) -> float:
        xs = [p[0] for p in self.points]
        if x < xs[0] or x > xs[-1]:
            raise DomainError(f"outcome {x} outside weight table domain [{xs[0]}, {xs[-1]}]")
        i = bisect_left(xs, x)
        if xs[i] == x:
            return self.points[i][1]
        (x0, w0), (x1, w1) = self.points[i - 1], self.points[i]
        t = (x - x0) / (x1 - x0)
        return w0 + t * (w1 - w0)


OutcomeWeightFunction = Union[ConstantWeight, QuarticRootDampingWeight, TableWeight]


def prelec_weight(p: float, gamma: float) -> float:
    """One-parameter inverse-S probability weighting w(p) = exp(-(-ln p)**gamma).

    Strictly increasing on [0,1] with w(0)=0 and w(1)=1 for gamma in (0,1];
    gamma = 1 is the identity. Used as the probability-weighting curve for
    prospect-theory values.
    """
    if not -PROBABILITY_TOLERANCE <= p <= 1.0 + PROBABILITY_TOLERANCE:
        raise ValueError(f"probability {p} outside [0,1]")
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    return math.exp(-((-math.log(p)) ** gamma))


@dataclass(frozen=True)
class ProspectSpec:
    """Parameters of a prospect-theory evaluation.

    The value function is piecewise power around the reference point:
    v(d) = d**gain_exponent for gains d >= 0 and
    v(d) = -loss_aversion * (-d)**loss_exponent for losses, giving the
    classic concave-gain / convex-loss shape. Probability weighting is the
    Prelec curve; ``weighting_gamma = 1`` means probabilities are used
    as-is.
    """

    reference_point: float = 0.0
    gain_exponent: float = 1.0
    loss_exponent: float = 1.0
    loss_aversion: float = 1.0
    weighting_gamma: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.gain_exponent <= 1.0:
            raise ValueError(f"gain exponent must be in (0,1], got {self.gain_exponent}")
        if not 0.0 < self.loss_exponent <= 1.0:
            raise ValueError(f"loss exponent must be in (0,1], got {self.loss_exponent}")
        if self.loss_aversion < 1.0:
            raise ValueError(f"loss aversion must be >= 1, got {self.loss_aversion}")
        if not 0.0 < self.weighting_gamma <= 1.0:
            raise ValueError(f"weighting gamma must be in (0,1], got {self.weighting_gamma}")

    def value(self, outcome: float) -> float:
        """Reference-dependent value of a raw outcome."""
        d = outcome - self.reference_point
        if d >= 0:
            return d ** self.gain_exponent
        return -self.loss_aversion * ((-d) ** self.loss_exponent)

    def weight(self, p: float) -> float:
        return prelec_weight(p, self.weighting_gamma)


# ---------------------------------------------------------------------------
# Model evaluation
# ---------------------------------------------------------------------------


def expected_utility(lottery: Lottery, u: UtilityFunction) -> float:
    """Probability-weighted average utility of the lottery's outcomes."""
    total = 0.0
    for i, (p, x) in enumerate(lottery.branches):
        try:
            ux = u(x)
        except DomainError as exc:
            raise DomainError(f"branch {i} (p={p}, outcome={x}): {exc}") from exc
        total += p * ux
    return total


def _ranked_utilities(lottery: Lottery, u: UtilityFunction) -> list[tuple[float, float]]:
    """(probability, utility) pairs sorted ascending by utility.

    Equal-outcome branches are merged first so rank-dependent evaluation
    does not depend on how a branch happens to be split.
    """
    merged = lottery.merged()
    pairs = []
    for i, (p, x) in enumerate(merged.branches):
        try:
            pairs.append((p, u(x)))
        except DomainError as exc:
            raise DomainError(f"branch {i} (p={p}, outcome={x}): {exc}") from exc
    pairs.sort(key=lambda pair: pair[1])
    return pairs


def expected_utility_rank_form(lottery: Lottery, u: UtilityFunction) -> float:
    """Expected utility written as a worst-case baseline plus increments.

    Sort outcomes from worst to best; the value is the worst outcome's
    utility plus, for each better outcome, the probability of reaching at
    least that outcome times the utility increment over its predecessor.
    Algebraically identical to :func:`expected_utility`.
    """
    pairs = _ranked_utilities(lottery, u)
    value = pairs[0][1]
    tail = math.fsum(p for p, _ in pairs)
    for i in range(1, len(pairs)):
        tail -= pairs[i - 1][0]
        value += tail * (pairs[i][1] - pairs[i - 1][1])
    return value


def reu(lottery: Lottery, u: UtilityFunction, r: RiskFunction) -> float:
    """Risk-weighted expected utility.

    The rank form with the risk function applied to each tail cumulative
    probability: the chance of improving on the worst case is distorted
    by ``r`` before weighting the utility increments. ``IdentityRisk``
    recovers plain expected utility.
    """
    pairs = _ranked_utilities(lottery, u)
    value = pairs[0][1]
    tail = math.fsum(p for p, _ in pairs)
    for i in range(1, len(pairs)):
        tail -= pairs[i - 1][0]
        value += r(min(max(tail, 0.0), 1.0)) * (pairs[i][1] - pairs[i - 1][1])
    return value


def wlu(lottery: Lottery, u: UtilityFunction, w: OutcomeWeightFunction) -> float:
    """Weighted-linear utility.

    Each outcome's probability-utility product is scaled by its relative
    weight w(x_i) / sum_j w(x_j) p_j. With the damping weight this shifts
    decision weight toward worse outcomes; any constant weight cancels and
    recovers expected utility.
    """
    weights = []
    for i, (p, x) in enumerate(lottery.branches):
        try:
            weights.append(w(x))
        except DomainError as exc:
            raise DomainError(f"branch {i} (p={p}, outcome={x}): {exc}") from exc
    denom = math.fsum(wi * p for wi, (p, _) in zip(weights, lottery.branches))
    if denom <= 0.0:
        raise DegenerateWeightError(f"weight normaliser must be > 0, got {denom}")
    total = 0.0
    for wi, (p, x) in zip(weights, lottery.branches):
        try:
            ux = u(x)
        except DomainError as exc:
            raise DomainError(f"branch (p={p}, outcome={x}): {exc}") from exc
        total += (wi / denom) * p * ux
    return total


def pt_value(lottery: Lottery, spec: ProspectSpec) -> float:
    """Prospect-theory value: sum of weighted probabilities times the
    reference-dependent value of each outcome (separable form).

    Equal outcomes are combined before weighting, so the value does not
    depend on how a branch happens to be split.
    """
    return math.fsum(spec.weight(p) * spec.value(x) for p, x in lottery.merged().branches)


# ---------------------------------------------------------------------------
# Model specifications (family + parameter vector)
# ---------------------------------------------------------------------------

FAMILIES = ("eu", "reu", "wlu", "pt")

_REQUIRED_PARAMS = {
    "eu": ("alpha",),
    "reu": ("alpha", "k"),
    "wlu": ("alpha",),
    "pt": ("alpha", "beta", "loss_aversion", "gamma", "reference"),
}


@dataclass(frozen=True)
class ModelSpec:
    """A decision-model family plus its parameter vector.

    Parameter names per family:

    - ``eu``:  alpha (utility curvature; 1 = linear)
    - ``reu``: alpha, k (risk-function exponent)
    - ``wlu``: alpha (outcome weight fixed to quartic-root damping)
    - ``pt``:  alpha, beta, loss_aversion, gamma, reference

    Utility curvature uses the sign-symmetric power form, so every family
    is defined for gains and losses alike and u(1) = 1 pins the scale.
    """

    family: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown model family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "params", dict(self.params))
        missing = [name for name in _REQUIRED_PARAMS[self.family] if name not in self.params]
        if missing:
            raise ValueError(f"family {self.family!r} missing parameters {missing}")

    # --- constructors -----------------------------------------------------

    @classmethod
    def eu(cls, alpha: float = 1.0) -> "ModelSpec":
        return cls("eu", {"alpha": alpha})

    @classmethod
    def reu(cls, k: float, alpha: float = 1.0) -> "ModelSpec":
        return cls("reu", {"alpha": alpha, "k": k})

    @classmethod
    def wlu(cls, alpha: float = 1.0) -> "ModelSpec":
        return cls("wlu", {"alpha": alpha})

    @classmethod
    def pt(
        cls,
        alpha: float = 1.0,
        beta: float = 1.0,
        loss_aversion: float = 1.0,
        gamma: float = 1.0,
        reference: float = 0.0,
    ) -> "ModelSpec":
        return cls(
            "pt",
            {
                "alpha": alpha,
                "beta": beta,
                "loss_aversion": loss_aversion,
                "gamma": gamma,
                "reference": reference,
            },
        )

    # --- evaluation --------------------------------------------------------

    def utility(self) -> UtilityFunction:
        if self.family == "pt":
            raise ValueError("prospect-theory specs use a value function, not a utility")
        alpha = self.params["alpha"]
        if alpha == 1.0:
            return LinearUtility()
        return ReflectedPowerUtility(alpha)

    def prospect(self) -> ProspectSpec:
        if self.family != "pt":
            raise ValueError(f"family {self.family!r} has no prospect parameters")
        return ProspectSpec(
            reference_point=self.params["reference"],
            gain_exponent=self.params["alpha"],
            loss_exponent=self.params["beta"],
            loss_aversion=self.params["loss_aversion"],
            weighting_gamma=self.params["gamma"],
        )

    def value(self, lottery: Lottery) -> float:
        """Evaluate the lottery under this model."""
        if self.family == "eu":
            return expected_utility(lottery, self.utility())
        if self.family == "reu":
            return reu(lottery, self.utility(), PowerRisk(self.params["k"]))
        if self.family == "wlu":
            return wlu(lottery, self.utility(), QuarticRootDampingWeight())
        return pt_value(lottery, self.prospect())

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, payload: Mapping) -> "ModelSpec":
        return cls(payload["family"], dict(payload["params"]))


# ---------------------------------------------------------------------------
# Certainty equivalents and risk premiums
# ---------------------------------------------------------------------------


def certainty_equivalent(lottery: Lottery, model: ModelSpec) -> float:
    """The sure amount the model values exactly like the lottery.

    Solves value({1: c}) = value(lottery) for c by monotone bisection on
    [min outcome, max outcome] to absolute tolerance 1e-7. Raises
    :class:`BracketError` if the model value falls outside the value range
    of sure outcomes over that interval.
    """
    target = model.value(lottery)
    lo = min(lottery.outcomes)
    hi = max(lottery.outcomes)
    if lo == hi:
        return lo

    def sure_value(c: float) -> float:
        return model.value(Lottery.degenerate(c))

    f_lo = sure_value(lo) - target
    f_hi = sure_value(hi) - target
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo > 0.0 or f_hi < 0.0:
        raise BracketError(
            f"model value {target} not bracketed by sure-outcome values on [{lo}, {hi}]"
        )
    for _ in range(CE_MAX_ITERATIONS):
        mid = 0.5 * (lo + hi)
        if hi - lo <= CE_TOLERANCE:
            return mid
        if sure_value(mid) - target <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def risk_premium(lottery: Lottery, model: ModelSpec) -> float:
    """Expected value forgone for certainty: EV minus certainty equivalent.

    Positive for risk-averse models on nondegenerate lotteries.
    """
    return lottery.expected_value - certainty_equivalent(lottery, model)
