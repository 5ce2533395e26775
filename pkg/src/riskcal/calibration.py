"""Maximum-likelihood fitting of decision models to observed choices.

Choices between lottery pairs are modelled with a logistic link on model
value differences: P(choose A) = sigma(lambda_c * (V(A) - V(B))), where
lambda_c > 0 is the choice-sharpness (precision) parameter. Family
parameters and lambda_c are estimated jointly by a coarse grid search
followed by Nelder-Mead refinement; the value scale is pinned by the
u(1) = 1 normalisation of the power utilities, which resolves the
scale/sharpness degeneracy.

The optimizer is derivative-free throughout because prospect-theory
values are kinked at the reference point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .elicitation import (
    ChoiceRecord,
    Question,
    RiskClass,
    RiskCategory,
    class_for_category,
    holt_laury_list,
)
from .models import FAMILIES, Lottery, ModelSpec, risk_premium

SHARPNESS_BOUNDS = (0.01, 100.0)
GRID_POINTS = 8
REFINE_XTOL = 1e-7
REFINE_FTOL = 1e-9

# Per-family parameter boxes. Wide enough to cover the aversion levels
# typical of price-list experiments while keeping utilities monotone.
PARAM_BOUNDS: dict[str, dict[str, tuple[float, float]]] = {
    "eu": {"alpha": (0.1, 1.0)},
    "reu": {"alpha": (0.1, 1.0), "k": (0.2, 5.0)},
    "wlu": {"alpha": (0.1, 1.0)},
    "pt": {
        "alpha": (0.1, 1.0),
        "beta": (0.1, 1.0),
        "loss_aversion": (1.0, 10.0),
        "gamma": (0.2, 1.0),
    },
}


class CalibrationError(ValueError):
    """Invalid fitting input (no records, bad family, domain violations)."""


# ---------------------------------------------------------------------------
# Stochastic-choice link
# ---------------------------------------------------------------------------


def _logistic(z: float) -> float:
    # Evaluate on |z| and complement for the negative side; this keeps
    # p(a,b) + p(b,a) == 1 exactly in floating point.
    if z == 0.0:
        return 0.5
    t = 1.0 / (1.0 + math.exp(-abs(z)))
    return t if z > 0.0 else 1.0 - t


def choice_probability(a: Lottery, b: Lottery, model: ModelSpec, sharpness: float) -> float:
    """Probability of choosing ``a`` over ``b`` under the logistic link."""
    if sharpness <= 0:
        raise CalibrationError(f"choice sharpness must be > 0, got {sharpness}")
    return _logistic(sharpness * (model.value(a) - model.value(b)))


# ---------------------------------------------------------------------------
# Vectorised likelihood evaluation
# ---------------------------------------------------------------------------


class _BatteryEvaluator:
    """Precomputed arrays for fast model-value evaluation over a record set.

    Lotteries are merged (equal outcomes combined), sorted ascending by
    outcome, and padded to a common branch count. Padding repeats the last
    outcome with zero probability so rank-form increments vanish there.
    Since every utility in the catalogue is strictly increasing, sorting
    by outcome is sorting by utility for every parameter value.
    """

    def __init__(self, records: Sequence[ChoiceRecord]):
        lotteries: list[Lottery] = []
        for rec in records:
            lotteries.append(rec.option_a.merged())
            lotteries.append(rec.option_b.merged())
        width = max(len(lot.branches) for lot in lotteries)
        n = len(lotteries)
        self.probs = np.zeros((n, width))
        self.outcomes = np.zeros((n, width))
        for i, lot in enumerate(lotteries):
            k = len(lot.branches)
            self.probs[i, :k] = [p for p, _ in lot.branches]
            self.outcomes[i, :k] = [x for _, x in lot.branches]
            if k < width:
                self.outcomes[i, k:] = lot.branches[-1][1]
        self.chose_a = np.array([rec.chosen == "A" for rec in records])
        self.n_records = len(records)
        self.has_negative = bool((self.outcomes < 0).any())
        self.all_pairs_identical = all(
            rec.option_a.merged().branches == rec.option_b.merged().branches for rec in records
        )
        # Tail probabilities of the ascending sort: chance of reaching at
        # least outcome j, used by the rank-dependent family.
        self.tails = np.cumsum(self.probs[:, ::-1], axis=1)[:, ::-1]

    def _utilities(self, alpha: float) -> np.ndarray:
        if alpha == 1.0:
            return self.outcomes
        return np.sign(self.outcomes) * np.abs(self.outcomes) ** alpha

    def values(self, family: str, params: dict[str, float]) -> np.ndarray:
        """Model value of every option (2 per record, A then B interleaved)."""
        if family == "eu":
            return np.sum(self.probs * self._utilities(params["alpha"]), axis=1)
        if family == "reu":
            u = self._utilities(params["alpha"])
            weighted = np.clip(self.tails[:, 1:], 0.0, 1.0) ** params["k"]
            return u[:, 0] + np.sum(weighted * np.diff(u, axis=1), axis=1)
        if family == "wlu":
            u = self._utilities(params["alpha"])
            w = 1.0 / (1.0 + np.abs(self.outcomes) ** 0.25)
            denom = np.sum(w * self.probs, axis=1)
            return np.sum(w * self.probs * u, axis=1) / denom
        if family == "pt":
            dev = self.outcomes - params.get("reference", 0.0)
            v = np.where(
                dev >= 0,
                np.abs(dev) ** params["alpha"],
                -params["loss_aversion"] * np.abs(dev) ** params["beta"],
            )
            wp = np.zeros_like(self.probs)
            positive = self.probs > 0.0
            wp[positive] = np.exp(-((-np.log(self.probs[positive])) ** params["gamma"]))
            return np.sum(wp * v, axis=1)
        raise CalibrationError(f"unknown family {family!r}")

    def signed_diffs(self, family: str, params: dict[str, float]) -> np.ndarray:
        """Value difference of each record, oriented toward the chosen option."""
        values = self.values(family, params)
        dv = values[0::2] - values[1::2]
        return np.where(self.chose_a, dv, -dv)

    def log_likelihood(self, family: str, params: dict[str, float], sharpness: float) -> float:
        z = sharpness * self.signed_diffs(family, params)
        return float(-np.sum(np.logaddexp(0.0, -z)))


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    """Fitted model with likelihood-based scores and diagnostics.

    ``aic``/``bic`` count the family parameters plus the shared sharpness
    parameter. Diagnostics carry optimizer iteration counts and any
    identifiability warnings.
    """

    model: ModelSpec
    choice_sharpness: float
    log_likelihood: float
    aic: float
    bic: float
    n_observations: int
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "choice_sharpness": self.choice_sharpness,
            "log_likelihood": self.log_likelihood,
            "aic": self.aic,
            "bic": self.bic,
            "n_observations": self.n_observations,
            "diagnostics": self.diagnostics,
        }


def _grid(lo: float, hi: float, log_scale: bool = False) -> np.ndarray:
    if log_scale:
        return np.geomspace(lo, hi, GRID_POINTS)
    return np.linspace(lo, hi, GRID_POINTS)


def _param_names(family: str) -> list[str]:
    return list(PARAM_BOUNDS[family].keys())


def fit(records: Sequence[ChoiceRecord], family: str, refine: bool = True) -> FitResult:
    """Jointly estimate family parameters and choice sharpness by ML.

    Runs an 8-point-per-dimension grid search over the parameter box
    (sharpness on a log-spaced grid), then refines the best grid point
    with bounded Nelder-Mead. Deterministic for identical inputs.
    """
    if family not in FAMILIES:
        raise CalibrationError(f"unknown family {family!r}; expected one of {FAMILIES}")
    records = list(records)
    if not records:
        raise CalibrationError("cannot fit on an empty record set")
    evaluator = _BatteryEvaluator(records)
    if family == "wlu" and evaluator.has_negative:
        raise CalibrationError(
            "the wlu family's damping weight is undefined for negative outcomes"
        )

    warnings: list[str] = []
    if evaluator.all_pairs_identical:
        warnings.append(
            "all option pairs are identical: choice sharpness is not identified"
        )

    names = _param_names(family)
    bounds = [PARAM_BOUNDS[family][name] for name in names]
    param_grids = [_grid(lo, hi) for lo, hi in bounds]
    sharpness_grid = _grid(*SHARPNESS_BOUNDS, log_scale=True)

    def negative_ll(vector: np.ndarray) -> float:
        params = {name: float(v) for name, v in zip(names, vector[:-1])}
        if family == "pt":
            params["reference"] = 0.0
        return -evaluator.log_likelihood(family, params, float(vector[-1]))

    # Grid pass: the value differences are sharpness-free, so evaluate them
    # once per family-parameter point and sweep the sharpness grid on top.
    best_vector = None
    best_nll = math.inf
    mesh = np.meshgrid(*param_grids, indexing="ij")
    param_points = np.stack([m.ravel() for m in mesh], axis=1)
    for point in param_points:
        params = {name: float(v) for name, v in zip(names, point)}
        if family == "pt":
            params["reference"] = 0.0
        signed = evaluator.signed_diffs(family, params)
        z = sharpness_grid[:, None] * signed[None, :]
        nlls = np.sum(np.logaddexp(0.0, -z), axis=1)
        idx = int(np.argmin(nlls))
        if nlls[idx] < best_nll:
            best_nll = float(nlls[idx])
            best_vector = np.append(point, sharpness_grid[idx])

    iterations = 0
    converged = True
    simplex_size = 0.0
    if refine:
        result = minimize(
            negative_ll,
            best_vector,
            method="Nelder-Mead",
            bounds=bounds + [SHARPNESS_BOUNDS],
            options={"xatol": REFINE_XTOL, "fatol": REFINE_FTOL, "maxiter": 2000},
        )
        if result.fun <= best_nll:
            best_vector = result.x
            best_nll = float(result.fun)
        iterations = int(result.nit)
        converged = bool(result.success)
        final_simplex = getattr(result, "final_simplex", None)
        if final_simplex is not None:
            vertices = final_simplex[0]
            simplex_size = float(np.max(np.abs(vertices - vertices[0])))

    params = {name: float(v) for name, v in zip(names, best_vector[:-1])}
    if family == "pt":
        params["reference"] = 0.0
    sharpness = float(best_vector[-1])
    ll = -best_nll
    n = len(records)
    n_params = len(names) + 1  # family parameters plus sharpness
    return FitResult(
        model=ModelSpec(family, params),
        choice_sharpness=sharpness,
        log_likelihood=ll,
        aic=2.0 * n_params - 2.0 * ll,
        bic=math.log(n) * n_params - 2.0 * ll,
        n_observations=n,
        diagnostics={
            "grid_points": len(param_points) * len(sharpness_grid),
            "refine_iterations": iterations,
            "refine_converged": converged,
            "final_simplex_size": simplex_size,
            "warnings": warnings,
        },
    )


@dataclass(frozen=True)
class ComparisonResult:
    """Per-family fits ranked by BIC (ascending; AIC breaks ties)."""

    ranking: list[str]
    fits: dict[str, FitResult]

    @property
    def best(self) -> FitResult:
        return self.fits[self.ranking[0]]

    def to_dict(self) -> dict:
        return {
            "ranking": self.ranking,
            "fits": {family: result.to_dict() for family, result in self.fits.items()},
        }


def compare(records: Sequence[ChoiceRecord], families: Sequence[str]) -> ComparisonResult:
    """Fit each family to the same records and rank them by BIC."""
    families = list(families)
    if len(families) < 2:
        raise CalibrationError("comparison needs at least two families")
    fits = {family: fit(records, family) for family in families}
    ranking = sorted(families, key=lambda f: (fits[f].bic, fits[f].aic))
    return ComparisonResult(ranking=ranking, fits=fits)


# ---------------------------------------------------------------------------
# Simulated respondents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimAgent:
    """A stochastic respondent with a known generating model.

    Emits exactly one choice per question, sampling from the logistic
    link; exact value ties resolve to the safe option A. Deterministic
    given the seed.
    """

    model: ModelSpec
    sharpness: float
    seed: int = 0
    tie_rule: str = "prefer_a"

    def choose(self, a: Lottery, b: Lottery, rng: random.Random) -> str:
        dv = self.model.value(a) - self.model.value(b)
        if dv == 0.0 and self.tie_rule == "prefer_a":
            return "A"
        p_a = _logistic(self.sharpness * dv)
        return "A" if rng.random() < p_a else "B"


def simulate_battery(agent: SimAgent, questions: Sequence[Question]) -> list[ChoiceRecord]:
    """One simulated choice record per question.

    Timestamps are synthetic (a fixed virtual clock) so simulated record
    sets are byte-stable for a given seed.
    """
    rng = random.Random(agent.seed)
    session_id = f"sim-{agent.model.family}-{agent.seed}"
    records = []
    for i, q in enumerate(questions):
        chosen = agent.choose(q.option_a, q.option_b, rng)
        records.append(
            ChoiceRecord(
                session_id=session_id,
                question_id=q.question_id,
                protocol="Simulated",
                option_a=q.option_a,
                option_b=q.option_b,
                chosen=chosen,
                timestamp=f"2000-01-01T00:{i // 60:02d}:{i % 60:02d}+00:00",
            )
        )
    return records


def price_list_questions(scales: Sequence[float] = (1.0,)) -> list[Question]:
    """All price-list rows at each payoff scale, as pair questions."""
    questions = []
    for scale in scales:
        pl = holt_laury_list(scale)
        for row in range(1, len(pl.rows) + 1):
            a, b = pl.rows[row - 1]
            questions.append(
                Question(
                    question_id=f"hl-s{scale:g}-row-{row}",
                    kind="pair",
                    prompt=f"Scale {scale:g}, row {row}",
                    option_a=a,
                    option_b=b,
                    row=row,
                )
            )
    return questions


RECOVERY_SCALES = (1.0, 5.0, 20.0, 50.0)


def recovery_battery(n_questions: int, scales: Sequence[float] = RECOVERY_SCALES) -> list[Question]:
    """A deterministic question set for parameter-recovery runs.

    Cycles the price-list rows across several payoff scales; the scale
    variation separates utility curvature from probability weighting.
    """
    base = price_list_questions(scales)
    questions = []
    for i in range(n_questions):
        q = base[i % len(base)]
        questions.append(
            Question(
                question_id=f"{q.question_id}-rep{i // len(base)}",
                kind="pair",
                prompt=q.prompt,
                option_a=q.option_a,
                option_b=q.option_b,
                row=q.row,
            )
        )
    return questions


# ---------------------------------------------------------------------------
# Model-based risk classification
# ---------------------------------------------------------------------------

# Reference bet for summarising a fitted model as a relative risk premium:
# an even-chance shot at 100, EV 50.
_REFERENCE_BET = Lottery([(0.5, 100.0), (0.5, 0.0)])


def risk_class_for_model(model: ModelSpec) -> RiskClass:
    """Bucket a fitted model by its relative risk premium on a reference bet.

    The premium forgone for certainty, as a share of the bet's EV, is cut
    at +/-0.15 and +/-0.5: heavy premiums mean extreme aversion, heavy
    negative premiums extreme risk love.
    """
    ev = _REFERENCE_BET.expected_value
    rrp = risk_premium(_REFERENCE_BET, model) / ev
    if rrp >= 0.5:
        category = RiskCategory.EXTREME_AVERSION
    elif rrp >= 0.15:
        category = RiskCategory.ADDITIONAL_AVERSION
    elif rrp > -0.15:
        category = RiskCategory.DEFAULT
    elif rrp > -0.5:
        category = RiskCategory.ADDITIONAL_LOVE
    else:
        category = RiskCategory.EXTREME_LOVE
    return class_for_category(category)
