"""Risk-attitude elicitation instruments and session logic.

Covers the standard battery of elicitation protocols:

- multiple price lists (the Holt & Laury 2002 ten-decision task),
- random lottery pairs,
- ordered lottery menus (abstract three-option list and the
  100,000-euro investment menu of Dohmen et al. 2005),
- the 0-10 general-risk self-report question with its five-category
  classification,
- the two-question common-consequence battery (Allais 1953).

Also provides switch-point analysis of price-list answers, adaptive
question selection (bisection over the switch row, information-targeted
random pairs), and CSV import/export of recorded choices.
"""

from __future__ import annotations

import csv
import io
import random
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Optional, Sequence

from .models import Lottery, ModelSpec

DEFAULT_QUESTION_BUDGET = 20

CSV_HEADER = [
    "session_id",
    "question_id",
    "protocol",
    "option_a_json",
    "option_b_json",
    "chosen",
    "timestamp_iso8601",
]


class ElicitationError(ValueError):
    """Invalid elicitation input (answers, grids, scores)."""


class DegenerateGridError(ElicitationError):
    """The random-pair grids admit only one lottery, so no distinct pair exists."""


class SessionClosedError(ElicitationError):
    """An answer was submitted to a completed session."""


# ---------------------------------------------------------------------------
# Questions and recorded choices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Question:
    """A single elicitation item.

    ``kind`` is ``pair`` (choose option A or B), ``scale`` (integer answer
    on [scale_min, scale_max]) or ``menu`` (pick one option index).
    """

    question_id: str
    kind: str
    prompt: str = ""
    option_a: Optional[Lottery] = None
    option_b: Optional[Lottery] = None
    options: Optional[tuple[Lottery, ...]] = None
    row: Optional[int] = None
    scale_min: int = 0
    scale_max: int = 10

    def valid_answers(self) -> list[str]:
        if self.kind == "pair":
            return ["A", "B"]
        if self.kind == "scale":
            return [str(v) for v in range(self.scale_min, self.scale_max + 1)]
        return [str(i) for i in range(len(self.options or ()))]

    def to_dict(self) -> dict:
        payload: dict = {"question_id": self.question_id, "kind": self.kind, "prompt": self.prompt}
        if self.kind == "pair":
            payload["option_a"] = self.option_a.to_pairs()
            payload["option_b"] = self.option_b.to_pairs()
            if self.row is not None:
                payload["row"] = self.row
        elif self.kind == "scale":
            payload["scale_min"] = self.scale_min
            payload["scale_max"] = self.scale_max
        else:
            payload["options"] = [opt.to_pairs() for opt in self.options]
        return payload


@dataclass(frozen=True)
class ChoiceRecord:
    """One observed answer to a paired-lottery question."""

    session_id: str
    question_id: str
    protocol: str
    option_a: Lottery
    option_b: Lottery
    chosen: str
    timestamp: str

    def __post_init__(self):
        if self.chosen not in ("A", "B"):
            raise ElicitationError(f"chosen must be 'A' or 'B', got {self.chosen!r}")

    @property
    def chosen_lottery(self) -> Lottery:
        return self.option_a if self.chosen == "A" else self.option_b


def write_records_csv(records: Iterable[ChoiceRecord], stream) -> None:
    """Write choice records in the interchange CSV format."""
    import json

    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(
            [
                rec.session_id,
                rec.question_id,
                rec.protocol,
                json.dumps(rec.option_a.to_pairs()),
                json.dumps(rec.option_b.to_pairs()),
                rec.chosen,
                rec.timestamp,
            ]
        )


def records_to_csv(records: Iterable[ChoiceRecord]) -> str:
    buf = io.StringIO()
    write_records_csv(records, buf)
    return buf.getvalue()


def read_records_csv(stream) -> list[ChoiceRecord]:
    import json

    reader = csv.reader(stream)
    header = next(reader, None)
    if header != CSV_HEADER:
        raise ElicitationError(f"unexpected CSV header {header!r}")
    records = []
    for row in reader:
        if not row:
            continue
        session_id, question_id, protocol, a_json, b_json, chosen, timestamp = row
        records.append(
            ChoiceRecord(
                session_id=session_id,
                question_id=question_id,
                protocol=protocol,
                option_a=Lottery.from_pairs(json.loads(a_json)),
                option_b=Lottery.from_pairs(json.loads(b_json)),
                chosen=chosen,
                timestamp=timestamp,
            )
        )
    return records


# ---------------------------------------------------------------------------
# Multiple price list (Holt-Laury)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PriceList:
    """An ordered battery of safe-vs-risky paired lotteries.

    The expected-value advantage of the safe option must fall strictly
    down the rows, so a single switch row summarises a respondent.
    """

    label: str
    scale: float
    rows: tuple[tuple[Lottery, Lottery], ...]

    def __post_init__(self):
        if len(self.rows) < 2:
            raise ElicitationError("a price list needs at least two rows")
        diffs = self.ev_differences()
        for d0, d1 in zip(diffs, diffs[1:]):
            if not d1 < d0:
                raise ElicitationError("price-list EV differences must be strictly decreasing")

    def ev_differences(self) -> list[float]:
        """EV(option A) - EV(option B), row by row."""
        return [a.expected_value - b.expected_value for a, b in self.rows]

    def question(self, row: int) -> Question:
        a, b = self.rows[row - 1]
        return Question(
            question_id=f"mpl-row-{row}",
            kind="pair",
            prompt=f"Row {row}: option A or option B?",
            option_a=a,
            option_b=b,
            row=row,
        )


def holt_laury_list(scale: float = 1.0) -> PriceList:
    """The ten paired lottery-choice decisions, scaled by ``scale``.

    Row i pays option A = {i/10: 2.00s, (10-i)/10: 1.60s} against
    option B = {i/10: 3.85s, (10-i)/10: 0.10s}. Zero-probability branches
    are dropped, so row 10 is a pair of sure things.
    """
    if scale <= 0:
        raise ElicitationError(f"scale must be > 0, got {scale}")
    rows = []
    for i in range(1, 11):
        p = i / 10.0
        a = Lottery([(p, 2.00 * scale), (1.0 - p, 1.60 * scale)]).merged()
        b = Lottery([(p, 3.85 * scale), (1.0 - p, 0.10 * scale)]).merged()
        rows.append((a, b))
    return PriceList(label="holt-laury", scale=scale, rows=tuple(rows))


@dataclass(frozen=True)
class SwitchPointResult:
    """Switch-row analysis of a full price-list answer pattern.

    ``switch_row`` is the first row where B was chosen (None if the
    respondent never switched); ``classification`` is neutral at row 5,
    averse later, seeking earlier; inconsistent patterns (more than one
    safe-to-risky crossover) carry the crossover count instead.
    """

    switch_row: Optional[int]
    classification: str
    crossovers: int

    @property
    def consistent(self) -> bool:
        return self.classification != "inconsistent"


def switch_point(choices: Sequence[str], rows: int = 10) -> SwitchPointResult:
    """Locate the safe-to-risky crossover in a full answer pattern.

    Expects one 'A'/'B' answer per price-list row. A pattern is consistent
    when it is a block of A's followed by a block of B's; the crossover
    count includes an initial B (switching before row 1).
    """
    if len(choices) != rows:
        raise ElicitationError(f"expected {rows} choices, got {len(choices)}")
    pattern = [c.upper() for c in choices]
    for c in pattern:
        if c not in ("A", "B"):
            raise ElicitationError(f"choices must be 'A' or 'B', got {c!r}")
    padded = ["A"] + pattern
    crossovers = sum(1 for prev, cur in zip(padded, padded[1:]) if prev == "A" and cur == "B")
    monotone = all(not (prev == "B" and cur == "A") for prev, cur in zip(padded, padded[1:]))
    if not monotone or crossovers > 1:
        return SwitchPointResult(None, "inconsistent", crossovers)
    if "B" not in pattern:
        return SwitchPointResult(None, "averse", 0)
    row = pattern.index("B") + 1
    return SwitchPointResult(row, classify_switch_row(row), crossovers)


def classify_switch_row(row: Optional[int]) -> str:
    """Neutral exactly at the EV-crossing row 5; later is averse, earlier seeking."""
    if row is None or row > 5:
        return "averse"
    if row == 5:
        return "neutral"
    return "seeking"


def deterministic_answers(price_list: PriceList, model: ModelSpec) -> list[str]:
    """Answers of a noiseless value maximiser; indifference resolves to A."""
    return [
        "A" if model.value(a) >= model.value(b) else "B"
        for a, b in price_list.rows
    ]


# ---------------------------------------------------------------------------
# Random lottery pairs and ordered menus
# ---------------------------------------------------------------------------


def random_pair(
    rng: random.Random | int,
    outcomes: Sequence[float],
    probabilities: Sequence[float],
) -> tuple[Lottery, Lottery]:
    """Draw two distinct two-branch lotteries from the given grids.

    Deterministic given the seed. Raises :class:`DegenerateGridError` when
    the grids admit only one lottery (e.g. a single outcome), detected
    after a bounded number of rejected draws.
    """
    if not outcomes or not probabilities:
        raise ElicitationError("outcome and probability grids must be nonempty")
    for p in probabilities:
        if not 0.0 <= p <= 1.0:
            raise ElicitationError(f"probability grid value {p} outside [0,1]")
    if isinstance(rng, int):
        rng = random.Random(rng)

    def draw() -> Lottery:
        p = rng.choice(list(probabilities))
        x1 = rng.choice(list(outcomes))
        x2 = rng.choice(list(outcomes))
        return Lottery([(p, x1), (1.0 - p, x2)]).merged()

    first = draw()
    for _ in range(100):
        second = draw()
        if second.branches != first.branches:
            return first, second
    raise DegenerateGridError("grids admit only one lottery; cannot draw a distinct pair")


def ordered_menu(kind: str = "investment") -> list[Lottery]:
    """An ordered set of lotteries for pick-your-favourite elicitation.

    ``abstract``   -- three options: a long shot (0.1: 100 / 0.9: 0), a
                      middling bet (0.5: 10 / 0.5: 1), and a sure 4.
    ``investment`` -- you hold 100,000; invest 0/20k/40k/60k/80k/100k in an
                      asset with equal chances of doubling or halving the
                      invested part, keeping the remainder.
    """
    if kind == "abstract":
        return [
            Lottery([(0.1, 100.0), (0.9, 0.0)]),
            Lottery([(0.5, 10.0), (0.5, 1.0)]),
            Lottery.degenerate(4.0),
        ]
    if kind == "investment":
        total = 100_000.0
        menu = []
        for invested in (0.0, 20_000.0, 40_000.0, 60_000.0, 80_000.0, 100_000.0):
            kept = total - invested
            menu.append(
                Lottery([(0.5, kept + 2.0 * invested), (0.5, kept + 0.5 * invested)]).merged()
            )
        return menu
    raise ElicitationError(f"unknown menu kind {kind!r}")


# ---------------------------------------------------------------------------
# General-risk self-report classification
# ---------------------------------------------------------------------------


class RiskCategory(str, Enum):
    EXTREME_AVERSION = "ExtremeAversion"
    ADDITIONAL_AVERSION = "AdditionalAversion"
    DEFAULT = "Default"
    ADDITIONAL_LOVE = "AdditionalLove"
    EXTREME_LOVE = "ExtremeLove"


@dataclass(frozen=True)
class RiskClass:
    """One of five discrete risk-attitude categories with its score range."""

    category: RiskCategory
    score_range: tuple[int, int]


RISK_CLASSES = (
    RiskClass(RiskCategory.EXTREME_AVERSION, (0, 1)),
    RiskClass(RiskCategory.ADDITIONAL_AVERSION, (2, 3)),
    RiskClass(RiskCategory.DEFAULT, (4, 6)),
    RiskClass(RiskCategory.ADDITIONAL_LOVE, (7, 8)),
    RiskClass(RiskCategory.EXTREME_LOVE, (9, 10)),
)

GENERAL_RISK_PROMPT = (
    "How willing are you to take risks, in general? "
    "Answer with an integer from 0 (not at all willing) to 10 (very willing)."
)


def dohmen_classify(score: int) -> RiskClass:
    """Map a 0-10 general-risk self-report score to its risk class."""
    if not isinstance(score, int) or isinstance(score, bool):
        raise ElicitationError(f"score must be an integer, got {score!r}")
    if not 0 <= score <= 10:
        raise ElicitationError(f"score must be in 0..10, got {score}")
    for rc in RISK_CLASSES:
        lo, hi = rc.score_range
        if lo <= score <= hi:
            return rc
    raise AssertionError("score ranges must partition 0..10")


# Switch rows 1..10 (11 = never switched) folded onto the five classes:
# earlier switches are riskier, row 5 is the EV-neutral crossover.
_SWITCH_ROW_CLASS = {
    1: RiskCategory.EXTREME_LOVE,
    2: RiskCategory.EXTREME_LOVE,
    3: RiskCategory.ADDITIONAL_LOVE,
    4: RiskCategory.ADDITIONAL_LOVE,
    5: RiskCategory.DEFAULT,
    6: RiskCategory.DEFAULT,
    7: RiskCategory.ADDITIONAL_AVERSION,
    8: RiskCategory.ADDITIONAL_AVERSION,
    9: RiskCategory.EXTREME_AVERSION,
    10: RiskCategory.EXTREME_AVERSION,
    11: RiskCategory.EXTREME_AVERSION,
}


def class_for_switch_row(row: Optional[int]) -> RiskClass:
    key = 11 if row is None else row
    category = _SWITCH_ROW_CLASS[key]
    return next(rc for rc in RISK_CLASSES if rc.category == category)


def class_for_category(category: RiskCategory | str) -> RiskClass:
    category = RiskCategory(category)
    return next(rc for rc in RISK_CLASSES if rc.category == category)


# ---------------------------------------------------------------------------
# Common-consequence battery (Allais)
# ---------------------------------------------------------------------------

MILLION = 1_000_000.0

ALLAIS_FIRST = (
    Lottery.degenerate(MILLION),
    Lottery([(0.89, MILLION), (0.01, 0.0), (0.10, 5 * MILLION)]),
)
ALLAIS_SECOND = (
    Lottery([(0.89, 0.0), (0.11, MILLION)]),
    Lottery([(0.90, 0.0), (0.10, 5 * MILLION)]),
)


def allais_battery() -> tuple[Question, Question]:
    """The two paired questions of the common-consequence test.

    Question 1: sure $1M (A) against {.89: $1M, .01: $0, .10: $5M} (B).
    Question 2: {.89: $0, .11: $1M} (A, classically 'C') against
    {.90: $0, .10: $5M} (B, classically 'D').
    """
    q1 = Question(
        question_id="allais-1",
        kind="pair",
        prompt="Question 1: option A or option B?",
        option_a=ALLAIS_FIRST[0],
        option_b=ALLAIS_FIRST[1],
    )
    q2 = Question(
        question_id="allais-2",
        kind="pair",
        prompt="Question 2: option A or option B?",
        option_a=ALLAIS_SECOND[0],
        option_b=ALLAIS_SECOND[1],
    )
    return q1, q2


@dataclass(frozen=True)
class AllaisResult:
    eu_consistent: bool
    pattern: str


def allais_consistency(first_choice: str, second_choice: str) -> AllaisResult:
    """Whether the two answers can come from one expected-utility maximiser.

    With u(0) = 0, preferring the sure million is equivalent to preferring
    the 0.11 shot at it, so only the two aligned patterns (AC, BD) are
    consistent; the crossing patterns (AD, BC) are not.
    """
    if first_choice not in ("A", "B") or second_choice not in ("A", "B"):
        raise ElicitationError("both answers must be 'A' or 'B'")
    pattern = first_choice + ("C" if second_choice == "A" else "D")
    return AllaisResult(eu_consistent=pattern in ("AC", "BD"), pattern=pattern)


# ---------------------------------------------------------------------------
# Sessions and adaptive question selection
# ---------------------------------------------------------------------------

PROTOCOLS = ("MPL", "RandomPairs", "OrderedMenu", "GeneralRisk", "Allais")

RANDOM_PAIR_OUTCOMES = tuple(float(v) for v in range(0, 101, 10))
RANDOM_PAIR_PROBABILITIES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
RANDOM_PAIR_POOL = 40


@dataclass
class SessionState:
    """State of one elicitation session.

    A single-writer state machine: questions are derived deterministically
    from the protocol, seed, and answers so far, which makes sessions
    replayable from their answer log. ``bracket`` tracks the open interval
    of possible switch rows for adaptive price lists (11 = never
    switches).
    """

    protocol: str
    session_id: str = ""
    seed: int = 0
    budget: int = DEFAULT_QUESTION_BUDGET
    adaptive: bool = True
    created_at: str = ""
    answers: list[dict] = field(default_factory=list)
    status: str = "open"

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ElicitationError(f"unknown protocol {self.protocol!r}; expected one of {PROTOCOLS}")
        if self.budget < 1:
            raise ElicitationError(f"question budget must be >= 1, got {self.budget}")
        if not self.session_id:
            self.session_id = str(uuid.uuid4())
        if not self.created_at:
            self.created_at = datetime.now(timezone.utc).isoformat()
        if self.protocol == "MPL":
            self.price_list = holt_laury_list(1.0)
        elif self.protocol == "RandomPairs":
            rng = random.Random(self.seed)
            self.pair_pool = []
            for i in range(RANDOM_PAIR_POOL):
                a, b = random_pair(rng, RANDOM_PAIR_OUTCOMES, RANDOM_PAIR_PROBABILITIES)
                self.pair_pool.append(
                    Question(
                        question_id=f"pair-{i}",
                        kind="pair",
                        prompt="Option A or option B?",
                        option_a=a,
                        option_b=b,
                    )
                )
        elif self.protocol == "OrderedMenu":
            self.menu = ordered_menu("investment")
        self._refresh_status()

    # -- derived quantities --------------------------------------------------

    @property
    def bracket(self) -> Optional[tuple[int, int]]:
        """Remaining switch-row interval for MPL sessions (11 = never)."""
        if self.protocol != "MPL":
            return None
        lo, hi = 1, 11
        for ans in self.answers:
            row = int(ans["question_id"].rsplit("-", 1)[1])
            if ans["chosen"] == "A":
                lo = max(lo, row + 1)
            else:
                hi = min(hi, row)
        return lo, hi

    def asked_question_ids(self) -> list[str]:
        ids = [ans["question_id"] for ans in self.answers]
        pending = self.next_question()
        if pending is not None:
            ids.append(pending.question_id)
        return ids

    def _answered(self, question_id: str) -> bool:
        return any(ans["question_id"] == question_id for ans in self.answers)

    # -- question selection ----------------------------------------------------

    def next_question(self) -> Optional[Question]:
        """The next question to ask, or None when the session is done.

        Pure: repeated calls without new answers return the same item.
        """
        cached = getattr(self, "_next_cache", None)
        if cached is not None and cached[0] == len(self.answers):
            return cached[1]
        question = self._select_question()
        self._next_cache = (len(self.answers), question)
        return question

    def _select_question(self) -> Optional[Question]:
        if self.status == "complete" or len(self.answers) >= self.budget:
            return None
        if self.protocol == "GeneralRisk":
            if self._answered("general-risk"):
                return None
            return Question(question_id="general-risk", kind="scale", prompt=GENERAL_RISK_PROMPT)
        if self.protocol == "OrderedMenu":
            if self._answered("menu-investment"):
                return None
            return Question(
                question_id="menu-investment",
                kind="menu",
                prompt="Pick the option you like best.",
                options=tuple(self.menu),
            )
        if self.protocol == "Allais":
            q1, q2 = allais_battery()
            if not self._answered(q1.question_id):
                return q1
            if not self._answered(q2.question_id):
                return q2
            return None
        if self.protocol == "MPL":
            if self.adaptive:
                lo, hi = self.bracket
                if lo >= hi:
                    return None
                row = (lo + hi - 1) // 2
                return self.price_list.question(row)
            row = len(self.answers) + 1
            if row > len(self.price_list.rows):
                return None
            return self.price_list.question(row)
        # RandomPairs: ask the candidate whose predicted choice probability
        # under the current fit is closest to a coin flip.
        remaining = [q for q in self.pair_pool if not self._answered(q.question_id)]
        if not remaining:
            return None
        if not self.answers:
            return remaining[0]
        model, sharpness = self._interim_fit()
        from .calibration import choice_probability

        def informativeness(q: Question) -> float:
            return abs(choice_probability(q.option_a, q.option_b, model, sharpness) - 0.5)

        return min(remaining, key=informativeness)

    def _interim_fit(self) -> tuple[ModelSpec, float]:
        from .calibration import fit

        result = fit(self.to_records(), "reu", refine=False)
        return result.model, result.choice_sharpness

    # -- answering ---------------------------------------------------------------

    def answer(self, question_id: str, chosen: str, timestamp: Optional[str] = None) -> None:
        """Record an answer to the currently pending question."""
        if self.status == "complete":
            raise SessionClosedError(f"session {self.session_id} is complete")
        pending = self.next_question()
        if pending is None or pending.question_id != question_id:
            raise ElicitationError(f"question {question_id!r} is not awaiting an answer")
        chosen = str(chosen).strip()
        if pending.kind == "pair":
            chosen = chosen.upper()
        if chosen not in pending.valid_answers():
            raise ElicitationError(
                f"invalid answer {chosen!r} for question {question_id!r}"
            )
        self.answers.append(
            {
                "question_id": question_id,
                "chosen": chosen,
                "timestamp": timestamp or datetime.now(timezone.utc).isoformat(),
            }
        )
        self._refresh_status()

    def _refresh_status(self) -> None:
        if self.next_question() is None:
            self.status = "complete"

    # -- results -------------------------------------------------------------------

    def to_records(self) -> list[ChoiceRecord]:
        """Recorded pair answers as choice records (pair protocols only)."""
        records = []
        lookup = {}
        if self.protocol == "MPL":
            lookup = {f"mpl-row-{i}": pair for i, pair in enumerate(self.price_list.rows, start=1)}
        elif self.protocol == "RandomPairs":
            lookup = {q.question_id: (q.option_a, q.option_b) for q in self.pair_pool}
        elif self.protocol == "Allais":
            lookup = {"allais-1": ALLAIS_FIRST, "allais-2": ALLAIS_SECOND}
        for ans in self.answers:
            if ans["question_id"] not in lookup:
                continue
            a, b = lookup[ans["question_id"]]
            records.append(
                ChoiceRecord(
                    session_id=self.session_id,
                    question_id=ans["question_id"],
                    protocol=self.protocol,
                    option_a=a,
                    option_b=b,
                    chosen=ans["chosen"],
                    timestamp=ans["timestamp"],
                )
            )
        return records

    def results(self) -> dict:
        """Protocol-specific outcome summary (meaningful once complete)."""
        out: dict = {"protocol": self.protocol, "status": self.status}
        if self.protocol == "GeneralRisk":
            if self.answers:
                score = int(self.answers[0]["chosen"])
                rc = dohmen_classify(score)
                out.update(score=score, risk_class=rc.category.value, score_range=list(rc.score_range))
        elif self.protocol == "OrderedMenu":
            if self.answers:
                pick = int(self.answers[0]["chosen"])
                rc = _MENU_PICK_CLASS[pick]
                out.update(menu_pick=pick, risk_class=rc.value)
        elif self.protocol == "Allais":
            if len(self.answers) == 2:
                by_id = {ans["question_id"]: ans["chosen"] for ans in self.answers}
                res = allais_consistency(by_id["allais-1"], by_id["allais-2"])
                out.update(eu_consistent=res.eu_consistent, pattern=res.pattern)
        elif self.protocol == "MPL":
            if self.adaptive:
                lo, hi = self.bracket
                out["bracket"] = [lo, hi]
                if lo >= hi:
                    row = None if lo >= 11 else lo
                    out.update(
                        switch_row=row,
                        classification=classify_switch_row(row),
                        risk_class=class_for_switch_row(row).category.value,
                    )
            elif len(self.answers) == len(self.price_list.rows):
                pattern = [ans["chosen"] for ans in self.answers]
                sp = switch_point(pattern)
                out.update(
                    switch_row=sp.switch_row,
                    classification=sp.classification,
                    crossovers=sp.crossovers,
                )
                if sp.consistent:
                    out["risk_class"] = class_for_switch_row(sp.switch_row).category.value
        elif self.protocol == "RandomPairs":
            if self.status == "complete" and self.answers:
                from .calibration import fit, risk_class_for_model

                fit_result = fit(self.to_records(), "reu")
                out["fit"] = fit_result.to_dict()
                out["risk_class"] = risk_class_for_model(fit_result.model).category.value
        return out


# Investment-menu picks (0 = invest nothing ... 5 = invest everything)
# folded onto the five classes.
_MENU_PICK_CLASS = {
    0: RiskCategory.EXTREME_AVERSION,
    1: RiskCategory.ADDITIONAL_AVERSION,
    2: RiskCategory.DEFAULT,
    3: RiskCategory.DEFAULT,
    4: RiskCategory.ADDITIONAL_LOVE,
    5: RiskCategory.EXTREME_LOVE,
}


def adaptive_next_question(state: SessionState) -> Optional[Question]:
    """Next most informative question for the session, or None when done."""
    if state.status == "complete":
        return None
    return state.next_question()
