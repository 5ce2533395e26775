"""riskcal: risk-sensitive decision models, elicitation, and calibration."""

from .models import (
    BracketError,
    ConstantWeight,
    DegenerateWeightError,
    DomainError,
    IdentityRisk,
    LinearUtility,
    Lottery,
    LotteryError,
    ModelSpec,
    PowerRisk,
    PowerUtility,
    ProspectSpec,
    QuarticRootDampingWeight,
    ReflectedPowerUtility,
    TableUtility,
    certainty_equivalent,
    expected_utility,
    expected_utility_rank_form,
    mix,
    pt_value,
    reu,
    risk_premium,
    wlu,
)
from .elicitation import (
    ChoiceRecord,
    PriceList,
    Question,
    RiskCategory,
    RiskClass,
    SessionState,
    adaptive_next_question,
    allais_battery,
    allais_consistency,
    dohmen_classify,
    holt_laury_list,
    ordered_menu,
    random_pair,
    switch_point,
)

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ChoiceRecord",
    "ConstantWeight",
    "DegenerateWeightError",
    "DomainError",
    "IdentityRisk",
    "LinearUtility",
    "Lottery",
    "LotteryError",
    "ModelSpec",
    "PowerRisk",
    "PowerUtility",
    "PriceList",
    "ProspectSpec",
    "QuarticRootDampingWeight",
    "Question",
    "ReflectedPowerUtility",
    "RiskCategory",
    "RiskClass",
    "SessionState",
    "TableUtility",
    "adaptive_next_question",
    "allais_battery",
    "allais_consistency",
    "certainty_equivalent",
    "dohmen_classify",
    "expected_utility",
    "expected_utility_rank_form",
    "holt_laury_list",
    "mix",
    "ordered_menu",
    "pt_value",
    "random_pair",
    "reu",
    "risk_premium",
    "switch_point",
    "wlu",
]
