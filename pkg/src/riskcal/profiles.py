"""Assembling a session's risk profile with its policy preview."""

from __future__ import annotations

from .elicitation import SessionState, class_for_category
from .policy import airport_policy, portfolio_for_class


def build_profile(state: SessionState) -> dict:
    """Class, fit, and policy preview for a completed session."""
    results = state.results()
    profile: dict = {
        "session_id": state.session_id,
        "protocol": state.protocol,
        "status": state.status,
        "results": results,
        "risk_class": None,
        "policy_preview": None,
    }
    category = results.get("risk_class")
    if category is not None:
        risk_class = class_for_category(category)
        portfolio = portfolio_for_class(risk_class)
        profile["risk_class"] = {
            "category": risk_class.category.value,
            "score_range": list(risk_class.score_range),
        }
        profile["policy_preview"] = {
            "airport_lead_hours": airport_policy(risk_class),
            "portfolio": {
                "name": portfolio.name,
                "stocks_pct": portfolio.stocks_pct,
                "bonds_pct": portfolio.bonds_pct,
                "cash_pct": portfolio.cash_pct,
                "annualized_return_pct": portfolio.annualized_return_pct,
                "volatility_pct": portfolio.volatility_pct,
                "max_loss_pct": portfolio.max_loss_pct,
            },
        }
    return profile
