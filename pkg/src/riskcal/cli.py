"""Command-line interface.

Subcommands:

- ``battery``   print an elicitation instrument (price list, pairs, menu,
                or the two-question common-consequence battery)
- ``simulate``  emit choice records of a simulated respondent as CSV
- ``fit``       fit one model family to recorded choices (JSON out)
- ``compare``   fit several families and rank them by BIC (JSON out)
- ``classify``  map a 0-10 general-risk score to its class and policy preview
- ``elicit``    run a terminal elicitation session and store it
- ``report``    print a stored session's profile and simulated track record;
                with ``--out`` also write the CSV table and figures
- ``serve``     run the JSON API (and web UI bundle, if present)

Exit codes: 0 on success, 1 on usage errors, 2 on data or domain errors.
Diagnostics and prompts go to stderr; ``--format json`` keeps stdout pure
JSON. With an explicit ``--seed``, output is byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import uuid
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .elicitation import (
    DEFAULT_QUESTION_BUDGET,
    ElicitationError,
    SessionState,
    allais_battery,
    class_for_category,
    dohmen_classify,
    holt_laury_list,
    ordered_menu,
    random_pair,
    read_records_csv,
    write_records_csv,
)
from .models import DomainError, LotteryError, ModelSpec

DEFAULT_STORE = "riskcal_store"
STORE_ENV_VAR = "RISKCAL_STORE"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _store_path(args) -> Path:
    if args.store:
        return Path(args.store)
    return Path(os.environ.get(STORE_ENV_VAR, DEFAULT_STORE))


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _parse_params(raw: str) -> dict[str, float]:
    params: dict[str, float] = {}
    if not raw:
        return params
    for chunk in raw.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ElicitationError(f"parameter {chunk!r} is not of the form name=value")
        name, value = chunk.split("=", 1)
        params[name.strip()] = float(value)
    return params


def _model_from_args(family: str, params: dict[str, float]) -> ModelSpec:
    params = dict(params)
    params.pop("lambda_c", None)
    defaults = {
        "eu": {"alpha": 1.0},
        "reu": {"alpha": 1.0, "k": 1.0},
        "wlu": {"alpha": 1.0},
        "pt": {"alpha": 1.0, "beta": 1.0, "loss_aversion": 1.0, "gamma": 1.0, "reference": 0.0},
    }
    if family not in defaults:
        raise ElicitationError(f"unknown family {family!r}")
    merged = {**defaults[family], **params}
    return ModelSpec(family, merged)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_battery(args) -> int:
    if args.protocol == "mpl":
        pl = holt_laury_list(args.scale)
        rows = []
        lines = [f"price list (scale {args.scale:g}):"]
        for i, (a, b) in enumerate(pl.rows, start=1):
            diff = a.expected_value - b.expected_value
            rows.append(
                {"row": i, "option_a": a.to_pairs(), "option_b": b.to_pairs(), "ev_difference": diff}
            )
            lines.append(f"  row {i:2d}: A={a.to_pairs()}  B={b.to_pairs()}  EV diff {diff:+.2f}")
        _emit(args, {"protocol": "mpl", "scale": args.scale, "rows": rows}, "\n".join(lines))
    elif args.protocol == "pairs":
        rng = random.Random(args.seed)
        pairs = []
        lines = [f"random lottery pairs (seed {args.seed}):"]
        for i in range(args.count):
            a, b = random_pair(rng, [float(v) for v in range(0, 101, 10)], [v / 10 for v in range(1, 10)])
            pairs.append({"pair": i, "option_a": a.to_pairs(), "option_b": b.to_pairs()})
            lines.append(f"  pair {i}: A={a.to_pairs()}  B={b.to_pairs()}")
        _emit(args, {"protocol": "pairs", "seed": args.seed, "pairs": pairs}, "\n".join(lines))
    elif args.protocol == "menu":
        menu = ordered_menu(args.kind)
        options = [lot.to_pairs() for lot in menu]
        lines = [f"ordered menu ({args.kind}):"]
        lines += [f"  option {i}: {opt}" for i, opt in enumerate(options)]
        _emit(args, {"protocol": "menu", "kind": args.kind, "options": options}, "\n".join(lines))
    else:  # allais
        q1, q2 = allais_battery()
        payload = {"protocol": "allais", "questions": [q1.to_dict(), q2.to_dict()]}
        lines = ["common-consequence battery:"]
        for q in (q1, q2):
            lines.append(f"  {q.question_id}: A={q.option_a.to_pairs()}  B={q.option_b.to_pairs()}")
        _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_simulate(args) -> int:
    from .calibration import SimAgent, recovery_battery, simulate_battery

    params = _parse_params(args.params)
    sharpness = params.get("lambda_c", 1.0)
    agent = SimAgent(
        model=_model_from_args(args.family, params),
        sharpness=sharpness,
        seed=args.seed,
    )
    questions = recovery_battery(args.questions)
    records = simulate_battery(agent, questions)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            write_records_csv(records, handle)
        print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    else:
        write_records_csv(records, sys.stdout)
    return EXIT_OK


def cmd_fit(args) -> int:
    from .calibration import fit

    with open(args.records, encoding="utf-8", newline="") as handle:
        records = read_records_csv(handle)
    result = fit(records, args.family)
    print(json.dumps(result.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_compare(args) -> int:
    from .calibration import compare

    with open(args.records, encoding="utf-8", newline="") as handle:
        records = read_records_csv(handle)
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    result = compare(records, families)
    print(json.dumps(result.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_classify(args) -> int:
    from .policy import airport_policy, portfolio_for_class

    rc = dohmen_classify(args.score)
    lead = airport_policy(rc)
    portfolio = portfolio_for_class(rc)
    payload = {
        "score": args.score,
        "risk_class": rc.category.value,
        "score_range": list(rc.score_range),
        "airport_lead_hours": lead,
        "portfolio": portfolio.name,
    }
    text = (
        f"score {args.score} -> {rc.category.value} "
        f"(scores {rc.score_range[0]}-{rc.score_range[1]})\n"
        f"airport policy: arrive {lead:g} h before international flights\n"
        f"portfolio pick: {portfolio.name}"
    )
    _emit(args, payload, text)
    return EXIT_OK


def _read_answer(pending_letters: list[str], prompt: str, valid: list[str]) -> str:
    """Read one answer, consuming queued letters from earlier input lines."""
    while True:
        if pending_letters:
            answer = pending_letters.pop(0)
        else:
            print(prompt, file=sys.stderr, flush=True)
            line = sys.stdin.readline()
            if not line:
                raise ElicitationError("input ended before the session was complete")
            tokens = [t for t in line.replace(",", " ").split()] or [""]
            # A bare run of answer letters ("AABB...") answers several rows.
            if len(tokens) == 1 and len(tokens[0]) > 1 and all(c.upper() in ("A", "B") for c in tokens[0]):
                pending_letters.extend(tokens[0][1:].upper())
                answer = tokens[0][0]
            else:
                pending_letters.extend(tokens[1:])
                answer = tokens[0]
        answer = answer.strip().upper() if answer.strip().upper() in ("A", "B") else answer.strip()
        if answer in valid:
            return answer
        print(f"  (expected one of {valid}, got {answer!r})", file=sys.stderr)


def cmd_elicit(args) -> int:
    from .store import SessionStore

    store = SessionStore(_store_path(args))
    protocol = {"mpl": "MPL", "pairs": "RandomPairs", "menu": "OrderedMenu",
                "general": "GeneralRisk", "allais": "Allais"}[args.protocol]
    seed = args.seed if args.seed is not None else random.SystemRandom().randrange(2**31)
    deterministic = args.seed is not None
    if deterministic:
        id_rng = random.Random(seed ^ 0x5EED)
        session_id = str(uuid.UUID(int=id_rng.getrandbits(128), version=4))
        clock = datetime(2000, 1, 1, tzinfo=timezone.utc)
    else:
        session_id = str(uuid.uuid4())
        clock = None
    state = SessionState(
        protocol=protocol,
        session_id=session_id,
        seed=seed,
        budget=args.budget,
        adaptive=args.adaptive,
        created_at=clock.isoformat() if clock else "",
    )
    with store.lock(state.session_id):
        store.create(state)
    pending: list[str] = []
    step = 0
    while True:
        question = state.next_question()
        if question is None:
            break
        prompt = question.prompt
        if question.kind == "pair":
            prompt += f"\n  A: {question.option_a.to_pairs()}\n  B: {question.option_b.to_pairs()}"
        elif question.kind == "menu":
            for i, opt in enumerate(question.options):
                prompt += f"\n  {i}: {opt.to_pairs()}"
        answer = _read_answer(pending, prompt, question.valid_answers())
        step += 1
        timestamp = (
            (clock + timedelta(seconds=step)).isoformat()
            if clock
            else datetime.now(timezone.utc).isoformat()
        )
        with store.lock(state.session_id):
            state.answer(question.question_id, answer, timestamp)
            store.record_answer(state, question.question_id, answer, timestamp)
    envelope = store.load_envelope(state.session_id)
    _emit(
        args,
        envelope,
        f"session {state.session_id} complete\nresults: {json.dumps(envelope['results'], sort_keys=True)}",
    )
    return EXIT_OK


def cmd_report(args) -> int:
    from .policy import TravelDomainConfig, airport_policy, format_track_record, run_track_record
    from .profiles import build_profile
    from .store import SessionStore

    store = SessionStore(_store_path(args))
    state = store.load_state(args.session)
    if state.status != "complete":
        raise ElicitationError(f"session {args.session} is not complete yet")
    profile = build_profile(state)
    config = TravelDomainConfig()
    if args.domain_config:
        with open(args.domain_config, encoding="utf-8") as handle:
            config = TravelDomainConfig.from_dict(json.load(handle))
    record = None
    if profile["risk_class"] is not None:
        lead = profile["policy_preview"]["airport_lead_hours"]
        record = run_track_record(lead, config, episodes=args.episodes, seed=args.seed or 0)
        profile["track_record"] = record.to_dict()
    if args.format == "json":
        print(json.dumps(profile, sort_keys=True))
    else:
        lines = [f"session {profile['session_id']} ({profile['protocol']})"]
        results = profile["results"] or {}
        if "classification" in results:
            lines.append(f"classification: {results['classification']}")
        if "switch_row" in results:
            lines.append(f"switch row: {results['switch_row']}")
        if profile["risk_class"] is not None:
            rc = profile["risk_class"]
            preview = profile["policy_preview"]
            lines.append(f"risk class: {rc['category']} (scores {rc['score_range'][0]}-{rc['score_range'][1]})")
            lines.append(f"policy preview: arrive {preview['airport_lead_hours']:g} h before international flights")
            lines.append(f"portfolio pick: {preview['portfolio']['name']}")
        if "eu_consistent" in results:
            lines.append(f"expected-utility consistent: {results['eu_consistent']} (pattern {results['pattern']})")
        if record is not None:
            lines.append("")
            lines.append(format_track_record(record))
        print("\n".join(lines))
    if args.out and record is not None:
        from .report import write_report_files

        paths = write_report_files(Path(args.out), profile, record, config, seed=args.seed or 0)
        for path in paths:
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import make_app
    from .store import SessionStore

    config = {}
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            config = json.load(handle)
    store_path = Path(config.get("store", _store_path(args)))
    host = args.host or config.get("host", "127.0.0.1")
    port = args.port or int(config.get("port", 8000))
    budget = int(config.get("budget", DEFAULT_QUESTION_BUDGET))
    ui_dir = args.ui_dir or config.get("ui_dir")
    if not 1 <= port <= 65535:
        raise ElicitationError(f"port must be in 1..65535, got {port}")
    if budget < 1:
        raise ElicitationError(f"question budget must be >= 1, got {budget}")
    app = make_app(SessionStore(store_path), default_budget=budget, ui_dir=ui_dir)
    print(f"serving on http://{host}:{port} (store: {store_path})", file=sys.stderr)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _common_flags(subparser) -> None:
    # Accepted after the subcommand too; SUPPRESS keeps an absent flag from
    # clobbering the value parsed at the top level.
    subparser.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    subparser.add_argument("--store", default=argparse.SUPPRESS,
                           help=f"session store directory (or ${STORE_ENV_VAR})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riskcal", description="Risk-attitude elicitation and decision-model toolkit")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--store", help=f"session store directory (or ${STORE_ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("battery", help="print an elicitation instrument")
    p.add_argument("--protocol", choices=["mpl", "pairs", "menu", "allais"], required=True)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--kind", choices=["abstract", "investment"], default="investment")
    p.set_defaults(func=cmd_battery)
    _common_flags(p)

    p = sub.add_parser("simulate", help="emit simulated choice records as CSV")
    p.add_argument("--family", required=True, choices=["eu", "reu", "wlu", "pt"])
    p.add_argument("--params", default="", help="comma list, e.g. alpha=1,k=2,lambda_c=1")
    p.add_argument("--questions", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_simulate)
    _common_flags(p)

    p = sub.add_parser("fit", help="fit a model family to recorded choices")
    p.add_argument("--records", required=True)
    p.add_argument("--family", required=True, choices=["eu", "reu", "wlu", "pt"])
    p.set_defaults(func=cmd_fit)
    _common_flags(p)

    p = sub.add_parser("compare", help="rank model families by BIC")
    p.add_argument("--records", required=True)
    p.add_argument("--families", required=True, help="comma list, e.g. eu,reu,pt")
    p.set_defaults(func=cmd_compare)
    _common_flags(p)

    p = sub.add_parser("classify", help="classify a 0-10 general-risk score")
    p.add_argument("--score", type=int, required=True)
    p.set_defaults(func=cmd_classify)
    _common_flags(p)

    p = sub.add_parser("elicit", help="run a terminal elicitation session")
    p.add_argument("--protocol", choices=["mpl", "pairs", "menu", "general", "allais"], default="mpl")
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_QUESTION_BUDGET)
    p.add_argument("--adaptive", action="store_true", help="bisect instead of asking every row")
    p.set_defaults(func=cmd_elicit)
    _common_flags(p)

    p = sub.add_parser("report", help="profile and track record of a stored session")
    p.add_argument("--session", required=True)
    p.add_argument("--episodes", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--domain-config", help="travel-domain config JSON file")
    p.add_argument("--out", help="directory for the CSV table and figures")
    p.set_defaults(func=cmd_report)
    _common_flags(p)

    p = sub.add_parser("serve", help="run the JSON API service")
    p.add_argument("--config", help="config JSON file")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--ui-dir", help="static web UI bundle to serve")
    p.set_defaults(func=cmd_serve)
    _common_flags(p)

    return parser


def main(argv=None) -> int:
    from .store import StoreError, UnknownSessionError

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_OK
    except UnknownSessionError as exc:
        print(f"error: unknown session {exc.args[0]!r}", file=sys.stderr)
        return EXIT_DATA
    except (ElicitationError, LotteryError, DomainError, StoreError, OSError, ValueError) as exc:
        detail = exc.args[0] if exc.args else exc
        print(f"error: {detail}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
