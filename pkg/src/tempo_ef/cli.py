"""Command-line interface: ``tempo-ef <command> ...``.

Exit status is 0 when the command succeeds (and any ``--expect`` claim holds),
1 when a checked claim fails, and 2 on usage errors, unreadable files, parse
errors or budget aborts.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .corpus import FAMILIES, DEFAULT_R, FamilyError, FamilyParams, family, run_claim
from .enumerate import BudgetExceeded, EnumBudget, enumerate_formulas, find_distinguisher
from .evaluate import eval_mtl, eval_tptl, until_witness
from .formulas import FragmentSpec, size, until_rank
from .games.core import GameError, Player
from .games.mtl import MtlGameConfig, MtlGamePosition, extract_formula, solve_mg
from .games.tptl import TptlGameConfig, TptlGamePosition, extract_formula_tptl, solve_tg
from .parser import ParseError, parse_formula
from .play import play, replay
from .words import ArithLassoWord, ConstantSet, WordError, load_word, save_word


class UsageError(Exception):
    pass


def _emit(args, text: str, payload: dict):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _load(path: str):
    try:
        return load_word(path)
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed word file {path}: {exc}") from None


def _constants(text: Optional[str]) -> ConstantSet:
    try:
        return ConstantSet.parse(text or "")
    except ValueError as exc:
        raise UsageError(f"bad constant list {text!r}: {exc}") from None


def _expect_status(args, value) -> int:
    expect = getattr(args, "expect", None)
    if expect is None:
        return 0
    return 0 if str(value).lower() == expect.lower() else 1


# commands


def cmd_eval(args) -> int:
    w = _load(args.word)
    phi = parse_formula(args.formula, args.logic)
    if args.logic == "mtl":
        value = eval_mtl(w, args.pos, phi, args.horizon)
    else:
        value = eval_tptl(w, args.pos, None, phi, args.horizon)
    payload = {"value": value, "formula": str(phi), "position": args.pos, "logic": args.logic}
    text = "true" if value else "false"
    if args.witness:
        j = until_witness(w, args.pos, phi, args.logic)
        payload["witness"] = j
        text += f"\nwitness: {j if j is not None else 'none'}"
    _emit(args, text, payload)
    return _expect_status(args, "true" if value else "false")


def _game_config(args):
    w0, w1 = _load(args.w0), _load(args.w1)
    C = _constants(args.constants)
    lasso = isinstance(w0, ArithLassoWord) or isinstance(w1, ArithLassoWord)
    horizon = args.horizon if args.horizon is not None else (12 if lasso else None)
    if args.logic == "mtl":
        return MtlGameConfig(w0, w1, C, args.k, horizon), MtlGamePosition(args.i0, args.i1), horizon
    spec = FragmentSpec.parse(args.fragment, args.n)
    return TptlGameConfig(w0, w1, C, args.n, args.k, horizon, spec), TptlGamePosition(args.i0, args.i1), horizon


def cmd_game(args) -> int:
    cfg, pos, horizon = _game_config(args)
    tree = solve_mg(cfg, pos) if args.logic == "mtl" else solve_tg(cfg, pos)
    lines = [f"winner: {tree.winner}"]
    payload = {"winner": str(tree.winner), "rounds": args.k, "constants": list(cfg.constants.values)}
    if horizon is not None:
        lines.append(f"horizon: {horizon} (exact on the materialized horizon)")
        payload["horizon"] = horizon
    if args.strategy:
        lines.append(tree.root and "\n".join(tree.root.render(args.depth)))
        payload["strategy"] = tree.root.render(args.depth)
    if args.extract and tree.winner is Player.SPOILER:
        phi = extract_formula(cfg, pos) if args.logic == "mtl" else extract_formula_tptl(cfg, pos)
        lines.append(f"distinguishing formula: {phi}")
        lines.append(f"until rank {until_rank(phi)}, size {size(phi)}")
        payload["formula"] = str(phi)
    _emit(args, "\n".join(lines), payload)
    return _expect_status(args, str(tree.winner))


def cmd_play(args) -> int:
    cfg, pos, _ = _game_config(args)
    human = Player.SPOILER if args.role.lower() == "spoiler" else Player.DUPLICATOR
    if args.replay:
        try:
            answers = json.loads(Path(args.replay).read_text())["inputs"]
        except FileNotFoundError:
            raise UsageError(f"file not found: {args.replay}") from None
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise UsageError(f"malformed transcript {args.replay}: {exc}") from None
        st = replay(cfg, human, answers, pos)
    else:
        st = play(cfg, human, pos=pos)
    print("transcript:")
    for actor, text in st.history:
        print(f"  {actor}: {text}")
    print(f"result: {st.winner} wins" if st.complete else "result: incomplete")
    if args.transcript:
        Path(args.transcript).write_text(json.dumps({
            "human": str(human), "winner": None if st.winner is None else str(st.winner),
            "complete": st.complete, "history": st.history, "inputs": st.inputs,
        }, indent=2))
    return 0 if st.complete else 1


def _budget(args, probes=()) -> EnumBudget:
    spec = FragmentSpec.parse(getattr(args, "fragment", None), args.n or None)
    props = tuple(p for p in (args.props or "").split(",") if p)
    return EnumBudget(args.k, _constants(args.constants), args.max_size, props, args.n, spec, tuple(probes),
                      args.ceiling)


def cmd_enum(args) -> int:
    probes = [_load(p) for p in args.probe or []]
    formulas = enumerate_formulas(_budget(args, probes))
    payload = {"count": len(formulas), "formulas": [str(f) for f in formulas]}
    _emit(args, "\n".join([*map(str, formulas), f"{len(formulas)} classes"]), payload)
    return 0


def cmd_distinguish(args) -> int:
    w0, w1 = _load(args.w0), _load(args.w1)
    phi = find_distinguisher(w0, args.i0, w1, args.i1, _budget(args), horizon=args.horizon)
    text = f"distinguisher: {phi}" if phi is not None else "no distinguisher within budget"
    _emit(args, text, {"formula": None if phi is None else str(phi)})
    return _expect_status(args, "none" if phi is None else "some")


def _family_params(args) -> FamilyParams:
    extra = []
    if args.n is not None:
        extra.append(("n", args.n))
    if args.suffix:
        extra.append(("suffix", args.suffix))
    if args.seed is not None:
        extra.append(("seed", args.seed))
    r = args.r if args.r is not None else DEFAULT_R.get(args.family, 2)
    C = _constants(args.constants) if args.constants is not None else None
    return FamilyParams(r, args.s, args.k, C, tuple(extra))


def cmd_corpus(args) -> int:
    if args.action == "list":
        rows = [f"{name:20} {desc}" for name, (_, desc) in FAMILIES.items()]
        _emit(args, "\n".join(rows), {"families": list(FAMILIES)})
        return 0
    if not args.family:
        raise UsageError("--family is required")
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}")
    params = _family_params(args)
    if args.action == "gen":
        fam = family(args.family, params)
        out = Path(args.out or ".")
        out.mkdir(parents=True, exist_ok=True)
        save_word(fam.w0, out / f"{fam.name}-w0.json")
        save_word(fam.w1, out / f"{fam.name}-w1.json")
        meta = {"family": fam.name, "formula": None if fam.formula is None else str(fam.formula),
                "rounds": fam.claim.rounds, "constants": list(fam.claim.constants.values),
                "logic": fam.claim.logic, "horizon": fam.claim.horizon}
        (out / f"{fam.name}.json").write_text(json.dumps(meta, indent=2, sort_keys=True))
        _emit(args, f"wrote {fam.name}-w0.json, {fam.name}-w1.json and {fam.name}.json to {out}", meta)
        return 0
    report = run_claim(args.family, params, args.horizon)
    _emit(args, report.render(), report.to_json())
    return 0 if report.passed else 1


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_all

    results = run_all(args.count)
    lines = [f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}" for name, ok, detail in results]
    ok = all(r[1] for r in results)
    _emit(args, "\n".join(lines), {"passed": ok, "checks": [{"name": n, "passed": p, "detail": d} for n, p, d in results]})
    return 0 if ok else 1


# argument parsing


def _game_args(p):
    p.add_argument("logic", choices=["mtl", "tptl"])
    p.add_argument("--w0", required=True)
    p.add_argument("--w1", required=True)
    p.add_argument("--k", type=int, default=1, help="rounds")
    p.add_argument("--constants", default="", help="comma-separated finite constants")
    p.add_argument("--horizon", type=int)
    p.add_argument("--n", type=int, default=1, help="registers (tptl)")
    p.add_argument("--fragment", help="eq, unary or eq+unary (tptl)")
    p.add_argument("--i0", type=int, default=0)
    p.add_argument("--i1", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tempo-ef", description="MTL/TPTL evaluation and EF games on data words")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[common], **kw)

    p = sub.add_parser("eval", help="evaluate a formula on a word")
    p.add_argument("--word", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--logic", choices=["mtl", "tptl"], default="mtl")
    p.add_argument("--pos", type=int, default=0)
    p.add_argument("--horizon", type=int, help="bound every until scan (lasso words)")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--expect", choices=["true", "false"])
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("game", help="solve an EF game")
    _game_args(p)
    p.add_argument("--extract", action="store_true")
    p.add_argument("--strategy", action="store_true", help="print the strategy tree")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--expect", choices=["spoiler", "duplicator", "Spoiler", "Duplicator"])
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("play", help="play a game interactively against the solver")
    _game_args(p)
    p.add_argument("--role", choices=["spoiler", "duplicator"], default="spoiler")
    p.add_argument("--transcript", help="write the session transcript to this JSON file")
    p.add_argument("--replay", help="feed the inputs recorded in a transcript file")
    p.set_defaults(func=cmd_play)

    helps = {
        "enum": "list formulas up to semantic equivalence",
        "distinguish": "search for a small formula separating two positions",
    }
    for name, func in (("enum", cmd_enum), ("distinguish", cmd_distinguish)):
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--k", type=int, default=1, help="maximal until rank")
        p.add_argument("--constants", default="")
        p.add_argument("--props", default="")
        p.add_argument("--max-size", type=int, default=5)
        p.add_argument("--n", type=int, default=0, help="registers; 0 means MTL")
        p.add_argument("--fragment")
        p.add_argument("--ceiling", type=int, default=2_000_000)
        if name == "enum":
            p.add_argument("--probe", action="append", help="probe word file (repeatable)")
        else:
            p.add_argument("--w0", required=True)
            p.add_argument("--w1", required=True)
            p.add_argument("--i0", type=int, default=0)
            p.add_argument("--i1", type=int, default=0)
            p.add_argument("--horizon", type=int)
            p.add_argument("--expect", choices=["none", "some"])
        p.set_defaults(func=func)

    p = sub.add_parser("corpus", help="word families")
    p.add_argument("action", choices=["list", "gen", "check"])
    p.add_argument("--family")
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--constants")
    p.add_argument("--suffix", choices=["arith", "const", "random"])
    p.add_argument("--seed", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("selfcheck", help="run the built-in property checks")
    p.add_argument("--count", type=int, default=20, help="random instances per check")
    p.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # "--constants -1,0" would otherwise read "-1,0" as an option
    for idx in range(len(argv) - 1, 0, -1):
        if argv[idx - 1] == "--constants" and argv[idx].startswith("-"):
            argv[idx - 1:idx + 1] = [f"--constants={argv[idx]}"]
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
    except (FamilyError, GameError, WordError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
