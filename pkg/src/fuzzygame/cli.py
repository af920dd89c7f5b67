"""Command-line front end.

Every command prints one JSON document. Exit codes: 0 success, 2 malformed
input, 3 validation failure, 4 size cap exceeded.

Game files are JSON objects::

    {
      "strategies": [["a", "b"], ["a", "b"]],
      "payoffs": [[[3, 0], [1, 2]], [[0, 3], [2, 1]]],
      "integral": "choquet",
      "tensor_tnorm": "min",
      "mode": "min",
      "grid_k": 10,
      "epsilon": 0.01
    }

``payoffs[i]`` is player ``i``'s table nested with player 1 outermost, so
``payoffs[0][1][0]`` is player 1's payoff at profile ``(b, a)``. A flat
list in the same order is accepted as well.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional

import numpy as np

from . import __version__
from .capacity import Capacity, Density, FiniteSpace, density_of, from_density, is_possibility, make_capacity
from .capacity import random_capacity
from .counterexample import (
    case_sweep,
    closed_form_deviation,
    paper_game,
    verify_counterexample_cases,
)
from .equilibrium import density_grid, find_equilibrium, improvement_landscape
from .errors import FuzzyGameError, SizeError
from .games import Game, MixedProfile, PayoffRule
from .integrals import FiniteFunction, check_axioms, choquet, integral_functional, recover_capacity, t_normed
from .tensor import projection_check, tensor_general, tensor_nfold
from .tnorms import get_tnorm

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_SIZE = 0, 2, 3, 4


class InputError(Exception):
    """Malformed input document; maps to exit code 2."""


# -- input helpers -----------------------------------------------------------


def _load(path: Optional[str]) -> dict:
    if path is None:
        raise InputError("this command needs --input FILE")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return doc


def _require(doc: dict, key: str, kind=None):
    if key not in doc:
        raise InputError(f"missing key {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise InputError(f"key {key!r} has the wrong type")
    return val


def _space(labels) -> FiniteSpace:
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise InputError("a strategy or point list must be a JSON array of strings")
    return FiniteSpace(tuple(labels))


def _subset_key(space: FiniteSpace, key: str) -> int:
    key = key.strip()
    if key in ("", "{}"):
        return 0
    parts = [p.strip() for p in key.strip("{}").split(",")]
    if all(p in space.labels for p in parts):
        return space.mask(parts)
    if "," not in key and all(ch in space.labels for ch in key):
        return space.mask(list(key))
    raise InputError(f"cannot read subset {key!r} over points {list(space.labels)}")


def _capacity(space: FiniteSpace, raw) -> Capacity:
    if isinstance(raw, list):
        if len(raw) != space.n_subsets:
            raise InputError(f"capacity list needs {space.n_subsets} values, got {len(raw)}")
        return make_capacity(space, [float(v) for v in raw])
    if isinstance(raw, dict):
        table = {}
        for k, v in raw.items():
            if not isinstance(v, (int, float)):
                raise InputError(f"capacity value for {k!r} is not a number")
            table[_subset_key(space, k)] = float(v)
        missing = [m for m in range(1, space.n_subsets) if m not in table]
        if missing:
            raise InputError(f"capacity has no value for subset {{{space.subset_name(missing[0])}}}")
        return make_capacity(space, table)
    raise InputError("capacity must be a JSON array or object")


def _point_values(space: FiniteSpace, raw, what: str) -> list:
    if isinstance(raw, dict):
        unknown = [k for k in raw if k not in space.labels]
        if unknown:
            raise InputError(f"{what} names unknown point {unknown[0]!r}")
        missing = [lab for lab in space.labels if lab not in raw]
        if missing:
            raise InputError(f"{what} has no value for {missing[0]!r}")
        raw = [raw[lab] for lab in space.labels]
    if not isinstance(raw, list) or len(raw) != space.size or not all(isinstance(v, (int, float)) for v in raw):
        raise InputError(f"{what} must list {space.size} numbers")
    return [float(v) for v in raw]


def _game(doc: dict) -> Game:
    strategies = _require(doc, "strategies", list)
    spaces = tuple(_space(s) for s in strategies)
    if "players" in doc and doc["players"] != len(spaces):
        raise InputError(f"players = {doc['players']} but {len(spaces)} strategy lists given")
    payoffs = _require(doc, "payoffs", list)
    if len(payoffs) != len(spaces):
        raise InputError(f"expected {len(spaces)} payoff tables, got {len(payoffs)}")
    shape = tuple(s.size for s in spaces)
    tables = []
    for i, table in enumerate(payoffs):
        try:
            arr = np.array(table, dtype=float)
        except (TypeError, ValueError):
            raise InputError(f"payoff table {i + 1} is not a numeric array") from None
        if arr.size != int(np.prod(shape)) or arr.shape not in (shape, (arr.size,)):
            raise InputError(f"payoff table {i + 1} has shape {arr.shape}, expected {shape}")
        tables.append(arr.reshape(shape))
    game = Game(spaces, tuple(tables))
    return game.scaled() if doc.get("rescale", False) else game


def _settings(doc: dict, args) -> dict:
    out = {
        "integral": doc.get("integral", "sugeno"),
        "tensor_tnorm": doc.get("tensor_tnorm", "min"),
        "mode": doc.get("mode", "min"),
        "grid_k": doc.get("grid_k", 4),
        "epsilon": doc.get("epsilon", 0.0),
    }
    for key, flag in (("integral", "integral"), ("tensor_tnorm", "tensor_tnorm"), ("mode", "mode"), ("grid_k", "grid"), ("epsilon", "epsilon")):
        val = getattr(args, flag, None)
        if val is not None:
            out[key] = val
    if out["mode"] not in ("min", "max"):
        raise InputError(f"mode must be 'min' or 'max', got {out['mode']!r}")
    if not isinstance(out["grid_k"], int) or out["grid_k"] < 1:
        raise InputError("grid_k must be a positive integer")
    if not isinstance(out["epsilon"], (int, float)) or out["epsilon"] < 0:
        raise InputError("epsilon must be a nonnegative number")
    out["epsilon"] = float(out["epsilon"])
    return out


def _rule(settings: dict) -> PayoffRule:
    try:
        return PayoffRule.parse(settings["integral"], settings["tensor_tnorm"])
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _profile_doc(game: Game, profile: MixedProfile) -> list:
    return [d.as_dict() for d in profile.densities]


# -- commands ----------------------------------------------------------------


def cmd_integrate(args) -> dict:
    doc = _load(args.input)
    space = _space(_require(doc, "space"))
    if "capacity" in doc:
        nu = _capacity(space, doc["capacity"])
    elif "density" in doc:
        nu = from_density(Density(space, _point_values(space, doc["density"], "density")))
    else:
        raise InputError("give either 'capacity' or 'density'")
    f = FiniteFunction(space, _point_values(space, _require(doc, "function"), "function"))
    integral = (args.integral or doc.get("integral", "choquet")).strip().lower()
    if integral == "choquet":
        value = choquet(f, nu)
    elif integral == "sugeno":
        value = t_normed(f, nu, "min")
    elif integral.startswith("tnorm:"):
        value = t_normed(f, nu, get_tnorm(integral.split(":", 1)[1]))
    else:
        raise InputError(f"unknown integral {integral!r}")
    return {
        "input": {"space": list(space.labels), "capacity": nu.as_dict(), "function": f.values.tolist()},
        "integral": integral,
        "value": value,
        "value_17g": format(value, ".17g"),
    }


def cmd_tensor(args) -> dict:
    doc = _load(args.input)
    factors = _require(doc, "factors", list)
    if not factors:
        raise InputError("need at least one factor")
    tn = get_tnorm(args.tensor_tnorm or doc.get("tensor_tnorm", "min"))
    caps = []
    for j, fac in enumerate(factors):
        if not isinstance(fac, dict):
            raise InputError(f"factor {j + 1} must be an object")
        space = _space(_require(fac, "labels"))
        if "density" in fac:
            caps.append(from_density(Density(space, _point_values(space, fac["density"], "density"))))
        elif "capacity" in fac:
            caps.append(_capacity(space, fac["capacity"]))
        else:
            raise InputError(f"factor {j + 1} needs 'density' or 'capacity'")
    out: dict[str, Any] = {"tensor_tnorm": tn.name, "factors": [c.as_dict() for c in caps]}
    possibility = all(is_possibility(c) for c in caps)
    if possibility:
        joint = tensor_nfold([density_of(c) for c in caps], tn)
        out["joint_density"] = joint.as_dict()
    if len(caps) == 2:
        general = tensor_general(caps[0], caps[1], tn)
        if general.space.n_subsets <= 4096:
            out["general_capacity"] = general.as_dict()
        if possibility:
            out["coincides_with_density"] = bool(general == from_density(joint))
        out["marginals_recovered"] = [bool(projection_check(general, i) == caps[i]) for i in range(2)]
    return out


def cmd_payoff(args) -> dict:
    doc = _load(args.input)
    game = _game(doc)
    settings = _settings(doc, args)
    rule = _rule(settings)
    raw = _require(doc, "profile", list)
    if len(raw) != game.players:
        raise InputError(f"profile needs {game.players} densities")
    profile = MixedProfile(
        tuple(Density(s, _point_values(s, d, f"density of player {i + 1}")) for i, (s, d) in enumerate(zip(game.strategy_spaces, raw)))
    )
    values = rule.payoffs(game, profile)
    return {
        "integral": rule.label,
        "tensor_tnorm": rule.ast.name,
        "profile": _profile_doc(game, profile),
        "payoffs": [float(v) for v in values],
    }


def _search_doc(game: Game, rule: PayoffRule, settings: dict, threads: int) -> dict:
    grids = [density_grid(s, settings["grid_k"]) for s in game.strategy_spaces]
    res = find_equilibrium(game, grids, rule, settings["mode"], settings["epsilon"], threads=threads)
    out: dict[str, Any] = {
        "integral": rule.label,
        "tensor_tnorm": rule.ast.name,
        "mode": settings["mode"],
        "grid_k": settings["grid_k"],
        "epsilon": settings["epsilon"],
        "status": res.status,
        "defect": res.defect,
    }
    if res.found:
        out["profile"] = _profile_doc(game, res.profile)
        out["payoffs"] = res.payoffs
    else:
        out["certificate"] = [
            {
                "profile": [grids[j][ix].as_dict() for j, ix in enumerate(dev.profile)],
                "player": dev.player + 1,
                "deviation": grids[dev.player][dev.deviation].as_dict(),
                "gain": dev.gain,
            }
            for dev in res.certificate
        ]
    return out


def cmd_solve(args) -> dict:
    doc = _load(args.input)
    game = _game(doc)
    settings = _settings(doc, args)
    return _search_doc(game, _rule(settings), settings, args.threads)


def cmd_paper_example(args) -> dict:
    game = paper_game()
    threads = args.threads

    closed = closed_form_deviation(20)
    closed["matches"] = max(closed["max_abs_deviation"]) <= 1e-12

    sweep = case_sweep(20)
    gaps = [r.gap for r in sweep]
    direct_bad = [r for r in sweep if not r.direct_gap > 0]
    cases = {
        "grid_k": 20,
        "points": len(sweep),
        "positive_closed_form_gaps": sum(g > 0 for g in gaps),
        "min_closed_form_gap": min(gaps),
        "nonpositive_direct_gaps": len(direct_bad),
        "cases_with_nonpositive_direct_gaps": sorted({r.case for r in direct_bad}),
        "examples": [verify_counterexample_cases(*pt, game=game).as_dict() for pt in ((1, 0, 1, 1), (1, 0, 1, 0), (0, 1, 1, 0))],
    }

    choquet_rule = PayoffRule.parse("choquet", "min")
    grids = [density_grid(s, 10) for s in game.strategy_spaces]
    land = improvement_landscape(game, grids, choquet_rule, "min", threads)
    res = find_equilibrium(game, grids, choquet_rule, "min", 0.01, threads)
    worst = land.argmin_profile()
    choquet_doc = {
        "grid_k": 10,
        "epsilon": 0.01,
        "status": res.status,
        "defect": land.defect,
        "least_improvable_profile": [grids[j][ix].as_dict() for j, ix in enumerate(worst)],
        "profiles": int(land.best_gain.size),
        "profiles_with_gain_above_epsilon": int((land.best_gain > 0.01).sum()),
    }

    scaled = game.scaled()
    sugeno_rule = PayoffRule.parse("sugeno", "min")
    sugeno = [
        _search_doc(scaled, sugeno_rule, {"mode": "min", "grid_k": k, "epsilon": 0.0}, threads)
        for k in (4, 3)
    ]
    return {
        "game": {
            "strategies": [["a", "b"], ["a", "b"]],
            "profile_order": ["(a,a)", "(a,b)", "(b,a)", "(b,b)"],
            "u1": game.payoffs[0].reshape(-1).tolist(),
            "u2": game.payoffs[1].reshape(-1).tolist(),
            "tensor_tnorm": "min",
        },
        "closed_form_check": closed,
        "case_report": cases,
        "choquet_min_search": choquet_doc,
        "sugeno_scaled_min_search": sugeno,
    }


def cmd_axioms(args) -> dict:
    if not 1 <= args.size <= 6:
        raise InputError("--size must be between 1 and 6")
    if args.samples < 1:
        raise InputError("--samples must be positive")
    tn = get_tnorm(args.tnorm)
    space = FiniteSpace(tuple(f"x{i}" for i in range(args.size)))
    rng = np.random.default_rng(args.seed)
    passed = failed = mismatches = 0
    by_property = {str(p): 0 for p in (1, 2, 3, 4)}
    for j in range(args.samples):
        nu = random_capacity(rng, space, dyadic=bool(j % 2))
        mu = integral_functional(nu, "tnormed", tn)
        report = check_axioms(mu, space, tn, samples=10, seed=int(rng.integers(2**31)))
        if report.ok:
            passed += 1
        else:
            failed += 1
            for v in report.violations:
                by_property[str(v.property)] += 1
        if not recover_capacity(mu, space).allclose(nu, 1e-12):
            mismatches += 1
    return {
        "size": args.size,
        "tnorm": tn.name,
        "samples": args.samples,
        "seed": args.seed,
        "axioms_passed": passed,
        "axioms_failed": failed,
        "violations_by_property": by_property,
        "recovery_mismatches": mismatches,
    }


COMMANDS = {
    "integrate": cmd_integrate,
    "tensor": cmd_tensor,
    "payoff": cmd_payoff,
    "solve": cmd_solve,
    "paper-example": cmd_paper_example,
    "axioms": cmd_axioms,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="FILE")
    common.add_argument("--output", metavar="FILE")
    common.add_argument("--grid", type=int, metavar="K")
    common.add_argument("--epsilon", type=float, metavar="E")
    common.add_argument("--mode", choices=("min", "max"))
    common.add_argument("--integral", metavar="NAME", help="choquet | sugeno | tnorm:<name>")
    common.add_argument("--tensor-tnorm", dest="tensor_tnorm", metavar="NAME")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--size", type=int, default=3, help="space size for 'axioms'")
    common.add_argument("--tnorm", default="min", help="t-norm for 'axioms'")
    common.add_argument("--samples", type=int, default=500, help="random capacities for 'axioms'")

    parser = argparse.ArgumentParser(prog="fuzzygame", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"fuzzygame {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def render(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        body = COMMANDS[args.command](args)
        code = EXIT_OK
        doc = {"tool": "fuzzygame", "version": __version__, "command": args.command, **body}
    except InputError as exc:
        code, doc = EXIT_PARSE, {"error": "parse", "message": str(exc)}
    except SizeError as exc:
        code, doc = EXIT_SIZE, {"error": "size", "message": str(exc)}
    except (FuzzyGameError, ValueError, KeyError) as exc:
        witness = getattr(exc, "witness", None)
        doc = {"error": "validation", "message": str(exc).strip("'\"")}
        if witness is not None:
            doc["witness"] = list(witness)
        code = EXIT_VALIDATION
    text = render(doc)
    if code == EXIT_OK and args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        (sys.stdout if code == EXIT_OK else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
