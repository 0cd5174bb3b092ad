"""Batch front-end: problem files in, verdict reports out.

Exit codes: 0 the property holds / YES, 1 NO, 2 bounded-unknown, 3 input
error.  Matrix entries travel as decimal strings because JSON numbers are
lossy past 2^53.
"""

import argparse
import json
import sys

from .algebra import AlgebraError, GeneratorSet, Mat2, SignedWord, evaluate, reduce
from . import decisions
from . import encodings
from . import oracle as oracle_mod


class ProblemError(ValueError):
    pass


EXIT_YES = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3


def _parse_int(value, path: str) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, str):
        text = value.strip()
        sign = -1 if text.startswith("-") else 1
        digits = text[1:] if text[0] in "+-" else text
        if digits.isdigit():
            return sign * int(digits)
    raise ProblemError(f"{path}: not an integer: {value!r}")


def _parse_matrix(value, path: str) -> Mat2:
    if (not isinstance(value, list) or len(value) != 2
            or any(not isinstance(row, list) or len(row) != 2 for row in value)):
        raise ProblemError(f"{path}: expected a 2x2 array")
    a = _parse_int(value[0][0], f"{path}[0][0]")
    b = _parse_int(value[0][1], f"{path}[0][1]")
    c = _parse_int(value[1][0], f"{path}[1][0]")
    d = _parse_int(value[1][1], f"{path}[1][1]")
    if a * d - b * c != 1:
        raise ProblemError(f"{path}: determinant must be 1")
    return Mat2(a, b, c, d)


def _parse_word(value, path: str) -> SignedWord:
    if not isinstance(value, dict):
        raise ProblemError(f"{path}: expected an object with sign and sr")
    unknown = set(value) - {"sign", "sr"}
    if unknown:
        raise ProblemError(f"{path}: unknown keys {sorted(unknown)}")
    sign = _parse_int(value.get("sign", 1), f"{path}.sign")
    if sign not in (1, -1):
        raise ProblemError(f"{path}.sign: must be 1 or -1")
    sr = value.get("sr", "")
    if not isinstance(sr, str) or sr.strip("sr"):
        raise ProblemError(f"{path}.sr: must be a string over 's' and 'r'")
    w = SignedWord(sign, sr)
    if not w.is_reduced():
        normalized = reduce(sr, sign)
        print(f"warning: {path}: word not reduced, normalized to {normalized}",
              file=sys.stderr)
        return normalized
    return w


def _parse_target(value, path: str) -> Mat2:
    if not isinstance(value, dict):
        raise ProblemError(f"{path}: expected an object")
    unknown = set(value) - {"matrix", "word"}
    if unknown:
        raise ProblemError(f"{path}: unknown keys {sorted(unknown)}")
    if ("matrix" in value) == ("word" in value):
        raise ProblemError(f"{path}: give exactly one of matrix / word")
    if "matrix" in value:
        return _parse_matrix(value["matrix"], f"{path}.matrix")
    return evaluate(_parse_word(value["word"], f"{path}.word"))


class Problem:
    def __init__(self, generators, target, parameters):
        self.generators = generators
        self.target = target
        self.parameters = parameters


def parse_problem(path: str) -> Problem:
    """Validated problem file; errors carry the offending field path."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: malformed JSON: {exc}")
    if not isinstance(data, dict):
        raise ProblemError("problem file must be a JSON object")
    unknown = set(data) - {"generators", "target", "parameters"}
    if unknown:
        raise ProblemError(f"unknown keys {sorted(unknown)}")
    raw_gens = data.get("generators")
    if not isinstance(raw_gens, list) or not raw_gens:
        raise ProblemError("generators: expected a nonempty array")
    entries = []
    for i, item in enumerate(raw_gens):
        loc = f"generators[{i}]"
        if not isinstance(item, dict):
            raise ProblemError(f"{loc}: expected an object")
        unknown = set(item) - {"matrix", "word"}
        if unknown:
            raise ProblemError(f"{loc}: unknown keys {sorted(unknown)}")
        if ("matrix" in item) == ("word" in item):
            raise ProblemError(f"{loc}: give exactly one of matrix / word")
        if "matrix" in item:
            entries.append(_parse_matrix(item["matrix"], f"{loc}.matrix"))
        else:
            entries.append(evaluate(_parse_word(item["word"], f"{loc}.word")))
    generators = GeneratorSet.from_matrices(entries)
    target = None
    if "target" in data:
        target = _parse_target(data["target"], "target")
    parameters = data.get("parameters", {})
    if not isinstance(parameters, dict):
        raise ProblemError("parameters: expected an object")
    return Problem(generators, target, parameters)


def matrix_json(m: Mat2) -> list:
    return [[str(m.a), str(m.b)], [str(m.c), str(m.d)]]


def problem_json(gens: GeneratorSet, target: Mat2 = None, parameters: dict = None) -> dict:
    doc = {"generators": [{"matrix": matrix_json(g.matrix)} for g in gens]}
    if target is not None:
        doc["target"] = {"matrix": matrix_json(target)}
    if parameters:
        doc["parameters"] = parameters
    return doc


def emit_problem(doc: dict) -> str:
    """Canonical serialization; parsing and re-emitting is byte-identical."""
    return json.dumps(doc, indent=2) + "\n"


def _count_json(count: decisions.Count):
    if count.kind == "exact":
        return count.value
    if count.kind == "more_than":
        return {"more_than": count.value}
    return "infinite"


def emit_report(verdict: decisions.Verdict, fmt: str) -> tuple:
    """(report text, exit code)."""
    doc = {"problem": verdict.problem, "answer": verdict.answer}
    if verdict.depth_bound is not None:
        doc["depth_bound"] = verdict.depth_bound
    if verdict.count is not None:
        doc["count"] = _count_json(verdict.count)
    if verdict.witness is not None:
        doc["witness"] = verdict.witness
    if verdict.answer == decisions.UNKNOWN:
        code = EXIT_UNKNOWN
    elif verdict.answer == decisions.YES:
        code = EXIT_YES
    else:
        code = EXIT_NO
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n", code
    lines = [f"{verdict.problem}: {verdict.answer}"]
    if verdict.depth_bound is not None:
        lines.append(f"  searched depth: {verdict.depth_bound}")
    if verdict.count is not None:
        lines.append(f"  count: {_count_json(verdict.count)}")
    if verdict.witness is not None:
        lines.append(f"  witness: {json.dumps(verdict.witness)}")
    return "\n".join(lines) + "\n", code


def _require_target(problem: Problem, cmd: str) -> Mat2:
    if problem.target is None:
        raise ProblemError(f"{cmd} needs a target matrix or word in the problem file")
    return problem.target


def _setting(args, problem: Problem, name: str, fallback):
    """Command-line flag, else the problem file's parameters, else default."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    value = problem.parameters.get(name, fallback)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ProblemError(f"parameters.{name}: expected an integer")
    return value


def _cmd_verdict(args, problem: Problem) -> decisions.Verdict:
    gens = problem.generators
    if args.command == "identity":
        return decisions.identity_in_semigroup(gens)
    if args.command == "member":
        return decisions.membership(gens, _require_target(problem, "member"))
    if args.command == "check-free":
        return decisions.is_free(gens)
    if args.command == "check-finite-free":
        return decisions.finite_freeness(gens, _setting(args, problem, "depth", 4))
    if args.command == "count":
        return decisions.count_factorizations(
            gens, _require_target(problem, "count"),
            _setting(args, problem, "cap", 8))
    if args.command == "recurrent":
        return decisions.is_recurrent(gens, _require_target(problem, "recurrent"))
    raise ProblemError(f"unknown command {args.command}")


def _run_oracle(args) -> int:
    problem = parse_problem(args.problem)
    gens = problem.generators
    collision = oracle_mod.find_collision(gens, args.depth, args.budget)
    table = oracle_mod.enumerate_products(gens, args.depth, args.budget)
    doc = {
        "problem": "oracle",
        "depth": args.depth,
        "distinct_products": len(table.matrices()),
        "total_sequences": table.total_sequences(),
        "collision": collision,
    }
    if problem.target is not None:
        doc["target_count"] = table.count(problem.target)
        doc["target_sequences"] = [list(s) for s in
                                   table.sequences(problem.target)[:10]]
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_YES


def _parse_values(text: str) -> list:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ProblemError(f"--set must be comma-separated integers: {text!r}")
    if not values:
        raise ProblemError("--set must be nonempty")
    return values


def _load_dfas(path: str) -> list:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: malformed JSON: {exc}")
    if not isinstance(data, list) or not data:
        raise ProblemError("DFA file must be a nonempty JSON array")
    dfas = []
    for i, item in enumerate(data):
        loc = f"dfas[{i}]"
        if not isinstance(item, dict):
            raise ProblemError(f"{loc}: expected an object")
        unknown = set(item) - {"states", "alphabet", "transitions", "finals"}
        if unknown:
            raise ProblemError(f"{loc}: unknown keys {sorted(unknown)}")
        n = _parse_int(item.get("states"), f"{loc}.states")
        alphabet = tuple(item.get("alphabet", ()))
        transitions = []
        for src, row in sorted(item.get("transitions", {}).items()):
            for sym, dst in sorted(row.items()):
                transitions.append((_parse_int(src, f"{loc}.transitions"), sym,
                                    _parse_int(dst, f"{loc}.transitions")))
        finals = frozenset(_parse_int(x, f"{loc}.finals") for x in item.get("finals", ()))
        dfas.append(encodings.DfaSpec(n, alphabet, tuple(transitions), finals))
    return dfas


def _run_encode(args) -> int:
    if args.command == "encode-essp":
        fixture = encodings.encode_equal_subset_sum(_parse_values(args.values))
        doc = problem_json(fixture.generators)
    elif args.command == "encode-ssp":
        fixture = encodings.encode_subset_sum(_parse_values(args.values), args.x)
        doc = problem_json(fixture.generators,
                           target=fixture.expected["count_target"])
    else:
        fixture = encodings.encode_dfa_intersection(_load_dfas(args.dfas))
        doc = problem_json(fixture.generators)
    sys.stdout.write(emit_problem(doc))
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sl2z",
        description="Decision procedures for matrix semigroups in SL(2,Z)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_command(name, help_text, target_hint=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("problem", help="problem JSON file")
        p.add_argument("--format", choices=("json", "text"), default="json")
        return p

    add_problem_command("identity", "is the identity matrix a nonempty product?")
    add_problem_command("member", "is the target matrix a nonempty product?")
    p = add_problem_command("count", "count factorizations of the target")
    p.add_argument("--cap", type=int, default=None)
    add_problem_command("recurrent", "does the target have infinitely many factorizations?")
    add_problem_command("check-free", "is the generator set a code?")
    p = add_problem_command("check-finite-free",
                            "does every element have finitely many factorizations?")
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("oracle", help="brute-force product table report")
    p.add_argument("problem")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--budget", type=int, default=oracle_mod.DEFAULT_BUDGET)

    p = sub.add_parser("encode-essp", help="equal-subset-sum instance generators")
    p.add_argument("--set", dest="values", required=True,
                   help="comma-separated positive integers")
    p = sub.add_parser("encode-ssp", help="subset-sum instance generators")
    p.add_argument("--set", dest="values", required=True)
    p.add_argument("--x", type=int, required=True, help="target sum")
    p = sub.add_parser("encode-dfa", help="DFA-intersection instance generators")
    p.add_argument("--dfas", required=True, help="JSON array of DFAs")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "oracle":
            return _run_oracle(args)
        if args.command.startswith("encode-"):
            return _run_encode(args)
        problem = parse_problem(args.problem)
        verdict = _cmd_verdict(args, problem)
        text, code = emit_report(verdict, args.format)
        sys.stdout.write(text)
        return code
    except (ProblemError, AlgebraError, oracle_mod.OracleBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
