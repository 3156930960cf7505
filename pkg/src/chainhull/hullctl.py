"""hullctl: command-line front end.

Exit codes: 0 success, 1 usage, 2 validation, 3 budget, 4 verification.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bruteforce, cosetlab, grarith, hullcount
from .errors import BudgetExceededError, ValidationError, VerificationError
from .ringpoly import FIELD_PLUS_NILPOTENT, GALOIS_RING, RingSpec
from .serialcodes import CyclicSerialCode, DefiningMultiset

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fraction_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _ring(text: str) -> RingSpec:
    return RingSpec.parse(text)


# -- subcommands -------------------------------------------------------------------
# each returns (payload dict, text renderer, csv renderer, exit code)


def cmd_cosets(args):
    atlas = cosetlab.build_atlas(args.n, args.q)
    payload = {
        "n": args.n,
        "q": args.q,
        "omega": atlas.omega,
        "cosets": [
            {
                "rep": c.rep,
                "elements": list(c.elements),
                "divisor": c.divisor,
                "symmetric": c.symmetric,
                "partnerRep": c.partner_rep,
            }
            for c in atlas.cosets
        ],
        "divisors": [
            {"j": j, "ord": m, "gamma": g, "beta": b, "inNq": cosetlab.in_Nq(j, args.q)}
            for j, (m, g, b) in sorted(atlas.gamma_beta_table().items())
        ],
    }

    def table():
        lines = [f"n={args.n} q={args.q} omega={atlas.omega}"]
        for c in atlas.cosets:
            tag = "symmetric" if c.symmetric else f"pair of {c.partner_rep}"
            lines.append(f"  {{{', '.join(map(str, c.elements))}}}  divisor {c.divisor}  {tag}")
        return "\n".join(lines)

    def csv_():
        rows = ["rep,divisor,symmetric,partnerRep,elements"]
        for c in atlas.cosets:
            partner = "" if c.partner_rep is None else str(c.partner_rep)
            rows.append(f"{c.rep},{c.divisor},{str(c.symmetric).lower()},{partner},{' '.join(map(str, c.elements))}")
        return "\n".join(rows) + "\n"

    return payload, table, csv_, EXIT_OK


def _factor_rows(spec: RingSpec, n: int) -> list[dict]:
    if spec.family == GALOIS_RING:
        return grarith.factor_table(spec.p, spec.a, spec.r, n).to_json()
    if spec.family == FIELD_PLUS_NILPOTENT:
        return grarith.factor_table(spec.p, 1, spec.r, n).to_json()
    spec.ring()  # raises the unsupported-family error
    raise AssertionError("unreachable")


def cmd_factor(args):
    spec = _ring(args.ring)
    if args.n % spec.p == 0:
        raise ValidationError(f"gcd(n={args.n}, p={spec.p}) != 1")
    rows = _factor_rows(spec, args.n)
    payload = {"n": args.n, "ring": spec.to_json(), "factors": rows}

    def table():
        lines = [f"X^{args.n} - 1 over ring {spec.as_tuple()} (coefficients constant term first)"]
        for row in rows:
            lines.append(f"  coset {row['cosetRep']:>3} (divisor {row['divisor']}): {row['coefficients']}")
        return "\n".join(lines)

    def csv_():
        out = ["cosetRep,divisor,coefficients"]
        for row in rows:
            out.append(f"{row['cosetRep']},{row['divisor']},\"{json.dumps(row['coefficients'])}\"")
        return "\n".join(out) + "\n"

    return payload, table, csv_, EXIT_OK


def _load_multiset(text: str, spec: RingSpec, n: int | None) -> DefiningMultiset:
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"multiset is neither a file nor valid JSON: {exc}") from None
    if isinstance(obj, dict):
        n = obj.get("n", n)
        if obj.get("s", spec.s) != spec.s:
            raise ValidationError(f"multiset has s={obj['s']} but the ring has s={spec.s}")
        parts = obj.get("parts")
    else:
        parts = obj
    if n is None:
        raise ValidationError("the code length is needed: pass --n or use {\"n\": ..., \"parts\": ...}")
    if not isinstance(parts, list) or not all(isinstance(p, list) for p in parts):
        raise ValidationError("multiset parts must be a list of lists of coset representatives")
    return DefiningMultiset.from_reps(n, spec.q, spec.s, parts)


def cmd_code(args):
    spec = _ring(args.ring)
    A = _load_multiset(args.multiset, spec, args.n)
    code = CyclicSerialCode(spec, A)
    payload = code.report(args.ell)

    def table():
        lines = [
            f"ring {spec.as_tuple()}, n={A.n}, ell={args.ell}",
            f"multiset       {payload['multiset']['parts']}",
            f"params         {tuple(payload['params'])}  qdim {payload['qdim']}",
            f"dual multiset  {payload['dual']['multiset']['parts']}  qdim {payload['dual']['qdim']}",
            f"hull multiset  {payload['hull']['multiset']['parts']}  qdim {payload['hull']['qdim']}",
            f"LCD {payload['lcd']}  self-orthogonal {payload['selfOrthogonal']}  self-dual {payload['selfDual']}",
        ]
        return "\n".join(lines)

    def csv_():
        return (
            "params,qdim,dualQdim,hullParams,hullQdim,lcd,selfOrthogonal,selfDual\n"
            f"\"{payload['params']}\",{payload['qdim']},{payload['dual']['qdim']},"
            f"\"{payload['hull']['params']}\",{payload['hull']['qdim']},"
            f"{str(payload['lcd']).lower()},{str(payload['selfOrthogonal']).lower()},"
            f"{str(payload['selfDual']).lower()}\n"
        )

    return payload, table, csv_, EXIT_OK


def cmd_enumerate(args):
    spec = _ring(args.ring)
    reports = {}
    if args.method in ("algorithm1", "both"):
        if args.ell:
            raise ValidationError("algorithm1 describes Euclidean hulls only (ell = 0)")
        reports["algorithm1"] = hullcount.algorithm1(args.n, spec)
    if args.method in ("exact", "both"):
        reports["exact"] = hullcount.exact_enumeration(
            args.n, spec, ell=args.ell, budget=args.budget, jobs=args.jobs
        )
    if args.method == "both":
        alg, ex = set(reports["algorithm1"].tuples), set(reports["exact"].tuples)
        diff = {
            "onlyAlgorithm1": [list(k) for k in sorted(alg - ex)],
            "onlyExact": [list(k) for k in sorted(ex - alg)],
        }
        diff["flagged"] = bool(diff["onlyAlgorithm1"] or diff["onlyExact"])
        payload = {name: r.to_json() for name, r in reports.items()}
        payload["difference"] = diff
    else:
        payload = reports[args.method].to_json()

    def table():
        chunks = []
        for name, r in reports.items():
            chunks.append(f"[{name}] n={args.n} ring {spec.as_tuple()}")
            chunks.append(r.to_table())
        if args.method == "both":
            d = payload["difference"]
            chunks.append("difference: " + ("none" if not d["flagged"] else ""))
            if d["flagged"]:
                chunks.append(f"  only algorithm1: {d['onlyAlgorithm1']}")
                chunks.append(f"  only exact:      {d['onlyExact']}")
        return "\n".join(chunks)

    def csv_():
        return "".join(r.to_csv() for r in reports.values())

    return payload, table, csv_, EXIT_OK


def cmd_average(args):
    spec = _ring(args.ring)
    E = hullcount.average_dim(args.n, spec)
    lo, hi = hullcount.bounds(args.n, spec)
    payload = {
        "n": args.n,
        "ring": spec.to_json(),
        "average": _fraction_json(E),
        "Bnq": hullcount.divisor_data(args.n, spec.q).Bnq,
        "inNq": cosetlab.in_Nq(args.n, spec.q),
        "bounds": {"lower": _fraction_json(lo), "upper": _fraction_json(hi)},
    }
    code = EXIT_OK
    if args.check_exact:
        rep = hullcount.exact_enumeration(args.n, spec, budget=args.budget, jobs=args.jobs)
        ok = rep.average == E
        payload["exactCheck"] = {"pass": ok, "exactAverage": _fraction_json(rep.average)}
        if not ok:
            code = EXIT_VERIFY

    def table():
        lines = [f"E = {E}  ({float(E):.6g})", f"B = {payload['Bnq']}", f"bounds [{lo}, {hi}]"]
        if args.check_exact:
            lines.append(
                "exact check: " + ("pass" if payload["exactCheck"]["pass"] else "FAIL")
                + f" (exhaustive mean {rep.average})"
            )
        return "\n".join(lines)

    def csv_():
        row = f"{args.n},{E.numerator},{E.denominator},{payload['Bnq']},{lo},{hi}"
        head = "n,averageNum,averageDen,Bnq,lower,upper"
        if args.check_exact:
            head += ",exactPass"
            row += f",{str(payload['exactCheck']['pass']).lower()}"
        return f"{head}\n{row}\n"

    return payload, table, csv_, code


def cmd_count(args):
    spec = _ring(args.ring)
    value = hullcount.count_hulls(args.n, args.tau, spec)
    payload = {"n": args.n, "ring": spec.to_json(), "tau": args.tau, "count": value}
    return payload, (lambda: str(value)), (lambda: f"n,tau,count\n{args.n},{args.tau},{value}\n"), EXIT_OK


def cmd_verify(args):
    with open(args.grid) as fh:
        grid = bruteforce.load_grid(fh.read())
    result = bruteforce.run_grid(grid, budget=args.budget, seed=args.seed)
    return (
        result,
        lambda: f"checked {result['checked']} (code, ell) cases, 0 mismatches",
        lambda: f"checked,mismatches\n{result['checked']},0\n",
        EXIT_OK,
    )


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "table"], default="json")
    common.add_argument("--budget", type=int, default=None, help="enumeration/scan budget")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--out", default=None, help="write the report to this file")
    common.add_argument("--jobs", type=int, default=1, help="worker cap for enumeration")

    parser = _Parser(prog="hullctl", description="Hulls of cyclic serial codes over finite chain rings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cosets", parents=[common], help="q-cyclotomic cosets modulo n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_cosets)

    p = sub.add_parser("factor", parents=[common], help="basic-irreducible factors of X^n - 1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ring", required=True)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("code", parents=[common], help="dual, hull and predicates of one code")
    p.add_argument("--ring", required=True)
    p.add_argument("--multiset", required=True, help="JSON file or inline JSON, e.g. [[0],[3],[1]]")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--ell", type=int, default=0)
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("enumerate-hulls", parents=[common], help="all hull parameter tuples")
    p.add_argument("--ring", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=["algorithm1", "exact", "both"], default="algorithm1")
    p.add_argument("--ell", type=int, default=0)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("average", parents=[common], help="mean hull q-dimension")
    p.add_argument("--ring", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check-exact", action="store_true")
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("count", parents=[common], help="number of codes with hull q-dimension tau")
    p.add_argument("--ring", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", parents=[common], help="brute-force oracle over a grid file")
    p.add_argument("--grid", required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if args.budget is None and os.environ.get("HULLCTL_BUDGET"):
        try:
            args.budget = int(os.environ["HULLCTL_BUDGET"])
        except ValueError:
            print("HULLCTL_BUDGET must be an integer", file=sys.stderr)
            return EXIT_USAGE
    try:
        payload, table, csv_, code = args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationError as exc:
        _emit(json.dumps({"error": str(exc), "witness": exc.witness}, indent=2) + "\n", args.out)
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValidationError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif args.format == "csv":
        text = csv_()
    else:
        text = table() + "\n"
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
