"""Command line interface.

Subcommands: eval, select, margins, reduce, verify, example.  Point
indices are 1-based on this surface (they are line numbers of the input
file); the Python API is 0-based.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure
(singular matrix, enumeration budget, lost separation), 3 verification
mismatch.

All output is deterministic: floats are printed with 12 significant
digits, keys are sorted, and results are independent of --threads.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from ._validation import check_subset
from .diversity import similarity_matrix, solow_polasky
from .exceptions import (
    BudgetExceededError,
    PointFormatError,
    SeparationError,
    SingularMatrixError,
)
from .geometry import PointSet, format_points, margins, parse_points
from .reduction import (
    DEFAULT_SLACK,
    decide_via_sp,
    reduce as reduce_instance,
    verify_reduction,
)
from .solvers import DEFAULT_BUDGET, sp_select_exact, sp_select_greedy

_FLOAT_DIGITS = ".12g"

# Built-in worked example: a 3-4-5-flavoured triangle whose unit-disk
# graph has the single independent pair {2, 3}; scaled by 3 the diversity
# values of the three pairs are pinned below to 1e-6.
_EXAMPLE_SOURCE = (("0", "0"), ("1", "0"), ("0", "3/4"))
_EXAMPLE_THETA0 = 1.0
_EXAMPLE_SCALE = 3
_EXAMPLE_GOLDEN = {
    (0, 1): 1.905148,  # scaled distance 3
    (0, 2): 1.809301,  # scaled distance 9/4
    (1, 2): 1.954045,  # scaled distance 15/4
}
_EXAMPLE_TOL = 1e-6
_EXAMPLE_WINNER = (1, 2)


def _fmt(value):
    """Deterministic text rendering for report values."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, float):
        return format(value, _FLOAT_DIGITS)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return (
            "{"
            + ", ".join(f"{k}: {_fmt(v)}" for k, v in sorted(value.items()))
            + "}"
        )
    return str(value)


def _jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return float(format(value, _FLOAT_DIGITS))
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return str(value)


def _emit(payload: dict, as_json: bool, stream=None):
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(_jsonable(payload), sort_keys=True) + "\n")
    else:
        for key in sorted(payload):
            stream.write(f"{key} = {_fmt(payload[key])}\n")


def _one_based(subset):
    return [i + 1 for i in subset]


def _load_points(args) -> PointSet:
    with open(args.file, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_points(text, exact=args.exact)


def _parse_subset(spec: str, n: int):
    try:
        raw = [int(tok) for tok in spec.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"subset must be comma-separated integers, got {spec!r}")
    shifted = [i - 1 for i in raw]
    if any(i < 0 for i in shifted):
        raise ValueError(f"subset indices are 1-based, got {spec!r}")
    return check_subset(shifted, n)


def _certificate_payload(cert) -> dict:
    return {
        "good_lower": cert.good_lower,
        "bad_upper": cert.bad_upper,
        "separated": cert.separated,
        "sufficient": cert.sufficient,
        "log_domain": cert.log_domain,
        "log_gap": cert.log_gap,
    }


def cmd_eval(args):
    ps = _load_points(args)
    n = len(ps)
    subset = _parse_subset(args.subset, n) if args.subset else tuple(range(n))
    sim = similarity_matrix(ps.take(subset), args.theta0)
    weighting = solow_polasky(sim)
    payload = {
        "command": "eval",
        "backend": ps.backend,
        "theta0": args.theta0,
        "subset": _one_based(subset),
        "k": len(subset),
        "sp_value": weighting.sp_value,
        "weights": [float(w) for w in weighting.w],
        "residual": weighting.residual,
        "underflow": sim.underflow,
    }
    return payload, 0


def cmd_select(args):
    ps = _load_points(args)
    if args.greedy:
        sel = sp_select_greedy(ps, args.k, args.theta0)
        payload = {
            "command": "select",
            "method": "greedy",
            "backend": ps.backend,
            "theta0": args.theta0,
            "k": args.k,
            "best": _one_based(sel.indices),
            "best_value": sel.value,
        }
        return payload, 0
    res = sp_select_exact(
        ps,
        args.k,
        args.theta0,
        budget=args.budget,
        workers=args.threads,
    )
    payload = {
        "command": "select",
        "method": "exact",
        "backend": ps.backend,
        "theta0": args.theta0,
        "k": args.k,
        "best": _one_based(res.best.indices),
        "best_value": res.best.value,
        "all_optima": [_one_based(s.indices) for s in res.all_optima],
        "evaluated": res.evaluated,
        "tie_tol": res.tie_tol,
    }
    return payload, 0


def cmd_margins(args):
    ps = _load_points(args)
    rep = margins(ps)
    payload = {
        "command": "margins",
        "backend": rep.backend,
        "n": len(ps),
        "delta": rep.delta,
        "eta": rep.eta,
        "eta_sentinel": rep.eta_sentinel,
        "bit_length": rep.bit_length,
        "epsilon": rep.epsilon,
    }
    return payload, 0


def cmd_reduce(args):
    ps = _load_points(args)
    inst = reduce_instance(
        ps, args.k, args.theta0, mode=args.mode, slack=args.slack
    )
    plan = inst.plan
    payload = {
        "command": "reduce",
        "backend": ps.backend,
        "mode": plan.mode,
        "theta0": plan.theta0,
        "k": plan.k,
        "n": len(ps),
        "delta": plan.delta,
        "eta": plan.eta,
        "eta_sentinel": plan.eta_sentinel,
        "scale": plan.scale,
        "log_rho": plan.log_rho,
        "log_r": plan.log_r,
        "log_q": plan.log_q,
    }
    payload.update(_certificate_payload(inst.certificate))
    if plan.mode == "analytic":
        payload["threshold"] = plan.threshold
        payload["slack"] = plan.slack
        image_text = format_points(inst.image)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(image_text)
            payload["out"] = args.out
        else:
            payload["image"] = image_text.splitlines()
    else:
        payload["bit_length"] = plan.bit_length
        payload["epsilon"] = plan.epsilon
        payload["m_bound"] = plan.m_bound
        payload["c_theta0"] = plan.c_theta0
        payload["scale_bits"] = int(plan.scale).bit_length()
    return payload, 0


def cmd_verify(args):
    ps = _load_points(args)
    rep = verify_reduction(
        ps,
        args.k,
        args.theta0,
        slack=args.slack,
        budget=args.budget,
        workers=args.threads,
    )
    payload = {
        "command": "verify",
        "backend": ps.backend,
        "theta0": rep.theta0,
        "k": rep.k,
        "n": rep.n,
        "scale": rep.scale,
        "good_lower": rep.good_lower,
        "bad_upper": rep.bad_upper,
        "tie_tol": rep.tie_tol,
        "optima": [_one_based(s) for s in rep.optima],
        "independents": [_one_based(s) for s in rep.independents],
        "sets_match": rep.sets_match,
        "min_good_sp": rep.min_good_sp,
        "max_bad_sp": rep.max_bad_sp,
        "good_threshold_ok": rep.good_threshold_ok,
        "bad_threshold_ok": rep.bad_threshold_ok,
        "strictly_separated": rep.strictly_separated,
        "decision_accepted": rep.decision_accepted,
        "independent_exists": rep.independent_exists,
        "decision_agrees": rep.decision_agrees,
        "evaluated": rep.evaluated,
        "passed": rep.passed,
    }
    return payload, 0 if rep.passed else 3


def cmd_example(args):
    ps = PointSet(_EXAMPLE_SOURCE)
    inst = reduce_instance(
        ps, 2, _EXAMPLE_THETA0, mode="analytic", scale=_EXAMPLE_SCALE
    )
    pair_values = {}
    mismatches = []
    for pair, expected in sorted(_EXAMPLE_GOLDEN.items()):
        sim = similarity_matrix(inst.image.take(pair), _EXAMPLE_THETA0)
        value = solow_polasky(sim).sp_value
        key = ",".join(str(i + 1) for i in pair)
        pair_values[key] = value
        if abs(value - expected) > _EXAMPLE_TOL:
            mismatches.append(f"pair {key}: {value!r} vs expected {expected!r}")
    sel = sp_select_exact(inst.image, 2, _EXAMPLE_THETA0)
    if sel.best.indices != _EXAMPLE_WINNER:
        mismatches.append(
            f"winner {sel.best.indices} vs expected {_EXAMPLE_WINNER}"
        )
    if tuple(s.indices for s in sel.all_optima) != (_EXAMPLE_WINNER,):
        mismatches.append("winner is not the unique optimum")
    decision = decide_via_sp(inst)
    verification = verify_reduction(
        ps, 2, _EXAMPLE_THETA0, scale=_EXAMPLE_SCALE
    )
    if not decision.accepted or not verification.passed:
        mismatches.append("reduction round trip failed")
    payload = {
        "command": "example",
        "source": [" ".join(p) for p in _EXAMPLE_SOURCE],
        "theta0": _EXAMPLE_THETA0,
        "k": 2,
        "scale": _EXAMPLE_SCALE,
        "delta": inst.plan.delta,
        "eta": inst.plan.eta,
        "image": format_points(inst.image).splitlines(),
        "pair_sp_values": pair_values,
        "expected_sp_values": {
            ",".join(str(i + 1) for i in pair): v
            for pair, v in _EXAMPLE_GOLDEN.items()
        },
        "tolerance": _EXAMPLE_TOL,
        "winner": _one_based(sel.best.indices),
        "winner_value": sel.best.value,
        "good_lower": inst.certificate.good_lower,
        "bad_upper": inst.certificate.bad_upper,
        "decision_accepted": decision.accepted,
        "verification_passed": verification.passed,
        "mismatches": mismatches,
        "passed": not mismatches,
    }
    return payload, 0 if not mismatches else 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this surface reserves 2 for
    numerical failures, so usage errors exit 1 instead."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sub, file_arg=True):
    if file_arg:
        sub.add_argument("file", help="point file (one 'x y' pair per line)")
        sub.add_argument(
            "--exact",
            action="store_true",
            help="force the exact rational backend (fractions imply it)",
        )
    sub.add_argument("--json", action="store_true", help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spdiversity",
        description=(
            "Solow-Polasky diversity: evaluation, exact maximization, "
            "distance margins, and the unit-disk independent-set reduction. "
            "Point indices are 1-based (line numbers of the input file)."
        ),
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("eval", help="diversity of a point set or subset")
    _add_common(p)
    p.add_argument("--theta0", type=float, default=1.0)
    p.add_argument(
        "--subset",
        default=None,
        help="comma-separated 1-based indices (default: all points)",
    )
    p.set_defaults(func=cmd_eval)

    p = subs.add_parser("select", help="most diverse k-subset")
    _add_common(p)
    p.add_argument("--theta0", type=float, default=1.0)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--greedy", action="store_true", help="polynomial heuristic")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_select)

    p = subs.add_parser("margins", help="distance margins delta and eta")
    _add_common(p)
    p.set_defaults(func=cmd_margins)

    p = subs.add_parser("reduce", help="plan and certify a scaled reduction")
    _add_common(p)
    p.add_argument("--theta0", type=float, default=1.0)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["analytic", "bits"], default="analytic")
    p.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    p.add_argument("--out", default=None, help="write the scaled point file here")
    p.set_defaults(func=cmd_reduce)

    p = subs.add_parser("verify", help="exhaustively verify a reduction")
    _add_common(p)
    p.add_argument("--theta0", type=float, default=1.0)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("example", help="built-in worked example, self-checked")
    _add_common(p, file_arg=False)
    p.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, status = args.func(args)
    except (SingularMatrixError, BudgetExceededError, SeparationError) as exc:
        sys.stderr.write(f"spdiversity: numerical failure: {exc}\n")
        return 2
    except (PointFormatError, ValueError, OSError) as exc:
        sys.stderr.write(f"spdiversity: error: {exc}\n")
        return 1
    _emit(payload, args.json)
    return status


if __name__ == "__main__":
    sys.exit(main())
