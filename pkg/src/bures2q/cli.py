"""Command-line interface.

stdout carries only the JSON report; diagnostics go to stderr.

Exit codes: 0 success, 2 invalid input, 3 numerical failure,
4 verification gap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import decompositions, measures, oracle, states
from .errors import Bures2qError, NotApplicableError, NumericalError, ValidationError
from .fileio import (
    ClosestSeparableBlock,
    EnsembleMember,
    ReportFile,
    VerificationBlock,
    dumps_state,
    matrix_to_pairs,
    parse_state_file,
    state_digest,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_GAP = 4

CONSTRUCTION_TOL = 1e-7
ORACLE_TOL = 1e-3
# the oracle may undershoot the closed form only by rounding noise
ORACLE_CEILING_TOL = 2e-8


def _emit(obj) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2) + "\n"
    sys.stdout.write(text)


def _base_report(rho) -> ReportFile:
    r = measures.report(rho)
    return ReportFile(input_digest=state_digest(rho.mat), **r.to_dict())


def _closest_block(rho) -> ClosestSeparableBlock:
    result = decompositions.closest_separable(rho)
    members = [
        EnsembleMember(q, *states.bloch_angles(a), *states.bloch_angles(b))
        for q, a, b in result.ensemble
    ]
    f = measures.fidelity(rho, result.sigma)
    return ClosestSeparableBlock(
        members=members,
        fidelity=f,
        bures_distance=float(measures.bures_from_fidelity(f)),
        sigma=matrix_to_pairs(result.sigma.mat),
    )


def cmd_measures(args) -> int:
    _emit(_base_report(parse_state_file(args.state)).dumps())
    return EXIT_OK


def cmd_concurrence(args) -> int:
    rho = parse_state_file(args.state)
    _emit({"input_digest": state_digest(rho.mat), "concurrence": measures.concurrence(rho)})
    return EXIT_OK


def cmd_eof(args) -> int:
    rho = parse_state_file(args.state)
    _emit({"input_digest": state_digest(rho.mat), "eof": measures.eof(rho)})
    return EXIT_OK


def cmd_fidelity(args) -> int:
    rho, sigma = parse_state_file(args.state), parse_state_file(args.other)
    f = measures.fidelity(rho, sigma)
    _emit(
        {
            "input_digests": [state_digest(rho.mat), state_digest(sigma.mat)],
            "fidelity": f,
            "bures_distance": float(measures.bures_from_fidelity(f)),
        }
    )
    return EXIT_OK


def cmd_closest_sep(args) -> int:
    rho = parse_state_file(args.state)
    rep = _base_report(rho)
    rep.closest_separable = _closest_block(rho)
    _emit(rep.dumps())
    return EXIT_OK


def cmd_verify(args) -> int:
    rho = parse_state_file(args.state)
    rep = _base_report(rho)
    block = _closest_block(rho)
    rep.closest_separable = block
    cfg = oracle.OracleConfig(
        num_product_terms=args.terms,
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        seed=args.seed,
    )
    res = oracle.maximize_fidelity_separable(rho, cfg, parallel=args.parallel)
    closed = rep.bures_entanglement
    via_oracle = float(measures.bures_from_fidelity(res.best_fidelity))
    gap_c = abs(block.bures_distance - closed)
    gap_o = via_oracle - closed
    passed = gap_c <= args.construction_tol and -ORACLE_CEILING_TOL <= gap_o <= args.tol
    rep.verification = VerificationBlock(
        closed_form=closed,
        construction=block.bures_distance,
        oracle=via_oracle,
        oracle_fidelity=res.best_fidelity,
        gap_construction=gap_c,
        gap_oracle=abs(gap_o),
        gap_oracle_construction=abs(via_oracle - block.bures_distance),
        construction_tol=args.construction_tol,
        oracle_tol=args.tol,
        passed=bool(passed),
        restarts=cfg.restarts,
        terms=cfg.num_product_terms,
        seed=cfg.seed,
        iterations_used=res.iterations_used,
        restart_index_of_best=res.restart_index_of_best,
    )
    _emit(rep.dumps())
    if not passed:
        print(
            f"verification gap exceeded: construction {gap_c:.3g}, oracle {gap_o:.3g}",
            file=sys.stderr,
        )
        return EXIT_GAP
    return EXIT_OK


def _generate(args) -> states.DensityMatrix:
    fam, params = args.family, args.params
    rng = states.make_rng(args.seed)

    def need(n):
        if len(params) != n:
            raise ValidationError(f"family {fam!r} takes {n} parameter(s), got {len(params)}")

    if fam == "bell":
        need(1)
        return states.bell(int(params[0])).density()
    if fam == "werner":
        need(1)
        return states.werner(float(params[0]))
    if fam == "ginibre":
        if len(params) > 1:
            raise ValidationError("ginibre takes at most one parameter (rank)")
        rank = int(params[0]) if params else 4
        return states.ginibre_random_density(rng, rank)
    if fam == "haar-pure":
        need(0)
        return states.haar_random_pure(rng, 4).density()
    if fam == "product":
        if params:
            need(4)
            t1, p1, t2, p2 = (float(p) for p in params)
            a, b = states.bloch_qubit(t1, p1), states.bloch_qubit(t2, p2)
        else:
            a, b = states.haar_random_pure(rng, 2), states.haar_random_pure(rng, 2)
        return states.product_state(a, b).density()
    raise ValidationError(f"unknown family {fam!r}")


def cmd_gen(args) -> int:
    try:
        rho = _generate(args)
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(str(exc)) from None
    text = dumps_state(rho)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _emit(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bures2q",
        description="Bures measure of entanglement for two-qubit states.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in [
        ("measures", cmd_measures, "concurrence, mu, EoF and Bures entanglement"),
        ("concurrence", cmd_concurrence, "concurrence only"),
        ("eof", cmd_eof, "entanglement of formation only"),
        ("closest-sep", cmd_closest_sep, "measures plus the closest separable state"),
    ]:
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("state", help="state file (JSON)")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("fidelity", help="fidelity and Bures distance of two states")
    sp.add_argument("state")
    sp.add_argument("other")
    sp.set_defaults(func=cmd_fidelity)

    sp = sub.add_parser("verify", help="closed form vs construction vs variational oracle")
    sp.add_argument("state")
    sp.add_argument("--restarts", type=int, default=oracle.OracleConfig.restarts)
    sp.add_argument("--terms", type=int, default=oracle.OracleConfig.num_product_terms)
    sp.add_argument("--max-iterations", type=int, default=oracle.OracleConfig.max_iterations)
    sp.add_argument("--seed", type=int, default=oracle.DEFAULT_SEED)
    sp.add_argument("--tol", type=float, default=ORACLE_TOL, help="oracle gap threshold")
    sp.add_argument("--construction-tol", type=float, default=CONSTRUCTION_TOL)
    sp.add_argument("--parallel", action="store_true", help="run restarts on a thread pool")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gen", help="write a state file for a standard family")
    sp.add_argument("family", choices=["bell", "werner", "ginibre", "product", "haar-pure"])
    sp.add_argument("params", nargs="*")
    sp.add_argument("--seed", type=int, default=oracle.DEFAULT_SEED)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, NotApplicableError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Bures2qError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # exit codes are a closed set
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
