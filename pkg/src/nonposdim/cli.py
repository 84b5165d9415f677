"""Command-line interface.

Every subcommand prints a single JSON document (complex numbers as re/im
arrays) embedding the library version and the full run configuration, so runs
are reproducible byte-for-byte from their own output.

Exit codes: 0 success, 2 validation error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib.metadata import version as pkg_version

import numpy as np

from . import bound_engine as be
from . import map_catalog as mc
from . import multipartite_npt as mp
from . import reproduce
from . import search_engine as srch
from . import sdp_engine as se
from . import tensor_core as tc

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3


class ValidationError(ValueError):
    pass


def _version() -> str:
    try:
        return pkg_version("nonposdim")
    except Exception:
        return "unknown"


def _emit(payload: dict, args) -> int:
    doc = {"version": _version(), "config": _config_dict(args), **payload}
    text = json.dumps(doc, indent=2, sort_keys=True)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK

def _config_dict(args) -> dict:
    skip = {"func", "output"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"malformed dims {text!r}") from exc
    if not dims or any(d < 1 for d in dims):
        raise ValidationError(f"malformed dims {text!r}")
    return dims


def _load_map(label: str) -> mc.HPMap:
    try:
        return mc.parse_label(label)
    except (mc.UnknownMapError, tc.DimensionError) as exc:
        raise ValidationError(str(exc)) from exc


def cmd_bound(args) -> int:
    phi = _load_map(args.map)
    if args.scan:
        grid = None
        if args.x_grid:
            grid = [float(x) for x in args.x_grid.split(",")]
        report = be.lemma_bound_scan(phi, args.m, grid)
    elif args.x is not None:
        report = be.lemma_bound(phi, args.m, args.x)
    else:
        report = be.best_upper(phi, args.m)
    trivial = be.trivial_upper(args.m, phi.n_in, 1)
    return _emit({"report": report.to_json(), "trivial_upper": trivial}, args)


def cmd_search(args) -> int:
    phi = _load_map(args.map)
    ranks = None
    if args.ranks:
        ranks = tuple(int(r) for r in args.ranks.split(","))
    report = srch.search_nu_lower(
        phi, args.m, trials=args.trials, rank_schedule=ranks, seed=args.seed, threads=args.threads
    )
    doc = report.to_json()
    if not args.include_state:
        doc["best_state"] = None
    return _emit({"report": doc}, args)


def cmd_diamond(args) -> int:
    phi = _load_map(args.map)
    if args.vs:
        other = _load_map(args.vs)
        if args.scale is not None:
            other = args.scale * other
        value = se.diamond_distance(phi, other)
        return _emit({"diamond_distance": value}, args)
    return _emit({"diamond_norm": se.diamond_norm(phi)}, args)


def cmd_npt(args) -> int:
    dims = _parse_dims(args.dims)
    if args.npt_command == "subspace":
        basis = mp.npt_subspace_basis(dims)
        vecs = [{"re": v.real.tolist(), "im": v.imag.tolist()} for v in basis.vectors]
        return _emit({"dims": list(dims), "dim": basis.dim, "basis": vecs}, args)
    if args.npt_command == "certify":
        with open(args.state) as fh:
            rho = tc.HermOp.from_json(json.load(fh))
        if rho.dims != dims:
            raise ValidationError(f"state dims {rho.dims} do not match --dims {dims}")
        cert = mp.npt_certificate(rho)
        return _emit({"certificate": cert.to_json()}, args)
    raise ValidationError(f"unknown npt subcommand {args.npt_command!r}")


def cmd_witness(args) -> int:
    if args.three_qubit_example:
        x1, x2, w = mp.three_qubit_example()
        eigs = tc.herm_eigs(w)
        return _emit(
            {
                "witness": w.to_json(),
                "components": [x1.to_json(), x2.to_json()],
                "eigenvalues": eigs.tolist(),
            },
            args,
        )
    if not args.dims:
        raise ValidationError("witness requires --dims or --three-qubit-example")
    dims = _parse_dims(args.dims)
    result = mp.decomposable_witness(dims)
    return _emit(
        {
            "dims": list(dims),
            "c_opt": result.c_opt,
            "neg_count": result.neg_count,
            "witness_eigenvalues": tc.herm_eigs(result.witness).tolist(),
        },
        args,
    )


def cmd_reproduce(args) -> int:
    report = reproduce.run(only=args.only, search_trials=args.search_trials)
    for item in report["items"]:
        status = {True: "PASS", False: "FAIL", None: "INFO"}[item["passed"]]
        print(f"[{status}] {item['name']}", file=sys.stderr)
    code = _emit(report, args)
    if report["failed"]:
        return 1
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonposdim",
        description="Bounds and certificates for the non-positive dimension of positive maps",
    )
    parser.add_argument("--output", help="write the JSON document to this path instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="upper bounds via the diamond-distance lemma")
    p.add_argument("--map", required=True, help="catalog label, e.g. choi or reduction:n=5,k=2")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--x", type=float, help="scalar for the distance bound")
    p.add_argument("--scan", action="store_true", help="scan a grid of x values")
    p.add_argument("--x-grid", help="comma-separated x values for --scan")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("search", help="randomized lower bound via negative-eigenvalue counting")
    p.add_argument("--map", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--ranks", help="comma-separated rank schedule")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=int(os.environ.get("NONPOSDIM_THREADS", "1")))
    p.add_argument("--include-state", action="store_true", help="embed the best state found")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("diamond", help="diamond norm or distance")
    p.add_argument("--map", required=True)
    p.add_argument("--vs", help="second map label for a distance")
    p.add_argument("--scale", type=float, help="scale the second map")
    p.set_defaults(func=cmd_diamond)

    p = sub.add_parser("npt", help="multipartite NPT subspace and certificates")
    npt_sub = p.add_subparsers(dest="npt_command", required=True)
    q = npt_sub.add_parser("subspace")
    q.add_argument("--dims", required=True, help="comma-separated subsystem dimensions")
    q.set_defaults(func=cmd_npt)
    q = npt_sub.add_parser("certify")
    q.add_argument("--dims", required=True)
    q.add_argument("--state", required=True, help="matrix JSON file")
    q.set_defaults(func=cmd_npt)

    p = sub.add_parser("witness", help="decomposable witness with maximal negative eigenvalues")
    p.add_argument("--dims")
    p.add_argument(
        "--three-qubit-example",
        action="store_true",
        help="emit the explicit integer 3-qubit witness",
    )
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("reproduce", help="run the full reproduction report")
    p.add_argument("--only", help="substring filter on item names")
    p.add_argument("--search-trials", type=int, default=100_000)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, tc.DimensionError, mp.SupportError, be.BoundInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except se.SdpSolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
