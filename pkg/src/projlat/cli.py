"""Command line front end.

Subcommands:
  gen            write a seeded random instance (projection pair, lattice
                 map, or ring isomorphism) as JSON
  halmos         two-projection canonical form of a stored pair
  coordinatize   run the lattice-to-ring pipeline on a stored lattice map
  dye            orthogonality-preserving extension with certificate
  factor         inner factorization of a stored ring isomorphism
  verify-suite   run every property family and report

Exit codes: 0 all checks pass, 1 a check failed, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .core import (
    DEFAULT_TOL,
    AlgebraShape,
    Element,
    Tolerances,
    cond,
    distance,
)
from .coordinatize import coordinatize
from .errors import OrthogonalityNotPreserved, ProjlatError
from .halmos import halmos_decompose, reconstruct
from .maps import FromConjugation, from_conjugation
from .report import CheckResult, Report, run_check
from .ringiso import dye_extension, inner_factor
from .sampling import random_element, random_invertible, random_projection, rng_from
from .serialize import (
    element_to_obj,
    frame_to_obj,
    halmos_to_obj,
    load_json,
    map_from_obj,
    map_to_obj,
    pair_from_obj,
    pair_to_obj,
    projection_to_obj,
    ring_iso_from_obj,
    ring_iso_to_obj,
    save_json,
)
from .suite import verify_suite

__all__ = ["main"]


class _InputError(Exception):
    pass


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PROJLAT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _InputError(f"PROJLAT_SEED is not an integer: {env!r}") from None
    return 0


def _resolve_tol(args) -> Tolerances:
    return Tolerances(
        rank_rel=args.tol_rank if args.tol_rank is not None else DEFAULT_TOL.rank_rel,
        proj_tol=args.tol_proj if args.tol_proj is not None else DEFAULT_TOL.proj_tol,
        eq_tol=args.tol_eq if args.tol_eq is not None else DEFAULT_TOL.eq_tol,
    )


def _parse_shape(text: str) -> AlgebraShape:
    try:
        return AlgebraShape.parse(text)
    except ValueError as exc:
        raise _InputError(str(exc)) from None


def _load(path: str, loader, tol: Tolerances):
    try:
        return loader(load_json(path), tol)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise _InputError(f"{path}: {exc}") from exc
    except ProjlatError as exc:
        raise _InputError(f"{path}: {type(exc).__name__}: {exc}") from exc


def _emit(report: Report, args) -> int:
    obj = report.to_obj()
    if args.out:
        save_json(obj, args.out)
    if args.json:
        print(report.to_json())
    else:
        for c in report.checks:
            res = "-" if c.max_residual is None else f"{c.max_residual:.3e}"
            print(f"{c.status:<22} {c.name:<26} residual={res:<11} ({c.seconds:.2f}s)")
        print(f"status: {obj['status']}")
    if not report.passed:
        first = report.first_failure()
        if first is not None:
            print(f"first failing check: {first.name}", file=sys.stderr)
        return 1
    return 0


def _cmd_gen(args) -> int:
    shape = _parse_shape(args.shape)
    seed = _resolve_seed(args)
    tol = _resolve_tol(args)
    rng = rng_from(seed)
    if args.kind == "projection-pair":
        obj = pair_to_obj(random_projection(shape, rng), random_projection(shape, rng))
    elif args.kind == "lattice-map":
        t = random_invertible(shape, rng, cond_max=100.0)
        obj = map_to_obj(from_conjugation(t, tol))
    elif args.kind == "ring-iso":
        t = random_invertible(shape, rng, cond_max=100.0)
        obj = ring_iso_to_obj(t, "id" if seed % 2 == 0 else "conj")
    else:  # argparse choices guard this
        raise _InputError(f"unknown kind {args.kind!r}")
    if args.out:
        save_json(obj, args.out)
    else:
        print(json.dumps(obj, indent=2))
    return 0


def _cmd_halmos(args) -> int:
    tol = _resolve_tol(args)
    p, q = _load(args.input, pair_from_obj, tol)
    report = Report(
        command="halmos",
        shape=list(p.shape.blocks),
        seed=_resolve_seed(args),
        samples=1,
        tolerances=tol,
    )
    dec_holder = {}

    def body():
        dec = halmos_decompose(p, q, tol)
        dec_holder["dec"] = dec
        p2, q2 = reconstruct(dec, tol)
        return max(distance(p, p2), distance(q, q2)), None

    report.checks.append(
        run_check(
            "halmos-roundtrip", "two-projection canonical form round trip", body, 1e-8
        )
    )
    if "dec" in dec_holder:
        report.extra["decomposition"] = halmos_to_obj(dec_holder["dec"])
    return _emit(report, args)


def _cmd_coordinatize(args) -> int:
    tol = _resolve_tol(args)
    phi = _load(args.input, map_from_obj, tol)
    seed = _resolve_seed(args)
    samples = args.samples if args.samples is not None else 8
    report = Report(
        command="coordinatize",
        shape=list(phi.source.blocks),
        seed=seed,
        samples=samples,
        tolerances=tol,
    )
    scale = 1.0
    if isinstance(phi.provenance, FromConjugation):
        scale = max(1.0, cond(phi.provenance.T))
    holder = {}

    def body():
        result = coordinatize(phi, samples=samples, seed=seed, tol=tol)
        holder["result"] = result
        diag = result.diagnostics
        keys = (
            "unit",
            "additivity",
            "multiplicativity",
            "support_intertwining",
            "projection_intertwining",
            "two_slot_meet",
            "slot_agreement",
        )
        return max(float(diag[k]) for k in keys) / scale, None

    report.checks.append(
        run_check(
            "coordinatize", "lattice-to-ring reconstruction", body, 1e-6
        )
    )
    if "result" in holder:
        result = holder["result"]
        rng = rng_from(seed)
        probes = [Element.identity(phi.source)] + [
            random_element(phi.source, rng, norm_bound=2.0) for _ in range(samples)
        ]
        report.extra["result"] = {
            "target_frame": frame_to_obj(result.target_frame),
            "normalizers": [element_to_obj(s) for s in result.normalizers],
            "diagnostics": dict(result.diagnostics),
            "probes": [
                {"input": element_to_obj(x), "output": element_to_obj(result.Psi(x))}
                for x in probes
            ],
        }
    return _emit(report, args)


def _cmd_dye(args) -> int:
    tol = _resolve_tol(args)
    phi = _load(args.input, map_from_obj, tol)
    seed = _resolve_seed(args)
    samples = args.samples if args.samples is not None else 12
    report = Report(
        command="dye",
        shape=list(phi.source.blocks),
        seed=seed,
        samples=samples,
        tolerances=tol,
    )
    anchor = "orthogonality-preserving extension"
    try:
        _, cert = dye_extension(phi, samples=samples, seed=seed, tol=tol)
    except OrthogonalityNotPreserved as exc:
        report.checks.append(
            CheckResult(
                "orthogonality-preservation", anchor, "FAIL", None, 0.0, exc.witness
            )
        )
        return _emit(report, args)
    for entry in cert["checks"]:
        res = float(entry["max_residual"])
        status = "PASS" if res <= 1e-8 else "FAIL"
        report.checks.append(CheckResult(entry["name"], anchor, status, res, 0.0))
    report.extra["certificate"] = cert
    return _emit(report, args)


def _cmd_factor(args) -> int:
    tol = _resolve_tol(args)
    psi = _load(args.input, ring_iso_from_obj, tol)
    seed = _resolve_seed(args)
    samples = args.samples if args.samples is not None else 16
    shape = psi.T.shape
    report = Report(
        command="factor",
        shape=list(shape.blocks),
        seed=seed,
        samples=samples,
        tolerances=tol,
    )
    holder = {}

    def body():
        fac = inner_factor(psi, shape, samples=samples, seed=seed, tol=tol)
        holder["fac"] = fac
        return fac.residual / max(1.0, cond(fac.y)), None

    report.checks.append(
        run_check(
            "inner-factor", "inner factorization of ring isomorphisms", body, 1e-7
        )
    )
    if "fac" in holder:
        fac = holder["fac"]
        report.extra["factorization"] = {
            "q": projection_to_obj(fac.q),
            "y": element_to_obj(fac.y),
            "psi0_kind": list(fac.psi0_kind),
            "block_map": list(fac.block_map),
            "residual": float(fac.residual),
        }
    return _emit(report, args)


def _cmd_verify_suite(args) -> int:
    tol = _resolve_tol(args)
    shape = _parse_shape(args.shape)
    seed = _resolve_seed(args)
    samples = args.samples if args.samples is not None else 25
    report = verify_suite(shape, seed=seed, samples=samples, tol=tol)
    return _emit(report, args)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--samples", type=int, default=None)
    sub.add_argument("--tol-rank", type=float, default=None, dest="tol_rank")
    sub.add_argument("--tol-proj", type=float, default=None, dest="tol_proj")
    sub.add_argument("--tol-eq", type=float, default=None, dest="tol_eq")
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="projlat",
        description="projection lattices, two-projection canonical forms, "
        "and lattice-to-ring coordinatization at desk scale",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="write a seeded random instance")
    gen.add_argument(
        "kind", choices=["projection-pair", "lattice-map", "ring-iso"]
    )
    gen.add_argument("--shape", type=str, default="3")
    _add_common(gen)
    gen.set_defaults(fn=_cmd_gen)

    hal = subs.add_parser("halmos", help="two-projection canonical form")
    hal.add_argument("input", help="projection-pair JSON file")
    _add_common(hal)
    hal.set_defaults(fn=_cmd_halmos)

    coo = subs.add_parser("coordinatize", help="lattice map to ring isomorphism")
    coo.add_argument("input", help="lattice-map JSON file")
    _add_common(coo)
    coo.set_defaults(fn=_cmd_coordinatize)

    dye = subs.add_parser("dye", help="orthogonality-preserving extension")
    dye.add_argument("input", help="lattice-map JSON file")
    _add_common(dye)
    dye.set_defaults(fn=_cmd_dye)

    fac = subs.add_parser("factor", help="inner factorization of a ring iso")
    fac.add_argument("input", help="ring-iso JSON file")
    _add_common(fac)
    fac.set_defaults(fn=_cmd_factor)

    ver = subs.add_parser("verify-suite", help="run every property family")
    ver.add_argument("--shape", type=str, default="3")
    _add_common(ver)
    ver.set_defaults(fn=_cmd_verify_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ProjlatError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
