"""Command-line entry point: ``sidonlab <subcommand> ...``.

Every subcommand writes one JSON document (CSV for grids) to stdout.
Exit status: 0 ok, 1 computational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace

import numpy as np

from . import extremal_family as fam
from .acceptance import run_all
from .biunimodular import BiunimodularError, gauss_sequence, hadamard_residual, is_biunimodular, unitary_dft
from .bounds import chain_check, newman_queffelec_bound
from .duality import (
    DualFunctional,
    NormComputationError,
    SidonConfig,
    lift_to_roots,
    real_unconditional_constant,
    sidon_constant_bracket,
    verify_representation,
)
from .minimax import MinimaxConfig, default_seed, minimax_optimize
from .trigpoly import FrequencySet, TrigPolynomial


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def emit(doc, out=None):
    out = out or sys.stdout
    out.write(json.dumps(doc, indent=2, default=_jsonable))
    out.write("\n")


def emit_csv(header, rows, out=None):
    writer = csv.writer(out or sys.stdout, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])


def _freqs(text: str) -> FrequencySet:
    try:
        return FrequencySet.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad frequency set {text!r}: {exc}") from None


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(tok.strip().replace(" ", "")) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad value list {text!r}; use e.g. 1,-1,0.5+0.5j") from None


def _poly_arg(text: str) -> TrigPolynomial:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        return TrigPolynomial.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad polynomial JSON: {exc}") from None


def cmd_bound(args):
    freqs = _freqs(args.set)
    if args.poly:
        p = _poly_arg(args.poly)
    else:
        p = TrigPolynomial(freqs, np.full(len(freqs), 1.0 / len(freqs)))
    emit({
        "set": list(freqs),
        "bound": newman_queffelec_bound(freqs),
        "polynomial": p.to_dict(),
        "chain_report": chain_check(p).to_dict(),
    })


def _minimax_config(args) -> MinimaxConfig:
    cfg = MinimaxConfig(seed=args.seed if args.seed is not None else default_seed())
    for name in ("starts", "iters", "grid"):
        val = getattr(args, name, None)
        if val is not None:
            cfg = replace(cfg, **{name: val})
    return cfg


def cmd_minimax(args):
    res = minimax_optimize(_freqs(args.set), _minimax_config(args))
    emit({"set": list(res.polynomial.support), **res.to_dict()})


def cmd_sidon(args):
    freqs = _freqs(args.set)
    seed = args.seed if args.seed is not None else default_seed()
    cfg = replace(SidonConfig(), seed=seed, starts=args.starts)
    mm = None
    if args.minimax:
        mm = minimax_optimize(freqs, _minimax_config(args)).value
    br = sidon_constant_bracket(freqs, cfg, minimax_value=mm)
    emit({"set": list(freqs), **br.to_dict()})


def cmd_unconditional(args):
    br = real_unconditional_constant(_freqs(args.set))
    emit({"set": list(_freqs(args.set)), **br.to_dict()})


def cmd_lift(args):
    values = _complex_list(args.values)
    freqs = _freqs(args.set) if args.set else FrequencySet(tuple(range(len(values))))
    if len(freqs) != len(values):
        raise UsageError(f"{len(values)} values for {len(freqs)} frequencies")
    l = DualFunctional(freqs, np.asarray(values))
    try:
        mu = lift_to_roots(l, args.N)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    emit({"functional": l.to_dict(), "measure": mu.to_dict(), "represents": verify_representation(mu, l)})


def _points_doc(points):
    return [
        {"t": p.t, "tau": p.tau, "phi": p.value, "kind": p.kind, "gradient_norm": p.gradient_norm,
         "hessian_eigenvalues": list(p.eigenvalues)}
        for p in points
    ]


def cmd_family(args):
    if args.scan is not None:
        if args.scan < 2:
            raise UsageError("--scan needs at least 2 values")
        rows = []
        for tau in np.linspace(0, np.pi / 2, args.scan):
            for p in fam.critical_points(tau):
                rows.append((float(tau), p.t, p.value, p.kind))
        emit_csv(("tau", "t", "phi", "kind"), rows)
        return
    tau = args.tau if args.tau is not None else np.pi / 2
    emit({
        "tau": tau,
        "canonical_tau": fam.FamilyParameter(tau).canonical,
        "polynomial": fam.family_coefficients(tau).to_dict(),
        "critical_points": _points_doc(fam.critical_points(tau)),
    })


def cmd_critical_points(args):
    if args.tau is None:
        emit({"special_points": _points_doc(fam.special_points())})
    else:
        emit({"tau": args.tau, "critical_points": _points_doc(fam.critical_points(args.tau))})


def cmd_phi_grid(args):
    if args.nt < 1 or args.ntau < 1:
        raise UsageError("--nt and --ntau must be positive")
    ts = 2 * np.pi * np.arange(args.nt) / args.nt
    taus = np.linspace(0, np.pi / 2, args.ntau) if args.ntau > 1 else np.array([0.0])
    rows = ((t, tau, fam.phi(t, tau)) for t in ts for tau in taus)
    emit_csv(("t", "tau", "phi"), rows)


def cmd_biuni(args):
    if args.n < 1:
        raise UsageError("--n must be positive")
    u = gauss_sequence(args.n)
    emit({
        "n": u.n,
        "sequence": [[float(z.real), float(z.imag)] for z in u.entries],
        "transform_moduli": np.abs(unitary_dft(u.entries)).tolist(),
        "biunimodular": is_biunimodular(u),
        "hadamard_residual": hadamard_residual(u),
    })


def cmd_verify_all(args):
    report = run_all()
    emit(report)
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sidonlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="sqrt(|set|-1) bound and averaging chain")
    p.add_argument("--set", required=True)
    p.add_argument("--poly", help="polynomial JSON (or @file) for the chain report")
    p.set_defaults(func=cmd_bound)

    def optimizer_flags(p):
        p.add_argument("--set", required=True)
        p.add_argument("--starts", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--iters", type=int)
        p.add_argument("--grid", type=int)

    p = sub.add_parser("minimax", help="minimize sup norm at moduli sum 1")
    optimizer_flags(p)
    p.set_defaults(func=cmd_minimax)

    p = sub.add_parser("sidon", help="bracket the Sidon constant")
    optimizer_flags(p)
    p.set_defaults(starts=SidonConfig().starts)
    p.add_argument("--minimax", action="store_true", help="also run the minimax optimizer")
    p.set_defaults(func=cmd_sidon)

    p = sub.add_parser("unconditional", help="real unconditional constant")
    p.add_argument("--set", required=True)
    p.set_defaults(func=cmd_unconditional)

    p = sub.add_parser("lift", help="lift a functional to the N-th roots of unity")
    p.add_argument("--values", required=True, help="comma-separated l(e_j), e.g. 1,-1,-1,1")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--set", help="frequencies (default 0..len-1)")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("family", help="extremal family member or scan")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--tau", type=float)
    g.add_argument("--scan", type=int, help="number of tau values in [0, pi/2]; CSV output")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("critical-points", help="critical points of phi on a tau slice")
    p.add_argument("--tau", type=float)
    p.set_defaults(func=cmd_critical_points)

    p = sub.add_parser("phi-grid", help="CSV of phi on a (t, tau) grid")
    p.add_argument("--nt", type=int, required=True)
    p.add_argument("--ntau", type=int, required=True)
    p.set_defaults(func=cmd_phi_grid)

    p = sub.add_parser("biuni", help="Gauss biunimodular sequence of length n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_biuni)

    p = sub.add_parser("verify-all", help="run every acceptance criterion")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sidonlab: error: {exc}", file=sys.stderr)
        return 2
    except (NormComputationError, BiunimodularError, ArithmeticError) as exc:
        print(f"sidonlab: computation failed: {exc}", file=sys.stderr)
        return 1
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
