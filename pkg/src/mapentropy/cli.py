"""Command-line front end.

Every command prints ``key = value`` lines on stdout. Exit codes:
0 success or certified, 1 check failed, 2 parse error, 3 invariant violation.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import additivity, channel, entropy, generators
from .io import ChannelFileError, load_channel, save_channel
from .linalg import hermitian_eig

log = logging.getLogger("mapentropy")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3


class UsageError(Exception):
    """Bad or missing command-line options."""


def fmt(x: float) -> str:
    """Fixed 12-decimal rendering used for entropies and gaps."""
    s = f"{x:.12f}"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def fmt_e(x: float) -> str:
    return f"{x:.12e}"


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _emit(key: str, value) -> None:
    print(f"{key} = {value}")


def cmd_entropy(args) -> int:
    phi = load_channel(args.channel)
    tp = channel.is_trace_preserving(phi, args.tol)
    _emit("trace_preserving", _bool(tp))
    _emit("unital", _bool(channel.is_unital(phi, args.tol)))
    _emit("S", fmt(entropy.map_entropy(phi)))
    w, _ = hermitian_eig(phi.choi)
    _emit("choi_spectrum", " ".join(fmt(x) for x in w))
    return EXIT_OK


def cmd_certify_add(args) -> int:
    phi = load_channel(args.phi)
    psi = load_channel(args.psi)
    rep = additivity.certify_dynamical_additivity(phi, psi, args.tol)
    _emit("certified", _bool(rep.certified))
    _emit("max_violation", fmt_e(rep.max_violation))
    _emit("entropy_gap", fmt(rep.entropy_gap))
    _emit("tol", f"{rep.tol:g}")
    return EXIT_OK if rep.certified else EXIT_FAILED


def cmd_decompose(args) -> int:
    phi = load_channel(args.channel)
    dec = additivity.biorthogonal_decomposition(phi, args.tol)
    _emit("components", len(dec))
    for i, (comp, part) in enumerate(zip(dec.components, dec.index_partition)):
        _emit(f"component.{i}.kraus_count", len(comp))
        _emit(f"component.{i}.indices", ",".join(str(j) for j in part))
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, comp in enumerate(dec.components):
            path = out / f"component_{i}.json"
            save_channel(path, comp, {"name": f"component {i} of {Path(args.channel).name}"})
            _emit(f"component.{i}.file", path)
    return EXIT_OK


def cmd_verify_sds(args) -> int:
    phi, lam, psi = (load_channel(p) for p in (args.phi, args.lam, args.psi))
    spec = args.blocks
    rep = additivity.verify_block_saturation(phi, lam, psi, spec)
    ok = abs(rep.gap) < args.tol and rep.choi_residual < args.tol
    _emit("blocks", spec)
    _emit("gap", fmt_e(rep.gap))
    _emit("choi_residual", fmt_e(rep.choi_residual))
    _emit("saturated", _bool(ok))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_cmi(args) -> int:
    phi, lam, psi = (load_channel(p) for p in (args.phi, args.lam, args.psi))
    _emit("cmi", fmt(additivity.conditional_mutual_information(phi, lam, psi)))
    return EXIT_OK


def _parse_probs(text: str):
    return [float(Fraction(p.strip())) for p in text.split(",")]


def cmd_gen(args) -> int:
    meta = {"name": args.kind, "seed": args.seed}
    kind = args.kind
    if kind == "sds-triple":
        if not args.blocks:
            raise UsageError("gen sds-triple needs --blocks")
        spec = args.blocks
        triple = generators.random_sds_triple(spec, args.seed)
        meta["blocks"] = str(spec)
        for role, ch in zip(generators.ROLES, triple):
            path = f"{args.out}.{role}.json"
            save_channel(path, ch, {**meta, "name": f"sds-triple {role}"})
            _emit(f"{role}", path)
        return EXIT_OK

    if kind == "unitary":
        ch = channel.unitary_channel(generators.random_unitary(args.dim, args.seed))
    elif kind == "bistochastic":
        ch = generators.random_bistochastic(args.dim, args.terms, args.seed)
    elif kind == "stochastic":
        ch = generators.random_stochastic(args.dim, args.terms, args.seed)
    elif kind == "pauli":
        if not args.probs:
            raise UsageError("gen pauli needs --probs")
        probs = _parse_probs(args.probs)
        ch = generators.pauli_channel(probs)
        meta["probs"] = probs
        meta.pop("seed")
    elif kind == "depolarizing":
        ch = generators.completely_depolarizing(args.dim)
        meta.pop("seed")
    elif kind == "identity":
        ch = channel.unitary_channel(np.eye(args.dim))
        meta.pop("seed")
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"unknown kind {kind}")
    save_channel(args.out, ch, meta)
    _emit("out", args.out)
    return EXIT_OK


GEN_KINDS = ("unitary", "bistochastic", "stochastic", "pauli", "depolarizing", "identity", "sds-triple")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mapentropy", description="Map entropy and additivity checks for quantum channels.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("entropy", help="map entropy, predicates and Choi spectrum")
    s.add_argument("channel")
    s.add_argument("--tol", type=float, default=channel.PREDICATE_TOL)
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("certify-add", help="certify S(phi o psi) = S(phi) + S(psi)")
    s.add_argument("phi")
    s.add_argument("psi")
    s.add_argument("--tol", type=float, default=additivity.CERTIFY_TOL)
    s.set_defaults(func=cmd_certify_add)

    s = sub.add_parser("decompose", help="bi-orthogonal decomposition")
    s.add_argument("channel")
    s.add_argument("--tol", type=float, default=additivity.BIORTH_TOL)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify-sds", help="check strong dynamical additivity for a block triple")
    s.add_argument("phi")
    s.add_argument("lam", metavar="lambda")
    s.add_argument("psi")
    s.add_argument("--blocks", type=generators.BlockSpec.parse, required=True, help='block shape "dL:dR,dL:dR,..."')
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_verify_sds)

    s = sub.add_parser("cmi", help="I(phi; psi | lambda)")
    s.add_argument("phi")
    s.add_argument("lam", metavar="lambda")
    s.add_argument("psi")
    s.set_defaults(func=cmd_cmi)

    s = sub.add_parser("gen", help="write a generated channel file")
    s.add_argument("--kind", choices=GEN_KINDS, required=True)
    s.add_argument("--dim", type=int, default=2)
    s.add_argument("--terms", type=int, default=2)
    s.add_argument("--blocks", type=generators.BlockSpec.parse)
    s.add_argument("--probs", help='Pauli weights, e.g. "1/2,1/4,1/8,1/8"')
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="output file (prefix for sds-triple)")
    s.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ChannelFileError, UsageError) as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
