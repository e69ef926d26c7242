"""Command-line front end.

Exit codes: 0 success, 1 a checked claim failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import channels, codes, verify
from .su2 import multiplicities
from .tensor import (
    fidelity,
    matrix_from_json,
    matrix_to_json,
    projector,
    state_from_json,
    validate_density,
    von_neumann_entropy,
)

CODES = {"ns3": "NS3", "dfs4": "DFS4", "ns5": "NS5"}
FIDELITY_GATE = 1 - 1e-9


class UsageError(Exception):
    pass


# --- state specs ------------------------------------------------------------------

_SINGLE = {
    "0": np.array([1, 0], dtype=np.complex128),
    "1": np.array([0, 1], dtype=np.complex128),
    "+": np.array([1, 1], dtype=np.complex128) / math.sqrt(2),
    "-": np.array([1, -1], dtype=np.complex128) / math.sqrt(2),
}


def parse_state(spec: str, qubits: int) -> np.ndarray:
    """Density matrix from an inline spec or a JSON file.

    Inline specs: a string over ``0 1 + -`` with one symbol per qubit, or
    ``mixed`` for the maximally mixed state.  Files hold either the state
    schema (``dim``/``amplitudes``) or the matrix schema (``rows``/``cols``/``data``).
    """
    dim = 2**qubits
    if spec == "mixed":
        return np.eye(dim, dtype=np.complex128) / dim
    if spec and all(c in _SINGLE for c in spec):
        if len(spec) != qubits:
            raise UsageError(f"state {spec!r} has {len(spec)} qubits, expected {qubits}")
        vec = np.ones(1, dtype=np.complex128)
        for c in spec:
            vec = np.kron(vec, _SINGLE[c])
        return projector(vec)
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"state spec {spec!r} is neither inline nor an existing file")
    try:
        obj = json.loads(path.read_text())
        if "amplitudes" in obj:
            vec = state_from_json(obj)
            vec = vec / np.linalg.norm(vec)
            rho = projector(vec)
        else:
            rho = matrix_from_json(obj)
        if rho.shape != (dim, dim):
            raise UsageError(f"{spec}: expected a {qubits}-qubit state, got shape {rho.shape}")
        return validate_density(rho)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"{spec}: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(outputs: dict[str | None, str]) -> None:
    """Write every prepared output; ``None`` means stdout.  Nothing is written before all are ready."""
    for target, text in outputs.items():
        if target is None:
            sys.stdout.write(text)
        else:
            Path(target).write_text(text)


# --- commands -------------------------------------------------------------------------


def cmd_decompose(args) -> int:
    if args.n is None:
        raise UsageError("decompose needs --n")
    try:
        dec = multiplicities(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        text = _dump({"n": dec.n, "blocks": [
            {"j": b.j, "r": b.multiplicity, "dim": b.dim} for b in dec.blocks]})
    elif args.format == "text":
        text = " ⊕ ".join(f"(I_{b.multiplicity} ⊗ {b.dim})" for b in dec.blocks) + "\n"
    else:
        text = dec.to_csv()
    _emit({args.out: text})
    return 0


def _code(args) -> codes.CodeSpec:
    if args.code not in CODES:
        raise UsageError(f"--code must be one of {sorted(CODES)}")
    if args.variant not in codes.VARIANTS:
        raise UsageError(f"--variant must be one of {codes.VARIANTS}")
    return codes.get_code(CODES[args.code], args.variant)


def cmd_encode(args) -> int:
    code = _code(args)
    n_data, n_gauge = len(code.data_wires), len(code.gauge_wires)
    data = parse_state(args.data or "0" * n_data, n_data)
    if n_gauge == 0 and args.gauge is not None:
        raise UsageError(f"{code.family} has no gauge wire; all its ancillas must be |0>")
    gauge = parse_state(args.gauge, n_gauge) if args.gauge is not None and n_gauge else None
    ancilla = parse_state(args.ancilla, len(code.zero_wires)) if args.ancilla else None
    try:
        rho = codes.encode(code, gauge, data, ancilla=ancilla)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    outputs = {args.out: _dump(matrix_to_json(rho))}
    if args.export_encoder:
        outputs[args.export_encoder] = _dump(matrix_to_json(code.encoder))
    if args.export_gatelist:
        outputs[args.export_gatelist] = _dump(codes.build_gatelist(code.family).to_json())
    if args.export_basis:
        outputs[args.export_basis] = _dump(codes.logical_basis_json(code))
    _emit(outputs)
    return 0


def _load_channel(path: str | None, n: int) -> channels.MixedUnitaryChannel:
    if path is None:
        return channels.identity_channel(n)
    try:
        ch = channels.channel_from_json(json.loads(Path(path).read_text()))
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if ch.n != n:
        raise UsageError(f"channel acts on {ch.n} qubits but the code uses {n}")
    return ch


def cmd_simulate(args) -> int:
    code = _code(args)
    ch = _load_channel(args.channel, code.n)
    n_data, n_gauge = len(code.data_wires), len(code.gauge_wires)
    data_spec = args.data or "random"
    gauge_spec = args.gauge if args.gauge is not None else ("random" if n_gauge else None)
    if n_gauge == 0 and gauge_spec is not None:
        raise UsageError(f"{code.family} has no gauge wire")
    fixed_data = None if data_spec == "random" else parse_state(data_spec, n_data)
    fixed_gauge = None if gauge_spec in (None, "random") else parse_state(gauge_spec, n_gauge)
    if args.trials < 1:
        raise UsageError("--trials must be positive")

    records = []
    for t in range(args.trials):
        rng = verify.trial_rng(args.seed, t)
        data = fixed_data if fixed_data is not None else verify.random_density(rng, 2**n_data)
        gauge = None
        if n_gauge:
            gauge = fixed_gauge if fixed_gauge is not None else verify.random_density(rng, 2**n_gauge)
        out = codes.decode(code, channels.apply(ch, codes.encode(code, gauge, data)))
        gauge_norm = out.gauge / np.trace(out.gauge).real
        records.append({
            "trial": t,
            "fidelity": fidelity(out.data, data),
            "product_residual": out.product_residual,
            "gauge_entropy": von_neumann_entropy(gauge_norm),
        })
    min_f = min(r["fidelity"] for r in records)
    passed = min_f > FIDELITY_GATE
    report = {
        "code": code.family,
        "seed": args.seed,
        "trials": args.trials,
        "channel_terms": len(ch.terms),
        "subnormalized": ch.subnormalized,
        "min_fidelity": min_f,
        "max_product_residual": max(r["product_residual"] for r in records),
        "pass": passed,
        "details": records,
    }
    summary = f"{'PASS' if passed else 'FAIL'} simulate {code.family}: trials={args.trials} min_fidelity={min_f:.12f}\n"
    if args.out is None:
        _emit({None: _dump(report)})
        sys.stderr.write(summary)
    else:
        _emit({args.out: _dump(report), None: summary})
    return 0 if passed else 1


def cmd_verify(args) -> int:
    if args.suite is None:
        raise UsageError("verify needs --suite")
    if args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {sorted(verify.SUITES)}")
    report = verify.run_suite(args.suite, trials=args.trials, seed=args.seed)
    if args.suite == "rate" and args.format == "csv":
        rows = ["n,m,dim_count,k,k_exceeds_m"] + [
            f"{d['n']},{d['m']},{d['dim_count']},{d['k']},{int(d['k_exceeds_m'])}"
            for d in report.details if "m" in d
        ]
        body = "\n".join(rows) + "\n"
    else:
        body = report.dumps() + "\n"
    if args.out is None:
        _emit({None: body})
        sys.stderr.write(report.summary() + "\n")
    else:
        _emit({args.out: body, None: report.summary() + "\n"})
    return 0 if report.passed else 1


def cmd_export(args) -> int:
    code = _code(args)
    if args.what == "encoder":
        text = _dump(matrix_to_json(code.encoder))
    elif args.what == "gatelist":
        gl = codes.build_gatelist(code.family)
        text = gl.to_text() if args.format == "text" else _dump(gl.to_json())
    else:
        text = _dump(codes.logical_basis_json(code))
    _emit({args.out: text})
    return 0


# --- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collective-qec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json",)):
        p.add_argument("--config", help="JSON file of option values; unknown keys are errors")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=formats, default=formats[0])

    def code_opts(p):
        p.add_argument("--code", choices=sorted(CODES))
        p.add_argument("--variant", choices=codes.VARIANTS, default="redefined",
                       help="3-qubit basis set used by the encoder")

    p = sub.add_parser("decompose", help="irrep multiplicities of n qubits")
    p.add_argument("--n", type=int)
    common(p, ("csv", "json", "text"))
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("encode", help="encode a data state")
    code_opts(p)
    p.add_argument("--data", help="data state: inline (e.g. 0, +, 01, mixed) or JSON file")
    p.add_argument("--gauge", help="gauge state for ns3/ns5 (default |0>)")
    p.add_argument("--ancilla", help="explicit zero-ancilla state; must be all |0>")
    p.add_argument("--export-encoder", dest="export_encoder")
    p.add_argument("--export-gatelist", dest="export_gatelist")
    p.add_argument("--export-basis", dest="export_basis")
    common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("simulate", help="encode, apply a channel, decode")
    code_opts(p)
    p.add_argument("--channel", help="channel JSON file (default identity)")
    p.add_argument("--data", help="data state spec or 'random' (default)")
    p.add_argument("--gauge", help="gauge state spec or 'random' (default for ns3/ns5)")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite")
    common(p, ("json", "csv"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="export an encoder, gate list or logical basis")
    code_opts(p)
    p.add_argument("--what", choices=("encoder", "gatelist", "basis"), default="encoder")
    common(p, ("json", "text"))
    p.set_defaults(func=cmd_export)

    parser._subparser_map = sub.choices  # type: ignore[attr-defined]
    return parser


def _apply_config(parser, args, argv):
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"config {args.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    if cfg.pop("command", args.command) != args.command:
        raise UsageError("config 'command' does not match the invoked command")
    sub = parser._subparser_map[args.command]
    allowed = {a.dest for a in sub._actions} - {"help", "config"}
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise UsageError(f"unknown config fields {unknown}")
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config:
            args = _apply_config(parser, args, argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
