"""``descryptor`` command line: evolve circuit files, analyse pairs, replay protocols.

Exit codes: 0 success, 2 bad input (parse errors, bad selections, unknown
protocol), 3 analysis precondition not met.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import serialize
from .analysis import (
    EXACT_TOL,
    correlation_attribution,
    correlation_test,
    expectation_tables,
    ppt_separability,
    pure_separability_test,
)
from .circuit_io import load_circuit
from .descriptors import Register, evolve
from .errors import ContractError, DescryptorError, PreconditionError
from .protocols import PROTOCOLS, run_protocol
from .reduction import PURITY_TOL, purity
from .separability import SearchBudget, descriptor_separability_search, pair_density

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION = 0, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    path: Path | None = None
    protocol: str | None = None
    pair: tuple[int, int] | None = None
    purifier: int | None = None
    json: bool = False
    tol: float = EXACT_TOL
    budget: SearchBudget = SearchBudget()

    def check(self, n: int | None = None) -> None:
        if self.tol <= 0:
            raise ContractError("tolerance must be positive")
        if n is None:
            return
        for q in (self.pair or ()) + ((self.purifier,) if self.purifier is not None else ()):
            if not 1 <= q <= n:
                raise ContractError(f"qubit {q} outside register of {n} qubits")


def _fmt(x: float) -> str:
    return f"{x:+.6f}".replace("-0.000000", "+0.000000")


def render_register(r: Register) -> str:
    return "\n".join(f"q{d.qubit} = ({', '.join(d.labels())})" for d in r)


def _table(title: str, rows: list, left: str, right: str) -> list[str]:
    out = [f"{title}  [{left} | {right}]"]
    for i, c in enumerate("xyz"):
        cells = "  ".join(f"{c}{d}: {_fmt(a)} | {_fmt(b)}" for d, (a, b) in zip("xyz", rows[i]))
        out.append("  " + cells)
    return out


def cmd_evolve(cfg: RunConfig) -> tuple[int, str]:
    cfg.check()
    r = evolve(load_circuit(cfg.path))
    if cfg.json:
        return EXIT_OK, serialize.dumps(serialize.register_to_json(r))
    return EXIT_OK, render_register(r)


def analyze(r: Register, cfg: RunConfig) -> dict:
    """Every analysis for the selected pair as a JSON-ready dict."""
    a, b = cfg.pair
    corr = correlation_test(r, a, b, cfg.tol)
    out: dict = {"schema": serialize.SCHEMA, "type": "analysis", "pair": [a, b], "correlation": serialize.correlation_to_json(corr)}
    ppt = ppt_separability(pair_density(*expectation_tables(r, a, b)))
    verdicts = [serialize.verdict_to_json(ppt)]
    if cfg.purifier is None:
        p = purity(r, (a, b))
        if abs(p - 1) > PURITY_TOL:
            raise PreconditionError(f"qubits {a} and {b} are jointly mixed (purity {p:.6g}); pass --purifier")
        verdicts.append(serialize.pure_separability_to_json(pure_separability_test(r, a, b, cfg.tol)))
    else:
        v = descriptor_separability_search(r, a, b, cfg.purifier, cfg.budget)
        verdicts.append(serialize.verdict_to_json(v))
        out["purifier"] = cfg.purifier
        out["attribution"] = serialize.attribution_to_json(correlation_attribution(r, a, b, cfg.purifier, cfg.tol))
    out["separability"] = verdicts
    return out


def render_analysis(rep: dict) -> str:
    a, b = rep["pair"]
    corr = rep["correlation"]
    lines = _table(f"pair ({a}, {b}) <q_a q_b>", corr["table"], "joint", "product of marginals")
    state = "correlated" if corr["correlated"] else "uncorrelated"
    lines.append(f"correlation: {state}" + (f" (witnesses {', '.join(corr['witnesses'])})" if corr["witnesses"] else ""))
    for v in rep["separability"]:
        verdict = {True: "separable", False: "entangled", None: "undecided"}[v["separable"]]
        extra = f", status {v['status']}" if "status" in v and v["method"] == "descriptor-search" else ""
        resid = f", residual {v['residual']:.3g}" if v.get("residual") is not None else ""
        lines.append(f"separability [{v['method']}]: {verdict}{extra}{resid}")
        if "certificate" in v:
            cert = v["certificate"]
            lines.append(f"  certificate: {cert['form']} form, {len(cert['unitaries'])} x {len(cert['primed'])} unitaries")
    if "attribution" in rep:
        att = rep["attribution"]
        lines.append(f"attribution via purifier {att['purifier']}: {att['outcome']}")
        for k, v in att["entries"].items():
            lines.append(f"  {k}: {v}")
    return "\n".join(lines)


def cmd_analyze(cfg: RunConfig) -> tuple[int, str]:
    r = evolve(load_circuit(cfg.path))
    cfg.check(r.n)
    rep = analyze(r, cfg)
    return EXIT_OK, serialize.dumps(rep) if cfg.json else render_analysis(rep)


def render_trace(trace) -> str:
    lines = [f"protocol {trace.name}"]
    for label, r in trace.steps:
        lines.append(f"-- {label}")
        lines.append(render_register(r))
    for bit in trace.bit_channels:
        lines.append(f"BIT q{bit.source} = {bit}")
    for k in sorted(trace.notes):
        lines.append(f"{k}: {trace.notes[k]}")
    return "\n".join(lines)


def cmd_protocol(cfg: RunConfig) -> tuple[int, str]:
    trace = run_protocol(cfg.protocol)
    if cfg.json:
        return EXIT_OK, serialize.dumps(serialize.trace_to_json(trace))
    return EXIT_OK, render_trace(trace)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="descryptor", description="Heisenberg-picture descriptor toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evolve", help="evolve a circuit file and print the descriptors")
    ev.add_argument("file", type=Path)
    ev.add_argument("--json", action="store_true")

    an = sub.add_parser("analyze", help="correlation, separability and attribution for one pair")
    an.add_argument("file", type=Path)
    an.add_argument("--pair", nargs=2, type=int, required=True, metavar=("A", "B"))
    an.add_argument("--purifier", type=int)
    an.add_argument("--json", action="store_true")
    an.add_argument("--tol", type=float, default=EXACT_TOL, help="correlation tolerance")
    an.add_argument("--restarts", type=int, default=SearchBudget.restarts)
    an.add_argument("--max-terms", type=int, default=SearchBudget.max_terms)
    an.add_argument("--seed", type=int, default=0)

    pr = sub.add_parser("protocol", help="replay a canonical construction")
    pr.add_argument("name", help=f"one of: {', '.join(PROTOCOLS)}")
    pr.add_argument("--json", action="store_true")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.command == "evolve":
        return RunConfig("evolve", path=ns.file, json=ns.json)
    if ns.command == "analyze":
        budget = SearchBudget(max_terms=ns.max_terms, restarts=ns.restarts, seed=ns.seed)
        return RunConfig("analyze", path=ns.file, pair=tuple(ns.pair), purifier=ns.purifier, json=ns.json, tol=ns.tol, budget=budget)
    return RunConfig("protocol", protocol=ns.name, json=ns.json)


COMMANDS = {"evolve": cmd_evolve, "analyze": cmd_analyze, "protocol": cmd_protocol}


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Parse ``argv`` and execute; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        cfg = config_from_args(ns)
        code, text = COMMANDS[cfg.command](cfg)
        return code, text, ""
    except PreconditionError as exc:
        return EXIT_PRECONDITION, "", f"precondition: {exc}"
    except DescryptorError as exc:
        return EXIT_INPUT, "", f"error: {exc}"


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(argv)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
