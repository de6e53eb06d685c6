"""
Command-line entry point.

    python -m src.prooftheory.cli check FILE
    python -m src.prooftheory.cli ord FILE
    python -m src.prooftheory.cli embed FILE [-o OUT]
    python -m src.prooftheory.cli step FILE [-o OUT] [--trace PATH]
    python -m src.prooftheory.cli run FILE [--fuel N] [--trace PATH] [--emit-lk PATH]
    python -m src.prooftheory.cli cmp TERM TERM

The exit status is 0 on success and the error family's exit_code otherwise.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

from src.prooftheory.calculus import assign_ordinals, check_lk, check_proof, check_sbl
from src.prooftheory.config import DEFAULT_CONFIG, EngineConfig
from src.prooftheory.embedding_bridge import embed_sbl, extract_lk
from src.prooftheory.errors import ProofToolError
from src.prooftheory.ordinal_notation import compare
from src.prooftheory.proof_codec import format_proof, format_stacks, parse_proof
from src.prooftheory.proof_tree import LK, SBL, Preproof
from src.prooftheory.reduction_engine import format_trace, normalize, reduce_step
from src.prooftheory.sexpr_codec import parse_ordinal

_logger = logging.getLogger(__name__)

COMMANDS = ("check", "ord", "embed", "step", "run", "cmp")
EXIT_USAGE = 1
# normalize stopped with bar sequents left
EXIT_FUEL = 9


@dataclass
class RunConfig:
    command: str
    inputs: List[str] = field(default_factory=list)
    fuel: int = DEFAULT_CONFIG.fuel
    trace_path: Optional[str] = None
    emit_lk: Optional[str] = None
    output: Optional[str] = None
    quiet: bool = False
    verbose: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.fuel < 0:
            raise ValueError(f"--fuel must be non-negative, got {self.fuel}")
        wanted = 2 if self.command == "cmp" else 1
        if len(self.inputs) != wanted:
            raise ValueError(f"{self.command} expects {wanted} argument(s), got {len(self.inputs)}")

    @property
    def engine(self) -> EngineConfig:
        return EngineConfig(fuel=self.fuel)


def _read_proof(path: str) -> Preproof:
    return parse_proof(Path(path).read_text(encoding="utf-8"))


def _write(path: str, text: str):
    Path(path).write_text(text, encoding="utf-8")


def _emit(config: RunConfig, text: str):
    """Human-readable output; silenced by --quiet."""
    if not config.quiet:
        print(text)


def _as_sblp(proof: Preproof, config: RunConfig) -> Preproof:
    if proof.system == SBL:
        proof, _ = embed_sbl(proof, config.engine)
    return proof


def _check(config: RunConfig) -> int:
    proof = _read_proof(config.inputs[0])
    if proof.system == SBL:
        report = check_sbl(proof)
    elif proof.system == LK:
        report = check_lk(proof)
    else:
        report = check_proof(proof)
    for d in report.diagnostics:
        print(str(d), file=sys.stderr)
    report.raise_for_errors()
    _emit(config, f"ok {proof.system}")
    return 0


def _ord(config: RunConfig) -> int:
    proof = _as_sblp(_read_proof(config.inputs[0]), config)
    ann = assign_ordinals(proof)
    _emit(config, ann.dump())
    print(f"o = {ann.proof_ordinal}")
    return 0


def _embed(config: RunConfig) -> int:
    p0, sck = embed_sbl(_read_proof(config.inputs[0]), config.engine)
    text = format_proof(p0)
    if config.output:
        _write(config.output, text)
    else:
        print(text, end="")
    _emit(config, format_stacks(sck).rstrip("\n"))
    return 0


def _step(config: RunConfig) -> int:
    proof = _as_sblp(_read_proof(config.inputs[0]), config)
    result, _, step = reduce_step(proof, config=config.engine)
    if config.output:
        _write(config.output, format_proof(result))
    else:
        _emit(config, format_proof(result).rstrip("\n"))
    if config.trace_path:
        _write(config.trace_path, format_trace([step]))
    print(step.to_sexpr())
    return 0


def _run(config: RunConfig) -> int:
    proof = _as_sblp(_read_proof(config.inputs[0]), config)
    outcome = normalize(proof, fuel=config.fuel, config=config.engine)
    if config.trace_path:
        _write(config.trace_path, format_trace(outcome.trace))
    for step in outcome.trace:
        _emit(config, f"{step.case}\t{step.o_before}\t->\t{step.o_after}")
    if not outcome.cut_free:
        print(f"fuel exhausted after {outcome.steps} steps")
        return EXIT_FUEL
    print(f"cut-free after {outcome.steps} steps")
    lk = extract_lk(outcome.proof)
    if config.emit_lk:
        _write(config.emit_lk, format_proof(lk))
    return 0


def _cmp(config: RunConfig) -> int:
    a, b = (parse_ordinal(t) for t in config.inputs)
    print(compare(a, b).name)
    return 0


_HANDLERS = {"check": _check, "ord": _ord, "embed": _embed, "step": _step, "run": _run, "cmp": _cmp}


def run(config: RunConfig) -> int:
    """Execute one command; ProofToolError families become their exit codes."""
    try:
        return _HANDLERS[config.command](config)
    except ProofToolError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ValueError so they map to EXIT_USAGE, not argparse's 2."""

    def error(self, message: str):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="prooftool", description="Proof normalization toolkit.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("inputs", nargs="+", help="proof file, or two ordinal terms for cmp")
    parser.add_argument("--fuel", type=int, default=DEFAULT_CONFIG.fuel, help="maximum reduction steps")
    parser.add_argument("--trace", dest="trace_path", help="write the step trace here")
    parser.add_argument("--emit-lk", dest="emit_lk", help="write the extracted LK derivation here")
    parser.add_argument("-o", "--output", help="write the resulting proof here")
    parser.add_argument("--quiet", action="store_true", help="only machine-readable result lines")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    return RunConfig(args.command, list(args.inputs), args.fuel, args.trace_path, args.emit_lk,
                     args.output, args.quiet, args.verbose)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except ValueError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    level = logging.DEBUG if config.verbose else logging.WARNING if config.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
