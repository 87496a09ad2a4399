"""Command-line front end: ``rwstreams <command> [input] [-o output] [flags]``.

Exit codes: 0 success, 1 other failure, 2 usage, 3 budget, 4 pass limit,
5 format, 6 decode, 7 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import block_universal, bwt_pipeline, debruijn_gen, entropy_stats, periodicity_grammar, sort_reduction
from .errors import InvalidInputError, RWStreamsError
from .stream_machine import MachineBudget, StreamMachine, default_budget

COMMANDS = ("compress", "decompress", "eo-compress", "eo-decompress", "bwt", "unbwt",
            "entropy", "period", "grammar", "debruijn", "sortnums")


@dataclass
class RunConfig:
    subcommand: str
    input: str | None
    output: str | None
    memory_bits: int | None
    pass_limit: int | None
    streams: int
    block_size: int | None
    k_max: int | None
    sigma: int | None
    k: int | None
    seed: int | None
    repeat_to: int | None = None
    count: bool = False
    report: str | None = None


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def _non_negative(text):
    value = int(text) if text.lstrip("-").isdigit() else None
    if value is None or value < 0:
        raise argparse.ArgumentTypeError(f"must be a non-negative integer: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rwstreams", description="Read/write-streams compression toolkit.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--memory-bits", type=_positive)
    common.add_argument("--pass-limit", type=_positive)
    common.add_argument("--streams", type=_positive, default=2)
    common.add_argument("--report", help="write the usage report here instead of stderr")
    common.add_argument("--seed", type=int)
    common.add_argument("-o", "--output", help="output path (default: stdout)")
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name != "debruijn":
            p.add_argument("input", nargs="?", default="-", help="input path, '-' for stdin")
        if name == "compress":
            p.add_argument("--block-size", type=_positive)
            p.add_argument("--k-max", type=_non_negative)
        if name in ("entropy",):
            p.add_argument("--k", type=_non_negative, default=2, help="largest order reported")
        if name == "debruijn":
            p.add_argument("--sigma", type=_positive, required=True)
            p.add_argument("--k", type=_positive, required=True)
            p.add_argument("--repeat-to", type=_non_negative)
            p.add_argument("--count", action="store_true")
    return parser


def parse_config(argv) -> RunConfig:
    a = build_parser().parse_args(argv)
    return RunConfig(
        subcommand=a.subcommand, input=getattr(a, "input", None), output=a.output,
        memory_bits=a.memory_bits, pass_limit=a.pass_limit, streams=a.streams,
        block_size=getattr(a, "block_size", None), k_max=getattr(a, "k_max", None),
        sigma=getattr(a, "sigma", None), k=getattr(a, "k", None), seed=a.seed,
        repeat_to=getattr(a, "repeat_to", None), count=getattr(a, "count", False), report=a.report,
    )


def _read(path) -> bytes:
    if path in (None, "-"):
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, payload: bytes):
    if path in (None, "-"):
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(payload)


def _machine(cfg: RunConfig, n: int) -> StreamMachine:
    base = default_budget(n, cfg.streams, cfg.pass_limit)
    bits = cfg.memory_bits if cfg.memory_bits is not None else base.memory_bits
    return StreamMachine(MachineBudget(bits, cfg.streams, cfg.pass_limit))


def run(cfg: RunConfig) -> tuple[bytes, StreamMachine | None]:
    cmd = cfg.subcommand
    if cmd == "debruijn":
        if cfg.count:
            return f"{debruijn_gen.count_cycles(cfg.sigma, cfg.k)}\n".encode(), None
        n = cfg.repeat_to if cfg.repeat_to is not None else cfg.sigma ** cfg.k
        s = debruijn_gen.adversarial_string(cfg.sigma, cfg.k, n)
        text = s if isinstance(s, str) else " ".join(map(str, s.tolist()))
        return text.encode(), None

    data = _read(cfg.input)
    m = _machine(cfg, len(data))
    if cmd == "compress":
        c = block_universal.compress(m, data, block_size=cfg.block_size, k_max=cfg.k_max, sigma=256)
        return c.to_bytes(), m
    if cmd == "decompress":
        return block_universal.decompress(data, m, kind="bytes"), m
    if cmd == "eo-compress":
        buf = bwt_pipeline.entropy_only_compress(m, data)
        return bwt_pipeline.pack_entropy_only(buf, len(data), 256), m
    if cmd == "eo-decompress":
        buf, n, sigma = bwt_pipeline.unpack_entropy_only(data)
        return bwt_pipeline.entropy_only_decompress(m, buf, n, sigma, kind="bytes"), m
    if cmd == "bwt":
        return bwt_pipeline.pack_bwt(bwt_pipeline.bwt_forward(m, data)), m
    if cmd == "unbwt":
        return bwt_pipeline.bwt_inverse(m, bwt_pipeline.unpack_bwt(data)), m
    if cmd == "entropy":
        report = entropy_stats.entropy_report(data, orders=tuple(range(cfg.k + 1)))
        return (json.dumps(report.to_dict(), indent=2) + "\n").encode(), None
    if cmd == "period":
        return f"{periodicity_grammar.min_period_streams(m, data)}\n".encode(), m
    if cmd == "grammar":
        text = data.decode("latin-1")
        ell = periodicity_grammar.min_period_streams(m, text)
        g = periodicity_grammar.build_periodic_grammar(text, ell)
        return g.to_text().encode("utf-8"), m
    if cmd == "sortnums":
        try:
            values = [int(x) for x in data.split()]
        except ValueError as exc:
            raise InvalidInputError(f"sortnums expects integers: {exc}") from None
        out = sort_reduction.sort_numbers(m, values)
        return ("\n".join(map(str, out)) + ("\n" if out else "")).encode(), m
    raise AssertionError(cmd)


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:   # argparse: usage errors exit 2, --help exits 0
        return int(exc.code or 0)
    try:
        payload, machine = run(cfg)
    except RWStreamsError as exc:
        print(f"rwstreams {cfg.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"rwstreams {cfg.subcommand}: {exc}", file=sys.stderr)
        return 1
    _write(cfg.output, payload)
    if machine is not None:
        doc = machine.report().to_json()
        if cfg.report:
            with open(cfg.report, "w") as fh:
                fh.write(doc + "\n")
        else:
            print(doc, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
