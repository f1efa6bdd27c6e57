"""Command-line harness: verify, simulate, encode, decode, bounds.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
error.  A ``--config`` file supplies key=value defaults (keys named like
the long flags, with underscores); explicit flags override it.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import channel, oracle, wire
from .desco import (CombinedCodec, DeScoCodec, DeScoParams, burst_loss_count,
                    descriptor, ia_sco_build, optimal_delay, parse_descriptor,
                    rate_upper_bound, sweep_max_delay)
from .sco import capacity

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def _read_config(path: str) -> Dict[str, str]:
    cfg: Dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#")[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            cfg[k.strip().replace("-", "_")] = v.strip()
    return cfg


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="streamfec")
    p.add_argument("--config", help="key=value defaults file")
    sub = p.add_subparsers(dest="command")

    def add_codec_flags(sp):
        sp.add_argument("--b1", type=int)
        sp.add_argument("--t1", type=int)
        sp.add_argument("--alpha-num", type=int, dest="alpha_num")
        sp.add_argument("--alpha-den", type=int, dest="alpha_den", default=1)

    sp = sub.add_parser("verify", help="exhaustive burst-start delay sweep")
    add_codec_flags(sp)
    sp.add_argument("--window", type=int)

    sp = sub.add_parser("simulate", help="segmented-burst loss experiment")
    add_codec_flags(sp)
    sp.add_argument("--bmax-list", dest="bmax_list")
    sp.add_argument("--segment-len", type=int, dest="segment_len", default=2000)
    sp.add_argument("--segments", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--schemes", default="desco,ia,rlc")
    sp.add_argument("--users", default="1,2")
    sp.add_argument("--out", default="-")

    sp = sub.add_parser("encode", help="encode a packed source stream")
    sp.add_argument("--descriptor", required=False)
    sp.add_argument("--in", dest="infile")
    sp.add_argument("--out")

    sp = sub.add_parser("decode", help="decode a packed channel stream")
    sp.add_argument("--descriptor", required=False)
    sp.add_argument("--in", dest="infile")
    sp.add_argument("--pattern")
    sp.add_argument("--user", type=int, default=2)
    sp.add_argument("--out")
    sp.add_argument("--log")

    sp = sub.add_parser("bounds", help="rate bound and delay formulas")
    sp.add_argument("--b1", type=int)
    sp.add_argument("--t1", type=int)
    sp.add_argument("--b2", type=int)
    sp.add_argument("--t2", type=int)
    p.subcommands = dict(sub.choices)
    return p


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): "
                         + ", ".join("--" + n.replace("_", "-") for n in missing))


def _codec_from_args(args) -> DeScoCodec:
    _require(args, "b1", "t1", "alpha_num")
    return DeScoCodec(DeScoParams(args.b1, args.t1, args.alpha_num,
                                  args.alpha_den or 1))


def cmd_verify(args, out) -> int:
    codec = _codec_from_args(args)
    p = codec.params
    window = args.window or 10 * (p.t1 + p.b1)
    u1, m1 = sweep_max_delay(codec, p.b1, 1, window)
    u2, m2 = sweep_max_delay(codec, p.b2, 2, window)
    ok = (u1 == p.t1 and u2 == p.user2_deadline and m1 == 0 and m2 == 0)
    verdict = "PASS" if ok else "FAIL"
    print(f"codec (b1={p.b1}, t1={p.t1}, alpha={p.a}/{p.b}) "
          f"rate {p.rate}", file=out)
    print(f"user-1 max delay {u1} (target {p.t1}), misses {m1}", file=out)
    print(f"user-2 max delay {u2} (target {p.user2_deadline}), misses {m2}",
          file=out)
    print(verdict, file=out)
    return EXIT_OK if ok else EXIT_VERIFY


def simulate_records(args) -> List[Dict[str, object]]:
    _require(args, "b1", "t1", "alpha_num", "bmax_list")
    params = DeScoParams(args.b1, args.t1, args.alpha_num, args.alpha_den or 1)
    try:
        bmax_list = [int(x) for x in str(args.bmax_list).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --bmax-list: {args.bmax_list}") from exc
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    users = [int(u) for u in str(args.users).split(",") if str(u).strip()]
    for s in schemes:
        if s not in ("desco", "ia", "rlc"):
            raise UsageError(f"unknown scheme {s!r}")
    for u in users:
        if u not in (1, 2):
            raise UsageError(f"unknown user {u}")
    if any(b >= args.segment_len for b in bmax_list):
        raise UsageError("bmax values must be smaller than segment-len")
    if args.segments < 1:
        raise UsageError("segments must be >= 1")

    codecs: Dict[str, CombinedCodec] = {}
    if "desco" in schemes:
        codecs["desco"] = DeScoCodec(params)
    if "ia" in schemes:
        if params.b != 1:
            raise UsageError("ia scheme requires an integer alpha")
        codecs["ia"] = ia_sco_build(params.b1, params.t1, params.a)
    rate = params.rate
    rlc_deadlines = {1: params.t1, 2: params.user2_deadline}

    loss_cache: Dict[tuple, int] = {}

    def losses_for(scheme: str, user: int, length: int) -> int:
        key = (scheme, user, length)
        if key not in loss_cache:
            if scheme == "rlc":
                loss_cache[key] = oracle.rlc_burst_losses(
                    rate, length, rlc_deadlines[user])
            else:
                loss_cache[key] = burst_loss_count(codecs[scheme], length, user)
        return loss_cache[key]

    records: List[Dict[str, object]] = []
    for b_max in bmax_list:
        # burst lengths per segment are scheme-independent for fairness
        counts = [0] * (b_max + 1)
        for seg in range(args.segments):
            _, length = channel.draw_segment_burst(args.seed, seg,
                                                   args.segment_len, b_max)
            counts[length] += 1
        total = args.segments * args.segment_len
        for scheme in schemes:
            for user in users:
                lost = sum(counts[length] * losses_for(scheme, user, length)
                           for length in range(b_max + 1))
                records.append({
                    "b_max": b_max, "scheme": scheme, "user": user,
                    "loss_probability": lost / total,
                    "symbols_total": total, "symbols_lost": lost,
                    "seed": args.seed,
                })
    return records


def write_csv(records: Sequence[Dict[str, object]], out) -> None:
    fields = ["b_max", "scheme", "user", "loss_probability",
              "symbols_total", "symbols_lost", "seed"]
    writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        rec = dict(rec)
        rec["loss_probability"] = repr(float(rec["loss_probability"]))
        writer.writerow(rec)


def cmd_simulate(args, out) -> int:
    records = simulate_records(args)
    if args.out == "-":
        write_csv(records, out)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(records, fh)
    return EXIT_OK


def _load_codec(args) -> DeScoCodec:
    _require(args, "descriptor")
    with open(args.descriptor) as fh:
        return parse_descriptor(fh.read())


def cmd_encode(args, out) -> int:
    codec = _load_codec(args)
    _require(args, "infile", "out")
    with open(args.infile, "rb") as fh:
        data = fh.read()
    source = wire.unpack_stream(data, codec.field, codec.subs_per_slot)
    stream = codec.encode_stream(source)
    with open(args.out, "wb") as fh:
        fh.write(wire.pack_stream(stream, codec.field))
    print(f"encoded {len(stream)} slots", file=out)
    return EXIT_OK


def cmd_decode(args, out) -> int:
    codec = _load_codec(args)
    _require(args, "infile", "out")
    with open(args.infile, "rb") as fh:
        stream = wire.unpack_stream(fh.read(), codec.field, codec.symbol_width)
    if args.pattern:
        with open(args.pattern) as fh:
            pattern = channel.parse_pattern(fh.read(), len(stream))
        rx = channel.apply(pattern, stream)
    else:
        rx = list(stream)
    recovered, log = codec.decode(rx, args.user)
    packed = [[0 if v is None else v for v in slot] for slot in recovered]
    with open(args.out, "wb") as fh:
        fh.write(wire.pack_stream(packed, codec.field))
    if args.log:
        with open(args.log, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["slot", "recovery_slot", "delay", "miss"])
            misses = set(log.misses)
            for slot in range(log.horizon):
                t = log.slot_time(slot)
                w.writerow([slot,
                            "" if t is None else t,
                            "" if t is None else t - slot,
                            int(slot in misses)])
    print(f"decoded {log.horizon} slots, {len(log.misses)} misses", file=out)
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    _require(args, "b1", "t1", "b2", "t2")
    b1, t1, b2, t2 = args.b1, args.t1, args.b2, args.t2
    if b2 % b1 or b2 <= b1:
        raise UsageError("need b2 = alpha*b1 with alpha > 1")
    alpha = Fraction(b2, b1)
    t2_star = optimal_delay(b1, t1, alpha)
    bound = rate_upper_bound(b1, b2, t2, t1)
    target = Fraction(t1, t1 + b1)
    feasible = t2 >= t2_star
    print(f"rate_upper_bound(b1={b1}, b2={b2}, t2={t2}) = {bound}", file=out)
    print(f"optimal weak-receiver delay = {t2_star}", file=out)
    print(f"capacity(b1={b1}, t1={t1}) = {capacity(b1, t1)}", file=out)
    print(f"capacity(b2={b2}, t2={t2}) = {capacity(b2, t2)}", file=out)
    print(f"rate {target} at t2={t2}: "
          f"{'feasible' if feasible else 'infeasible'}", file=out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        # pre-scan for --config so its values become defaults
        if "--config" in argv:
            cfg_path = argv[argv.index("--config") + 1]
            cfg = _read_config(cfg_path)
            parser.set_defaults(**cfg)
            for sp in parser.subcommands.values():
                sp.set_defaults(**cfg)  # subparser defaults win otherwise
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_USAGE if exc.code else EXIT_OK
        # config values arrive as strings; coerce the numeric ones
        for name in ("b1", "t1", "alpha_num", "alpha_den", "window", "b2",
                     "t2", "segment_len", "segments", "seed", "user"):
            v = getattr(args, name, None)
            if isinstance(v, str):
                setattr(args, name, int(v))
        if not args.command:
            parser.print_usage(out)
            return EXIT_USAGE
        handler = {
            "verify": cmd_verify,
            "simulate": cmd_simulate,
            "encode": cmd_encode,
            "decode": cmd_decode,
            "bounds": cmd_bounds,
        }[args.command]
        return handler(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
