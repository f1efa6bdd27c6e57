"""Two-user diversity-embedded streaming codec.

A base streaming code C1 serves the strong receiver (burst b1, delay t1).
A second code C2 of the same rate family runs along reversed diagonals;
its parity stream is delayed by t1 + b1 slots and added onto C1's, so
the combined stream has exactly the width of a single-user stream.  The
strong receiver decodes as if C2 were absent, while a weak receiver
tolerating bursts up to b2 = alpha*b1 decodes with the minimum possible
delay ceil(alpha*t1) + b1.

Rational ratios alpha = a/b are handled by running the construction on a
pseudo-expanded clock with n expanded slots per stream slot, n chosen as
the smallest integer making n*alpha*t1 an integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bebc import BurstParityMatrix
from .decoder import Component, StreamLog, TraceEvent, staged_decode
from .gf import GF, default_field
from .sco import MAIN, OFF, ScoCodec, ScoParams, Var


def optimal_delay(b: int, t: int, alpha: Fraction) -> int:
    """Minimum weak-receiver delay: alpha*t + b, rounded up if fractional."""
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    if (alpha * b).denominator != 1:
        raise ValueError("alpha * b must be an integer")
    return math.ceil(alpha * t + b)


def rate_upper_bound(b1: int, b2: int, t2: int, t1: Optional[int] = None) -> Fraction:
    """Largest rate any code with these burst/delay targets can achieve.

    High-delay regime (t2 >= t1 + b1, the default when t1 is omitted):
    1 - b2 / (b2 - b1 + t2).  If t1 is supplied and t2 < t1 + b1, the
    low-delay bound t1 / (t1 + b2) applies instead.
    """
    if b2 <= b1:
        raise ValueError("need b2 = alpha * b1 with alpha > 1")
    if t1 is not None and t2 < t1 + b1:
        return Fraction(t1, t1 + b2)
    return 1 - Fraction(b2, b2 - b1 + t2)


@dataclass(frozen=True)
class DeScoParams:
    """Two-user code parameters with ratio alpha = a/b (coprime, a > b >= 1)."""

    b1: int
    t1: int
    a: int
    b: int = 1

    def __post_init__(self):
        if not 1 <= self.b < self.a:
            raise ValueError("need a > b >= 1")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError("a and b must be coprime")
        if not 1 <= self.b1 <= self.t1:
            raise ValueError("need 1 <= b1 <= t1")
        if self.b1 % self.b:
            raise ValueError("b1 must be divisible by b")

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.a, self.b)

    @property
    def b2(self) -> int:
        return self.a * self.b1 // self.b

    @property
    def expansion(self) -> int:
        """Expanded slots per stream slot (1 when b divides t1)."""
        return self.b // math.gcd(self.b, self.t1)

    @property
    def delta(self) -> int:
        """Parity-stream shift in expanded slots."""
        return self.expansion * (self.t1 + self.b1)

    @property
    def t2_star(self) -> Fraction:
        return self.alpha * self.t1 + self.b1

    @property
    def user2_deadline(self) -> int:
        return math.ceil(self.t2_star)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.t1, self.t1 + self.b1)


def source_expand(b1: int, t1: int, a: int, b: int) -> Tuple[DeScoParams, int]:
    """Pseudo-expansion: parameters on the n-times-faster clock, and n."""
    p = DeScoParams(b1, t1, a, b)
    n = p.expansion
    return DeScoParams(n * b1, n * t1, a, b), n


class CombinedCodec:
    """Shared machinery for parity-combined two-component codecs.

    Works on an expanded clock with ``expansion`` expanded slots per
    stream slot.  A channel symbol per stream slot is the concatenation
    of its expanded slots, each carrying ``t0`` source sub-symbols and
    ``b0`` combined parities.
    """

    def __init__(self, c1: ScoCodec, c2: ScoCodec, shift: int,
                 expansion: int, user1_deadline: int, user2_deadline: int):
        if c1.field != c2.field or c1.t != c2.t or c1.b != c2.b:
            raise ValueError("component codecs must share field and base size")
        self.c1 = c1
        self.c2 = c2
        self.shift = shift
        self.expansion = expansion
        self.field = c1.field
        self.t0 = c1.t
        self.b0 = c1.b
        self.user1_deadline = user1_deadline
        self.user2_deadline = user2_deadline
        self.components = [Component(c1, 0), Component(c2, shift)]

    @property
    def subs_per_slot(self) -> int:
        return self.expansion * self.t0

    @property
    def parities_per_slot(self) -> int:
        return self.expansion * self.b0

    @property
    def symbol_width(self) -> int:
        return self.subs_per_slot + self.parities_per_slot

    # -- encoding -------------------------------------------------------

    def q_value(self, tau: int, j: int, expanded_source: Sequence[Sequence[int]]) -> int:
        v1 = self.c1.parity_value(tau, j, expanded_source)
        base = tau - self.shift
        if base < 0:
            return v1
        v2 = self.c2.parity_value(base, j, expanded_source)
        return self.field.add(v1, v2)

    def encode_stream(self, source: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
        """Encode stream-slot source symbols (subs_per_slot values each)."""
        n, t0, b0 = self.expansion, self.t0, self.b0
        expanded: List[List[int]] = []
        for s in source:
            if len(s) != n * t0:
                raise ValueError(f"expected {n * t0} sub-symbols per slot")
            for r in range(n):
                expanded.append(list(s[r * t0:(r + 1) * t0]))
        out: List[Tuple[int, ...]] = []
        for i in range(len(source)):
            sym: List[int] = []
            for r in range(n):
                tau = i * n + r
                sym.extend(expanded[tau])
                sym.extend(self.q_value(tau, j, expanded) for j in range(b0))
            out.append(tuple(sym))
        return out

    def encode_step(self, history: Sequence[Sequence[int]],
                    s_now: Sequence[int]) -> Tuple[int, ...]:
        return self.encode_stream(list(history) + [list(s_now)])[-1]

    # -- decoding -------------------------------------------------------

    def _decode_raw(self, received: Sequence[Optional[Sequence[int]]]):
        n, t0, b0 = self.expansion, self.t0, self.b0
        expanded: List[Optional[Tuple[int, ...]]] = []
        for sym in received:
            if sym is None:
                expanded.extend([None] * n)
                continue
            if len(sym) != self.symbol_width:
                raise ValueError(f"expected {self.symbol_width} symbols per slot")
            for r in range(n):
                chunk = sym[r * (t0 + b0):(r + 1) * (t0 + b0)]
                expanded.append(tuple(chunk))
        return staged_decode(self.components, self.field, t0, b0, expanded)

    def decode(self, received: Sequence[Optional[Sequence[int]]], user: int):
        """Decode for user 1 or 2; differs only in the miss deadline.

        Returns (stream, log) on the stream clock: stream[i] lists the
        subs_per_slot recovered sub-symbols (None where unrecovered), and
        the log's times are expressed in stream slots.
        """
        if user not in (1, 2):
            raise ValueError("user must be 1 or 2")
        values, times, trace = self._decode_raw(received)
        n, t0 = self.expansion, self.t0
        horizon = len(received)
        stream = [[values.get((i * n + r, k))
                   for r in range(n) for k in range(t0)]
                  for i in range(horizon)]
        sub_times: Dict[Var, Optional[int]] = {}
        for (tau, k), tm in times.items():
            var = (tau // n, (tau % n) * t0 + k)
            sub_times[var] = None if tm is None else tm // n
        deadline = self.user1_deadline if user == 1 else self.user2_deadline
        log = StreamLog(horizon=horizon, n_subs=n * t0, deadline=deadline,
                        sub_times=sub_times, trace=trace)
        return stream, log

    def decode_user1(self, received):
        return self.decode(received, 1)

    def decode_user2(self, received):
        return self.decode(received, 2)


class DeScoCodec(CombinedCodec):
    """Diversity-embedded codec: reversed-diagonal C2, parity shift t1+b1."""

    def __init__(self, params: DeScoParams, field: Optional[GF] = None,
                 h: Optional[BurstParityMatrix] = None):
        self.params = params
        n = params.expansion
        eb1, et1 = n * params.b1, n * params.t1
        b0, t0 = eb1 // params.b, et1 // params.b
        if field is None:
            field = default_field(t0, b0)
        c1 = ScoCodec(ScoParams(b0, t0, step=params.b, orientation=MAIN,
                                field=field), h)
        c2 = ScoCodec(ScoParams(b0, t0, step=params.a - params.b,
                                orientation=OFF, field=field), h or c1.h)
        super().__init__(c1, c2, shift=params.delta, expansion=n,
                         user1_deadline=params.t1,
                         user2_deadline=params.user2_deadline)


def desco_build(params: DeScoParams, field: Optional[GF] = None) -> DeScoCodec:
    return DeScoCodec(params, field)


def ia_sco_build(b1: int, t1: int, alpha: int,
                 field: Optional[GF] = None) -> CombinedCodec:
    """Interference-avoidance baseline: forward-diagonal C2, parity shift t1.

    The embedded code is the (alpha*b1, alpha*t1) interleaved code; the
    weak receiver's delay is alpha*t1 + t1, worse than the embedded
    construction's alpha*t1 + b1 whenever b1 < t1.
    """
    if alpha < 2 or int(alpha) != alpha:
        raise ValueError("alpha must be an integer >= 2")
    if field is None:
        field = default_field(t1, b1)
    c1 = ScoCodec(ScoParams(b1, t1, field=field))
    c2 = ScoCodec(ScoParams(b1, t1, step=alpha, field=field), c1.h)
    return CombinedCodec(c1, c2, shift=t1, expansion=1,
                         user1_deadline=t1, user2_deadline=alpha * t1 + t1)


# -- burst sweeps ---------------------------------------------------------


def zero_stream(codec: CombinedCodec, horizon: int) -> List[Tuple[int, ...]]:
    """All-zero channel stream (valid by linearity); handy for loss counting."""
    return [tuple([0] * codec.symbol_width)] * horizon


def burst_decode_log(codec: CombinedCodec, start: int, length: int,
                     user: int, horizon: Optional[int] = None) -> StreamLog:
    """Decode an all-zero stream with one burst; recovery is structural,
    so the log applies to any source content."""
    if horizon is None:
        # slots after the last deadline cannot change any miss verdict
        horizon = start + length + codec.user2_deadline + 2
    rx: List[Optional[Tuple[int, ...]]] = list(zero_stream(codec, horizon))
    for s in range(start, start + length):
        rx[s] = None
    _, log = codec.decode(rx, user)
    return log


def burst_loss_count(codec: CombinedCodec, length: int, user: int) -> int:
    """Deadline misses caused by one isolated burst of the given length.

    The codecs are time-invariant, so a single well-separated burst
    position characterizes every position away from the stream start.
    """
    if length == 0:
        return 0
    start = 3 * (codec.user1_deadline + codec.user2_deadline)
    log = burst_decode_log(codec, start, length, user)
    return len(log.misses)


def sweep_max_delay(codec: CombinedCodec, burst_len: int, user: int,
                    window: Optional[int] = None) -> Tuple[int, int]:
    """(max recovery delay, miss count) over every burst start in a window."""
    deadline = codec.user1_deadline if user == 1 else codec.user2_deadline
    if window is None:
        window = 10 * (codec.user1_deadline + codec.user2_deadline)
    worst = 0
    misses = 0
    for start in range(window - burst_len + 1):
        log = burst_decode_log(codec, start, burst_len, user)
        misses += len(log.misses)
        for slot in range(start, start + burst_len):
            d = log.slot_delay(slot)
            if d is not None:
                worst = max(worst, d)
    return worst, misses


# -- codec descriptor ---------------------------------------------------


def descriptor(codec: DeScoCodec) -> str:
    """Text block (key=value lines) reconstructing the codec bit-exactly."""
    p = codec.params
    rows = ",".join("-".join(format(v, "x") for v in row)
                    for row in codec.c1.h.rows)
    lines = [f"b1={p.b1}", f"t1={p.t1}", f"a={p.a}", f"b={p.b}",
             f"field={codec.field.degree}", f"h={rows}"]
    return "\n".join(lines) + "\n"


def parse_descriptor(text: str) -> DeScoCodec:
    kv: Dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad descriptor line: {line!r}")
        k, v = line.split("=", 1)
        kv[k.strip()] = v.strip()
    try:
        params = DeScoParams(int(kv["b1"]), int(kv["t1"]), int(kv["a"]),
                             int(kv.get("b", "1")))
        field = GF.binary(int(kv["field"]))
    except KeyError as exc:
        raise ValueError(f"descriptor missing key {exc}") from exc
    h = None
    if kv.get("h"):
        rows = tuple(tuple(int(x, 16) for x in row.split("-"))
                     for row in kv["h"].split(","))
        n = params.expansion
        t0 = n * params.t1 // params.b
        b0 = n * params.b1 // params.b
        h = BurstParityMatrix(rows, t0, b0, field)
    return DeScoCodec(params, field, h)
