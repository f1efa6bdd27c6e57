"""Staged peeling decoder shared by the single- and two-user codecs.

The received parity at slot t is the sum of one parity from each
component code (the embedded component delayed by its shift).  The
decoder walks the stream causally and keeps every such parity equation
pending until, for some component, all *other* components' shares are
fully determined; at that point the component's parity value can be
peeled off and fed to the incremental solver of the diagonal codeword it
belongs to.  With a single component this degenerates to immediate
per-diagonal elimination.

Progress is propagated to a fixpoint inside each time step, so recovery
times reflect the earliest slot at which the staged procedure can pin a
sub-symbol.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .gf import GF, IncrementalSystem
from .sco import ScoCodec, Var


@dataclass(frozen=True)
class TraceEvent:
    """One recovered sub-symbol: which parity pinned it, and when."""

    slot: int
    sub: int
    time: int            # stream slot at which the value became known
    component: int       # index of the component whose parity was used
    row: int             # parity row j within that component
    parity_slot: int     # parity emission slot on the component's own clock


@dataclass
class StreamLog:
    """Per-sub-symbol recovery times and deadline accounting for one decode."""

    horizon: int
    n_subs: int
    deadline: int
    sub_times: Dict[Var, Optional[int]]
    trace: List[TraceEvent] = dc_field(default_factory=list)

    def slot_time(self, slot: int) -> Optional[int]:
        """Slot recovery time: the latest sub-symbol time (None if any missing)."""
        times = [self.sub_times.get((slot, k)) for k in range(self.n_subs)]
        if any(t is None for t in times):
            return None
        return max(times)

    def slot_delay(self, slot: int) -> Optional[int]:
        t = self.slot_time(slot)
        return None if t is None else t - slot

    @property
    def misses(self) -> List[int]:
        out = []
        for slot in range(self.horizon):
            t = self.slot_time(slot)
            if t is None or t > slot + self.deadline:
                out.append(slot)
        return out

    @property
    def fully_recovered(self) -> bool:
        return all(self.slot_time(s) is not None for s in range(self.horizon))


class Component:
    """A component codec's view of the combined parity stream.

    The component's parity j contributing to combined slot t is the one
    it emitted at t - shift on its own clock.  Term positions relative to
    t are fixed per parity row, so they are precomputed once.
    """

    def __init__(self, codec: ScoCodec, shift: int = 0):
        self.codec = codec
        self.shift = shift
        self.templates: List[Tuple[int, List[Tuple[int, int, int]]]] = []
        for j in range(codec.b):
            diag_off = codec.diag_of_parity(-shift, j)
            entries = []
            for (slot, sub), coeff in codec.parity_terms(-shift, j).items():
                entries.append((slot, sub, coeff))
            self.templates.append((diag_off, entries))

    def terms(self, t: int, j: int) -> Tuple[int, Dict[Var, int]]:
        diag_off, entries = self.templates[j]
        return t + diag_off, {(t + ds, sub): c for ds, sub, c in entries}

    def own_slot(self, t: int) -> int:
        return t - self.shift


class _PendingParity:
    """Bookkeeping for one combined parity equation awaiting staged release."""

    __slots__ = ("t", "j", "value", "unknowns", "consts", "codewords", "released")

    def __init__(self, t: int, j: int, value: int, n_components: int):
        self.t = t
        self.j = j
        self.value = value
        self.unknowns: List[Dict[Var, int]] = [dict() for _ in range(n_components)]
        self.consts: List[int] = [0] * n_components
        self.codewords: List[int] = [0] * n_components
        self.released: Set[int] = set()


def staged_decode(components: Sequence[Component], field: GF, n_subs: int,
                  n_parities: int, received: Sequence[Optional[Sequence[int]]]):
    """Run the staged decoder over a stream with ``None`` marking erased slots.

    Returns (values, times, trace): values maps (slot, sub) to the
    recovered field element where determined; times maps every in-horizon
    (slot, sub) to its recovery slot or None; trace lists the parity
    attribution of each recovered erased sub-symbol.
    """
    horizon = len(received)
    ncomp = len(components)
    known: Dict[Var, int] = {}
    times: Dict[Var, Optional[int]] = {}
    trace: List[TraceEvent] = []
    systems: Dict[Tuple[int, int], IncrementalSystem] = {}
    sys_vars: Dict[Var, Set[Tuple[int, int]]] = {}
    watchers: Dict[Var, List[Tuple[int, int]]] = {}  # var -> [(pending idx, comp)]
    pending: List[_PendingParity] = []

    queue: deque = deque()  # (var, value, attribution | None)
    ready: deque = deque()  # pending indices whose counts changed
    unresolved: Set[Var] = set()  # erased sub-symbols not yet recovered

    def is_known(var: Var) -> bool:
        return var[0] < 0 or var in known

    def value_of(var: Var) -> int:
        return 0 if var[0] < 0 else known[var]

    def enqueue_known(var: Var, value: int, prov) -> None:
        if var in known:
            return
        known[var] = value
        queue.append((var, value, prov))

    def absorb(var: Var, value: int, now: int, prov) -> None:
        """Propagate one newly known sub-symbol through all bookkeeping."""
        unresolved.discard(var)
        if var not in times or times[var] is None:
            times[var] = now
            if prov is not None:
                ci, row, pslot = prov
                trace.append(TraceEvent(var[0], var[1], now, ci, row, pslot))
        for idx, ci in watchers.pop(var, []):
            pp = pending[idx]
            coeff = pp.unknowns[ci].pop(var, None)
            if coeff is not None:
                pp.consts[ci] = field.add(pp.consts[ci], field.mul(coeff, value))
                if not pp.unknowns[ci]:
                    ready.append(idx)
        for skey in sys_vars.pop(var, set()):
            newly = systems[skey].add_equation({var: 1}, value)
            for v2, val2 in newly.items():
                enqueue_known(v2, val2, (skey[0], -1, -1))

    def try_release(idx: int, now: int) -> None:
        pp = pending[idx]
        for ci in range(ncomp):
            if ci in pp.released or not pp.unknowns[ci]:
                continue
            if any(pp.unknowns[cj] for cj in range(ncomp) if cj != ci):
                continue
            pp.released.add(ci)
            rhs = pp.value
            for cj in range(ncomp):
                rhs = field.sub(rhs, pp.consts[cj])
            skey = (ci, pp.codewords[ci])
            sysm = systems.setdefault(skey, IncrementalSystem(field))
            eq = dict(pp.unknowns[ci])
            for v in eq:
                sys_vars.setdefault(v, set()).add(skey)
            prov = (ci, pp.j, components[ci].own_slot(pp.t))
            newly = sysm.add_equation(eq, rhs)
            for v2, val2 in newly.items():
                enqueue_known(v2, val2, prov)

    def drain(now: int) -> None:
        while queue or ready:
            while queue:
                var, value, prov = queue.popleft()
                absorb(var, value, now, prov)
            while ready:
                try_release(ready.popleft(), now)

    for t in range(horizon):
        slot = received[t]
        if slot is None:
            for k in range(n_subs):
                times.setdefault((t, k), None)
                unresolved.add((t, k))
            drain(t)
            continue
        if len(slot) != n_subs + n_parities:
            raise ValueError(f"slot {t}: expected {n_subs + n_parities} symbols")
        for k in range(n_subs):
            enqueue_known((t, k), slot[k], None)
            times.setdefault((t, k), t)
        drain(t)
        for j in range(n_parities):
            # fast path: a parity whose terms are all known adds nothing
            if not any((t + ds, sub) in unresolved
                       for _, entries in (comp.templates[j] for comp in components)
                       for ds, sub, _ in entries):
                continue
            pp = _PendingParity(t, j, slot[n_subs + j], ncomp)
            idx = len(pending)
            for ci, comp in enumerate(components):
                cw, terms = comp.terms(t, j)
                pp.codewords[ci] = cw
                for var, coeff in terms.items():
                    if is_known(var):
                        pp.consts[ci] = field.add(
                            pp.consts[ci], field.mul(coeff, value_of(var)))
                    else:
                        pp.unknowns[ci][var] = coeff
                        watchers.setdefault(var, []).append((idx, ci))
            pending.append(pp)
            ready.append(idx)
        drain(t)

    values = {var: val for var, val in known.items() if 0 <= var[0] < horizon}
    return values, times, trace
