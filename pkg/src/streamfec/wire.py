"""Flat binary serialization of symbol streams.

Each field element occupies a fixed number of bytes (the fewest that fit
the field order), most-significant byte first; a stream is the plain
concatenation of its slots' elements with no framing.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .gf import GF


def element_width(field: GF) -> int:
    """Bytes per element: minimal big-endian width for values < field order."""
    return max(1, ((field.order - 1).bit_length() + 7) // 8)


def pack_stream(slots: Sequence[Sequence[int]], field: GF) -> bytes:
    w = element_width(field)
    out = bytearray()
    for slot in slots:
        for v in slot:
            if not 0 <= v < field.order:
                raise ValueError(f"element {v} out of range for {field}")
            out += int(v).to_bytes(w, "big")
    return bytes(out)


def unpack_stream(data: bytes, field: GF, symbol_width: int) -> List[Tuple[int, ...]]:
    """Split a packed stream into slots of ``symbol_width`` elements.

    Raises ValueError naming the byte offset of the first bad record on
    truncated input or out-of-range elements.
    """
    w = element_width(field)
    record = w * symbol_width
    if record <= 0:
        raise ValueError("symbol_width must be positive")
    if len(data) % record:
        raise ValueError(
            f"truncated stream: bad record at byte {len(data) - len(data) % record}")
    slots: List[Tuple[int, ...]] = []
    for off in range(0, len(data), record):
        vals = []
        for k in range(symbol_width):
            v = int.from_bytes(data[off + k * w:off + (k + 1) * w], "big")
            if v >= field.order:
                raise ValueError(f"bad element at byte {off + k * w}: {v}")
            vals.append(v)
        slots.append(tuple(vals))
    return slots
