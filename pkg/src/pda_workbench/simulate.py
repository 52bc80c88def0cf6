"""End-to-end broadcast simulation on concrete byte payloads.

The pipeline follows the scheme an array encodes: split every file into F
packets, give user k the starred rows of column k (same rows for every
file), then for each symbol s broadcast the XOR of W_{d_k, j} over the
cells p_{j,k} = s.  A user recovers a missing packet by cancelling the
other terms of its signal out of its own cache; the array's axioms are
exactly what makes every cancellation term cached and every needed packet
covered by one signal.

XOR over raw bytes stands in for the unspecified field: GF(2) suffices for
one-shot decoding.  Payloads come from a seeded generator so transcripts
are reproducible.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .core import STAR, PdaGrid, pda_params

DEFAULT_PACKET_LEN = 64

Cache = Dict[Tuple[int, int], bytes]  # (file n, row j) -> packet


class DecodeError(Exception):
    """A cancellation term was not in the decoding user's cache."""

    def __init__(self, signal: int, user: int, row: int):
        self.signal = signal
        self.user = user
        self.row = row
        super().__init__(
            f"user {user} cannot decode row {row} from signal {signal}: "
            "a cancellation term is not cached"
        )


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b, strict=True))


@dataclass(frozen=True)
class FileLibrary:
    """N files of F equal-length packets each."""

    n: int
    f: int
    packet_len: int
    packets: Tuple[Tuple[bytes, ...], ...]  # [file-1][row-1]

    @classmethod
    def generate(
        cls,
        n: int,
        f: int,
        packet_len: int = DEFAULT_PACKET_LEN,
        seed: int = 0,
    ) -> "FileLibrary":
        if n < 1 or f < 1 or packet_len < 1:
            raise ValueError("need n, f, packet_len >= 1")
        rng = random.Random(seed)
        packets = tuple(
            tuple(rng.randbytes(packet_len) for _ in range(f))
            for _ in range(n)
        )
        return cls(n=n, f=f, packet_len=packet_len, packets=packets)

    def packet(self, n: int, j: int) -> bytes:
        """Packet j (1-based row) of file n (1-based)."""
        return self.packets[n - 1][j - 1]

    def file_bytes(self, n: int) -> bytes:
        return b"".join(self.packets[n - 1])


@dataclass(frozen=True)
class Signal:
    id: int
    terms: Tuple[Tuple[int, int], ...]  # (user, row), sorted
    payload: bytes


@dataclass(frozen=True)
class DeliveryTranscript:
    demand: Tuple[int, ...]
    signals: Tuple[Signal, ...]
    decode_log: Dict[Tuple[int, int], int]  # (user, row) -> signal id

    def as_dict(self) -> dict:
        return {
            "demand": list(self.demand),
            "signals": [
                {
                    "id": s.id,
                    "terms": [{"user": k, "row": j} for k, j in s.terms],
                    "payload_hex": s.payload.hex(),
                }
                for s in self.signals
            ],
            "decode_log": [
                {"user": k, "row": j, "signal": s}
                for (k, j), s in sorted(self.decode_log.items())
            ],
        }


def _check_demand(grid: PdaGrid, lib: FileLibrary, d: Sequence[int]) -> Tuple[int, ...]:
    d = tuple(d)
    if len(d) != grid.k:
        raise ValueError(f"demand length {len(d)} != K = {grid.k}")
    for n in d:
        if not 1 <= n <= lib.n:
            raise ValueError(f"demanded file {n} outside [1, {lib.n}]")
    if lib.f != grid.f:
        raise ValueError(f"library has {lib.f} packets per file, grid has {grid.f} rows")
    return d


def place(grid: PdaGrid, lib: FileLibrary) -> List[Cache]:
    """Fill each user's cache: starred rows of its column, for every file.

    Returns caches indexed by user-1; each maps (file n, row j) to the
    packet bytes.  Every cache holds N*Z packets.
    """
    if lib.f != grid.f:
        raise ValueError(f"library has {lib.f} packets per file, grid has {grid.f} rows")
    caches: List[Cache] = []
    for k in range(1, grid.k + 1):
        cache: Cache = {}
        for j in range(1, grid.f + 1):
            if grid.cells[j - 1][k - 1] == STAR:
                for n in range(1, lib.n + 1):
                    cache[(n, j)] = lib.packet(n, j)
        caches.append(cache)
    return caches


def deliver(grid: PdaGrid, lib: FileLibrary, d: Sequence[int]) -> DeliveryTranscript:
    """Broadcast one signal per symbol: XOR of W_{d_k, j} over its cells."""
    d = _check_demand(grid, lib, d)
    by_symbol: Dict[int, List[Tuple[int, int]]] = {}
    decode_log: Dict[Tuple[int, int], int] = {}
    for j in range(1, grid.f + 1):
        for k in range(1, grid.k + 1):
            s = grid.cells[j - 1][k - 1]
            if s != STAR:
                by_symbol.setdefault(s, []).append((k, j))
                decode_log[(k, j)] = s
    signals = []
    for s in sorted(by_symbol):
        terms = tuple(sorted(by_symbol[s]))
        rows = [j for _, j in terms]
        users = [k for k, _ in terms]
        if len(set(rows)) != len(rows) or len(set(users)) != len(users):
            raise ValueError(f"symbol {s} repeats a row or column; not a valid array")
        payload = bytes(lib.packet_len)
        for k, j in terms:
            payload = _xor(payload, lib.packet(d[k - 1], j))
        signals.append(Signal(id=s, terms=terms, payload=payload))
    return DeliveryTranscript(demand=d, signals=tuple(signals), decode_log=decode_log)


@dataclass(frozen=True)
class DecodeResult:
    files: Tuple[bytes, ...]  # per user, the reassembled requested file
    ok: bool
    log: Dict[Tuple[int, int], int]


def decode(
    grid: PdaGrid,
    transcript: DeliveryTranscript,
    caches: Sequence[Cache],
    d: Sequence[int],
    lib: FileLibrary,
) -> DecodeResult:
    """Reassemble every user's requested file from cache plus signals.

    For each uncached row, the user looks up its one signal, XORs the
    other terms' packets out of its cache, and keeps the remainder.  A
    missing cancellation packet raises DecodeError naming the (signal,
    user, row) — that means the array never satisfied the axioms.  The
    ok flag compares every reassembled file byte-for-byte against the
    library.
    """
    d = _check_demand(grid, lib, d)
    by_id = {s.id: s for s in transcript.signals}
    files: List[bytes] = []
    for k in range(1, grid.k + 1):
        cache = caches[k - 1]
        parts: List[bytes] = []
        for j in range(1, grid.f + 1):
            if grid.cells[j - 1][k - 1] == STAR:
                parts.append(cache[(d[k - 1], j)])
                continue
            sid = transcript.decode_log[(k, j)]
            signal = by_id[sid]
            packet = signal.payload
            for k2, j2 in signal.terms:
                if (k2, j2) == (k, j):
                    continue
                term = cache.get((d[k2 - 1], j2))
                if term is None:
                    raise DecodeError(signal=sid, user=k, row=j)
                packet = _xor(packet, term)
            parts.append(packet)
        files.append(b"".join(parts))
    ok = all(
        files[k - 1] == lib.file_bytes(d[k - 1]) for k in range(1, grid.k + 1)
    )
    return DecodeResult(files=tuple(files), ok=ok, log=dict(transcript.decode_log))


def all_demands(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Every demand vector in [n]^k, lexicographic."""
    return product(range(1, n + 1), repeat=k)


def sample_demands(n: int, k: int, count: int, seed: int = 0) -> List[Tuple[int, ...]]:
    rng = random.Random(seed)
    return [tuple(rng.randint(1, n) for _ in range(k)) for _ in range(count)]


def measure_rate(
    grid: PdaGrid, lib: FileLibrary, demands: Iterable[Sequence[int]]
) -> Fraction:
    """Worst-case signals-per-packet over the sampled demands.

    For these schemes every symbol is broadcast whatever the demand, so
    each demand must produce exactly S signals; that is asserted, and the
    constant S/F comes back as an exact fraction.
    """
    params = pda_params(grid)
    for d in demands:
        t = deliver(grid, lib, d)
        if len(t.signals) != params.s:
            raise AssertionError(
                f"demand {tuple(d)} produced {len(t.signals)} signals, expected {params.s}"
            )
    return Fraction(params.s, params.f)


@dataclass(frozen=True)
class SweepResult:
    demands_checked: int
    all_ok: bool
    rate: Fraction
    first_failure: Optional[Tuple[int, ...]] = None


def run_sweep(
    grid: PdaGrid,
    lib: FileLibrary,
    demands: Iterable[Sequence[int]],
    threads: int = 1,
) -> SweepResult:
    """Deliver and decode every demand; report byte-exactness across all.

    Placement is shared read-only.  With threads > 1 demands are checked
    in a thread pool; the aggregate verdict does not depend on the split.
    """
    params = pda_params(grid)
    caches = place(grid, lib)
    demand_list = [tuple(d) for d in demands]

    def check(d: Tuple[int, ...]) -> bool:
        t = deliver(grid, lib, d)
        if len(t.signals) != params.s:
            return False
        try:
            return decode(grid, t, caches, d, lib).ok
        except DecodeError:
            return False

    if threads > 1 and len(demand_list) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(check, demand_list))
    else:
        results = [check(d) for d in demand_list]
    first_failure = None
    for d, ok in zip(demand_list, results):
        if not ok:
            first_failure = d
            break
    return SweepResult(
        demands_checked=len(demand_list),
        all_ok=all(results),
        rate=Fraction(params.s, params.f),
        first_failure=first_failure,
    )
