"""Generators for the three PDA families the workbench knows how to build.

* partition_pda(q, m): rows are the q^m checksum-extended vectors over [q],
  columns are the (m+1)q coordinate/value pairs (u, v); a cell is starred
  when the row agrees with the column's pin.  Params
  ((m+1)q, q^m, q^(m-1), (q-1)q^m).
* bipartite_pda(m, a, b): rows are b-subsets and columns a-subsets of [m];
  a cell is starred when they meet, otherwise it carries their union.
  Params (C(m,a), C(m,b), C(m,b)-C(m-a,b), C(m,a+b)).
* mn_pda(k, t): the classic one-coordinate special case, bipartite with
  m=k, a=1, b=t.
* grouping_pda(m, a, b, h): h bipartite copies side by side with disjoint
  symbol ranges.  Params (h*C(m,a), C(m,b), Z, h*C(m,a+b)).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, List, Tuple

from .core import MAX_ROWS, STAR, PdaGrid, PdaParams


def residue_q(x: int, q: int) -> int:
    """Least positive residue: x mod q, except multiples of q map to q."""
    if q <= 0:
        raise ValueError(f"modulus must be positive, got {q}")
    r = x % q
    return r if r else q


# ---------------------------------------------------------------------------
# Partition PDA
# ---------------------------------------------------------------------------

def partition_rows(q: int, m: int) -> List[Tuple[int, ...]]:
    """All (m+1)-vectors (f_1..f_m, <sum f_i>_q), first coordinate fastest."""
    rows = []
    for idx in range(q ** m):
        f = []
        rest = idx
        for _ in range(m):
            f.append(rest % q + 1)
            rest //= q
        f.append(residue_q(sum(f), q))
        rows.append(tuple(f))
    return rows


def partition_columns(q: int, m: int) -> List[Tuple[int, int]]:
    """Column labels (u, v), u in [m+1] outer, v in [q] inner."""
    return [(u, v) for u in range(1, m + 2) for v in range(1, q + 1)]


def partition_column_id(q: int, u: int, v: int) -> int:
    """1-based user id of column (u, v) in the enumeration above."""
    return (u - 1) * q + v


def partition_residue_buckets(q: int, m: int) -> Dict[int, int]:
    """How many tails (f_2..f_m) over [q-1] hit each residue <sum>_q.

    Counted by dynamic programming over the m-1 tail coordinates (an empty
    tail sums to 0, i.e. residue q).  Total across residues is (q-1)^(m-1).
    """
    if q < 2 or m < 1:
        raise ValueError(f"need q >= 2 and m >= 1, got q={q}, m={m}")
    counts = {v: 0 for v in range(1, q + 1)}
    counts[q] = 1
    for _ in range(m - 1):
        nxt = {v: 0 for v in range(1, q + 1)}
        for v, n in counts.items():
            if not n:
                continue
            for step in range(1, q):
                nxt[residue_q(v + step, q)] += n
        counts = nxt
    return counts


def partition_pda(q: int, m: int) -> PdaGrid:
    """Build the ((m+1)q, q^m, q^(m-1), (q-1)q^m) partition PDA.

    Cell (f, (u,v)) is a star when f_u = v; otherwise its symbol is the
    vector g obtained from f by pinning coordinate u to v.  Pinning breaks
    the checksum, so g is never a row vector, and each such g shows up
    exactly once per coordinate group -- m+1 occurrences in total.  Symbols
    are relabelled to dense ids by first appearance in row-major order.
    """
    if q < 2 or m < 1:
        raise ValueError(f"need q >= 2 and m >= 1, got q={q}, m={m}")
    if q ** m > MAX_ROWS:
        raise ValueError(f"q^m = {q ** m} rows exceeds the row cap {MAX_ROWS}")
    rows = partition_rows(q, m)
    cols = partition_columns(q, m)
    ids: Dict[Tuple[int, ...], int] = {}
    cells = []
    for f in rows:
        row = []
        for (u, v) in cols:
            if f[u - 1] == v:
                row.append(STAR)
            else:
                g = f[: u - 1] + (v,) + f[u:]
                row.append(ids.setdefault(g, len(ids) + 1))
        cells.append(tuple(row))
    return PdaGrid(tuple(cells))


@dataclass(frozen=True)
class PartitionSpec:
    q: int
    m: int

    def expected_params(self) -> PdaParams:
        q, m = self.q, self.m
        return PdaParams(k=(m + 1) * q, f=q ** m, z=q ** (m - 1), s=(q - 1) * q ** m)

    def build(self) -> PdaGrid:
        return partition_pda(self.q, self.m)


# ---------------------------------------------------------------------------
# Bipartite (subset) PDA
# ---------------------------------------------------------------------------

def subsets(m: int, r: int) -> List[Tuple[int, ...]]:
    """r-subsets of [m] as sorted tuples, lexicographic."""
    return list(combinations(range(1, m + 1), r))


def bipartite_pda(m: int, a: int, b: int) -> PdaGrid:
    """Rows = b-subsets, columns = a-subsets of [m], both lexicographic.

    Disjoint row/column subsets get the lex rank of their union as symbol;
    overlapping pairs are starred.  a+b = m is allowed and degenerates to a
    single symbol.
    """
    if a < 1 or b < 1 or a + b > m:
        raise ValueError(f"need a, b >= 1 and a+b <= m, got m={m}, a={a}, b={b}")
    if comb(m, b) > MAX_ROWS:
        raise ValueError(f"C({m},{b}) rows exceeds the row cap {MAX_ROWS}")
    union_rank = {d: i + 1 for i, d in enumerate(subsets(m, a + b))}
    cols = subsets(m, a)
    cells = []
    for row_set in subsets(m, b):
        bset = set(row_set)
        row = []
        for col_set in cols:
            if bset & set(col_set):
                row.append(STAR)
            else:
                row.append(union_rank[tuple(sorted(row_set + col_set))])
        cells.append(tuple(row))
    return PdaGrid(tuple(cells))


def mn_pda(k: int, t: int) -> PdaGrid:
    """Single-element user labels: bipartite with m=k, a=1, b=t."""
    if not 1 <= t < k:
        raise ValueError(f"need 1 <= t < k, got k={k}, t={t}")
    return bipartite_pda(m=k, a=1, b=t)


def grouping_pda(m: int, a: int, b: int, h: int) -> PdaGrid:
    """h horizontal copies of bipartite_pda(m, a, b) with disjoint symbols.

    Copy i's symbols are shifted by (i-1)*C(m, a+b), so the concatenation
    keeps C2/C3 and multiplies both K and S by h.
    """
    if h < 1:
        raise ValueError(f"need h >= 1, got {h}")
    base = bipartite_pda(m, a, b)
    shift = comb(m, a + b)
    cells = []
    for row in base.cells:
        out = []
        for i in range(h):
            out.extend(c if c == STAR else c + i * shift for c in row)
        cells.append(tuple(out))
    return PdaGrid(tuple(cells))


@dataclass(frozen=True)
class BipartiteSpec:
    m: int
    a: int
    b: int
    h: int = 1

    def expected_params(self) -> PdaParams:
        m, a, b, h = self.m, self.a, self.b, self.h
        return PdaParams(
            k=h * comb(m, a),
            f=comb(m, b),
            z=comb(m, b) - comb(m - a, b),
            s=h * comb(m, a + b),
        )

    def build(self) -> PdaGrid:
        if self.h == 1:
            return bipartite_pda(self.m, self.a, self.b)
        return grouping_pda(self.m, self.a, self.b, self.h)
