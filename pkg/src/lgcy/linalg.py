"""Sparse exact linear systems over the rationals.

Rows are dictionaries ``column -> Fraction``; columns are integers whose order
is the elimination order.  Reduction is by leading column, so earlier columns
become pivots first and the returned solution (free variables set to zero) is
deterministic.  Independent blocks of the system are found with a union-find
and only blocks touching a nonzero right-hand side are eliminated.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Tuple

Row = Dict[int, Fraction]


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("LGCY_THREADS", "1")))
    except ValueError:
        return 1


class LinearSystem:
    """Accumulates equations sum_c a_c x_c = b with hashable unknown and equation keys."""

    def __init__(self):
        self.columns: Dict[Hashable, int] = {}
        self.column_keys: List[Hashable] = []
        self.rows: Dict[Hashable, Row] = {}
        self.rhs: Dict[Hashable, Fraction] = {}

    def column(self, key) -> int:
        c = self.columns.get(key)
        if c is None:
            c = len(self.column_keys)
            self.columns[key] = c
            self.column_keys.append(key)
        return c

    def add_term(self, eq, key, coeff) -> None:
        if not coeff:
            return
        c = self.column(key)
        row = self.rows.setdefault(eq, {})
        v = row.get(c, 0) + coeff
        if v:
            row[c] = v
        else:
            del row[c]

    def add_rhs(self, eq, value) -> None:
        if not value:
            return
        self.rows.setdefault(eq, {})
        v = self.rhs.get(eq, 0) + value
        if v:
            self.rhs[eq] = v
        else:
            self.rhs.pop(eq, None)

    def solve(self) -> Optional[Dict[Hashable, Fraction]]:
        """A solution as ``{unknown key: value}`` (zeros omitted) or None if inconsistent."""
        ncols = len(self.column_keys)
        blocks = _blocks(self.rows, self.rhs, ncols)
        jobs = [[(self.rows[e], self.rhs.get(e, Fraction(0))) for e in eqs] for eqs in blocks]
        workers = thread_count()
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_eliminate, jobs))
        else:
            results = [_eliminate(j) for j in jobs]
        out: Dict[Hashable, Fraction] = {}
        for res in results:
            if res is None:
                return None
            for c, v in res.items():
                out[self.column_keys[c]] = v
        return out


def _blocks(rows, rhs, ncols) -> List[List[Hashable]]:
    parent = list(range(ncols))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for row in rows.values():
        cols = iter(row)
        first = next(cols, None)
        if first is None:
            continue
        r0 = find(first)
        for c in cols:
            r = find(c)
            if r != r0:
                if r < r0:
                    r, r0 = r0, r
                parent[r] = r0
    wanted = {}
    order = []
    for eq, row in rows.items():
        if not row:
            if rhs.get(eq):
                # 0 = b with b != 0: a one-equation inconsistent block
                order.append([eq])
            continue
        root = find(next(iter(row)))
        if root not in wanted:
            wanted[root] = []
        wanted[root].append(eq)
    live = {find(next(iter(rows[e]))) for e in rhs if rows[e]}
    for root in sorted(live):
        order.append(wanted[root])
    return order


def _eliminate(block: List[Tuple[Row, Fraction]]) -> Optional[Dict[int, Fraction]]:
    pivots: Dict[int, Tuple[Row, Fraction]] = {}
    for row, b in block:
        r = dict(row)
        while r:
            lead = min(r)
            piv = pivots.get(lead)
            if piv is None:
                inv = Fraction(1) / r[lead]
                pivots[lead] = ({c: v * inv for c, v in r.items()}, b * inv)
                break
            prow, pb = piv
            f = r[lead]
            for c, v in prow.items():
                nv = r.get(c, 0) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
            b = b - f * pb
        else:
            if b:
                return None
    sol: Dict[int, Fraction] = {}
    for lead in sorted(pivots, reverse=True):
        prow, pb = pivots[lead]
        v = pb
        for c, a in prow.items():
            if c != lead:
                v -= a * sol.get(c, 0)
        if v:
            sol[lead] = v
    return sol
