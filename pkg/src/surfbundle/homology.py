"""First homology of a finitely presented group via Smith normal form."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Sequence, Tuple

from .presentation import Presentation


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[int, ...]  # row-major, Python ints (unbounded)

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = tuple(int(x) for r in rows for x in r)
        return cls(len(rows), cols, entries)

    def to_rows(self) -> List[List[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        rows = self.to_rows()
        return IntMatrix.from_rows([list(col) for col in zip(*rows)] if rows else [], self.rows)


@dataclass(frozen=True)
class HomologySummary:
    betti_1: int
    torsion: Tuple[int, ...] = ()

    @property
    def min_generators(self) -> int:
        """Smallest generating set of the abelianization."""
        return self.betti_1 + len(self.torsion)

    def __str__(self) -> str:
        parts = ["Z"] * self.betti_1 + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def abelianize(p: Presentation) -> IntMatrix:
    col = {g: j for j, g in enumerate(p.generators)}
    rows = []
    for r in p.relators:
        row = [0] * len(p.generators)
        for x in r:
            row[col[abs(x)]] += 1 if x > 0 else -1
        rows.append(row)
    return IntMatrix.from_rows(rows, len(p.generators))


def smith_normal_form(m: IntMatrix) -> List[int]:
    """Invariant factors d1 | d2 | ... (length min(rows, cols), zeros last)."""
    a = m.to_rows()
    nr, nc = m.rows, m.cols
    diag = []
    for k in range(min(nr, nc)):
        while True:
            pivot = None
            for i in range(k, nr):
                for j in range(k, nc):
                    v = a[i][j]
                    if v and (pivot is None or abs(v) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            i, j = pivot
            a[k], a[i] = a[i], a[k]
            for row in a:
                row[k], row[j] = row[j], row[k]
            p = a[k][k]
            done = True
            for i in range(k + 1, nr):
                q = a[i][k] // p
                if q:
                    rk, ri = a[k], a[i]
                    for j in range(k, nc):
                        ri[j] -= q * rk[j]
                if a[i][k]:
                    done = False
            for j in range(k + 1, nc):
                q = a[k][j] // p
                if q:
                    for row in a[k:]:
                        row[j] -= q * row[k]
                if a[k][j]:
                    done = False
            if done:
                break
        if pivot is None:
            diag.extend([0] * (min(nr, nc) - k))
            break
        diag.append(abs(a[k][k]))
    return _divisibility_chain(diag)


def _divisibility_chain(diag: List[int]) -> List[int]:
    # diag(a, b) ~ diag(gcd, lcm); zeros sort to the end
    nonzero = [d for d in diag if d]
    for i in range(len(nonzero)):
        for j in range(i + 1, len(nonzero)):
            a, b = nonzero[i], nonzero[j]
            g = gcd(a, b)
            nonzero[i], nonzero[j] = g, a // g * b
    return nonzero + [0] * (len(diag) - len(nonzero))


def homology_of(p: Presentation) -> HomologySummary:
    factors = smith_normal_form(abelianize(p))
    rank = sum(1 for d in factors if d)
    return HomologySummary(len(p.generators) - rank, tuple(d for d in factors if d > 1))
