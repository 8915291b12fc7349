"""Exact linear algebra over :class:`Scalar`.

Vectors are sparse dicts ``key -> Scalar`` with mutually comparable keys.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

from .scalars import ONE, ZERO, Scalar

Vector = dict


def axpy(acc: dict, v: Mapping, c: Scalar) -> None:
    """acc += c * v, dropping zeros."""
    for key, x in v.items():
        t = x * c
        old = acc.get(key)
        if old is None:
            if t:
                acc[key] = t
        else:
            s = old + t
            if s:
                acc[key] = s
            else:
                del acc[key]


class Echelon:
    """Incremental echelon basis.

    Each stored row is normalised so that its pivot (its largest key) has
    coefficient one.  With ``track=True`` every row also carries the linear
    combination of inserted vectors it came from, which gives kernels and
    solutions of linear systems.
    """

    def __init__(self, track: bool = False):
        self.rows: dict[Hashable, tuple[dict, dict | None]] = {}
        self.track = track
        self.kernel: list[dict] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Mapping, tag: dict | None = None) -> tuple[dict, dict | None]:
        v = dict(v)
        combo = dict(tag) if tag is not None else ({} if self.track else None)
        while True:
            pk = None
            for key in v:
                if key in self.rows and (pk is None or key > pk):
                    pk = key
            if pk is None:
                return v, combo
            c = v[pk]
            row, rcombo = self.rows[pk]
            axpy(v, row, -c)
            if combo is not None and rcombo is not None:
                axpy(combo, rcombo, -c)

    def add(self, v: Mapping, tag: Hashable | None = None) -> bool:
        """Insert ``v``; return True when it was independent of the basis."""
        start = {tag: ONE} if (self.track and tag is not None) else ({} if self.track else None)
        r, combo = self.reduce(v, start)
        if not r:
            if self.track and combo:
                self.kernel.append(combo)
            return False
        pk = max(r)
        inv = r[pk].inverse()
        r = {key: x * inv for key, x in r.items()}
        if combo is not None:
            combo = {key: x * inv for key, x in combo.items()}
        self.rows[pk] = (r, combo)
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)[0]

    def express(self, v: Mapping) -> dict | None:
        """Coefficients of ``v`` in terms of the inserted tags, or None."""
        assert self.track
        r, combo = self.reduce(v, {})
        if r:
            return None
        return {key: -x for key, x in combo.items()}


def rank(vectors: Iterable[Mapping]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


def kernel(columns: Sequence[Mapping]) -> list[dict]:
    """Basis of relations ``sum_j x_j columns[j] = 0`` as dicts ``j -> x_j``."""
    e = Echelon(track=True)
    for j, col in enumerate(columns):
        e.add(col, j)
    return e.kernel


def solve(columns: Sequence[Mapping], rhs: Mapping) -> tuple[dict | None, list[dict]]:
    """One solution of ``sum_j x_j columns[j] = rhs`` plus the kernel basis."""
    e = Echelon(track=True)
    for j, col in enumerate(columns):
        e.add(col, j)
    return e.express(rhs), e.kernel


def det(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    """Determinant by fraction-free (Bareiss) elimination."""
    m = [[x if isinstance(x, Scalar) else Scalar(x) for x in row] for row in matrix]
    n = len(m)
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for i in range(n - 1):
        if not m[i][i]:
            swap = next((r for r in range(i + 1, n) if m[r][i]), None)
            if swap is None:
                return ZERO
            m[i], m[swap] = m[swap], m[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev
        prev = m[i][i]
    return m[n - 1][n - 1] * sign


def inverse(matrix: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    n = len(matrix)
    aug = [
        [x if isinstance(x, Scalar) else Scalar(x) for x in row] + [ONE if i == j else ZERO for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
