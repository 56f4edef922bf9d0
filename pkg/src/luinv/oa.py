"""Orthogonal array parsing and classification.

An orthogonal array OA(r, N, d, k) is an r x N table over the symbols
{0, ..., d-1} such that every set of k columns contains each of the d^k
possible k-tuples equally often; the repetition count lambda = r / d^k
is called the index of the array.  The array is irredundant, written
IrOA(r, N, d, k), if every subset of N - k columns contains no repeated
rows.  Irredundant arrays of strength k are the combinatorial backbone
of k-uniform state construction (see the states module).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .errors import ArgumentError, ParseError, SymbolRangeError

__all__ = [
    "OrthogonalArray",
    "StrengthReport",
    "parse_oa",
    "check_strength",
    "is_irredundant",
    "witness_condition",
    "minimal_support_condition",
]


@dataclass(frozen=True)
class OrthogonalArray:
    """An r x N symbol table over the alphabet {0..d-1}.

    Attributes
    ----------
    rows : tuple of tuple of int
        The r rows, each an N-tuple of symbols.
    num_parties : int
        Number of columns N.
    local_dim : int
        Alphabet size d.
    """

    rows: tuple
    num_parties: int
    local_dim: int

    def __post_init__(self):
        if self.num_parties < 1 or self.local_dim < 1:
            raise ArgumentError("num_parties and local_dim must be >= 1")
        if len(self.rows) < 1:
            raise ArgumentError("an orthogonal array needs at least one row")
        for row in self.rows:
            if len(row) != self.num_parties:
                raise ParseError(
                    "row %r has %d entries, expected %d"
                    % (row, len(row), self.num_parties)
                )
            for s in row:
                if not 0 <= s < self.local_dim:
                    raise SymbolRangeError(
                        "symbol %r outside {0..%d}" % (s, self.local_dim - 1)
                    )

    @property
    def r(self):
        """Row count."""
        return len(self.rows)


@dataclass(frozen=True)
class StrengthReport:
    """Outcome of a strength check.

    ``holds`` is true when every k-column projection contains all d^k
    tuples exactly ``index_lambda`` times; then r = index_lambda * d^k.
    """

    k: int
    holds: bool
    index_lambda: int


def _tokenize(text):
    table = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields:
            continue
        row = []
        for f in fields:
            try:
                v = int(f)
            except ValueError:
                raise ParseError("line %d: %r is not an integer" % (lineno, f))
            if v < 0:
                raise ParseError("line %d: negative symbol %d" % (lineno, v))
            row.append(v)
        table.append(row)
    return table


def parse_oa(text, local_dim=None):
    """Parse an orthogonal array from whitespace-separated text.

    One row per line.  An optional first line ``r N d`` declares the shape;
    it is recognised when the remaining line count equals r and every
    remaining line has N fields.  Without a header the column count is taken
    from the first row and d is inferred as (max symbol) + 1 unless
    ``local_dim`` overrides it.  An explicit ``local_dim`` wins over both.

    Raises
    ------
    ParseError
        Empty input, ragged rows, or non-integer fields.
    SymbolRangeError
        A symbol at or above the declared local dimension.
    """
    table = _tokenize(text)
    if not table:
        raise ParseError("empty input")

    header = None
    if len(table[0]) == 3 and len(table) - 1 >= 1:
        r, num_parties, d = table[0]
        if (
            r == len(table) - 1
            and num_parties >= 1
            and d >= 1
            and all(len(row) == num_parties for row in table[1:])
        ):
            header = (r, num_parties, d)

    if header is not None:
        rows = table[1:]
        num_parties = header[1]
        d = local_dim if local_dim is not None else header[2]
    else:
        rows = table
        num_parties = len(rows[0])
        for row in rows:
            if len(row) != num_parties:
                raise ParseError(
                    "ragged rows: expected %d fields, got %d" % (num_parties, len(row))
                )
        d = local_dim if local_dim is not None else max(max(row) for row in rows) + 1

    return OrthogonalArray(
        rows=tuple(tuple(row) for row in rows),
        num_parties=num_parties,
        local_dim=d,
    )


def check_strength(oa, k):
    """Check whether ``oa`` has strength k and compute the index lambda.

    Every k-subset of columns is enumerated exactly; for each, all d^k
    symbol tuples must occur the same number of times r / d^k.

    Returns a StrengthReport; ``index_lambda`` is 0 when the check fails.
    """
    if not 1 <= k <= oa.num_parties:
        raise ArgumentError("k=%d out of range 1..%d" % (k, oa.num_parties))
    lam, rem = divmod(oa.r, oa.local_dim**k)
    if rem != 0 or lam == 0:
        return StrengthReport(k=k, holds=False, index_lambda=0)
    for cols in itertools.combinations(range(oa.num_parties), k):
        counts = Counter(tuple(row[c] for c in cols) for row in oa.rows)
        if len(counts) != oa.local_dim**k or any(v != lam for v in counts.values()):
            return StrengthReport(k=k, holds=False, index_lambda=0)
    return StrengthReport(k=k, holds=True, index_lambda=lam)


def is_irredundant(oa, k):
    """True iff every (N - k)-column projection of ``oa`` has distinct rows.

    k = N is rejected: the empty projection makes irredundancy undefined.
    """
    if not 1 <= k < oa.num_parties:
        raise ArgumentError("k=%d out of range 1..%d" % (k, oa.num_parties - 1))
    keep = oa.num_parties - k
    for cols in itertools.combinations(range(oa.num_parties), keep):
        projected = {tuple(row[c] for c in cols) for row in oa.rows}
        if len(projected) != oa.r:
            return False
    return True


def witness_condition(r, num_parties, d):
    """True iff r > N*d - (N - 1), the row-count surplus that guarantees a
    nontrivial integral kernel of the symbol-count system."""
    if r < 1 or num_parties < 1 or d < 1:
        raise ArgumentError("r, num_parties, d must be positive")
    return r > num_parties * d - (num_parties - 1)


def minimal_support_condition(num_parties, d):
    """True iff d^floor(N/2) > N*d - (N - 1).

    This is the witness condition evaluated at the minimal possible
    support size d^floor(N/2) of an AME state.
    """
    if num_parties < 2 or d < 2:
        raise ArgumentError("need num_parties >= 2 and d >= 2")
    return d ** (num_parties // 2) > num_parties * d - (num_parties - 1)
