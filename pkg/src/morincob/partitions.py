"""Integer partitions used to index characteristic numbers and series coefficients.

A partition is a plain tuple of positive integers in weakly decreasing order;
``()`` is the empty partition of weight 0.
"""

from __future__ import annotations

import re
from collections import Counter
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import factorial
from typing import Iterable, Iterator

Partition = tuple

_PARTITION_RE = re.compile(r"^\s*\[\s*(\d+(\s*,\s*\d+)*)?\s*\]\s*$")


def make_partition(parts: Iterable[int]) -> tuple:
    """Sort ``parts`` into a partition, dropping zeros."""
    parts = [int(p) for p in parts]
    if any(p < 0 for p in parts):
        raise ValueError(f"partition parts must be non-negative: {parts}")
    return tuple(sorted((p for p in parts if p), reverse=True))


def is_partition(lam) -> bool:
    return (
        isinstance(lam, tuple)
        and all(isinstance(p, int) and p >= 1 for p in lam)
        and all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))
    )


def weight(lam: tuple) -> int:
    return sum(lam)


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple]:
    """All partitions of ``n`` with parts at most ``max_part``, reverse-lex order."""
    if n < 0:
        return
    if max_part is None or max_part > n:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(max_part, 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def partitions_up_to(n: int, max_part: int | None = None) -> Iterator[tuple]:
    for w in range(n + 1):
        yield from partitions(w, max_part)


@lru_cache(maxsize=None)
def count_partitions(n: int, max_part: int) -> int:
    """Number of partitions of ``n`` with every part at most ``max_part``."""
    if n == 0:
        return 1
    if n < 0 or max_part <= 0:
        return 0
    # either no part equals max_part, or remove one copy of it
    return count_partitions(n, max_part - 1) + count_partitions(n - max_part, max_part)


def _multiset_count(values: tuple) -> int:
    out = factorial(len(values))
    for m in Counter(values).values():
        out //= factorial(m)
    return out


@lru_cache(maxsize=4096)
def splittings(lam: tuple) -> tuple:
    """Ways of splitting each part of ``lam`` in two.

    Returns triples ``(mu, nu, count)``: ``count`` is the number of vectors
    ``b`` with ``0 <= b_i <= lam_i`` whose nonzero entries sort to ``mu`` and
    whose complements ``lam_i - b_i`` sort to ``nu``.  This is the coefficient
    bookkeeping both for products of symmetric series in the monomial basis
    and for the Cartan expansion of ``p_lam`` of a Whitney sum.
    """
    groups = sorted(Counter(lam).items(), reverse=True)
    per_group = []
    for value, mult in groups:
        options = []
        for chosen in combinations_with_replacement(range(value + 1), mult):
            options.append((chosen, tuple(value - c for c in chosen), _multiset_count(chosen)))
        per_group.append(options)
    acc: dict = {}
    for combo in product(*per_group):
        left: list = []
        right: list = []
        count = 1
        for chosen, rest, c in combo:
            left.extend(chosen)
            right.extend(rest)
            count *= c
        key = (make_partition(left), make_partition(right))
        acc[key] = acc.get(key, 0) + count
    return tuple((mu, nu, c) for (mu, nu), c in sorted(acc.items()))


def format_partition(lam: tuple) -> str:
    return "[" + ",".join(str(p) for p in lam) + "]"


def parse_partition(text: str) -> tuple:
    """Parse ``"[3,1,1]"`` (any order, no zeros) into a partition."""
    if not _PARTITION_RE.match(text):
        raise ValueError(f"malformed partition {text!r}")
    inner = text.strip()[1:-1].strip()
    if not inner:
        return ()
    parts = [int(p) for p in inner.split(",")]
    if any(p <= 0 for p in parts):
        raise ValueError(f"partition parts must be positive: {text!r}")
    return make_partition(parts)
