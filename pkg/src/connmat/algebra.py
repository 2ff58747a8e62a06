"""The algebra of partitions: integer combinations of Part_n with the join as product.

The elimination vector ``pi(A)`` and the connectivity number ``alpha_A``
(coefficient of the one-block partition in ``pi(A)``) live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .partitions import Partition, conjugate, enumerate_partitions, leq, product

__all__ = [
    "AlgebraVector",
    "ConnectivityNumber",
    "vec_add",
    "vec_mul",
    "pi",
    "pi_full_product",
    "cross_block_transpositions",
    "connectivity_number",
]


class AlgebraVector:
    """Sparse integer linear combination of partitions of {1..n}.

    Treated as an immutable value: arithmetic returns new vectors and zero
    coefficients are never stored.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Partition, int] | Iterable[tuple[Partition, int]] = ()):
        self.n = n
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Partition, int] = {}
        for p, c in items:
            if p.n != n:
                raise DomainError(f"term {p} is not a partition of {{1..{n}}}")
            acc[p] = acc.get(p, 0) + c
        self._terms = {p: c for p, c in acc.items() if c}

    @classmethod
    def _trusted(cls, n: int, terms: dict[Partition, int]) -> "AlgebraVector":
        v = cls.__new__(cls)
        v.n = n
        v._terms = terms
        return v

    @classmethod
    def basis(cls, p: Partition) -> "AlgebraVector":
        return cls._trusted(p.n, {p: 1})

    @classmethod
    def zero(cls, n: int) -> "AlgebraVector":
        return cls._trusted(n, {})

    @classmethod
    def unit(cls, n: int) -> "AlgebraVector":
        """The algebra unit: the all-singletons partition."""
        return cls.basis(Partition.singletons(n))

    @property
    def terms(self) -> Mapping[Partition, int]:
        return dict(self._terms)

    def coefficient(self, p: Partition) -> int:
        return self._terms.get(p, 0)

    def support(self) -> list[Partition]:
        """Supporting partitions, finest first (then by RGS)."""
        return sorted(self._terms, key=lambda p: (-p.num_blocks, p.rgs))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def _check(self, other: "AlgebraVector") -> None:
        if self.n != other.n:
            raise DomainError(f"vectors over different ground sets: n={self.n} vs n={other.n}")

    def __add__(self, other: "AlgebraVector") -> "AlgebraVector":
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        self._check(other)
        acc = dict(self._terms)
        for p, c in other._terms.items():
            s = acc.get(p, 0) + c
            if s:
                acc[p] = s
            else:
                acc.pop(p, None)
        return AlgebraVector._trusted(self.n, acc)

    def __neg__(self) -> "AlgebraVector":
        return AlgebraVector._trusted(self.n, {p: -c for p, c in self._terms.items()})

    def __sub__(self, other: "AlgebraVector") -> "AlgebraVector":
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "AlgebraVector":
        if isinstance(other, int):
            if other == 0:
                return AlgebraVector.zero(self.n)
            return AlgebraVector._trusted(self.n, {p: other * c for p, c in self._terms.items()})
        if isinstance(other, Partition):
            other = AlgebraVector.basis(other)
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        self._check(other)
        acc: dict[Partition, int] = {}
        for p, c in self._terms.items():
            for q, d in other._terms.items():
                r = product(p, q)
                acc[r] = acc.get(r, 0) + c * d
        return AlgebraVector._trusted(self.n, {p: c for p, c in acc.items() if c})

    def __rmul__(self, other) -> "AlgebraVector":
        if isinstance(other, (int, Partition)):
            return self * other  # commutative
        return NotImplemented

    def act(self, sigma: Sequence[int]) -> "AlgebraVector":
        """Apply a relabelling permutation term by term."""
        acc: dict[Partition, int] = {}
        for p, c in self._terms.items():
            q = conjugate(sigma, p)
            acc[q] = acc.get(q, 0) + c
        return AlgebraVector._trusted(self.n, acc)

    def serialize(self) -> list[tuple[int, str]]:
        """``(coefficient, partition text)`` pairs sorted by the partition text."""
        return sorted(((c, str(p)) for p, c in self._terms.items()), key=lambda t: t[1])

    @classmethod
    def deserialize(cls, n: int, pairs: Iterable[Sequence]) -> "AlgebraVector":
        return cls(n, [(Partition.parse(text, n), int(c)) for c, text in pairs])

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for p in self.support():
            c = self._terms[p]
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            out.append(f"{sign} {mag}[{p}]")
        text = " ".join(out)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]

    def __repr__(self) -> str:
        return f"AlgebraVector(n={self.n}, {self.serialize()!r})"


def vec_add(u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    return u + v


def vec_mul(u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    """Bilinear extension of the partition product."""
    return u * v


def cross_block_transpositions(a: Partition) -> list[tuple[int, int]]:
    """0-based pairs (i, j), i < j, lying in different blocks of ``a``, in lexicographic order."""
    rgs = a.rgs
    return [(i, j) for i, j in combinations(range(a.n), 2) if rgs[i] != rgs[j]]


def pi(a: Partition) -> AlgebraVector:
    """Elimination vector of ``a``.

    Computed as ``a * prod_tau (e - <tau>)`` over the transpositions not
    contained in ``a``, i.e. ``v <- v - v*<tau>`` for each cross-block pair.
    Multiplying a term by ``<tau>`` merges two blocks; a term whose blocks
    are already merged cancels against itself.
    """
    terms: dict[Partition, int] = {a: 1}
    for i, j in cross_block_transpositions(a):
        nxt: dict[Partition, int] = {}
        for p, c in terms.items():
            q = p.merge(i, j)
            if q is p:
                continue
            nxt[p] = nxt.get(p, 0) + c
            nxt[q] = nxt.get(q, 0) - c
        terms = {p: c for p, c in nxt.items() if c}
    return AlgebraVector._trusted(a.n, terms)


def pi_full_product(a: Partition, universe: Iterable[Partition] | None = None) -> AlgebraVector:
    """Elimination vector from its defining product over every ``b`` not below ``a``.

    ``prod (a - a*b)`` over all partitions ``b`` with ``b`` not refining ``a``;
    the one-block partition maps to itself.  Cost grows with Bell(n); kept as
    an independent reference for :func:`pi` at small n.
    """
    n = a.n
    if a.is_trivial:
        return AlgebraVector.basis(a)
    if universe is None:
        universe = enumerate_partitions(n)
    base = AlgebraVector.basis(a)
    result: AlgebraVector | None = None
    for b in universe:
        if leq(b, a):
            continue
        factor = base - AlgebraVector.basis(product(a, b))
        result = factor if result is None else result * factor
    assert result is not None  # the one-block partition is never below a non-trivial a
    return result


@dataclass(frozen=True)
class ConnectivityNumber:
    partition: Partition
    alpha: int


def connectivity_number(a: Partition) -> ConnectivityNumber:
    """Coefficient of the one-block partition in ``pi(a)``."""
    alpha = pi(a).coefficient(Partition.one_block(a.n))
    return ConnectivityNumber(a, alpha)
