"""Set partitions of {1..n}: the partition monoid, refinement, conjugation and coherent orders.

A partition is stored as its restricted growth string (RGS): element ``i``
(0-based internally) carries the label of its block, labels numbered in
order of first appearance.  The RGS is unique per partition, so equality,
hashing and ordering are all taken from it.

Text form is ``"1 2|3 4 5|6"``: blocks separated by ``|``, 1-based elements
separated by whitespace.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, OrderError, ParseError, SizeLimitError

DEFAULT_MAX_N = 12

__all__ = [
    "DEFAULT_MAX_N",
    "Partition",
    "ConjugationClass",
    "CoherentOrder",
    "bell_number",
    "check_size",
    "enumerate_partitions",
    "product",
    "is_trivial",
    "leq",
    "num_blocks",
    "conjugate",
    "conjugation_classes",
    "coherent_order",
    "class_size",
    "integer_partitions",
]


def check_size(n: int, max_n: int | None = None, what: str = "n") -> None:
    limit = DEFAULT_MAX_N if max_n is None else max_n
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"{what} must be a positive integer, got {n!r}")
    if n > limit:
        raise SizeLimitError(f"{what}={n} exceeds the size cap {limit}")


def _canonical(labels: Sequence) -> tuple[int, ...]:
    relabel: dict = {}
    out = []
    for lab in labels:
        if lab not in relabel:
            relabel[lab] = len(relabel)
        out.append(relabel[lab])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """A set partition of {1..n} held in canonical restricted-growth form."""

    rgs: tuple[int, ...]

    def __post_init__(self):
        rgs = tuple(self.rgs)
        object.__setattr__(self, "rgs", rgs)
        if not rgs:
            raise DomainError("a partition needs n >= 1")
        top = -1
        for lab in rgs:
            if not isinstance(lab, int) or lab < 0 or lab > top + 1:
                raise DomainError(f"not a restricted growth string: {rgs}")
            top = max(top, lab)

    # -- constructors -------------------------------------------------

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Build from any per-element labelling (labels need only be hashable)."""
        return cls(_canonical(labels))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        """Build from 1-based blocks; they must cover {1..n} exactly once."""
        blocks = [list(b) for b in blocks]
        elements = [e for b in blocks for e in b]
        if n is None:
            n = len(elements)
        if any(len(b) == 0 for b in blocks):
            raise DomainError("empty block")
        if sorted(elements) != list(range(1, n + 1)):
            raise DomainError(f"blocks {blocks} do not partition {{1..{n}}}")
        labels = [0] * n
        for k, b in enumerate(blocks):
            for e in b:
                labels[e - 1] = k
        return cls.from_labels(labels)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Partition":
        """Parse ``"1 2|3"``-style text; block and element order are irrelevant."""
        try:
            blocks = [[int(tok) for tok in chunk.split()] for chunk in text.strip().split("|")]
        except ValueError as exc:
            raise ParseError(f"bad partition text {text!r}") from exc
        try:
            return cls.from_blocks(blocks, n)
        except DomainError as exc:
            raise ParseError(str(exc)) from exc

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        """The all-singletons partition, the unit of the monoid."""
        return cls(tuple(range(n)))

    @classmethod
    def one_block(cls, n: int) -> "Partition":
        """The one-block (trivial) partition, absorbing for the product."""
        return cls((0,) * n)

    # -- basic queries ------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rgs)

    @property
    def num_blocks(self) -> int:
        return max(self.rgs) + 1

    @property
    def is_trivial(self) -> bool:
        return self.num_blocks == 1

    @property
    def is_unit(self) -> bool:
        return self.num_blocks == self.n

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Blocks as 1-based tuples, ordered by minimum element."""
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for i, lab in enumerate(self.rgs):
            out[lab].append(i + 1)
        return tuple(tuple(b) for b in out)

    def block_sizes(self) -> list[int]:
        sizes = [0] * self.num_blocks
        for lab in self.rgs:
            sizes[lab] += 1
        return sizes

    @property
    def signature(self) -> tuple[int, ...]:
        """Block-size multiset, sorted descending; the conjugation invariant."""
        return tuple(sorted(self.block_sizes(), reverse=True))

    def __str__(self) -> str:
        return "|".join(" ".join(map(str, b)) for b in self.blocks())

    def __repr__(self) -> str:
        return f"Partition({str(self)!r})"

    # -- monoid structure ---------------------------------------------

    def merge(self, i: int, j: int) -> "Partition":
        """Join the blocks holding 0-based elements ``i`` and ``j``.

        This is the product with the partition generated by the single
        transposition (i j).
        """
        rgs = self.rgs
        li, lj = rgs[i], rgs[j]
        if li == lj:
            return self
        lo, hi = (li, lj) if li < lj else (lj, li)
        # dropping block `hi` keeps first-appearance order of the others
        return Partition(tuple(lo if x == hi else (x - 1 if x > hi else x) for x in rgs))

    def __mul__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return product(self, other)

    def sort_key(self) -> tuple[int, ...]:
        """Lexicographic RGS key, used for every deterministic listing."""
        return self.rgs


def _same_n(a: Partition, b: Partition) -> None:
    if a.n != b.n:
        raise DomainError(f"partitions of different ground sets: n={a.n} vs n={b.n}")


def product(a: Partition, b: Partition) -> Partition:
    """Join of ``a`` and ``b`` in the partition lattice (finest common coarsening)."""
    _same_n(a, b)
    n = a.n
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for rgs in (a.rgs, b.rgs):
        first: dict[int, int] = {}
        for i, lab in enumerate(rgs):
            if lab in first:
                ri, rj = find(i), find(first[lab])
                if ri != rj:
                    parent[ri] = rj
            else:
                first[lab] = i
    return Partition.from_labels([find(i) for i in range(n)])


def is_trivial(a: Partition) -> bool:
    return a.is_trivial


def num_blocks(a: Partition) -> int:
    return a.num_blocks


def leq(a: Partition, b: Partition) -> bool:
    """True iff ``a`` refines ``b`` (every block of ``a`` lies inside a block of ``b``)."""
    _same_n(a, b)
    image: dict[int, int] = {}
    for la, lb in zip(a.rgs, b.rgs):
        if image.setdefault(la, lb) != lb:
            return False
    return True


def _check_permutation(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(sigma)
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise DomainError(f"{sigma} is not a permutation of 1..{n}")
    return sigma


def conjugate(sigma: Sequence[int], a: Partition) -> Partition:
    """Relabel ``a`` by the permutation ``sigma`` (1-based image array).

    Element ``i`` lies in block ``B`` of ``a`` iff ``sigma[i]`` lies in block
    ``sigma(B)`` of the result.
    """
    sigma = _check_permutation(sigma, a.n)
    labels = [0] * a.n
    for i, lab in enumerate(a.rgs):
        labels[sigma[i] - 1] = lab
    return Partition.from_labels(labels)


def bell_number(n: int) -> int:
    """Bell number via the Bell triangle."""
    if n < 0:
        raise DomainError("n must be non-negative")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _iter_rgs(n: int) -> Iterator[tuple[int, ...]]:
    rgs = [0] * n
    # prefix_max[i] = max(rgs[:i+1])
    prefix_max = [0] * n
    while True:
        yield tuple(rgs)
        i = n - 1
        while i > 0 and rgs[i] > prefix_max[i - 1]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        prefix_max[i] = max(prefix_max[i - 1], rgs[i])
        for k in range(i + 1, n):
            rgs[k] = 0
            prefix_max[k] = prefix_max[i]


def enumerate_partitions(n: int, max_n: int | None = None) -> list[Partition]:
    """All partitions of {1..n} in lexicographic RGS order."""
    check_size(n, max_n)
    return [Partition(r) for r in _iter_rgs(n)]


@dataclass(frozen=True)
class ConjugationClass:
    """An orbit of Part_n under relabelling; determined by its block-size signature."""

    signature: tuple[int, ...]
    members: tuple[Partition, ...]

    def __post_init__(self):
        if not self.members:
            raise DomainError("a conjugation class cannot be empty")
        for p in self.members:
            if p.signature != self.signature:
                raise DomainError(f"{p} does not have signature {self.signature}")

    @property
    def num_blocks(self) -> int:
        return len(self.signature)

    @property
    def representative(self) -> Partition:
        return self.members[0]

    def __len__(self) -> int:
        return len(self.members)


def _class_key(signature: tuple[int, ...]) -> tuple:
    # more blocks first (a linear extension of the class order), then signature
    return (-len(signature), signature)


def conjugation_classes(n: int, max_n: int | None = None) -> list[ConjugationClass]:
    """Conjugation classes of Part_n, listed compatibly with the induced class order."""
    groups: dict[tuple[int, ...], list[Partition]] = defaultdict(list)
    for p in enumerate_partitions(n, max_n):
        groups[p.signature].append(p)
    return [
        ConjugationClass(sig, tuple(groups[sig])) for sig in sorted(groups, key=_class_key)
    ]


def integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Integer partitions of ``n`` as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def class_size(signature: Sequence[int]) -> int:
    """Number of set partitions with the given block-size multiset (closed form)."""
    from math import factorial
    from collections import Counter

    total = factorial(sum(signature))
    for s in signature:
        total //= factorial(s)
    for mult in Counter(signature).values():
        total //= factorial(mult)
    return total


@dataclass(frozen=True)
class CoherentOrder:
    """A linear order of Part_n extending refinement, with conjugation classes contiguous.

    Build with :func:`coherent_order` or validate an arbitrary listing with
    :meth:`from_sequence`.
    """

    n: int
    sequence: tuple[Partition, ...]
    class_boundaries: tuple[tuple[int, int], ...] = field(repr=False)

    @classmethod
    def from_sequence(cls, partitions: Iterable[Partition], n: int | None = None) -> "CoherentOrder":
        seq = tuple(partitions)
        if not seq:
            raise OrderError("empty ordering")
        if n is None:
            n = seq[0].n
        if any(p.n != n for p in seq):
            raise OrderError("ordering mixes partitions of different ground sets")
        if len(set(seq)) != len(seq):
            raise OrderError("ordering lists a partition more than once")
        if len(seq) != bell_number(n):
            raise OrderError(f"ordering has {len(seq)} partitions, Part_{n} has {bell_number(n)}")

        # a strictly finer partition has strictly more blocks, so only pairs
        # (i < j) with more blocks at j can violate coherence
        for j, pj in enumerate(seq):
            mj = pj.num_blocks
            for i in range(j):
                pi = seq[i]
                if mj > pi.num_blocks and leq(pj, pi):
                    raise OrderError(f"{pj} is finer than {pi} but is listed after it")

        bounds: list[tuple[int, int]] = []
        seen: set[tuple[int, ...]] = set()
        start = 0
        for k in range(1, len(seq) + 1):
            if k == len(seq) or seq[k].signature != seq[start].signature:
                sig = seq[start].signature
                if sig in seen:
                    raise OrderError(f"conjugation class {sig} is not contiguous")
                seen.add(sig)
                bounds.append((start, k))
                start = k
        return cls(n, seq, tuple(bounds))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "CoherentOrder":
        """Read an ordering file: one partition text per line, blank/# lines ignored."""
        parts = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                parts.append(Partition.parse(line))
        if n is not None and parts and parts[0].n != n:
            raise OrderError(f"ordering is for n={parts[0].n}, expected n={n}")
        return cls.from_sequence(parts, n)

    def to_text(self) -> str:
        return "".join(f"{p}\n" for p in self.sequence)

    @cached_property
    def _index(self) -> dict[Partition, int]:
        return {p: i for i, p in enumerate(self.sequence)}

    def index(self, p: Partition) -> int:
        return self._index[p]

    def classes(self) -> list[ConjugationClass]:
        return [
            ConjugationClass(self.sequence[s].signature, self.sequence[s:e])
            for s, e in self.class_boundaries
        ]

    def __len__(self) -> int:
        return len(self.sequence)

    def __iter__(self) -> Iterator[Partition]:
        return iter(self.sequence)

    def __getitem__(self, i: int) -> Partition:
        return self.sequence[i]


def coherent_order(n: int, max_n: int | None = None) -> CoherentOrder:
    """The default coherent order: blocks descending, then signature, then RGS."""
    classes = conjugation_classes(n, max_n)
    return CoherentOrder.from_sequence([p for c in classes for p in c.members], n)
