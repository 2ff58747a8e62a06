"""All-terminal reliability of multigraphs with perfect nodes.

Edges fail independently, each operational with probability ``p``; the
reliability ``R(G)`` is the probability that the operational edges span a
connected subgraph.  Polynomials are exact, with integer coefficients in
``p``.

Self-loops never affect connectivity.  They are dropped on construction
and after every contraction, and only counted in ``dropped_loops``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Sequence

from .errors import DomainError, ParseError, SizeLimitError
from .partitions import Partition

__all__ = [
    "Multigraph",
    "Polynomial",
    "complete_graph",
    "quotient_graph",
    "reliability_polynomial",
    "mgr",
    "pathset_counts",
    "polynomial_from_pathsets",
    "alternating_sum",
    "alpha_via_reliability",
    "leading_term_complete",
    "complete_sign_exponent",
    "complete_leading_closed_form",
    "parse_graph",
    "format_graph",
]

RELIABILITY_MAX_EDGES = 40
PATHSET_MAX_EDGES = 24
COMPLETE_MAX_M = 8


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial in ``p``; ``coefficients[k]`` multiplies ``p**k``."""

    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coefficients)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(int(x) for x in c))

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        size = max(len(a), len(b))
        return Polynomial(tuple(self.coefficient(k) + other.coefficient(k) for k in range(size)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-x for x in self.coefficients))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial(tuple(other * x for x in self.coefficients))
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return Polynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        result = Polynomial.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, p):
        """Evaluate by Horner's rule; exact for ints and Fractions."""
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * p + c
        return acc

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coefficients]

    @classmethod
    def from_json(cls, data: Iterable) -> "Polynomial":
        return cls(tuple(int(x) for x in data))

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "p" if k == 1 else f"p^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


P = Polynomial((0, 1))
ONE = Polynomial.constant(1)
Q = ONE - P  # failure probability 1 - p


@dataclass(frozen=True)
class Multigraph:
    """Undirected loop-free multigraph on nodes ``0..node_count-1``.

    ``edges`` is a sorted tuple of ``((u, v), multiplicity)`` with ``u < v``.
    Use :meth:`from_edges` to build one from arbitrary input.
    """

    node_count: int
    edges: tuple[tuple[tuple[int, int], int], ...] = ()
    dropped_loops: int = 0

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[Sequence[int]], dropped_loops: int = 0) -> "Multigraph":
        """Build from ``(u, v)`` or ``(u, v, k)`` items with 0-based endpoints."""
        if node_count < 1:
            raise DomainError("a multigraph needs at least one node")
        acc: dict[tuple[int, int], int] = {}
        for e in edges:
            u, v = e[0], e[1]
            k = e[2] if len(e) > 2 else 1
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise DomainError(f"edge {(u, v)} has an endpoint outside 0..{node_count - 1}")
            if k < 1:
                raise DomainError(f"edge multiplicity must be >= 1, got {k}")
            if u == v:
                dropped_loops += k
                continue
            key = (u, v) if u < v else (v, u)
            acc[key] = acc.get(key, 0) + k
        return cls(node_count, tuple(sorted(acc.items())), dropped_loops)

    @property
    def edge_count(self) -> int:
        return sum(k for _, k in self.edges)

    def multiplicity(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        for e, k in self.edges:
            if e == key:
                return k
        return 0

    def is_connected(self) -> bool:
        parent = list(range(self.node_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = self.node_count
        for (u, v), _ in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                comps -= 1
        return comps == 1

    def delete_edge(self, u: int, v: int) -> "Multigraph":
        """Remove one copy of the edge ``{u, v}``."""
        key = (u, v) if u < v else (v, u)
        out = []
        found = False
        for e, k in self.edges:
            if e == key:
                found = True
                if k > 1:
                    out.append((e, k - 1))
            else:
                out.append((e, k))
        if not found:
            raise DomainError(f"no edge {key}")
        return Multigraph(self.node_count, tuple(out), self.dropped_loops)

    def contract_edge(self, u: int, v: int) -> "Multigraph":
        """Contract one copy of ``{u, v}``; the rest of that bundle becomes loops and is dropped."""
        if u == v:
            raise DomainError("cannot contract a loop")
        keep, gone = (u, v) if u < v else (v, u)
        k = self.multiplicity(keep, gone)
        if k == 0:
            raise DomainError(f"no edge {(keep, gone)}")

        def relabel(x: int) -> int:
            if x == gone:
                x = keep
            return x - 1 if x > gone else x

        moved = []
        for (a, b), m in self.edges:
            if (a, b) == (keep, gone):
                continue
            moved.append((relabel(a), relabel(b), m))
        return Multigraph.from_edges(self.node_count - 1, moved, self.dropped_loops + k - 1)

    def without_parallel(self, u: int, v: int) -> "Multigraph":
        """Same graph with the ``{u, v}`` bundle reduced to a single edge."""
        key = (u, v) if u < v else (v, u)
        return Multigraph(
            self.node_count,
            tuple((e, 1 if e == key else k) for e, k in self.edges),
            self.dropped_loops,
        )

    def edge_list(self) -> list[tuple[int, int]]:
        """Every parallel copy listed separately."""
        return [e for e, k in self.edges for _ in range(k)]


def complete_graph(n: int) -> Multigraph:
    if n < 1:
        raise DomainError("n must be >= 1")
    return Multigraph(n, tuple(((i, j), 1) for i, j in combinations(range(n), 2)))


def quotient_graph(n: int, a: Partition) -> Multigraph:
    """``K_n`` with the nodes of each block of ``a`` identified (block index = node)."""
    if a.n != n:
        raise DomainError(f"partition of {{1..{a.n}}} used with n={n}")
    sizes = a.block_sizes()
    m = len(sizes)
    edges = tuple(((i, j), sizes[i] * sizes[j]) for i, j in combinations(range(m), 2))
    return Multigraph(m, edges, sum(comb(s, 2) for s in sizes))


def _pick_edge(g: Multigraph, rng: random.Random | None) -> tuple[int, int]:
    if rng is not None:
        return rng.choice(g.edge_list())
    best = max(k for _, k in g.edges)
    return next(e for e, k in g.edges if k == best)


def reliability_polynomial(
    g: Multigraph,
    max_edges: int = RELIABILITY_MAX_EDGES,
    rng: random.Random | None = None,
    memoize: bool = False,
) -> Polynomial:
    """Exact all-terminal reliability by deletion-contraction.

    ``R(G) = p R(G.a) + (1 - p) R(G - a)`` on an edge ``a`` of a
    highest-multiplicity bundle (or a random edge when ``rng`` is given).
    """
    if g.node_count < 1:
        raise DomainError("empty graph")
    if g.edge_count > max_edges:
        raise SizeLimitError(f"{g.edge_count} edges exceeds the cap {max_edges}")
    memo: dict | None = {} if memoize else None

    def rec(h: Multigraph) -> Polynomial:
        if h.node_count == 1:
            return ONE
        if not h.is_connected():
            return Polynomial()
        if memo is not None:
            key = (h.node_count, h.edges)
            if key in memo:
                return memo[key]
        u, v = _pick_edge(h, rng)
        r = P * rec(h.contract_edge(u, v)) + Q * rec(h.delete_edge(u, v))
        if memo is not None:
            memo[key] = r
        return r

    return rec(g)


def mgr(r: Polynomial, edge_count: int) -> tuple[int, int]:
    """The ``(coefficient, degree)`` of the term of ``r`` at degree ``edge_count``."""
    if r.degree > edge_count:
        raise DomainError(f"polynomial degree {r.degree} exceeds edge count {edge_count}")
    return r.coefficient(edge_count), edge_count


def pathset_counts(g: Multigraph, max_edges: int = PATHSET_MAX_EDGES) -> list[int]:
    """``C[i]`` = number of ``i``-edge subsets (parallel copies distinct) spanning a connected subgraph.

    Brute force over all ``2**E`` subsets.
    """
    edges = g.edge_list()
    E = len(edges)
    if E > max_edges:
        raise SizeLimitError(f"{E} edges exceeds the brute-force cap {max_edges}")
    counts = [0] * (E + 1)
    n = g.node_count
    for mask in range(1 << E):
        parent = list(range(n))
        comps = n
        bits = mask
        idx = 0
        while bits:
            if bits & 1:
                u, v = edges[idx]
                while parent[u] != u:
                    u = parent[u]
                while parent[v] != v:
                    v = parent[v]
                if u != v:
                    parent[u] = v
                    comps -= 1
            bits >>= 1
            idx += 1
        if comps == 1:
            counts[bin(mask).count("1")] += 1
    return counts


def polynomial_from_pathsets(counts: Sequence[int]) -> Polynomial:
    """``sum_i C_i p^i (1-p)^(E-i)`` with ``E = len(counts) - 1``."""
    E = len(counts) - 1
    total = Polynomial()
    for i, c in enumerate(counts):
        if c:
            total = total + (P**i) * (Q ** (E - i)) * c
    return total


def alternating_sum(counts: Sequence[int]) -> int:
    """``C_0 - C_1 + C_2 - ...``"""
    return sum(c if i % 2 == 0 else -c for i, c in enumerate(counts))


def alpha_via_reliability(n: int, a: Partition, max_edges: int = RELIABILITY_MAX_EDGES) -> int:
    """Connectivity number read off the top coefficient of ``R(K_n^a)``.

    ``(-1)**g`` times the coefficient of ``p**g``, ``g`` the loop-free edge count.
    """
    g = quotient_graph(n, a)
    r = reliability_polynomial(g, max_edges=max_edges)
    coeff, deg = mgr(r, g.edge_count)
    return -coeff if deg % 2 else coeff


def leading_term_complete(m: int, max_m: int = COMPLETE_MAX_M) -> int:
    """Coefficient of ``p**C(m,2)`` in ``R(K_m)``."""
    if m < 1:
        raise DomainError("m must be >= 1")
    if m > max_m:
        raise SizeLimitError(f"m={m} exceeds the cap {max_m}")
    g = complete_graph(m)
    return mgr(reliability_polynomial(g), g.edge_count)[0]


def complete_sign_exponent(m: int) -> int:
    """Exponent ``m + (m-1) + ... + 2`` of -1 in the closed form of ``mgr(K_m)``."""
    return sum(range(2, m + 1))


def complete_leading_closed_form(m: int) -> int:
    return (-1) ** complete_sign_exponent(m) * factorial(m - 1)


def parse_graph(text: str) -> Multigraph:
    """Read the graph file format.

    First significant line: node count.  Then one ``u v k`` line per bundle
    (1-based endpoints, multiplicity ``k >= 1``; ``k`` may be omitted).
    Blank lines and ``#`` comments are ignored.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ParseError("graph file is empty")
    try:
        node_count = int(lines[0][1])
    except ValueError as exc:
        raise ParseError(f"line {lines[0][0]}: expected a node count") from exc
    if node_count < 1:
        raise ParseError("node count must be >= 1")
    edges = []
    for lineno, line in lines[1:]:
        toks = line.split()
        if len(toks) not in (2, 3):
            raise ParseError(f"line {lineno}: expected 'u v k'")
        try:
            u, v, *rest = (int(t) for t in toks)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer field") from exc
        k = rest[0] if rest else 1
        if not (1 <= u <= node_count and 1 <= v <= node_count) or k < 1:
            raise ParseError(f"line {lineno}: endpoint or multiplicity out of range")
        edges.append((u - 1, v - 1, k))
    return Multigraph.from_edges(node_count, edges)


def format_graph(g: Multigraph) -> str:
    out = [str(g.node_count)]
    out += [f"{u + 1} {v + 1} {k}" for (u, v), k in g.edges]
    return "\n".join(out) + "\n"

