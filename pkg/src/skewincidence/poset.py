"""Finite posets labeled by a linear extension.

Elements are the indices ``1..n`` and the labeling always satisfies
``leq(i, j) => i <= j``. Inputs that are not already labeled that way
are relabeled by a stable topological sort, and the permutation that
was applied is kept on the poset.

Text format (one cover per line, ``#`` starts a comment)::

    elements 3
    1 < 3
    2 < 3

"""

import functools
import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import networkx as nx
import numpy as np

from . import exceptions

log = logging.getLogger(__name__)


MAX_ENUMERATED_POSET_SIZE = 5


@dataclass(frozen=True)
class Interval:
    """The interval [x_lo, x_hi] and its members in label order."""

    lo: int
    hi: int
    members: tuple[int, ...]


class Poset:
    """An immutable finite poset on ``1..n``.

    Parameters
    ==========
    leq
      Square boolean matrix, ``leq[i-1, j-1]`` is true when x_i <= x_j.
    relabeling
      The permutation applied to reach this labeling from the input
      labeling: ``relabeling[old - 1] == new``. Identity if omitted.

    """

    def __init__(self, leq, relabeling: Optional[Sequence[int]] = None):
        matrix = np.array(leq, dtype=bool)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise exceptions.NotAPoset(f"Relation must be square, got {matrix.shape}")
        matrix.flags.writeable = False
        self.matrix = matrix
        self.n = matrix.shape[0]
        if relabeling is None:
            relabeling = range(1, self.n + 1)
        self.relabeling = tuple(relabeling)
        violations = self.check()
        if violations:
            raise exceptions.NotAPoset("; ".join(violations))

    def __eq__(self, other):
        return isinstance(other, Poset) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.n, self.matrix.tobytes()))

    def __repr__(self):
        covers = ", ".join(f"{i}<{j}" for i, j in self.covers())
        return f"<Poset n={self.n} [{covers}]>"

    @property
    def elements(self) -> range:
        return range(1, self.n + 1)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.matrix[i - 1, j - 1])

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    def check(self) -> list[str]:
        """Which partial order (or labeling) laws the matrix violates."""
        m = self.matrix
        violations = []
        if not m.diagonal().all():
            violations.append("relation is not reflexive")
        off_diagonal = m & ~np.eye(self.n, dtype=bool)
        if (off_diagonal & off_diagonal.T).any():
            violations.append("relation is not antisymmetric")
        if not np.array_equal(m @ m, m):
            violations.append("relation is not transitive")
        if np.tril(off_diagonal).any():
            violations.append("labeling is not a linear extension")
        return violations

    @functools.cached_property
    def comparable_pairs(self) -> tuple[tuple[int, int], ...]:
        """All (i, j) with x_i <= x_j, in lexicographic order."""
        rows, cols = np.nonzero(self.matrix)
        return tuple((int(i) + 1, int(j) + 1) for i, j in zip(rows, cols))

    def covers(self) -> list[tuple[int, int]]:
        """The cover pairs (i, j): x_i < x_j with nothing in between."""
        strict = self.matrix & ~np.eye(self.n, dtype=bool)
        covered = strict & ~(strict.astype(int) @ strict.astype(int)).astype(bool)
        rows, cols = np.nonzero(covered)
        return [(int(i) + 1, int(j) + 1) for i, j in zip(rows, cols)]

    def graph(self) -> nx.DiGraph:
        """The strict order relation as a directed graph on ``1..n``."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.elements)
        graph.add_edges_from((i, j) for i, j in self.comparable_pairs if i != j)
        return graph

    def interval(self, i: int, j: int) -> Interval:
        members = tuple(
            k for k in range(i, j + 1) if self.leq(i, k) and self.leq(k, j)
        )
        return Interval(lo=i, hi=j, members=members)

    @functools.cached_property
    def _length_table(self) -> np.ndarray:
        # Longest chain from x_i up to x_j, filled in label (topological) order
        n = self.n
        lengths = np.zeros((n + 1, n + 1), dtype=int)
        for i in self.elements:
            lengths[i, i] = 1
            for j in range(i + 1, n + 1):
                if not self.leq(i, j):
                    continue
                lengths[i, j] = 1 + max(
                    lengths[i, k]
                    for k in range(i, j)
                    if self.leq(i, k) and self.leq(k, j)
                )
        lengths.flags.writeable = False
        return lengths

    def interval_length(self, i: int, j: int) -> int:
        """Largest chain cardinality inside [x_i, x_j] (0 when x_i is not <= x_j)."""
        return int(self._length_table[i, j])

    def connected_components(self) -> list[tuple[int, ...]]:
        """Components of the comparability graph, canonically sorted."""
        graph = self.graph().to_undirected()
        components = [tuple(sorted(c)) for c in nx.connected_components(graph)]
        return sorted(components)

    def relabel(self, new_labels: Sequence[int]) -> "Poset":
        """A copy where old element ``i`` becomes ``new_labels[i - 1]``.

        The new labeling must still be a linear extension. The returned
        poset records the composite permutation from the original input.

        """
        new_labels = tuple(new_labels)
        if sorted(new_labels) != list(self.elements):
            raise ValueError(f"{new_labels} is not a permutation of 1..{self.n}")
        order = np.argsort(new_labels)  # position -> old index (0-based)
        matrix = self.matrix[np.ix_(order, order)]
        composite = tuple(new_labels[old - 1] for old in self.relabeling)
        return Poset(matrix, relabeling=composite)

    def linear_extensions(self) -> Iterator[tuple[int, ...]]:
        """Every compatible labeling, as ``new_labels`` for :py:meth:`relabel`."""
        for order in nx.all_topological_sorts(self.graph()):
            new_labels = [0] * self.n
            for position, old in enumerate(order, start=1):
                new_labels[old - 1] = position
            yield tuple(new_labels)

    def to_text(self) -> str:
        lines = [f"elements {self.n}"]
        lines.extend(f"{i} < {j}" for i, j in self.covers())
        return "\n".join(lines) + "\n"


def poset_from_covers(n: int, covers: Sequence[tuple[int, int]]) -> Poset:
    """Build a poset from cover (or any generating) pairs ``i < j``.

    If the natural order of the indices is not a linear extension, the
    elements are relabeled by a topological sort that breaks ties by
    original index, and the applied permutation is stored in
    ``Poset.relabeling``.

    Raises
    ======
    NotAPoset
      The pairs contain a cycle.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, n + 1))
    for i, j in covers:
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise exceptions.NotAPoset(f"Invalid pair {i} < {j} for {n} elements")
        graph.add_edge(i, j)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [tuple(edge[:2]) for edge in nx.find_cycle(graph)]
        raise exceptions.NotAPoset(f"Relation has a cycle: {cycle}", cycle=cycle)
    closure = nx.transitive_closure_dag(graph)
    order = list(nx.lexicographical_topological_sort(graph))
    new_labels = [0] * n
    for position, old in enumerate(order, start=1):
        new_labels[old - 1] = position
    if new_labels != list(range(1, n + 1)):
        log.warning(
            f"Input is not labeled by a linear extension, relabeling {new_labels}"
        )
    matrix = np.eye(n, dtype=bool)
    for i, j in closure.edges:
        matrix[new_labels[i - 1] - 1, new_labels[j - 1] - 1] = True
    return Poset(matrix, relabeling=new_labels)


def interval(p: Poset, i: int, j: int) -> Interval:
    return p.interval(i, j)


def interval_length(p: Poset, i: int, j: int) -> int:
    return p.interval_length(i, j)


def connected_components(p: Poset) -> list[tuple[int, ...]]:
    return p.connected_components()


def is_order_isomorphism(p: Poset, q: Poset, alpha: Sequence[int]) -> bool:
    """Whether ``i -> alpha[i - 1]`` is a bijection with x <= y <=> a(x) <= a(y)."""
    if p.n != q.n or sorted(alpha) != list(q.elements):
        return False
    order = np.array(alpha) - 1
    return np.array_equal(p.matrix, q.matrix[np.ix_(order, order)])


def compose_maps(first: Sequence[int], second: Sequence[int]) -> tuple[int, ...]:
    """The map ``second o first``."""
    return tuple(second[y - 1] for y in first)


def poset_isomorphisms(p: Poset, q: Poset) -> list[tuple[int, ...]]:
    """All order isomorphisms from *p* onto *q*, sorted.

    Each isomorphism is a tuple ``alpha`` with ``alpha[i - 1]`` the image
    of x_i. The search is VF2 backtracking on the strict order graphs,
    which only pairs candidates with matching in/out degrees.

    """
    if p.n != q.n or len(p.comparable_pairs) != len(q.comparable_pairs):
        return []
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(p.graph(), q.graph())
    found = []
    for mapping in matcher.isomorphisms_iter():
        found.append(tuple(mapping[i] for i in p.elements))
    return sorted(found)


def _degree_signature(matrix: np.ndarray) -> tuple:
    return (
        int(matrix.sum()),
        tuple(sorted(zip(matrix.sum(axis=0).tolist(), matrix.sum(axis=1).tolist()))),
    )


@functools.cache
def _poset_classes(n: int) -> tuple[Poset, ...]:
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    representatives = []
    buckets = defaultdict(list)
    for bits in itertools.product([False, True], repeat=len(upper)):
        matrix = np.eye(n, dtype=bool)
        for present, (i, j) in zip(bits, upper):
            matrix[i, j] = present
        if not np.array_equal(matrix @ matrix, matrix):
            continue
        candidate = Poset(matrix)
        bucket = buckets[_degree_signature(matrix)]
        if any(poset_isomorphisms(candidate, other) for other in bucket):
            continue
        bucket.append(candidate)
        representatives.append(candidate)
    log.debug(f"Found {len(representatives)} posets with {n} elements")
    return tuple(representatives)


def enumerate_posets(n: int) -> list[Poset]:
    """One representative per isomorphism class of *n*-element posets.

    Raises
    ======
    UnsupportedQuery
      *n* is larger than ``MAX_ENUMERATED_POSET_SIZE``.
    """
    if n > MAX_ENUMERATED_POSET_SIZE:
        raise exceptions.UnsupportedQuery(
            f"Enumerating posets with {n} elements is too expensive "
            f"(limit {MAX_ENUMERATED_POSET_SIZE})"
        )
    if n < 0:
        raise ValueError(f"Negative poset size {n}")
    return list(_poset_classes(n))
