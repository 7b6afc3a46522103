"""Exact functional graphs over GF(q^2) and their canonical signatures.

A functional graph is stored as a flat successor array over all q^2 states,
state (x, y) living at index x*q + y.  Decomposition splits it into connected
components, each a cycle with rooted trees hanging at the cycle nodes.

Isomorphism currency:
  * a rooted tree is encoded as a nested-parentheses string with children
    sorted (equal strings iff the rooted trees are isomorphic);
  * a component is its cycle length plus the tuple of tree encodings around
    the cycle, rotated to the lexicographically least rotation (reflections
    are not allowed: edges are directed);
  * a graph signature is the multiset of component shapes.

Two functional graphs are isomorphic exactly when their signatures are equal,
which is how brute-force results are compared against predicted
decompositions.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .dynamics import MapParams

DEFAULT_MAX_Q = 2048
MAX_Q_ENV = "QUADGRAPH_MAX_Q"

TreeShape = str
LEAF: TreeShape = "()"


class ResourceLimitError(RuntimeError):
    """Raised when a graph build would exceed the configured state budget."""


def max_q_limit() -> int:
    value = os.environ.get(MAX_Q_ENV)
    if value is None:
        return DEFAULT_MAX_Q
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{MAX_Q_ENV} must be an integer, got {value!r}") from None


class FunctionalGraph:
    """Successor array over all q^2 states of one map instance."""

    def __init__(self, params: MapParams, successor: np.ndarray):
        self.params = params
        self.successor = successor
        self.q = params.q
        self.n = params.q * params.q

    def encode(self, x: int, y: int) -> int:
        return (x % self.q) * self.q + (y % self.q)

    def decode(self, state: int) -> tuple[int, int]:
        return divmod(state, self.q)

    def in_degrees(self) -> np.ndarray:
        """Preimage count per state (the brute-force preimage table)."""
        return np.bincount(self.successor, minlength=self.n)

    def __repr__(self) -> str:
        return f"FunctionalGraph({self.params.describe()})"


def build_graph(
    params: MapParams,
    *,
    backend: str | None = None,
    max_q: int | None = None,
) -> FunctionalGraph:
    """Fill the complete successor array for one (q, a, c, b) instance."""
    limit = max_q if max_q is not None else max_q_limit()
    if params.q > limit:
        raise ResourceLimitError(
            f"q={params.q} exceeds the graph-build limit {limit} "
            f"(override with {MAX_Q_ENV} or max_q)"
        )
    succ = _kernels.build_successors(
        params.q, params.a_int, params.c_int, params.b, backend=backend
    )
    return FunctionalGraph(params, succ)


# ---------------------------------------------------------------------------
# canonical rooted-tree encodings


def tree_encoding(root: int, children: Mapping[int, Sequence[int]]) -> TreeShape:
    """Canonical encoding of the rooted tree below `root`.

    Children maps each node to its child list; missing nodes are leaves.
    Iterative post-order, so chain depth is not limited by the Python stack.
    This is the reference encoder; the kernels intern the same shapes
    bottom-up and must agree with it.
    """
    done: dict[int, str] = {}
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        kids = children.get(node, ())
        if not expanded and kids:
            stack.append((node, True))
            stack.extend((k, False) for k in kids)
            continue
        done[node] = "(" + "".join(sorted(done[k] for k in kids)) + ")"
    return done[root]


def _perfect_binary(depth: int) -> TreeShape:
    enc = LEAF
    for _ in range(depth):
        enc = f"({enc}{enc})"
    return enc


@lru_cache(maxsize=None)
def t_shape(m: int) -> TreeShape:
    """T(m): the hanging tree with 2^m nodes counting its root.

    T(0) is a bare root; T(1) is root plus one child; T(m+1) doubles the
    last level by giving every deepest node two children.  Equivalently the
    root carries a single perfect binary subtree of depth m-1.
    """
    if m < 0:
        raise ValueError("tree depth must be >= 0")
    if m == 0:
        return LEAF
    return f"({_perfect_binary(m - 1)})"


def star_shape(leaves: int) -> TreeShape:
    """Root with `leaves` childless children."""
    return "(" + LEAF * leaves + ")"


def z_shape(q: int) -> TreeShape:
    """Tree hanging at 0 for a = -1: (q-1)/2 bare hairs and (q-1)/2 hairs
    that each carry two childless nodes (2q-1 nodes with the root)."""
    k = (q - 1) // 2
    return "(" + "".join(sorted([LEAF] * k + [star_shape(2)] * k)) + ")"


def zstar_shape(q: int) -> TreeShape:
    """Tree hanging at 0 for a = +1: q-1 bare hairs (q nodes with the root)."""
    return star_shape(q - 1)


def shape_size(enc: TreeShape) -> int:
    """Node count of an encoded tree (each node contributes one '(')."""
    return enc.count("(")


def t_depth(enc: TreeShape) -> int | None:
    """Inverse of t_shape: the m with enc == T(m), or None."""
    size = shape_size(enc)
    m = size.bit_length() - 1
    if 1 << m != size:
        return None
    return m if t_shape(m) == enc else None


# ---------------------------------------------------------------------------
# component shapes and graph signatures


def least_rotation_index(seq: Sequence) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    n = len(seq)
    if n <= 1:
        return 0
    doubled = list(seq) + list(seq)
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        item = doubled[j]
        i = fail[j - k - 1]
        while i != -1 and item != doubled[k + i + 1]:
            if item < doubled[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if item != doubled[k + i + 1]:
            if item < doubled[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


def minimal_rotation(seq: Sequence) -> tuple:
    k = least_rotation_index(seq)
    return tuple(seq[k:]) + tuple(seq[:k])


@dataclass(frozen=True, order=True)
class ComponentShape:
    """Cycle length plus the rotation-minimal tuple of hanging-tree shapes."""

    cycle_length: int
    trees: tuple[TreeShape, ...]

    def __post_init__(self) -> None:
        if len(self.trees) != self.cycle_length:
            raise ValueError("one tree shape per cycle node required")

    @classmethod
    def canonical(cls, trees: Sequence[TreeShape]) -> ComponentShape:
        return cls(len(trees), minimal_rotation(trees))

    @classmethod
    def uniform(cls, cycle_length: int, tree: TreeShape) -> ComponentShape:
        return cls(cycle_length, (tree,) * cycle_length)

    @property
    def size(self) -> int:
        """Total node count (tree sizes already include the cycle nodes)."""
        return sum(shape_size(t) for t in self.trees)


@dataclass(frozen=True)
class GraphSignature:
    """Sorted multiset of component shapes; equality means graph isomorphism."""

    items: tuple[tuple[ComponentShape, int], ...]

    @classmethod
    def from_shapes(cls, shapes: Iterable[ComponentShape]) -> GraphSignature:
        counts = Counter(shapes)
        return cls(tuple(sorted(counts.items())))

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[ComponentShape, int]]
    ) -> GraphSignature:
        counts: Counter = Counter()
        for shape, mult in pairs:
            counts[shape] += mult
        return cls(tuple(sorted(counts.items())))

    def total_nodes(self) -> int:
        return sum(shape.size * mult for shape, mult in self.items)

    def component_count(self) -> int:
        return sum(mult for _, mult in self.items)

    def cycle_census(self) -> dict[int, int]:
        """Cycle length -> number of cycles of that length."""
        census: Counter = Counter()
        for shape, mult in self.items:
            census[shape.cycle_length] += mult
        return dict(sorted(census.items()))

    def describe(self, q: int | None = None) -> str:
        """Direct-sum notation, recognized named shapes first."""
        parts = []
        for shape, mult in sorted(
            self.items, key=lambda it: (_name_rank(it[0], q), it[0])
        ):
            name = component_name(shape, q)
            if name.startswith(("Z(", "Z*(")) and mult == 1:
                parts.append(name)
            else:
                parts.append(f"{mult}×{name}")
        return " ⊕ ".join(parts)


def _name_rank(shape: ComponentShape, q: int | None) -> int:
    name = component_name(shape, q)
    return 0 if name.startswith(("Z(", "Z*(")) else 1


def component_name(shape: ComponentShape, q: int | None = None) -> str:
    """Readable name: Z(q), Z*(q), (Cyc(n),T(m)), or a generic size listing."""
    if q is not None and shape.cycle_length == 1:
        if shape.trees[0] == z_shape(q):
            return f"Z({q})"
        if shape.trees[0] == zstar_shape(q):
            return f"Z*({q})"
    first = shape.trees[0]
    if all(t == first for t in shape.trees):
        m = t_depth(first)
        if m is not None:
            return f"(Cyc({shape.cycle_length}),T({m}))"
    sizes = ",".join(str(shape_size(t)) for t in shape.trees[:8])
    if shape.cycle_length > 8:
        sizes += ",..."
    return f"(Cyc({shape.cycle_length}),sizes[{sizes}])"


def signature_equal(s1: GraphSignature, s2: GraphSignature) -> bool:
    """True iff the two functional graphs are isomorphic."""
    return s1 == s2


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Decomposition:
    """Full structure of one graph: cycles, membership, canonical signature."""

    graph: FunctionalGraph
    cycles: list[np.ndarray]
    periodic: np.ndarray  # sorted state indices lying on cycles
    component_of: np.ndarray  # state -> component id (cycle discovery order)
    component_shapes: list[ComponentShape]  # per component id
    signature: GraphSignature

    def component_sizes(self) -> np.ndarray:
        return np.bincount(self.component_of, minlength=len(self.cycles))

    def component_of_state(self, state: int) -> int:
        return int(self.component_of[state])

    def shape_of_state(self, state: int) -> ComponentShape:
        return self.component_shapes[self.component_of_state(state)]


def decompose(graph: FunctionalGraph, *, backend: str | None = None) -> Decomposition:
    """Split the graph into components and canonicalize every shape.

    The kernel returns interned child-id tables; shape ids are assigned
    children-first, so a single increasing-id pass converts them into
    canonical strings without recursion.
    """
    cycles, component_of, root_shapes, shape_children = (
        _kernels.decompose_successors(graph.successor, backend=backend)
    )
    enc: list[TreeShape] = []
    for kids in shape_children:
        enc.append("(" + "".join(sorted(enc[k] for k in kids)) + ")")

    shapes = [
        ComponentShape.canonical([enc[sid] for sid in roots])
        for roots in root_shapes
    ]
    periodic = np.sort(np.concatenate(cycles)) if cycles else np.empty(0, np.int64)
    return Decomposition(
        graph=graph,
        cycles=cycles,
        periodic=periodic,
        component_of=component_of,
        component_shapes=shapes,
        signature=GraphSignature.from_shapes(shapes),
    )


# ---------------------------------------------------------------------------
# DOT export


def to_dot(
    graph: FunctionalGraph,
    *,
    component: tuple[int, int] | int | None = None,
    labels: str = "coords",
) -> str:
    """Graphviz text for the graph, optionally restricted to one component.

    `component` selects the component containing the given state (either a
    state index or an (x, y) pair).  Output is deterministic: nodes and edges
    appear in state-index order.
    """
    if labels not in ("coords", "beta"):
        raise ValueError("labels must be 'coords' or 'beta'")
    q = graph.q
    include = None
    if component is not None:
        state = (
            graph.encode(*component) if isinstance(component, tuple) else component
        )
        dec = decompose(graph)
        include = dec.component_of == dec.component_of_state(state)

    def label(state: int) -> str:
        x, y = divmod(state, q)
        if labels == "coords":
            return f"({x},{y})"
        return f"{x}+{y}β"

    lines = [
        "digraph quadgraph {",
        f'  // {graph.params.describe()}',
        "  node [shape=circle];",
    ]
    for state in range(graph.n):
        if include is not None and not include[state]:
            continue
        lines.append(f'  {state} [label="{label(state)}"];')
    for state in range(graph.n):
        if include is not None and not include[state]:
            continue
        lines.append(f"  {state} -> {int(graph.successor[state])};")
    lines.append("}")
    return "\n".join(lines) + "\n"
