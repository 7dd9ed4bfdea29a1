"""Finite ordered simplicial complexes, simplicial maps and spanning trees.

Vertices are the integers 0..N-1 and every simplex is stored as a strictly
increasing tuple, so each simplex carries the orientation induced by the
vertex order.  Complexes are required to be face-closed and connected; the
connectivity requirement is what lets a breadth-first spanning tree rooted at
vertex 0 serve as a global gauge for local systems.

Built-in models carry named loops (closed edge paths) together with winding
cocycles: rational 1-cocycles dual to those loops.  The winding data is what
turns a homotopy class of a loop into an exponent vector, which the
representation constructors use to fill in transports consistently.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DisconnectedComplexError,
    MapMismatchError,
    MapValidationError,
    MissingFaceError,
    NonIncreasingTupleError,
    SchemaError,
)


class Complex:
    """A finite, face-closed, connected, ordered simplicial complex."""

    def __init__(self, vertex_count, simplices_by_dim, named_loops=None,
                 loop_cocycles=None, name=None):
        self.vertex_count = vertex_count
        self.simplices = {
            n: tuple(sorted(simps)) for n, simps in simplices_by_dim.items() if simps
        }
        self.dimension = max(self.simplices, default=0)
        self.named_loops = dict(named_loops or {})
        self.loop_cocycles = dict(loop_cocycles or {})
        self.name = name
        self._sets = {n: frozenset(s) for n, s in self.simplices.items()}
        self._tree = None
        self._untwisted_spaces = {}

    @property
    def edges(self) -> tuple:
        return self.simplices.get(1, ())

    @property
    def triangles(self) -> tuple:
        return self.simplices.get(2, ())

    def simplices_of_dim(self, n: int) -> tuple:
        if n == 0:
            return tuple((v,) for v in range(self.vertex_count))
        return self.simplices.get(n, ())

    def has_simplex(self, simplex) -> bool:
        t = tuple(simplex)
        if len(t) == 1:
            return 0 <= t[0] < self.vertex_count
        return t in self._sets.get(len(t) - 1, frozenset())

    def neighbors(self, v: int) -> tuple:
        out = []
        for i, j in self.edges:
            if i == v:
                out.append(j)
            elif j == v:
                out.append(i)
        return tuple(sorted(out))

    def euler_characteristic(self) -> int:
        chi = self.vertex_count
        for n, simps in self.simplices.items():
            chi += (-1) ** n * len(simps)
        return chi

    def counts(self) -> tuple:
        return tuple(
            len(self.simplices_of_dim(n)) for n in range(self.dimension + 1)
        )

    def __eq__(self, other):
        return (
            isinstance(other, Complex)
            and self.vertex_count == other.vertex_count
            and self.simplices == other.simplices
        )

    __hash__ = None

    def __repr__(self):
        label = self.name or "complex"
        return f"Complex({label}, V={self.vertex_count}, counts={self.counts()})"


def validate_complex(vertex_count, simplices, named_loops=None,
                     loop_cocycles=None, name=None) -> Complex:
    """Check and build a complex, naming the first violation on failure."""
    if not isinstance(vertex_count, int) or vertex_count < 1:
        raise SchemaError("vertex count must be a positive integer")
    by_dim: dict = {}
    for simplex in simplices:
        t = tuple(simplex)
        if len(t) < 2:
            raise SchemaError(f"simplex {t} has fewer than two vertices")
        if any(not isinstance(v, int) for v in t):
            raise SchemaError(f"simplex {t} has non-integer vertices")
        if any(v < 0 or v >= vertex_count for v in t):
            raise SchemaError(f"simplex {t} has a vertex outside 0..{vertex_count - 1}")
        if any(a >= b for a, b in zip(t, t[1:])):
            raise NonIncreasingTupleError(
                f"simplex {t} is not strictly increasing", simplex=t
            )
        by_dim.setdefault(len(t) - 1, set()).add(t)

    for n in sorted(by_dim, reverse=True):
        if n < 2:
            continue
        for simplex in sorted(by_dim[n]):
            for i in range(len(simplex)):
                face = simplex[:i] + simplex[i + 1:]
                if face not in by_dim.get(n - 1, set()):
                    raise MissingFaceError(
                        f"simplex {simplex} is missing its face {face}",
                        simplex=simplex,
                        face=face,
                    )

    adjacency = {v: [] for v in range(vertex_count)}
    for i, j in sorted(by_dim.get(1, set())):
        adjacency[i].append(j)
        adjacency[j].append(i)
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != vertex_count:
        missing = min(set(range(vertex_count)) - seen)
        raise DisconnectedComplexError(
            f"vertex {missing} is not reachable from vertex 0", vertex=missing
        )

    c = Complex(
        vertex_count,
        {n: sorted(s) for n, s in by_dim.items()},
        named_loops=named_loops,
        loop_cocycles=loop_cocycles,
        name=name,
    )
    for loop_name, path in c.named_loops.items():
        path = tuple(path)
        if len(path) < 2 or path[0] != path[-1]:
            raise SchemaError(f"named loop {loop_name} is not a closed path")
        for u, w in zip(path, path[1:]):
            if u == w or not c.has_simplex((min(u, w), max(u, w))):
                raise SchemaError(
                    f"named loop {loop_name} uses a missing edge ({u}, {w})"
                )
        c.named_loops[loop_name] = path
    return c


def circle_model(n: int = 3) -> Complex:
    """The n-gon circle.  The loop `a` runs once around 0 -> 1 -> ... -> 0
    and its winding cocycle counts signed crossings of the wrap edge."""
    if n < 3:
        raise SchemaError("a circle model needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    loop = tuple(range(n)) + (0,)
    # traversing (n-1) -> 0 crosses the seam positively
    cocycle = {(0, n - 1): Fraction(-1)}
    return validate_complex(
        n,
        edges,
        named_loops={"a": loop},
        loop_cocycles={"a": cocycle},
        name=f"circle{n}",
    )


def torus_grid(rows: int = 3, cols: int = 3) -> Complex:
    """Grid triangulation of the torus with the given number of rows and
    columns, each square cell split along its down-right diagonal.  Loops:
    `a` runs along row 0, `b` down column 0.  Winding cocycles divide the
    per-edge column and row displacement by the grid period."""
    if rows < 3 or cols < 3:
        raise SchemaError("a torus grid needs at least 3 rows and 3 columns")

    def vid(r, c):
        return (r % rows) * cols + (c % cols)

    simplices = set()
    for r in range(rows):
        for c in range(cols):
            a = vid(r, c)
            b = vid(r, c + 1)
            d = vid(r + 1, c + 1)
            e = vid(r + 1, c)
            simplices.add(tuple(sorted((a, b))))
            simplices.add(tuple(sorted((a, e))))
            simplices.add(tuple(sorted((a, d))))
            simplices.add(tuple(sorted((a, b, d))))
            simplices.add(tuple(sorted((a, e, d))))

    col_cocycle = {}
    row_cocycle = {}
    for simplex in simplices:
        if len(simplex) != 2:
            continue
        u, v = simplex
        dc = (v % cols - u % cols) % cols
        dr = (v // cols - u // cols) % rows
        col_step = 1 if dc == 1 else (-1 if dc == cols - 1 else 0)
        row_step = 1 if dr == 1 else (-1 if dr == rows - 1 else 0)
        if col_step:
            col_cocycle[(u, v)] = Fraction(col_step, cols)
        if row_step:
            row_cocycle[(u, v)] = Fraction(row_step, rows)

    loop_a = tuple(vid(0, c) for c in range(cols)) + (0,)
    loop_b = tuple(vid(r, 0) for r in range(rows)) + (0,)
    return validate_complex(
        rows * cols,
        sorted(simplices),
        named_loops={"a": loop_a, "b": loop_b},
        loop_cocycles={"a": col_cocycle, "b": row_cocycle},
        name=f"torus{rows}x{cols}",
    )


def torus_model() -> Complex:
    """The standard 3x3 torus: 9 vertices, 27 edges, 18 triangles."""
    return torus_grid(3, 3)


def loop_pairing(cocycle: dict, path: Sequence[int]) -> Fraction:
    """Sum a sparse edge cocycle along a vertex path, respecting orientation."""
    total = Fraction(0)
    for u, v in zip(path, path[1:]):
        if u < v:
            total += cocycle.get((u, v), Fraction(0))
        else:
            total -= cocycle.get((v, u), Fraction(0))
    return total


class SpanningTree:
    """Breadth-first spanning tree rooted at vertex 0."""

    def __init__(self, root, parent, order, tree_edges):
        self.root = root
        self.parent = parent
        self.order = order
        self.tree_edges = tree_edges

    def path_from_root(self, v: int) -> tuple:
        path = []
        while True:
            path.append(v)
            if v == self.root:
                break
            v = self.parent[v]
        return tuple(reversed(path))


def spanning_tree(c: Complex) -> SpanningTree:
    """Deterministic BFS tree from vertex 0, neighbors taken in ascending
    order.  Cached on the complex."""
    if c._tree is not None:
        return c._tree
    adjacency = {v: [] for v in range(c.vertex_count)}
    for i, j in c.edges:
        adjacency[i].append(j)
        adjacency[j].append(i)
    for v in adjacency:
        adjacency[v].sort()
    parent = [-1] * c.vertex_count
    parent[0] = 0
    order = [0]
    tree_edges = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if parent[w] == -1:
                parent[w] = v
                order.append(w)
                tree_edges.add((min(v, w), max(v, w)))
                queue.append(w)
    tree = SpanningTree(0, tuple(parent), tuple(order), frozenset(tree_edges))
    c._tree = tree
    return tree


def non_tree_edges(c: Complex) -> tuple:
    tree = spanning_tree(c)
    return tuple(e for e in c.edges if e not in tree.tree_edges)


class SimplicialMap:
    """A vertex map sending every simplex onto a simplex of the target."""

    def __init__(self, source: Complex, target: Complex, vertex_map: Sequence[int]):
        self.source = source
        self.target = target
        self.vertex_map = tuple(vertex_map)

    def __call__(self, v: int) -> int:
        return self.vertex_map[v]

    def image_simplex(self, simplex) -> tuple:
        return tuple(sorted({self.vertex_map[v] for v in simplex}))

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialMap)
            and self.source == other.source
            and self.target == other.target
            and self.vertex_map == other.vertex_map
        )

    __hash__ = None

    def __repr__(self):
        return f"SimplicialMap({list(self.vertex_map)})"


def simplicial_map(source: Complex, target: Complex, vertex_map: Sequence[int]) -> SimplicialMap:
    vertex_map = tuple(vertex_map)
    if len(vertex_map) != source.vertex_count:
        raise MapValidationError("vertex map length does not match the source")
    if any(v < 0 or v >= target.vertex_count for v in vertex_map):
        raise MapValidationError("vertex map hits a vertex outside the target")
    f = SimplicialMap(source, target, vertex_map)
    for n in range(1, source.dimension + 1):
        for simplex in source.simplices_of_dim(n):
            image = f.image_simplex(simplex)
            if not target.has_simplex(image):
                raise MapValidationError(
                    f"image {image} of simplex {simplex} is not a target simplex",
                    simplex=simplex,
                    image=image,
                )
    return f


def identity_map(c: Complex) -> SimplicialMap:
    return SimplicialMap(c, c, tuple(range(c.vertex_count)))


def constant_map(source: Complex, target: Complex, v: int) -> SimplicialMap:
    return simplicial_map(source, target, [v] * source.vertex_count)


def compose(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    """The composite g after f."""
    if f.target != g.source:
        raise MapMismatchError("maps are not composable")
    return simplicial_map(f.source, g.target, [g(f(v)) for v in range(f.source.vertex_count)])


def contiguous(f: SimplicialMap, g: SimplicialMap) -> bool:
    """Whether f and g are contiguous: for every simplex s the union
    f(s) and g(s) spans a simplex of the target.  Contiguous maps are
    homotopic, and this is the discrete witness used throughout."""
    if f.source != g.source or f.target != g.target:
        raise MapMismatchError("contiguity needs a common source and target")
    for n in range(f.source.dimension + 1):
        for simplex in f.source.simplices_of_dim(n):
            union = tuple(sorted({f(v) for v in simplex} | {g(v) for v in simplex}))
            if len(union) > 1 and not f.target.has_simplex(union):
                return False
    return True
