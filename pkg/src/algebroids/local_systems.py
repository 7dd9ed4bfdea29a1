"""Flat local systems of rational vector spaces on a simplicial complex.

A local system assigns to every edge (i, j) with i < j an invertible rational
matrix T(i, j), read as the parallel transport carrying the fiber at j to the
fiber at i.  Flatness is the triangle condition

    T(i, j) * T(j, k) = T(i, k)   for every triangle i < j < k,

which is exactly what makes the twisted coboundary square to zero.

Transport along a directed step u -> v means the matrix carrying the fiber at
v back to the fiber at u, so transport along a path multiplies step matrices
left to right and a closed loop based at vertex 0 gets a well-defined
holonomy in GL of the fiber there.  The breadth-first spanning tree fixes the
gauge: tree edges carry the identity, and each non-tree edge carries the
holonomy of the loop it closes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import Complex, SimplicialMap, loop_pairing, non_tree_edges, spanning_tree
from .errors import (
    BaseMismatchError,
    InputError,
    NotFlatError,
    RelationViolationError,
    SingularMatrixError,
    UnknownGeneratorError,
    UnsupportedRankError,
)
from .linalg import Matrix, RATIONALS, rref


def _as_matrix(value, rank=None) -> Matrix:
    if isinstance(value, Matrix):
        m = value
    elif isinstance(value, (int, Fraction)):
        m = Matrix([[value]])
    else:
        m = Matrix(value)
    if m.rows != m.cols:
        raise InputError("transport matrices must be square")
    if rank is not None and m.rows != rank:
        raise InputError(f"expected a {rank}x{rank} matrix, got {m.rows}x{m.cols}")
    return m


def _require_invertible(m: Matrix, label) -> None:
    if rref(m)[0] != m.rows:
        raise SingularMatrixError(f"transport for {label} is singular", generator=str(label))


class LocalSystem:
    """Edge transports over a fixed base complex.  Immutable by convention."""

    def __init__(self, base: Complex, rank: int, transport: Mapping):
        if rank < 1:
            raise UnsupportedRankError("fiber dimension must be at least 1")
        missing = [e for e in base.edges if e not in transport]
        if missing:
            raise InputError(f"no transport given for edge {missing[0]}")
        self.base = base
        self.rank = rank
        self.transport = {e: transport[e] for e in base.edges}
        self._inverses = {}

    @classmethod
    def build(cls, base: Complex, rank: int, transport: Mapping) -> "LocalSystem":
        """Coerce, size-check and invertibility-check raw transport data."""
        fixed = {}
        for e, value in transport.items():
            m = _as_matrix(value, rank)
            _require_invertible(m, e)
            fixed[tuple(e)] = m
        return cls(base, rank, fixed)

    def matrix(self, i: int, j: int) -> Matrix:
        """Transport along the increasing edge (i, j), fiber j to fiber i."""
        return self.transport[(i, j)]

    def _inverse(self, edge) -> Matrix:
        inv = self._inverses.get(edge)
        if inv is None:
            inv = self.transport[edge].inverse()
            self._inverses[edge] = inv
        return inv

    def step(self, u: int, w: int) -> Matrix:
        """Transport carrying the fiber at w to the fiber at u, for w either
        equal to u or joined to it by an edge."""
        if u == w:
            return Matrix.identity(self.rank)
        if u < w:
            return self.transport[(u, w)]
        return self._inverse((w, u))

    def transport_along(self, path: Sequence[int]) -> Matrix:
        """Composite transport carrying the fiber at path[-1] to path[0]."""
        out = Matrix.identity(self.rank)
        for u, w in zip(path, path[1:]):
            out = out * self.step(u, w)
        return out

    def with_edge(self, edge, value) -> "LocalSystem":
        """Copy of the system with one edge transport replaced."""
        edge = tuple(edge)
        if edge not in self.transport:
            raise UnknownGeneratorError(f"{edge} is not an edge of the base")
        m = _as_matrix(value, self.rank)
        _require_invertible(m, edge)
        new = dict(self.transport)
        new[edge] = m
        return LocalSystem(self.base, self.rank, new)

    def __eq__(self, other):
        return (
            isinstance(other, LocalSystem)
            and self.base == other.base
            and self.rank == other.rank
            and self.transport == other.transport
        )

    __hash__ = None

    def __repr__(self):
        return f"LocalSystem(rank={self.rank}, base={self.base!r})"


def trivial_system(c: Complex, rank: int = 1) -> LocalSystem:
    ident = Matrix.identity(rank)
    return LocalSystem(c, rank, {e: ident for e in c.edges})


def check_flat(L: LocalSystem) -> list:
    """All triangles violating the transport composition law."""
    bad = []
    for i, j, k in L.base.triangles:
        if L.matrix(i, j) * L.matrix(j, k) != L.matrix(i, k):
            bad.append((i, j, k))
    return bad


def is_flat(L: LocalSystem) -> bool:
    return not check_flat(L)


def _edge_loop(tree, i: int, j: int) -> tuple:
    """The based loop closed by the non-tree edge (i, j): out along the tree
    to i, across the edge, back along the tree from j."""
    out = tree.path_from_root(i)
    back = tree.path_from_root(j)
    return out + (j,) + tuple(reversed(back))[1:]


def _edge_exponents(c: Complex, tree, edge, names) -> dict:
    """Winding numbers of the loop closed by a non-tree edge, one per named
    loop with winding data."""
    loop = _edge_loop(tree, *edge)
    out = {}
    for name in names:
        cocycle = c.loop_cocycles.get(name)
        if cocycle is None:
            raise UnknownGeneratorError(
                f"complex has no winding data for generator {name!r}", generator=name
            )
        value = loop_pairing(cocycle, loop)
        if value.denominator != 1:
            raise InputError(f"winding of edge {edge} against {name!r} is fractional")
        out[name] = int(value)
    return out


def from_representation(c: Complex, images: Mapping, rank: int | None = None) -> LocalSystem:
    """Build a flat system in tree gauge from generator images.

    Keys may be named loops of the base model (their images propagate to all
    non-tree edges through winding numbers) or explicit non-tree edges, which
    override.  Tree edges carry the identity.  The triangle relations are
    verified at the end and violations are reported, never repaired.

    A Holonomy object is accepted in place of the mapping, making the
    holonomy round trip a one-liner.
    """
    if isinstance(images, Holonomy):
        images = images.generator_images
    named = {}
    explicit = {}
    for key, value in images.items():
        if isinstance(key, str):
            if key not in c.named_loops:
                raise UnknownGeneratorError(
                    f"unknown generator name {key!r}", generator=key
                )
            named[key] = value
        else:
            edge = tuple(key)
            if len(edge) != 2 or not c.has_simplex(edge):
                raise UnknownGeneratorError(
                    f"{edge} is not an edge of the base", generator=str(edge)
                )
            explicit[edge] = value

    matrices = {k: _as_matrix(v) for k, v in {**named, **explicit}.items()}
    if matrices:
        ranks = {m.rows for m in matrices.values()}
        if len(ranks) > 1:
            raise InputError("generator images have mixed sizes")
        inferred = ranks.pop()
        if rank is not None and rank != inferred:
            raise InputError(f"expected rank {rank}, images have rank {inferred}")
        rank = inferred
    elif rank is None:
        rank = 1
    for key, m in matrices.items():
        _require_invertible(m, key)

    tree = spanning_tree(c)
    if explicit:
        for edge in explicit:
            if edge in tree.tree_edges:
                raise UnknownGeneratorError(
                    f"edge {edge} is a tree edge and is gauge-fixed to the identity",
                    generator=str(edge),
                )

    ident = Matrix.identity(rank)
    names = sorted(named)
    transport = {}
    for edge in c.edges:
        if edge in tree.tree_edges:
            transport[edge] = ident
            continue
        m = ident
        if names:
            exponents = _edge_exponents(c, tree, edge, names)
            for name in names:
                e = exponents[name]
                if e:
                    m = m * matrices[name].power(e)
        transport[edge] = m
    for edge, value in explicit.items():
        transport[edge] = matrices[edge]

    L = LocalSystem(c, rank, transport)
    violations = check_flat(L)
    if violations:
        raise RelationViolationError(
            "generator images violate the triangle relations",
            triangles=violations,
        )
    return L


class Holonomy:
    """Holonomy of a flat system: one matrix per non-tree edge, each the
    transport around the based loop that edge closes."""

    def __init__(self, base, rank, tree, generator_images, relations_checked=True):
        self.base = base
        self.rank = rank
        self.tree = tree
        self.generator_images = generator_images
        self.relations_checked = relations_checked

    def __repr__(self):
        return f"Holonomy({len(self.generator_images)} generators, rank={self.rank})"


def holonomy(L: LocalSystem) -> Holonomy:
    violations = check_flat(L)
    if violations:
        raise NotFlatError("system is not flat", triangles=violations)
    tree = spanning_tree(L.base)
    images = {}
    for edge in non_tree_edges(L.base):
        images[edge] = L.transport_along(_edge_loop(tree, *edge))
    return Holonomy(L.base, L.rank, tree, images)


def holonomy_around(L: LocalSystem, path: Sequence[int]) -> Matrix:
    """Transport around an arbitrary closed vertex path."""
    path = tuple(path)
    if len(path) < 2 or path[0] != path[-1]:
        raise InputError("holonomy needs a closed path")
    return L.transport_along(path)


def gauge_transform(L: LocalSystem, frames) -> LocalSystem:
    """Change the frame at every vertex: T'(i, j) = g_i T(i, j) g_j^{-1}.
    Gauge transforms preserve flatness and all cohomology."""
    g = {}
    for v in range(L.base.vertex_count):
        value = frames[v]
        m = _as_matrix(value, L.rank)
        _require_invertible(m, f"vertex {v}")
        g[v] = m
    transport = {
        (i, j): g[i] * L.matrix(i, j) * g[j].inverse() for i, j in L.base.edges
    }
    return LocalSystem(L.base, L.rank, transport)


def dual(L: LocalSystem) -> LocalSystem:
    """The dual system: transports become inverse transposes, so the pairing
    of a dual section against a section is transport-invariant."""
    transport = {
        e: L.transport[e].inverse().transpose() for e in L.base.edges
    }
    return LocalSystem(L.base, L.rank, transport)


def tensor_system(L1: LocalSystem, L2: LocalSystem) -> LocalSystem:
    if L1.base != L2.base:
        raise BaseMismatchError("tensor product needs a common base")
    transport = {e: L1.transport[e].kron(L2.transport[e]) for e in L1.base.edges}
    return LocalSystem(L1.base, L1.rank * L2.rank, transport)


def tensor_power(L: LocalSystem, k: int) -> LocalSystem:
    # fold left, starting from the trivial line
    if k < 0:
        raise InputError("tensor power needs a nonnegative exponent")
    out = trivial_system(L.base, 1)
    for _ in range(k):
        out = tensor_system(out, L)
    return out


def _sym_monomials(rank: int, k: int) -> list:
    return list(itertools.combinations_with_replacement(range(rank), k))


def _sym_matrix(m: Matrix, k: int) -> Matrix:
    """Induced action on the k-th symmetric power, in the monomial basis
    ordered by combinations_with_replacement.  Multiplicative in m, so
    flatness is preserved."""
    r = m.rows
    monomials = _sym_monomials(r, k)
    index = {w: i for i, w in enumerate(monomials)}
    columns = []
    for word in monomials:
        poly = {(): Fraction(1)}
        for letter in word:
            new = {}
            for partial, coeff in poly.items():
                for out_index in range(r):
                    factor = m.entries[out_index][letter]
                    if factor == 0:
                        continue
                    key = tuple(sorted(partial + (out_index,)))
                    new[key] = new.get(key, Fraction(0)) + coeff * factor
            poly = new
        col = [Fraction(0)] * len(monomials)
        for key, coeff in poly.items():
            col[index[key]] = coeff
        columns.append(col)
    return Matrix(list(zip(*columns)) if monomials else [], cols=len(monomials))


def sym_power(L: LocalSystem, k: int) -> LocalSystem:
    """The k-th symmetric power.  For k = 0 this is the trivial line, and
    sym_power(L, 1) returns transports equal to those of L."""
    if k < 0:
        raise InputError("symmetric power needs a nonnegative exponent")
    transport = {e: _sym_matrix(L.transport[e], k) for e in L.base.edges}
    rank = len(_sym_monomials(L.rank, k))
    return LocalSystem(L.base, rank, transport)


def pullback_system(f: SimplicialMap, L: LocalSystem) -> LocalSystem:
    """Pull transports back along a simplicial map.  An edge collapsed by f
    carries the identity; otherwise it inherits the transport between the
    image vertices, oriented by the map rather than the vertex order."""
    if f.target != L.base:
        raise BaseMismatchError("map target does not match the system's base")
    transport = {}
    for i, j in f.source.edges:
        transport[(i, j)] = L.step(f(i), f(j))
    return LocalSystem(f.source, L.rank, transport)


def iso_rank1(L1: LocalSystem, L2: LocalSystem) -> bool:
    """Gauge-equivalence test for flat line systems: equality of holonomy on
    every non-tree generator.  Conjugation is invisible in rank 1, so this is
    a complete invariant there; higher rank is rejected."""
    if L1.rank != 1 or L2.rank != 1:
        raise UnsupportedRankError("isomorphism testing is limited to rank 1")
    if L1.base != L2.base:
        raise BaseMismatchError("systems live over different bases")
    h1 = holonomy(L1).generator_images
    h2 = holonomy(L2).generator_images
    return h1 == h2
