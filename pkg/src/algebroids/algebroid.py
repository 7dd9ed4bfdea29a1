"""Commutative transitive algebroids over a simplicial base.

The discrete data is a pair: a flat local system (the adjoint bundle with
its induced connection) and a closed twisted 2-cochain (the curvature of a
splitting).  Both conditions are exactly the existence conditions for the
extension, so construction validates them and nothing else.

The Chern-Weil map pairs flat sections of symmetric powers of the dual
adjoint against cup powers of the curvature.  Cochain-level cup powers are
not symmetric, but the symmetrization factors make the resulting class
independent of that: it is unchanged under change of splitting and commutes
with pullback, which is what the tests pin down.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

from .cohomology import (
    CohomologyClass,
    TwistedCochain,
    coboundary,
    cohomology,
    cup_power,
    pair_flat,
    pullback_cochain,
    untwisted_class,
)
from .complexes import Complex, SimplicialMap
from .errors import (
    InputError,
    NotClosedError,
    NotFlatError,
    NotInvariantError,
    UnsupportedRankError,
)
from .local_systems import (
    LocalSystem,
    check_flat,
    dual,
    pullback_system,
    sym_power,
    tensor_power,
    trivial_system,
)


class CommAlgebroid:
    """Validated pair (adjoint system, extension 2-cocycle)."""

    def __init__(self, adjoint: LocalSystem, omega: TwistedCochain):
        self.adjoint = adjoint
        self.omega = omega

    @property
    def base(self) -> Complex:
        return self.adjoint.base

    def __eq__(self, other):
        return (
            isinstance(other, CommAlgebroid)
            and self.adjoint == other.adjoint
            and self.omega == other.omega
        )

    __hash__ = None

    def __repr__(self):
        return f"CommAlgebroid(rank={self.adjoint.rank}, base={self.base!r})"


def make_algebroid(L: LocalSystem, omega: TwistedCochain) -> CommAlgebroid:
    """Validate the two extension conditions and assemble the algebroid.

    Violations are reported with the exact simplices at fault: non-flat
    transports list their triangles, a non-closed omega lists the 3-simplices
    where its coboundary is nonzero.
    """
    violations = check_flat(L)
    if violations:
        raise NotFlatError(
            "adjoint transports do not admit an extension: flatness fails",
            triangles=violations,
        )
    if omega.degree != 2:
        raise InputError("extension cocycle must have degree 2")
    if omega.system != L:
        raise InputError("extension cocycle must take values in the adjoint system")
    d_omega = coboundary(omega)
    if not d_omega.is_zero():
        bad = [s for s, v in d_omega.values.items() if any(x != 0 for x in v)]
        raise NotClosedError(
            "extension cocycle is not closed", simplices=bad
        )
    return CommAlgebroid(L, omega)


def trivial_algebroid(c: Complex, fiber_dim: int = 1) -> CommAlgebroid:
    if fiber_dim < 1:
        raise UnsupportedRankError("fiber dimension must be at least 1")
    adjoint = trivial_system(c, fiber_dim)
    return CommAlgebroid(adjoint, TwistedCochain(adjoint, 2))


class InvariantSectionSpace:
    """Flat sections of the k-th symmetric power of the dual adjoint: the
    domain of the degree-k Chern-Weil map."""

    def __init__(self, k: int, system: LocalSystem, basis):
        self.k = k
        self.system = system
        self.basis = list(basis)
        self.dimension = len(self.basis)

    def __repr__(self):
        return f"InvariantSectionSpace(k={self.k}, dimension={self.dimension})"


def invariant_sections(A: CommAlgebroid, k: int) -> InvariantSectionSpace:
    if k < 0:
        raise InputError("symmetric power must be nonnegative")
    system = sym_power(dual(A.adjoint), k)
    space = cohomology(system, 0)
    return InvariantSectionSpace(k, system, space.representatives)


def _monomials(rank: int, k: int) -> list:
    return list(itertools.combinations_with_replacement(range(rank), k))


def _sym_embedding(phi: TwistedCochain, adjoint: LocalSystem, k: int) -> TwistedCochain:
    """Rewrite a section of the symmetric dual as a section of the dual of
    the k-th tensor power: each word coordinate is the monomial coordinate
    of its sorted word, weighted by the product of letter multiplicity
    factorials.  Together with the final 1/k! this realizes the canonical
    inclusion of symmetric functionals into multilinear ones."""
    r = adjoint.rank
    mono_index = {m: i for i, m in enumerate(_monomials(r, k))}
    target = dual(tensor_power(adjoint, k))
    values = {}
    for v in range(adjoint.base.vertex_count):
        coords = phi.value((v,))
        vec = [Fraction(0)] * (r**k)
        for word in itertools.product(range(r), repeat=k):
            key = tuple(sorted(word))
            coeff = coords[mono_index[key]]
            if coeff == 0:
                continue
            weight = 1
            for count in Counter(key).values():
                weight *= math.factorial(count)
            index = 0
            for letter in word:
                index = index * r + letter
            vec[index] = coeff * weight
        values[(v,)] = tuple(vec)
    return TwistedCochain(target, 0, values)


def chern_weil(A: CommAlgebroid, phi: TwistedCochain, k: int) -> CohomologyClass:
    """The class (1/k!) < phi, omega cup ... cup omega > in H^{2k} with
    rational coefficients.  phi must be a flat section of the k-th symmetric
    dual; k = 0 returns the class of the constant phi itself."""
    if k < 0:
        raise InputError("symmetric power must be nonnegative")
    expected = sym_power(dual(A.adjoint), k)
    if phi.degree != 0 or phi.system != expected:
        raise NotInvariantError(
            f"section does not live in the degree-{k} symmetric dual of the adjoint"
        )
    if not coboundary(phi).is_zero():
        raise NotInvariantError("section is not invariant under the adjoint transport")
    embedded = _sym_embedding(phi, A.adjoint, k)
    paired = pair_flat(embedded, cup_power(A.omega, k))
    return untwisted_class(paired.scale(Fraction(1, math.factorial(k))))


def chern_weil_image(A: CommAlgebroid, max_k: int | None = None) -> dict:
    """Chern-Weil classes of a basis of invariant sections, per symmetric
    power k >= 1.  Powers whose target degree 2k exceeds the base dimension
    are omitted (their classes land in zero spaces)."""
    if max_k is None:
        max_k = A.base.dimension // 2
    out = {}
    for k in range(1, max_k + 1):
        sections = invariant_sections(A, k)
        out[k] = [chern_weil(A, phi, k) for phi in sections.basis]
    return out


def change_splitting(A: CommAlgebroid, eta: TwistedCochain) -> CommAlgebroid:
    """Replace the splitting: the curvature moves by the coboundary of eta.
    Revalidates, although closedness is automatic."""
    if eta.degree != 1 or eta.system != A.adjoint:
        raise InputError("splitting change must be a 1-cochain over the adjoint")
    return make_algebroid(A.adjoint, A.omega + coboundary(eta))


def pullback_algebroid(f: SimplicialMap, A: CommAlgebroid) -> CommAlgebroid:
    """Pull both pieces back along a simplicial map and revalidate."""
    adjoint = pullback_system(f, A.adjoint)
    omega = pullback_cochain(f, A.omega)
    return make_algebroid(adjoint, omega)
