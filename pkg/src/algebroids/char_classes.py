"""Characteristic classes of rank-1 flat systems read off the holonomy.

A nonzero rational transport factors as sign times a product of prime
powers.  The sign bit gives a 1-cocycle with bit coefficients; the exponent
of each prime gives a rational 1-cocycle.  Both are canonicalized in the
gauge where tree edges vanish, so two systems get equal class data exactly
when their holonomy representations agree.

The span of the log classes, together with its cup powers, is the part of
the cohomology of the classifying space that the system can see.  On the
torus model a certificate is produced for surjectivity: explicit prime-class
combinations hitting each basis vector of H^1 and H^2.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .cohomology import (
    TwistedCochain,
    cup,
    evaluate_on_chain,
    fundamental_cocycle,
    fundamental_cycle,
    named_loop_cocycle,
    untwisted_class,
    untwisted_space,
)
from .complexes import Complex, non_tree_edges, spanning_tree, torus_model
from .errors import (
    InputError,
    NotClosedError,
    NotFlatError,
    UnsupportedBaseError,
    UnsupportedRankError,
)
from .linalg import (
    BITS,
    Domain,
    FormalLog,
    GF2,
    LOGS,
    Matrix,
    RATIONALS,
    _RowSpace,
    solve,
)
from .local_systems import LocalSystem, check_flat


class EdgeClass:
    """A degree-1 class in its canonical gauge: one coefficient per non-tree
    edge, tree edges implicitly zero.  Works over any coefficient domain
    with addition; only nonzero coefficients are stored."""

    def __init__(self, base: Complex, domain: Domain, values: Mapping):
        self.base = base
        self.domain = domain
        self.values = {tuple(e): v for e, v in values.items() if v != domain.zero}

    def coordinates(self) -> tuple:
        return tuple(
            self.values.get(e, self.domain.zero) for e in non_tree_edges(self.base)
        )

    def evaluate_loop(self, path) -> object:
        """Pair against a closed vertex path; gauge-invariant because the
        representative vanishes on the spanning tree."""
        total = self.domain.zero
        for u, w in zip(path, path[1:]):
            edge = (u, w) if u < w else (w, u)
            value = self.values.get(edge)
            if value is None:
                continue
            total = total + value if u < w else total - value
        return total

    def is_zero(self) -> bool:
        return not self.values

    def to_cochain(self) -> TwistedCochain:
        """The canonical representative as an untwisted rational 1-cochain."""
        if self.domain is not RATIONALS:
            raise InputError("only rational classes convert to cochains")
        from .local_systems import trivial_system

        return TwistedCochain(
            trivial_system(self.base, 1), 1, {e: (v,) for e, v in self.values.items()}
        )

    def __eq__(self, other):
        return (
            isinstance(other, EdgeClass)
            and self.base == other.base
            and self.domain is other.domain
            and self.values == other.values
        )

    __hash__ = None

    def __repr__(self):
        return f"EdgeClass(domain={self.domain.name}, support={len(self.values)})"


def canonical_edge_class(c: Complex, assignment: Mapping, domain: Domain = RATIONALS) -> EdgeClass:
    """Canonicalize a 1-cocycle given as edge -> coefficient: subtract the
    coboundary of the tree potential so every tree edge vanishes.  The input
    must be closed; violations are reported, not repaired."""
    values = {tuple(e): assignment.get(e, domain.zero) for e in c.edges}
    bad = []
    for i, j, k in c.triangles:
        if values[(i, j)] + values[(j, k)] - values[(i, k)] != domain.zero:
            bad.append((i, j, k))
    if bad:
        raise NotClosedError("edge assignment is not a cocycle", triangles=bad)
    tree = spanning_tree(c)
    potential = {tree.root: domain.zero}
    for v in tree.order:
        if v == tree.root:
            continue
        u = tree.parent[v]
        p = potential[u]
        potential[v] = p + values[(u, v)] if u < v else p - values[(v, u)]
    reduced = {}
    for i, j in non_tree_edges(c):
        reduced[(i, j)] = values[(i, j)] - (potential[j] - potential[i])
    return EdgeClass(c, domain, reduced)


def _scalar(L: LocalSystem, edge) -> Fraction:
    return L.transport[edge].entries[0][0]


def _require_rank1_flat(L: LocalSystem) -> None:
    if L.rank != 1:
        raise UnsupportedRankError("class extraction is limited to rank-1 systems")
    violations = check_flat(L)
    if violations:
        raise NotFlatError("system is not flat", triangles=violations)


def sign_class(L: LocalSystem) -> EdgeClass:
    """The orientation class: bit 1 on edges with negative transport,
    canonicalized.  Zero exactly when every loop holonomy is positive."""
    _require_rank1_flat(L)
    bits = {
        e: GF2(0 if _scalar(L, e) > 0 else 1) for e in L.base.edges
    }
    return canonical_edge_class(L.base, bits, BITS)


def log_classes(L: LocalSystem) -> dict:
    """One rational class per prime appearing in the holonomy: the class
    whose pairing with any loop is the exponent of that prime in the loop's
    holonomy.  Primes whose class cancels to zero are omitted."""
    _require_rank1_flat(L)
    logs = {e: FormalLog.of(_scalar(L, e)) for e in L.base.edges}
    # canonicalize once in the formal-log domain, then split by prime
    reduced = canonical_edge_class(L.base, logs, LOGS)
    primes = sorted({p for v in reduced.values.values() for p in v.primes()})
    out = {}
    for p in primes:
        values = {e: v.coefficient(p) for e, v in reduced.values.items()}
        cls = EdgeClass(L.base, RATIONALS, values)
        if not cls.is_zero():
            out[p] = cls
    return out


def brho_image(L: LocalSystem) -> dict:
    """Dimensions and bases of the subspace of rational cohomology hit by
    the log classes, degree by degree: degree 1 is their span, higher
    degrees are spanned by cup products of the degree-1 basis."""
    _require_rank1_flat(L)
    c = L.base
    classes = log_classes(L)
    span = _RowSpace(RATIONALS)
    basis_cochains = []
    degree_one = []
    for p in sorted(classes):
        cls = classes[p]
        if span.add(cls.coordinates()):
            basis_cochains.append(cls.to_cochain())
            degree_one.append(cls)
    out = {1: (len(degree_one), degree_one)}
    for degree in range(2, c.dimension + 1):
        space = untwisted_space(c, degree)
        coord_span = _RowSpace(RATIONALS)
        basis = []
        for word in _cup_words(basis_cochains, degree):
            cochain = word[0]
            for factor in word[1:]:
                cochain = cup(cochain, factor)
            cls = space.class_of(cochain)
            if not cls.is_zero() and coord_span.add(cls.coordinates):
                basis.append(cls)
        out[degree] = (len(basis), basis)
    return out


def _cup_words(generators, length):
    """All sorted words of the given length over the generators (cup is
    graded-commutative at class level, so sorted words span the products)."""
    for combo in itertools.combinations_with_replacement(range(len(generators)), length):
        yield tuple(generators[i] for i in combo)


def image_dims(L: LocalSystem) -> dict:
    return {degree: dim for degree, (dim, _) in brho_image(L).items()}


class Certificate:
    """One certified identity: a linear combination of prime classes (or of
    their pairwise cup products) that equals a target basis class."""

    def __init__(self, target: str, degree: int, terms):
        self.target = target
        self.degree = degree
        self.terms = list(terms)

    def __repr__(self):
        return f"Certificate(target={self.target!r}, terms={self.terms!r})"


def _loop_exponent_matrix(classes: dict, loops) -> tuple:
    """Column per prime: pairings of its class against the given loops."""
    primes = sorted(classes)
    columns = [
        tuple(classes[p].evaluate_loop(path) for path in loops) for p in primes
    ]
    return primes, columns


def surjectivity_check(L: LocalSystem) -> tuple:
    """Decide whether the log classes generate the full rational cohomology
    of the torus model, with an exactly verified certificate.

    Surjectivity needs rank 2 in degree 1 (two primes with independent
    exponent vectors on the loops) and a nonzero cup pairing against the
    fundamental cycle in degree 2.  The certificate expresses the two loop
    duals and the fundamental class as explicit combinations, and each
    combination is re-evaluated against the canonical bases before being
    returned.
    """
    _require_rank1_flat(L)
    c = L.base
    if c != torus_model() or set(c.named_loops) != {"a", "b"}:
        raise UnsupportedBaseError("surjectivity is decided on the torus model only")
    classes = log_classes(L)
    loops = [c.named_loops["a"], c.named_loops["b"]]
    primes, columns = _loop_exponent_matrix(classes, loops)
    pairing = Matrix(list(zip(*columns)) if columns else [(), ()], cols=len(columns))
    degree_one_full = pairing.rank() == 2

    cycle = fundamental_cycle(c)
    cup_pairings = {}
    for a in range(len(primes)):
        for b in range(a + 1, len(primes)):
            product = cup(classes[primes[a]].to_cochain(), classes[primes[b]].to_cochain())
            cup_pairings[(primes[a], primes[b])] = evaluate_on_chain(product, cycle)
    degree_two_full = any(v != 0 for v in cup_pairings.values())

    surjective = degree_one_full and degree_two_full
    if not surjective:
        return False, []

    certificate = [
        _certify_loop_dual(c, classes, "a"),
        _certify_loop_dual(c, classes, "b"),
        _certify_fundamental(c, classes, cup_pairings),
    ]
    return True, certificate


def _certify_loop_dual(c: Complex, classes: dict, name: str) -> Certificate:
    """Solve for a prime-class combination equal to the canonical class of
    the named loop's dual cocycle, then verify the equality coefficient by
    coefficient."""
    target = canonical_edge_class(c, dict(c.loop_cocycles[name]), RATIONALS)
    primes = sorted(classes)
    columns = [classes[p].coordinates() for p in primes]
    height = len(non_tree_edges(c))
    m = Matrix(list(zip(*columns)) if columns else [()] * height, cols=len(columns))
    solution = solve(m, target.coordinates())
    if solution is None:
        raise InputError(f"loop dual {name!r} is not in the span of the log classes")
    terms = [((p,), coeff) for p, coeff in zip(primes, solution) if coeff != 0]
    combo = [Fraction(0)] * height
    for (p,), coeff in terms:
        for i, x in enumerate(classes[p].coordinates()):
            combo[i] += coeff * x
    if tuple(combo) != target.coordinates():
        raise InputError(f"certificate for {name!r} failed verification")
    return Certificate(f"{name}_dual", 1, terms)


def _certify_fundamental(c: Complex, classes: dict, cup_pairings: dict) -> Certificate:
    """Scale one nonvanishing cup product to pair to 1 with the fundamental
    cycle, then verify it equals the fundamental cocycle's class in H^2."""
    space = untwisted_space(c, 2)
    target = space.class_of(fundamental_cocycle(c))
    pair = next(pq for pq, v in cup_pairings.items() if v != 0)
    p, q = pair
    coeff = 1 / cup_pairings[pair]
    product = cup(classes[p].to_cochain(), classes[q].to_cochain())
    achieved = space.class_of(product.scale(coeff))
    if achieved != target:
        raise InputError("fundamental-class certificate failed verification")
    return Certificate("fundamental", 2, [((p, q), coeff)])


class CharClassReport:
    """Everything the holonomy sees: sign class, per-prime log classes,
    image dimensions, and (on the torus) the surjectivity verdict."""

    def __init__(self, base, sign, logs, dims, surjective=None, certificate=None):
        self.base = base
        self.sign = sign
        self.logs = logs
        self.image_dims = dims
        self.surjective = surjective
        self.certificate = certificate

    def to_json(self) -> dict:
        edges = ["edge_{}_{}".format(*e) for e in non_tree_edges(self.base)]
        data = {
            "schema_version": "1",
            "generators": edges,
            "sign": [bit.value for bit in self.sign.coordinates()],
            "logs": {
                str(p): [_rat(x) for x in cls.coordinates()]
                for p, cls in self.logs.items()
            },
            "image_dims": {str(d): dim for d, dim in self.image_dims.items()},
        }
        if self.surjective is not None:
            data["surjective"] = self.surjective
            data["certificate"] = [
                {
                    "target": cert.target,
                    "degree": cert.degree,
                    "terms": [
                        {"primes": list(primes), "coefficient": _rat(coeff)}
                        for primes, coeff in cert.terms
                    ],
                }
                for cert in (self.certificate or [])
            ]
        return data


def _rat(x) -> str:
    q = Fraction(x)
    return f"{q.numerator}/{q.denominator}"


def char_class_report(L: LocalSystem, check_surjectivity: bool = False) -> CharClassReport:
    _require_rank1_flat(L)
    sign = sign_class(L)
    logs = log_classes(L)
    dims = image_dims(L)
    surjective = None
    certificate = None
    if check_surjectivity:
        surjective, certificate = surjectivity_check(L)
    return CharClassReport(L.base, sign, logs, dims, surjective, certificate)
