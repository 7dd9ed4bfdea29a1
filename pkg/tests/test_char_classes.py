import random
from fractions import Fraction

import pytest

from algebroids import (
    BITS,
    GF2,
    NotClosedError,
    UnsupportedBaseError,
    UnsupportedRankError,
    canonical_edge_class,
    char_class_report,
    circle_model,
    cup,
    evaluate_on_chain,
    from_representation,
    fundamental_cycle,
    image_dims,
    log_classes,
    pullback_system,
    sign_class,
    surjectivity_check,
    tensor_system,
    trivial_system,
    untwisted_space,
)

from conftest import (
    random_flat_system,
    random_gauge,
    torus_cover_map,
    torus_swap_map,
)


def loop_pairs(cls, c):
    return {n: cls.evaluate_loop(c.named_loops[n]) for n in sorted(c.named_loops)}


def test_canonical_edge_class_kills_coboundaries(torus):
    potential = {v: Fraction(v * v, 3) for v in range(9)}
    assignment = {(i, j): potential[j] - potential[i] for i, j in torus.edges}
    assert canonical_edge_class(torus, assignment).is_zero()
    with pytest.raises(NotClosedError):
        canonical_edge_class(torus, {(0, 1): Fraction(1)})


def test_canonical_edge_class_is_gauge_of_input(torus):
    # canonicalizing preserves every loop pairing
    wa = dict(torus.loop_cocycles["a"])
    cls = canonical_edge_class(torus, wa)
    assert cls.evaluate_loop(torus.named_loops["a"]) == 1
    assert cls.evaluate_loop(torus.named_loops["b"]) == 0


def test_sign_class_detects_negative_holonomy(torus):
    L = from_representation(torus, {"a": -2, "b": 3})
    s = sign_class(L)
    assert loop_pairs(s, torus) == {"a": GF2(1), "b": GF2(0)}
    M = from_representation(torus, {"a": -1, "b": -1})
    assert loop_pairs(sign_class(M), torus) == {"a": GF2(1), "b": GF2(1)}
    T = from_representation(torus, {"a": 2, "b": 3})
    assert sign_class(T).is_zero()


def test_sign_class_ignores_gauge(torus):
    rng = random.Random(3)
    L = from_representation(torus, {"a": -2, "b": 3})
    M = random_gauge(rng, L)
    assert sign_class(M) == sign_class(L)


def test_log_classes_of_counterexample(torus):
    L = from_representation(torus, {"a": 2, "b": 1})
    logs = log_classes(L)
    assert sorted(logs) == [2]
    assert loop_pairs(logs[2], torus) == {"a": 1, "b": 0}


def test_log_classes_distinct_primes_give_dual_basis(torus):
    L = from_representation(torus, {"a": 2, "b": 3})
    logs = log_classes(L)
    assert sorted(logs) == [2, 3]
    assert loop_pairs(logs[2], torus) == {"a": 1, "b": 0}
    assert loop_pairs(logs[3], torus) == {"a": 0, "b": 1}


def test_log_classes_merge_prime_powers(torus):
    L = from_representation(torus, {"a": 4, "b": 1})
    logs = log_classes(L)
    assert sorted(logs) == [2]
    assert loop_pairs(logs[2], torus) == {"a": 2, "b": 0}


def test_log_classes_shared_prime(torus):
    L = from_representation(torus, {"a": 2, "b": 4})
    logs = log_classes(L)
    assert sorted(logs) == [2]
    assert loop_pairs(logs[2], torus) == {"a": 1, "b": 2}


def test_log_classes_see_denominators(torus):
    L = from_representation(torus, {"a": Fraction(1, 2), "b": 3})
    logs = log_classes(L)
    assert loop_pairs(logs[2], torus) == {"a": -1, "b": 0}
    assert loop_pairs(logs[3], torus) == {"a": 0, "b": 1}


def test_log_classes_of_trivial_holonomy_are_empty(torus):
    assert log_classes(trivial_system(torus)) == {}
    L = from_representation(torus, {"a": -1, "b": 1})
    assert log_classes(L) == {}
    assert not sign_class(L).is_zero()


def test_classes_are_additive_under_tensor(torus):
    L = from_representation(torus, {"a": 2, "b": 3})
    M = from_representation(torus, {"a": 3, "b": 1})
    T = tensor_system(L, M)
    lt = log_classes(T)
    assert loop_pairs(lt[2], torus) == {"a": 1, "b": 0}
    assert loop_pairs(lt[3], torus) == {"a": 1, "b": 1}


def test_image_dims_catalog(torus):
    full = from_representation(torus, {"a": 2, "b": 3})
    assert image_dims(full) == {1: 2, 2: 1}
    partial = from_representation(torus, {"a": 2, "b": 1})
    assert image_dims(partial) == {1: 1, 2: 0}
    assert image_dims(trivial_system(torus)) == {1: 0, 2: 0}
    # same prime on both loops spans one line only
    shared = from_representation(torus, {"a": 2, "b": 4})
    assert image_dims(shared) == {1: 1, 2: 0}


def test_image_dims_on_circle(circle6):
    L = from_representation(circle6, {"a": 6})
    assert image_dims(L) == {1: 1}
    assert sorted(log_classes(L)) == [2, 3]


def test_rank_two_systems_are_rejected(torus):
    with pytest.raises(UnsupportedRankError):
        sign_class(trivial_system(torus, 2))
    with pytest.raises(UnsupportedRankError):
        log_classes(trivial_system(torus, 2))


def test_naturality_under_cover(torus, torus36):
    f = torus_cover_map(torus36, torus)
    L = from_representation(torus, {"a": 2, "b": 3})
    P = pullback_system(f, L)
    logs = log_classes(P)
    # loop a of the cover wraps a twice, so the exponent doubles
    assert logs[2].evaluate_loop(torus36.named_loops["a"]) == 2
    assert logs[3].evaluate_loop(torus36.named_loops["b"]) == 1


def test_naturality_under_swap(torus):
    f = torus_swap_map(torus)
    L = from_representation(torus, {"a": 2, "b": 3})
    P = pullback_system(f, L)
    logs = log_classes(P)
    assert loop_pairs(logs[2], torus) == {"a": 0, "b": 1}
    assert loop_pairs(logs[3], torus) == {"a": 1, "b": 0}


def test_gauge_invariance_of_log_classes(torus):
    rng = random.Random(5)
    L = from_representation(torus, {"a": Fraction(3, 2), "b": 5})
    M = random_gauge(rng, L)
    assert log_classes(M).keys() == log_classes(L).keys()
    for p, cls in log_classes(L).items():
        assert log_classes(M)[p] == cls


def test_surjectivity_of_independent_primes(torus):
    L = from_representation(torus, {"a": 2, "b": 3})
    ok, certificate = surjectivity_check(L)
    assert ok
    targets = [cert.target for cert in certificate]
    assert targets == ["a_dual", "b_dual", "fundamental"]
    a_cert, b_cert, f_cert = certificate
    assert a_cert.terms == [((2,), Fraction(1))]
    assert b_cert.terms == [((3,), Fraction(1))]
    ((pair, coeff),) = f_cert.terms
    assert pair == (2, 3)
    # the cup product of the two dual classes already pairs to +-1
    assert abs(coeff) == 1


def test_surjectivity_fails_with_shared_prime(torus):
    L = from_representation(torus, {"a": 2, "b": 4})
    ok, certificate = surjectivity_check(L)
    assert not ok
    assert certificate == []


def test_surjectivity_fails_with_trivial_direction(torus):
    L = from_representation(torus, {"a": 2, "b": 1})
    ok, _ = surjectivity_check(L)
    assert not ok
    ok, _ = surjectivity_check(trivial_system(torus))
    assert not ok


def test_surjectivity_with_composite_holonomy(torus):
    L = from_representation(torus, {"a": 6, "b": 10})
    ok, certificate = surjectivity_check(L)
    assert ok
    for cert in certificate:
        assert cert.terms


def test_surjectivity_needs_the_torus_model(circle6, torus36):
    with pytest.raises(UnsupportedBaseError):
        surjectivity_check(from_representation(circle6, {"a": 2}))
    with pytest.raises(UnsupportedBaseError):
        surjectivity_check(trivial_system(torus36))


def test_certified_cup_pairs_with_fundamental_cycle(torus):
    L = from_representation(torus, {"a": 2, "b": 3})
    logs = log_classes(L)
    mu = fundamental_cycle(torus)
    product = cup(logs[2].to_cochain(), logs[3].to_cochain())
    assert abs(evaluate_on_chain(product, mu)) == 1


def test_char_class_report_json_shape(torus):
    L = from_representation(torus, {"a": -2, "b": 3})
    report = char_class_report(L, check_surjectivity=True)
    data = report.to_json()
    assert data["schema_version"] == "1"
    assert len(data["generators"]) == 19
    assert len(data["sign"]) == 19
    assert set(data["logs"]) == {"2", "3"}
    assert data["image_dims"] == {"1": 2, "2": 1}
    assert data["surjective"] is True
    assert [c["target"] for c in data["certificate"]] == [
        "a_dual",
        "b_dual",
        "fundamental",
    ]
    plain = char_class_report(L)
    assert "surjective" not in plain.to_json()


def test_random_rank1_systems_have_consistent_reports(torus):
    rng = random.Random(7)
    for _ in range(8):
        L = random_flat_system(rng, torus, rank=1)
        logs = log_classes(L)
        dims = image_dims(L)
        assert dims[1] <= len(logs)
        assert dims[2] <= 1
        for cls in logs.values():
            assert not cls.is_zero()
