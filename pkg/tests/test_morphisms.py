import itertools

import numpy as np
import pytest

from frobcat.morphisms import (Morphism, ObjectSum, ShapeMismatch, braid, compose, compose_all,
                               cup_cap, fuse, identity, image_of_idempotent, quick_trace,
                               random_morphism, tensor, trace, twist_morphism)


def test_identity_examples(ising):
    e = identity((), ising)
    assert e.blocks[0].shape == (1, 1) and e.blocks[0][0, 0] == 1
    A = ObjectSum.from_labels(ising, ["1", "psi"])
    idA = identity((A,))
    assert sum(B.size for B in idA.blocks.values()) == 2
    assert all(np.allclose(B, np.eye(len(B))) for B in idA.blocks.values())


def test_compose_shape_mismatch(ising):
    s = ObjectSum.from_labels(ising, ["sigma"])
    p = ObjectSum.from_labels(ising, ["psi"])
    with pytest.raises(ShapeMismatch):
        compose(identity((s,)), identity((p,)))


def test_cup_then_cap_gives_dimension(ising):
    s = ObjectSum.from_labels(ising, ["sigma"])
    loop = compose(cup_cap(s, "dt"), cup_cap(s, "b"))
    assert abs(loop.scalar() - np.sqrt(2)) < 1e-12
    loop = compose(cup_cap(s, "d"), cup_cap(s, "bt"))
    assert abs(loop.scalar() - np.sqrt(2)) < 1e-12


@pytest.mark.parametrize("key", ["toric_code", "fibonacci", "ising", "pointed_z3_1"])
def test_monodromy_on_simple_pairs_matches_twists(key, cats):
    cat = cats[key]
    for i, j in itertools.product(range(cat.rank), repeat=2):
        X, Y = ObjectSum.simple(cat, i), ObjectSum.simple(cat, j)
        mono = compose(braid(Y, X), braid(X, Y))
        for k, B in mono.blocks.items():
            want = cat.theta[k] / (cat.theta[i] * cat.theta[j])
            assert np.allclose(B, want * np.eye(len(B)), atol=1e-12)


def test_braid_inverse(cats):
    cat = cats["ising"]
    rng = np.random.default_rng(3)
    X = ObjectSum(cat, [1, 0, 2])
    Y = ObjectSum(cat, [0, 1, 1])
    assert compose(braid(X, Y, inverse=True), braid(X, Y)).dist(identity((X, Y))) < 1e-12
    assert compose(braid(X, Y), braid(X, Y, inverse=True)).dist(identity((Y, X))) < 1e-12


def test_yang_baxter(cats):
    cat = cats["fibonacci"]
    X = ObjectSum(cat, [1, 1])
    Y = ObjectSum(cat, [0, 1])
    Z = ObjectSum(cat, [1, 1])
    I = lambda o: identity((o,))
    lhs = compose_all(tensor(braid(Y, Z), I(X)), tensor(I(Y), braid(X, Z)), tensor(braid(X, Y), I(Z)))
    rhs = compose_all(tensor(I(Z), braid(X, Y)), tensor(braid(X, Z), I(Y)), tensor(I(X), braid(Y, Z)))
    assert lhs.dist(rhs) < 1e-12


def test_trace_of_identity_and_twist(cats):
    for cat in cats.values():
        X = ObjectSum(cat, [1 + (i % 2) for i in range(cat.rank)])
        assert abs(trace(identity((X,))) - X.dim) < 1e-9
        want = sum(m * cat.dims[i] * cat.theta[i] for i, m in enumerate(X.mult))
        assert abs(trace(twist_morphism(X)) - want) < 1e-9


def test_quick_trace_agrees(cats):
    rng = np.random.default_rng(0)
    cat = cats["ising"]
    X = ObjectSum(cat, [1, 1, 2])
    f = random_morphism((X, X), (X, X), rng)
    assert abs(trace(f) - quick_trace(f)) < 1e-9


def test_fuse_is_invertible(cats):
    cat = cats["ising"]
    X = ObjectSum(cat, [1, 0, 1])
    F, iso, inv = fuse((X, X, X))
    assert compose(inv, iso).dist(identity((X, X, X))) < 1e-12
    assert compose(iso, inv).dist(identity((F,))) < 1e-12
    assert abs(F.dim - X.dim ** 3) < 1e-9


def test_image_of_idempotent_examples(cats):
    cat = cats["ising"]
    X = ObjectSum(cat, [1, 1, 1])
    S, e, r = image_of_idempotent(identity((X,)))
    assert S == X
    assert compose(r, e).dist(identity((S,))) < 1e-12
    S, e, r = image_of_idempotent(Morphism((X,), (X,), cat=cat))
    assert S.is_zero


def test_tensor_of_morphisms_from_unit(cats):
    # regression: two morphisms with empty domain
    cat = cats["toric_code"]
    A = ObjectSum.from_labels(cat, ["1", "e"])
    eta = Morphism((), (A,), {0: np.ones((1, 1))}, cat)
    both = tensor(eta, eta)
    assert both.dom == () and both.cod == (A, A)
    assert abs(both.norm() - 1.0) < 1e-12


def test_zigzag_on_sums(cats):
    for cat in cats.values():
        X = ObjectSum(cat, [1] * cat.rank)
        Xd = X.dual()
        z = compose(tensor(identity((X,)), cup_cap(X, "d")), tensor(cup_cap(X, "b"), identity((X,))))
        assert z.dist(identity((X,))) < 1e-12
        z = compose(tensor(cup_cap(X, "dt"), identity((X,))), tensor(identity((X,)), cup_cap(X, "bt")))
        assert z.dist(identity((X,))) < 1e-12
