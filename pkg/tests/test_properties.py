"""Randomised invariants of the morphism engine and of algebra constructions."""
import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from frobcat import catalog
from frobcat.algebras import simple_current_algebra, tensor_algebra, trivial_algebra
from frobcat.centers import alpha_Z_matrix, dim_local_induction_check
from frobcat.morphisms import (ObjectSum, braid, compose, cup_cap, identity, random_morphism,
                               tensor, trace, twist_morphism)

CATS = ("toric_code", "pointed_z3_1", "fibonacci", "ising", "ising_dual")
TOL = 1e-9
SETTINGS = settings(max_examples=100, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])


@st.composite
def objects(draw, n=1):
    cat = catalog.load_builtin(draw(st.sampled_from(CATS)))
    mult = st.lists(st.integers(0, 2), min_size=cat.rank, max_size=cat.rank).filter(any)
    objs = [ObjectSum(cat, draw(mult)) for _ in range(n)]
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return cat, objs, np.random.default_rng(seed)


def _rm(dom, cod, rng):
    f = random_morphism(dom, cod, rng)
    n = f.norm()
    return f / n if n else f


@SETTINGS
@given(objects(4))
def test_composition_associative(data):
    _, (X, Y, Z, W), rng = data
    f, g, h = _rm((X,), (Y,), rng), _rm((Y,), (Z,), rng), _rm((Z,), (W,), rng)
    assert compose(h, compose(g, f)).dist(compose(compose(h, g), f)) < TOL


@SETTINGS
@given(objects(4))
def test_interchange_law(data):
    _, (X, Y, Z, W), rng = data
    f, g = _rm((X,), (Y,), rng), _rm((Y,), (Z,), rng)
    f2, g2 = _rm((Z,), (W,), rng), _rm((W,), (X,), rng)
    lhs = compose(tensor(g, g2), tensor(f, f2))
    assert lhs.dist(tensor(compose(g, f), compose(g2, f2))) < TOL


@SETTINGS
@given(objects(4))
def test_braiding_natural(data):
    _, (X, Y, Z, W), rng = data
    a, b = _rm((X,), (Z,), rng), _rm((Y,), (W,), rng)
    lhs = compose(braid(Z, W), tensor(a, b))
    assert lhs.dist(compose(tensor(b, a), braid(X, Y))) < TOL


@SETTINGS
@given(objects(2))
def test_twist_natural(data):
    _, (X, Y), rng = data
    f = _rm((X,), (Y,), rng)
    assert compose(twist_morphism(Y), f).dist(compose(f, twist_morphism(X))) < TOL


@SETTINGS
@given(objects(2))
def test_trace_cyclic(data):
    _, (X, Y), rng = data
    f, k = _rm((X,), (Y,), rng), _rm((Y,), (X,), rng)
    t1, t2 = trace(compose(k, f)), trace(compose(f, k))
    assert abs(t1 - t2) <= TOL * max(1.0, abs(t1))


@SETTINGS
@given(objects(1))
def test_zigzag(data):
    _, (X,), _ = data
    Xd = X.dual()
    z1 = compose(tensor(identity((X,)), cup_cap(X, "d")), tensor(cup_cap(X, "b"), identity((X,))))
    z2 = compose(tensor(cup_cap(X, "d"), identity((Xd,))), tensor(identity((Xd,)), cup_cap(X, "b")))
    assert z1.dist(identity((X,))) < TOL
    assert z2.dist(identity((Xd,))) < TOL


@SETTINGS
@given(objects(2))
def test_double_braiding_trace_is_s_entry(data):
    cat, (X, Y), _ = data
    # tr(c_{Y,X} c_{X,Y}) = sum_ij x_i y_j s_ij
    from frobcat.category import s_matrix_formula
    s = s_matrix_formula(cat)
    t = trace(compose(braid(Y, X), braid(X, Y)))
    assert abs(t - np.asarray(X.mult) @ s @ np.asarray(Y.mult)) < 1e-8 * max(1.0, abs(t))


# -- algebras --------------------------------------------------------------------------

_TORIC = ("e", "m")


def _toric_alg(label):
    cat = catalog.load_builtin("toric_code")
    if label is None:
        return trivial_algebra(cat)
    return simple_current_algebra(cat, [cat.label_index(label)])


@settings(max_examples=20, deadline=None)
@given(st.sampled_from((None,) + _TORIC), st.sampled_from((None,) + _TORIC),
       st.sampled_from("+-"))
def test_tensor_algebra_is_ssfa(a, b, sign):
    A = tensor_algebra(_toric_alg(a), _toric_alg(b), sign)
    assert A.is_ssfa()
    assert abs(A.dim - _toric_alg(a).dim * _toric_alg(b).dim) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.sampled_from((None,) + _TORIC), st.sampled_from((None,) + _TORIC))
def test_z_matrix_invariants(a, b):
    Za, Zb = alpha_Z_matrix(_toric_alg(a)), alpha_Z_matrix(_toric_alg(b))
    assert Za.entries[0, 0] == 1                     # unit appears once
    assert (Za.entries >= 0).all()
    Zab = alpha_Z_matrix(tensor_algebra(_toric_alg(a), _toric_alg(b), "+"))
    assert Zab == Za @ Zb


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(_TORIC), st.lists(st.integers(0, 2), min_size=4, max_size=4).filter(any))
def test_local_induction_dimension(label, mult):
    A = _toric_alg(label)
    U = ObjectSum(A.cat, mult)
    dim, pred, res = dim_local_induction_check(A, U)
    assert res < 1e-9
    assert abs(dim - round(dim)) < 1e-12
