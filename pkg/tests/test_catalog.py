import cmath

import numpy as np
import pytest

from frobcat import catalog
from frobcat.catalog import IncompatibleKeys, UnknownKey, load_builtin, load_builtin_algebra
from frobcat.numerics import perron_vector


def test_builtin_keys_load():
    for key in catalog.builtin_keys():
        assert load_builtin(key).rank >= 1


def test_unknown_key():
    with pytest.raises(UnknownKey):
        load_builtin("su2_7")


def test_load_is_cached():
    assert load_builtin("ising") is load_builtin("ising")


def test_ranks_and_twists():
    assert load_builtin("vec").rank == 1
    t = load_builtin("toric_code")
    assert t.labels == ["1", "e", "m", "f"]
    assert np.allclose(t.theta, [1, 1, 1, -1])
    assert np.allclose(t.dims, 1)


def test_labels_unique():
    for key in catalog.builtin_keys():
        labels = load_builtin(key).labels
        assert len(set(labels)) == len(labels)


@pytest.mark.parametrize("n,k", [(3, 1), (4, 1), (5, 2)])
def test_pointed_twists_are_quadratic_form(n, k):
    cat = load_builtin(f"pointed_z{n}_{k}")
    assert cat.labels == [str(a) for a in range(n)]
    for a in range(n):
        assert abs(cat.theta[a] - cmath.exp(2j * cmath.pi * k * a * a / n)) < 1e-12


def test_dims_match_perron_oracle():
    for key in catalog.builtin_keys():
        cat = load_builtin(key)
        assert np.allclose(perron_vector(cat.N.sum(axis=0)), cat.dims, atol=1e-10)


def test_product_and_dual_keys():
    tt = load_builtin("toric_code*fibonacci")
    assert tt.rank == 8 and tt.labels[1] == "(1,tau)"
    fd = load_builtin("fibonacci_dual")
    assert np.allclose(fd.theta, np.conj(load_builtin("fibonacci").theta))


def test_builtin_algebras():
    A = load_builtin_algebra("toric_code", "simple_current:{0,e}")
    assert A.A.as_dict() == {"1": 1, "e": 1}
    assert all(A.flags().values())
    B = load_builtin_algebra("ising", "dual_object:sigma")
    assert B.A.as_dict() == {"1": 1, "psi": 1}
    T = load_builtin_algebra("fibonacci", "T_G")
    assert T.A.as_dict() == {"(1,1)": 1, "(tau,tau)": 1}


def test_simple_current_with_nontrivial_twist_reports_flags():
    # 1 + f in the toric code: theta_f = -1, so not commutative
    A = load_builtin_algebra("toric_code", "simple_current:f")
    assert not A.check_commutative()


def test_incompatible_algebra_key():
    with pytest.raises(IncompatibleKeys):
        load_builtin_algebra("ising", "frobnicate")


def test_simple_current_key_with_product_labels():
    A = load_builtin_algebra("vec*toric_code", "simple_current:{(1,e)}")
    assert A.A.as_dict() == {"(1,1)": 1, "(1,e)": 1}
    B = load_builtin_algebra("toric_code*toric_code", "simple_current:{(1,1), (e,1), (1,e), (e,e)}")
    assert B.A.as_dict() == {"(1,1)": 1, "(1,e)": 1, "(e,1)": 1, "(e,e)": 1}
    with pytest.raises(ValueError, match="group"):
        load_builtin_algebra("toric_code*toric_code", "simple_current:{(e,1), (1,e)}")
