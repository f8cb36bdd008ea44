import numpy as np
import pytest

from frobcat import catalog
from frobcat.algebras import (FrobeniusAlgebra, counit_natural, dual_object_algebra, dump_algebra,
                              load_algebra_file, opposite_algebra, reconstruct_coproduct,
                              simple_current_algebra, tensor_algebra, trivial_algebra)
from frobcat.coset import build_trivializing_algebra
from frobcat.morphisms import Morphism, ObjectSum, compose
from oracles import PHI


@pytest.fixture(scope="module")
def one_e(toric):
    return simple_current_algebra(toric, [toric.label_index("e")])


@pytest.fixture(scope="module")
def one_m(toric):
    return simple_current_algebra(toric, [toric.label_index("m")])


@pytest.fixture(scope="module")
def ssd(ising):
    return dual_object_algebra(ObjectSum.from_labels(ising, ["sigma"]))


def test_trivial_algebra_all_flags(cats):
    for cat in cats.values():
        A = trivial_algebra(cat)
        assert all(A.flags().values())
        b1, bA, _ = A.special_data()
        assert abs(b1 - 1) < 1e-12 and abs(bA - 1) < 1e-12


def test_counit_natural_on_unit(cats):
    cat = cats["ising"]
    A = trivial_algebra(cat)
    eps = counit_natural(A.A, A.m)
    assert abs(eps.blocks[0][0, 0] - 1) < 1e-12


def test_simple_current_algebra(one_e):
    f = one_e.flags()
    assert all(f.values())
    assert abs(one_e.beta_one - 2) < 1e-12 and abs(one_e.beta_A - 1) < 1e-12


def test_corrupted_product_fails_associativity(toric, one_e):
    m = one_e.m.copy()
    e = toric.label_index("e")
    B = m.blocks[e].copy()
    B[0, 0] *= 1.5
    m.blocks[e] = B
    bad = FrobeniusAlgebra(one_e.A, m, one_e.eta, reconstruct=False)
    assert not bad.check_algebra()
    assert bad.algebra_residual() > 0.1


def test_counit_natural_values(ising, fib):
    one_psi = simple_current_algebra(ising, [ising.label_index("psi")])
    eps = counit_natural(one_psi.A, one_psi.m)
    assert abs(compose(eps, one_psi.eta).scalar() - 2) < 1e-12
    T = build_trivializing_algebra(fib)
    eps = counit_natural(T.A, T.m)
    assert abs(compose(eps, T.eta).scalar() - (1 + PHI ** 2)) < 1e-9


def test_reconstructed_coproduct_is_special(one_e, ising):
    delta, eps = reconstruct_coproduct(one_e.A, one_e.m)
    A = FrobeniusAlgebra(one_e.A, one_e.m, one_e.eta, delta, eps)
    assert compose(A.m, A.delta).dist(A.idA) < 1e-12
    T = build_trivializing_algebra(ising)
    assert all(T.flags()[k] for k in ("algebra", "frobenius", "special", "symmetric",
                                       "commutative", "haploid"))


def test_T_fib_flags_and_betas(fib):
    T = build_trivializing_algebra(fib)
    assert all(T.flags().values())
    assert abs(T.beta_one - (1 + PHI ** 2)) < 1e-9


def test_sigma_sigma_dual(ssd, ising):
    assert ssd.A == ObjectSum.from_labels(ising, ["1", "psi"])
    f = ssd.flags()
    assert f["frobenius"] and f["special"] and f["symmetric"]
    assert not f["commutative"]
    assert f["haploid"] and f["simple"]


def test_non_haploid_diagonal_algebra(toric):
    A = ObjectSum(toric, [2, 0, 0, 0])
    dom = Morphism((A, A), (A,), cat=toric)
    B = np.zeros((2, 4))
    for col, (leaves, _, _) in enumerate(dom.dom_basis.trees[0]):
        (a, sa), (b, sb) = leaves
        if sa == sb:
            B[sa, col] = 1.0
    m = Morphism((A, A), (A,), {0: B})
    eta = Morphism((), (A,), {0: np.ones((2, 1))}, toric)
    alg = FrobeniusAlgebra(A, m, eta)
    assert alg.check_algebra() and alg.check_special()
    assert not alg.check_haploid()


def test_trivial_twist(toric, ising, one_e, cats):
    assert one_e.check_trivial_twist()
    one_psi = simple_current_algebra(ising, [ising.label_index("psi")])
    assert not one_psi.check_trivial_twist()
    for key in ("fibonacci", "ising", "toric_code"):
        assert build_trivializing_algebra(cats[key]).check_trivial_twist()


def test_tensor_algebra_of_e_and_m_is_not_commutative(one_e, one_m):
    for sign in "+-":
        t = tensor_algebra(one_e, one_m, sign)
        assert t.is_ssfa() and not t.check_commutative()
        assert abs(t.dim - 4) < 1e-12


def test_opposite_algebra(one_e, ssd):
    assert opposite_algebra(one_e).m.dist(one_e.m) < 1e-12
    op = opposite_algebra(ssd)
    assert op.m.dist(ssd.m) > 1e-6
    assert op.flags() == ssd.flags()


def test_dual_object_algebras(cats):
    ising, fib = cats["ising"], cats["fibonacci"]
    u = dual_object_algebra(ObjectSum.unit(ising))
    assert u.A == ObjectSum.unit(ising) and all(u.flags().values())
    t = dual_object_algebra(ObjectSum.from_labels(fib, ["tau"]))
    assert t.A == ObjectSum.from_labels(fib, ["1", "tau"])
    assert t.is_ssfa() and t.check_haploid()


def test_algebra_file_round_trip(tmp_path, ssd):
    path = tmp_path / "a.json"
    dump_algebra(ssd, path)
    again = load_algebra_file(path, ssd.cat)
    assert again.A == ssd.A and again.m.dist(ssd.m) < 1e-12
    assert again.flags() == ssd.flags()


def test_catalog_algebra_keys(toric, ising, fib):
    a = catalog.load_builtin_algebra("toric_code", "simple_current:{0,e}")
    assert a.A.as_dict() == {"1": 1, "e": 1} and a.is_ssfa() and a.check_commutative()
    b = catalog.load_builtin_algebra("ising", "dual_object:sigma")
    assert b.A.as_dict() == {"1": 1, "psi": 1}
    T = catalog.load_builtin_algebra("fibonacci", "T_G")
    assert T.A.as_dict() == {"(1,1)": 1, "(tau,tau)": 1}
    with pytest.raises(catalog.IncompatibleKeys):
        catalog.load_builtin_algebra("fibonacci", "nonsense")
