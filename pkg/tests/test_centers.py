import numpy as np
import pytest

from frobcat.algebras import dual_object_algebra, simple_current_algebra, trivial_algebra
from frobcat.centers import (NotSSFA, alpha_Z_matrix, center, central_idempotent,
                             dim_local_induction_check, lift_algebra_E, local_induction_idempotent,
                             local_induction_object, tensor_center_check, z_multiplicativity_check)
from frobcat.coset import build_trivializing_algebra
from frobcat.modules import enumerate_simple_modules
from frobcat.morphisms import ObjectSum, compose, identity
from oracles import S_CLOSED_FORM


@pytest.fixture(scope="module")
def one_e(toric):
    return simple_current_algebra(toric, [toric.label_index("e")])


@pytest.fixture(scope="module")
def one_m(toric):
    return simple_current_algebra(toric, [toric.label_index("m")])


@pytest.fixture(scope="module")
def ssd(ising):
    return dual_object_algebra(ObjectSum.from_labels(ising, ["sigma"]))


@pytest.fixture(scope="module")
def t_fib(fib):
    return build_trivializing_algebra(fib)


def _local_z_oracle(alg):
    """``Z_ij = sum over local simple modules of [M:U_i][M:U_j]``."""
    vs = [np.array(M.Mdot.mult) for M in enumerate_simple_modules(alg) if M.is_local()]
    return sum(np.outer(v, v) for v in vs)


@pytest.mark.parametrize("side", ["l", "r"])
def test_central_idempotent_is_identity_for_commutative(one_e, side):
    P = central_idempotent(one_e, side)
    assert P.dist(one_e.idA) < 1e-10


@pytest.mark.parametrize("side", ["l", "r"])
def test_central_idempotent_is_idempotent(ssd, side):
    P = central_idempotent(ssd, side)
    assert compose(P, P).dist(P) < 1e-10
    assert not P.dist(ssd.idA) < 1e-6


@pytest.mark.parametrize("side", ["l", "r"])
def test_center_of_sigma_sigma_dual_is_unit(ssd, side):
    C = center(ssd, side).C
    assert C.A.mult == (1, 0, 0)
    assert all(C.flags().values())


def test_center_of_commutative_algebra_is_itself(one_e, t_fib):
    for alg in (one_e, t_fib):
        for side in "lr":
            assert center(alg, side).C.A.mult == alg.A.mult


def test_center_requires_ssfa(toric):
    from frobcat.algebras import FrobeniusAlgebra
    A = trivial_algebra(toric)
    bad = FrobeniusAlgebra(A.A, A.m * 2.0, A.eta, reconstruct=False)
    with pytest.raises(NotSSFA):
        central_idempotent(bad)


def test_local_induction_over_unit_is_identity(ising):
    one = trivial_algebra(ising)
    for lab in ising.labels:
        U = ObjectSum.from_labels(ising, [lab])
        S, _, _ = local_induction_object(one, U)
        assert S.mult == U.mult


@pytest.mark.parametrize("lab,expected", [("1", (1, 1, 0, 0)), ("e", (1, 1, 0, 0)),
                                          ("m", (0, 0, 0, 0)), ("f", (0, 0, 0, 0))])
def test_local_induction_toric(one_e, toric, lab, expected):
    U = ObjectSum.from_labels(toric, [lab])
    S, _, _ = local_induction_object(one_e, U)
    assert S.mult == expected
    dim, pred, res = dim_local_induction_check(one_e, U)
    assert res < 1e-10
    # closed-form S-matrix oracle: s_{U,A} = s_{U,1} + s_{U,e} in units of s_{0,0}
    s = S_CLOSED_FORM["toric_code"]
    i = toric.label_index(lab)
    assert abs(dim - (s[i, 0] + s[i, 1]) / s[0, 0]) < 1e-10


def test_local_induction_idempotent(one_e, toric):
    U = ObjectSum.from_labels(toric, ["m"])
    P = local_induction_idempotent(one_e, U)
    assert compose(P, P).dist(P) < 1e-10
    assert P.dist(identity(P.dom)) > 0.1


def test_sigma_sigma_dual_local_induction_is_identity_on_simples(ssd, ising):
    for lab in ising.labels:
        U = ObjectSum.from_labels(ising, [lab])
        S, _, _ = local_induction_object(ssd, U)
        assert S.mult == U.mult


def test_z_matrix_trivial_is_identity(cats):
    for cat in cats.values():
        assert alpha_Z_matrix(trivial_algebra(cat)).is_identity()


def test_z_matrix_toric_frozen(one_e):
    Z = alpha_Z_matrix(one_e)
    assert Z.entries.tolist() == [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert np.array_equal(Z.entries, _local_z_oracle(one_e))


def test_z_matrix_sigma_sigma_dual(ssd):
    assert alpha_Z_matrix(ssd).is_identity()


@pytest.mark.parametrize("oracle", ["rank", "intertwiner"])
def test_z_oracles_agree(one_m, oracle):
    assert alpha_Z_matrix(one_m, oracle) == alpha_Z_matrix(one_m, "both")


def test_z_multiplicativity(toric, one_e, one_m, ssd):
    assert z_multiplicativity_check(trivial_algebra(toric), one_e)[2] == 0
    assert z_multiplicativity_check(ssd, ssd)[2] == 0
    Zab, prod, res = z_multiplicativity_check(one_e, one_m)
    assert res == 0
    assert Zab == prod


def test_tensor_center_check(one_e, one_m, ssd, toric):
    for a, b in ((one_e, one_m), (ssd, ssd), (trivial_algebra(toric), trivial_algebra(toric))):
        rows = tensor_center_check(a, b)
        assert len(rows) == 4
        assert all(r["passed"] for r in rows)


def test_lift_over_unit_gives_B(toric, one_e):
    E, e, r = lift_algebra_E(trivial_algebra(toric), one_e)
    assert E.A.mult == one_e.A.mult
    assert all(E.flags().values())
    assert compose(r, e).dist(identity(E.A)) < 1e-10


def test_lift_of_unit_is_left_center(ssd, ising):
    E, _, _ = lift_algebra_E(ssd, trivial_algebra(ising))
    assert E.A.mult == center(ssd, "l").C.A.mult == (1, 0, 0)


def test_lift_trivializing_algebra_over_itself(t_fib):
    E, _, _ = lift_algebra_E(t_fib, t_fib)
    assert E.A.mult == (2, 0, 0, 2)
    f = E.flags()
    assert f["algebra"] and f["frobenius"] and f["commutative"] and f["symmetric"]
    # E contains the unit twice so it cannot be haploid
    assert not f["haploid"]
