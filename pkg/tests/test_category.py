import numpy as np
import pytest

from frobcat import catalog
from frobcat.acceptance import _perturbed
from frobcat.category import (SkeletalCategory, charge_conjugation, deligne_product, dual_category,
                              dump_category, global_dim_and_charges, is_modular, load_category_file,
                              s_matrix, s_matrix_formula, validate, verify_s_squared)
from oracles import PHI, S_CLOSED_FORM, hexagon_scalar, pentagon_scalar, verlinde


@pytest.mark.parametrize("key", catalog.builtin_keys())
def test_catalog_validates_and_matches_scalar_oracles(key):
    cat = catalog.load_builtin(key)
    rep = validate(cat)
    assert rep.passed
    assert rep.pentagon_residual < 1e-9 and rep.hexagon_residual < 1e-9
    # independent scalar pentagon/hexagon (all catalog entries are multiplicity free)
    assert pentagon_scalar(cat) < 1e-9
    assert hexagon_scalar(cat) < 1e-9


def test_fibonacci_perturbation_detected(fib):
    bad = _perturbed(fib, (1, 1, 1, 1, 0, 0, 0, 0, 0, 0), 1e-3)
    rep = validate(bad)
    assert rep.pentagon_residual > 1e-4 and not rep.passed
    assert pentagon_scalar(bad) > 1e-4


def test_vec_validates_with_zero_residuals(cats):
    rep = validate(cats["vec"])
    assert rep.passed and rep.pentagon_residual == 0 and rep.hexagon_residual == 0


@pytest.mark.parametrize("key", ["vec", "fibonacci", "ising", "toric_code"])
def test_s_matrix_against_closed_form(key):
    cat = catalog.load_builtin(key)
    assert np.max(np.abs(s_matrix(cat) - S_CLOSED_FORM[key])) < 1e-9
    assert np.max(np.abs(s_matrix_formula(cat) - S_CLOSED_FORM[key])) < 1e-9


@pytest.mark.parametrize("key", ["fibonacci", "ising", "toric_code", "pointed_z3_1"])
def test_verlinde_reproduces_fusion(key):
    cat = catalog.load_builtin(key)
    N, err = verlinde(s_matrix(cat))
    assert err < 1e-9
    assert np.array_equal(N, cat.N)


def test_is_modular_examples(cats):
    assert is_modular(cats["vec"]) and is_modular(cats["fibonacci"])
    z4 = cats["pointed_z4_1"]
    assert not is_modular(z4)
    s = s_matrix(z4)
    assert np.allclose(s[0], s[2])


def test_s_squared_and_global_dimensions(cats):
    assert verify_s_squared(cats["vec"]) < 1e-12
    for key, D in (("ising", 4.0), ("toric_code", 4.0), ("fibonacci", 1 + PHI ** 2)):
        cat = cats[key]
        assert verify_s_squared(cat) < 1e-9
        Dim, pp, pm = global_dim_and_charges(cat)
        assert abs(Dim - D) < 1e-9
        assert abs(pp * pm - Dim) < 1e-9
    assert np.allclose(global_dim_and_charges(cats["vec"]), (1, 1, 1))
    Dim, pp, pm = global_dim_and_charges(cats["toric_code"])
    assert abs(pp - 2) < 1e-12 and abs(pm - 2) < 1e-12
    _, pp, _ = global_dim_and_charges(cats["ising"])
    assert abs(abs(pp) - 2) < 1e-12


def test_charge_conjugation_is_involutive_permutation(cats):
    for cat in cats.values():
        C = charge_conjugation(cat)
        assert np.array_equal(C @ C, np.eye(cat.rank))


@pytest.mark.parametrize("key", catalog.builtin_keys())
def test_dual_category(key):
    cat = catalog.load_builtin(key)
    d = dual_category(cat)
    assert validate(d).passed
    assert np.allclose(d.theta, np.conj(cat.theta))
    assert np.max(np.abs(s_matrix(d) - s_matrix(cat)[:, list(cat.dual)])) < 1e-9
    dd = dual_category(d)
    assert dd.name == cat.name
    assert cat.entries_equal(dd)


def test_dual_of_vec_is_vec(cats):
    assert cats["vec"].entries_equal(dual_category(cats["vec"]))


def test_deligne_product(cats):
    ising, fib = cats["ising"], cats["fibonacci"]
    p = deligne_product(ising, fib)
    assert p.rank == 6 and validate(p).passed
    assert p.labels[1 * fib.rank + 1] == "(psi,tau)"
    assert np.max(np.abs(s_matrix(p) - np.kron(s_matrix(ising), s_matrix(fib)))) < 1e-9
    assert np.allclose(p.dims, np.kron(ising.dims, fib.dims))
    assert p.factors == (ising, fib)


def test_fibonacci_shipped_constants(fib):
    tau = fib.label_index("tau")
    F = fib.fblock(tau, tau, tau, tau).mat
    want = np.array([[1 / PHI, PHI ** -0.5], [PHI ** -0.5, -1 / PHI]])
    assert np.max(np.abs(np.abs(F) - np.abs(want))) < 1e-12
    assert abs(fib.theta[tau] - np.exp(4j * np.pi / 5)) < 1e-12
    # shipped R is tied to the twist by R^{tt}_k R^{tt}_k = theta_k / theta_t^2
    for k in (0, tau):
        r = fib.R[(tau, tau, k, 0, 0)]
        assert abs(r * r - fib.theta[k] / fib.theta[tau] ** 2) < 1e-12


def test_fibonacci_listed_R_values_are_the_conjugate_presentation(fib):
    # R^0 = e^{4 pi i/5}, R^tau = e^{-3 pi i/5} solve the hexagons together with
    # the conjugate twist, i.e. they are the R-symbols of the dual category
    d = dual_category(fib)
    tau = fib.label_index("tau")
    assert abs(d.R[(tau, tau, 0, 0, 0)] - np.exp(4j * np.pi / 5)) < 1e-12
    assert abs(d.R[(tau, tau, tau, 0, 0)] - np.exp(-3j * np.pi / 5)) < 1e-12


def test_category_file_round_trip(tmp_path, cats):
    for key in ("ising", "fibonacci", "toric_code"):
        path = tmp_path / f"{key}.json"
        path.write_text(dump_category(cats[key]))
        again = load_category_file(path)
        assert cats[key].entries_equal(again)
        assert validate(again).passed
