import copy

import numpy as np
import pytest

from frobcat import catalog
from frobcat.algebras import simple_current_algebra, trivial_algebra
from frobcat.category import deligne_product, dual_category
from frobcat.coset import (NotModular, PreconditionFailed, build_trivializing_algebra,
                           check_Q_haploid, check_separable, coset_pipeline, embed_algebra,
                           trivializing_host, verify_trivialization)
from frobcat.modules import enumerate_simple_modules
from frobcat.morphisms import ObjectSum
from oracles import PHI


def test_trivializing_object(fib, ising):
    T = build_trivializing_algebra(fib)
    assert T.A.as_dict() == {"(1,1)": 1, "(tau,tau)": 1}
    assert all(T.flags().values())
    T = build_trivializing_algebra(ising)
    assert T.A.as_dict() == {"(1,1)": 1, "(psi,psi)": 1, "(sigma,sigma)": 1}
    assert abs(T.dim - 4) < 1e-12


def test_trivializing_vec():
    vec = catalog.load_builtin("vec")
    rows, T, q = verify_trivialization(vec)
    assert all(r["passed"] for r in rows)
    assert len(enumerate_simple_modules(T)) == 1
    assert q.rank == 1


def test_trivializing_host_cached(fib):
    assert trivializing_host(fib) is trivializing_host(fib)
    assert build_trivializing_algebra(fib).cat is trivializing_host(fib)


@pytest.mark.parametrize("key,nsimp", [("fibonacci", 2), ("ising", 3)])
def test_verify_trivialization(key, nsimp):
    rows, T, q = verify_trivialization(catalog.load_builtin(key))
    failed = [r["name"] for r in rows if not r["passed"]]
    assert not failed
    assert len(enumerate_simple_modules(T)) == nsimp
    assert q.rank == 1 and abs(q.Dim_loc - 1) < 1e-9


def test_trivializing_dimension(fib):
    # dim T = sum_k d_k^2 = Dim G
    assert abs(build_trivializing_algebra(fib).dim - (1 + PHI ** 2)) < 1e-12


def test_trivializing_requires_modular():
    with pytest.raises(NotModular):
        build_trivializing_algebra(catalog.load_builtin("pointed_z4_1"))


def test_q_haploid():
    vec, toric = catalog.load_builtin("vec"), catalog.load_builtin("toric_code")
    QH = deligne_product(vec, toric)
    assert check_Q_haploid(simple_current_algebra(QH, [QH.label_index("(1,e)")]))
    HQ = deligne_product(toric, vec)
    assert not check_Q_haploid(simple_current_algebra(HQ, [HQ.label_index("(e,1)")]))
    assert check_Q_haploid(build_trivializing_algebra(toric))


def test_check_separable(ising):
    assert check_separable(ising) == (True, None)
    bad = copy.copy(ising)
    bad.dims = np.array([1.0, 0.0, np.sqrt(2)])
    assert check_separable(bad) == (False, "psi")


def test_embed_algebra_roundtrip(toric):
    vec = catalog.load_builtin("vec")
    big = deligne_product(toric, vec)
    A = simple_current_algebra(toric, [toric.label_index("m")])
    B = embed_algebra(A, big, {i: i for i in range(toric.rank)})
    assert B.A.as_dict() == {"(1,1)": 1, "(m,1)": 1}
    assert all(B.flags().values())


@pytest.mark.parametrize("key", ["ising", "fibonacci"])
def test_coset_trivializing_closed_loop(key):
    Q = catalog.load_builtin(key + "_dual")
    H = catalog.load_builtin(key)
    rep = coset_pipeline(Q, H, build_trivializing_algebra(Q))
    assert rep.passed
    assert rep.Q_haploid and rep.gamma_trivial
    assert rep.G_summary.rank == 1
    assert rep.Lprime_object == {"1": 1}
    assert rep.dim_relation_residual < 1e-9
    assert rep.equivalence_match == list(range(Q.rank))
    d = rep.to_dict()
    assert d["passed"] is True and isinstance(d["checks"], list)


def test_coset_vec_toric():
    vec, toric = catalog.load_builtin("vec"), catalog.load_builtin("toric_code")
    QH = deligne_product(vec, toric)
    L = simple_current_algebra(QH, [QH.label_index("(1,e)")])
    rep = coset_pipeline(vec, toric, L)
    assert rep.passed
    assert rep.Lprime_object == {"1": 1, "e": 1}
    assert rep.equivalence_match == [0]


def test_coset_rejects_non_haploid():
    vec, toric = catalog.load_builtin("vec"), catalog.load_builtin("toric_code")
    HQ = deligne_product(toric, vec)
    L = simple_current_algebra(HQ, [HQ.label_index("(e,1)")])
    with pytest.raises(PreconditionFailed, match="Q-haploid"):
        coset_pipeline(toric, vec, L)


def test_coset_rejects_non_modular_H():
    vec, z4 = catalog.load_builtin("vec"), catalog.load_builtin("pointed_z4_1")
    L = trivial_algebra(deligne_product(vec, z4))
    with pytest.raises(PreconditionFailed, match="modular"):
        coset_pipeline(vec, z4, L)


def test_coset_rejects_wrong_host(fib, ising):
    with pytest.raises(PreconditionFailed):
        coset_pipeline(ising, fib, build_trivializing_algebra(fib))


def test_coset_rejects_noncommutative(ising):
    from frobcat.algebras import dual_object_algebra
    vec = catalog.load_builtin("vec")
    QH = deligne_product(vec, ising)
    A = dual_object_algebra(ObjectSum.from_labels(QH, ["(1,sigma)"]))
    with pytest.raises(PreconditionFailed, match="commutative"):
        coset_pipeline(vec, ising, A)


def test_dual_presentation_of_fibonacci_host(fib):
    host = trivializing_host(fib)
    assert host.factors[0] is fib
    assert host.factors[1].labels == dual_category(fib).labels
