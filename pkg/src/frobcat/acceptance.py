"""Acceptance suite: thirteen end-to-end criteria with stated tolerances.

Each criterion function returns a :class:`CriterionResult`; :func:`run_all`
evaluates them in order.  Used by ``frobcat selftest`` and the test-suite.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import catalog
from .algebras import (FrobeniusAlgebra, dual_object_algebra, simple_current_algebra,
                       tensor_algebra, trivial_algebra)
from .category import (SkeletalCategory, deligne_product, dual_category, global_dim_and_charges,
                       is_modular, s_matrix, s_matrix_formula, validate, verify_s_squared)
from .centers import (alpha_Z_matrix, center, dim_local_induction_check, local_induction_object,
                      tensor_center_check, z_multiplicativity_check)
from .coset import build_trivializing_algebra, coset_pipeline, verify_trivialization
from .modules import (enumerate_simple_modules, locality_criteria, quotient_summary, tensor_over_A,
                      verify_iterated_extension, verify_thm_equiv)
from .morphisms import (ObjectSum, braid, compose, cup_cap, identity, random_morphism, tensor,
                        trace, twist_morphism)
from .numerics import DEFAULT_TOL, Tolerance, max_abs, perron_vector

__all__ = ["CriterionResult", "CRITERIA", "run_all", "run_criterion", "catalog_ssfas",
           "random_property_residuals"]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d}: {self.title} ({self.seconds:.2f} s)"

    def to_dict(self):
        return {"name": f"criterion {self.number}: {self.title}", "passed": self.passed,
                "residual": float(self.detail.get("residual", 0.0)), "witness": self.detail,
                "seconds": self.seconds}


def _fib_phi():
    fib = catalog.load_builtin("fibonacci")
    v = perron_vector(fib.N[:, 1, :].T)
    return v[1] / v[0]


def _perturbed(cat: SkeletalCategory, key, delta) -> SkeletalCategory:
    F = dict(cat.F)
    F[key] = F.get(key, 0.0) + delta
    return SkeletalCategory(cat.name + "_perturbed", cat.labels, cat.dual, cat.N, F, cat.R,
                            cat.theta, cat.dims, cat.pivotal, cat.tol)


# -- catalog algebras ---------------------------------------------------------------------

def _subgroups(cat):
    """Subgroups of the invertible labels of a pointed category (as label lists)."""
    inv = [i for i in range(cat.rank) if cat.N[i, cat.dual[i]].sum() == 1]
    out = []
    for k in range(1, len(inv) + 1):
        for sub in itertools.combinations(inv, k):
            if 0 not in sub:
                continue
            closed = all(cat.N[a, b].argmax() in sub for a in sub for b in sub)
            if closed:
                out.append(list(sub))
    return out


def catalog_ssfas(commutative_only=False):
    """``(label, algebra)`` for the catalog algebras used in the criteria.

    Simple-current algebras over every subgroup of invertibles, ``U x U^v``
    for every non-invertible simple ``U``, and ``T_G`` for the modular
    entries.  Only symmetric special Frobenius algebras are returned.
    """
    out = []
    for key in ("vec", "toric_code", "pointed_z3_1", "pointed_z4_1", "fibonacci", "ising"):
        cat = catalog.load_builtin(key)
        out.append((f"{key}:trivial", trivial_algebra(cat)))
        for sub in _subgroups(cat):
            if len(sub) > 1:
                names = ",".join(cat.labels[i] for i in sub)
                out.append((f"{key}:simple_current:{{{names}}}", simple_current_algebra(cat, sub)))
        for i in range(cat.rank):
            if cat.N[i, cat.dual[i]].sum() > 1:
                out.append((f"{key}:dual_object:{cat.labels[i]}",
                            dual_object_algebra(ObjectSum.simple(cat, i))))
        if key in ("toric_code", "fibonacci", "ising"):
            out.append((f"{key}:T_G", build_trivializing_algebra(cat)))
    out = [(n, a) for n, a in out if a.is_ssfa()]
    if commutative_only:
        out = [(n, a) for n, a in out if a.check_commutative()]
    return out


# -- criteria ----------------------------------------------------------------------------

def c01_axioms(tol: Tolerance):
    eps = 1e-9
    detail = {}
    ok = True
    for key in ("vec", "toric_code", "pointed_z3_1", "fibonacci", "ising"):
        cat = catalog.load_builtin(key)
        t0 = time.perf_counter()
        rep = validate(cat, tol)
        dt = time.perf_counter() - t0
        detail[key] = {"pentagon": rep.pentagon_residual, "hexagon": rep.hexagon_residual,
                       "seconds": dt}
        ok &= rep.pentagon_residual < eps and rep.hexagon_residual < eps and dt < 1.0
    fib = catalog.load_builtin("fibonacci")
    bad = _perturbed(fib, (1, 1, 1, 1, 1, 1, 0, 0, 0, 0), 1e-3)
    pent = validate(bad, tol).pentagon_residual
    detail["fibonacci+1e-3"] = pent
    ok &= pent > 1e-4
    detail["residual"] = max(detail[k]["pentagon"] for k in detail if isinstance(detail[k], dict))
    return ok, detail


def c02_s_squared(tol: Tolerance):
    phi = _fib_phi()
    want = {"toric_code": 4.0, "ising": 4.0, "fibonacci": 1 + phi ** 2}
    detail, ok = {}, True
    for key, D in want.items():
        cat = catalog.load_builtin(key)
        res = verify_s_squared(cat, tol)
        Dim = global_dim_and_charges(cat, tol)[0]
        detail[key] = {"s2_residual": res, "Dim": Dim, "Dim_expected": D}
        ok &= res < 1e-9 and abs(Dim - D) < 1e-9
    detail["residual"] = max(v["s2_residual"] for v in detail.values())
    return ok, detail


def c03_s_double_oracle(tol: Tolerance):
    detail = {}
    for key in catalog.builtin_keys():
        cat = catalog.load_builtin(key)
        detail[key] = max_abs(s_matrix(cat, tol) - s_matrix_formula(cat))
    res = max(detail.values())
    detail["residual"] = res
    return res < 1e-9, detail


def c04_dual_product(tol: Tolerance):
    detail = {}
    for key in catalog.builtin_keys():
        cat = catalog.load_builtin(key)
        s, sb = s_matrix(cat, tol), s_matrix(dual_category(cat), tol)
        detail[f"{key}: sbar - s[:, dual]"] = max_abs(sb - s[:, list(cat.dual)])
    ising, fib = catalog.load_builtin("ising"), catalog.load_builtin("fibonacci")
    prod = deligne_product(ising, fib)
    detail["kron"] = max_abs(s_matrix(prod, tol) - np.kron(s_matrix(ising, tol), s_matrix(fib, tol)))
    res = max(detail.values())
    detail["residual"] = res
    return res < 1e-9, detail


def c05_trivialization(tol: Tolerance):
    detail, ok = {}, True
    for key, nsimp in (("fibonacci", 2), ("ising", 3)):
        t0 = time.perf_counter()
        g = catalog.load_builtin(key)
        rows, T, q = verify_trivialization(g)
        dt = time.perf_counter() - t0
        nmods = len(enumerate_simple_modules(T))
        nloc = sum(1 for M in enumerate_simple_modules(T) if M.is_local())
        passed = (all(r["passed"] for r in rows) and nmods == nsimp and nloc == 1
                  and q.rank == 1 and abs(q.Dim_loc - 1) <= 1e-9 and dt < 30)
        detail[key] = {"simples": nmods, "local": nloc, "quotient_rank": q.rank,
                       "Dim_loc": q.Dim_loc, "failed_rows": [r["name"] for r in rows
                                                            if not r["passed"]],
                       "seconds": dt}
        ok &= passed
    detail["residual"] = max(abs(detail[k]["Dim_loc"] - 1) for k in ("fibonacci", "ising"))
    return ok, detail


def c06_simple_current(tol: Tolerance):
    cat = catalog.load_builtin("toric_code")
    A = simple_current_algebra(cat, [cat.label_index("e")])
    mods = enumerate_simple_modules(A)
    loc = [M for M in mods if M.is_local()]
    q = quotient_summary(A)
    Dim = global_dim_and_charges(cat, tol)[0]
    r_dim = abs(q.Dim_loc - Dim / A.dim ** 2)
    r_dim_A = max(abs(M.dim_A - M.dim / A.dim) for M in mods)
    r_tensor_dim = 0.0
    for M, N in itertools.product(loc, repeat=2):
        r_tensor_dim = max(r_tensor_dim, abs(tensor_over_A(M, N).dim - M.dim * N.dim / A.dim))
    res = max(r_dim, r_dim_A, r_tensor_dim)
    ok = len(mods) == 2 and len(loc) == 1 and abs(q.Dim_loc - 1) < 1e-9 and res < 1e-9
    return ok, {"simples": len(mods), "local": len(loc), "Dim_loc": q.Dim_loc,
                "Dim_residual": r_dim, "dim_A_residual": r_dim_A, "tensor_dim_residual": r_tensor_dim,
                "residual": res}


def c07_locality(tol: Tolerance):
    disagreements, total = [], 0
    for name, A in catalog_ssfas(commutative_only=True):
        for M in enumerate_simple_modules(A):
            a, b, c, res = locality_criteria(M)
            total += 1
            if len({a, b, c}) != 1:
                disagreements.append((name, M.name, [a, b, c]))
    return not disagreements, {"modules": total, "disagreements": disagreements,
                               "residual": float(len(disagreements))}


def c08_alpha_induction(tol: Tolerance):
    ising = catalog.load_builtin("ising")
    s = ising.label_index("sigma")
    A = dual_object_algebra(ObjectSum.simple(ising, s))
    Z = alpha_Z_matrix(A, oracle="both")
    ok = Z.is_identity()
    Cl, Cr = center(A, "l"), center(A, "r")
    unit = ObjectSum.unit(ising)
    ok &= Cl.C.A == unit and Cr.C.A == unit
    elr = True
    for j in range(ising.rank):
        U = ObjectSum.simple(ising, j)
        elr &= local_induction_object(A, U, "l")[0] == U
    ok &= elr
    worst = 0.0
    for name, B in catalog_ssfas(commutative_only=True):
        for i in range(B.cat.rank):
            worst = max(worst, dim_local_induction_check(B, ObjectSum.simple(B.cat, i))[2])
    ok &= worst < 1e-9
    return ok, {"Z_identity": Z.is_identity(), "centers_trivial": [Cl.C.A == unit, Cr.C.A == unit],
                "E_l(U)=U": elr, "dimE_residual": worst, "residual": worst}


def _toric_pairs():
    cat = catalog.load_builtin("toric_code")
    e, m = cat.label_index("e"), cat.label_index("m")
    one_e = simple_current_algebra(cat, [e])
    one_m = simple_current_algebra(cat, [m])
    return cat, one_e, one_m


def c09_z_multiplicativity(tol: Tolerance):
    cat, one_e, one_m = _toric_pairs()
    ising = catalog.load_builtin("ising")
    sig = dual_object_algebra(ObjectSum.simple(ising, ising.label_index("sigma")))
    one_psi = simple_current_algebra(ising, [ising.label_index("psi")])
    pairs = {"toric (1+e, 1+m)": (one_e, one_m), "toric (1+m, 1+e)": (one_m, one_e),
             "toric (1+e, 1+e)": (one_e, one_e), "ising (1+psi, ss*)": (one_psi, sig),
             "ising (ss*, 1+psi)": (sig, one_psi)}
    detail, ok = {}, True
    for name, (a, b) in pairs.items():
        Zab, prod, res = z_multiplicativity_check(a, b, "+")
        detail[name] = res
        ok &= res == 0
    detail["residual"] = float(max(detail.values()))
    return ok, detail


def c10_thm_equiv(tol: Tolerance):
    detail, ok = {}, True
    algs = list(catalog_ssfas())
    cat, one_e, one_m = _toric_pairs()
    nc = tensor_algebra(one_e, one_m, "+")
    algs.append(("toric_code:(1+e)x+(1+m)", nc))
    noncomm = 0
    for name, A in algs:
        rep = verify_thm_equiv(A)
        detail[name] = rep["permutation"]
        ok &= rep["passed"]
        noncomm += not A.check_commutative()
    ok &= noncomm >= 1
    tt = catalog.load_builtin("toric_code*toric_code")
    a = simple_current_algebra(tt, [tt.label_index("(e,1)")])
    b = simple_current_algebra(tt, [tt.label_index("(1,m)")])
    rows = tensor_center_check(a, b)
    tc = all(r["passed"] for r in rows)
    detail["tensor_center toric x toric"] = tc
    detail["noncommutative_cases"] = noncomm
    detail["residual"] = max(r["residual"] for r in rows)
    return ok and tc, detail


def c11_iterated(tol: Tolerance):
    tt = catalog.load_builtin("toric_code*toric_code")
    A = simple_current_algebra(tt, [tt.label_index("(e,1)")])
    B = simple_current_algebra(tt, [tt.label_index("(1,e)")])
    rep = verify_iterated_extension(A, B)
    return rep["passed"], {"permutation": rep["permutation"], "rank_nested": rep["nested"].rank,
                           "rank_direct": rep["direct"].rank,
                           "failed": [c["name"] for c in rep["checks"] if not c["passed"]],
                           "residual": 0.0 if rep["passed"] else 1.0}


def c12_coset(tol: Tolerance):
    t0 = time.perf_counter()
    detail, ok = {}, True
    for key in ("ising", "fibonacci"):
        Q = catalog.load_builtin(key + "_dual")
        H = catalog.load_builtin(key)
        L = build_trivializing_algebra(Q)
        rep = coset_pipeline(Q, H, L, tol=1e-9)
        unit_only = rep.Lprime_object == {"1": 1} or rep.Lprime_object == {H.labels[0]: 1}
        ok &= (rep.passed and rep.Q_haploid and rep.G_summary.rank == 1 and rep.gamma_trivial
               and unit_only and rep.dim_relation_residual < 1e-9
               and rep.equivalence_match is not None)
        detail[key] = {"passed": rep.passed, "Lprime": rep.Lprime_object,
                       "dim_relation_residual": rep.dim_relation_residual,
                       "match": rep.equivalence_match}
    dt = time.perf_counter() - t0
    detail["seconds"] = dt
    detail["residual"] = max(detail[k]["dim_relation_residual"] for k in ("ising", "fibonacci"))
    return ok and dt < 120, detail


# -- property suite ----------------------------------------------------------------------

_PROP_CATS = ("toric_code", "pointed_z3_1", "fibonacci", "ising", "ising_dual")


def _random_object(cat, rng, max_mult=2):
    while True:
        mult = rng.integers(0, max_mult + 1, size=cat.rank)
        if mult.sum():
            return ObjectSum(cat, mult)


def _normalized(f):
    n = f.norm()
    return f / n if n > 0 else f


def random_property_residuals(seed: int):
    """Residuals of the six engine identities on one random instance."""
    rng = np.random.default_rng(seed)
    cat = catalog.load_builtin(_PROP_CATS[seed % len(_PROP_CATS)])
    X, Y, Z, W = (_random_object(cat, rng) for _ in range(4))
    rm = lambda d, c: _normalized(random_morphism(d, c, rng))
    f, g, h = rm((X,), (Y,)), rm((Y,), (Z,)), rm((Z,), (W,))
    out = {}
    out["associativity"] = compose(h, compose(g, f)).dist(compose(compose(h, g), f))
    f2, g2 = rm((Y,), (Z,)), rm((Z,), (W,))
    lhs = compose(tensor(g, g2), tensor(f, f2))
    rhs = tensor(compose(g, f), compose(g2, f2))
    out["interchange"] = lhs.dist(rhs)
    a, b = rm((X,), (Z,)), rm((Y,), (W,))
    out["braid_naturality"] = compose(braid(Z, W), tensor(a, b)).dist(
        compose(tensor(b, a), braid(X, Y)))
    out["twist_functoriality"] = compose(twist_morphism(Y), f).dist(
        compose(f, twist_morphism(X)))
    k = rm((Y,), (X,))
    t1, t2 = trace(compose(k, f)), trace(compose(f, k))
    out["trace_cyclicity"] = abs(t1 - t2) / max(1.0, abs(t1))
    Xd = X.dual()
    z1 = compose(tensor(identity((X,)), cup_cap(X, "d")), tensor(cup_cap(X, "b"), identity((X,))))
    z2 = compose(tensor(cup_cap(X, "d"), identity((Xd,))), tensor(identity((Xd,)), cup_cap(X, "b")))
    out["zigzag"] = max(z1.dist(identity((X,))), z2.dist(identity((Xd,))))
    return out


def c13_properties(tol: Tolerance, n: int = 100):
    worst = {}
    for seed in range(n):
        for k, v in random_property_residuals(seed).items():
            worst[k] = max(worst.get(k, 0.0), float(v))
    worst["instances"] = n
    res = max(v for k, v in worst.items() if k != "instances")
    worst["residual"] = res
    return res < 1e-9, worst


CRITERIA = [
    (1, "axiom validation and perturbation", c01_axioms),
    (2, "s^2 = Dim C and global dimensions", c02_s_squared),
    (3, "s-matrix diagram vs formula", c03_s_double_oracle),
    (4, "dual category and Deligne product s-matrices", c04_dual_product),
    (5, "T_G trivialization", c05_trivialization),
    (6, "simple-current extension of toric code", c06_simple_current),
    (7, "locality criteria agree", c07_locality),
    (8, "alpha-induction for sigma x sigma^v", c08_alpha_induction),
    (9, "Z(A x+ B) = Z(A) Z(B)", c09_z_multiplicativity),
    (10, "left/right center comparator", c10_thm_equiv),
    (11, "iterated extension", c11_iterated),
    (12, "coset closed loop", c12_coset),
    (13, "morphism-engine property suite", c13_properties),
]


def run_criterion(number: int, tol: Tolerance = DEFAULT_TOL) -> CriterionResult:
    num, title, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(tol)
    except Exception as exc:  # a crash is a failure, reported with its message
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return CriterionResult(num, title, bool(ok), detail, time.perf_counter() - t0)


def run_all(tol: Tolerance = DEFAULT_TOL, echo=None):
    out = []
    for num, _, _ in CRITERIA:
        res = run_criterion(num, tol)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
