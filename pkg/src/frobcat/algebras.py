"""Frobenius algebras in a skeletal ribbon category.

An algebra lives on a single :class:`~frobcat.morphisms.ObjectSum` ``A``;
its structure maps are morphisms ``m: (A, A) -> (A)``, ``eta: () -> (A)``,
``delta: (A) -> (A, A)`` and ``eps: (A) -> ()``.  When the coalgebra part is
not supplied it is reconstructed from the product with the counit
``eps_nat = d_A (id x m)(bt_A x id)``.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .morphisms import (Morphism, ObjectSum, braid, compose, compose_all, cup_cap, fuse,
                        identity, quick_trace, tensor, tensor_all, twist_morphism, tuple_basis)
from .numerics import DEFAULT_TOL, Tolerance

__all__ = [
    "FrobeniusAlgebra",
    "NotSpecializable",
    "ZeroDimensional",
    "counit_natural",
    "reconstruct_coproduct",
    "trivial_algebra",
    "simple_current_algebra",
    "dual_object_algebra",
    "tensor_algebra",
    "opposite_algebra",
    "transport_algebra",
    "load_algebra_file",
    "dump_algebra",
]


class NotSpecializable(ValueError):
    """The Frobenius form built from eps_nat is singular."""


class ZeroDimensional(ValueError):
    """Object of vanishing quantum dimension."""


def counit_natural(A: ObjectSum, m: Morphism) -> Morphism:
    """``eps_nat = d_A o (id_{A^v} x m) o (bt_A x id_A)``."""
    Ad = A.dual()
    return compose_all(cup_cap(A, "d"), tensor(identity(Ad), m),
                       tensor(cup_cap(A, "bt"), identity(A)))


def _phi1(A, m, eps):
    """``Phi_1 = ((eps m) x id_{A^v}) (id_A x b_A)``: A -> A^v."""
    return compose(tensor(compose(eps, m), identity(A.dual())), tensor(identity(A), cup_cap(A, "b")))


def _phi2(A, m, eps):
    """``Phi_2 = (id_{A^v} x (eps m)) (bt_A x id_A)``: A -> A^v."""
    return compose(tensor(identity(A.dual()), compose(eps, m)), tensor(cup_cap(A, "bt"), identity(A)))


def reconstruct_coproduct(A: ObjectSum, m: Morphism, eps: Morphism | None = None,
                          tol: Tolerance | None = None):
    """Counit ``eps_nat`` and the coproduct ``(id x m)(id x Phi_1^{-1} x id)(b_A x id)``.

    Raises
    ------
    NotSpecializable
        If ``Phi_1`` is not invertible.
    """
    tol = tol or A.cat.tol
    if eps is None:
        eps = counit_natural(A, m)
    phi = _phi1(A, m, eps)
    for c, B in phi.blocks.items():
        if B.shape[0] != B.shape[1]:
            raise NotSpecializable("A is not isomorphic to its dual")
        sv = np.linalg.svd(B, compute_uv=False)
        if sv.size and sv[-1] <= tol.rank_eps * max(1.0, sv[0]):
            raise NotSpecializable(f"Phi_1 is singular in charge sector {c}")
    if set(phi.dom_basis.trees) != set(phi.cod_basis.trees):
        raise NotSpecializable("A is not isomorphic to its dual")
    phinv = phi.inverse()
    delta = compose_all(tensor(identity(A), m),
                        tensor_all(identity(A), phinv, identity(A)),
                        tensor(cup_cap(A, "b"), identity(A)))
    return delta, eps


class FrobeniusAlgebra:
    """Algebra ``(A, m, eta)`` with Frobenius structure ``(delta, eps)``.

    Property checks are evaluated lazily; each stores its residual, see
    :meth:`report`.
    """

    def __init__(self, A: ObjectSum, m: Morphism, eta: Morphism, delta: Morphism | None = None,
                 eps: Morphism | None = None, name: str = "A", tol: Tolerance | None = None,
                 reconstruct: bool = True):
        self.A = A
        self.cat = A.cat
        self.m = m
        self.eta = eta
        self.name = name
        self.tol = tol or A.cat.tol
        if m.dom != (A, A) or m.cod != (A,):
            raise ValueError("m must map (A, A) -> (A)")
        if eta.dom != () or eta.cod != (A,):
            raise ValueError("eta must map () -> (A)")
        self.reconstruction_error = None
        if delta is None and reconstruct:
            try:
                delta, eps = reconstruct_coproduct(A, m, eps, self.tol)
            except NotSpecializable as exc:
                self.reconstruction_error = str(exc)
                delta = None
        self.delta = delta
        self.eps = eps
        self._flags = {}

    def __repr__(self):
        return f"FrobeniusAlgebra({self.name}, object={self.A})"

    @property
    def dim(self) -> float:
        return self.A.dim

    @property
    def idA(self):
        return identity(self.A)

    # -- residuals ---------------------------------------------------------------
    def _cache(self, key, fn):
        if key not in self._flags:
            self._flags[key] = fn()
        return self._flags[key]

    def _ok(self, res):
        return bool(res <= self.tol.abs_eps * max(1.0, self.scale))

    @property
    def scale(self):
        return max(1.0, self.m.norm())

    def algebra_residual(self) -> float:
        """Associativity and unit laws."""
        def f():
            m, I = self.m, self.idA
            r1 = compose(m, tensor(m, I)).dist(compose(m, tensor(I, m)))
            r2 = compose(m, tensor(self.eta, I)).dist(I)
            r3 = compose(m, tensor(I, self.eta)).dist(I)
            return max(r1, r2, r3)
        return self._cache("algebra", f)

    def check_algebra(self) -> bool:
        return self._ok(self.algebra_residual())

    def frobenius_residual(self) -> float:
        """Coassociativity, counit and the Frobenius compatibility."""
        def f():
            if self.delta is None or self.eps is None:
                return float("inf")
            m, D, I = self.m, self.delta, self.idA
            mid = compose(D, m)
            r1 = compose(tensor(I, m), tensor(D, I)).dist(mid)
            r2 = compose(tensor(m, I), tensor(I, D)).dist(mid)
            r3 = compose(tensor(D, I), D).dist(compose(tensor(I, D), D))
            r4 = compose(tensor(self.eps, I), D).dist(I)
            r5 = compose(tensor(I, self.eps), D).dist(I)
            return max(r1, r2, r3, r4, r5)
        return self._cache("frobenius", f)

    def check_frobenius(self) -> bool:
        return self._ok(self.frobenius_residual())

    def special_data(self):
        """``(beta_1, beta_A, residual)`` with ``eps eta = beta_1``, ``m delta = beta_A id``."""
        def f():
            if self.delta is None or self.eps is None:
                return (0.0, 0.0, float("inf"))
            b1 = compose(self.eps, self.eta).scalar()
            md = compose(self.m, self.delta)
            # read beta_A off the first diagonal entry, then test proportionality
            B0 = next(B for B in md.blocks.values() if B.size)
            bA = B0[0, 0]
            res = md.dist(bA * self.idA)
            if abs(b1) <= self.tol.abs_eps or abs(bA) <= self.tol.abs_eps:
                res = max(res, 1.0)
            return (complex(b1), complex(bA), res)
        return self._cache("special", f)

    @property
    def beta_one(self):
        return self.special_data()[0]

    @property
    def beta_A(self):
        return self.special_data()[1]

    def check_special(self) -> bool:
        return self._ok(self.special_data()[2])

    def symmetric_residual(self) -> float:
        """``||Phi_1 - Phi_2||``."""
        def f():
            if self.eps is None:
                return float("inf")
            return _phi1(self.A, self.m, self.eps).dist(_phi2(self.A, self.m, self.eps))
        return self._cache("symmetric", f)

    def check_symmetric(self) -> bool:
        return self._ok(self.symmetric_residual())

    def commutative_residual(self) -> float:
        """``||m o c_{A,A} - m||``."""
        return self._cache("commutative",
                           lambda: compose(self.m, braid(self.A, self.A)).dist(self.m))

    def check_commutative(self) -> bool:
        return self._ok(self.commutative_residual())

    def check_haploid(self) -> bool:
        return self.A.mult[0] == 1

    def check_simple(self) -> bool:
        """``Z(A)_{00} = 1`` from the bimodule intertwiner solve."""
        def f():
            from .centers import bimodule_hom_dim
            return bimodule_hom_dim(self, 0, 0)
        return self._cache("simple", f) == 1

    def trivial_twist_residual(self) -> float:
        return self._cache("twist", lambda: twist_morphism(self.A).dist(self.idA))

    def check_trivial_twist(self) -> bool:
        return self._ok(self.trivial_twist_residual())

    def is_ssfa(self) -> bool:
        """Symmetric special Frobenius algebra."""
        return (self.check_algebra() and self.check_frobenius() and self.check_special()
                and self.check_symmetric())

    def report(self, include_simple: bool = True):
        """List of ``{"name", "passed", "residual"}`` rows."""
        rows = [
            ("algebra", self.check_algebra(), self.algebra_residual()),
            ("frobenius", self.check_frobenius(), self.frobenius_residual()),
            ("special", self.check_special(), self.special_data()[2]),
            ("symmetric", self.check_symmetric(), self.symmetric_residual()),
            ("commutative", self.check_commutative(), self.commutative_residual()),
            ("haploid", self.check_haploid(), 0.0),
            ("trivial_twist", self.check_trivial_twist(), self.trivial_twist_residual()),
        ]
        if include_simple:
            rows.append(("simple", self.check_simple(), 0.0))
        return [{"name": n, "passed": bool(p), "residual": float(r), "witness": None}
                for n, p, r in rows]

    def flags(self):
        return {r["name"]: r["passed"] for r in self.report()}

    # -- normalisation -------------------------------------------------------------
    def normalized(self) -> "FrobeniusAlgebra":
        """Rescale ``(delta, eps)`` so that ``m o delta = id`` (keeps ``eps eta`` = dim A)."""
        b1, bA, res = self.special_data()
        if not np.isfinite(res) or abs(bA) < self.tol.abs_eps:
            return self
        return FrobeniusAlgebra(self.A, self.m, self.eta, self.delta / bA, self.eps * bA,
                                self.name, self.tol)


# -- constructors ------------------------------------------------------------------

def trivial_algebra(cat) -> FrobeniusAlgebra:
    """The tensor unit as an algebra."""
    one = ObjectSum.unit(cat)
    m = Morphism((one, one), (one,), {0: np.ones((1, 1))})
    eta = Morphism((), (one,), {0: np.ones((1, 1))}, cat)
    return FrobeniusAlgebra(one, m, eta, name="1")


def transport_algebra(X, m_t: Morphism, eta_t: Morphism, name="A", delta_t=None,
                      eps_t=None) -> FrobeniusAlgebra:
    """Algebra on a tuple `X` moved to the fused single object."""
    X = tuple(X)
    if len(X) == 1:
        return FrobeniusAlgebra(X[0], m_t, eta_t, delta_t, eps_t, name=name)
    A, phi, phinv = fuse(X)
    m = compose_all(phi, m_t, tensor(phinv, phinv))
    eta = compose(phi, eta_t)
    delta = eps = None
    if delta_t is not None:
        delta = compose_all(tensor(phi, phi), delta_t, phinv)
        eps = compose(eps_t, phinv)
    return FrobeniusAlgebra(A, m, eta, delta, eps, name=name)


def simple_current_algebra(cat, labels) -> FrobeniusAlgebra:
    """``A = sum_h U_h`` over a group of invertible labels, product ``U_h U_g -> U_{hg}``."""
    labels = sorted(set(int(x) for x in labels) | {0})
    for h in labels:
        if cat.N[h, cat.dual[h]].sum() != 1:
            raise ValueError(f"label {cat.labels[h]} is not invertible")
    mult = [0] * cat.rank
    for h in labels:
        mult[h] = 1
    A = ObjectSum(cat, mult)
    dom = tuple_basis((A, A))
    blocks = {}
    for c, trees in dom.trees.items():
        B = np.zeros((A.mult[c], len(trees)), complex)
        if A.mult[c]:
            for col, t in enumerate(trees):
                B[0, col] = 1.0
        blocks[c] = B
    for c in list(blocks):
        if A.mult[c] == 0:
            if np.any(blocks[c]):
                raise ValueError("labels do not form a group")
            del blocks[c]
    # closure check
    for h in labels:
        for g in labels:
            k = int(np.argmax(cat.N[h, g]))
            if k not in labels:
                raise ValueError("labels do not form a group")
    m = Morphism((A, A), (A,), blocks)
    eta = Morphism((), (A,), {0: np.ones((1, 1))}, cat)
    name = "+".join(cat.labels[h] for h in labels)
    return FrobeniusAlgebra(A, m, eta, name=name)


def dual_object_algebra(U: ObjectSum) -> FrobeniusAlgebra:
    """``A = U x U^v`` with product ``id_U x d_U x id_{U^v}`` and unit ``b_U``.

    Raises
    ------
    ZeroDimensional
    """
    if abs(U.dim) < 1e-12:
        raise ZeroDimensional("dim U = 0")
    Ud = U.dual()
    m_t = tensor_all(identity(U), cup_cap(U, "d"), identity(Ud))
    eta_t = cup_cap(U, "b")
    return transport_algebra((U, Ud), m_t, eta_t, name=f"{U}x{U}^v")


def tensor_algebra(a: FrobeniusAlgebra, b: FrobeniusAlgebra, sign: str = "+") -> FrobeniusAlgebra:
    """``A x^+ B``: product ``(m_A x m_B)(id x c^{-1}_{A,B} x id)`` and the mirrored coproduct.

    ``sign='-'`` exchanges over- and under-braiding in both.  With this
    labelling ``Z(A x^+ B) = Z(A) Z(B)``.
    """
    A, B = a.A, b.A
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if sign == "+":
        mid_m = braid(A, B, inverse=True)   # B x A -> A x B
        mid_d = braid(A, B)                 # A x B -> B x A
    else:
        mid_m = braid(B, A)                 # B x A -> A x B
        mid_d = braid(B, A, inverse=True)   # A x B -> B x A
    m_t = compose(tensor(a.m, b.m), tensor_all(identity(A), mid_m, identity(B)))
    eta_t = tensor(a.eta, b.eta)
    delta_t = eps_t = None
    if a.delta is not None and b.delta is not None:
        delta_t = compose(tensor_all(identity(A), mid_d, identity(B)), tensor(a.delta, b.delta))
        eps_t = tensor(a.eps, b.eps)
    return transport_algebra((A, B), m_t, eta_t, name=f"({a.name})x{sign}({b.name})",
                             delta_t=delta_t, eps_t=eps_t)


def opposite_algebra(alg: FrobeniusAlgebra) -> FrobeniusAlgebra:
    """``m' = m o c_{A,A}``, ``delta' = c^{-1}_{A,A} o delta``."""
    A = alg.A
    m = compose(alg.m, braid(A, A))
    delta = None if alg.delta is None else compose(braid(A, A, inverse=True), alg.delta)
    return FrobeniusAlgebra(A, m, alg.eta, delta, alg.eps, name=f"{alg.name}^op")


# -- file format -------------------------------------------------------------------

def _tree_to_list(t):
    leaves, internals, mults = t
    return [x for leaf in leaves for x in leaf] + list(internals) + list(mults)


def _tree_from_list(lst, n):
    lst = [int(x) for x in lst]
    leaves = tuple((lst[2 * k], lst[2 * k + 1]) for k in range(n))
    internals = tuple(lst[2 * n:3 * n])
    mults = tuple(lst[3 * n:3 * n + max(0, n - 1)])
    return (leaves, internals, mults)


def _morphism_to_rows(f: Morphism):
    return [[_tree_to_list(td), _tree_to_list(tc), v.real, v.imag]
            for (td, tc), v in sorted(f.entries().items(), key=repr)]


def _morphism_from_rows(rows, dom, cod, cat):
    f = Morphism(dom, cod, cat=cat)
    bd, bc = f.dom_basis, f.cod_basis
    for td_l, tc_l, re, im in rows:
        td = _tree_from_list(td_l, len(dom))
        tc = _tree_from_list(tc_l, len(cod))
        c = td[1][-1] if td[1] else 0
        f.blocks[c][bc.index[c][tc], bd.index[c][td]] += complex(re, im)
    return f


def dump_algebra(alg: FrobeniusAlgebra, path=None) -> str:
    cat = alg.cat
    d = {"object": [[cat.labels[i], m] for i, m in enumerate(alg.A.mult) if m],
         "m": _morphism_to_rows(alg.m), "eta": _morphism_to_rows(alg.eta)}
    if alg.delta is not None:
        d["delta"] = _morphism_to_rows(alg.delta)
        d["eps"] = _morphism_to_rows(alg.eps)
    text = json.dumps(d, indent=1)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def load_algebra_file(path, cat) -> FrobeniusAlgebra:
    """Read an algebra in the JSON algebra format over `cat`."""
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    mult = [0] * cat.rank
    for lab, k in d["object"]:
        mult[cat.label_index(int(lab) if isinstance(lab, int) else lab)] += int(k)
    A = ObjectSum(cat, mult)
    m = _morphism_from_rows(d["m"], (A, A), (A,), cat)
    eta = _morphism_from_rows(d["eta"], (), (A,), cat)
    delta = eps = None
    if "delta" in d and "eps" in d:
        delta = _morphism_from_rows(d["delta"], (A,), (A, A), cat)
        eps = _morphism_from_rows(d["eps"], (A,), (), cat)
    return FrobeniusAlgebra(A, m, eta, delta, eps, name=Path(path).stem)
