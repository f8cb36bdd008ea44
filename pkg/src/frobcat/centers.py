"""Central idempotents, left/right centers, local induction and alpha-induction.

Conventions
-----------
For a symmetric special Frobenius algebra ``A`` and an object ``U`` the two
alpha-induced bimodules live on ``A x U`` with left action ``m x id_U`` and
right actions

* ``alpha+``: ``(m x id_U) (id_A x c_{U,A})``,
* ``alpha-``: ``(m x id_U) (id_A x c^{-1}_{A,U})``.

The local-induction idempotent ``P^l_A(U)`` is the endomorphism of ``A x U``
that projects ``Hom(A x U, V)`` onto bimodule maps ``alpha-(U) -> alpha+(V)``;
``P^r_A(U)`` exchanges the roles of the two right actions.  For ``U = 1``
they reduce to the central idempotents ``P^l_A``, ``P^r_A``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebras import FrobeniusAlgebra, tensor_algebra
from .category import s_matrix_formula
from .morphisms import (Morphism, ObjectSum, braid, compose, compose_all, fuse, identity,
                        image_of_idempotent, quick_trace, tensor, tensor_all, twist_morphism,
                        tuple_basis)
from .numerics import round_to_int, solve_intertwiner_space

__all__ = [
    "NotSSFA",
    "OracleDisagreement",
    "CenterResult",
    "ZMatrix",
    "central_idempotent",
    "center",
    "right_action",
    "local_induction_idempotent",
    "local_induction_object",
    "dim_local_induction_check",
    "bimodule_hom_space",
    "bimodule_hom_dim",
    "alpha_Z_matrix",
    "z_multiplicativity_check",
    "tensor_center_check",
    "lift_algebra_E",
    "restrict_algebra",
    "linear_constraints",
]


class NotSSFA(ValueError):
    """The algebra is not symmetric special Frobenius."""


class OracleDisagreement(ArithmeticError):
    """Two independent computations of the same quantity differ."""


def _require_ssfa(alg):
    if not (alg.check_symmetric() and alg.check_special()):
        raise NotSSFA(f"{alg.name}: symmetric={alg.check_symmetric()}, "
                      f"special={alg.check_special()}")


def _delta_eta(alg):
    return compose(alg.delta, alg.eta)


def central_idempotent(alg: FrobeniusAlgebra, side: str = "l") -> Morphism:
    """``P^l_A = m (m x id)(c_{A,A} x id)(id x delta eta)``; ``P^r_A`` mirrored.

    Raises
    ------
    NotSSFA
    """
    _require_ssfa(alg)
    A, I = alg.A, alg.idA
    de = _delta_eta(alg)
    if side == "l":
        return compose_all(alg.m, tensor(alg.m, I), tensor(braid(A, A), I), tensor(I, de))
    if side == "r":
        return compose_all(alg.m, tensor(I, alg.m), tensor(I, braid(A, A)), tensor(de, I))
    raise ValueError("side must be 'l' or 'r'")


def restrict_algebra(m, eta, delta, eps, e, r, xi=1.0, name="E") -> FrobeniusAlgebra:
    """Algebra on a retract ``(S, e, r)`` of the underlying object of `m`.

    ``m_S = r m (e x e)``, ``eta_S = r eta``, ``delta_S = xi^{-1} (r x r) delta e``,
    ``eps_S = xi eps e``.
    """
    S = e.dom[0]
    mS = compose_all(r, m, tensor(e, e))
    etaS = compose(r, eta)
    dS = epsS = None
    if delta is not None and eps is not None:
        dS = compose_all(tensor(r, r), delta, e) / xi
        epsS = compose(eps, e) * xi
    return FrobeniusAlgebra(S, mS, etaS, dS, epsS, name=name)


@dataclass
class CenterResult:
    side: str
    C: FrobeniusAlgebra
    e: Morphism
    r: Morphism
    P: Morphism


def center(alg: FrobeniusAlgebra, side: str = "l") -> CenterResult:
    """Left or right center as a retract of ``A`` with ``zeta = dim C / dim A``."""
    P = central_idempotent(alg, side)
    S, e, r = image_of_idempotent(P, alg.tol)
    zeta = S.dim / alg.dim
    C = restrict_algebra(alg.m, alg.eta, alg.delta, alg.eps, e, r, xi=zeta,
                         name=f"C_{side}({alg.name})")
    return CenterResult(side, C, e, r, P)


def right_action(alg: FrobeniusAlgebra, U: ObjectSum, sign: str) -> Morphism:
    """Right action ``(A, U, A) -> (A, U)`` of ``alpha^{sign}(U)``."""
    A = alg.A
    if sign == "+":
        br = braid(U, A)                  # U x A -> A x U
    elif sign == "-":
        br = braid(A, U, inverse=True)    # U x A -> A x U
    else:
        raise ValueError("sign must be '+' or '-'")
    return compose(tensor(alg.m, identity(U)), tensor(identity(A), br))


def local_induction_idempotent(alg: FrobeniusAlgebra, U: ObjectSum, side: str = "l") -> Morphism:
    """``P^{l/r}_A(U)`` as an endomorphism of the tuple ``(A, U)``."""
    _require_ssfa(alg)
    A, I = alg.A, alg.idA
    IU = identity(U)
    epsm = compose(alg.eps, alg.m)
    if side == "l":
        rho = right_action(alg, U, "-")
        br = braid((A, U), A)                   # (A, U, A) -> (A, A, U)
    elif side == "r":
        rho = right_action(alg, U, "+")
        br = braid(A, (A, U), inverse=True)     # (A, U, A) -> (A, A, U)
    else:
        raise ValueError("side must be 'l' or 'r'")
    return compose_all(tensor_all(epsm, I, IU),
                       tensor(I, br),
                       tensor_all(alg.delta, IU, I),
                       tensor(rho, I),
                       tensor_all(I, IU, _delta_eta(alg)))


def local_induction_object(alg: FrobeniusAlgebra, U: ObjectSum, side: str = "l"):
    """Retract ``(E, e, r)`` of ``(A, U)`` splitting ``P^{side}_A(U)``."""
    P = local_induction_idempotent(alg, U, side)
    return image_of_idempotent(P, alg.tol)


def dim_local_induction_check(alg: FrobeniusAlgebra, U: ObjectSum):
    """``(dim E_A(U), s_{U,A}, residual)`` with ``s_{U,A} = sum_i [A:i] s_{U,i}/s_{0,0}``."""
    cat = alg.cat
    S, _, _ = local_induction_object(alg, U, "l")
    s = s_matrix_formula(cat)
    s = s / s[0, 0]
    pred = sum(np.dot(U.mult, s[:, i]) * alg.A.mult[i] for i in range(cat.rank))
    return S.dim, complex(pred), abs(S.dim - pred)


# -- intertwiner solves ---------------------------------------------------------------

def linear_constraints(dom, cod, maps, cat=None):
    """Null space of ``f -> [L(f) for L in maps]`` over ``Hom(dom, cod)``.

    Returns a list of basis morphisms.
    """
    proto = Morphism(dom, cod, cat=cat)
    n = proto.hom_dim()
    if n == 0:
        return []
    cols = []
    for k in range(n):
        v = np.zeros(n, complex)
        v[k] = 1.0
        f = Morphism.from_vector(dom, cod, v, cat)
        cols.append(np.concatenate([L(f).to_vector() for L in maps]))
    C = np.array(cols).T
    tol = (proto.cat or cat).tol
    return [Morphism.from_vector(dom, cod, v, cat) for v in solve_intertwiner_space(C, tol)]


def bimodule_hom_space(alg: FrobeniusAlgebra, U: ObjectSum, V: ObjectSum):
    """Basis of ``Hom_{A|A}(alpha-(U), alpha+(V))`` by direct constraint solve."""
    A, I = alg.A, alg.idA
    IU, IV = identity(U), identity(V)
    mU, mV = tensor(alg.m, IU), tensor(alg.m, IV)
    rU, rV = right_action(alg, U, "-"), right_action(alg, V, "+")

    def left(f):
        return compose(f, mU) - compose(mV, tensor(I, f))

    def right(f):
        return compose(f, rU) - compose(rV, tensor(f, I))

    return linear_constraints((A, U), (A, V), [left, right], alg.cat)


def bimodule_hom_dim(alg: FrobeniusAlgebra, j: int, i: int) -> int:
    """``dim Hom_{A|A}(alpha-(U_j), alpha+(U_i))``."""
    cat = alg.cat
    return len(bimodule_hom_space(alg, ObjectSum.simple(cat, j), ObjectSum.simple(cat, i)))


class ZMatrix:
    """Nonnegative integer matrix ``Z(A)_{ij}``, rows/cols indexed by labels."""

    def __init__(self, entries, labels=None):
        self.entries = np.asarray(entries, dtype=int)
        self.labels = labels

    def __eq__(self, other):
        return isinstance(other, ZMatrix) and np.array_equal(self.entries, other.entries)

    def __matmul__(self, other):
        return ZMatrix(self.entries @ other.entries, self.labels)

    def __repr__(self):
        return f"ZMatrix({self.entries.tolist()})"

    def is_identity(self):
        return np.array_equal(self.entries, np.eye(len(self.entries), dtype=int))


def _z_by_rank(alg, side="l"):
    cat = alg.cat
    Z = np.zeros((cat.rank, cat.rank), dtype=int)
    for j in range(cat.rank):
        S, _, _ = local_induction_object(alg, ObjectSum.simple(cat, j), side)
        Z[:, j] = S.mult
    return Z


def _z_by_intertwiners(alg):
    cat = alg.cat
    Z = np.zeros((cat.rank, cat.rank), dtype=int)
    for i in range(cat.rank):
        for j in range(cat.rank):
            Z[i, j] = bimodule_hom_dim(alg, j, i)
    return Z


def alpha_Z_matrix(alg: FrobeniusAlgebra, oracle: str = "both") -> ZMatrix:
    """``Z(A)_{ij} = [E^l_A(U_j) : U_i] = dim Hom_{A|A}(alpha-(U_j), alpha+(U_i))``.

    Parameters
    ----------
    oracle : {'both', 'rank', 'intertwiner'}

    Raises
    ------
    OracleDisagreement
        If the two computations differ (``oracle='both'``).
    """
    if oracle == "rank":
        return ZMatrix(_z_by_rank(alg), alg.cat.labels)
    if oracle == "intertwiner":
        return ZMatrix(_z_by_intertwiners(alg), alg.cat.labels)
    Z1, Z2 = _z_by_rank(alg), _z_by_intertwiners(alg)
    if not np.array_equal(Z1, Z2):
        raise OracleDisagreement(f"rank oracle {Z1.tolist()} != intertwiner oracle {Z2.tolist()}")
    return ZMatrix(Z1, alg.cat.labels)


def z_multiplicativity_check(a: FrobeniusAlgebra, b: FrobeniusAlgebra, sign: str = "+"):
    """``(Z(A x B), Z(A) Z(B), residual)`` with integer max-abs residual."""
    Zab = alpha_Z_matrix(tensor_algebra(a, b, sign))
    prod = alpha_Z_matrix(a) @ alpha_Z_matrix(b)
    return Zab, prod, int(np.max(np.abs(Zab.entries - prod.entries)))


def tensor_center_check(a: FrobeniusAlgebra, b: FrobeniusAlgebra):
    """Compare ``C_l(A x B)`` with ``E^l_A(C_l(B))`` and ``C_r(A x B)`` with ``E^r_B(C_r(A))``.

    Returns a list of check rows with multiplicity vectors as witnesses.
    """
    ab = tensor_algebra(a, b, "+")
    rows = []
    for side, outer, inner in (("l", a, b), ("r", b, a)):
        cab = center(ab, side)
        cin = center(inner, side)
        E, _, _ = local_induction_object(outer, cin.C.A, side)
        ok = E.mult == cab.C.A.mult
        flags_ab = {k: v for k, v in cab.C.flags().items() if k != "simple"}
        rows.append({"name": f"C_{side}(AxB) = E^{side}(C_{side})", "passed": bool(ok),
                     "residual": float(np.max(np.abs(np.subtract(E.mult, cab.C.A.mult)))),
                     "witness": {"center": list(cab.C.A.mult), "induced": list(E.mult),
                                 "flags": flags_ab}})
        fl_ok = cab.C.check_commutative() and cab.C.check_symmetric() and cab.C.check_frobenius()
        rows.append({"name": f"C_{side}(AxB) commutative symmetric Frobenius", "passed": bool(fl_ok),
                     "residual": max(cab.C.commutative_residual(), cab.C.symmetric_residual()),
                     "witness": None})
    return rows


def lift_algebra_E(alg_A: FrobeniusAlgebra, alg_B: FrobeniusAlgebra, side: str = "l"):
    """``E^{side}_A(B)``: retract of ``A x^{+/-} B`` through ``P^{side}_A(B)``.

    The left version uses ``x^+`` and the right version ``x^-``.  Coproduct
    and counit carry ``xi = dim E / (dim A dim B)``.

    Returns
    -------
    alg : FrobeniusAlgebra
    e, r : Morphism
        Embedding ``(E) -> (A, B)`` and restriction.
    """
    A, B = alg_A.A, alg_B.A
    P = local_induction_idempotent(alg_A, B, side)
    S, e, r = image_of_idempotent(P, alg_A.tol)
    sign = "+" if side == "l" else "-"
    m_t, eta_t, d_t, eps_t = _tensor_structure(alg_A, alg_B, sign)
    xi = S.dim / (alg_A.dim * alg_B.dim)
    alg = restrict_algebra(m_t, eta_t, d_t, eps_t, e, r, xi=xi,
                           name=f"E^{side}_{alg_A.name}({alg_B.name})")
    return alg, e, r


def _tensor_structure(a, b, sign):
    """Structure maps of ``a x^sign b`` on the tuple ``(A, B)`` (not fused)."""
    t = tensor_algebra(a, b, sign)
    _, phi, phinv = fuse((a.A, b.A))
    # tensor_algebra fuses with the same canonical iso; undo it
    m = compose_all(phinv, t.m, tensor(phi, phi))
    eta = compose(phinv, t.eta)
    d = compose_all(tensor(phinv, phinv), t.delta, phi)
    eps = compose(t.eps, phi)
    return m, eta, d, eps
