"""Trivializing algebras and the coset construction.

``T_G = sum_k U_k x Ubar_k`` in ``G x Gbar`` with the diagonal product
``sum_a v^{ij}_{k,a} x vbar^{ij}_{k,a}``; ``Gbar`` is :func:`dual_category`,
presented by complex-conjugate tables, so associativity and commutativity of
the product follow from unitarity of F and R.

The coset pipeline takes ``L`` in ``Q x H`` and works in ``Q x H x Hbar``:
``G = (Q x H)^loc_L``, ``L' = E_{L x 1}(1 x T_H)`` and the trace identity
``tr P_{C_l(T (x) (L x 1))} = dim T``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebras import FrobeniusAlgebra, tensor_algebra
from .category import (SkeletalCategory, deligne_product, dual_category, global_dim_and_charges,
                       is_modular)
from .centers import center, lift_algebra_E, restrict_algebra
from .modules import (QuotientSummary, compare_summaries, enumerate_simple_modules,
                      hom_module_dim, induced_module, quotient_summary)
from .morphisms import (Morphism, ObjectSum, compose, fuse, identity, quick_trace, tensor,
                        trace, tuple_basis)

__all__ = [
    "NotModular",
    "PreconditionFailed",
    "CosetReport",
    "trivializing_host",
    "build_trivializing_algebra",
    "verify_trivialization",
    "check_Q_haploid",
    "check_separable",
    "embed_morphism",
    "embed_algebra",
    "coset_pipeline",
]


class NotModular(ValueError):
    """The category is not modular."""


class PreconditionFailed(ValueError):
    """A hypothesis of the coset construction does not hold."""


def _row(name, passed, residual=0.0, witness=None):
    return {"name": name, "passed": bool(passed), "residual": float(residual), "witness": witness}


def trivializing_host(g: SkeletalCategory) -> SkeletalCategory:
    """``g x gbar`` (cached on `g` so algebras built twice share one category)."""
    host = getattr(g, "_trivializing_host", None)
    if host is None:
        host = deligne_product(g, dual_category(g))
        g._trivializing_host = host
    return host


def build_trivializing_algebra(g: SkeletalCategory) -> FrobeniusAlgebra:
    """``T_G`` in ``g x gbar``; coproduct and counit are reconstructed.

    Raises
    ------
    NotModular
    """
    if not is_modular(g):
        raise NotModular(f"{g.name} is not modular")
    host = trivializing_host(g)
    r = g.rank

    def idx(i, x):
        return i * r + x

    mult = [0] * host.rank
    for k in range(r):
        mult[idx(k, k)] = 1
    T = ObjectSum(host, mult)
    dom = tuple_basis((T, T))
    blocks = {}
    for c, trees in dom.trees.items():
        k = c // r
        if c != idx(k, k):
            continue
        B = np.zeros((1, len(trees)), complex)
        for col, ((la, lb), _, (mu,)) in enumerate(trees):
            i, j = la[0] // r, lb[0] // r
            n2 = g.N[i, j, k]
            if n2 and mu // n2 == mu % n2:
                B[0, col] = 1.0
        blocks[c] = B
    m = Morphism((T, T), (T,), blocks)
    eta = Morphism((), (T,), {0: np.ones((1, 1))}, host)
    alg = FrobeniusAlgebra(T, m, eta, name=f"T_{g.name}")
    alg.factor = g
    return alg


def verify_trivialization(g: SkeletalCategory):
    """Module-level checks for ``T_G``.

    Returns a list of check rows: number of simple modules, distinctness of
    ``M_k = Ind(1 x Ubar_k)``, induced-module multiplicities against fusion
    numbers, a single local module and a rank-one quotient of dimension 1.
    """
    T = build_trivializing_algebra(g)
    host = T.cat
    r = g.rank
    rows = [_row("flags " + k, v) for k, v in T.flags().items()]
    simples = enumerate_simple_modules(T)
    rows.append(_row("#simple modules = rank", len(simples) == r, abs(len(simples) - r),
                     len(simples)))
    Ms = [induced_module(T, ObjectSum.simple(host, 0 * r + k)) for k in range(r)]
    gram = np.array([[hom_module_dim(a, b) for b in Ms] for a in Ms])
    rows.append(_row("M_k simple and distinct", np.array_equal(gram, np.eye(r, dtype=int)),
                     float(np.max(np.abs(gram - np.eye(r)))), gram.tolist()))
    worst = 0
    for k, l in itertools.product(range(r), repeat=2):
        ind = induced_module(T, ObjectSum.simple(host, k * r + l))
        for q in range(r):
            worst = max(worst, abs(hom_module_dim(ind, Ms[q]) - int(g.N[k, q, l])))
    rows.append(_row("Ind(U_k x Ubar_l) multiplicities = N_kq^l", worst == 0, worst))
    local = [M for M in simples if M.is_local()]
    rows.append(_row("exactly one local simple", len(local) == 1, abs(len(local) - 1),
                     [M.Mdot.as_dict() for M in local]))
    q = quotient_summary(T)
    rows.append(_row("quotient rank 1", q.rank == 1, abs(q.rank - 1)))
    rows.append(_row("Dim_loc = 1", abs(q.Dim_loc - 1) <= 1e-9, abs(q.Dim_loc - 1)))
    rows.extend(q.checks)
    return rows, T, q


def check_Q_haploid(L: FrobeniusAlgebra, Q: SkeletalCategory | None = None,
                    H: SkeletalCategory | None = None) -> bool:
    """Only ``(0_Q, 0_H)`` (once) among the labels ``(u, 0_H)`` of ``L``."""
    Q, H = _factors(L.cat, Q, H)
    rH = H.rank
    for u in range(Q.rank):
        want = 1 if u == 0 else 0
        if L.A.mult[u * rH] != want:
            return False
    return True


def check_separable(cat: SkeletalCategory, eps: float = 1e-9):
    """``(passed, witness_label)``: no simple object of vanishing dimension."""
    for i, d in enumerate(cat.dims):
        if abs(d) <= eps:
            return False, cat.labels[i]
    return True, None


def _factors(cat, Q=None, H=None):
    if Q is None or H is None:
        fac = getattr(cat, "factors", None)
        if fac is None:
            raise PreconditionFailed("algebra must live in a Deligne product Q x H")
        Q, H = fac
    return Q, H


# -- moving data between categories by relabelling ------------------------------------

def _map_obj(X: ObjectSum, target, lmap):
    mult = [0] * target.rank
    for i, k in enumerate(X.mult):
        if k:
            if i not in lmap:
                raise ValueError(f"label {X.cat.labels[i]} has no image")
            mult[lmap[i]] += k
    if any(X.mult[i] > 1 for i in range(len(X.mult)) if X.mult[i]):
        # slots are kept; only one source label may map to each target label
        if len({lmap[i] for i in X.support()}) != len(X.support()):
            raise ValueError("label map must be injective on the support")
    return ObjectSum(target, mult)


def _map_tree(t, lmap):
    leaves, internals, mults = t
    return (tuple((lmap[a], s) for a, s in leaves), tuple(lmap[c] for c in internals), mults)


def embed_morphism(f: Morphism, target: SkeletalCategory, lmap: dict) -> Morphism:
    """Relabel a morphism along an injective, fusion-preserving label map.

    Valid when ``target`` restricted to the image has the same F-symbols in
    the same multiplicity labelling, as for ``U -> U x 1`` in a Deligne
    product or the inverse of that map.
    """
    dom = tuple(_map_obj(X, target, lmap) for X in f.dom)
    cod = tuple(_map_obj(X, target, lmap) for X in f.cod)
    g = Morphism(dom, cod, cat=target)
    bd, bc = f.dom_basis, f.cod_basis
    gd, gc = g.dom_basis, g.cod_basis
    for c, B in f.blocks.items():
        c2 = lmap[c]
        rows = [gc.index[c2][_map_tree(t, lmap)] for t in bc.trees[c]]
        cols = [gd.index[c2][_map_tree(t, lmap)] for t in bd.trees[c]]
        g.blocks[c2][np.ix_(rows, cols)] = B
    return g


def embed_algebra(alg: FrobeniusAlgebra, target: SkeletalCategory, lmap: dict,
                  name=None) -> FrobeniusAlgebra:
    out = FrobeniusAlgebra(
        _map_obj(alg.A, target, lmap), embed_morphism(alg.m, target, lmap),
        embed_morphism(alg.eta, target, lmap),
        None if alg.delta is None else embed_morphism(alg.delta, target, lmap),
        None if alg.eps is None else embed_morphism(alg.eps, target, lmap),
        name=name or alg.name)
    return out


# -- coset pipeline --------------------------------------------------------------------------

@dataclass
class CosetReport:
    L_flags: dict
    Q_haploid: bool
    G_summary: QuotientSummary | None
    Lprime_object: dict | None = None
    Lprime_flags: dict | None = None
    dim_relation_residual: float = float("nan")
    gamma_trivial: bool = False
    equivalence_match: list | None = None
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return bool(self.checks) and all(c["passed"] for c in self.checks)

    def to_dict(self):
        return {
            "passed": self.passed,
            "L_flags": self.L_flags,
            "Q_haploid": self.Q_haploid,
            "G_summary": None if self.G_summary is None else self.G_summary.to_dict(),
            "Lprime_object": self.Lprime_object,
            "Lprime_flags": self.Lprime_flags,
            "dim_relation_residual": self.dim_relation_residual,
            "gamma_trivial": self.gamma_trivial,
            "equivalence_match": self.equivalence_match,
            "checks": self.checks,
        }


def _same_tables(a, b, eps=1e-9):
    """Same fusion, F, R and twists (possibly different Python objects)."""
    if a is b:
        return True
    if a.rank != b.rank or not np.array_equal(a.N, b.N) or set(a.F) != set(b.F) \
            or set(a.R) != set(b.R):
        return False
    close = lambda x, y: np.allclose(np.asarray(x), np.asarray(y), atol=eps)
    return (close(a.theta, b.theta) and close(a.dims, b.dims)
            and all(close(a.F[k], b.F[k]) for k in a.F) and all(close(a.R[k], b.R[k]) for k in a.R))


def _host3(QH, Hb):
    key = "_coset_host_" + str(id(Hb))
    host = getattr(QH, key, None)
    if host is None:
        host = deligne_product(QH, Hb)
        setattr(QH, key, host)
    return host


def coset_pipeline(Q: SkeletalCategory, H: SkeletalCategory, L: FrobeniusAlgebra,
                   tol: float = 1e-9) -> CosetReport:
    """Run the coset construction for ``L`` in ``Q x H``.

    Steps: local modules ``G`` of ``L``; the trace identity for
    ``T (x) (L x 1)``; ``L' = E_{L x 1}(1 x T_H)`` restricted to the
    ``(0_Q, 0_H, .)`` components (this realises ``L'`` in ``G x Hbar`` when
    ``G`` has rank one); ``dim L dim L' = Dim H``; comparison of ``Q`` with
    ``(Hbar)^loc_{L'}``.

    Raises
    ------
    PreconditionFailed
    """
    QH = L.cat
    fac = getattr(QH, "factors", None)
    if fac is None or not (_same_tables(fac[0], Q) and _same_tables(fac[1], H)):
        raise PreconditionFailed("L must live in the Deligne product Q x H")
    if not is_modular(H):
        raise PreconditionFailed("H is not modular")
    flags = L.flags()
    for need in ("algebra", "frobenius", "special", "symmetric", "commutative"):
        if not flags[need]:
            raise PreconditionFailed(f"L is not {need}")
    qh = check_Q_haploid(L, *fac)
    if not qh:
        raise PreconditionFailed("L is not Q-haploid")
    checks = [_row("L commutative ssFA", True), _row("L Q-haploid", qh)]

    T = build_trivializing_algebra(H)
    Hb = T.cat.factors[1]
    sep, wit = check_separable(deligne_product(QH, Hb))
    if not sep:
        raise PreconditionFailed(f"Q x H x Hbar not separable (label {wit})")
    checks.append(_row("Q x H x Hbar separable", sep))

    G = quotient_summary(L)
    checks.extend({**c, "name": "G: " + c["name"]} for c in G.checks)

    big = _host3(QH, Hb)
    rH, rHb = H.rank, Hb.rank
    # 1 x T: (h, x) -> ((0, h), x);  L x 1: l -> (l, 0)
    mapT = {h * rHb + x: (0 * rH + h) * rHb + x for h in range(rH) for x in range(rHb)}
    mapL = {l: l * rHb for l in range(QH.rank)}
    OT = embed_algebra(T, big, mapT, name="1xT")
    Lx1 = embed_algebra(L, big, mapL, name="Lx1")

    # trace identity and the retract comparison
    TA = tensor_algebra(OT, Lx1, "+")
    cl = center(TA, "l")
    trP = trace(cl.P)
    res_tr = abs(trP - T.dim)
    _, phi, phinv = fuse((OT.A, Lx1.A))
    P_OT = compose(phi, compose(tensor(OT.idA, compose(Lx1.eta, Lx1.eps)), phinv)) / \
        compose(Lx1.eps, Lx1.eta).scalar()
    comm = max(compose(cl.P, P_OT).dist(P_OT), compose(P_OT, cl.P).dist(P_OT))
    same = cl.P.dist(P_OT)
    gamma = res_tr <= tol * max(1.0, T.dim) and same <= 1e-7
    checks.append(_row("tr P_{C_l(T x L)} = dim T", res_tr <= tol * max(1.0, T.dim), res_tr,
                       complex(trP).real))
    checks.append(_row("P_{C_l} P_T = P_T = P_T P_{C_l}", comm <= 1e-7, comm))
    checks.append(_row("P_{C_l} = P_T (Gamma trivial)", gamma, same))

    rep = CosetReport(flags, qh, G, gamma_trivial=bool(gamma), checks=checks)
    if G.rank != 1:
        checks.append(_row("L' realised (requires rank-1 G)", False, G.rank - 1, G.rank))
        return rep

    E, _, _ = lift_algebra_E(Lx1, OT, "l")
    # restrict to labels (0_Q, 0_H, x), which form a copy of Hbar
    keep = {(0 * rH + 0) * rHb + x: x for x in range(rHb)}
    mult = [k if i in keep else 0 for i, k in enumerate(E.A.mult)]
    S = ObjectSum(big, mult)
    e = Morphism((S,), (E.A,), {c: np.eye(E.A.mult[c], S.mult[c]) for c in keep if S.mult[c]})
    r = Morphism((E.A,), (S,), {c: np.eye(S.mult[c], E.A.mult[c]) for c in keep if S.mult[c]})
    Lp_big = restrict_algebra(E.m, E.eta, None, None, e, r, name="L'")
    Lp = FrobeniusAlgebra(_map_obj(S, Hb, keep), embed_morphism(Lp_big.m, Hb, keep),
                          embed_morphism(Lp_big.eta, Hb, keep), name="L'")
    lp_flags = Lp.flags()
    rep.Lprime_object = Lp.A.as_dict()
    rep.Lprime_flags = lp_flags
    for k in ("haploid", "commutative", "symmetric", "special"):
        checks.append(_row(f"L' {k}", lp_flags[k]))
    DimH = global_dim_and_charges(H)[0]
    rep.dim_relation_residual = abs(L.dim * Lp.dim - DimH)
    checks.append(_row("dim L dim L' = Dim H", rep.dim_relation_residual <= tol * DimH,
                       rep.dim_relation_residual, [L.dim, Lp.dim, DimH]))
    target = quotient_summary(Lp)
    perm = compare_summaries(QuotientSummary.of_category(Q), target)
    rep.equivalence_match = perm
    checks.append(_row("Q = (Hbar)^loc_{L'} (rank, dims, twists, s)", perm is not None,
                       0.0 if perm is not None else 1.0, perm))
    if G.modular is True:
        checks.append(_row("target modular", target.modular is True))
    return rep
