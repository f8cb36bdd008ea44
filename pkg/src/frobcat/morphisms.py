"""Morphisms between tensor products of semisimple objects.

A morphism ``f: X_1 x ... x X_n -> Y_1 x ... x Y_m`` is stored as one dense
block per total charge ``c``.  Columns index left-combed splitting trees of
the domain tuple with root ``c``, rows those of the codomain::

    f o tree_t = sum_{t'} block_c[t', t] tree_{t'}

A tree is ``(leaves, internals, mults)``: leaves are ``(label, slot)`` pairs,
``internals[k]`` is the charge after fusing the first ``k+1`` leaves and
``mults[k-1]`` the vertex index of the ``k``-th fusion.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .numerics import DEFAULT_TOL, NotIdempotent, Tolerance, max_abs, rank_factorize

__all__ = [
    "ObjectSum",
    "Morphism",
    "ShapeMismatch",
    "TraceMismatch",
    "tuple_basis",
    "identity",
    "compose",
    "tensor",
    "braid",
    "twist_morphism",
    "cup_cap",
    "trace",
    "left_trace",
    "right_trace",
    "image_of_idempotent",
    "fuse",
    "zero_morphism",
    "random_morphism",
    "quick_trace",
    "compose_all",
    "tensor_all",
]


class ShapeMismatch(ValueError):
    """Domain/codomain tuples do not fit."""


class TraceMismatch(ArithmeticError):
    """Left and right traces differ."""


class ObjectSum:
    """Direct sum of simple objects given by a multiplicity vector."""

    __slots__ = ("cat", "mult", "_hash")

    def __init__(self, cat, mult):
        mult = tuple(int(m) for m in mult)
        if len(mult) != cat.rank or any(m < 0 for m in mult):
            raise ValueError("multiplicity vector must be nonnegative with one entry per label")
        self.cat = cat
        self.mult = mult
        self._hash = hash((id(cat), mult))

    @classmethod
    def simple(cls, cat, i, n=1):
        m = [0] * cat.rank
        m[i] = n
        return cls(cat, m)

    @classmethod
    def unit(cls, cat):
        return cls.simple(cat, 0)

    @classmethod
    def zero(cls, cat):
        return cls(cat, [0] * cat.rank)

    @classmethod
    def from_labels(cls, cat, labels):
        """Sum of the given labels (repetition allowed)."""
        m = [0] * cat.rank
        for lab in labels:
            m[cat.label_index(lab)] += 1
        return cls(cat, m)

    def __eq__(self, other):
        return isinstance(other, ObjectSum) and self.cat is other.cat and self.mult == other.mult

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        if self.cat is not other.cat:
            raise ShapeMismatch("objects live in different categories")
        return ObjectSum(self.cat, [a + b for a, b in zip(self.mult, other.mult)])

    def __repr__(self):
        parts = [f"{m}*{self.cat.labels[i]}" if m > 1 else self.cat.labels[i]
                 for i, m in enumerate(self.mult) if m]
        return "(" + " + ".join(parts) + ")" if parts else "0"

    @property
    def is_zero(self):
        return not any(self.mult)

    def dual(self):
        m = [0] * self.cat.rank
        for i, k in enumerate(self.mult):
            m[self.cat.dual[i]] += k
        return ObjectSum(self.cat, m)

    @property
    def dim(self):
        return float(np.dot(self.mult, self.cat.dims))

    def support(self):
        return [i for i, m in enumerate(self.mult) if m]

    def leaves(self):
        """All ``(label, slot)`` pairs."""
        return [(i, s) for i, m in enumerate(self.mult) for s in range(m)]

    def as_dict(self):
        return {self.cat.labels[i]: m for i, m in enumerate(self.mult) if m}


# -- bases -------------------------------------------------------------------------

class TupleBasis:
    """Left-combed trees of a tuple of objects, grouped by root."""

    def __init__(self, objs):
        self.objs = tuple(objs)
        cat = self.objs[0].cat if self.objs else None
        self.cat = cat
        if not self.objs:
            self.trees = {0: [((), (), ())]}
        else:
            N = cat.N
            cur = {}
            for leaf in self.objs[0].leaves():
                cur.setdefault(leaf[0], []).append(((leaf,), (leaf[0],), ()))
            for X in self.objs[1:]:
                nxt = {}
                for a in sorted(cur):
                    for t in cur[a]:
                        for leaf in X.leaves():
                            x = leaf[0]
                            for c in range(cat.rank):
                                for mu in range(N[a, x, c]):
                                    nxt.setdefault(c, []).append(
                                        (t[0] + (leaf,), t[1] + (c,), t[2] + (mu,)))
                cur = nxt
            self.trees = {c: v for c, v in sorted(cur.items()) if v}
        self.index = {c: {t: n for n, t in enumerate(v)} for c, v in self.trees.items()}

    def size(self, c):
        return len(self.trees.get(c, ()))

    def roots(self):
        return list(self.trees)

    def total(self):
        return sum(len(v) for v in self.trees.values())


_BASIS_CACHE = {}


def tuple_basis(objs) -> TupleBasis:
    objs = tuple(objs)
    key = objs
    b = _BASIS_CACHE.get(key)
    if b is None:
        b = TupleBasis(objs)
        _BASIS_CACHE[key] = b
    return b


def _as_tuple(X):
    if isinstance(X, ObjectSum):
        return (X,)
    return tuple(X)


# -- morphisms ---------------------------------------------------------------------

class Morphism:
    """Linear combination of fusion-tree pairs, one dense block per root."""

    __slots__ = ("dom", "cod", "blocks", "cat")

    def __init__(self, dom, cod, blocks=None, cat=None):
        self.dom = _as_tuple(dom)
        self.cod = _as_tuple(cod)
        cats = {id(o.cat): o.cat for o in self.dom + self.cod}
        if len(cats) > 1:
            raise ShapeMismatch("objects from different categories")
        self.cat = next(iter(cats.values())) if cats else cat
        if self.cat is None:
            raise ValueError("empty tuples need an explicit category")
        bd, bc = tuple_basis(self.dom), tuple_basis(self.cod)
        self.blocks = {}
        blocks = blocks or {}
        for c in bd.trees:
            if c in bc.trees:
                shape = (bc.size(c), bd.size(c))
                B = blocks.get(c)
                if B is None:
                    B = np.zeros(shape, dtype=complex)
                else:
                    B = np.asarray(B, dtype=complex)
                    if B.shape != shape:
                        raise ShapeMismatch(f"block {c} has shape {B.shape}, expected {shape}")
                self.blocks[c] = B
        for c, B in blocks.items():
            if c not in self.blocks and max_abs(B) > 0:
                raise ShapeMismatch(f"root {c} is not shared by domain and codomain")

    # structure
    @property
    def dom_basis(self):
        return tuple_basis(self.dom)

    @property
    def cod_basis(self):
        return tuple_basis(self.cod)

    def copy(self):
        return Morphism(self.dom, self.cod, {c: B.copy() for c, B in self.blocks.items()}, self.cat)

    def __add__(self, other):
        _same_shape(self, other)
        return Morphism(self.dom, self.cod, {c: B + other.blocks[c] for c, B in self.blocks.items()},
                        self.cat)

    def __sub__(self, other):
        _same_shape(self, other)
        return Morphism(self.dom, self.cod, {c: B - other.blocks[c] for c, B in self.blocks.items()},
                        self.cat)

    def __neg__(self):
        return self * -1

    def __mul__(self, s):
        return Morphism(self.dom, self.cod, {c: B * s for c, B in self.blocks.items()}, self.cat)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1 / s)

    def __matmul__(self, other):
        return compose(self, other)

    def norm(self):
        return max((max_abs(B) for B in self.blocks.values()), default=0.0)

    def dist(self, other):
        """Max-abs difference to `other`."""
        return (self - other).norm()

    def is_zero(self, tol: Tolerance = DEFAULT_TOL):
        return self.norm() <= tol.abs_eps

    def scalar(self):
        """Value of an endomorphism of the unit (or of a simple object)."""
        vals = [B for B in self.blocks.values() if B.size]
        if len(vals) != 1 or vals[0].shape != (1, 1):
            raise ShapeMismatch("not a scalar morphism")
        return complex(vals[0][0, 0])

    def to_vector(self):
        """Flatten all blocks (sorted by root, row-major) into one vector."""
        return np.concatenate([self.blocks[c].ravel() for c in sorted(self.blocks)]
                              or [np.zeros(0, complex)])

    @classmethod
    def from_vector(cls, dom, cod, vec, cat=None):
        m = cls(dom, cod, cat=cat)
        pos = 0
        for c in sorted(m.blocks):
            B = m.blocks[c]
            n = B.size
            m.blocks[c] = np.asarray(vec[pos:pos + n], dtype=complex).reshape(B.shape)
            pos += n
        return m

    def hom_dim(self):
        return sum(B.size for B in self.blocks.values())

    def entries(self, tol: Tolerance = DEFAULT_TOL):
        """Sparse view ``{(dom_tree, cod_tree): value}`` dropping zeros."""
        out = {}
        bd, bc = self.dom_basis, self.cod_basis
        for c, B in self.blocks.items():
            rows, cols = np.nonzero(np.abs(B) > tol.abs_eps)
            for r_, s_ in zip(rows, cols):
                out[(bd.trees[c][s_], bc.trees[c][r_])] = complex(B[r_, s_])
        return out

    def debug_dump(self, tol: Tolerance = DEFAULT_TOL) -> str:
        """Sorted ``dom_tree | cod_tree | value`` lines."""
        lines = []
        for (td, tc), v in sorted(self.entries(tol).items(), key=lambda kv: (repr(kv[0][0]), repr(kv[0][1]))):
            lines.append(f"{_fmt_tree(td)} | {_fmt_tree(tc)} | {v.real:+.12f}{v.imag:+.12f}j")
        return "\n".join(lines)

    def inverse(self):
        """Blockwise inverse (requires square invertible blocks)."""
        blocks = {}
        if set(self.dom_basis.trees) != set(self.cod_basis.trees):
            raise ShapeMismatch("domain and codomain have different charge sectors")
        for c, B in self.blocks.items():
            if B.shape[0] != B.shape[1]:
                raise ShapeMismatch(f"block {c} is not square")
            blocks[c] = np.linalg.inv(B)
        return Morphism(self.cod, self.dom, blocks, self.cat)

    def __repr__(self):
        return f"Morphism({self.dom} -> {self.cod}, roots={sorted(self.blocks)})"


def _fmt_tree(t):
    leaves, internals, mults = t
    return "[" + ",".join(f"{a}.{s}" for a, s in leaves) + "; " + ",".join(map(str, internals)) + \
        "; " + ",".join(map(str, mults)) + "]"


def _same_shape(f, g):
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch(f"{f} and {g} have different shapes")


def zero_morphism(dom, cod, cat=None):
    return Morphism(dom, cod, cat=cat)


def identity(X, cat=None) -> Morphism:
    X = _as_tuple(X)
    b = tuple_basis(X)
    return Morphism(X, X, {c: np.eye(b.size(c), dtype=complex) for c in b.trees}, cat)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g o f``."""
    if f.cod != g.dom:
        raise ShapeMismatch(f"cannot compose {g} after {f}")
    blocks = {}
    for c, Bg in g.blocks.items():
        Bf = f.blocks.get(c)
        if Bf is not None:
            blocks[c] = Bg @ Bf
    return Morphism(f.dom, g.cod, blocks, f.cat)


def compose_all(*fs) -> Morphism:
    """``fs[0] o fs[1] o ...``."""
    out = fs[-1]
    for g in reversed(fs[:-1]):
        out = compose(g, out)
    return out


# -- tensor product ----------------------------------------------------------------

class _SplitBasis:
    """Basis ``(t_X x t_Z) v^{ab}_{c,mu}`` grouped by root c and block (a, b, mu)."""

    def __init__(self, X, Z, cat):
        bX, bZ = tuple_basis(X), tuple_basis(Z)
        N = cat.N
        self.groups = {}   # c -> list of (a, b, mu, offset)
        self.items = {}    # c -> list of (tX, tZ, mu)
        for a in bX.trees:
            for b in bZ.trees:
                for c in range(cat.rank):
                    for mu in range(N[a, b, c]):
                        lst = self.items.setdefault(c, [])
                        self.groups.setdefault(c, []).append((a, b, mu, len(lst)))
                        for tX in bX.trees[a]:
                            for tZ in bZ.trees[b]:
                                lst.append((tX, tZ, mu))
        self.index = {c: {t: n for n, t in enumerate(v)} for c, v in self.items.items()}


@lru_cache(maxsize=4096)
def _split_basis(X, Z, cat):
    return _SplitBasis(X, Z, cat)


def _extend(tree, leaf, root, mu):
    leaves, internals, mults = tree
    if not leaves:
        return ((leaf,), (leaf[0],), ())
    return (leaves + (leaf,), internals + (root,), mults + (mu,))


@lru_cache(maxsize=4096)
def _recoupling(X, Z, cat):
    """Matrices ``K_c`` with ``split_s = sum_t K_c[t, s] lc_t`` and their inverses."""
    sp = _split_basis(X, Z, cat)
    lc = tuple_basis(X + Z)
    K = {}
    if len(Z) == 0:
        for c, items in sp.items.items():
            M = np.zeros((lc.size(c), len(items)), complex)
            for s, (tX, tZ, mu) in enumerate(items):
                M[lc.index[c][tX], s] = 1.0
            K[c] = M
    elif len(Z) == 1:
        for c, items in sp.items.items():
            M = np.zeros((lc.size(c), len(items)), complex)
            for s, (tX, tZ, mu) in enumerate(items):
                leaf = tZ[0][0]
                if not X:
                    t = tZ
                else:
                    t = _extend(tX, leaf, c, mu)
                M[lc.index[c][t], s] = 1.0
            K[c] = M
    else:
        Zp = Z[:-1]
        Kp, _ = _recoupling(X, Zp, cat)
        spp = _split_basis(X, Zp, cat)
        lcp = tuple_basis(X + Zp)
        for c, items in sp.items.items():
            M = np.zeros((lc.size(c), len(items)), complex)
            for s, (tX, tZ, mu) in enumerate(items):
                a = tX[1][-1] if tX[0] else 0
                leaves, internals, mults = tZ
                b = internals[-1]
                bp = internals[-2]
                nu = mults[-1]
                leaf = leaves[-1]
                z = leaf[0]
                tZp = (leaves[:-1], internals[:-1], mults[:-1])
                blk = cat.fblock(a, bp, z, c)
                G = blk.inv
                row = blk.right_index[(b, nu, mu)]
                for col, (e, ka, la) in enumerate(blk.left):
                    gval = G[row, col]
                    if gval == 0:
                        continue
                    sidx = spp.index[e][(tX, tZp, ka)]
                    colK = Kp[e][:, sidx]
                    for tpos in np.nonzero(colK)[0]:
                        tp = lcp.trees[e][tpos]
                        t = _extend(tp, leaf, c, la)
                        M[lc.index[c][t], s] += gval * colK[tpos]
            K[c] = M
    Kinv = {c: np.linalg.inv(M) for c, M in K.items()}
    return K, Kinv


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """``f x g`` on concatenated tuples, in the left-combed basis."""
    if f.cat is not g.cat:
        raise ShapeMismatch("tensor of morphisms from different categories")
    X, Y, Z, W = f.dom, f.cod, g.dom, g.cod
    cat = f.cat
    spD = _split_basis(X, Z, cat)
    spC = _split_basis(Y, W, cat)
    _, KinvD = _recoupling(X, Z, cat)
    KC, _ = _recoupling(Y, W, cat)
    blocks = {}
    for c in spD.items:
        if c not in spC.items:
            continue
        S = np.zeros((len(spC.items[c]), len(spD.items[c])), complex)
        cgroups = {(a, b, mu): off for a, b, mu, off in spC.groups[c]}
        for a, b, mu, off in spD.groups[c]:
            offc = cgroups.get((a, b, mu))
            Fa, Gb = f.blocks.get(a), g.blocks.get(b)
            if offc is None or Fa is None or Gb is None:
                continue
            kr = np.kron(Fa, Gb)
            S[offc:offc + kr.shape[0], off:off + kr.shape[1]] = kr
        blocks[c] = KC[c] @ S @ KinvD[c]
    return Morphism(X + Z, Y + W, blocks, f.cat)


def tensor_all(*fs) -> Morphism:
    out = fs[0]
    for g in fs[1:]:
        out = tensor(out, g)
    return out


# -- flattening --------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _fuse(X):
    b = tuple_basis(X)
    cat = X[0].cat if X else None
    return b, cat


def fuse(X, cat=None):
    """Object ``F`` with an isomorphism ``X_1 x ... x X_n -> F``.

    Returns ``(F, iso, iso_inv)``; the iso is the identity on every root block.
    """
    X = _as_tuple(X)
    b = tuple_basis(X)
    cat = X[0].cat if X else cat
    mult = [b.size(c) for c in range(cat.rank)]
    Fobj = ObjectSum(cat, mult)
    iso = Morphism(X, (Fobj,), {c: np.eye(b.size(c), dtype=complex) for c in b.trees}, cat)
    inv = Morphism((Fobj,), X, {c: np.eye(b.size(c), dtype=complex) for c in b.trees}, cat)
    return Fobj, iso, inv


def _single(X, cat=None):
    X = _as_tuple(X)
    if len(X) == 1:
        return X[0], None, None
    return fuse(X, cat)


# -- braiding, twist, duality ------------------------------------------------------

def _braid_simple_sums(X: ObjectSum, Y: ObjectSum, inverse=False) -> Morphism:
    cat = X.cat
    dom = (X, Y) if not inverse else (Y, X)
    cod = (Y, X) if not inverse else (X, Y)
    bd, bc = tuple_basis(dom), tuple_basis(cod)
    blocks = {c: np.zeros((bc.size(c), bd.size(c)), complex) for c in bd.trees}
    if not inverse:
        for c, trees in bd.trees.items():
            for col, ((lx, ly), internals, (mu,)) in enumerate(trees):
                Rm = cat.rblock(lx[0], ly[0], c)
                for nu in range(cat.N[ly[0], lx[0], c]):
                    t = ((ly, lx), (ly[0], c), (nu,))
                    blocks[c][bc.index[c][t], col] += Rm[mu, nu]
    else:
        # c^{-1}_{X,Y}: Y x X -> X x Y
        for c, trees in bd.trees.items():
            for col, ((ly, lx), internals, (mu,)) in enumerate(trees):
                Rinv = np.linalg.inv(cat.rblock(lx[0], ly[0], c))
                for nu in range(cat.N[lx[0], ly[0], c]):
                    t = ((lx, ly), (lx[0], c), (nu,))
                    blocks[c][bc.index[c][t], col] += Rinv[mu, nu]
    return Morphism(dom, cod, blocks, cat)


def braid(X, Y, inverse: bool = False) -> Morphism:
    """``c_{X,Y}: X x Y -> Y x X``; with ``inverse`` the map ``Y x X -> X x Y``.

    `X` and `Y` may be tuples; they are fused to single objects first.
    """
    Xt, Yt = _as_tuple(X), _as_tuple(Y)
    if len(Xt) == 1 and len(Yt) == 1:
        return _braid_simple_sums(Xt[0], Yt[0], inverse)
    cat = (Xt + Yt)[0].cat
    FX, iX, jX = fuse(Xt, cat) if len(Xt) != 1 else (Xt[0], identity(Xt), identity(Xt))
    FY, iY, jY = fuse(Yt, cat) if len(Yt) != 1 else (Yt[0], identity(Yt), identity(Yt))
    core = _braid_simple_sums(FX, FY, inverse)
    if not inverse:
        return compose_all(tensor(jY, jX), core, tensor(iX, iY))
    return compose_all(tensor(jX, jY), core, tensor(iY, iX))


def twist_morphism(X, inverse: bool = False) -> Morphism:
    """``theta_X`` (or its inverse): multiplies root sector c by ``theta_c``."""
    X = _as_tuple(X)
    cat = X[0].cat
    b = tuple_basis(X)
    p = -1 if inverse else 1
    return Morphism(X, X, {c: cat.theta[c] ** p * np.eye(b.size(c), dtype=complex) for c in b.trees},
                    cat)


def cup_cap(X: ObjectSum, kind: str) -> Morphism:
    """Duality morphisms.

    ``b: 1 -> X x X^v``, ``d: X^v x X -> 1``, ``bt: 1 -> X^v x X``,
    ``dt: X x X^v -> 1``.  Normalised so that both zig-zag identities hold
    and ``dt o b = dim X``.
    """
    cat = X.cat
    Xd = X.dual()
    kind = {"b~": "bt", "d~": "dt", "b̃": "bt", "d̃": "dt"}.get(kind, kind)
    if kind in ("b", "dt"):
        pair = (X, Xd)
    elif kind in ("d", "bt"):
        pair = (Xd, X)
    else:
        raise ValueError(f"unknown duality morphism {kind!r}")
    basis = tuple_basis(pair)
    vec = np.zeros(basis.size(0), complex)
    for a, s in X.leaves():
        ab = cat.dual[a]
        p = cat.pivotal[a]
        if kind == "b":
            val, t = p, (((a, s), (ab, s)), (a, 0), (0,))
        elif kind == "dt":
            val, t = cat.dims[a] / p, (((a, s), (ab, s)), (a, 0), (0,))
        elif kind == "d":
            val, t = 1 / (p * cat.f00(a)), (((ab, s), (a, s)), (ab, 0), (0,))
        else:
            val, t = p / (cat.dims[a] * cat.g00(a)), (((ab, s), (a, s)), (ab, 0), (0,))
        vec[basis.index[0][t]] = val
    unit = ()
    if kind in ("b", "bt"):
        return Morphism(unit, pair, {0: vec.reshape(-1, 1)} if vec.size else {}, cat)
    return Morphism(pair, unit, {0: vec.reshape(1, -1)} if vec.size else {}, cat)


def _endo_on_single(f: Morphism):
    if f.dom != f.cod:
        raise ShapeMismatch("trace needs an endomorphism")
    if len(f.dom) == 1:
        return f
    F, iso, inv = fuse(f.dom, f.cat)
    return compose_all(iso, f, inv)


def right_trace(f: Morphism) -> complex:
    """``dt o (f x id) o b``."""
    g = _endo_on_single(f)
    if not g.dom:
        return g.blocks[0][0, 0] if 0 in g.blocks else 0.0
    X = g.dom[0]
    if X.is_zero:
        return 0.0
    Xd = X.dual()
    v = compose_all(cup_cap(X, "dt"), tensor(g, identity((Xd,))), cup_cap(X, "b"))
    return complex(v.blocks[0][0, 0]) if 0 in v.blocks else 0.0


def left_trace(f: Morphism) -> complex:
    """``d o (id x f) o bt``."""
    g = _endo_on_single(f)
    if not g.dom:
        return g.blocks[0][0, 0] if 0 in g.blocks else 0.0
    X = g.dom[0]
    if X.is_zero:
        return 0.0
    Xd = X.dual()
    v = compose_all(cup_cap(X, "d"), tensor(identity((Xd,)), g), cup_cap(X, "bt"))
    return complex(v.blocks[0][0, 0]) if 0 in v.blocks else 0.0


def trace(f: Morphism, tol: Tolerance | None = None) -> complex:
    """Categorical trace; left and right traces must agree.

    Raises
    ------
    TraceMismatch
    """
    tol = tol or f.cat.tol
    tr_r = right_trace(f)
    tr_l = left_trace(f)
    scale = max(1.0, abs(tr_r), abs(tr_l), f.norm())
    if abs(tr_r - tr_l) > (tol.abs_eps + tol.rel_eps) * scale * 10:
        raise TraceMismatch(f"left trace {tr_l} != right trace {tr_r}")
    return tr_r


def quick_trace(f: Morphism) -> complex:
    """``sum_c dims_c Tr(block_c)`` (equal to :func:`trace` by sphericality)."""
    if f.dom != f.cod:
        raise ShapeMismatch("trace needs an endomorphism")
    return complex(sum(f.cat.dims[c] * np.trace(B) for c, B in f.blocks.items()))


def image_of_idempotent(P: Morphism, tol: Tolerance | None = None):
    """Retract ``(S, e, r)`` of an idempotent: ``e o r = P``, ``r o e = id_S``.

    Raises
    ------
    NotIdempotent
    """
    tol = tol or P.cat.tol
    if P.dom != P.cod:
        raise ShapeMismatch("idempotent must be an endomorphism")
    cat = P.cat
    mult = [0] * cat.rank
    Es, Rs = {}, {}
    for c, B in P.blocks.items():
        try:
            E, R, r = rank_factorize(B, tol)
        except NotIdempotent as exc:
            raise NotIdempotent(f"root {c}: {exc}") from None
        mult[c] = r
        Es[c], Rs[c] = E, R
    S = ObjectSum(cat, mult)
    e = Morphism((S,), P.dom, {c: Es[c] for c in Es if mult[c]}, cat)
    r = Morphism(P.dom, (S,), {c: Rs[c] for c in Rs if mult[c]}, cat)
    return S, e, r


def random_morphism(dom, cod, rng=None, cat=None) -> Morphism:
    """Morphism with i.i.d. complex normal entries (for property tests)."""
    rng = np.random.default_rng(rng)
    m = Morphism(dom, cod, cat=cat)
    for c, B in m.blocks.items():
        m.blocks[c] = rng.normal(size=B.shape) + 1j * rng.normal(size=B.shape)
    return m
