"""Built-in categories and algebras.

Non-pointed categories are read from the JSON files in ``frobcat/data``;
pointed categories are generated from an abelian group and a bicharacter.

Keys
----
``vec``, ``toric_code``, ``fibonacci``, ``ising``,
``pointed_z<N>_<k>`` (``Z_N`` with ``theta_a = exp(2 pi i k a^2 / N)``),
any key with suffix ``_dual`` and products ``key1*key2``.
"""
from __future__ import annotations

import itertools
import json
import re
from functools import lru_cache
from importlib import resources
from math import gcd

import numpy as np

from .category import (SkeletalCategory, _parse_category_dict, deligne_product, dual_category,
                       validate)
from .numerics import DEFAULT_TOL, Tolerance

__all__ = [
    "UnknownKey",
    "ValidationFailed",
    "IncompatibleKeys",
    "pointed_category",
    "load_builtin",
    "load_builtin_algebra",
    "builtin_keys",
    "CatalogEntry",
]


class UnknownKey(KeyError):
    """Catalog key not recognised."""


class ValidationFailed(RuntimeError):
    """A shipped category does not pass the validator."""


class IncompatibleKeys(ValueError):
    """Algebra key does not make sense for the category."""


class CatalogEntry:
    """A validated category with provenance notes."""

    def __init__(self, key, category, notes=""):
        self.key = key
        self.category = category
        self.notes = notes


def pointed_category(orders, K, name=None, labels=None, tol: Tolerance = DEFAULT_TOL):
    """Pointed braided category on ``Z_{n_1} x ... x Z_{n_m}``.

    F is trivial; the braiding is the bicharacter
    ``beta(a, b) = exp(2 pi i sum_ij K_ij a_i b_j / gcd(n_i, n_j))`` and
    ``theta_a = beta(a, a)``.
    """
    orders = tuple(int(n) for n in orders)
    K = np.asarray(K, dtype=int).reshape(len(orders), len(orders))
    elems = list(itertools.product(*[range(n) for n in orders]))
    index = {a: x for x, a in enumerate(elems)}
    r = len(elems)

    def add(a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, orders))

    def neg(a):
        return tuple((-x) % n for x, n in zip(a, orders))

    def beta(a, b):
        ph = sum(K[i, j] * a[i] * b[j] / gcd(orders[i], orders[j])
                 for i in range(len(orders)) for j in range(len(orders)))
        return np.exp(2j * np.pi * ph)

    N = np.zeros((r, r, r), dtype=int)
    F = {}
    R = {}
    for a, b in itertools.product(elems, repeat=2):
        N[index[a], index[b], index[add(a, b)]] = 1
        R[(index[a], index[b], index[add(a, b)], 0, 0)] = beta(a, b)
    for a, b, c in itertools.product(elems, repeat=3):
        ab, bc = add(a, b), add(b, c)
        l = add(ab, c)
        F[(index[a], index[b], index[c], index[l], index[ab], index[bc], 0, 0, 0, 0)] = 1.0
    theta = [beta(a, a) for a in elems]
    if labels is None:
        labels = ["".join(str(x) for x in a) for a in elems]
        if len(orders) > 1:
            labels[0] = "1"
    dual = [index[neg(a)] for a in elems]
    return SkeletalCategory(name or "pointed", labels, dual, N, F, R, theta, np.ones(r),
                            None, tol)


def _toric_code(tol):
    # e = (1,0), m = (0,1), f = (1,1); beta(a, b) = (-1)^{a_2 b_1}
    cat = pointed_category((2, 2), [[0, 0], [1, 0]], name="toric_code", tol=tol)
    # reorder to 1, e, m, f
    rename = {"1": "1", "10": "e", "01": "m", "11": "f"}
    cat.labels = [rename[x] for x in cat.labels]
    perm = [cat.labels.index(x) for x in ("1", "e", "m", "f")]
    return _permute_labels(cat, perm)


def _permute_labels(cat, perm):
    """Relabel so that new label n is old label perm[n]."""
    inv = {old: new for new, old in enumerate(perm)}
    r = cat.rank
    N = np.zeros_like(cat.N)
    for i, j, k in itertools.product(range(r), repeat=3):
        N[inv[i], inv[j], inv[k]] = cat.N[i, j, k]
    F = {tuple(inv[x] for x in key[:6]) + key[6:]: v for key, v in cat.F.items()}
    R = {tuple(inv[x] for x in key[:3]) + key[3:]: v for key, v in cat.R.items()}
    return SkeletalCategory(cat.name, [cat.labels[p] for p in perm], [inv[cat.dual[p]] for p in perm],
                            N, F, R, cat.theta[perm], cat.dims[perm], cat.pivotal[perm], cat.tol)


def _read_data(name, tol):
    text = resources.files("frobcat").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return _parse_category_dict(json.loads(text), tol)


_POINTED = re.compile(r"^pointed_z(\d+)_(\d+)$")


def builtin_keys():
    return ["vec", "toric_code", "fibonacci", "ising", "pointed_z3_1", "pointed_z4_1"]


def _build(key, tol):
    if key == "vec":
        return pointed_category((1,), [[0]], name="vec", labels=["1"], tol=tol)
    if key == "toric_code":
        return _toric_code(tol)
    if key in ("fibonacci", "ising"):
        return _read_data(key, tol)
    m = _POINTED.match(key)
    if m:
        n, k = int(m.group(1)), int(m.group(2))
        # labels are the group elements 0..N-1, so the unit is "0"
        return pointed_category((n,), [[k]], name=key, labels=[str(a) for a in range(n)], tol=tol)
    raise UnknownKey(key)


@lru_cache(maxsize=None)
def _load_cached(key, tol):
    key = key.strip()
    if "*" in key:
        parts = [p.strip() for p in key.split("*")]
        cat = _load_cached(parts[0], tol)
        for p in parts[1:]:
            cat = deligne_product(cat, _load_cached(p, tol))
        cat.name = key
        return cat
    if key.endswith("_dual"):
        return dual_category(_load_cached(key[:-5], tol))
    cat = _build(key, tol)
    rep = validate(cat, tol)
    if not rep.passed:
        raise ValidationFailed(f"{key}: pentagon {rep.pentagon_residual:.2e}, "
                               f"hexagon {rep.hexagon_residual:.2e}, {rep.messages}")
    return cat


def load_builtin(key: str, tol: Tolerance = DEFAULT_TOL) -> SkeletalCategory:
    """Validated built-in category.

    Raises
    ------
    UnknownKey, ValidationFailed
    """
    return _load_cached(key, tol)


def load_builtin_algebra(cat, alg_key: str, tol: Tolerance | None = None):
    """Built-in algebra in `cat` (a category or catalog key).

    `alg_key` is one of ``trivial``, ``simple_current:<l1,l2,...>`` (labels by
    name, braces optional), ``dual_object:<label>``, ``T_G`` / ``T``.
    For ``T_G`` the category key names G; the algebra lives in ``G * G_dual``.
    """
    from . import algebras, coset

    if isinstance(cat, str):
        cat_key = cat
        cat = load_builtin(cat)
    else:
        cat_key = cat.name
    tol = tol or cat.tol
    key = alg_key.strip()
    if key == "trivial":
        return algebras.trivial_algebra(cat)
    if key.startswith("simple_current:"):
        body = key.split(":", 1)[1].strip().strip("{}")
        # top-level commas only: product labels such as "(1,e)" contain commas
        parts = re.findall(r"\([^()]*\)|[^,\s()]+", body)
        labs = [cat.label_index(int(x) if x.isdigit() else x) for x in parts]
        return algebras.simple_current_algebra(cat, labs)
    if key.startswith("dual_object:"):
        lab = key.split(":", 1)[1].strip()
        lab = cat.label_index(int(lab) if lab.isdigit() else lab)
        from .morphisms import ObjectSum
        return algebras.dual_object_algebra(ObjectSum.simple(cat, lab))
    if key in ("T_G", "T"):
        return coset.build_trivializing_algebra(cat)
    raise IncompatibleKeys(f"unknown algebra key {alg_key!r} for {cat_key}")
