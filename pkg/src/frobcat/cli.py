"""Command-line interface.

Exit status is 0 when every check passes, 1 when a mathematical check fails
and 2 on usage or input errors.  ``--json PATH`` writes the full report as
``{"schema": 1, "command": ..., "checks": [...], ...}``.
"""
from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import catalog
from .numerics import DEFAULT_TOL

SCHEMA = 1


class CheckFailed(click.ClickException):
    exit_code = 1


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        return [z.real, z.imag] if z.imag else z.real
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    to_dict = getattr(x, "to_dict", None)
    if to_dict is not None:
        return _jsonable(to_dict())
    return repr(x)


def _fmt(z):
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real: .6f}"
    return f"{z.real: .6f}{z.imag:+.6f}i"


def _emit(ctx, command, checks, data=None):
    """Print the check table, write JSON if requested, and exit with the status."""
    opts = ctx.obj
    for c in checks:
        mark = "ok  " if c["passed"] else "FAIL"
        w = _jsonable(c.get("witness"))
        wit = "" if w is None or w == {} or w == [] else f"  {w}"
        click.echo(f"  [{mark}] {c['name']:<48s} residual {c['residual']:.3e}{wit}")
    report = {"schema": SCHEMA, "command": command, "checks": checks}
    if data is not None:
        report["data"] = data
    if opts.get("json"):
        with open(opts["json"], "w", encoding="utf-8") as fh:
            json.dump(_jsonable(report), fh, indent=2, sort_keys=True)
    failed = [c["name"] for c in checks if not c["passed"]]
    if failed:
        raise CheckFailed(f"{len(failed)} check(s) failed: {', '.join(failed)}")


def _row(name, passed, residual=0.0, witness=None):
    return {"name": name, "passed": bool(passed), "residual": float(residual), "witness": witness}


def _load_category(source, tol):
    from .category import load_category_file
    if source is None:
        raise click.UsageError("--category is required")
    kind, _, body = source.partition(":")
    try:
        if kind == "builtin":
            return catalog.load_builtin(body, tol)
        if kind == "file":
            return load_category_file(body, tol)
    except catalog.UnknownKey as exc:
        raise click.UsageError(f"unknown category key {exc}") from None
    except catalog.ValidationFailed as exc:
        raise CheckFailed(f"catalog entry failed validation: {exc}") from None
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError(f"cannot read category {source!r}: {exc}") from None
    raise click.UsageError(f"category must be builtin:<key> or file:<path>, got {source!r}")


def _load_algebra(source, cat, tol):
    from .algebras import load_algebra_file
    if source is None:
        raise click.UsageError("--algebra is required")
    kind, _, body = source.partition(":")
    try:
        if kind == "builtin":
            return catalog.load_builtin_algebra(cat, body, tol)
        if kind == "file":
            return load_algebra_file(body, cat)
    except catalog.IncompatibleKeys as exc:
        raise click.UsageError(str(exc)) from None
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError(f"cannot build algebra {source!r}: {exc}") from None
    raise click.UsageError(f"algebra must be builtin:<key> or file:<path>, got {source!r}")


def common(f):
    f = click.option("--json", "json_path", type=click.Path(dir_okay=False),
                     help="Write the full report as JSON.")(f)
    f = click.option("--tol", type=float, default=None, help="Absolute and relative epsilon.")(f)
    return f


def _setup(ctx, json_path, tol):
    ctx.ensure_object(dict)
    if json_path:
        ctx.obj["json"] = json_path
    if tol is not None:
        if not (np.isfinite(tol) and tol > 0):
            raise click.UsageError("--tol must be positive")
        ctx.obj["tol"] = DEFAULT_TOL.with_eps(tol)
    return ctx.obj.get("tol", DEFAULT_TOL)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.pass_context
def main(ctx):
    """Frobenius algebras in modular tensor categories."""
    ctx.ensure_object(dict)


@main.command()
@click.option("--category", required=True)
@common
@click.pass_context
def validate(ctx, category, json_path, tol):
    """Pentagon, hexagon, ribbon and rigidity residuals."""
    from .category import validate as _validate
    tol = _setup(ctx, json_path, tol)
    cat = _load_category(category, tol)
    rep = _validate(cat, tol)
    click.echo(f"{cat.name}: rank {cat.rank}, pentagon residual {rep.pentagon_residual:.3e}, "
               f"hexagon residual {rep.hexagon_residual:.3e}")
    checks = rep.as_checks()
    eps = tol.abs_eps
    for c in checks:
        if c["name"] not in ("unit", "twist_dual"):
            c["passed"] = c["residual"] <= eps
    _emit(ctx, "validate", checks, {"labels": cat.labels, "messages": rep.messages})


@main.command()
@click.option("--category", required=True)
@common
@click.pass_context
def smatrix(ctx, category, json_path, tol):
    """Diagrammatic s-matrix, checked against the twist/fusion formula."""
    from .category import is_modular, s_matrix, s_matrix_formula, verify_s_squared
    from .numerics import max_abs
    tol = _setup(ctx, json_path, tol)
    cat = _load_category(category, tol)
    s = s_matrix(cat, tol)
    click.echo("labels: " + " ".join(cat.labels))
    for row in s:
        click.echo("  " + "  ".join(_fmt(x) for x in row))
    res = max_abs(s - s_matrix_formula(cat))
    checks = [_row("s diagram = formula", res <= 1e3 * tol.abs_eps, res)]
    mod = is_modular(cat, tol)
    checks.append(_row("modular", True, 0.0, mod))
    if mod:
        r2 = verify_s_squared(cat, tol)
        checks.append(_row("s^2 = Dim C", r2 <= 1e3 * tol.abs_eps, r2))
    _emit(ctx, "smatrix", checks, {"labels": cat.labels, "s": s})


@main.command("algebra-check")
@click.option("--category", required=True)
@click.option("--algebra", required=True)
@click.option("--require", default="algebra,frobenius",
              help="Comma-separated properties that must hold.")
@common
@click.pass_context
def algebra_check(ctx, category, algebra, require, json_path, tol):
    """Algebra properties with residuals."""
    tol = _setup(ctx, json_path, tol)
    cat = _load_category(category, tol)
    alg = _load_algebra(algebra, cat, tol)
    need = {x.strip() for x in require.split(",") if x.strip()}
    rows = alg.report()
    unknown = need - {r["name"] for r in rows}
    if unknown:
        raise click.UsageError(f"unknown properties {sorted(unknown)}")
    click.echo(f"{alg.name}: object {alg.A.as_dict()}, dim {alg.dim:.6f}")
    for r in rows:
        if r["name"] not in need:
            r["name"] += " (reported)"
            r["witness"] = bool(r["passed"])
            r["passed"] = True
    b1, bA, _ = alg.special_data()
    _emit(ctx, "algebra-check", rows, {"object": alg.A.as_dict(), "beta_1": b1, "beta_A": bA})


@main.command()
@click.option("--category", required=True)
@click.option("--algebra", required=True)
@common
@click.pass_context
def centers(ctx, category, algebra, json_path, tol):
    """Left and right centers and the comparison of their local modules."""
    from .modules import verify_thm_equiv
    tol = _setup(ctx, json_path, tol)
    cat = _load_category(category, tol)
    alg = _load_algebra(algebra, cat, tol)
    rep = verify_thm_equiv(alg)
    Cl, Cr = rep["centers"]
    click.echo(f"C_l = {Cl.C.A.as_dict()}, C_r = {Cr.C.A.as_dict()}")
    click.echo(f"local modules: {rep['left'].rank} (left), {rep['right'].rank} (right)")
    _emit(ctx, "centers", rep["checks"],
          {"C_l": Cl.C.A.as_dict(), "C_r": Cr.C.A.as_dict(), "permutation": rep["permutation"],
           "left": rep["left"], "right": rep["right"]})


@main.command("alpha-z")
@click.option("--category", required=True)
@click.option("--algebra", required=True)
@common
@click.pass_context
def alpha_z(ctx, category, algebra, json_path, tol):
    """Z(A) from induced bimodules, computed by two oracles."""
    from .centers import OracleDisagreement, alpha_Z_matrix
    tol = _setup(ctx, json_path, tol)
    cat = _load_category(category, tol)
    alg = _load_algebra(algebra, cat, tol)
    try:
        Z = alpha_Z_matrix(alg, "both")
        checks = [_row("rank oracle = intertwiner oracle", True)]
    except OracleDisagreement as exc:
        Z = alpha_Z_matrix(alg, "rank")
        checks = [_row("rank oracle = intertwiner oracle", False, 1.0, str(exc))]
    click.echo("labels: " + " ".join(alg.cat.labels))
    for row in Z.entries:
        click.echo("  " + " ".join(f"{x:2d}" for x in row))
    checks.append(_row("Z_00 = 1 (simple)", True, 0.0, int(Z.entries[0, 0])))
    _emit(ctx, "alpha-z", checks, {"labels": alg.cat.labels, "Z": Z.entries})


@main.command("local-modules")
@click.option("--category", required=True)
@click.option("--algebra", required=True)
@common
@click.pass_context
def local_modules(ctx, category, algebra, json_path, tol):
    """Simple modules, locality and the quotient summary."""
    from .modules import completeness_residual, enumerate_simple_modules, locality_criteria, \
        quotient_summary
    tol = _setup(ctx, json_path, tol)
    cat = _load_category(category, tol)
    alg = _load_algebra(algebra, cat, tol)
    mods = enumerate_simple_modules(alg)
    commutative = alg.check_commutative()
    checks = []
    click.echo(f"{'module':<8s}{'object':<40s}{'dim_A':>10s}  local")
    rows = []
    for M in mods:
        local = None
        if commutative:
            a, b, c, res = locality_criteria(M)
            local = a
            checks.append(_row(f"{M.name} locality criteria agree", len({a, b, c}) == 1, 0.0,
                               {"votes": [a, b, c], "residuals": list(res)}))
        click.echo(f"{M.name:<8s}{str(M.Mdot.as_dict()):<40s}{M.dim_A:>10.5f}  "
                   f"{'-' if local is None else local}")
        rows.append({"name": M.name, "object": M.Mdot.as_dict(), "dim_A": M.dim_A, "local": local})
    comp = completeness_residual(alg)
    checks.append(_row("decomposition completeness", comp == 0, comp))
    data = {"modules": rows, "simple_modules": len(mods)}
    if commutative:
        q = quotient_summary(alg)
        data["local_modules"] = sum(1 for r in rows if r["local"])
        click.echo(f"{len(mods)} simples, {data['local_modules']} local, quotient rank {q.rank}, "
                   f"Dim_loc {q.Dim_loc:.6f}")
        checks.extend(q.checks)
        data["quotient"] = q
    else:
        click.echo(f"{len(mods)} simples (algebra not commutative: no quotient)")
    _emit(ctx, "local-modules", checks, data)


@main.command()
@click.option("--category", required=True)
@common
@click.pass_context
def trivialize(ctx, category, json_path, tol):
    """Build T_G in G x Gbar and check that it trivializes G."""
    from .coset import NotModular, verify_trivialization
    tol = _setup(ctx, json_path, tol)
    cat = _load_category(category, tol)
    try:
        rows, T, q = verify_trivialization(cat)
    except NotModular as exc:
        raise click.UsageError(str(exc)) from None
    click.echo(f"T = {T.A.as_dict()}, dim {T.dim:.6f}")
    _emit(ctx, "trivialize", rows, {"object": T.A.as_dict(), "quotient": q})


@main.command()
@click.option("--Q", "q_spec", required=True, help="builtin:<key> or file:<path>")
@click.option("--H", "h_spec", required=True, help="builtin:<key> or file:<path>")
@click.option("--L", "l_spec", required=True,
              help="builtin:T (T_Q in Q x Qbar), builtin:<algebra key> or file:<path> in Q x H")
@common
@click.pass_context
def coset(ctx, q_spec, h_spec, l_spec, json_path, tol):
    """Coset construction for an algebra L in Q x H."""
    from .algebras import load_algebra_file
    from .category import deligne_product
    from .coset import PreconditionFailed, build_trivializing_algebra, coset_pipeline
    tol = _setup(ctx, json_path, tol)
    Q = _load_category(q_spec, tol)
    H = _load_category(h_spec, tol)
    kind, _, body = l_spec.partition(":")
    if kind == "builtin" and body in ("T", "T_G"):
        L = build_trivializing_algebra(Q)
    else:
        QH = deligne_product(Q, H)
        L = (_load_algebra(l_spec, QH, tol) if kind == "builtin" else
             load_algebra_file(body, QH))
    try:
        rep = coset_pipeline(Q, H, L, tol=tol.abs_eps)
    except PreconditionFailed as exc:
        raise CheckFailed(f"precondition failed: {exc}") from None
    click.echo(f"G rank {rep.G_summary.rank}, L' = {rep.Lprime_object}, "
               f"dim relation residual {rep.dim_relation_residual:.3e}")
    _emit(ctx, "coset", rep.checks, rep.to_dict())


@main.command()
@common
@click.pass_context
def selftest(ctx, json_path, tol):
    """Run the acceptance suite."""
    from .acceptance import run_all
    tol = _setup(ctx, json_path, tol)
    results = run_all(tol, echo=click.echo)
    checks = [r.to_dict() for r in results]
    report = {"schema": SCHEMA, "command": "selftest", "checks": checks}
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(_jsonable(report), fh, indent=2, sort_keys=True)
    failed = [r for r in results if not r.passed]
    for r in failed:
        click.echo(f"  criterion {r.number}: {r.detail.get('error', r.detail)}", err=True)
    if failed:
        raise CheckFailed(f"{len(failed)} criteria failed")


def run(argv=None) -> int:
    """Entry point returning the exit status instead of exiting."""
    try:
        main.main(args=argv, prog_name="frobcat", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(run())
