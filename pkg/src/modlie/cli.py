"""Command-line front end: ``modlie construct | analyze | verify``.

Exit codes: 0 success, 1 usage error, 2 failed verification, 3 internal
dimension limit.
"""
from __future__ import annotations

import json
import sys
import time

import click
import numpy as np

from . import cartan, exceptional
from .liealg import DimensionLimitExceeded, derivation_algebra, from_json, is_simple, killing_form
from .restricted import (is_restrictable, known_toral_rank, maximal_torus, root_decomposition, sandwich_search,
                         toral_rank_estimate)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_LIMIT = 0, 1, 2, 3


class VerificationFailed(click.ClickException):
    exit_code = EXIT_VERIFY


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}")


def _write(L, out):
    data = L.to_json()
    if out in (None, "-"):
        click.echo(data)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(data)
        click.echo(f"wrote {L.name or 'algebra'} (dim {L.dim}) to {out}", err=True)


def _derived(L, k: int):
    chain = cartan.derived_to_stability(L)
    return chain[min(k, len(chain) - 1)]


@click.group()
@click.option("--seed", default=0, show_default=True, help="Seed for randomized steps.")
@click.pass_context
def cli(ctx, seed):
    """Modular Lie algebras over GF(p): build, analyze, verify."""
    ctx.obj = {"seed": seed}


# ---------------------------------------------------------------------------
# construct

@cli.group()
def construct():
    """Build an algebra and write its structure constants as JSON."""


def _out_option(f):
    return click.option("-o", "--output", default=None, help="Output file (default stdout).")(f)


@construct.command("witt")
@click.option("--m", type=int, required=True)
@click.option("--n", default="1", help="Comma-separated heights n_1,...,n_m.")
@click.option("--p", type=int, default=5, show_default=True)
@_out_option
def construct_witt(m, n, p, output):
    n = _ints(n)
    if len(n) == 1 and m > 1:
        n = n * m
    _write(cartan.build_witt(m, n, p), output)


@construct.command("family")
@click.option("--family", type=click.Choice(["W", "S", "CS", "H", "CH", "K"], case_sensitive=False), required=True)
@click.option("--m", type=int, required=True)
@click.option("--n", default="1")
@click.option("--p", type=int, default=5, show_default=True)
@click.option("--derived", type=int, default=0, help="Take the k-th derived algebra (stops when stable).")
@_out_option
def construct_family(family, m, n, p, derived, output):
    n = _ints(n)
    if len(n) == 1 and m > 1:
        n = n * m
    L = cartan.build_family(family, m, n, p)
    _write(_derived(L, derived) if derived else L, output)


def _matrix_arg(text: str, m: int, p: int):
    if text in (None, "zero"):
        return np.zeros((m, m), dtype=np.int64)
    if text == "std":
        A = np.zeros((m, m), dtype=np.int64)
        r = m // 2
        for i in range(r):
            A[i, i + r], A[i + r, i] = 1, p - 1
        return A
    try:
        rows = json.loads(text)
    except json.JSONDecodeError:
        raise click.BadParameter(f"matrix must be 'std', 'zero' or a JSON list, got {text!r}")
    return np.array(rows, dtype=np.int64) % p


def _pairs(text: str):
    out = []
    for chunk in (text or "").split(","):
        if chunk.strip():
            a, b = chunk.split(":")
            out.append((int(a), int(b)))
    return tuple(out)


@construct.command("form")
@click.option("--family", required=True,
              type=click.Choice(["volume_exp_i", "volume_delta", "contact_I", "hamiltonian_exp_iI", "hamiltonian_AB"]))
@click.option("--m", type=int, required=True)
@click.option("--n", default="1")
@click.option("--p", type=int, default=5, show_default=True)
@click.option("--i", "index", type=int, default=None, help="Index i for the exp-type forms, i0 for contact forms.")
@click.option("--pairs", default="", help="Index pairs as 'a:b,c:d'.")
@click.option("--A", "A", default=None, help="Skew matrix: 'std', 'zero' or JSON rows.")
@click.option("--B", "B", default=None, help="Skew matrix: 'std', 'zero' or JSON rows.")
@click.option("--derived", type=int, default=0)
@_out_option
def construct_form(family, m, n, p, index, pairs, A, B, derived, output):
    n = _ints(n)
    if len(n) == 1 and m > 1:
        n = n * m
    if family == "contact_I":
        spec = cartan.NormalFormSpec(family, decomposition=(index, _pairs(pairs)))
    elif family == "hamiltonian_AB":
        spec = cartan.NormalFormSpec(family, A=_matrix_arg(A or "std", m, p), B=_matrix_arg(B, m, p))
    else:
        spec = cartan.NormalFormSpec(family, i=index, decomposition=_pairs(pairs) or None)
    w = cartan.normal_form(spec, m, n, p)
    mode, fam = {"volume_exp_i": ("annihilate", "S"), "volume_delta": ("annihilate", "S"),
                 "contact_I": ("scale_by_O", "K"), "hamiltonian_exp_iI": ("annihilate", "H"),
                 "hamiltonian_AB": ("annihilate", "H")}[family]
    L = cartan.build_from_form(m, n, p, w, mode, family=fam)
    _write(_derived(L, derived) if derived else L, output)


@construct.command("melikian")
@click.option("--m", type=int, default=1)
@click.option("--n", type=int, default=1)
@_out_option
def construct_melikian(m, n, output):
    _write(exceptional.build_melikian(m, n, check=False), output)


@construct.command("brown")
@click.option("--n", default="1,1")
@_out_option
def construct_brown(n, output):
    _write(exceptional.build_brown_g2(_ints(n), p=2, check=False), output)


@construct.command("chevalley")
@click.option("--kind", type=click.Choice(list("ABCDEFG")), required=True)
@click.option("--rank", type=int, required=True)
@click.option("--p", type=int, default=5, show_default=True)
@_out_option
def construct_chevalley(kind, rank, p, output):
    _write(exceptional.build_chevalley(kind, rank, p), output)


@construct.command("matrix")
@click.option("--kind", type=click.Choice(["gl", "sl", "pgl", "psl"]), required=True)
@click.option("--size", type=int, required=True)
@click.option("--p", type=int, default=5, show_default=True)
@_out_option
def construct_matrix(kind, size, p, output):
    _write(exceptional.build_matrix_classical(kind, size, p), output)


@construct.command("heisenberg")
@click.option("--r", type=int, default=1)
@click.option("--p", type=int, default=5, show_default=True)
@_out_option
def construct_heisenberg(r, p, output):
    _write(exceptional.build_heisenberg(r, p), output)


# ---------------------------------------------------------------------------
# analyze

def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise click.BadParameter(str(exc), param_hint="FILE")
    try:
        return from_json(text, check=True)
    except json.JSONDecodeError as exc:
        raise click.BadParameter(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}", param_hint="FILE")
    except (KeyError, ValueError, IndexError, TypeError) as exc:
        raise click.BadParameter(f"{path}: {exc}", param_hint="FILE")


def analyze_algebra(L, simple=False, restrictable=False, sandwich=False, roots=False, torus="none",
                    toral_rank=False, seed=0) -> dict:
    """Run the requested analyses and return a JSON-ready report."""
    t0 = time.perf_counter()
    report = {"algebra": {"name": L.name, "dim": L.dim, "field": f"GF({L.p})",
                          "family": L.metadata.get("family")},
              "flags": {}, "numbers": {"center_dim": L.center().dim}, "timing": {}}

    def timed(key, fn):
        t = time.perf_counter()
        out = fn()
        report["timing"][key] = round(time.perf_counter() - t, 4)
        return out

    if simple:
        report["flags"]["simple"] = timed("simple", lambda: is_simple(L, seed))
    if restrictable:
        report["flags"]["restrictable"] = timed("restrictable", lambda: is_restrictable(L))
    if sandwich:
        rep = timed("sandwich", lambda: sandwich_search(L))
        report["flags"]["strongly_degenerate"] = rep.strongly_degenerate
        report["numbers"]["sandwich_span_dim"] = rep.span.dim
        report["sandwich"] = {"components": rep.components, "skipped": rep.skipped,
                              "in_killing_radical": rep.in_killing_radical}
    tor = None
    if toral_rank or (roots and torus == "auto"):
        if L.center().dim == 0:
            bound = known_toral_rank(L)
            res = timed("torus", lambda: maximal_torus(L, restarts=3, seed=seed, bound=bound,
                                                       prefer_split=roots))
            tor = res.torus
            report["numbers"]["MT"] = res.mt
            report["numbers"]["TR"] = {"value": res.mt, "exact": res.exact,
                                       "kind": "exact" if res.exact else "lower bound"}
        else:
            est, exact = timed("torus", lambda: toral_rank_estimate(L, seed=seed))
            report["numbers"]["TR"] = {"value": est, "exact": exact,
                                       "kind": "exact" if exact else "lower bound"}
    if roots:
        if tor is None or not tor.split:
            report["roots"] = {"error": "no split torus available (use --torus auto on a centreless algebra)"}
        else:
            d = timed("roots", lambda: root_decomposition(L, tor))
            report["numbers"]["rk"] = int(tor.dim)
            report["roots"] = [{"weight": list(map(int, w)), "dim": V.dim} for w, V in sorted(d.spaces.items())]
    report["timing"]["total"] = round(time.perf_counter() - t0, 4)
    return report


@cli.command()
@click.argument("file")
@click.option("--simple", is_flag=True)
@click.option("--restrictable", is_flag=True)
@click.option("--sandwich", is_flag=True)
@click.option("--roots", is_flag=True)
@click.option("--torus", type=click.Choice(["auto", "none"]), default="none")
@click.option("--tr", "toral_rank", is_flag=True, help="Estimate the absolute toral rank.")
@click.option("--killing", is_flag=True, help="Report whether the Killing form vanishes.")
@click.option("--derivations", is_flag=True, help="Report dim Der L (gated by MODLIE_DIM_LIMIT, exit 3).")
@click.option("--expect", multiple=True, help="KEY=true|false|INT checked against the report (exit 2 on mismatch).")
@click.option("--verify", is_flag=True, help="Fail with exit code 2 if any internal assertion fails.")
@click.option("--table", is_flag=True, help="Print a human-readable table instead of JSON.")
@click.pass_context
def analyze(ctx, file, simple, restrictable, sandwich, roots, torus, toral_rank, killing, derivations, expect, verify,
            table):
    """Analyze an algebra stored as JSON structure constants."""
    L = _load(file)
    rep = analyze_algebra(L, simple, restrictable, sandwich, roots, torus, toral_rank, ctx.obj["seed"])
    if killing:
        rep["flags"]["killing_zero"] = killing_form(L).is_zero()
    if derivations:
        rep["numbers"]["der_dim"] = derivation_algebra(L).dim
    failures = []
    if verify:
        if sandwich and not rep["sandwich"]["in_killing_radical"]:
            failures.append("sandwich span not inside the Killing radical")
        if isinstance(rep.get("roots"), list) and sum(r["dim"] for r in rep["roots"]) != L.dim:
            failures.append("root spaces do not fill the algebra")
    for item in expect:
        key, _, val = item.partition("=")
        got = rep["flags"].get(key, rep["numbers"].get(key))
        if isinstance(got, dict):
            got = got.get("value")
        want = {"true": True, "false": False}.get(val.lower()) if val.lower() in ("true", "false") else int(val)
        if got != want:
            failures.append(f"{key}: expected {want}, got {got}")
    if table:
        click.echo(f"{L.name or '?'}  dim {L.dim}  GF({L.p})")
        for k, v in {**rep["flags"], **rep["numbers"]}.items():
            click.echo(f"  {k:22s} {v}")
        if isinstance(rep.get("roots"), list):
            for r in rep["roots"]:
                click.echo(f"  weight {tuple(r['weight'])}: dim {r['dim']}")
    else:
        click.echo(json.dumps(rep, indent=2, default=str))
    if failures:
        raise VerificationFailed("; ".join(failures))


# ---------------------------------------------------------------------------
# verify

@cli.command()
@click.argument("suite")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def verify(suite, as_json):
    """Run a named verification suite (or 'all')."""
    from .suites import SUITES, run_suite

    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        if name not in SUITES:
            raise click.UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or 'all'")
    results, failed = [], False
    for name in names:
        checks, secs = run_suite(name)
        ok = all(c.passed for c in checks)
        failed |= not ok
        results.append({"suite": name, "passed": ok, "seconds": round(secs, 3),
                        "checks": [{"name": c.name, "passed": c.passed, "seconds": round(c.seconds, 4),
                                    "detail": c.detail} for c in checks]})
    if as_json:
        click.echo(json.dumps(results, indent=2))
    else:
        for r in results:
            click.echo(f"[{'PASS' if r['passed'] else 'FAIL'}] {r['suite']} ({r['seconds']:.2f}s)")
            for c in r["checks"]:
                click.echo(f"    {'ok ' if c['passed'] else 'BAD'} {c['name']} ({c['seconds']:.2f}s) {c['detail']}")
    if failed:
        raise VerificationFailed("some checks failed")


def main(argv=None) -> int:
    """Entry point with the documented exit codes."""
    try:
        cli.main(args=argv, prog_name="modlie", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except VerificationFailed as exc:
        exc.show()
        return EXIT_VERIFY
    except click.ClickException as exc:  # usage errors and bad parameters
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except DimensionLimitExceeded as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_LIMIT
    except (cartan.InvalidDecomposition, cartan.BadBlockShape, cartan.DegenerateForm,
            exceptional.WrongCharacteristic, exceptional.UnsupportedType, ValueError) as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
