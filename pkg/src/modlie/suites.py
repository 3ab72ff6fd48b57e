"""Named verification groups used by ``modlie verify`` and the acceptance tests.

Each group returns a list of :class:`Check` records.  Expected values are
either structural facts about the algebras (dimensions, simplicity, known
toral ranks) or identities checked by two independent computations.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .cartan import NormalFormSpec, build_family, build_from_form, build_witt, derived_to_stability, normal_form
from .dpalg import DPAlgebra
from .exceptional import (build_brown_g2, build_chevalley, build_heisenberg, build_matrix_classical,
                          build_melikian, melikian_t0_analysis)
from .liealg import (associated_graded, check_graded_conditions, is_simple, killing_form, recognition_check,
                     seligman_mills_check, weisfeiler_ideal)
from .linalg import SubspaceBasis, matpow, to_dense
from .restricted import (NotCentreless, absolute_toral_rank, centralizer, is_restrictable, jacobson_terms,
                         k_section, make_torus, maximal_torus, p_power, restricted_structure,
                         root_decomposition, sandwich_search, toral_rank_estimate, weight_set_compare,
                         winter_exponential)


@dataclass
class Check:
    name: str
    passed: bool
    seconds: float
    detail: str = ""


class _Recorder:
    def __init__(self):
        self.checks: list[Check] = []

    def __call__(self, name: str, fn):
        t = time.perf_counter()
        try:
            out = fn()
            passed, detail = (out if isinstance(out, tuple) else (bool(out), ""))
        except Exception as exc:  # a crash is a failed check, reported with its message
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        self.checks.append(Check(name, bool(passed), time.perf_counter() - t, str(detail)))


_CACHE: dict = {}


def _cached(key, fn):
    if key not in _CACHE:
        _CACHE[key] = fn()
    return _CACHE[key]


def _witt(m, n, p):
    return _cached(("W", m, tuple(n), p), lambda: build_witt(m, n, p))


def _melikian(m, n):
    return _cached(("M", m, n), lambda: build_melikian(m, n, check=(m, n) == (1, 1)))


def _derived_last(L):
    return derived_to_stability(L)[-1]


def _h2():
    return _cached("H2", lambda: _derived_last(build_family("H", 2, (1, 1), 5)))


def _k3():
    return _cached("K3", lambda: build_family("K", 3, (1, 1, 1), 5))


def _s3():
    return _cached("S3", lambda: _derived_last(build_family("S", 3, (1, 1, 1), 5)))


# ---------------------------------------------------------------------------

def suite_dimensions() -> list[Check]:
    rec = _Recorder()
    for m, n, p in [(1, (1,), 5), (1, (2,), 5), (2, (1, 1), 5), (3, (1, 1, 1), 5), (1, (1,), 7)]:
        rec(f"dim W({m};{n}) p={p}", lambda: _witt(m, n, p).dim == m * p ** sum(n))
        rec(f"dim O({m};{n}) p={p}", lambda: DPAlgebra(m, n, p).size == p ** sum(n))
    for m, n in [(1, 1), (1, 2)]:
        rec(f"dim M({m},{n})", lambda: _melikian(m, n).dim == 5 ** (m + n + 1))
    rec("dim G2(2;(1,1))", lambda: build_brown_g2((1, 1)).dim == 14)
    return rec.checks


def suite_simplicity() -> list[Check]:
    rec = _Recorder()
    simple = {
        "W(1;1)": lambda: _witt(1, (1,), 5),
        "W(2;(1,1))": lambda: _witt(2, (1, 1), 5),
        "S(3;1)^(1)": _s3,
        "H(2;1)^(2)": _h2,
        "K(3;1)": _k3,
        "M(1,1)": lambda: _melikian(1, 1),
        "psl(5)": lambda: build_matrix_classical("psl", 5, 5),
    }
    for name, make in simple.items():
        rec(f"{name} simple", lambda: is_simple(make()))
    rec("sl(5) not simple", lambda: not is_simple(build_matrix_classical("sl", 5, 5)))
    rec("gl(2) not simple", lambda: not is_simple(build_matrix_classical("gl", 2, 5)))
    rec("K(3;1) perfect", lambda: _k3().derived().dim == _k3().dim)
    return rec.checks


def _s_exp():
    w = normal_form(NormalFormSpec("volume_exp_i", i=1), 3, (1, 1, 1), 5)
    return _derived_last(build_from_form(3, (1, 1, 1), 5, w, "annihilate", family="S"))


def suite_restrictability() -> list[Check]:
    rec = _Recorder()
    for m, n, p in [(1, (1,), 5), (1, (2,), 5), (2, (1, 1), 5), (3, (1, 1, 1), 5), (1, (1,), 7)]:
        expect = all(k == 1 for k in n)
        rec(f"W({m};{n}) p={p} restrictable={expect}", lambda: is_restrictable(_witt(m, n, p)) == expect)
    rec("H(2;1)^(2) restrictable", lambda: is_restrictable(_h2()))
    rec("H(2;(2,1))^(2) not restrictable",
        lambda: not is_restrictable(_derived_last(build_family("H", 2, (2, 1), 5))))
    rec("S(3;1;exp(x1) w_S)^(1) not restrictable", lambda: not is_restrictable(_s_exp()))
    rec("M(1,1) restrictable", lambda: is_restrictable(_melikian(1, 1)))
    rec("M(1,2) not restrictable", lambda: not is_restrictable(_melikian(1, 2)))
    return rec.checks


# ---------------------------------------------------------------------------
# Witt algebra versus (O(1;1), {f,g} = f g' - g f')

def _poly_mul(a, b, p):
    out = np.zeros(p, dtype=np.int64)
    for i, x in enumerate(a):
        if x:
            out[i:] += x * b[: p - i]
    return out % p


def _poly_diff(a, p):
    out = np.zeros(p, dtype=np.int64)
    out[:-1] = a[1:] * np.arange(1, p)
    return out % p


def _curly(f, g, p):
    return (_poly_mul(f, _poly_diff(g, p), p) - _poly_mul(g, _poly_diff(f, p), p)) % p


def _witt_matches_O(p: int):
    W = _witt(1, (1,), p)
    fact = [1]
    for k in range(1, p + 1):
        fact.append(fact[-1] * k % p)
    # e_i = x^{i+1} d = (i+1)! x^{(i+1)} d, i.e. (i+1)! times basis vector i+1
    def e(i):
        v = np.zeros(p, dtype=np.int64)
        v[i + 1] = fact[i + 1]
        return v

    def mono(k):
        v = np.zeros(p, dtype=np.int64)
        v[k] = 1
        return v

    inv = {fact[k]: pow(fact[k], p - 2, p) for k in range(p)}
    for i in range(-1, p - 1):
        for j in range(-1, p - 1):
            lhs = W.bracket(e(i), e(j))
            # express the W bracket in the e basis, i.e. as a polynomial
            poly = np.zeros(p, dtype=np.int64)
            for k in range(p):
                poly[k] = lhs[k] * inv[fact[k]] % p
            if np.any((poly - _curly(mono(i + 1), mono(j + 1), p)) % p):
                return False, f"mismatch at ({i},{j})"
    return True, ""


def _zassenhaus_basis(p: int):
    one_plus_x = np.zeros(p, dtype=np.int64)
    one_plus_x[:2] = 1
    u = {}
    for i in range(p):
        acc = np.zeros(p, dtype=np.int64)
        acc[0] = 1
        for _ in range((i + 1) % p):
            acc = _poly_mul(acc, one_plus_x, p)
        u[i] = acc
    for i in range(p):
        for j in range(p):
            if np.any((_curly(u[i], u[j], p) - (j - i) * u[(i + j) % p]) % p):
                return False, f"{{u_{i},u_{j}}} mismatch"
    return True, ""


def suite_witt() -> list[Check]:
    rec = _Recorder()
    rec("W(1;1) ~ (O(1;1),{,}) via e_i -> x^(i+1)", lambda: _witt_matches_O(5))
    rec("{u_i,u_j} = (j-i)u_(i+j)", lambda: _zassenhaus_basis(5))
    return rec.checks


# ---------------------------------------------------------------------------

def _witt_sandwich(p):
    W = _witt(1, (1,), p)
    rep = sandwich_search(W)
    # e_i sits at basis index i + 1
    expect = SubspaceBasis.spanned_by_indices([i + 1 for i in range(-1, p - 1) if 2 * i > p], W.dim, p)
    return rep.span == expect and rep.in_killing_radical and not rep.skipped, repr(rep.span.vectors.tolist())


def _zero_sandwich(L):
    rep = sandwich_search(L)
    return rep.span.dim == 0 and not rep.skipped, f"skipped={rep.skipped}"


def suite_sandwich() -> list[Check]:
    rec = _Recorder()
    for p in (5, 7):
        rec(f"S(W(1;1)) p={p} = span(e_i: 2i>p)", lambda: _witt_sandwich(p))
    rec("S(sl(2)) = 0", lambda: _zero_sandwich(build_chevalley("A", 1, 5)))
    rec("S(sl(3)) = 0", lambda: _zero_sandwich(build_chevalley("A", 2, 5)))
    rec("S(psl(5)) = 0", lambda: _zero_sandwich(build_matrix_classical("psl", 5, 5)))

    def melikian():
        rep = sandwich_search(_melikian(1, 1))
        return rep.strongly_degenerate and rep.in_killing_radical, f"span dim {rep.span.dim}"

    rec("M(1,1) strongly degenerate, sandwiches in Killing radical", melikian)
    rec("Killing form of W(1;1) p=5 is zero", lambda: killing_form(_witt(1, (1,), 5)).is_zero())
    return rec.checks


# ---------------------------------------------------------------------------

def _melikian_torus():
    M = _melikian(1, 1)
    an = _cached("M_t0", lambda: melikian_t0_analysis(M))
    return M, an, make_torus(M, an["t0"].vectors)


def _sections_bound():
    M, _, tor = _melikian_torus()
    d = root_decomposition(M, tor)
    roots = d.roots
    out = []
    a = roots[0]
    b = next(r for r in roots if np.linalg.matrix_rank(np.array([a, r])) == 2
             and not any(all((i * x - y) % 5 == 0 for x, y in zip(a, r)) for i in range(5)))
    for rs in ([a], [b], [a, b]):
        sec = k_section(M, d, rs)
        est, _ = toral_rank_estimate(sec)
        out.append((len(rs), sec.dim, est))
    W = _witt(1, (1,), 5)
    dW = root_decomposition(W, [np.eye(5, dtype=np.int64)[1]])
    sec = k_section(W, dW, [dW.roots[0]])
    out.append((1, sec.dim, toral_rank_estimate(sec)[0]))
    return all(est <= k for k, _, est in out), repr(out)


def suite_toral_rank() -> list[Check]:
    rec = _Recorder()

    def heis():
        H = build_heisenberg(2, 5)
        try:
            absolute_toral_rank(H)
            return False, "centreless path accepted a central algebra"
        except NotCentreless:
            pass
        return toral_rank_estimate(H) == (0, True), ""

    rec("TR(Heisenberg) = 0", heis)
    rec("TR(W(1;1)) = 1", lambda: absolute_toral_rank(_witt(1, (1,), 5)) == (1, True))
    rec("TR(sl(2)) = 1", lambda: absolute_toral_rank(build_chevalley("A", 1, 5)) == (1, True))

    def melikian_mt():
        M, an, tor = _melikian_torus()
        res = maximal_torus(M, restarts=2, bound=2)
        R = restricted_structure(M)
        t0_ok = tor.split and tor.dim == 2 and M.bracket_spaces(tor.span, tor.span).dim == 0
        t0_ok = t0_ok and all(np.array_equal(R.pmap(t), t % 5) for t in tor.toral_basis)
        return res.mt == 2 and res.exact and t0_ok, f"MT {res.mt}, tried {res.tried}"

    rec("MT(M(1,1)) = 2 with t0 as witness", melikian_mt)
    rec("TR(section) <= k on computed sections", _sections_bound)
    return rec.checks


# ---------------------------------------------------------------------------

def _winter_case(idx: int):
    W = _witt(1, (1,), 5)
    p = 5
    e = np.eye(5, dtype=np.int64)
    x = e[idx]
    wd = winter_exponential(W, [e[1]], x)
    ok = wd.ok and wd.recomputed_match is True
    detail = f"m={wd.m} inv={wd.invertible} cartan={wd.cartan} roots={wd.decomposes} recomputed={wd.recomputed_match}"
    if not np.any(p_power(W, x).coords):
        A = W.ad_dense(x)
        exp = np.zeros_like(A)
        term = np.eye(5, dtype=np.int64)
        for i in range(p):
            exp = (exp + term * pow(_fact(i, p), p - 2, p)) % p
            term = term @ A % p
        ok = ok and np.array_equal(wd.E % p, exp)
        detail += " E=exp(ad x)"
    return ok, detail


def _fact(i, p):
    out = 1
    for k in range(2, i + 1):
        out = out * k % p
    return out


def suite_winter() -> list[Check]:
    rec = _Recorder()
    rec("Winter E for x = e_-1", lambda: _winter_case(0))
    rec("Winter E for x = e_1", lambda: _winter_case(2))
    return rec.checks


# ---------------------------------------------------------------------------

def _jacobson_pairs(L, pairs: int = 25, seed: int = 0):
    p = L.p
    rng = np.random.default_rng(seed)
    for _ in range(pairs):
        x, y = rng.integers(0, p, L.dim), rng.integers(0, p, L.dim)
        s = jacobson_terms(L, x, y)  # verifies the (x+y)^[p] expansion
        # polynomial identity, evaluated at every t in GF(p) by direct powering
        for t in range(p):
            A = to_dense(matpow(L.ad((t * x + y) % p), p - 1, p))
            lhs = A @ x % p
            rhs = sum(i * s[i - 1] * pow(t, i - 1, p) for i in range(1, p)) % p
            if np.any((lhs - rhs) % p):
                return False, "polynomial identity failed"
    return True, ""


def suite_jacobson() -> list[Check]:
    rec = _Recorder()
    rec("sl(2)", lambda: _jacobson_pairs(build_chevalley("A", 1, 5)))
    rec("W(1;1)", lambda: _jacobson_pairs(_witt(1, (1,), 5)))
    rec("G2", lambda: _jacobson_pairs(build_chevalley("G", 2, 5)))
    return rec.checks


# ---------------------------------------------------------------------------

def suite_melikian() -> list[Check]:
    rec = _Recorder()

    def jacobi():
        _melikian(1, 1).validate(full=True)
        return True

    rec("Jacobi on all basis triples of M(1,1)", jacobi)

    def structure():
        _, an, _ = _melikian_torus()
        ok = an["dim_h"] == 5 and an["hhh_equals_t0"] and not an["h_abelian"]
        return ok, f"dim h {an['dim_h']}"

    rec("dim h = 5, [h,[h,h]] = t0, h nonabelian", structure)

    def k_cartans():
        K = _k3()
        dims = []
        for seed in range(3):
            res = maximal_torus(K, restarts=1, seed=seed)
            H = centralizer(K, res.torus.span)
            if K.bracket_spaces(H, H).dim:
                return False, f"nonabelian Cartan for seed {seed}"
            dims.append(res.mt)
        return True, f"torus dims {dims}"

    rec("K(3;1) Cartan subalgebras from torus search are abelian", k_cartans)
    return rec.checks


# ---------------------------------------------------------------------------

def _filtered_algebras():
    return {
        "W(1;1)": _witt(1, (1,), 5),
        "W(2;(1,1))": _witt(2, (1, 1), 5),
        "S(3;1)^(1)": _s3(),
        "H(2;1)^(2)": _h2(),
        "K(3;1)": _k3(),
    }


def suite_filtration() -> list[Check]:
    rec = _Recorder()
    for name, L in _filtered_algebras().items():
        def graded(L=L):
            if L.filtration is None:
                from .cartan import natural_filtration
                L.filtration = natural_filtration(L)
            G = associated_graded(L, L.filtration)
            c = check_graded_conditions(G)
            ok = c["g1"] and c["g2"] and c["g3"] and weisfeiler_ideal(G).dim == 0
            return ok, repr(c)
        rec(f"{name}: gr conditions g1-g3, Weisfeiler ideal 0", graded)

    def sm_pass(L, H):
        v = seligman_mills_check(L, H)
        return v.passed, repr(v.clauses)

    sl3 = build_chevalley("A", 2, 5)
    rec("Seligman-Mills passes on sl(3)", lambda: sm_pass(sl3, sl3.grading.component(0, 5)))
    psl5 = build_matrix_classical("psl", 5, 5)
    rec("Seligman-Mills passes on psl(5)", lambda: sm_pass(psl5, psl5.grading.component(0, 5)))

    def sm_fail():
        W = _witt(1, (1,), 5)
        v = seligman_mills_check(W, W.grading.component(0, 5))
        return (not v.passed) and v.failing is not None, f"failing clause {v.failing}"

    rec("Seligman-Mills fails on W(1;1) with clause named", sm_fail)
    for name in ("W(1;1)", "K(3;1)"):
        def recog(name=name):
            L = _filtered_algebras()[name]
            v = recognition_check(L, L.filtration)
            return v.passed, repr(v.clauses)
        rec(f"recognition theorem clauses on {name}", recog)
    return rec.checks


def suite_weights() -> list[Check]:
    rec = _Recorder()

    def compare():
        W = _witt(1, (1,), 5)
        e = np.eye(5, dtype=np.int64)
        rep = weight_set_compare(W, [e[1]], [(e[0] + e[1]) % 5])
        mult_ok = rep["found"] and rep["map"] is not None
        return mult_ok, repr(rep["map"])

    rec("weight-set bijection Fe0 vs F(1+x)d in W(1;1)", compare)
    return rec.checks


SUITES = {
    "dimensions": (suite_dimensions, 30),
    "simplicity": (suite_simplicity, 180),
    "restrictability": (suite_restrictability, 120),
    "witt": (suite_witt, 5),
    "sandwich": (suite_sandwich, 120),
    "toral_rank": (suite_toral_rank, 120),
    "winter": (suite_winter, 60),
    "jacobson": (suite_jacobson, 60),
    "melikian": (suite_melikian, 180),
    "filtration": (suite_filtration, 120),
    "weights": (suite_weights, 10),
}


def run_suite(name: str) -> tuple[list[Check], float]:
    fn, _ = SUITES[name]
    t = time.perf_counter()
    checks = fn()
    return checks, time.perf_counter() - t
