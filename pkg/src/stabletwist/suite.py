"""The acceptance suite: named cases with pass/fail/inconclusive verdicts."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import exactla as la
from .algebra import Algebra, find_symmetric_form
from .catalog import (dihedral_algebra, extraspecial_group_algebra, klein_commutative_algebra,
                      semidihedral_algebra, string_module, tau_word)
from .errors import StwError
from .module import (Module, direct_sum, free_module, quotient, regular_module, simple_module,
                     socle, strip, submodule)
from .stable import (cosyzygy, grothendieck_class, is_stably_isomorphic, omega_power,
                     stable_endo_structure, stable_hom, syzygy)
from .twist import (TwistContext, equivalence_evidence, expected_twist_class, induce, pn_twist,
                    relative_syzygy_data, restriction_report, spherical_twist,
                    spherical_twist_power, stable_hom_map_rank)

SCHEMA_VERSION = 1


@dataclass
class SuiteResult:
    case: str
    verdict: str  # "pass" | "fail" | "inconclusive"
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        out = {"case": self.case, "verdict": self.verdict, "details": self.details}
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


class Checker:
    """Collects named checks; a failing check records its witness."""

    def __init__(self):
        self.details: dict = {}
        self.failures: list = []
        self.unknown: list = []

    def equal(self, name, got, expected):
        self.details[name] = {"got": _plain(got), "expected": _plain(expected)}
        if got != expected:
            self.failures.append("%s: got %s, expected %s" % (name, got, expected))

    def true(self, name, value, witness=""):
        self.details[name] = bool(value)
        if not value:
            self.failures.append("%s: %s" % (name, witness or "false"))

    def iso(self, name, result, expected: str, tolerant: bool = False):
        """Record an isomorphism verdict; ``unknown`` is inconclusive."""
        self.details[name] = {"verdict": result.verdict, "reason": result.reason,
                              "expected": expected, "witness": result.witness is not None}
        if result.verdict == "unknown":
            self.unknown.append(name)
            if not tolerant:
                self.failures.append("%s: search inconclusive (%s)" % (name, result.reason))
        elif result.verdict != expected:
            self.failures.append("%s: %s (%s), expected %s" % (name, result.verdict, result.reason,
                                                               expected))

    def verdict(self) -> str:
        if self.failures:
            return "fail"
        return "inconclusive" if self.unknown else "pass"


def _plain(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, tuple):
        return list(v)
    return v


# algebra lists

def criterion1_algebras() -> list[tuple[str, callable]]:
    out = []
    for q in (2, 3):
        for p in (2, 3, 5):
            out.append(("dihedral:q=%d:p=%d" % (q, p), lambda q=q, p=p: dihedral_algebra(q, p)))
    for q in (2, 3):
        for p in (2, 3):
            for delta in (0, 1):
                out.append(("semidihedral:q=%d:p=%d:delta=%d" % (q, p, delta),
                            lambda q=q, p=p, delta=delta: semidihedral_algebra(q, delta, p)))
    for p in (2, 3, 5):
        out.append(("klein:p=%d" % p, lambda p=p: klein_commutative_algebra(p)))
    out.append(("extraspecial:p=3", lambda: extraspecial_group_algebra(3)))
    return out


def property_algebras(level: str) -> list[tuple[str, callable]]:
    if level == "full":
        return criterion1_algebras()
    return [("dihedral:q=2:p=2", lambda: dihedral_algebra(2, 2)),
            ("semidihedral:q=2:p=2:delta=1", lambda: semidihedral_algebra(2, 1, 2)),
            ("klein:p=2", lambda: klein_commutative_algebra(2)),
            ("klein:p=3", lambda: klein_commutative_algebra(3)),
            ("extraspecial:p=3", lambda: extraspecial_group_algebra(3))]


def x_name(alg: Algebra) -> str:
    return "x3" if alg.name.startswith("extraspecial") else "x"


# random modules

def random_module(alg: Algebra, rng: np.random.Generator, max_gens: int = 2) -> Module:
    """A seeded projective-free quotient of a small free module."""
    p, d = alg.p, alg.dim
    for _ in range(100):
        g = int(rng.integers(1, max_gens + 1))
        free = free_module(alg, g)
        count = int(rng.integers(1, g + 2))
        vecs = rng.integers(0, p, (count, g * d))
        # push generators into the radical so the quotient keeps its top
        vecs = la.matmul(vecs, free.act(_random_radical(alg, rng)), p)
        span = la.tensordot(vecs, free.action, ([1], [1]), p).reshape(-1, g * d)
        mod = strip(quotient(free, span)[0])
        if mod.dim:
            return mod
    return simple_module(alg)


def relatively_projective_samples(ctx: TwistContext, rng, count: int = 5) -> list[Module]:
    """Seeded non-projective modules whose restriction to R is free.

    Candidates are modules induced along a second cyclic subalgebra and
    plain random modules; only those passing the restriction test are kept.
    """
    alg = ctx.algebra
    alt = "x%d" % (alg.p + 1) if alg.name.startswith("extraspecial") else "y"
    try:
        other = TwistContext(alg, alt)
    except StwError:
        other = None
    out = []
    for trial in range(200):
        mod = random_module(alg, rng)
        if other is not None and trial % 2 == 0:
            mod = strip(induce(other, mod)[0])
        if mod.dim and restriction_report(ctx, mod).relatively_projective:
            out.append(mod)
            if len(out) == count:
                break
    return out


def _random_radical(alg: Algebra, rng) -> np.ndarray:
    v = rng.integers(0, alg.p, alg.dim)
    v[0] = 0
    if not v.any():
        v[alg.generators[0]] = 1
    return v


def rad_mod_soc(alg: Algebra) -> Module:
    reg = regular_module(alg)
    rad = la.identity(alg.dim)[1:]
    rmod, _ = submodule(reg, rad)
    soc = socle(rmod)
    return strip(quotient(rmod, soc)[0])


# criteria

def case_catalog(level, seed):
    c = Checker()
    for name, build in criterion1_algebras():
        alg = build()
        form = find_symmetric_form(alg, seed=seed)
        expected = 27 if name.startswith("extraspecial") else 4 if name.startswith("klein") \
            else 4 * int(name.split("q=")[1].split(":")[0])
        c.equal(name + ":dim", alg.dim, expected)
        c.true(name + ":symmetric", la.rank(form.gram, alg.p) == alg.dim)
    return c


def case_restriction(level, seed):
    c = Checker()
    for name, build in criterion1_algebras():
        alg = build()
        ctx = TwistContext(alg, x_name(alg), seed=seed)
        rep = restriction_report(ctx, ctx.T)
        if name.startswith(("dihedral", "semidihedral")):
            q = int(name.split("q=")[1].split(":")[0])
            expected = (2, q - 1)
        elif name.startswith("klein"):
            expected = (2, 0)
        else:
            expected = (3, 2)
        c.equal(name + ":T_R", (rep.k_count, rep.free_count, rep.intermediate_sizes),
                (expected[0], expected[1], ()))
    return c


def case_periodicity(level, seed):
    c = Checker()
    for name, build in criterion1_algebras():
        alg = build()
        ctx = TwistContext(alg, x_name(alg), seed=seed)
        T = ctx.T
        if ctx.m == 2:
            c.iso(name + ":Omega T ~ T", is_stably_isomorphic(syzygy(T), T, seed=seed), "yes")
        else:
            c.iso(name + ":Omega^2 T ~ T", is_stably_isomorphic(omega_power(T, 2), T, seed=seed),
                  "yes")
    return c


def case_spherical_dihedral(level, seed):
    c = Checker()
    for q in (2, 3):
        alg = dihedral_algebra(q, 2)
        name = alg.name
        ctx = TwistContext(alg, "x", seed=seed)
        k = simple_module(alg)
        t1 = spherical_twist(ctx, k)
        t2 = spherical_twist(ctx, t1)
        c.equal(name + ":dim tau(k)", t1.dim, 2 * q + 1)
        c.iso(name + ":tau(k) ~ string", is_stably_isomorphic(t1, string_module(alg, tau_word(q)),
                                                                seed=seed), "yes")
        c.equal(name + ":class tau(k)", grothendieck_class(t1).value, expected_twist_class(ctx))
        c.equal(name + ":class formula", expected_twist_class(ctx), (2 * q + 1) % (4 * q))
        c.equal(name + ":stEnd tau(k)", stable_hom(t1, t1).stable_dim, 1)
        c.equal(name + ":stEnd tau^2(k)", stable_hom(t2, t2).stable_dim, 1)
        c.iso(name + ":tau^2(k) !~ Omega^-2(k)",
              is_stably_isomorphic(t2, omega_power(k, -2), seed=seed), "no")
    return c


def case_semidihedral(level, seed):
    c = Checker()
    for q in (2, 3):
        alg = semidihedral_algebra(q, 1, 2)
        ctx = TwistContext(alg, "x", seed=seed)
        k = simple_module(alg)
        t2 = spherical_twist_power(ctx, k, 2)
        c.iso(alg.name + ":tau^2(k) ~ Omega^-4(k)",
              is_stably_isomorphic(t2, omega_power(k, -4), seed=seed), "yes")
    return c


def case_klein_pn(level, seed):
    c = Checker()
    for p in (2, 3, 5):
        alg = klein_commutative_algebra(p)
        ctx = TwistContext(alg, "x", y="y", seed=seed)
        k = simple_module(alg)
        rho = pn_twist(ctx, k)
        t2 = spherical_twist_power(ctx, k, 2)
        o2 = omega_power(k, -2)
        c.iso(alg.name + ":rho(k) ~ tau^2(k)", is_stably_isomorphic(rho, t2, seed=seed), "yes")
        c.iso(alg.name + ":rho(k) ~ Omega^-2(k)", is_stably_isomorphic(rho, o2, seed=seed), "yes")
        c.iso(alg.name + ":tau^2(k) ~ Omega^-2(k)", is_stably_isomorphic(t2, o2, seed=seed), "yes")
    return c


def case_extraspecial(level, seed):
    c = Checker()
    alg = extraspecial_group_algebra(3)
    p = alg.p
    for i in (1, p, p + 1):
        ctx_i = TwistContext(alg, "x%d" % i, y="y", seed=seed)
        endo = stable_endo_structure(ctx_i.T, psi=ctx_i.psi())
        c.equal("T_%d:n" % i, endo.n, p - 1)
        c.true("T_%d:psi=L_y certified" % i, endo.certified)
    ctx = TwistContext(alg, "x%d" % p, y="y", seed=seed)
    k = simple_module(alg)
    rho = pn_twist(ctx, k)
    c.equal("rho(k):stEnd", stable_hom(rho, rho).stable_dim, 1)
    c.details["rho(k):dim"] = rho.dim
    for j in range(-4, 5):
        c.iso("rho(k) !~ Omega^%d(k)" % j,
              is_stably_isomorphic(rho, omega_power(k, j), seed=seed), "no", tolerant=True)
    T = ctx.T
    c.iso("rho(T) ~ Omega^-2(T)", is_stably_isomorphic(pn_twist(ctx, T), omega_power(T, -2),
                                                        seed=seed), "yes")
    x_mod = induce(TwistContext(alg, "x%d" % (p + 1)), k)[0]
    c.true("X relatively projective", restriction_report(ctx, x_mod).relatively_projective)
    c.iso("rho(X) ~ X", is_stably_isomorphic(pn_twist(ctx, x_mod), x_mod, seed=seed), "yes")
    r1 = relative_syzygy_data(ctx, k)
    r2 = relative_syzygy_data(ctx, r1.module)
    c.true("relative covers minimal", r1.certified_minimal and r2.certified_minimal)
    c.true("relative covers split over R", r1.split_on_restriction and r2.split_on_restriction)
    c.iso("rho(k) ~ Omega^-2(Omega_R^2(k))",
          is_stably_isomorphic(rho, omega_power(r2.module, -2), seed=seed), "yes")
    return c


def case_properties(level, seed):
    c = Checker()
    rng_root = np.random.default_rng(seed)
    for name, build in property_algebras(level):
        alg = build()
        rng = np.random.default_rng(rng_root.integers(0, 2 ** 32))
        mods = [random_module(alg, rng) for _ in range(20)]
        bad_a = [i for i, m in enumerate(mods)
                 if not is_stably_isomorphic(syzygy(cosyzygy(m)), m, seed=seed)]
        bad_b = [i for i, m in enumerate(mods)
                 if not is_stably_isomorphic(cosyzygy(syzygy(m)), m, seed=seed)]
        c.equal(name + ":Omega Omega^-1 ~ id failures", bad_a, [])
        c.equal(name + ":Omega^-1 Omega ~ id failures", bad_b, [])
        ctx = TwistContext(alg, x_name(alg), seed=seed)
        if restriction_report(ctx, ctx.T).k_count != 2:
            continue
        bad_add = []
        for i in range(10):
            m1, m2 = mods[2 * i], mods[2 * i + 1]
            lhs = spherical_twist(ctx, direct_sum(m1, m2))
            rhs = direct_sum(spherical_twist(ctx, m1), spherical_twist(ctx, m2))
            if not is_stably_isomorphic(lhs, rhs, seed=seed):
                bad_add.append(i)
        c.equal(name + ":tau additivity failures", bad_add, [])
        rels = relatively_projective_samples(ctx, rng)
        c.equal(name + ":relatively projective samples", len(rels), 5)
        bad_fix = [i for i, rel in enumerate(rels)
                   if not is_stably_isomorphic(spherical_twist(ctx, rel), rel, seed=seed)]
        c.equal(name + ":tau fixes relative projectives failures", bad_fix, [])
    alg = dihedral_algebra(2, 2)
    ctx = TwistContext(alg, "x", seed=seed)
    k = simple_module(alg)
    grid = {"k": k, "T": ctx.T, "Omega k": syzygy(k), "rad/soc": rad_mod_soc(alg)}
    twisted = {key: spherical_twist(ctx, m) for key, m in grid.items()}
    for a, ma in grid.items():
        for b, mb in grid.items():
            before, rank = stable_hom_map_rank(ctx, ma, mb)
            after = stable_hom(twisted[a], twisted[b]).stable_dim
            c.equal("grid %s -> %s" % (a, b), (before, after, rank), (before, before, before))
    for build in (lambda: dihedral_algebra(2, 2), lambda: semidihedral_algebra(2, 1, 2),
                  lambda: klein_commutative_algebra(3)):
        alg = build()
        ev = equivalence_evidence(TwistContext(alg, "x", seed=seed))
        c.details[alg.name + ":evidence"] = ev.to_dict()
        c.true(alg.name + ":evidence", ev.passed, str(ev.to_dict()))
    return c


CASES = [
    ("1-catalog", case_catalog),
    ("2-restriction", case_restriction),
    ("3-periodicity", case_periodicity),
    ("4-spherical-dihedral", case_spherical_dihedral),
    ("5-semidihedral", case_semidihedral),
    ("6-klein-pn", case_klein_pn),
    ("7-extraspecial", case_extraspecial),
    ("8-properties", case_properties),
]


def run_case(case_id: str, level: str = "quick", seed: int = 0) -> SuiteResult:
    fn = dict(CASES)[case_id]
    index = [cid for cid, _ in CASES].index(case_id)
    start = time.perf_counter()
    try:
        checker = fn(level, seed + index)
        verdict, details = checker.verdict(), checker.details
        if checker.failures:
            details = dict(details, failures=checker.failures)
    except StwError as exc:
        verdict, details = "fail", {"error": "%s: %s" % (type(exc).__name__, exc)}
    return SuiteResult(case_id, verdict, details, time.perf_counter() - start)


def run_suite(level: str = "quick", seed: int = 0, jobs: int = 1, cases=None) -> list[SuiteResult]:
    ids = cases or [cid for cid, _ in CASES]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_case, ids, [level] * len(ids), [seed] * len(ids)))
    return [run_case(cid, level, seed) for cid in ids]


def suite_report(results: list[SuiteResult], level: str, seed: int, timing: bool = False) -> dict:
    return {"schema_version": SCHEMA_VERSION, "level": level, "seed": seed,
            "results": [r.to_dict(timing) for r in results],
            "ok": all(r.verdict != "fail" for r in results)}
