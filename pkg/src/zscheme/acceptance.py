"""Acceptance criteria as plain functions, shared by ``verify`` and the tests.

Each criterion returns a :class:`CriterionResult`; nothing here raises on a
failed check, so a run always reports every criterion.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .cohomology import chern_line_bundle_image, pn_closed_form_check
from .errors import ZSchemeError
from .exactalg import Polynomial, WeightedRing, qq, weighted_degree
from .fundscheme import (
    DEFAULT_SAMPLES,
    PARAM_RING,
    ZSchemeIdeal,
    certify_regular_sequence,
    component_restriction,
    fiber,
    flat_degree,
    hilbert_series_Z,
    zscheme_ideal,
)
from .groebner import LEX, WEIGHTED_GREVLEX, HilbertSeries, MonomialOrder, buchberger
from .hessenberg import analyze, complete_intersection_check, hessenberg_ideal
from .pushforward import (
    equivariant_integral,
    fiber_sum_oracle,
    jacobian_class,
    jacobian_nondivisibility,
    normalization_guard,
    random_homogeneous_class,
)
from .regvariety import flag_model_a, projective_space_model
from .rootsys import all_hessenberg_spaces, hessenberg_fixed_points, peterson_omega


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    details: list = field(default_factory=list)

    def to_dict(self, timings: bool = False) -> dict:
        out = {"criterion": self.number, "name": self.name, "passed": self.passed, "details": self.details}
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.name} ({self.seconds:.2f}s)"


class _Checks:
    """Collects named boolean checks; any exception counts as a failure."""

    def __init__(self):
        self.details = []
        self.ok = True

    def check(self, label: str, fn):
        try:
            value = fn()
            passed = bool(value)
            note = None
        except ZSchemeError as exc:
            passed, note = False, f"{exc.code}: {exc.message}"
        if not passed:
            self.ok = False
        entry = {"check": label, "passed": passed}
        if note:
            entry["error"] = note
        self.details.append(entry)
        return passed


def _run(number: int, name: str, body) -> CriterionResult:
    start = time.perf_counter()
    checks = _Checks()
    try:
        body(checks)
    except ZSchemeError as exc:
        checks.ok = False
        checks.details.append({"check": "aborted", "passed": False, "error": f"{exc.code}: {exc.message}"})
    return CriterionResult(number, name, checks.ok, time.perf_counter() - start, checks.details)


def pn_model_ideal(n: int) -> ZSchemeIdeal:
    return zscheme_ideal(projective_space_model(n))


def flag_model_ideal(rank: int) -> ZSchemeIdeal:
    return zscheme_ideal(flag_model_a(rank))


def builtin_models(max_pn: int = 4, max_flag: int = 3) -> list:
    return [f"pn:{n}" for n in range(1, max_pn + 1)] + [f"flag:{l}" for l in range(1, max_flag + 1)]


def _ideal_for(selector: str) -> ZSchemeIdeal:
    kind, arg = selector.split(":")
    return pn_model_ideal(int(arg)) if kind == "pn" else flag_model_ideal(int(arg))


# ---------------------------------------------------------------------------
# 1. projective spaces


def criterion_pn(max_n: int = 4, limit: float = 10.0) -> CriterionResult:
    def body(c: _Checks):
        for n in range(1, max_n + 1):
            start = time.perf_counter()
            c.check(f"P^{n} closed form", lambda: pn_closed_form_check(n)["ok"])
            F, _ = hilbert_series_Z(pn_model_ideal(n))
            expected = HilbertSeries(tuple([1, 0] * n + [1]), (2,))
            c.check(f"P^{n} equivariant series", lambda: F == expected)
            c.check(f"P^{n} under {limit}s", lambda: time.perf_counter() - start < limit)

    return _run(1, "projective space presentations", body)


# ---------------------------------------------------------------------------
# 2. flag varieties


def flag_series_expected(rank: int) -> HilbertSeries:
    """Product over positive roots of ``(1 - t^{2(ht+1)}) / (1 - t^{2 ht})``."""
    num = [1]
    dens = []
    for start in range(rank):
        for end in range(start, rank):
            ht = end - start + 1
            nxt = [0] * (len(num) + 2 * (ht + 1))
            for i, a in enumerate(num):
                nxt[i] += a
                nxt[i + 2 * (ht + 1)] -= a
            num = nxt
            dens.append(2 * ht)
    return HilbertSeries(tuple(num), tuple(dens))


def criterion_flag(max_rank: int = 3, limit: float = 120.0) -> CriterionResult:
    def body(c: _Checks):
        for rank in range(1, max_rank + 1):
            start = time.perf_counter()
            z = flag_model_ideal(rank)
            factorial = 1
            for k in range(2, rank + 2):
                factorial *= k
            c.check(f"flag {rank} flat degree {factorial}", lambda: flat_degree(z) == factorial)
            P = z.ordinary_gb.hilbert_series()
            c.check(f"flag {rank} ordinary series", lambda: P == flag_series_expected(rank))
            c.check(f"flag {rank} under {limit}s", lambda: time.perf_counter() - start < limit)

    return _run(2, "flag variety presentations", body)


# ---------------------------------------------------------------------------
# 3. regular sequence, degrees, fibers


def criterion_certificates(models=None, samples=DEFAULT_SAMPLES) -> CriterionResult:
    models = models or builtin_models()

    def body(c: _Checks):
        for sel in models:
            z = _ideal_for(sel)
            c.check(
                f"{sel} degrees a_i + 2",
                lambda: [int(d) for d in z.degrees] == [a + 2 for a in z.model.weights],
            )
            c.check(f"{sel} regular sequence", lambda: certify_regular_sequence(z)["regular_sequence"])
            r = flat_degree(z)
            for v0 in samples:
                fb = fiber(z, v0, charpolys=False)
                c.check(f"{sel} fiber v0={v0} reduced of dim {r}", lambda: fb.dimension == r and fb.reduced)

    return _run(3, "regular sequence and fiber certificates", body)


# ---------------------------------------------------------------------------
# 4. Hessenberg sweep


def criterion_hessenberg(ranks=(2, 3)) -> CriterionResult:
    def body(c: _Checks):
        for rank in ranks:
            spaces = all_hessenberg_spaces(rank)
            for space in spaces:
                rep = analyze(space)
                c.check(f"A{rank} omega {space}", lambda: rep.ok)
            pet = peterson_omega(rank)
            rep = analyze(pet)
            target = HilbertSeries.from_polynomial(_binomial_t2(rank))
            c.check(f"A{rank} Peterson series (1+t^2)^{rank}", lambda: rep.poincare == target)
            c.check(
                f"A{rank} Peterson has {2 ** rank} fixed points",
                lambda: len(hessenberg_fixed_points(pet)) == 2 ** rank,
            )
        if 2 in ranks:
            c.check("A2 Hessenberg spaces number 5", lambda: len(all_hessenberg_spaces(2)) == 5)
            h = hessenberg_ideal(2, peterson_omega(2))
            c.check(
                "A2 Peterson CI degrees {4,4,4}",
                lambda: complete_intersection_check(h)["degrees"] == [4, 4, 4],
            )

    return _run(4, "Hessenberg sweep", body)


def _binomial_t2(k: int) -> list:
    out = [1]
    for _ in range(k):
        out = [a + b for a, b in zip(out + [0, 0], [0, 0] + out)]
    return out


# ---------------------------------------------------------------------------
# 5. push-forward


def pushforward_models() -> list:
    return ["pn:1", "pn:2", "pn:3", "flag:1", "flag:2"]


def criterion_pushforward(
    classes_per_model: int = 20, seed: int = 2024, limit: float = 120.0, perturb: tuple | None = None
) -> CriterionResult:
    """``perturb = (index, factor)`` rescales one generator of every model first."""

    def body(c: _Checks):
        start = time.perf_counter()
        rng = random.Random(seed)
        for sel in pushforward_models():
            z = _ideal_for(sel)
            if perturb:
                z = z.scaled(perturb[0], perturb[1])
            n = z.model.dimension
            r = flat_degree(z)
            c.check(f"{sel} normalization guard", lambda: normalization_guard(z)["ok"])
            c.check(f"{sel} integral of 1 is 0", lambda: not equivariant_integral(z, 1).value)
            J = jacobian_class(z).J
            c.check(f"{sel} integral of J is {r}", lambda: equivariant_integral(z, J).value == PARAM_RING.const(r))
            good = True
            for _ in range(classes_per_model):
                f = random_homogeneous_class(z, 2 * rng.randint(0, n + 2), rng)
                try:
                    res = equivariant_integral(z, f)
                except ZSchemeError:
                    good = False
                    break
                exp = res.expected_degree
                if res.value and (exp is None or exp < 0 or weighted_degree(res.value) != exp):
                    good = False
                for v0 in (1, 2):
                    if fiber_sum_oracle(z, f, v0) != res.at(v0):
                        good = False
            c.check(f"{sel} random classes: polynomial, degree, oracle", lambda: good)
        c.check(f"total under {limit}s", lambda: time.perf_counter() - start < limit)

    return _run(5, "equivariant push-forward", body)


# ---------------------------------------------------------------------------
# 6. Jacobian non-membership


def criterion_jacobian() -> CriterionResult:
    def body(c: _Checks):
        for sel in ["pn:1", "pn:2", "pn:3", "flag:2"]:
            z = _ideal_for(sel)
            c.check(f"{sel} J not in I(Z)+(v)", lambda: jacobian_nondivisibility(z)["ok"])

    return _run(6, "Jacobian non-membership", body)


# ---------------------------------------------------------------------------
# 7. line bundle congruences


def criterion_line_bundle(max_n: int = 3) -> CriterionResult:
    def body(c: _Checks):
        for n in range(1, max_n + 1):
            c.check(f"P^{n} eigenvector congruences", lambda: chern_line_bundle_image(n)["ok"])

    return _run(7, "line bundle congruences", body)


# ---------------------------------------------------------------------------
# 8. property suites (deterministic sampling; hypothesis versions live in tests)


def _random_poly(ring: WeightedRing, rng: random.Random, terms: int = 4, max_exp: int = 3) -> Polynomial:
    out = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, max_exp) for _ in ring.names)
        out[e] = qq(rng.randint(-9, 9)) / rng.randint(1, 4)
    return Polynomial(ring, out)


def _random_homogeneous(ring: WeightedRing, rng: random.Random, degree: int) -> Polynomial:
    from .pushforward import _monomials_of_degree

    monos = list(_monomials_of_degree(ring.weights, degree))
    chosen = rng.sample(monos, min(3, len(monos)))
    return Polynomial(ring, {m: qq(rng.choice([-3, -2, -1, 1, 2, 3])) for m in chosen})


def ring_axioms_hold(rng: random.Random, trials: int = 30) -> bool:
    ring = WeightedRing.of("x1:2, x2:4, v:2")
    for _ in range(trials):
        a, b, d = (_random_poly(ring, rng) for _ in range(3))
        if (a + b) * d != a * d + b * d or (a * b) * d != a * (b * d) or a * b != b * a:
            return False
        if a - a or a + ring.zero() != a or a * ring.one() != a:
            return False
    return True


def gb_replay_holds(rng: random.Random, trials: int = 15) -> bool:
    ring = WeightedRing.of("x1:2, x2:2, x3:4")
    for k in range(trials):
        gens = [_random_homogeneous(ring, rng, rng.choice([2, 4, 6])) for _ in range(3)]
        order = WEIGHTED_GREVLEX if k % 2 else LEX
        gb = buchberger(gens, order, ring)
        if not gb.s_pairs_reduce_to_zero() or any(gb.normal_form(g) for g in gens):
            return False
    return True


def hilbert_order_invariance_holds(rng: random.Random, trials: int = 10) -> bool:
    ring = WeightedRing.of("x1:2, x2:2, x3:4")
    rev = MonomialOrder("WEIGHTED_GREVLEX", ("x1", "x2", "x3"))
    for _ in range(trials):
        gens = [_random_homogeneous(ring, rng, rng.choice([2, 4, 6])) for _ in range(3)]
        series = {buchberger(gens, order, ring).hilbert_series() for order in (WEIGHTED_GREVLEX, LEX, rev)}
        if len(series) != 1:
            return False
    return True


def restriction_multiplicative(rng: random.Random, trials: int = 10) -> bool:
    for n in (1, 2, 3):
        z = pn_model_ideal(n)
        for _ in range(trials):
            f, g = _random_poly(z.ring, rng, max_exp=2), _random_poly(z.ring, rng, max_exp=2)
            for m in range(n + 1):
                lhs = component_restriction(z, f * g, m)
                if lhs != component_restriction(z, f, m) * component_restriction(z, g, m):
                    return False
    return True


def perturbation_is_caught() -> bool:
    """Scaling one generator by 3 turns ``integral(J) = r`` into ``r/3`` and trips the guard."""
    for sel in ["pn:1", "pn:2", "flag:2"]:
        z = _ideal_for(sel)
        r = flat_degree(z)
        bent = z.scaled(0, 3)
        J = jacobian_class(z).J
        if equivariant_integral(bent, J).value != PARAM_RING.const(qq(r) / 3):
            return False
        if normalization_guard(bent)["ok"] or not normalization_guard(z)["ok"]:
            return False
    return True


def criterion_properties(seed: int = 7) -> CriterionResult:
    def body(c: _Checks):
        rng = random.Random(seed)
        c.check("ring axioms", lambda: ring_axioms_hold(rng))
        c.check("S-polynomial replay", lambda: gb_replay_holds(rng))
        c.check("Hilbert series order invariance", lambda: hilbert_order_invariance_holds(rng))
        c.check("component restriction multiplicative", lambda: restriction_multiplicative(rng))
        c.check("generator scaling guard", perturbation_is_caught)

    return _run(8, "property suites", body)


# ---------------------------------------------------------------------------

SUITES = {
    "pn": ("1", "3", "6", "7"),
    "flag": ("2", "3"),
    "hessenberg": ("4",),
    "pushforward": ("5", "6", "8"),
    "all": ("1", "2", "3", "4", "5", "6", "7", "8"),
}

# models checked by criterion 3 when only part of the suite runs
SUITE_MODELS = {
    "pn": [m for m in builtin_models() if m.startswith("pn:")],
    "flag": [m for m in builtin_models() if m.startswith("flag:")],
}


def run_suite(name: str, perturb: tuple | None = None) -> list:
    if name not in SUITES:
        raise ZSchemeError("UNKNOWN_SUITE", f"suite must be one of {sorted(SUITES)}")
    table = {
        "1": criterion_pn,
        "2": criterion_flag,
        "3": lambda: criterion_certificates(SUITE_MODELS.get(name)),
        "4": criterion_hessenberg,
        "5": lambda: criterion_pushforward(perturb=perturb),
        "6": criterion_jacobian,
        "7": criterion_line_bundle,
        "8": criterion_properties,
    }
    return [table[k]() for k in SUITES[name]]
