"""Models of regular varieties: projective space, type A flags, custom data.

A model is a chart ``x_1..x_n`` with torus weights ``a_i`` and the images
``V(x_i)`` of the nilpotent vector field.  The torus field acts by
``W(x_i) = a_i x_i`` (coordinates are torus eigenvectors).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ZSchemeError
from .exactalg import (
    MIXED,
    PARAM,
    ZERO_POLY,
    Polynomial,
    WeightedRing,
    parse_polynomial,
    substitute,
    weighted_degree,
)
from .groebner import WEIGHTED_GREVLEX, buchberger
from .rootsys import RootSystemA

PN = "PN"
FLAG_A = "FLAG_A"
CUSTOM = "CUSTOM"


@dataclass(frozen=True, eq=False)
class FlagModelData:
    """Symbolic data of the big cell ``U^-`` of ``SL_{l+1}/B``."""

    rank: int
    coordinates: dict  # root -> coordinate name
    e: tuple
    h: tuple
    v_alpha: dict  # root -> Polynomial in the u ring
    w_alpha: dict
    F_alpha: dict  # root -> Polynomial in the u ring extended by v

    @property
    def root_system(self) -> RootSystemA:
        return RootSystemA(self.rank)


@dataclass(frozen=True, eq=False)
class RegularModel:
    ring: WeightedRing
    v_images: tuple
    provenance: tuple
    flag: FlagModelData | None = field(default=None, repr=False)
    generators_override: tuple | None = field(default=None, repr=False)

    @property
    def names(self) -> tuple:
        return self.ring.names

    @property
    def weights(self) -> tuple:
        return self.ring.weights

    @property
    def dimension(self) -> int:
        return self.ring.nvars

    @property
    def kind(self) -> str:
        return self.provenance[0]

    @property
    def label(self) -> str:
        kind, arg = self.provenance
        return {PN: f"pn:{arg}", FLAG_A: f"flag:{arg}"}.get(kind, f"custom:{arg}")

    def V(self, name: str) -> Polynomial:
        return self.v_images[self.ring.index(name)]

    def ambient_ring(self) -> WeightedRing:
        """Chart ring with the degree-2 parameter ``v`` appended."""
        return self.ring.extend(PARAM, 2)

    def canonical_generators(self) -> tuple:
        """``a_i v x_i - 2 V(x_i)`` in the ambient ring, or ``F_alpha`` for flags."""
        if self.generators_override is not None:
            return self.generators_override
        amb = self.ambient_ring()
        v = amb.var(PARAM)
        out = []
        for name, a, img in zip(self.names, self.weights, self.v_images):
            out.append(a * v * amb.var(name) - 2 * _lift(img, amb))
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, RegularModel):
            return NotImplemented
        return self.ring == other.ring and self.v_images == other.v_images

    def __hash__(self):
        return hash((self.ring, self.v_images))


def _lift(p: Polynomial, ring: WeightedRing) -> Polynomial:
    """Reinterpret ``p`` in a ring containing all of its variables."""
    if p.ring == ring:
        return p
    return substitute(p, {}, ring=ring)


# ---------------------------------------------------------------------------
# validation


def validate_regular(m: RegularModel) -> dict:
    """Homogeneity, degree and isolated-zero certificate for a model."""
    degrees_ok = True
    homogeneous = True
    problems = []
    for name, a, img in zip(m.names, m.weights, m.v_images):
        d = weighted_degree(img)
        if d is MIXED:
            homogeneous = False
            problems.append({"coordinate": name, "problem": "NOT_HOMOGENEOUS"})
        elif d is not ZERO_POLY and d != a + 2:
            degrees_ok = False
            problems.append({"coordinate": name, "problem": "DEGREE_MISMATCH", "degree": d, "expected": a + 2})
    finite = False
    dimension = None
    if homogeneous:
        gb = buchberger([p for p in m.v_images if p], WEIGHTED_GREVLEX, m.ring)
        finite = gb.is_zero_dimensional()
        if finite:
            dimension = gb.quotient_dimension()
    return {
        "homogeneous": homogeneous,
        "degrees_ok": degrees_ok,
        "finite": finite,
        "dimension": dimension,
        "problems": problems,
        "ok": homogeneous and degrees_ok and finite,
    }


def _require(cert: dict) -> None:
    for p in cert["problems"]:
        raise ZSchemeError(p["problem"], f"V({p['coordinate']}) fails the {p['problem'].lower()} check", **p)
    if not cert["finite"]:
        raise ZSchemeError("NOT_ISOLATED_ZERO", "the common zero set of V is not just the origin")


# ---------------------------------------------------------------------------
# builders


def projective_space_model(n: int) -> RegularModel:
    """Chart of P^n at the fixed point: ``V(x_j) = x_{j+1} - x_1 x_j``, ``V(x_n) = -x_1 x_n``."""
    if n < 1:
        raise ZSchemeError("INVALID_DIMENSION", "n must be at least 1")
    ring = WeightedRing(tuple(f"x{j}" for j in range(1, n + 1)), tuple(2 * j for j in range(1, n + 1)))
    x = ring.gens()
    images = [(x[j + 1] if j + 1 < n else ring.zero()) - x[0] * x[j] for j in range(n)]
    m = RegularModel(ring, tuple(images), (PN, n))
    _require(validate_regular(m))
    return m


def _coordinate_name(i: int, j: int, size: int) -> str:
    return f"u{i}{j}" if size < 10 else f"u{i}_{j}"


def _matmul(a, b, zero):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = zero
            for k in range(n):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _unitriangular_inverse(u, ring):
    """Inverse of a lower unitriangular matrix by forward substitution."""
    n = len(u)
    inv = [[ring.const(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j + 1, n):
            acc = ring.zero()
            for k in range(j, i):
                acc = acc + u[i][k] * inv[k][j]
            inv[i][j] = -acc
    return inv


def flag_model_a(rank: int) -> RegularModel:
    """Big cell of ``SL_{rank+1}/B`` with generators ``F_a = 2 v_a - v w_a``."""
    if rank < 1:
        raise ZSchemeError("INVALID_RANK", "rank must be at least 1")
    rs = RootSystemA(rank)
    size = rank + 1
    coords = {}
    for root in rs.negative_roots:
        i, j = rs.to_pair(root)
        coords[root] = _coordinate_name(i, j, size)
    ring = WeightedRing(
        tuple(coords.values()), tuple(2 * rs.height(r) for r in coords)
    )
    zero, one = ring.zero(), ring.one()
    u = [[one if i == j else zero for j in range(size)] for i in range(size)]
    for root, name in coords.items():
        i, j = rs.to_pair(root)
        u[i - 1][j - 1] = ring.var(name)
    uinv = _unitriangular_inverse(u, ring)
    e = tuple(tuple(1 if j == i + 1 else 0 for j in range(size)) for i in range(size))
    h = tuple(tuple(rank - 2 * i if i == j else 0 for j in range(size)) for i in range(size))
    as_poly = lambda mat: [[ring.const(c) for c in row] for row in mat]  # noqa: E731
    conj_e = _matmul(_matmul(uinv, as_poly(e), zero), u, zero)
    conj_h = _matmul(_matmul(uinv, as_poly(h), zero), u, zero)

    amb = ring.extend(PARAM, 2)
    v = amb.var(PARAM)
    v_alpha, w_alpha, F_alpha = {}, {}, {}
    for root, name in coords.items():
        i, j = rs.to_pair(root)
        v_alpha[root] = conj_e[i - 1][j - 1]
        w_alpha[root] = conj_h[i - 1][j - 1] - h[i - 1][j - 1]
        F = 2 * _lift(v_alpha[root], amb) - v * _lift(w_alpha[root], amb)
        a = 2 * rs.height(root)
        lin = list(ring.index(name) == k for k in range(ring.nvars)) + [True]
        c = F.coefficient(tuple(int(b) for b in lin))
        if c == -a:
            F = -F
        elif c != a:
            raise ZSchemeError("NORMALIZATION", f"coefficient of v*{name} in F is {c}, expected +-{a}")
        F_alpha[root] = F

    # V(u) = -(u * strictly-lower part of u^-1 e u), entrywise
    lower = [[conj_e[i][j] if i > j else zero for j in range(size)] for i in range(size)]
    moved = _matmul(u, lower, zero)
    images = []
    for root in coords:
        i, j = rs.to_pair(root)
        images.append(-moved[i - 1][j - 1])

    data = FlagModelData(
        rank=rank, coordinates=coords, e=e, h=h, v_alpha=v_alpha, w_alpha=w_alpha, F_alpha=F_alpha
    )
    m = RegularModel(
        ring, tuple(images), (FLAG_A, rank), flag=data,
        generators_override=tuple(F_alpha[r] for r in coords),
    )
    _require(validate_regular(m))
    return m


def custom_model(ring: WeightedRing, weights: Sequence[int] | None, v_images) -> RegularModel:
    """Validated model from user data; ``v_images`` maps names (or positions) to polynomials."""
    if weights is not None and tuple(weights) != ring.weights:
        ring = WeightedRing(ring.names, tuple(weights), ring.field)
    if PARAM in ring.names:
        raise ZSchemeError("INVALID_RING", "the chart ring must not contain v")
    if isinstance(v_images, Mapping):
        missing = [n for n in ring.names if n not in v_images]
        if missing:
            raise ZSchemeError("DIMENSION_MISMATCH", f"no V image for {missing}")
        v_images = [v_images[n] for n in ring.names]
    v_images = list(v_images)
    if len(v_images) != ring.nvars:
        raise ZSchemeError("DIMENSION_MISMATCH", "one V image per coordinate required")
    images = []
    for img in v_images:
        if isinstance(img, str):
            img = parse_polynomial(img, ring)
        elif isinstance(img, Polynomial):
            img = _lift(img, ring)
        else:
            img = ring.const(img)
        images.append(img)
    m = RegularModel(ring, tuple(images), (CUSTOM, ring.nvars))
    _require(validate_regular(m))
    return m


def load_model_file(path) -> RegularModel:
    """``{"coordinates": [...], "weights": [...], "V": {name: expr}}``."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ZSchemeError("FILE_ERROR", str(exc), path=str(path)) from None
    except json.JSONDecodeError as exc:
        raise ZSchemeError("FILE_ERROR", f"invalid JSON: {exc}", path=str(path)) from None
    try:
        names, weights, images = data["coordinates"], data["weights"], data["V"]
    except (KeyError, TypeError):
        raise ZSchemeError("FILE_ERROR", "model file needs coordinates, weights and V", path=str(path)) from None
    ring = WeightedRing(tuple(names), tuple(weights))
    return custom_model(ring, None, images)


def model_from_selector(selector: str) -> RegularModel:
    """``pn:N``, ``flag:L`` or ``file:PATH``."""
    kind, _, arg = selector.partition(":")
    try:
        if kind == "pn":
            return projective_space_model(int(arg))
        if kind == "flag":
            return flag_model_a(int(arg))
    except ValueError:
        raise ZSchemeError("BAD_SELECTOR", f"expected an integer in {selector!r}") from None
    if kind == "file" and arg:
        return load_model_file(arg)
    raise ZSchemeError("BAD_SELECTOR", f"unknown model selector {selector!r}")
