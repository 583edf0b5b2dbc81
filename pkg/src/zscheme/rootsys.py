"""Type A root systems, the Weyl group action, and Hessenberg spaces.

A root is a tuple of coefficients over the simple roots; in type A_l the
root ``e_i - e_j`` (1-based, i != j) has coefficient ``sign`` on the simple
roots ``a_min(i,j) .. a_{max(i,j)-1}``.  The negative root ``e_i - e_j`` with
``i > j`` labels the matrix entry ``(i, j)`` of the lower unipotent group.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

from .errors import ZSchemeError


@dataclass(frozen=True)
class WeylElement:
    """Permutation ``perm[k-1] = w(k)`` of ``{1..l+1}``."""

    perm: tuple

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ZSchemeError("INVALID_PERMUTATION", f"{self.perm} is not a permutation")

    def __call__(self, k: int) -> int:
        return self.perm[k - 1]

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm, start=1):
            inv[p - 1] = i
        return WeylElement(tuple(inv))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(tuple(self(other(k)) for k in range(1, len(self.perm) + 1)))

    def length(self) -> int:
        p = self.perm
        return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])

    def __str__(self):
        return "[" + " ".join(map(str, self.perm)) + "]"


@dataclass(frozen=True)
class RootSystemA:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ZSchemeError("INVALID_RANK", "rank must be at least 1")

    cartan_type = "A"

    @cached_property
    def positive_roots(self) -> tuple:
        """Positive roots sorted by height, then by first simple root."""
        l = self.rank
        out = []
        for h in range(1, l + 1):
            for start in range(l - h + 1):
                out.append(tuple(1 if start <= k < start + h else 0 for k in range(l)))
        return tuple(out)

    @cached_property
    def negative_roots(self) -> tuple:
        return tuple(tuple(-c for c in r) for r in self.positive_roots)

    @cached_property
    def roots(self) -> frozenset:
        return frozenset(self.positive_roots + self.negative_roots)

    def simple_root(self, j: int) -> tuple:
        return tuple(1 if k == j - 1 else 0 for k in range(self.rank))

    @property
    def simple_roots(self) -> tuple:
        return tuple(self.simple_root(j) for j in range(1, self.rank + 1))

    def is_root(self, root) -> bool:
        return tuple(root) in self.roots

    def is_positive(self, root) -> bool:
        return tuple(root) in set(self.positive_roots)

    @staticmethod
    def height(root) -> int:
        return abs(sum(root))

    def to_pair(self, root) -> tuple:
        """``(i, j)`` with root = e_i - e_j."""
        root = tuple(root)
        if root not in self.roots:
            raise ZSchemeError("NOT_A_ROOT", f"{format_root(root)} is not a root of A{self.rank}")
        support = [k for k, c in enumerate(root) if c]
        lo, hi = support[0] + 1, support[-1] + 2
        return (lo, hi) if root[support[0]] > 0 else (hi, lo)

    def from_pair(self, i: int, j: int) -> tuple:
        lo, hi = min(i, j), max(i, j)
        sign = 1 if i < j else -1
        return tuple(sign if lo - 1 <= k < hi - 1 else 0 for k in range(self.rank))

    @cached_property
    def weyl_group(self) -> tuple:
        n = self.rank + 1
        return tuple(WeylElement(p) for p in itertools.permutations(range(1, n + 1)))

    def identity(self) -> WeylElement:
        return WeylElement(tuple(range(1, self.rank + 2)))

    def reflection(self, j: int) -> WeylElement:
        p = list(range(1, self.rank + 2))
        p[j - 1], p[j] = p[j], p[j - 1]
        return WeylElement(tuple(p))

    def longest_element(self) -> WeylElement:
        return WeylElement(tuple(range(self.rank + 1, 0, -1)))

    def act(self, w: WeylElement, root) -> tuple:
        i, j = self.to_pair(root)
        if len(w.perm) != self.rank + 1:
            raise ZSchemeError("DIMENSION_MISMATCH", f"{w} does not act on A{self.rank}")
        return self.from_pair(w(i), w(j))


def build_type_a(rank: int) -> RootSystemA:
    return RootSystemA(rank)


def act(w: WeylElement, root, rank: int | None = None) -> tuple:
    return RootSystemA(rank or len(w.perm) - 1).act(w, root)


# ---------------------------------------------------------------------------
# textual notation: "a1+a2", "-a1-a2"

_ROOT_TERM = re.compile(r"\s*([+-]?)\s*a(\d+)\s*")


def format_root(root) -> str:
    root = tuple(root)
    parts = []
    for k, c in enumerate(root, start=1):
        if c:
            parts.append(("-" if c < 0 else "+") + f"a{k}")
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def parse_root(text: str, rank: int) -> tuple:
    pos = 0
    coeffs = [0] * rank
    text = text.strip()
    if not text:
        raise ZSchemeError("SYNTAX_ERROR", "empty root", position=0)
    first = True
    while pos < len(text):
        m = _ROOT_TERM.match(text, pos)
        if m is None or (not first and not m.group(1)):
            raise ZSchemeError("SYNTAX_ERROR", f"cannot parse root {text!r}", position=pos)
        k = int(m.group(2))
        if not 1 <= k <= rank:
            raise ZSchemeError("NOT_A_ROOT", f"a{k} is not a simple root of A{rank}")
        coeffs[k - 1] += -1 if m.group(1) == "-" else 1
        pos = m.end()
        first = False
    root = tuple(coeffs)
    if root not in RootSystemA(rank).roots:
        raise ZSchemeError("NOT_A_ROOT", f"{text!r} is not a root of A{rank}")
    return root


# ---------------------------------------------------------------------------
# Hessenberg spaces


@dataclass(frozen=True)
class HessenbergSpace:
    """The set ``omega`` of negative roots whose root spaces lie in M."""

    rank: int
    omega: frozenset

    def __post_init__(self):
        object.__setattr__(self, "omega", frozenset(tuple(r) for r in self.omega))
        rs = RootSystemA(self.rank)
        bad = [r for r in self.omega if r not in set(rs.negative_roots)]
        if bad:
            raise ZSchemeError("NOT_A_NEGATIVE_ROOT", f"{[format_root(r) for r in bad]} not in the negative roots")

    @property
    def root_system(self) -> RootSystemA:
        return RootSystemA(self.rank)

    def sorted_omega(self) -> list:
        order = {r: k for k, r in enumerate(self.root_system.negative_roots)}
        return sorted(self.omega, key=order.__getitem__)

    def __str__(self):
        return "{" + ", ".join(format_root(r) for r in self.sorted_omega()) + "}"


def validate_hessenberg(h: HessenbergSpace):
    """Closure check: ``a in omega`` and ``a + a_j`` negative imply ``a + a_j in omega``.

    Returns ``(ok, violation)`` with ``violation = (root, simple index)`` or None.
    """
    rs = h.root_system
    neg = set(rs.negative_roots)
    for root in h.sorted_omega():
        for j in range(1, rs.rank + 1):
            s = tuple(a + b for a, b in zip(root, rs.simple_root(j)))
            if s in neg and s not in h.omega:
                return False, (root, j)
    return True, None


def require_valid(h: HessenbergSpace) -> None:
    ok, violation = validate_hessenberg(h)
    if not ok:
        root, j = violation
        raise ZSchemeError(
            "INVALID_HESSENBERG",
            f"{format_root(root)} + a{j} is a negative root missing from omega",
            root=format_root(root),
            simple=f"a{j}",
        )


def peterson_omega(rank: int) -> HessenbergSpace:
    """Negative simple roots; gives the Peterson variety."""
    rs = RootSystemA(rank)
    return HessenbergSpace(rank, frozenset(tuple(-c for c in a) for a in rs.simple_roots))


def omega_from_condition(rank: int) -> HessenbergSpace:
    """Literal reading ``alpha(h) > 2``: negative roots of height at least 2.

    Kept for experimentation; for rank >= 2 it is not closed.
    """
    rs = RootSystemA(rank)
    return HessenbergSpace(rank, frozenset(r for r in rs.negative_roots if rs.height(r) >= 2))


def full_omega(rank: int) -> HessenbergSpace:
    return HessenbergSpace(rank, frozenset(RootSystemA(rank).negative_roots))


def empty_omega(rank: int) -> HessenbergSpace:
    return HessenbergSpace(rank, frozenset())


def all_hessenberg_spaces(rank: int) -> list:
    """Every valid omega, by exhaustive enumeration of subsets."""
    neg = RootSystemA(rank).negative_roots
    out = []
    for mask in range(1 << len(neg)):
        h = HessenbergSpace(rank, frozenset(r for k, r in enumerate(neg) if mask >> k & 1))
        if validate_hessenberg(h)[0]:
            out.append(h)
    out.sort(key=lambda h: (len(h.omega), [format_root(r) for r in h.sorted_omega()]))
    return out


def hessenberg_fixed_points(h: HessenbergSpace) -> list:
    """Weyl elements w with ``w^-1(a_j)`` in omega or positive, for all simple a_j."""
    require_valid(h)
    rs = h.root_system
    pos = set(rs.positive_roots)
    out = []
    for w in rs.weyl_group:
        winv = w.inverse()
        if all(
            (img := rs.act(winv, a)) in pos or img in h.omega for a in rs.simple_roots
        ):
            out.append(w)
    return out


def parse_omega(text: str, rank: int, from_condition: bool = False) -> HessenbergSpace:
    """``"peterson"``, ``"full"``, ``"empty"`` or a comma list like ``"-a1,-a2"``."""
    word = text.strip().lower()
    if word == "peterson":
        return omega_from_condition(rank) if from_condition else peterson_omega(rank)
    if word == "full":
        return full_omega(rank)
    if word in ("empty", "none", ""):
        return empty_omega(rank)
    roots = [parse_root(chunk, rank) for chunk in text.split(",") if chunk.strip()]
    return HessenbergSpace(rank, frozenset(roots))
