"""Bound functions, constants profiles and bound receipts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Constants:
    """Numeric thresholds used by the constructions.

    The "paper" profile holds the values the bounds are proved for. The
    "small" profile shrinks the many-ears thresholds so every recursion
    branch can be reached on desk-sized graphs; results under it are
    labelled and never checked against the proved bounds.
    """

    name: str = "paper"
    many_ears: int = 200      # x-ears per guaranteed packing
    many_desc: int = 13       # descendants threshold for E*
    big_desc: int = 78        # 78 * ell
    immediate: int = 6        # 6 * ell immediate descendants
    side: int = 3             # 3 * ell side-by-side ears
    nest_desc: int = 7        # descendants forcing one K4-subdivision

    def to_json(self) -> dict[str, Any]:
        return dict(self.__dict__)


PAPER = Constants()
SMALL = Constants(name="small", many_ears=6)

PROFILES = {"paper": PAPER, "small": SMALL}


def profile(name: str | Constants) -> Constants:
    if isinstance(name, Constants):
        return name
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown constants profile {name!r}") from None


def f_star(lam: int, k: int) -> int:
    if lam >= 2:
        return (lam - 2) * 2000 * k**3 + 1000 * k**3
    return 6 * k**2


def f_bound(lam: int, k: int) -> int:
    return f_star(lam, k) + 250 * k**3


@dataclass(frozen=True)
class BoundTable:
    """Every per-construction bound, as functions of k (and lambda)."""

    k: int

    def simple(self) -> int:
        return self.k - 1

    def star(self) -> int:
        return self.k - 1

    def type1(self) -> int:
        return 6 * self.k**2

    def type2_4(self, lam: int) -> int:
        return f_star(lam, self.k)

    def type5(self, lam: int) -> int:
        return f_bound(lam, self.k)

    def pseudo(self) -> int:
        return 2 * self.k

    def mader(self) -> int:
        return 2 * self.k - 2

    def menger(self) -> int:
        return self.k - 1

    def fewess(self) -> int:
        return 33 * self.k**2

    def inessential_left(self) -> int:
        return 5 * self.k**2

    def all_fa(self) -> int:
        return 100 * self.k**3

    def remaining_blocks(self) -> int:
        return 15 * self.k**3

    def cycles(self) -> int:
        return self.k + 5

    def baseblocks(self) -> int:
        return 3 * self.k

    def few_ears(self, lam: int) -> int:
        # hit-or-miss set for G - x: f(lambda, k) covers every type
        return f_bound(lam, self.k)

    def single_apex(self, lam_cap: int) -> int:
        """Cover bound once lambda < lam_cap (200k with the default constants)."""
        return f_bound(max(lam_cap - 1, 0), self.k)

    def blocks(self, single: int) -> int:
        """100k^3 for the F_A sets plus 15k^3 single-apex covers."""
        return self.all_fa() + self.remaining_blocks() * single


@dataclass
class Receipt:
    """Node of the bound-receipt tree: which lemma produced a set, the bound
    it is held to, and the size it actually has."""

    lemma: str
    bound: int | None
    size: int
    params: dict[str, Any] = field(default_factory=dict)
    children: list[Receipt] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bound is None or self.size <= self.bound

    def violations(self) -> list[Receipt]:
        out = [] if self.ok else [self]
        for c in self.children:
            out += c.violations()
        return out

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_json(self) -> dict[str, Any]:
        return {
            "lemma": self.lemma,
            "bound": self.bound,
            "size": self.size,
            "params": self.params,
            "children": [c.to_json() for c in self.children],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> Receipt:
        return cls(data["lemma"], data["bound"], data["size"], dict(data.get("params", {})),
                   [cls.from_json(c) for c in data.get("children", [])])
