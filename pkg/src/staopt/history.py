"""Historical-information set: D+1 tagged solutions that double as an NM simplex."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import EvalCounter, ObjectiveFunction, Solution
from .simplex import NmCoefficients, Simplex, init_simplex, nm_iterate


class Tag(Enum):
    OLD = "old"
    CURRENT = "current"


@dataclass(frozen=True)
class HistoryEntry:
    solution: Solution
    tag: Tag


class HistorySet:
    def __init__(self, entries):
        entries = list(entries)
        Simplex([e.solution for e in entries])  # shape check
        self.entries = entries

    @classmethod
    def from_simplex(cls, s: Simplex, tag: Tag = Tag.OLD) -> "HistorySet":
        return cls(HistoryEntry(v, tag) for v in s.vertices)

    @classmethod
    def initial(cls, best: Solution, f: ObjectiveFunction, counter: EvalCounter) -> "HistorySet":
        """Start simplex around ``best``, every entry tagged old."""
        return cls.from_simplex(init_simplex(best, f, counter))

    def __len__(self):
        return len(self.entries)

    @property
    def solutions(self) -> list:
        return [e.solution for e in self.entries]

    @property
    def fitnesses(self) -> list:
        return [e.solution.fitness for e in self.entries]

    @property
    def best(self) -> Solution:
        return min(self.solutions, key=lambda s: s.fitness)

    def n_current(self) -> int:
        return sum(e.tag is Tag.CURRENT for e in self.entries)

    def as_simplex(self) -> Simplex:
        return Simplex(self.solutions)


def collect(h: HistorySet, current: Solution) -> HistorySet:
    """Unconditionally swap the worst entry (last one on ties) for ``current``."""
    fit = h.fitnesses
    worst = max(fit)
    i = max(k for k, v in enumerate(fit) if v == worst)
    entries = list(h.entries)
    entries[i] = HistoryEntry(current, Tag.CURRENT)
    return HistorySet(entries)


def update_rate(h: HistorySet) -> float:
    return h.n_current() / len(h)


def utilize(
    h: HistorySet, f: ObjectiveFunction, coeffs: NmCoefficients, counter: EvalCounter
) -> tuple[HistorySet, Solution]:
    """Run D+1 Nelder-Mead passes on ``h`` and return the new set (all old) and its best."""
    s = h.as_simplex()
    for _ in range(s.dim + 1):
        s = nm_iterate(s, f, coeffs, counter)
    out = HistorySet.from_simplex(s)
    return out, out.best
