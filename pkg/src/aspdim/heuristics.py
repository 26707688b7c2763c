"""Heuristic diminution builders: the three oracle modes.

f1 keeps the constants a seeded partial solution touches (plus all
value constants), f2 keeps a contiguous value window, f3 keeps, for
each element of the planted full guess, the constants within a bounded
neighborhood; here the neighborhood of a node's guessed successor is
expressed in ring-offset space, which is what makes it a constant set.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .diminution import Diminution
from .errors import HeuristicError
from .generators import COLORS, Instance, InstanceSpec, make_instance
from .syntax import herbrand_universe

MODES = ("f1_partial", "f2_value_subset", "f3_neighborhood")
_ALIASES = {"f1": "f1_partial", "f2": "f2_value_subset", "f3": "f3_neighborhood"}

_COMPATIBLE = {
    "coloring": ("f1_partial", "f2_value_subset"),
    "hamiltonian": ("f3_neighborhood",),
    "stable_marriage": ("f2_value_subset",),
}


@dataclass(frozen=True)
class HeuristicSpec:
    mode: str  # one of MODES, f1/f2/f3 accepted as aliases
    param: float

    def __post_init__(self):
        object.__setattr__(self, "mode", _ALIASES.get(self.mode, self.mode))
        if self.mode not in MODES:
            raise HeuristicError(f"unknown heuristic mode {self.mode!r}")

    @property
    def short(self) -> str:
        return self.mode.split("_")[0]


def _ring_distance(a: int, b: int, n: int) -> int:
    return min((a - b) % n, (b - a) % n)


def build_diminution(program, inst, heuristic: HeuristicSpec) -> Diminution:
    """Derive the constant subset for an instance; always a subset of HU(P)."""
    if isinstance(inst, InstanceSpec):
        inst = make_instance(inst)
    if not isinstance(inst, Instance):
        raise TypeError("inst must be an Instance or InstanceSpec")
    spec = inst.spec
    if heuristic.mode not in _COMPATIBLE[spec.family]:
        raise HeuristicError(
            f"heuristic {heuristic.mode} is incompatible with family {spec.family}"
        )
    n = spec.n
    if spec.family == "coloring":
        if heuristic.mode == "f1_partial":
            keep = max(1, min(n, math.ceil(heuristic.param * n)))
            rng = random.Random(spec.seed)
            kept = sorted(rng.sample(range(1, n + 1), keep))
            constants = {str(v) for v in kept} | set(COLORS)
        else:
            window = max(1, min(len(COLORS), int(heuristic.param)))
            constants = {str(v) for v in range(1, n + 1)} | set(COLORS[:window])
    elif spec.family == "stable_marriage":
        window = max(1, min(n, int(heuristic.param)))
        constants = (
            {f"m{i}" for i in range(1, n + 1)}
            | {f"w{i}" for i in range(1, n + 1)}
            | {str(r) for r in range(1, window + 1)}
        )
    else:  # hamiltonian, f3: offsets within ring distance k of the planted successor
        k = max(0, int(heuristic.param))
        offsets = {f"o{j}" for j in range(1, n) if _ring_distance(j, 1, n) <= k}
        constants = {str(i) for i in range(n)} | offsets
    universe = herbrand_universe(inst.program)
    constants &= universe
    return Diminution(frozenset(constants), inst.interest_predicates)
