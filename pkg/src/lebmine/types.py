"""Finite types over the ground type of natural numbers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Ground:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class Arrow:
    """The type ``result(argument)``: functions from ``argument`` to ``result``."""

    argument: "FiniteType"
    result: "FiniteType"

    def __str__(self) -> str:
        return f"({self.argument}->{self.result})"


FiniteType = Union[Ground, Arrow]

GROUND = Ground()


def degree(t: FiniteType) -> int:
    if isinstance(t, Ground):
        return 0
    return max(degree(t.result), degree(t.argument) + 1)


def pure(n: int) -> FiniteType:
    t: FiniteType = GROUND
    for _ in range(n):
        t = Arrow(t, GROUND)
    return t


def arrows(args, result: FiniteType) -> FiniteType:
    """Curried type ``args[0] -> args[1] -> ... -> result``."""
    t = result
    for a in reversed(list(args)):
        t = Arrow(a, t)
    return t


def uncurry(t: FiniteType) -> tuple[list[FiniteType], FiniteType]:
    args = []
    while isinstance(t, Arrow):
        args.append(t.argument)
        t = t.result
    return args, t


TYPE1 = pure(1)
TYPE2 = pure(2)
# measure and selector constants: type 1(2)
TYPE12 = Arrow(TYPE2, TYPE1)
