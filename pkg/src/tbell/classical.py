"""Deterministic classical query schedules for the marked-item search.

A schedule fixes the oracle inputs ``x_1 .. x_L`` in advance. Observable
``A_i`` (``i >= 1``) is the oracle output for ``x_i``; ``A_0`` is the
constant 0 held by the output bit before any query. All distributions
below are exact, obtained by enumerating every marked item ``s`` under a
uniform prior.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .entropy import conditional_entropy, shannon_entropy

MAX_N = 20


class ScheduleFormatError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


def _check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= MAX_N:
        raise ValueError(f"n must be an integer in [1, {MAX_N}], got {n!r}")
    return int(n)


@dataclass(frozen=True)
class OracleSpec:
    n: int
    s: int

    def __post_init__(self):
        _check_n(self.n)
        if not 0 <= self.s < 2**self.n:
            raise ValueError(f"marked item s={self.s} outside [0, {2**self.n - 1}]")


@dataclass(frozen=True)
class QuerySchedule:
    n: int
    inputs: tuple[int, ...]

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "inputs", tuple(int(x) for x in self.inputs))
        if not self.inputs:
            raise ValueError("schedule needs at least one query")
        bad = [x for x in self.inputs if not 0 <= x < 2**self.n]
        if bad:
            raise ValueError(f"schedule input {bad[0]} outside [0, {2**self.n - 1}]")

    @property
    def L(self) -> int:
        return len(self.inputs)

    @property
    def is_covering(self) -> bool:
        return len(set(self.inputs)) == 2**self.n

    @property
    def has_distinct_inputs(self) -> bool:
        return len(set(self.inputs)) == len(self.inputs)


def oracle_eval(spec: OracleSpec, x: int) -> int:
    if not 0 <= x < 2**spec.n:
        raise ValueError(f"query {x} outside [0, {2**spec.n - 1}]")
    return int(x == spec.s)


def sequential_schedule(n: int) -> QuerySchedule:
    """Query 0, 1, ..., 2**n - 1 in order."""
    n = _check_n(n)
    return QuerySchedule(n, tuple(range(2**n)))


def _observable(schedule: QuerySchedule, k: int, items: np.ndarray) -> np.ndarray:
    # value of A_k for every marked item at once
    if k == 0:
        return np.zeros(items.shape, dtype=np.int64)
    return (items == schedule.inputs[k - 1]).astype(np.int64)


def classical_pair_joint(schedule: QuerySchedule, k: int) -> np.ndarray:
    """Exact 2x2 joint of ``(A_k, A_k+1)`` under a uniform marked item."""
    if not 0 <= k <= schedule.L - 1:
        raise IndexError(f"pair index k={k} outside [0, {schedule.L - 1}]")
    items = np.arange(2**schedule.n)
    first = _observable(schedule, k, items)
    second = _observable(schedule, k + 1, items)
    counts = np.bincount(2 * first + second, minlength=4)
    return counts.reshape(2, 2) / items.size


def classical_per_step(schedule: QuerySchedule) -> list[float]:
    return [conditional_entropy(classical_pair_joint(schedule, k)) for k in range(schedule.L)]


def classical_rhs_sum(schedule: QuerySchedule) -> float:
    return float(sum(classical_per_step(schedule)))


def classical_full_joint_entropy(schedule: QuerySchedule) -> float:
    """Joint entropy of ``(A_0, ..., A_L)``.

    Works on the sparse distribution of output tuples (one per marked item)
    rather than a ``2**(L+1)`` table. The result equals ``n`` only for
    covering schedules; check ``schedule.is_covering`` before treating it as
    the information bound.
    """
    # item s produces the output tuple with ones exactly where x_i == s, so
    # items sharing their set of query positions share an outcome
    positions: dict[int, list[int]] = {}
    for i, x in enumerate(schedule.inputs):
        positions.setdefault(x, []).append(i)
    tally = Counter(tuple(positions.get(s, ())) for s in range(2**schedule.n))
    weights = np.fromiter(tally.values(), dtype=float) / 2**schedule.n
    return shannon_entropy(weights)


def read_schedule(path) -> QuerySchedule:
    """Parse a schedule file: header ``n=<int>`` then one input per line.

    Blank lines and ``#`` comments are ignored.
    """
    n = None
    inputs: list[int] = []
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            key, sep, value = line.partition("=")
            if not sep or key.strip() != "n":
                raise ScheduleFormatError("expected header 'n=<int>'", lineno)
            try:
                n = _check_n(int(value.strip()))
            except ValueError as exc:
                raise ScheduleFormatError(str(exc), lineno) from None
            continue
        try:
            x = int(line)
        except ValueError:
            raise ScheduleFormatError(f"not an integer: {line!r}", lineno) from None
        if not 0 <= x < 2**n:
            raise ScheduleFormatError(f"input {x} outside [0, {2**n - 1}]", lineno)
        inputs.append(x)
    if n is None:
        raise ScheduleFormatError("missing header 'n=<int>'")
    if not inputs:
        raise ScheduleFormatError("schedule has no inputs")
    return QuerySchedule(n, tuple(inputs))


def write_schedule(schedule: QuerySchedule, path) -> None:
    lines = [f"n={schedule.n}", *map(str, schedule.inputs)]
    Path(path).write_text("\n".join(lines) + "\n")
