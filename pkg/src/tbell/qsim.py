"""Grover search with an explicit oracle-output qubit and mid-circuit measurement.

Two engines share one interface:

* ``SubspaceState``: four amplitudes over ``{|alpha>, |s>} x {|0>, |1>}``,
  where ``|alpha>`` is the normalized uniform superposition of unmarked
  inputs. Exact for any ``n`` since the dynamics never leaves this span.
* ``FullStateVector``: all ``2**(n+1)`` amplitudes, for cross-checking.

Amplitudes are held as a ``(rows, 2)`` array: rows are input-register basis
states, columns the output bit. Flattened, index ``2*x + y`` is ``|x>|y>``.

The iteration is ``G = D . O . Z . O`` applied right to left: oracle,
sign flip on output ``|1>``, oracle again, then the diffusion ``2|psi><psi| - I``
on the input register. The output qubit starts (and after each full
iteration, ends) in ``|0>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SUBSPACE_MAX_N = 60
FULL_MAX_N = 12
BRANCH_CUTOFF = 1e-15
PRODUCT_TOL = 1e-10
# G = D O Z O: the uncompute call counts as a query too
ORACLE_CALLS_PER_ITERATION = 2

# script vocabulary -> state method
OPERATIONS = {
    "oracle": "oracle",
    "phase": "output_phase",
    "diffusion": "diffusion",
    "iteration": "iteration",
    "measure": "measure",
}


class EntangledOutputError(ValueError):
    """Diffusion was requested while the output qubit is entangled with the input."""


@dataclass(frozen=True)
class GroverParams:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    @property
    def half_theta(self) -> float:
        # sin(theta/2) = 2**(-n/2)
        return math.asin(2.0 ** (-self.n / 2))

    @property
    def theta(self) -> float:
        return 2.0 * self.half_theta

    @property
    def sin2_theta(self) -> float:
        """``sin^2(theta)`` in closed form, free of trig rounding."""
        p = 2.0**-self.n
        return 4.0 * p * (1.0 - p)


def _normalize_phase(amps: np.ndarray) -> np.ndarray:
    flat = amps.ravel()
    lead = np.flatnonzero(np.abs(flat) > 1e-12)
    if lead.size:
        a = flat[lead[0]]
        amps = amps * (abs(a) / a)
    return amps


class _RegisterState:
    """Shared gate algebra for both engines; subclasses fix the input basis."""

    __slots__ = ("amps",)

    def __init__(self, amps):
        a = np.array(amps, dtype=complex)
        a.setflags(write=False)
        self.amps = a

    # subclass hooks
    _marked_row: int

    def _input_reference(self) -> np.ndarray:
        raise NotImplementedError

    def _embed_input(self, c_alpha: complex, c_s: complex) -> np.ndarray:
        raise NotImplementedError

    def _replace(self, amps) -> "_RegisterState":
        raise NotImplementedError

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    @property
    def success_probability(self) -> float:
        """Probability that measuring the input register yields the marked item."""
        return float(np.sum(np.abs(self.amps[self._marked_row]) ** 2))

    @property
    def output_one_weight(self) -> float:
        return float(np.sum(np.abs(self.amps[:, 1]) ** 2))

    def is_product(self) -> bool:
        sv = np.linalg.svd(self.amps, compute_uv=False)
        return bool(sv[-1] <= PRODUCT_TOL)

    def oracle(self):
        a = self.amps.copy()
        r = self._marked_row
        a[r, 0], a[r, 1] = self.amps[r, 1], self.amps[r, 0]
        return self._replace(a)

    def output_phase(self):
        a = self.amps.copy()
        a[:, 1] *= -1
        return self._replace(a)

    def diffusion(self):
        if not self.is_product():
            raise EntangledOutputError(
                "diffusion acts on the input register only; output qubit is entangled"
            )
        return self._replace(_reflect_about(self._input_reference(), self.amps))

    def iteration(self):
        return self.oracle().output_phase().oracle().diffusion()

    def measure(self) -> list["MeasurementBranch"]:
        branches = []
        for bit in (0, 1):
            column = self.amps[:, bit]
            prob = float(np.sum(np.abs(column) ** 2))
            if prob < BRANCH_CUTOFF:
                continue
            post = np.zeros_like(self.amps)
            post[:, bit] = column / math.sqrt(prob)
            branches.append(MeasurementBranch(bit, prob, self._replace(_normalize_phase(post))))
        return branches

    def overlap_with_input(self, phi: float) -> float:
        """``|<target|state>|`` for ``(cos phi |alpha> + sin phi |s>) |0>``."""
        target = self._embed_input(math.cos(phi), math.sin(phi))
        return float(abs(np.vdot(target, self.amps[:, 0])))

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.amps.shape == other.amps.shape
            and bool(np.allclose(self.amps, other.amps, rtol=0, atol=1e-12))
            and self._key() == other._key()
        )

    def _key(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self._key()}, amps={self.amps.ravel()!r})"


def _reflect_about(reference: np.ndarray, amps: np.ndarray) -> np.ndarray:
    """Apply ``2|ref><ref| - I`` to each output column of ``amps``."""
    projection = np.outer(reference, reference.conj() @ amps)
    return 2.0 * projection - amps


class SubspaceState(_RegisterState):
    __slots__ = ("params",)
    _marked_row = 1

    def __init__(self, params: GroverParams, amps):
        super().__init__(amps)
        if self.amps.shape != (2, 2):
            raise ValueError(f"subspace amplitudes must have shape (2, 2), got {self.amps.shape}")
        self.params = params

    @property
    def n(self) -> int:
        return self.params.n

    def _input_reference(self):
        h = self.params.half_theta
        return np.array([math.cos(h), math.sin(h)], dtype=complex)

    def _embed_input(self, c_alpha, c_s):
        return np.array([c_alpha, c_s], dtype=complex)

    def _replace(self, amps):
        return SubspaceState(self.params, amps)

    def _key(self):
        return (self.params.n,)


class FullStateVector(_RegisterState):
    __slots__ = ("n", "s")

    def __init__(self, n: int, s: int, amps):
        super().__init__(amps)
        if self.amps.shape != (2**n, 2):
            raise ValueError(f"expected amplitudes of shape {(2**n, 2)}, got {self.amps.shape}")
        if not 0 <= s < 2**n:
            raise ValueError(f"marked item {s} outside [0, {2**n - 1}]")
        self.n = n
        self.s = s

    @property
    def _marked_row(self) -> int:
        return self.s

    @property
    def vector(self) -> np.ndarray:
        """Flat amplitudes in ``|x>|y>`` order."""
        return self.amps.ravel()

    def _input_reference(self):
        size = 2**self.n
        return np.full(size, 1.0 / math.sqrt(size), dtype=complex)

    def _embed_input(self, c_alpha, c_s):
        size = 2**self.n
        v = np.full(size, c_alpha / math.sqrt(size - 1), dtype=complex)
        v[self.s] = c_s
        return v

    def _replace(self, amps):
        return FullStateVector(self.n, self.s, amps)

    def _key(self):
        return (self.n, self.s)


State = SubspaceState | FullStateVector


@dataclass(frozen=True)
class MeasurementBranch:
    outcome: int
    probability: float
    post_state: State


def prepare_initial(n: int, engine: str = "subspace", s: int = 0) -> State:
    """Uniform superposition on the input register, output qubit ``|0>``."""
    if engine == "subspace":
        if not 1 <= n <= SUBSPACE_MAX_N:
            raise ValueError(f"subspace engine supports 1 <= n <= {SUBSPACE_MAX_N}, got {n}")
        params = GroverParams(n)
        h = params.half_theta
        return SubspaceState(params, [[math.cos(h), 0.0], [math.sin(h), 0.0]])
    if engine == "full":
        if not 1 <= n <= FULL_MAX_N:
            raise ValueError(f"full engine supports 1 <= n <= {FULL_MAX_N}, got {n}")
        size = 2**n
        amps = np.zeros((size, 2), dtype=complex)
        amps[:, 0] = 1.0 / math.sqrt(size)
        return FullStateVector(n, s, amps)
    raise ValueError(f"unknown engine {engine!r}")


def apply_oracle(state: State) -> State:
    return state.oracle()


def apply_output_phase(state: State) -> State:
    return state.output_phase()


def apply_diffusion(state: State) -> State:
    return state.diffusion()


def grover_iteration(state: State) -> State:
    return state.iteration()


def measure_output(state: State) -> list[MeasurementBranch]:
    return state.measure()


@dataclass(frozen=True)
class UnmeasuredRun:
    final_state: State
    success_probability: float
    oracle_calls: int


def run_unmeasured(n: int, L: int, engine: str = "subspace", s: int = 0) -> UnmeasuredRun:
    if L < 0:
        raise ValueError(f"iteration count must be >= 0, got {L}")
    state = prepare_initial(n, engine, s)
    for _ in range(L):
        state = state.iteration()
    return UnmeasuredRun(state, state.success_probability, oracle_call_count(L))


def oracle_call_count(iterations: int) -> int:
    """Raw oracle invocations in ``iterations`` applications of G."""
    return ORACLE_CALLS_PER_ITERATION * iterations


def grover_success_probability(n: int, L: int) -> float:
    """Closed form ``sin^2((2L+1) theta/2)`` for ``L`` unmeasured iterations."""
    return math.sin((2 * L + 1) * GroverParams(n).half_theta) ** 2


def pair_script(k: int) -> list[str]:
    """Operations that measure the output after the first oracle call of
    iterations ``k`` and ``k+1``. For ``k == 0`` only ``A_1`` is measured,
    ``A_0`` being the constant initial output bit."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k == 0:
        return ["oracle", "measure"]
    return ["iteration"] * (k - 1) + [
        "oracle", "measure", "phase", "oracle", "diffusion",
        "oracle", "measure",
    ]


def outcome_distribution(
    state: State, script: Iterable[str], halt_on_hit: bool = False
) -> dict[tuple[int, ...], float]:
    """Enumerate every measurement branch of ``script`` from ``state``.

    Returns the probability of each tuple of measurement outcomes. With
    ``halt_on_hit``, the first outcome 1 stops the computation: later
    measurements read the idle output bit, i.e. 0 with certainty.
    """
    script = list(script)
    unknown = set(script) - set(OPERATIONS)
    if unknown:
        raise ValueError(f"unknown script operations: {sorted(unknown)}")
    result: dict[tuple[int, ...], float] = {}
    # depth-first over (state, next op index, outcomes, weight, halted)
    stack = [(state, 0, (), 1.0, False)]
    while stack:
        st, i, outcomes, weight, halted = stack.pop()
        while i < len(script):
            op = script[i]
            i += 1
            if op == "measure":
                if halted:
                    outcomes = outcomes + (0,)
                    continue
                branches = st.measure()
                for br in branches[1:]:
                    stack.append((
                        br.post_state, i, outcomes + (br.outcome,),
                        weight * br.probability, halt_on_hit and br.outcome == 1,
                    ))
                br = branches[0]
                st, outcomes = br.post_state, outcomes + (br.outcome,)
                weight *= br.probability
                halted = halt_on_hit and br.outcome == 1
            elif not halted:
                st = getattr(st, OPERATIONS[op])()
        result[outcomes] = result.get(outcomes, 0.0) + weight
    return result


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(key, 0.0) - q.get(key, 0.0)) for key in keys)


def engine_pair_check(
    n: int, script: Sequence[str], s: int = 0, halt_on_hit: bool = False
) -> float:
    """Total-variation distance between the two engines' outcome distributions."""
    if n > FULL_MAX_N:
        raise ValueError(f"engine cross-check needs n <= {FULL_MAX_N}, got {n}")
    sub = outcome_distribution(prepare_initial(n, "subspace"), script, halt_on_hit)
    full = outcome_distribution(prepare_initial(n, "full", s), script, halt_on_hit)
    return total_variation(sub, full)
