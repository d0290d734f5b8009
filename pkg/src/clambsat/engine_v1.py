"""Version-1 circuit engine.

Every cell updates in parallel each tick:

    inter_i      = OR over clauses holding x_i  of NOR(other literals)
    inter_not_i  = AND over clauses holding ~x_i of OR(other literals)
    contra_i'    = inter_i AND NOT inter_not_i            (registered)
    contra_mrg_i = OR of contra_j over clause-sharing neighbours j
    flip_i       = SG3(contra_mrg_i)                      (forces 0 w.p. p3)
    x_i'         = maj(SG1(inter_i), SG2(inter_not_i), x_i XOR flip_i)

SG1 forces 1 with probability p1, SG2 forces 0 with probability p2.

The feedback input is ``x XOR flip``. Printed as an inclusive OR, the update
could never take x_i from 1 to 0 through a contradiction flip, yet such a
flip (maj(0, 1, NOT x_i) = NOT x_i) is exactly how the circuit escapes
contradictions; XOR is the reading that produces it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _sim
from ._sim import RunResult, maj
from .cnf import CnfFormula, evaluate
from .stochastic import BatchSource, BernoulliSource, SeededSource
from .wiring import WiringTable, synthesize

DEFAULT_P3 = 0.9
DEFAULT_MAX_ITERS = 1_000_000


@dataclass(frozen=True)
class V1Params:
    p1: float
    p2: float
    p3: float = DEFAULT_P3
    max_iters: int = DEFAULT_MAX_ITERS

    def __post_init__(self):
        for name in ("p1", "p2", "p3"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} is not a probability")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")

    @classmethod
    def defaults(cls, num_vars: int, **overrides) -> "V1Params":
        """p1 = p2 = 1/(2N), p3 = 0.9; any field may be overridden."""
        base = 1.0 / (2 * num_vars) if num_vars else 0.0
        kw = dict(p1=base, p2=base, p3=DEFAULT_P3, max_iters=DEFAULT_MAX_ITERS)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


@dataclass
class V1State:
    x: np.ndarray
    contra: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, n: int) -> "V1State":
        return cls(np.zeros(n, dtype=bool), np.zeros(n, dtype=bool), 0)


@dataclass(frozen=True)
class StepSignals:
    inter: np.ndarray
    inter_not: np.ndarray
    contra_mrg: np.ndarray
    flip: np.ndarray
    fb: np.ndarray


@dataclass(frozen=True)
class V1Kernel:
    params: V1Params
    reg_names: tuple[str, ...] = field(default=("contra",))

    def gate_probs(self, n: int) -> np.ndarray:
        p = self.params
        return np.tile([p.p1, p.p2, p.p3], (n, 1))

    def advance(self, x, regs, inter, inter_not, mrg, fires):
        a = inter | fires[..., 0]
        b = inter_not & ~fires[..., 1]
        flip = mrg & ~fires[..., 2]
        new_x = maj(a, b, x ^ flip)
        return new_x, {"contra": _sim.contra_next(inter, inter_not)}, flip


def compute_inter(w: WiringTable, x) -> tuple[np.ndarray, np.ndarray]:
    inter, inter_not = _sim.compute_inter(w, x)
    if np.ndim(x) == 1:
        return inter[0], inter_not[0]
    return inter, inter_not


def compute_contra_next(inter, inter_not) -> np.ndarray:
    inter, inter_not = np.asarray(inter, dtype=bool), np.asarray(inter_not, dtype=bool)
    if inter.shape != inter_not.shape:
        raise ValueError("inter and inter_not differ in length")
    return _sim.contra_next(inter, inter_not)


def merge_contra(w: WiringTable, contra) -> np.ndarray:
    mrg = _sim.merge_contra(w, contra)
    return mrg[0] if np.ndim(contra) == 1 else mrg


def step(state: V1State, w: WiringTable, params: V1Params, src: BernoulliSource,
         with_signals: bool = False):
    """Advance one tick, drawing SG1, SG2, SG3 for each cell in ascending order."""
    n = w.num_vars
    x = np.asarray(state.x, dtype=bool)
    contra = np.asarray(state.contra, dtype=bool)
    if x.shape != (n,) or contra.shape != (n,):
        raise ValueError("state vectors do not match the wiring")
    kernel = V1Kernel(params)
    inter, inter_not = _sim.compute_inter(w, x)
    mrg = _sim.merge_contra(w, contra)
    fires = src.draw(kernel.gate_probs(n))[None]
    new_x, regs, flip = kernel.advance(x[None], {"contra": contra[None]}, inter, inter_not, mrg, fires)
    new_state = V1State(new_x[0], regs["contra"][0], state.t + 1)
    if not with_signals:
        return new_state
    sig = StepSignals(inter[0], inter_not[0], mrg[0], flip[0], x ^ flip[0])
    return new_state, sig


def _validator(f: CnfFormula):
    return lambda bits: evaluate(f, [int(b) for b in bits]).satisfied


def run(f: CnfFormula, params: V1Params | None = None, src: BernoulliSource | None = None,
        init="zeros", *, wiring: WiringTable | None = None, stop_at_first: bool = True,
        trace: bool = False) -> RunResult:
    """Simulate until x(t) first satisfies ``f`` (or ``params.max_iters``)."""
    params = params or V1Params.defaults(f.num_vars)
    src = src if src is not None else SeededSource(0, 0)
    w = wiring if wiring is not None else synthesize(f)
    return _sim.run_single(V1Kernel(params), w, src, init, params.max_iters,
                           stop_at_first, trace, _validator(f))


def run_batch(f: CnfFormula, params: V1Params, sources: BatchSource, init="zeros", *,
              wiring: WiringTable | None = None) -> list[RunResult]:
    w = wiring if wiring is not None else synthesize(f)
    return _sim.run_lanes(V1Kernel(params), w, sources, init, params.max_iters,
                          validate=_validator(f))
