"""Version-2 circuit engine: careful flips through an attempt/judge pipeline.

inter, inter_not, contra and contra_mrg are computed as in version 1; only
the flip signal differs. A cell may attempt a flip when its majority gate
follows the feedback input, i.e. it is free (inter=0, inter_not=1) or in
contradiction (inter=1, inter_not=0). One tick after an attempt the cell is
locked out (atm_mrg), and one tick after that (judge) the flip is undone if
a neighbour still reports a contradiction.

    open_i        = inter_i XOR inter_not_i
    busy_i        = atm_mrg_i OR judge_i
    atm_contra_i  = SG3(open_i AND contra_mrg_i AND NOT busy_i)
    atm_i         = SG4(open_i AND NOT contra_mrg_i AND NOT busy_i)
    restore_i     = SG5(judge_i AND contra_mrg_i)
    flip_i        = atm_i OR atm_contra_i OR restore_i
    x_i'          = maj(inter_i, inter_not_i, x_i XOR flip_i)
    atm_mrg_i'    = atm_i OR atm_contra_i
    judge_i'      = atm_mrg_i

All three gates force 0 with their probability, so an attempt goes through
with probability 1 - p3 (or 1 - p4) and a failed flip is undone with
probability 1 - p5. This gate-level layout is a reconstruction from the
behavioural description of the pipeline, not a transcription of a netlist.

Restricting attempts to free cells alone deadlocks: a cell in contradiction
then never moves, and random 3-SAT runs stall with a handful of violated
clauses. ``attempt_on="free"`` keeps that variant for experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _sim
from ._sim import RunResult, maj
from .cnf import CnfFormula
from .engine_v1 import DEFAULT_MAX_ITERS, _validator
from .stochastic import BatchSource, BernoulliSource, SeededSource
from .wiring import WiringTable, synthesize

DEFAULT_P3 = 0.95
DEFAULT_P4 = 0.95
DEFAULT_P5 = 0.2
ATTEMPT_MODES = ("open", "free")


@dataclass(frozen=True)
class V2Params:
    p3: float = DEFAULT_P3
    p4: float = DEFAULT_P4
    p5: float = DEFAULT_P5
    max_iters: int = DEFAULT_MAX_ITERS

    def __post_init__(self):
        for name in ("p3", "p4", "p5"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} is not a probability")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")

    @classmethod
    def defaults(cls, num_vars: int = 0, **overrides) -> "V2Params":
        return cls(**{k: v for k, v in overrides.items() if v is not None})


@dataclass
class V2State:
    x: np.ndarray
    contra: np.ndarray
    atm_mrg: np.ndarray
    judge: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, n: int) -> "V2State":
        return cls(*(np.zeros(n, dtype=bool) for _ in range(4)), 0)


@dataclass(frozen=True)
class V2Signals:
    inter: np.ndarray
    inter_not: np.ndarray
    contra_mrg: np.ndarray
    atm: np.ndarray
    atm_contra: np.ndarray
    restore: np.ndarray
    flip: np.ndarray


@dataclass(frozen=True)
class V2Kernel:
    params: V2Params
    attempt_on: str = "open"
    reg_names: tuple[str, ...] = field(default=("contra", "atm_mrg", "judge"))

    def __post_init__(self):
        if self.attempt_on not in ATTEMPT_MODES:
            raise ValueError(f"attempt_on must be one of {ATTEMPT_MODES}")

    def gate_probs(self, n: int) -> np.ndarray:
        p = self.params
        return np.tile([p.p3, p.p4, p.p5], (n, 1))

    def signals(self, x, regs, inter, inter_not, mrg, fires):
        if self.attempt_on == "open":
            eligible = inter ^ inter_not
        else:
            eligible = ~inter & inter_not
        ready = eligible & ~(regs["atm_mrg"] | regs["judge"])
        atm_contra = ready & mrg & ~fires[..., 0]
        atm = ready & ~mrg & ~fires[..., 1]
        restore = regs["judge"] & mrg & ~fires[..., 2]
        return atm, atm_contra, restore

    def advance(self, x, regs, inter, inter_not, mrg, fires):
        atm, atm_contra, restore = self.signals(x, regs, inter, inter_not, mrg, fires)
        flip = atm | atm_contra | restore
        new_x = maj(inter, inter_not, x ^ flip)
        new_regs = {
            "contra": _sim.contra_next(inter, inter_not),
            "atm_mrg": atm | atm_contra,
            "judge": regs["atm_mrg"],
        }
        return new_x, new_regs, flip


def step_v2(state: V2State, w: WiringTable, params: V2Params, src: BernoulliSource,
            with_signals: bool = False, attempt_on: str = "open"):
    """Advance one tick, drawing SG3, SG4, SG5 for each cell in ascending order."""
    n = w.num_vars
    vecs = [np.asarray(v, dtype=bool) for v in (state.x, state.contra, state.atm_mrg, state.judge)]
    if any(v.shape != (n,) for v in vecs):
        raise ValueError("state vectors do not match the wiring")
    x, contra, atm_mrg, judge = (v[None] for v in vecs)
    regs = {"contra": contra, "atm_mrg": atm_mrg, "judge": judge}
    kernel = V2Kernel(params, attempt_on)
    inter, inter_not = _sim.compute_inter(w, x)
    mrg = _sim.merge_contra(w, contra)
    fires = src.draw(kernel.gate_probs(n))[None]
    new_x, new_regs, flip = kernel.advance(x, regs, inter, inter_not, mrg, fires)
    new_state = V2State(new_x[0], new_regs["contra"][0], new_regs["atm_mrg"][0],
                        new_regs["judge"][0], state.t + 1)
    if not with_signals:
        return new_state
    atm, atm_contra, restore = kernel.signals(x, regs, inter, inter_not, mrg, fires)
    sig = V2Signals(inter[0], inter_not[0], mrg[0], atm[0], atm_contra[0], restore[0], flip[0])
    return new_state, sig


def run_v2(f: CnfFormula, params: V2Params | None = None, src: BernoulliSource | None = None,
           init="zeros", *, wiring: WiringTable | None = None, stop_at_first: bool = True,
           trace: bool = False, attempt_on: str = "open") -> RunResult:
    params = params or V2Params()
    src = src if src is not None else SeededSource(0, 0)
    w = wiring if wiring is not None else synthesize(f)
    return _sim.run_single(V2Kernel(params, attempt_on), w, src, init, params.max_iters,
                           stop_at_first, trace, _validator(f))


def run_batch_v2(f: CnfFormula, params: V2Params, sources: BatchSource, init="zeros", *,
                 wiring: WiringTable | None = None, attempt_on: str = "open") -> list[RunResult]:
    w = wiring if wiring is not None else synthesize(f)
    return _sim.run_lanes(V2Kernel(params, attempt_on), w, sources, init, params.max_iters,
                          validate=_validator(f))
