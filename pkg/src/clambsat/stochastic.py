"""Bernoulli sources and the stochastic gate.

A stochastic gate passes its input ``x`` unchanged, except that with
probability ``p`` it forces the output to a fixed value ``v``. Every gate
evaluation consumes exactly one draw from its source, whether or not the
forced value differs from the input, so a run's draw sequence depends only
on the cell count and the number of iterations.

Seeded sources are Philox4x64-10 counter-based generators keyed by
``(seed, stream)``: trial k of a battery uses stream k, and no two trials
share state.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

RNG_ID = f"numpy-{np.__version__}/Philox4x64-10/key=(seed,stream)/float64"

_U64 = (1 << 64) - 1


class BernoulliSource:
    """Stream of coin flips. ``next(p)`` fires (returns True) with probability p."""

    def next(self, p: float) -> bool:
        return bool(self.draw(np.array([p], dtype=float))[0])

    def draw(self, probs: np.ndarray) -> np.ndarray:
        """One fire event per entry of ``probs``, consumed in C order."""
        raise NotImplementedError


class SeededSource(BernoulliSource):
    def __init__(self, seed: int, stream: int = 0):
        if not (0 <= seed <= _U64 and 0 <= stream <= _U64):
            raise ValueError("seed and stream must be unsigned 64-bit integers")
        self.seed = seed
        self.stream = stream
        self._gen = np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))
        self.consumed = 0

    def uniform(self, n: int) -> np.ndarray:
        self.consumed += n
        return self._gen.random(n)

    def random(self) -> float:
        self.consumed += 1
        return self._gen.random()

    def draw(self, probs: np.ndarray) -> np.ndarray:
        probs = np.asarray(probs, dtype=float)
        return self.uniform(probs.size).reshape(probs.shape) < probs

    def __repr__(self) -> str:
        return f"SeededSource(seed={self.seed}, stream={self.stream})"


class ScriptedSource(BernoulliSource):
    """Replays a fixed sequence of fire events.

    Probabilities 0 and 1 still never/always fire, whatever the script says.
    Running past the end of the script raises ``IndexError``.
    """

    def __init__(self, outcomes: Iterable[bool | int]):
        self.outcomes = np.array([bool(o) for o in outcomes], dtype=bool)
        self.pos = 0

    @classmethod
    def from_text(cls, text: str) -> "ScriptedSource":
        outcomes = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line not in ("0", "1"):
                raise ValueError(f"line {lineno}: expected 0 or 1, got {line!r}")
            outcomes.append(line == "1")
        return cls(outcomes)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedSource":
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        return "".join("1\n" if o else "0\n" for o in self.outcomes)

    @property
    def remaining(self) -> int:
        return len(self.outcomes) - self.pos

    def draw(self, probs: np.ndarray) -> np.ndarray:
        probs = np.asarray(probs, dtype=float)
        n = probs.size
        if n > self.remaining:
            raise IndexError(f"script exhausted: need {n} draws, {self.remaining} left")
        out = self.outcomes[self.pos:self.pos + n].reshape(probs.shape).copy()
        self.pos += n
        out[probs <= 0.0] = False
        out[probs >= 1.0] = True
        return out


class RecordingSource(BernoulliSource):
    """Wraps another source and keeps every fire event it hands out."""

    def __init__(self, inner: BernoulliSource):
        self.inner = inner
        self.events: list[bool] = []

    def draw(self, probs: np.ndarray) -> np.ndarray:
        out = self.inner.draw(probs)
        self.events.extend(bool(e) for e in out.ravel())
        return out

    def script(self) -> ScriptedSource:
        return ScriptedSource(self.events)


class BatchSource:
    """Lock-step draws for independent runs; lane k reads only from ``sources[k]``."""

    def __init__(self, sources: Sequence[BernoulliSource]):
        self.sources = list(sources)

    @classmethod
    def seeded(cls, seed: int, streams: Iterable[int]) -> "BatchSource":
        return cls([SeededSource(seed, s) for s in streams])

    def __len__(self) -> int:
        return len(self.sources)

    def draw(self, probs: np.ndarray, lanes: np.ndarray | None = None) -> np.ndarray:
        """Fire events of shape ``(len(lanes),) + probs.shape`` for the given lanes."""
        probs = np.asarray(probs, dtype=float)
        idx = range(len(self.sources)) if lanes is None else lanes
        if all(isinstance(self.sources[k], SeededSource) for k in idx):
            u = np.stack([self.sources[k].uniform(probs.size) for k in idx]).reshape((-1,) + probs.shape)
            return u < probs
        return np.stack([self.sources[k].draw(probs) for k in idx])


def sg_force(v: int, x: int, p: float, src: BernoulliSource) -> int:
    """Stochastic gate: ``v`` if the source fires with probability ``p``, else ``x``."""
    return v if src.next(p) else x
