"""Sum-of-sinusoid vector signals.

Used both for per-agent external disturbances and for the reference centroid
velocity.  Each axis holds a list of ``a*sin(w*t)`` / ``a*cos(w*t)`` terms
(a cosine with zero frequency represents a constant), so every signal is
bounded by the sum of absolute amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KIND_SIN = 0
KIND_COS = 1
_KIND_NAMES = {"sin": KIND_SIN, "cos": KIND_COS}


@dataclass(frozen=True)
class SinusoidTerm:
    amplitude: float
    angular_frequency: float
    kind: str = "sin"

    def __post_init__(self):
        if self.kind not in _KIND_NAMES:
            raise ValueError(f"kind must be 'sin' or 'cos', got {self.kind!r}")
        if not np.isfinite(self.amplitude) or not np.isfinite(self.angular_frequency):
            raise ValueError("term parameters must be finite")

    def __call__(self, t: float) -> float:
        phase = self.angular_frequency * t
        return self.amplitude * (np.sin(phase) if self.kind == "sin" else np.cos(phase))


@dataclass(frozen=True)
class SinusoidSignal:
    """Vector signal with one term list per axis; evaluates to an (m,) array."""

    terms: tuple[tuple[SinusoidTerm, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(tuple(axis) for axis in self.terms))

    @classmethod
    def zero(cls, dimension: int) -> "SinusoidSignal":
        return cls(terms=tuple(() for _ in range(dimension)))

    @property
    def dimension(self) -> int:
        return len(self.terms)

    def __call__(self, t: float) -> np.ndarray:
        return np.array([sum(term(t) for term in axis) for axis in self.terms], dtype=float)

    def bound(self) -> np.ndarray:
        """Per-axis bound: sum of absolute amplitudes."""
        return np.array([sum(abs(term.amplitude) for term in axis) for axis in self.terms])

    def integral(self, t) -> np.ndarray:
        """Exact definite integral from 0 to t, one column per axis.

        ``t`` may be a scalar or an array; the result has shape
        ``t.shape + (dimension,)``.
        """
        ts = np.asarray(t, dtype=float)
        out = np.zeros(ts.shape + (self.dimension,))
        for ax, axis in enumerate(self.terms):
            acc = np.zeros_like(ts)
            for term in axis:
                a, w = term.amplitude, term.angular_frequency
                if term.kind == "sin":
                    acc = acc + (0.0 if w == 0.0 else a * (1.0 - np.cos(w * ts)) / w)
                elif w == 0.0:
                    acc = acc + a * ts
                else:
                    acc = acc + a * np.sin(w * ts) / w
            out[..., ax] = acc
        return out


@dataclass(frozen=True)
class DisturbanceSignal:
    """Per-agent disturbances with a global scale factor; stacks to (n*m,)."""

    agents: tuple[SinusoidSignal, ...]
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        dims = {sig.dimension for sig in self.agents}
        if len(dims) > 1:
            raise ValueError(f"inconsistent axis counts across agents: {sorted(dims)}")

    @classmethod
    def none(cls, n_agents: int, dimension: int) -> "DisturbanceSignal":
        return cls(agents=tuple(SinusoidSignal.zero(dimension) for _ in range(n_agents)))

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    def scaled(self, factor: float) -> "DisturbanceSignal":
        return DisturbanceSignal(agents=self.agents, scale=self.scale * factor)

    def __call__(self, t: float) -> np.ndarray:
        return self.scale * np.concatenate([sig(t) for sig in self.agents])


def flatten_terms(signals) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Flatten axis term lists into (amplitudes, frequencies, kinds, offsets).

    ``signals`` is an iterable of per-axis term tuples (in stacking order);
    ``offsets`` has one more entry than there are axes, and axis a owns terms
    ``offsets[a]:offsets[a+1]``.  This is the wire layout of the integration
    kernels.
    """
    amps, freqs, kinds, offsets = [], [], [], [0]
    for axis in signals:
        for term in axis:
            amps.append(term.amplitude)
            freqs.append(term.angular_frequency)
            kinds.append(_KIND_NAMES[term.kind])
        offsets.append(len(amps))
    return (np.asarray(amps, dtype=float), np.asarray(freqs, dtype=float),
            np.asarray(kinds, dtype=np.int8), np.asarray(offsets, dtype=np.int32))
