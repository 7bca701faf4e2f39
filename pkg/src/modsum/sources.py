"""The correlated pair family whose modulo-M sum carries the unknown parameter.

X and Y share the alphabet {0, ..., M-1}.  A single parameter theta in
(0, 1/(M-1)) sets every joint cell: P(X=i, Y=j) is theta/M except on the
anti-diagonal i + j == M - 1, where the leftover mass (1 - theta*(M-1))/M
sits.  Both marginals are uniform for every theta, so neither terminal can
see the parameter alone; it only shows in the sum Z = (X + Y) mod M, whose
law is P(Z = M-1) = 1 - theta*(M-1) and P(Z = z) = theta elsewhere.

Entropies are reported in bits.  The conditional entropies are computed from
the joint table rather than the closed form on purpose: their agreement with
entropy_Z is a non-trivial identity of this family and is pinned by tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .modmat import ModVector

#: Sequences are plain ModVectors; the alias marks sample-space intent.
SequenceVec = ModVector

SeedLike = Union[int, np.integer, np.random.SeedSequence, np.random.Generator]


@dataclass(frozen=True)
class JointSourceModel:
    """Alphabet size M and correlation parameter theta."""

    M: int
    theta: float

    def __post_init__(self) -> None:
        if isinstance(self.M, bool) or not isinstance(self.M, (int, np.integer)):
            raise TypeError(f"M must be an int, got {self.M!r}")
        object.__setattr__(self, "M", int(self.M))
        if self.M < 2:
            raise ValueError(f"M must be at least 2, got {self.M}")
        theta = float(self.theta)
        object.__setattr__(self, "theta", theta)
        upper = 1.0 / (self.M - 1)
        if not math.isfinite(theta) or not 0.0 < theta < upper:
            raise ValueError(f"theta must lie strictly in (0, {upper}), got {theta}")


@dataclass(frozen=True, eq=False)
class SequencePair:
    """One drawn block (x, y); positions are i.i.d. across t."""

    x: SequenceVec
    y: SequenceVec

    def __post_init__(self) -> None:
        if self.x.modulus != self.y.modulus:
            raise ValueError("pair halves must share a modulus")
        if len(self.x) != len(self.y):
            raise ValueError("pair halves must share a length")

    def __len__(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class TypeStats:
    """Symbol counts of one sequence; counts sum to n."""

    counts: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1 or sum(self.counts) != self.n:
            raise ValueError("counts must be non-negative and sum to n >= 1")


def joint_pmf(model: JointSourceModel) -> np.ndarray:
    """M x M table of P(X=i, Y=j)."""
    m = model.M
    pmf = np.full((m, m), model.theta / m)
    anti = np.arange(m)
    pmf[anti, m - 1 - anti] = (1.0 - model.theta * (m - 1)) / m
    pmf.setflags(write=False)
    return pmf


def shannon_entropy_bits(pmf: np.ndarray) -> float:
    """Entropy of an arbitrary PMF in bits, with 0 * log 0 == 0."""
    p = np.asarray(pmf, dtype=float).ravel()
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("pmf entries must be non-negative and sum to 1")
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def entropy_Z(model: JointSourceModel) -> float:
    """Entropy of Z = (X + Y) mod M in bits."""
    pz = np.full(model.M, model.theta)
    pz[model.M - 1] = 1.0 - model.theta * (model.M - 1)
    return shannon_entropy_bits(pz)


def conditional_entropies(model: JointSourceModel) -> tuple[float, float]:
    """(H(X|Y), H(Y|X)) in bits, computed from the joint table."""
    pmf = joint_pmf(model)
    h_joint = shannon_entropy_bits(pmf)
    h_y = shannon_entropy_bits(pmf.sum(axis=0))
    h_x = shannon_entropy_bits(pmf.sum(axis=1))
    return h_joint - h_y, h_joint - h_x


def sw_sum_rate(model: JointSourceModel) -> float:
    """Joint entropy H(X, Y): the centralized (Slepian-Wolf) sum-rate floor."""
    return shannon_entropy_bits(joint_pmf(model))


def sample_pair(model: JointSourceModel, n: int, rng: SeedLike) -> SequencePair:
    """Draw n i.i.d. pairs by inverse CDF over the row-major joint table.

    Args:
        model: source family member.
        n: block length, at least 1.
        rng: integer seed, SeedSequence, or an already-seeded Generator.
            Results are a pure function of the generator state.
    """
    if n < 1:
        raise ValueError(f"block length must be at least 1, got {n}")
    gen = np.random.default_rng(rng)
    cdf = np.cumsum(joint_pmf(model).ravel())
    cdf[-1] = 1.0  # guard against cumulative rounding
    idx = np.searchsorted(cdf, gen.random(n), side="right")
    m = model.M
    return SequencePair(
        x=ModVector(idx // m, m),
        y=ModVector(idx % m, m),
    )


def modsum(pair: SequencePair) -> SequenceVec:
    """Positionwise (x + y) mod M: the sequence the decoder must recover."""
    m = pair.x.modulus
    return ModVector((pair.x.entries + pair.y.entries) % m, m)


def type_of(seq: SequenceVec) -> TypeStats:
    """Symbol counts of one sequence."""
    counts = np.bincount(seq.entries, minlength=seq.modulus)
    return TypeStats(counts=tuple(int(c) for c in counts), n=len(seq))


def empirical_entropy(stats: TypeStats) -> float:
    """Entropy of the empirical distribution counts/n, in bits."""
    return shannon_entropy_bits(np.asarray(stats.counts, dtype=float) / stats.n)
