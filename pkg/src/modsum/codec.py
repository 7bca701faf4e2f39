"""Identical linear codes over Z_M and minimum-entropy coset decoding.

Both terminals compress with the same random matrix A (n x k over Z_M), so
the fusion side can add syndromes: x @ A + y @ A == (x + y mod M) @ A.  The
decoder then searches the coset {z : z @ A == s} for the sequence whose
empirical type has the least entropy.  That rule never looks at the source
parameter, which is the point of the construction: one code serves the whole
model family at any rate above the entropy of the sum.

Decoding is exact.  Entropies of types are compared through the integer
surrogate prod(c**c) (monotone decreasing in type entropy for fixed n), so
tie detection never hinges on float rounding; the vectorized sweeps use
integer scores and only fall back to the surrogate on the shortlisted rows.
Ties break toward the lexicographically smallest sequence.  Coset size is
M**(n-k) for a full-rank A and larger otherwise; a budget guard refuses
enumerations that would not fit in memory or time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .modmat import (
    CosetSolver,
    KernelBasis,
    ModMatrix,
    ModVector,
    NoSolutionError,
    mat_vec_mul,
)
from .sources import SeedLike, SequenceVec

__all__ = [
    "CosetTooLargeError",
    "DecodeOutcome",
    "LinearCode",
    "combine",
    "encode",
    "generate_code",
    "min_entropy_decode",
    "oracle_decode",
    "DEFAULT_ENUMERATION_BUDGET",
    "ORACLE_SPACE_LIMIT",
]

#: Refuse to enumerate cosets larger than this (2**26 candidates).
DEFAULT_ENUMERATION_BUDGET = 1 << 26

#: oracle_decode walks the whole space M**n; keep that below 2**24.
ORACLE_SPACE_LIMIT = 1 << 24


class CosetTooLargeError(ValueError):
    """Coset enumeration would exceed the configured budget."""


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A shared n x k code matrix over Z_M; both terminals use the same one."""

    matrix: ModMatrix
    n: int
    k: int
    modulus: int

    def __post_init__(self) -> None:
        rows, cols = self.matrix.shape
        if (rows, cols) != (self.n, self.k):
            raise ValueError(f"matrix shape {(rows, cols)} does not match (n, k)=({self.n}, {self.k})")
        if self.matrix.modulus != self.modulus:
            raise ValueError("code modulus does not match matrix modulus")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def rate_bits(self) -> float:
        """Realized per-terminal rate in bits per source symbol."""
        return self.k / self.n * math.log2(self.modulus)


@dataclass(frozen=True, eq=False)
class DecodeOutcome:
    decoded: SequenceVec
    candidates_examined: int
    tie: bool


def generate_code(n: int, rate_bits: float, modulus: int, rng: SeedLike) -> LinearCode:
    """Draw a uniform random code matrix at the requested rate.

    k = ceil(n * rate_bits / log2(M)), i.e. the realized rate is rounded up,
    never below the request.  A guard snaps values within 1e-9 of an integer
    before the ceiling so that float fuzz (0.6 * 20 = 12.000000000000002)
    cannot inflate k.

    Args:
        n: block length, at least 1.
        rate_bits: per-terminal rate, in (0, log2(M)].
        modulus: alphabet size M.
        rng: seed or Generator; entries are i.i.d. uniform over Z_M.
    """
    if n < 1:
        raise ValueError(f"block length must be at least 1, got {n}")
    bits_per_symbol = math.log2(modulus)
    if not 0.0 < rate_bits <= bits_per_symbol:
        raise ValueError(f"rate_bits must be in (0, {bits_per_symbol:.6g}] for M={modulus}, got {rate_bits}")
    raw = n * rate_bits / bits_per_symbol
    nearest = round(raw)
    k = nearest if abs(raw - nearest) < 1e-9 else math.ceil(raw)
    k = max(1, min(n, k))
    gen = np.random.default_rng(rng)
    entries = gen.integers(0, modulus, size=(n, k))
    return LinearCode(matrix=ModMatrix(entries, modulus), n=n, k=k, modulus=modulus)


def encode(code: LinearCode, seq: SequenceVec) -> ModVector:
    """Syndrome of one sequence: seq @ A over Z_M."""
    return mat_vec_mul(seq, code.matrix)


def combine(syndrome_x: ModVector, syndrome_y: ModVector) -> ModVector:
    """Entrywise sum of the two terminal syndromes: equals encode(modsum(pair))."""
    if syndrome_x.modulus != syndrome_y.modulus:
        raise ValueError("syndromes must share a modulus")
    if len(syndrome_x) != len(syndrome_y):
        raise ValueError("syndromes must share a length")
    m = syndrome_x.modulus
    return ModVector((syndrome_x.entries + syndrome_y.entries) % m, m)


# ------------------------------------------------------------------- scoring


def _type_key(counts: Sequence[int]) -> int:
    """prod(c**c): strictly larger exactly when the type entropy is smaller."""
    key = 1
    for c in counts:
        if c:
            key *= int(c) ** int(c)
    return key


def _seq_key(entries: np.ndarray) -> int:
    counts = np.bincount(entries)
    return _type_key(counts.tolist())


if hasattr(np, "bitwise_count"):

    def _popcount_u64(values: np.ndarray) -> np.ndarray:
        return np.bitwise_count(values).astype(np.int64)

else:  # pragma: no cover - numpy < 2.0 fallback
    _POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)

    def _popcount_u64(values: np.ndarray) -> np.ndarray:
        spread = _POP8[values.view(np.uint8)].reshape(values.shape + (8,))
        return spread.sum(axis=-1, dtype=np.int64)


def _pack_bits_msb_first(entries: np.ndarray) -> int:
    """Bit i of the sequence goes to bit n-1-i, so int order is lex order."""
    packed = 0
    for bit in entries.tolist():
        packed = packed << 1 | (bit & 1)
    return packed


def _unpack_bits_msb_first(packed: int, n: int) -> np.ndarray:
    return np.array([(packed >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.int64)


# ------------------------------------------------------------- coset sweeps


def _decode_packed_gf2(particular: int, generators: list[int], n: int) -> tuple[np.ndarray, bool]:
    """Sweep a GF(2) coset with XOR tables and popcounts.

    The binary type entropy is strictly decreasing in |2w - n| where w is the
    sequence weight, so that integer is the whole score: no refinement pass
    is needed and ties are exact.
    """
    d = len(generators)
    t = min(d, 16)
    low = np.zeros(1 << t, dtype=np.uint64)
    for i in range(t):
        size = 1 << i
        low[size : 2 * size] = low[:size] ^ np.uint64(generators[i])
    high = generators[t:]
    best_score = -1
    best_packed = 0
    best_count = 0
    for h in range(1 << (d - t)):
        base = particular
        bits = h
        pos = 0
        while bits:
            if bits & 1:
                base ^= high[pos]
            bits >>= 1
            pos += 1
        values = low ^ np.uint64(base)
        scores = np.abs(2 * _popcount_u64(values) - n)
        local = int(scores.max())
        if local < best_score:
            continue
        mask = scores == local
        count = int(mask.sum())
        smallest = int(values[mask].min())
        if local > best_score:
            best_score, best_count, best_packed = local, count, smallest
        else:
            best_count += count
            best_packed = min(best_packed, smallest)
    return _unpack_bits_msb_first(best_packed, n), best_count > 1


def _decode_generic(
    particular: np.ndarray,
    basis: KernelBasis,
    n: int,
    modulus: int,
) -> tuple[np.ndarray, bool]:
    """Blockwise mixed-radix sweep for any modulus.

    Rows are scored with a fixed-point table round(c * log2(c) * 2**40); two
    rows whose true scores differ can disagree by at most `modulus` scaled
    units after rounding, so every row within that slack of the running
    maximum is kept and re-ranked with the exact integer surrogate.
    """
    m = modulus
    gens = [g.entries.astype(np.int64) for g in basis.generators]
    radices = basis.radices
    split = 0
    low_size = 1
    while split < len(gens) and low_size * radices[split] <= 4096:
        low_size *= radices[split]
        split += 1
    table = np.zeros((1, n), dtype=np.int16)
    for i in range(split):
        g = gens[i]
        table = np.vstack(
            [((table.astype(np.int64) + c * g) % m).astype(np.int16) for c in range(radices[i])]
        )
    scaled = np.array(
        [round(c * math.log2(c) * (1 << 40)) if c else 0 for c in range(n + 1)],
        dtype=np.int64,
    )
    slack = m
    high_gens = gens[split:]
    high_radices = radices[split:]
    digits = [0] * len(high_gens)
    best = None  # running max of the scaled score
    kept: list[tuple[int, tuple[int, ...]]] = []
    while True:
        base = particular.copy()
        for digit, g in zip(digits, high_gens):
            if digit:
                base = (base + digit * g) % m
        block = (table + base.astype(np.int16)) % m
        scores = np.zeros(block.shape[0], dtype=np.int64)
        for sym in range(m):
            scores += scaled[(block == sym).sum(axis=1)]
        local = int(scores.max())
        if best is None or local > best:
            best = local
            kept = [(s, r) for s, r in kept if s >= best - slack]
        mask = scores >= best - slack
        for row, score in zip(block[mask], scores[mask]):
            kept.append((int(score), tuple(int(v) for v in row)))
        pos = len(digits) - 1
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < high_radices[pos]:
                break
            digits[pos] = 0
            pos -= 1
        if pos < 0:
            break
    best_key = -1
    best_row: Optional[tuple[int, ...]] = None
    count = 0
    for _, row in kept:
        key = _type_key(np.bincount(np.asarray(row, dtype=np.int64), minlength=m).tolist())
        if key > best_key:
            best_key, best_row, count = key, row, 1
        elif key == best_key:
            count += 1
            if row < best_row:  # type: ignore[operator]
                best_row = row
    assert best_row is not None
    return np.asarray(best_row, dtype=np.int64), count > 1


# ------------------------------------------------------------------- decoding


def min_entropy_decode(
    code: LinearCode,
    syndrome: ModVector,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> DecodeOutcome:
    """Minimum-entropy sequence in the coset {z : z @ A == syndrome}.

    The whole coset is always examined, so candidates_examined equals its
    size.  Ties (several coset members at the minimal type entropy) resolve
    to the lexicographically smallest sequence and set the tie flag.

    Raises:
        NoSolutionError: the syndrome is not reachable by any sequence.
        CosetTooLargeError: coset size exceeds enumeration_budget; lower n
            or raise the rate (larger k) to shrink the coset.
    """
    m, n, k = code.modulus, code.n, code.k
    floor_size = m ** (n - k)
    if floor_size > enumeration_budget:
        raise CosetTooLargeError(
            f"coset holds at least M**(n-k) = {floor_size} candidates, over the budget "
            f"{enumeration_budget}; reduce n or increase the rate"
        )
    solver = CosetSolver(code.matrix)
    particular = solver.solve(syndrome)
    basis = solver.kernel_basis()
    size = basis.enumeration_size
    if size > enumeration_budget:
        raise CosetTooLargeError(
            f"rank-deficient code: coset holds {size} candidates, over the budget "
            f"{enumeration_budget}; reduce n or increase the rate"
        )
    if size == 1:
        return DecodeOutcome(decoded=particular, candidates_examined=1, tie=False)
    if m == 2 and n <= 64:
        packed_gens = [_pack_bits_msb_first(g.entries) for g in basis.generators]
        entries, tie = _decode_packed_gf2(_pack_bits_msb_first(particular.entries), packed_gens, n)
    else:
        entries, tie = _decode_generic(particular.entries, basis, n, m)
    return DecodeOutcome(decoded=ModVector(entries, m), candidates_examined=size, tie=tie)


def _all_sequences(modulus: int, n: int) -> np.ndarray:
    """Every sequence in Z_M^n as rows, in lexicographic order."""
    total = modulus**n
    idx = np.arange(total)
    out = np.empty((total, n), dtype=np.uint8)
    for pos in range(n):
        out[:, pos] = (idx // modulus ** (n - 1 - pos)) % modulus
    return out


def oracle_decode(code: LinearCode, syndrome: ModVector) -> DecodeOutcome:
    """Brute-force reference decoder: filter all M**n sequences by syndrome.

    Same contract and tie rule as min_entropy_decode, via an independent
    route (no kernel machinery).  Only for small instances:
    M**n must not exceed ORACLE_SPACE_LIMIT.
    """
    m, n, k = code.modulus, code.n, code.k
    if m**n > ORACLE_SPACE_LIMIT:
        raise ValueError(f"oracle space M**n = {m**n} exceeds {ORACLE_SPACE_LIMIT}")
    if syndrome.modulus != m:
        raise ValueError("modulus mismatch between syndrome and code")
    if len(syndrome) != k:
        raise ValueError("syndrome length does not match code dimension")
    seqs = _all_sequences(m, n)
    A = code.matrix.entries
    target = syndrome.entries
    matches = []
    chunk = 1 << 16
    for start in range(0, seqs.shape[0], chunk):
        part = seqs[start : start + chunk]
        synd = part.astype(np.int64) @ A % m
        hit = (synd == target).all(axis=1)
        if hit.any():
            matches.append(part[hit])
    if not matches:
        raise NoSolutionError("syndrome is not in the row space of the code matrix")
    candidates = np.vstack(matches)
    best_key = -1
    best_idx = -1
    count = 0
    for i in range(candidates.shape[0]):
        key = _seq_key(candidates[i].astype(np.int64))
        if key > best_key:
            best_key, best_idx, count = key, i, 1
        elif key == best_key:
            count += 1  # rows arrive in lex order, so the first stays
    decoded = ModVector(candidates[best_idx].astype(np.int64), m)
    return DecodeOutcome(decoded=decoded, candidates_examined=int(candidates.shape[0]), tie=count > 1)
