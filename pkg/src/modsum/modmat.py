"""Exact linear algebra over Z_M, the integers modulo M.

Everything the syndrome pipeline needs: vector-matrix products, kernels of
v -> v @ A, and particular solutions of v @ A = s.  M may be composite, so a
kernel is a finite Z_M-module rather than a vector space and need not have a
free basis (over Z_4 the kernel of [[2]] is {0, 2}).  Kernels are therefore
extracted from a Howell-form reduction of the augmented matrix [A | I], which
yields an echelon generating set with per-generator coefficient ranges whose
mixed-radix enumeration hits every kernel element exactly once.

All arithmetic is integer-exact.  Matrices here are small (code dimensions,
not sample counts), so clarity wins over asymptotics; the one concession to
speed is a bit-packed elimination path for M=2, which the tests pin against
the generic reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np

#: Largest supported modulus.  Entries are stored as int64 and the decode
#: fast paths assume one byte per symbol, so this is a hard ceiling.
MAX_MODULUS = 256

EntryArray = Union[np.ndarray, Sequence[int]]


class NoSolutionError(ValueError):
    """v @ A = s has no solution over Z_M (inconsistent syndrome)."""


def _checked_modulus(modulus: int) -> int:
    if isinstance(modulus, bool) or not isinstance(modulus, (int, np.integer)):
        raise TypeError(f"modulus must be an int, got {modulus!r}")
    modulus = int(modulus)
    if not 2 <= modulus <= MAX_MODULUS:
        raise ValueError(f"modulus must be in [2, {MAX_MODULUS}], got {modulus}")
    return modulus


def _checked_entries(entries: EntryArray, modulus: int, ndim: int) -> np.ndarray:
    arr = np.asarray(entries)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array of entries, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("entries must be non-empty")
    if not np.issubdtype(arr.dtype, np.integer):
        raise TypeError(f"entries must be integers, got dtype {arr.dtype}")
    arr = np.mod(arr.astype(np.int64), modulus)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ModVector:
    """Immutable vector with entries in [0, modulus)."""

    entries: np.ndarray
    modulus: int

    def __post_init__(self) -> None:
        modulus = _checked_modulus(self.modulus)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "entries", _checked_entries(self.entries, modulus, 1))

    def __len__(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModVector):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ModVector({self.entries.tolist()}, mod {self.modulus})"


@dataclass(frozen=True, eq=False)
class ModMatrix:
    """Immutable matrix with entries in [0, modulus)."""

    entries: np.ndarray
    modulus: int

    def __post_init__(self) -> None:
        modulus = _checked_modulus(self.modulus)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "entries", _checked_entries(self.entries, modulus, 2))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape  # type: ignore[return-value]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        rows, cols = self.shape
        return f"ModMatrix({rows}x{cols}, mod {self.modulus})"


@dataclass(frozen=True, eq=False)
class KernelBasis:
    """Echelon generating set of {v : v @ A == 0} over Z_M.

    generators[i] may be combined with any coefficient in range(radices[i]);
    the mixed-radix sweep over all coefficient tuples enumerates each kernel
    element exactly once, so enumeration_size == prod(radices) == |kernel|.
    For prime M every radix equals M and the generators are a free basis of
    dimension n - rank(A).
    """

    modulus: int
    length: int
    generators: tuple[ModVector, ...]
    radices: tuple[int, ...]
    enumeration_size: int

    def __post_init__(self) -> None:
        if len(self.generators) != len(self.radices):
            raise ValueError("generators and radices must pair up")
        if any(r < 2 for r in self.radices):
            raise ValueError("every enumeration radix must be at least 2")
        if any(len(g) != self.length for g in self.generators):
            raise ValueError("generator length does not match ambient length")
        expected = math.prod(self.radices) if self.radices else 1
        if self.enumeration_size != expected:
            raise ValueError("enumeration_size must equal prod(radices)")

    def iter_elements(self, limit: int = 1 << 20) -> Iterator[ModVector]:
        """Yield every kernel element once, zero first (intended for tests)."""
        if self.enumeration_size > limit:
            raise ValueError(f"kernel has {self.enumeration_size} elements, over limit {limit}")
        if not self.generators:
            yield ModVector(np.zeros(self.length, dtype=np.int64), self.modulus)
            return
        n = self.length
        gens = np.stack([g.entries for g in self.generators])
        coeffs = [0] * len(self.radices)
        while True:
            combo = (np.asarray(coeffs, dtype=np.int64) @ gens) % self.modulus
            yield ModVector(combo, self.modulus)
            pos = len(coeffs) - 1
            while pos >= 0:
                coeffs[pos] += 1
                if coeffs[pos] < self.radices[pos]:
                    break
                coeffs[pos] = 0
                pos -= 1
            if pos < 0:
                return


def mat_vec_mul(vector: ModVector, matrix: ModMatrix) -> ModVector:
    """Return vector @ matrix reduced mod M.

    Raises:
        ValueError: on modulus mismatch or if len(vector) != matrix rows.
    """
    if vector.modulus != matrix.modulus:
        raise ValueError(f"modulus mismatch: vector mod {vector.modulus}, matrix mod {matrix.modulus}")
    rows, _ = matrix.shape
    if len(vector) != rows:
        raise ValueError(f"dimension mismatch: vector length {len(vector)}, matrix has {rows} rows")
    product = (vector.entries @ matrix.entries) % matrix.modulus
    return ModVector(product, matrix.modulus)


def _gcdex(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with s*a + t*b == g for a, b >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _lift_to_unit(a: int, modulus: int) -> int:
    """Return a unit u of Z_M with (u * a) % M == gcd(a, M), for 0 < a < M.

    gcd(a//g, M//g) == 1 by definition of g = gcd(a, M), so a//g is invertible
    mod M//g; that inverse is then shifted by multiples of M//g until it is
    coprime to M itself (a coprime lift always exists among the g candidates).
    """
    g = math.gcd(a, modulus)
    step = modulus // g
    u = pow((a // g) % step, -1, step) if step > 1 else 1
    while math.gcd(u, modulus) != 1:
        u += step
    return u % modulus


class _HowellSolver:
    """Howell-form reduction of [A | I] over Z_M for arbitrary 2 <= M <= 256.

    Row-reduces the augmented generators (A_i | e_i) of the relation module
    {(v @ A, v)} with unimodular 2x2 gcd transforms, normalizes each pivot to
    the divisor gcd(pivot, M), and appends the annihilator row (M/d) * row
    whenever a pivot d is fixed.  The annihilator closure is what makes the
    result a Howell form: any module element vanishing on the first j columns
    is then a combination of pivot rows with pivot column >= j, which is
    exactly the property the kernel extraction and the greedy solver rely on.
    Entries above pivots are left unreduced; canonical form is not needed.
    """

    def __init__(self, matrix: ModMatrix) -> None:
        A = matrix.entries
        m = matrix.modulus
        n, k = A.shape
        self._m = m
        self._n = n
        self._k = k
        aug = np.hstack([A, np.eye(n, dtype=np.int64)])
        work = [aug[i] % m for i in range(n)]
        pivots: list[tuple[int, np.ndarray]] = []
        for col in range(k + n):
            keep: list[np.ndarray] = []
            pivot: Optional[np.ndarray] = None
            for row in work:
                if row[col] == 0:
                    keep.append(row)
                    continue
                if pivot is None:
                    pivot = row
                    continue
                a, b = int(pivot[col]), int(row[col])
                g, s, t = _gcdex(a, b)
                cleared = ((a // g) * row - (b // g) * pivot) % m
                pivot = (s * pivot + t * row) % m
                if cleared.any():
                    keep.append(cleared)
            if pivot is None:
                work = keep
                continue
            d = math.gcd(int(pivot[col]), m)
            if int(pivot[col]) != d:
                pivot = (pivot * _lift_to_unit(int(pivot[col]), m)) % m
            annihilator = ((m // d) * pivot) % m
            if annihilator.any():
                keep.append(annihilator)
            pivots.append((col, pivot))
            work = keep
        # Every original row is eventually absorbed; leftovers must be zero.
        assert all(not row.any() for row in work)
        self._pivots = pivots

    def kernel_basis(self) -> KernelBasis:
        m, k = self._m, self._k
        generators = []
        radices = []
        for col, row in self._pivots:
            if col < k:
                continue
            d = int(row[col])
            generators.append(ModVector(row[k:], m))
            radices.append(m // d)
        size = math.prod(radices) if radices else 1
        return KernelBasis(
            modulus=m,
            length=self._n,
            generators=tuple(generators),
            radices=tuple(radices),
            enumeration_size=size,
        )

    def solve(self, syndrome: np.ndarray) -> np.ndarray:
        m, n, k = self._m, self._n, self._k
        residual = syndrome.astype(np.int64) % m
        solution = np.zeros(n, dtype=np.int64)
        for col, row in self._pivots:
            if col >= k:
                break
            x = int(residual[col])
            if x == 0:
                continue
            d = int(row[col])
            if x % d:
                raise NoSolutionError(f"syndrome component {x} at column {col} not reachable (pivot {d} mod {m})")
            c = x // d
            residual = (residual - c * row[:k]) % m
            solution = (solution + c * row[k:]) % m
        if residual.any():
            raise NoSolutionError("syndrome is not in the row space of the code matrix")
        return solution


class _Gf2Solver:
    """Bit-packed elimination over GF(2); rows of [A | I] live in one int each.

    Layout: bit (n + k - 1 - j) holds syndrome column j, bit (n - 1 - i) holds
    vector position i.  The MSB-first vector packing matches the decoder's
    candidate packing, where integer order equals lexicographic order.
    """

    def __init__(self, matrix: ModMatrix) -> None:
        A = matrix.entries
        n, k = A.shape
        self._n = n
        self._k = k
        col_weight = 1 << np.arange(k - 1, -1, -1, dtype=object)
        rows = [int((A[i] * col_weight).sum()) << n | 1 << (n - 1 - i) for i in range(n)]
        pivots: list[tuple[int, int]] = []
        for bit in range(n + k - 1, n - 1, -1):
            pivot = 0
            keep = []
            for row in rows:
                if not (row >> bit) & 1:
                    keep.append(row)
                elif pivot:
                    keep.append(row ^ pivot)
                else:
                    pivot = row
            if pivot:
                pivots.append((bit, pivot))
            rows = keep
        # [A | I] has full row rank, so the leftovers are the kernel basis.
        self._pivots = pivots
        self._kernel_packed = rows
        self._low_mask = (1 << n) - 1

    def kernel_basis(self) -> KernelBasis:
        n = self._n
        generators = tuple(
            ModVector([packed >> (n - 1 - i) & 1 for i in range(n)], 2)
            for packed in self._kernel_packed
        )
        radices = (2,) * len(generators)
        return KernelBasis(
            modulus=2,
            length=n,
            generators=generators,
            radices=radices,
            enumeration_size=1 << len(generators),
        )

    def solve(self, syndrome: np.ndarray) -> np.ndarray:
        n, k = self._n, self._k
        acc = 0
        for j in range(k):
            acc = acc << 1 | int(syndrome[j]) & 1
        acc <<= n
        for bit, row in self._pivots:
            if (acc >> bit) & 1:
                acc ^= row
        if acc >> n:
            raise NoSolutionError("syndrome is not in the row space of the code matrix")
        packed = acc & self._low_mask
        return np.array([packed >> (n - 1 - i) & 1 for i in range(n)], dtype=np.int64)


class CosetSolver:
    """One elimination of a code matrix, reusable for solve and kernel queries.

    The decoder needs both a particular solution and the kernel for the same
    matrix; building this once avoids repeating the reduction.
    """

    def __init__(self, matrix: ModMatrix) -> None:
        self.matrix = matrix
        if matrix.modulus == 2:
            self._impl: Union[_Gf2Solver, _HowellSolver] = _Gf2Solver(matrix)
        else:
            self._impl = _HowellSolver(matrix)

    def kernel_basis(self) -> KernelBasis:
        return self._impl.kernel_basis()

    def solve(self, syndrome: ModVector) -> ModVector:
        """Any v with v @ A == syndrome; raises NoSolutionError if none exists."""
        if syndrome.modulus != self.matrix.modulus:
            raise ValueError(
                f"modulus mismatch: syndrome mod {syndrome.modulus}, matrix mod {self.matrix.modulus}"
            )
        _, k = self.matrix.shape
        if len(syndrome) != k:
            raise ValueError(f"dimension mismatch: syndrome length {len(syndrome)}, matrix has {k} columns")
        return ModVector(self._impl.solve(syndrome.entries), self.matrix.modulus)


def kernel_basis(matrix: ModMatrix) -> KernelBasis:
    """Generating set of {v : v @ matrix == 0} with exact enumeration metadata."""
    return CosetSolver(matrix).kernel_basis()


def solve_particular(matrix: ModMatrix, syndrome: ModVector) -> ModVector:
    """One solution of v @ matrix == syndrome, or NoSolutionError."""
    return CosetSolver(matrix).solve(syndrome)
