"""Two-to-one oracles, staged circuit evolution, and second-register measurement.

A hidden nonzero mask ``s`` pairs the inputs of f as {x, x ^ s}; f is constant
on each pair and distinct across pairs.  ``s == 0`` means f is a bijection.
The circuit runs |0...0> through a Hadamard layer on the first register, the
reversible oracle |x>|z> -> |x>|z ^ f(x)>, and a second Hadamard layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .states import (
    StateVector,
    basis_state,
    hadamard_first_register,
    second_register_distribution,
)

__all__ = [
    "Stage",
    "SimonFunction",
    "FunctionTableError",
    "bits_to_int",
    "int_to_bits",
    "dot_mod2",
    "random_two_to_one",
    "random_bijection",
    "validate_function",
    "oracle_apply",
    "run_stages",
    "measure_second_register",
    "format_function_table",
    "parse_function_table",
]

MAX_ORACLE_BITS = 20


def bits_to_int(bits: str) -> int:
    """Parse a big-endian bit string such as "110" (the integer 6)."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"invalid bit string: {bits!r}")
    return int(bits, 2)


def int_to_bits(value: int, width: int) -> str:
    return format(value, f"0{width}b")


def dot_mod2(a: int, b: int) -> int:
    """Inner product of two bit vectors modulo 2."""
    return (a & b).bit_count() & 1


class Stage(Enum):
    """Labels for the circuit's intermediate states."""

    INITIAL = "initial"
    HADAMARD = "hadamard"
    ORACLE = "oracle"
    FINAL_HADAMARD = "final_hadamard"
    POST_MEASURE = "post_measure"


@dataclass(frozen=True, eq=False)
class SimonFunction:
    """Truth table of f on n-bit inputs together with its pairing mask s."""

    n: int
    table: np.ndarray
    s: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_ORACLE_BITS:
            raise ValueError(f"n must lie in [1, {MAX_ORACLE_BITS}], got {self.n}")
        size = 1 << self.n
        table = np.asarray(self.table, dtype=np.int64).reshape(-1)
        object.__setattr__(self, "table", table)
        if table.size != size:
            raise ValueError(f"table must have {size} entries, got {table.size}")
        if table.size and (table.min() < 0 or table.max() >= size):
            raise ValueError("table values must be n-bit integers")
        if not 0 <= self.s < size:
            raise ValueError(f"s must be an n-bit integer, got {self.s}")

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def coset_representatives(self) -> list[int]:
        """Lexicographically smaller member of each pair {x, x ^ s}; requires s != 0."""
        if self.s == 0:
            raise ValueError("a bijection has no input pairs")
        xs = np.arange(1 << self.n)
        return [int(x) for x in xs[xs < (xs ^ self.s)]]


def random_two_to_one(n: int, s: int, seed) -> SimonFunction:
    """Uniform random two-to-one table with pairing mask s (nonzero).

    Images are drawn uniformly without replacement, so the function is
    deterministic for a fixed seed.
    """
    if not 1 <= n <= MAX_ORACLE_BITS:
        raise ValueError(f"n must lie in [1, {MAX_ORACLE_BITS}], got {n}")
    size = 1 << n
    if not 1 <= s < size:
        raise ValueError("s must be a nonzero n-bit value; use random_bijection for s = 0")
    rng = np.random.default_rng(seed)
    images = rng.choice(size, size=size // 2, replace=False)
    xs = np.arange(size)
    reps = xs[xs < (xs ^ s)]
    table = np.empty(size, dtype=np.int64)
    table[reps] = images
    table[reps ^ s] = images
    return SimonFunction(n, table, s)


def random_bijection(n: int, seed) -> SimonFunction:
    """Uniform random bijective table; its mask is 0 by definition."""
    if not 1 <= n <= MAX_ORACLE_BITS:
        raise ValueError(f"n must lie in [1, {MAX_ORACLE_BITS}], got {n}")
    rng = np.random.default_rng(seed)
    return SimonFunction(n, rng.permutation(1 << n), 0)


def validate_function(f: SimonFunction) -> tuple[bool, str | None]:
    """Check the table against its declared mask.

    Returns (True, None) on success, else (False, diagnostic) naming the
    first violating input pair.
    """
    size = 1 << f.n
    xs = np.arange(size)
    if f.s == 0:
        values, first_index = np.unique(f.table, return_index=True)
        if values.size == size:
            return True, None
        order = np.argsort(f.table, kind="stable")
        sorted_vals = f.table[order]
        k = int(np.flatnonzero(sorted_vals[1:] == sorted_vals[:-1])[0])
        a, b = int(order[k]), int(order[k + 1])
        return False, (
            f"declared bijective but f({int_to_bits(a, f.n)}) = "
            f"f({int_to_bits(b, f.n)}) = {int_to_bits(int(sorted_vals[k]), f.n)}"
        )
    mismatched = np.flatnonzero(f.table != f.table[xs ^ f.s])
    if mismatched.size:
        x = int(mismatched[0])
        return False, (
            f"f({int_to_bits(x, f.n)}) = {int_to_bits(f(x), f.n)} but "
            f"f({int_to_bits(x ^ f.s, f.n)}) = {int_to_bits(f(x ^ f.s), f.n)}; "
            f"expected f(x) = f(x xor s) for s = {int_to_bits(f.s, f.n)}"
        )
    if np.unique(f.table).size != size // 2:
        order = np.argsort(f.table, kind="stable")
        sorted_vals = f.table[order]
        for k in np.flatnonzero(sorted_vals[1:] == sorted_vals[:-1]):
            a, b = int(order[k]), int(order[k + 1])
            if a ^ b != f.s:
                return False, (
                    f"f({int_to_bits(a, f.n)}) = f({int_to_bits(b, f.n)}) but "
                    f"{int_to_bits(a, f.n)} xor {int_to_bits(b, f.n)} != "
                    f"{int_to_bits(f.s, f.n)}"
                )
    return True, None


def oracle_apply(psi: StateVector, f: SimonFunction) -> StateVector:
    """Reversible oracle |x>|z> -> |x>|z ^ f(x)>, a basis permutation."""
    if psi.n_first != f.n or psi.n_second != f.n:
        raise ValueError(
            f"oracle on {f.n}+{f.n} qubits cannot act on a "
            f"{psi.n_first}+{psi.n_second} register state"
        )
    mask = (1 << f.n) - 1
    idx = np.arange(psi.dim)
    x = idx >> f.n
    z = idx & mask
    target = (x << f.n) | (z ^ f.table[x])
    out = np.empty_like(psi.amps)
    out[target] = psi.amps
    return StateVector(psi.n_first, psi.n_second, out)


def run_stages(f: SimonFunction) -> dict[Stage, StateVector]:
    """Evolve |0...0> through the circuit, returning every intermediate state."""
    ok, why = validate_function(f)
    if not ok:
        raise ValueError(f"invalid oracle table: {why}")
    initial = basis_state(f.n, f.n, 0)
    after_hadamard = hadamard_first_register(initial)
    after_oracle = oracle_apply(after_hadamard, f)
    final = hadamard_first_register(after_oracle)
    return {
        Stage.INITIAL: initial,
        Stage.HADAMARD: after_hadamard,
        Stage.ORACLE: after_oracle,
        Stage.FINAL_HADAMARD: final,
    }


def measure_second_register(psi: StateVector, f: SimonFunction, seed) -> tuple[int, StateVector]:
    """Born-sample an f-image from the second register and collapse the state.

    Sampling is restricted to outcomes of strictly positive probability, so
    an impossible image can never be observed.  The returned state is the
    renormalized projection onto the observed image.
    """
    if psi.n_first != f.n or psi.n_second != f.n:
        raise ValueError(
            f"oracle on {f.n}+{f.n} qubits does not match a "
            f"{psi.n_first}+{psi.n_second} register state"
        )
    probs = second_register_distribution(psi)
    support = np.flatnonzero(probs > 0.0)
    weights = probs[support] / probs[support].sum()
    rng = np.random.default_rng(seed)
    observed = int(support[rng.choice(support.size, p=weights)])
    grid = psi.amps.reshape(1 << psi.n_first, 1 << psi.n_second)
    column = grid[:, observed]
    collapsed = np.zeros_like(grid)
    collapsed[:, observed] = column / np.linalg.norm(column)
    return observed, StateVector(psi.n_first, psi.n_second, collapsed.reshape(-1))


class FunctionTableError(ValueError):
    """Malformed function-table text; carries the offending 1-based line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def format_function_table(f: SimonFunction) -> str:
    """Render the table format: header ``n=<int> s=<bits>`` then one x/f(x) pair per line."""
    lines = [f"n={f.n} s={int_to_bits(f.s, f.n)}"]
    for x in range(1 << f.n):
        lines.append(f"{int_to_bits(x, f.n)} {int_to_bits(f(x), f.n)}")
    return "\n".join(lines) + "\n"


def parse_function_table(text: str) -> SimonFunction:
    """Parse and validate a function table, reporting errors by line number."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise FunctionTableError(1, "empty function table")
    header = lines[0].split()
    if len(header) != 2 or not header[0].startswith("n=") or not header[1].startswith("s="):
        raise FunctionTableError(1, f"expected header 'n=<int> s=<bits>', got {lines[0]!r}")
    try:
        n = int(header[0][2:])
    except ValueError:
        raise FunctionTableError(1, f"invalid n in header: {header[0][2:]!r}") from None
    if not 1 <= n <= MAX_ORACLE_BITS:
        raise FunctionTableError(1, f"n must lie in [1, {MAX_ORACLE_BITS}], got {n}")
    s_bits = header[1][2:]
    if len(s_bits) != n:
        raise FunctionTableError(1, f"s must be exactly {n} bits, got {s_bits!r}")
    try:
        s = bits_to_int(s_bits)
    except ValueError:
        raise FunctionTableError(1, f"invalid s in header: {s_bits!r}") from None
    size = 1 << n
    if len(lines) - 1 != size:
        raise FunctionTableError(
            min(len(lines) + 1, size + 2),
            f"expected {size} table lines after the header, got {len(lines) - 1}",
        )
    table = np.empty(size, dtype=np.int64)
    for x in range(size):
        lineno = x + 2
        parts = lines[x + 1].split()
        if len(parts) != 2:
            raise FunctionTableError(lineno, f"expected '<x bits> <f(x) bits>', got {lines[x + 1]!r}")
        if len(parts[0]) != n or len(parts[1]) != n:
            raise FunctionTableError(lineno, f"entries must be exactly {n} bits: {lines[x + 1]!r}")
        try:
            x_val = bits_to_int(parts[0])
            f_val = bits_to_int(parts[1])
        except ValueError:
            raise FunctionTableError(lineno, f"invalid bit string: {lines[x + 1]!r}") from None
        if x_val != x:
            raise FunctionTableError(
                lineno, f"inputs must appear in lexicographic order; expected {int_to_bits(x, n)}"
            )
        table[x] = f_val
    f = SimonFunction(n, table, s)
    ok, why = validate_function(f)
    if not ok:
        raise FunctionTableError(1, f"table inconsistent with declared mask: {why}")
    return f
