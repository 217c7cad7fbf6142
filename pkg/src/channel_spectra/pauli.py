"""n-qubit Pauli strings in symplectic (x, z) representation.

A Pauli string is stored as two bit vectors plus a phase from {1, i, -1, -i}.
Products and commutation signs follow from symplectic overlaps without ever
forming matrices; dense realizations are available for verification and for
building superoperators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np

_SINGLE = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (x, z) bits per label: X -> (1,0), Z -> (0,1), Y -> (1,1)
_LABEL_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LABEL = {v: k for k, v in _LABEL_TO_BITS.items()}

_PHASES = (1, 1j, -1, -1j)


@dataclass(frozen=True)
class PauliString:
    """A phased n-qubit Pauli operator."""

    x: tuple[int, ...]
    z: tuple[int, ...]
    phase: complex = 1

    @classmethod
    def from_label(cls, label: str, phase: complex = 1) -> "PauliString":
        if any(c not in _LABEL_TO_BITS for c in label):
            raise ValueError(f"invalid Pauli label {label!r}")
        bits = [_LABEL_TO_BITS[c] for c in label]
        return cls(x=tuple(b[0] for b in bits), z=tuple(b[1] for b in bits),
                   phase=phase)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def label(self) -> str:
        return "".join(_BITS_TO_LABEL[(xi, zi)]
                       for xi, zi in zip(self.x, self.z))

    @property
    def weight(self) -> int:
        return sum(1 for xi, zi in zip(self.x, self.z) if xi or zi)

    def matrix(self) -> np.ndarray:
        mats = [_SINGLE[c] for c in self.label]
        return self.phase * reduce(np.kron, mats,
                                   np.array([[1]], dtype=complex))

    def commutes(self, other: "PauliString") -> bool:
        """True iff the two strings commute (symplectic overlap is even)."""
        overlap = sum(sx * oz + sz * ox for sx, sz, ox, oz in
                      zip(self.x, self.z, other.x, other.z))
        return overlap % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("qubit counts differ")
        x = tuple((a + b) % 2 for a, b in zip(self.x, other.x))
        z = tuple((a + b) % 2 for a, b in zip(self.z, other.z))
        # per site, with sigma(x,z) := i^{xz} X^x Z^z, the product picks up
        # i^{x1 z1 + x2 z2 - x3 z3 + 2 z1 x2} relative to sigma(x3, z3)
        exp = 0
        for x1, z1, x2, z2, x3, z3 in zip(self.x, self.z, other.x, other.z,
                                          x, z):
            exp += x1 * z1 + x2 * z2 - x3 * z3 + 2 * z1 * x2
        phase = self.phase * other.phase * _PHASES[exp % 4]
        return PauliString(x=x, z=z, phase=phase)

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return f"{self.phase}*{self.label}" if self.phase != 1 else self.label


def pauli_group(n: int) -> list[PauliString]:
    """The 4^n phase-(+1) Pauli strings in lexicographic order (I<X<Y<Z)."""
    if not 1 <= n <= 5:
        raise ValueError(f"qubit count {n} outside supported range [1, 5]")
    return [PauliString.from_label("".join(labels))
            for labels in product("IXYZ", repeat=n)]


def symplectic_overlap(a: PauliString, b: PauliString) -> int:
    """Parity of the symplectic product: 0 if commuting, 1 if anticommuting."""
    return 0 if a.commutes(b) else 1
