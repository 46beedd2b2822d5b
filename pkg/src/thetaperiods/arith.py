"""Small integer helpers and characters of the Atkin-Lehner group D(N)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, ascending."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def moebius(n: int) -> int:
    if not is_squarefree(n):
        return 0
    return (-1) ** len(prime_factors(n))


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def primes_below(n: int) -> list[int]:
    return [p for p in range(2, n) if is_prime(p)]


def sturm_precision(N: int, k: int) -> int:
    """Default q-precision: ceil(k N prod(1+1/p) / 12) + 8."""
    index = Fraction(N)
    for p in prime_factors(N):
        index *= Fraction(p + 1, p)
    b = k * index / 12
    return -((-b.numerator) // b.denominator) + 8


@dataclass(frozen=True)
class Character:
    """A character of D(N), stored as its signs on the primes dividing N."""

    N: int
    signs: tuple[tuple[int, int], ...]  # ((p, +-1), ...) sorted by p

    @classmethod
    def from_map(cls, N: int, signs: dict) -> "Character":
        ps = prime_factors(N)
        if sorted(int(p) for p in signs) != ps:
            raise ValueError(f"character for N={N} needs signs on {ps}")
        return cls(N, tuple((p, int(signs[p] if p in signs else signs[str(p)])) for p in ps))

    @classmethod
    def trivial(cls, N: int) -> "Character":
        return cls(N, tuple((p, 1) for p in prime_factors(N)))

    @classmethod
    def from_sign(cls, p: int, s: int) -> "Character":
        return cls(p, ((p, s),))

    def __call__(self, d: int) -> int:
        v = 1
        for p, s in self.signs:
            if d % p == 0:
                v *= s
        return v

    def __mul__(self, other: "Character") -> "Character":
        assert self.N == other.N
        return Character(self.N, tuple((p, s * t) for (p, s), (_, t) in zip(self.signs, other.signs)))

    def restrict(self, M: int) -> "Character":
        return Character(M, tuple((p, s) for p, s in self.signs if M % p == 0))

    def is_trivial(self) -> bool:
        return all(s == 1 for _, s in self.signs)

    def as_dict(self) -> dict[str, int]:
        return {str(p): s for p, s in self.signs}

    def label(self) -> str:
        if not self.signs:
            return "1"
        return ",".join("+" if s > 0 else "-" for _, s in self.signs)

    def __repr__(self):
        return f"Character(N={self.N}, {self.label()})"


def all_characters(N: int) -> list[Character]:
    """The 2^t characters of D(N); ordering: signs (+,...,+) first."""
    ps = prime_factors(N)
    return [Character(N, tuple(zip(ps, ss))) for ss in product((1, -1), repeat=len(ps))]


def num_prime_factors(N: int) -> int:
    return len(prime_factors(N))


def euler_index(N: int) -> int:
    """Index of Gamma_0(N) in SL2(Z) for squarefree N."""
    return prod(p + 1 for p in prime_factors(N))
