"""Exact combinatorics for collective-spin expansion coefficients.

The central quantity is ``p_coeff(n, m)``, the amplitude of the z-basis
Dicke state |n, m_z = m> inside the zero x-projection state |n, m_x = 0>
of a collective spin n.  The alternating sum in its definition suffers
catastrophic cancellation in floating point already around n ~ 40, so it
is evaluated in exact integer arithmetic and converted to a float only at
the very end.

``wigner_d_half_pi`` provides an independent oracle for |p_coeff| by
explicitly diagonalizing the spin-x operator and reading off the m_x = 0
eigenvector, with no combinatorics shared with ``p_coeff``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["SpinLabel", "binomial", "p_coeff", "wigner_d_half_pi"]


@dataclass(frozen=True)
class SpinLabel:
    """Total spin quantum number ``n`` and projection ``m`` of a qubit sub-register."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"spin quantum number must be non-negative, got n={self.n}")
        if abs(self.m) > self.n:
            raise ValueError(f"projection |m|={abs(self.m)} exceeds n={self.n}")


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k) = n! / (k! (n-k)!).

    Arbitrary-precision integers, no floating-point rounding; valid for
    any n (tested up to n = 600, ~180 digits).

    Raises
    ------
    ValueError
        If n or k is negative, or k > n.
    """
    if n < 0 or k < 0:
        raise ValueError(f"binomial requires non-negative arguments, got ({n}, {k})")
    if k > n:
        raise ValueError(f"binomial requires k <= n, got k={k} > n={n}")
    return math.comb(n, k)


def _alternating_sum(n: int, m: int) -> int:
    """Exact integer sum S(n, m) = sum_i (-1)^(n-m-i) C(n, n-m-i) C(n, i).

    By the substitution i -> n-m-i the sum picks up a factor (-1)^(n-m),
    so S vanishes identically for odd n-m (parity selection).
    """
    total = 0
    for i in range(0, n - m + 1):
        j = n - m - i
        if j > n:
            continue
        term = math.comb(n, j) * math.comb(n, i)
        total += -term if (j % 2) else term
    return total


def p_coeff(n: int, m: int) -> float:
    """Amplitude of |n, m_z = m> in the zero x-projection state of spin n.

        p(n, m) = 2^-n sqrt(C(2n, n) / C(2n, n-m)) * S(n, m)

    with S the alternating integer sum of ``_alternating_sum``.  The sum
    and the squared prefactor are combined as an exact rational before the
    final square root, so the result is accurate to full double precision
    for all n where the float does not overflow (n <~ 500).

    The sign is that of S(n, m); only |p| is fixed by the geometry, and
    all downstream observables are invariant under the m-dependent sign.

    Raises
    ------
    ValueError
        If |m| > n or n < 0.
    """
    SpinLabel(n, m)  # validate
    s = _alternating_sum(n, m)
    if s == 0:
        return 0.0
    square = Fraction(math.comb(2 * n, n), math.comb(2 * n, n - m)) * Fraction(s * s, 4**n)
    return math.copysign(math.sqrt(square), s)


def wigner_d_half_pi(n: int, m: int) -> float:
    """|<n, m_z = m | n, m_x = 0>| by explicit diagonalization.

    Builds the (2n+1)-dimensional spin-x matrix from ladder-operator
    matrix elements, diagonalizes it, and reads the m_x = 0 eigenvector
    component on |m_z = m>.  For integer spin the zero eigenvalue is
    simple (spin-x eigenvalues are the integers -n..n), so the eigenvector
    is unambiguous.

    Independent of ``p_coeff``: no shared combinatorics, magnitudes only.
    """
    SpinLabel(n, m)  # validate
    if n == 0:
        return 1.0
    dim = 2 * n + 1
    mz = np.arange(-n, n + 1, dtype=float)
    # <m+1| S+ |m> = sqrt(n(n+1) - m(m+1)); S_x = (S+ + S-)/2
    raising = np.sqrt(n * (n + 1) - mz[:-1] * (mz[:-1] + 1))
    sx = np.zeros((dim, dim))
    idx = np.arange(dim - 1)
    sx[idx + 1, idx] = raising / 2
    sx[idx, idx + 1] = raising / 2
    vals, vecs = np.linalg.eigh(sx)
    zero = int(np.argmin(np.abs(vals)))
    return float(abs(vecs[m + n, zero]))
