"""Reduced ladder Hamiltonian over the pair-transfer states of 2N dressed ions.

The model couples 2N three-level ions (an auxiliary level plus a dressed
qubit doublet) through a collective Ising term g*Jx^2, where Jx is the
collective Pauli flip on the auxiliary<->down transition.  Starting from
all ions in the auxiliary level, the dynamics stays (up to a small,
separately quantified leakage) inside the N+1 states reached by moving
ions out of the auxiliary level two at a time while the qubit register
keeps zero x-projection.  Row/column p of the ladder matrix is the state
with p transferred pairs; p = 0 is the initial all-auxiliary state and
p = N is the target half-excited Dicke state.

Two independent constructions of the same matrix are provided:

* ``build_via_projection`` (authoritative): expand each ladder state over
  symmetric occupation states and apply the collective flip twice using
  bosonic matrix elements.
* ``build_via_closed_form``: per-element sums of expansion coefficients
  times single-spin Ising matrix elements (``v_element``).

A detuning axis enters as +delta per transferred pair on the diagonal;
``spectrum_scan``/``min_gap`` evaluate the eigenvalue curves and the
adiabatic gaps along it.

Units: energies are angular frequencies in rad/ms throughout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .spin_algebra import p_coeff

__all__ = [
    "EffectiveParams",
    "LadderMatrix",
    "SpectrumResult",
    "MinGapResult",
    "EigensolverError",
    "build_via_projection",
    "build_via_closed_form",
    "v_element",
    "detuning_diagonal",
    "spectrum_scan",
    "min_gap",
    "ladder_expansion",
    "apply_collective_flip",
]


class EigensolverError(RuntimeError):
    """Dense symmetric eigensolver failed to converge."""


@dataclass(frozen=True)
class EffectiveParams:
    """Couplings of the effective model.

    Parameters
    ----------
    n_pairs : int
        N; the total ion number is 2N.
    g : float
        Ising coefficient multiplying Jx^2, rad/ms.  The commonly quoted
        interaction strength chi equals 2*g.
    delta : float
        Ladder detuning, rad/ms; enters as +delta per transferred pair.
    omega1 : float, optional
        Dressing Rabi frequency, rad/ms.  Not used by the ladder itself
        (the reduction assumes it dominates); consumed by the full-model
        oracle.  A warning is emitted when omega1 < 10*chi, outside the
        regime where the reduction is controlled.
    delta_r, delta_b, omega_a, omega_m, omega_lr, omega_lb : float, optional
        Descriptive laboratory frequencies (sideband detunings, carrier,
        mode and laser frequencies) that map onto g and delta.  Stored
        for bookkeeping only.
    """

    n_pairs: int
    g: float
    delta: float = 0.0
    omega1: float | None = None
    delta_r: float | None = None
    delta_b: float | None = None
    omega_a: float | None = None
    omega_m: float | None = None
    omega_lr: float | None = None
    omega_lb: float | None = None

    def __post_init__(self):
        if self.n_pairs < 1:
            raise ValueError(f"n_pairs must be >= 1, got {self.n_pairs}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        if self.omega1 is not None and self.omega1 < 10.0 * self.chi:
            warnings.warn(
                f"omega1 = {self.omega1:g} rad/ms is below 10*chi = {10 * self.chi:g}; "
                "the ladder reduction assumes a dominant dressing field",
                stacklevel=2,
            )

    @property
    def chi(self) -> float:
        """Interaction strength chi = 2*g, rad/ms."""
        return 2.0 * self.g

    @property
    def n_ions(self) -> int:
        return 2 * self.n_pairs

    @classmethod
    def from_chi(cls, n_pairs: int, chi: float, delta: float = 0.0, omega1: float | None = None):
        return cls(n_pairs=n_pairs, g=chi / 2.0, delta=delta, omega1=omega1)


@dataclass(frozen=True)
class LadderMatrix:
    """Real symmetric (N+1)x(N+1) Hamiltonian over pair index p = 0..N, rad/ms."""

    n_pairs: int
    elements: np.ndarray

    def __post_init__(self):
        n = self.n_pairs + 1
        m = self.elements
        if m.shape != (n, n):
            raise ValueError(f"expected {(n, n)} matrix, got {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("ladder matrix must be exactly symmetric")
        band = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :]) >= 2
        if np.any(m[band] != 0.0):
            raise ValueError("ladder matrix must be exactly tridiagonal in pair index")


def ladder_expansion(n_pairs: int, p: int) -> dict[tuple[int, int, int], float]:
    """Ladder state p over symmetric occupations (n_aux, n_down, n_up).

    The qubit register of the p-th ladder state holds 2p ions in the zero
    x-projection state of spin p; its z-basis amplitudes are p_coeff(p, m)
    with occupations n_down = p - m, n_up = p + m.
    """
    n_ions = 2 * n_pairs
    out = {}
    for m in range(-p, p + 1):
        amp = p_coeff(p, m)
        if amp != 0.0:
            out[(n_ions - 2 * p, p - m, p + m)] = amp
    return out


def apply_collective_flip(vec: dict[tuple[int, int, int], float]) -> dict[tuple[int, int, int], float]:
    """Apply the collective auxiliary<->down Pauli flip in occupation space.

    Bosonic (symmetric-sector) matrix elements:
    |n_a, n_d> -> sqrt(n_a (n_d+1)) |n_a-1, n_d+1> + sqrt(n_d (n_a+1)) |n_a+1, n_d-1>.
    """
    out: dict[tuple[int, int, int], float] = {}
    for (na, nd, nu), amp in vec.items():
        if na > 0:
            key = (na - 1, nd + 1, nu)
            out[key] = out.get(key, 0.0) + amp * math.sqrt(na * (nd + 1))
        if nd > 0:
            key = (na + 1, nd - 1, nu)
            out[key] = out.get(key, 0.0) + amp * math.sqrt(nd * (na + 1))
    return out


def detuning_diagonal(pair_index: int, delta: float, n_pairs: int) -> float:
    """Sweep energy of ladder state p: +delta per transferred pair.

    The sign places the initial p = 0 state highest for strongly negative
    delta and the target p = N state highest for strongly positive delta,
    so an upward sweep carries the top adiabatic curve from start to
    target.
    """
    if pair_index < 0 or pair_index > n_pairs:
        raise ValueError(f"pair index {pair_index} outside 0..{n_pairs}")
    return delta * pair_index


def build_via_projection(params: EffectiveParams) -> LadderMatrix:
    """Ladder matrix by projecting g*Jx^2 onto the pair-transfer states.

    Authoritative construction.  Each ladder state is expanded over
    symmetric occupation states, the collective flip is applied twice,
    and the overlaps with neighboring ladder states are read off.  The
    flip changes the auxiliary occupation by +-1, so Jx^2 connects pair
    indices differing by at most one: the matrix is exactly tridiagonal.
    Total cost O(N^2).
    """
    n = params.n_pairs
    size = n + 1
    vecs = [ladder_expansion(n, p) for p in range(size)]
    elements = np.zeros((size, size))
    for p in range(size):
        image = apply_collective_flip(apply_collective_flip(vecs[p]))
        for q in (p - 1, p):
            if q < 0:
                continue
            val = params.g * sum(a * image.get(k, 0.0) for k, a in vecs[q].items())
            elements[q, p] = val
            elements[p, q] = val
        elements[p, p] += detuning_diagonal(p, params.delta, n)
    return LadderMatrix(n_pairs=n, elements=elements)


def v_element(n: int, l: int, k: int) -> float:
    """Ising matrix element <J, l| Jx Jx |J, k> for a single spin J = n/2.

    Jx is the collective Pauli flip (twice the spin operator), so values
    are 4x the spin-convention elements.  From ladder-operator closed
    forms:

    * diagonal (l == k):       2 (J(J+1) - k^2)
    * off-diagonal (l == k+-2): sqrt[(J(J+1) - k(k+-1)) (J(J+1) - (k+-1)(k+-2))]
    * zero otherwise (Jx^2 changes the projection by 0 or +-2 only).
    """
    if n < 0 or n % 2:
        raise ValueError(f"subsystem size n must be a non-negative even integer, got {n}")
    j = n // 2
    if abs(l) > j or abs(k) > j:
        raise ValueError(f"projections ({l}, {k}) exceed J = {j}")
    jj = j * (j + 1)
    if l == k:
        return 2.0 * (jj - k * k)
    if abs(l - k) == 2:
        step = (l - k) // 2  # +1 or -1
        return math.sqrt((jj - k * (k + step)) * (jj - (k + step) * (k + 2 * step)))
    return 0.0


def build_via_closed_form(params: EffectiveParams) -> LadderMatrix:
    """Ladder matrix from per-element sums over expansion coefficients.

    For the ladder state with s = p transferred pairs and N_a = 2N - 2p
    auxiliary ions, each z-basis term (s, m) lives in an auxiliary+down
    subsystem of n = 2N - s - m ions with projection k = n/2 - N_a, and

        H[p, p]   = g * sum_m p(s, m)^2           V(n)_{k, k}     + delta*p
        H[p+1, p] = g * sum_m p(s, m) p(s+1, m-1) V(n)_{k+2, k}

    (the flip moves two quanta auxiliary -> down, raising k by 2 and the
    register spin by 1; the up-occupation s + m is untouched, which fixes
    the pairing m' = m - 1).  Signed coefficient products are kept so the
    result matches ``build_via_projection`` element-wise, not just in
    magnitude.  m runs over s, s-2, ..., -s; other parities have
    p(s, m) = 0.
    """
    n_pairs = params.n_pairs
    n_ions = 2 * n_pairs
    size = n_pairs + 1
    elements = np.zeros((size, size))
    for p in range(size):
        s = p
        n_aux = n_ions - 2 * p
        diag = 0.0
        for m in range(s, -s - 1, -2):
            c = p_coeff(s, m)
            if c == 0.0:
                continue
            sub = n_ions - s - m
            if sub == 0:
                continue  # empty auxiliary+down subsystem contributes nothing
            k = sub // 2 - n_aux
            diag += c * c * v_element(sub, k, k)
        elements[p, p] = params.g * diag + detuning_diagonal(p, params.delta, n_pairs)
        if p == n_pairs:
            continue
        off = 0.0
        for m in range(s, -s - 1, -2):
            c = p_coeff(s, m) * p_coeff(s + 1, m - 1)
            if c == 0.0:
                continue
            sub = n_ions - s - m
            k = sub // 2 - n_aux
            off += c * v_element(sub, k + 2, k)
        elements[p + 1, p] = params.g * off
        elements[p, p + 1] = params.g * off
    return LadderMatrix(n_pairs=n_pairs, elements=elements)


# --------------------------------------------------------------------------
# spectra along the detuning axis
# --------------------------------------------------------------------------


@dataclass
class SpectrumResult:
    """Eigenvalue curves of the ladder Hamiltonian along a detuning grid.

    ``energies[i]`` holds the sorted eigenvalues at ``delta_grid[i]``;
    ``permutations[i][c]`` maps adiabatic curve label c (sorted order at
    the first grid point) to its sorted position at grid point i, tracked
    by eigenvector overlap.  ``gaps[i][c]`` is the distance from curve c
    to its nearest neighbor.
    """

    params: EffectiveParams
    delta_grid: np.ndarray
    energies: np.ndarray
    permutations: np.ndarray
    gaps: np.ndarray = field(init=False)

    def __post_init__(self):
        sorted_gaps = _nearest_neighbor_gaps(self.energies)
        self.gaps = np.take_along_axis(sorted_gaps, self.permutations, axis=1)

    @property
    def n_curves(self) -> int:
        return self.energies.shape[1]

    @property
    def tracked(self) -> np.ndarray:
        """Energies re-indexed by adiabatic curve label."""
        return np.take_along_axis(self.energies, self.permutations, axis=1)


@dataclass(frozen=True)
class MinGapResult:
    """Location and value of the minimal gap; ``at_boundary`` flags a grid-edge minimum."""

    delta_at_min: float
    gap: float
    at_boundary: bool = False


def _nearest_neighbor_gaps(energies: np.ndarray) -> np.ndarray:
    diffs = np.diff(energies, axis=1)
    gaps = np.empty_like(energies)
    gaps[:, 0] = diffs[:, 0]
    gaps[:, -1] = diffs[:, -1]
    if energies.shape[1] > 2:
        gaps[:, 1:-1] = np.minimum(diffs[:, :-1], diffs[:, 1:])
    return gaps


def _hamiltonian_at(params: EffectiveParams, ising: np.ndarray, delta: float) -> np.ndarray:
    pairs = np.arange(params.n_pairs + 1, dtype=float)
    return ising + np.diag(delta * pairs)


def _eigh_checked(matrix: np.ndarray, grid_index: int):
    try:
        return np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed at grid index {grid_index}") from exc


def spectrum_scan(params: EffectiveParams, delta_grid) -> SpectrumResult:
    """Full eigendecomposition at each detuning with adiabatic curve tracking.

    Curves are matched between neighboring grid points by maximal
    eigenvector overlap (Hungarian assignment on squared overlaps, ties
    broken by eigenvalue proximity); sorted-order tracking would mislabel
    curves across avoided crossings.

    Parameters
    ----------
    params : EffectiveParams
        ``params.delta`` is ignored; the grid supplies the detuning axis.
    delta_grid : array_like
        Strictly monotone sequence of detunings, rad/ms.
    """
    grid = np.asarray(delta_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("delta_grid must be a 1-D sequence with at least two points")
    steps = np.diff(grid)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise ValueError("delta_grid must be strictly monotone")

    base = build_via_projection(
        EffectiveParams(n_pairs=params.n_pairs, g=params.g, delta=0.0)
    ).elements
    size = params.n_pairs + 1
    energies = np.empty((grid.size, size))
    perms = np.empty((grid.size, size), dtype=int)

    prev_vecs = None
    prev_vals = None
    prev_perm = np.arange(size)
    scale = max(abs(params.g), 1.0)
    for i, d in enumerate(grid):
        vals, vecs = _eigh_checked(_hamiltonian_at(params, base, d), i)
        energies[i] = vals
        if prev_vecs is None:
            perms[i] = prev_perm
        else:
            overlap = np.abs(prev_vecs.T @ vecs)
            cost = -(overlap**2) + 1e-9 * np.abs(prev_vals[:, None] - vals[None, :]) / scale
            rows, cols = linear_sum_assignment(cost)
            match = np.empty(size, dtype=int)
            match[rows] = cols  # sorted index at i-1 -> sorted index at i
            perms[i] = match[prev_perm]
        prev_vecs, prev_vals, prev_perm = vecs, vals, perms[i]
    return SpectrumResult(params=params, delta_grid=grid, energies=energies, permutations=perms)


def min_gap(spectrum: SpectrumResult, which: str = "highest") -> MinGapResult:
    """Minimal separation of the extreme tracked curve from its neighbor.

    The extreme curves coincide with the sorted extremes (the ladder is an
    irreducible Jacobi matrix, so its spectrum is simple everywhere).  The
    discrete grid minimum is refined by local grid subdivision, re-solving
    the eigenproblem on shrinking brackets until the gap estimate changes
    by less than 0.1%.  A minimum on the grid edge is refined within the
    edge bracket and flagged ``at_boundary`` (the true minimum may lie
    outside the scanned window).
    """
    if which not in ("highest", "lowest"):
        raise ValueError(f"which must be 'highest' or 'lowest', got {which!r}")
    if spectrum.n_curves < 2:
        raise ValueError("need at least two curves for a gap")

    params = spectrum.params
    base = build_via_projection(
        EffectiveParams(n_pairs=params.n_pairs, g=params.g, delta=0.0)
    ).elements

    def gap_at(delta: float) -> float:
        vals = np.linalg.eigvalsh(_hamiltonian_at(params, base, delta))
        return vals[-1] - vals[-2] if which == "highest" else vals[1] - vals[0]

    grid = spectrum.delta_grid
    if which == "highest":
        coarse = spectrum.energies[:, -1] - spectrum.energies[:, -2]
    else:
        coarse = spectrum.energies[:, 1] - spectrum.energies[:, 0]
    i = int(np.argmin(coarse))
    at_boundary = i == 0 or i == grid.size - 1
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]

    best_delta = grid[i]
    best_gap = coarse[i]
    for _ in range(60):
        pts = np.linspace(lo, hi, 17)
        gaps = np.array([gap_at(d) for d in pts])
        j = int(np.argmin(gaps))
        new_delta, new_gap = pts[j], gaps[j]
        converged = abs(new_gap - best_gap) < 1e-3 * max(abs(best_gap), 1e-300)
        best_delta, best_gap = float(new_delta), float(new_gap)
        lo, hi = pts[max(j - 1, 0)], pts[min(j + 1, 16)]
        if converged:
            break
    return MinGapResult(delta_at_min=best_delta, gap=best_gap, at_boundary=at_boundary)
