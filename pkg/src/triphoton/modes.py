"""Discrete frequency-bin models of the two triphoton states.

A coarse frequency grid turns each state into a small amplitude tensor,
which makes the loss of one photon an exact partial trace on a finite
Hilbert space. Frequency conservation fixes the undetected photon's bin:
the three-mode state keeps a joint amplitude A[i, k] over the bins of
photons 1 and 3, the degenerate-pair state a single amplitude B[i] over
the bin shared by the pair. Detection filters are folded into the
amplitudes, so the discrete state and the continuous correlators describe
the same post-filter physics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError
from .qubits import DensityMatrix
from .spectra import (
    FilterSpec,
    PhaseMatchConfig,
    detuning_ghz,
    detuning_w,
    filter_eval,
    phi,
)

KIND_W = "w111"
KIND_GHZ = "ghz12"


@dataclass(frozen=True)
class ModeGrid:
    """Uniform frequency bins with centers from nu_min to nu_max (rad/ps)."""

    n_bins: int
    nu_min: float
    nu_max: float

    def __post_init__(self) -> None:
        if int(self.n_bins) != self.n_bins or self.n_bins < 2:
            raise InvalidArgumentError(f"n_bins must be an integer >= 2, got {self.n_bins!r}")
        if not (math.isfinite(self.nu_min) and math.isfinite(self.nu_max)):
            raise InvalidArgumentError("mode grid bounds must be finite")
        if not self.nu_max > self.nu_min:
            raise InvalidArgumentError(f"nu_max must exceed nu_min, got [{self.nu_min}, {self.nu_max}]")
        object.__setattr__(self, "n_bins", int(self.n_bins))
        object.__setattr__(self, "nu_min", float(self.nu_min))
        object.__setattr__(self, "nu_max", float(self.nu_max))

    def centers(self) -> np.ndarray:
        return np.linspace(self.nu_min, self.nu_max, self.n_bins)

    @property
    def bin_width(self) -> float:
        return (self.nu_max - self.nu_min) / (self.n_bins - 1)

    def nearest_bin(self, nu) -> tuple[np.ndarray, np.ndarray]:
        """Nearest bin index and an on-grid mask.

        A frequency more than half a bin outside [nu_min, nu_max] is
        off-grid; exactly half a bin out still rounds to the edge bin.
        Half-bin ties round toward the higher bin, with a relative guard
        so the choice does not flip on last-ulp noise in the division
        (on symmetric grids with an even bin count, every conservation
        frequency is such a tie).
        """
        arr = np.asarray(nu, dtype=float)
        x = (arr - self.nu_min) / self.bin_width
        eps = 1e-9
        on = (x > -0.5 - eps) & (x < self.n_bins - 0.5 + eps)
        idx = np.floor(x + 0.5 + eps).astype(int)
        idx = np.clip(idx, 0, self.n_bins - 1)
        return np.where(on, idx, -1), on


@dataclass(frozen=True)
class TriphotonTensor:
    """Discretized joint spectral amplitude of one triphoton state.

    For the three-mode state, ``amplitudes`` is A[i, k] over the photon-1
    and photon-3 bins and ``partner_bins`` holds the conservation bin of
    photon 2. For the degenerate-pair state, ``amplitudes`` is B[i] over
    the shared pair bin and ``partner_bins`` the bin of the lone photon.
    Off-grid combinations carry amplitude 0 and partner bin -1.
    """

    kind: str
    amplitudes: np.ndarray
    partner_bins: np.ndarray
    grid: ModeGrid
    normalized: bool = True

    def __post_init__(self) -> None:
        if self.kind not in (KIND_W, KIND_GHZ):
            raise InvalidArgumentError(f"unknown state kind {self.kind!r}")
        amps = np.asarray(self.amplitudes, dtype=complex)
        bins = np.asarray(self.partner_bins, dtype=int)
        n = self.grid.n_bins
        want = (n, n) if self.kind == KIND_W else (n,)
        if amps.shape != want or bins.shape != want:
            raise InvalidArgumentError(f"amplitude shape {amps.shape} does not match grid ({want})")
        if np.any((bins < -1) | (bins >= n)):
            raise InvalidArgumentError("partner bins must lie on the grid or be -1")
        if np.any((bins < 0) & (amps != 0)):
            raise InvalidArgumentError("off-grid entries must carry zero amplitude")
        if self.normalized:
            norm2 = float(np.sum(amps.real**2 + amps.imag**2))
            if abs(norm2 - 1.0) > 1e-12:
                raise InvalidArgumentError(f"norm^2 deviates from 1 by {abs(norm2 - 1.0):.3e}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "partner_bins", bins)


def _normalize(amps: np.ndarray) -> np.ndarray:
    norm2 = float(np.sum(amps.real**2 + amps.imag**2))
    if norm2 <= 0.0:
        raise DegenerateInputError("all amplitudes are zero; the grid misses the state's support")
    return amps / math.sqrt(norm2)


def build_w_discrete(cfg: PhaseMatchConfig, filters: tuple[FilterSpec, FilterSpec, FilterSpec],
                     grid: ModeGrid) -> TriphotonTensor:
    """Three-mode state on the bin grid.

    A[i, k] carries the filters of all three arms and the longitudinal
    envelope; photon 2 sits in the bin nearest to -nu1 - nu3, and
    combinations whose conservation frequency falls off the grid are
    dropped before normalization.
    """
    f1, f2, f3 = filters
    nu = grid.centers()
    nu2 = -(nu[:, None] + nu[None, :])
    partner, on = grid.nearest_bin(nu2)
    amps = (filter_eval(f1, nu)[:, None]
            * filter_eval(f3, nu)[None, :]
            * filter_eval(f2, nu2)
            * phi(detuning_w(nu[:, None], nu[None, :], cfg)))
    amps = np.where(on, amps, 0.0)
    return TriphotonTensor(KIND_W, _normalize(amps), partner, grid)


def build_ghz_discrete(cfg: PhaseMatchConfig, filters: tuple[FilterSpec, FilterSpec],
                       grid: ModeGrid) -> TriphotonTensor:
    """Degenerate-pair state on the bin grid.

    Both pair photons occupy bin i (the state is single-mode degenerate
    by construction), the pair filter enters squared, and the lone photon
    sits in the bin nearest to -2 nu1.
    """
    f1, f2 = filters
    nu = grid.centers()
    nu2 = -2.0 * nu
    partner, on = grid.nearest_bin(nu2)
    amps = (filter_eval(f1, nu) ** 2
            * filter_eval(f2, nu2)
            * phi(detuning_ghz(nu, cfg)))
    amps = np.where(on, amps, 0.0)
    return TriphotonTensor(KIND_GHZ, _normalize(amps), partner, grid)


def reduce_w_trace3(state: TriphotonTensor) -> DensityMatrix:
    """Trace photon 3 out of the three-mode state.

    Each photon-3 bin k heralds the (generally entangled) pair vector
    |chi_k> = sum_i A[i, k] |i>|j(i,k)>; the reduction is the mixture of
    their projectors over the n*n pair space.
    """
    if state.kind != KIND_W:
        raise InvalidArgumentError(f"expected a {KIND_W} tensor, got {state.kind!r}")
    n = state.grid.n_bins
    rho = np.zeros((n * n, n * n), dtype=complex)
    for k in range(n):
        col = state.amplitudes[:, k]
        bins = state.partner_bins[:, k]
        live = bins >= 0
        if not np.any(live):
            continue
        chi = np.zeros(n * n, dtype=complex)
        flat = np.arange(n)[live] * n + bins[live]
        np.add.at(chi, flat, col[live])
        rho += np.outer(chi, chi.conj())
    return DensityMatrix(rho, (n, n))


def reduce_ghz_trace_one_degenerate(state: TriphotonTensor) -> DensityMatrix:
    """Trace one photon of the degenerate pair.

    The surviving photon of the pair reveals its bin, so the remaining
    two-photon state is diagonal in the bin basis: an incoherent mixture
    of definite-mode product states with weights |B[i]|^2.
    """
    if state.kind != KIND_GHZ:
        raise InvalidArgumentError(f"expected a {KIND_GHZ} tensor, got {state.kind!r}")
    n = state.grid.n_bins
    rho = np.zeros((n * n, n * n), dtype=complex)
    weights = state.amplitudes.real**2 + state.amplitudes.imag**2
    for i in range(n):
        if state.partner_bins[i] < 0:
            continue
        flat = i * n + state.partner_bins[i]
        rho[flat, flat] += weights[i]
    return DensityMatrix(rho, (n, n))


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2): 1 for pure states, 1/d for the maximally mixed state."""
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))
