"""Photon-number decomposition of phase-randomized multi-mode coherent states.

Averaging a multi-mode coherent state over a uniform global phase is applied
analytically: the phase integral enforces equality of total photon number
between ket and bra (a Kronecker delta), so the mixed state is an exact
direct sum over N-photon blocks, each block a Poisson weight p_N times a
rank-1 projector.  Matrices are therefore stored block-by-block and never as
one giant dense array.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fock, symmetric
from .fock import CapacityError
from .symmetric import GramMatrix, SymmetricFamilySpec

#: Default Poisson tail mass at which the photon-number series is truncated.
DEFAULT_TAIL_TOL = 1e-12

#: Hard cap on the truncation photon number, whatever the tail demands.
DEFAULT_N_CAP = 150


def default_tail_tol() -> float:
    """Library-wide tail tolerance, overridable via QSD_TAIL_TOL."""
    raw = os.environ.get("QSD_TAIL_TOL")
    if raw is None:
        return DEFAULT_TAIL_TOL
    value = float(raw)
    if not 0.0 < value < 1.0:
        raise ValueError(f"QSD_TAIL_TOL={raw!r} outside (0, 1)")
    return value


@dataclass(frozen=True)
class CoherentStateVector:
    """Mode amplitudes alpha_1..alpha_M of a pure multi-mode coherent state."""

    amplitudes: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "amplitudes", tuple(complex(a) for a in self.amplitudes)
        )
        if not self.amplitudes:
            raise ValueError("need at least one mode")

    @property
    def modes(self) -> int:
        return len(self.amplitudes)

    @property
    def mean_photons(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes))


def poisson_weights(mean: float, n_max: int) -> np.ndarray:
    """p_N = exp(-mean) mean^N / N! for N = 0..n_max."""
    if mean < 0:
        raise ValueError(f"negative mean photon number {mean}")
    if mean == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    log_p = (
        -mean
        + np.arange(n_max + 1) * math.log(mean)
        - fock.log_factorials(n_max)[: n_max + 1]
    )
    return np.exp(log_p)


def truncation_photon_number(
    mean: float, tail_tol: float, n_cap: int = DEFAULT_N_CAP
) -> int:
    """Smallest n_max whose Poisson tail mass beyond it is below tail_tol."""
    if not 0.0 < tail_tol < 1.0:
        raise ValueError(f"tail_tol {tail_tol} outside (0, 1)")
    if mean == 0.0:
        return 0
    term = math.exp(-mean)
    cumulative = term
    n = 0
    while 1.0 - cumulative >= tail_tol:
        n += 1
        if n > n_cap:
            raise CapacityError(
                f"Poisson truncation for mean {mean} exceeds cap {n_cap} "
                f"at tail tolerance {tail_tol}"
            )
        term *= mean / n
        cumulative += term
    return n


@dataclass(frozen=True)
class SubspaceOverlapSeries:
    """Per-photon-number weights and Gram matrices of a coherent family."""

    family_tag: str
    n_max: int
    weights: np.ndarray
    per_n_gram: tuple[GramMatrix, ...]
    tail_mass: float


def decompose(
    spec: SymmetricFamilySpec,
    tail_tol: float | None = None,
    n_cap: int = DEFAULT_N_CAP,
) -> SubspaceOverlapSeries:
    """Photon-number decomposition of one phase-randomized coherent family.

    Truncates at the smallest N whose Poisson tail is below `tail_tol` and
    builds the Gram matrix of the four (or two) pure N-photon states in each
    retained subspace.
    """
    if not spec.is_coherent:
        raise ValueError(f"{spec.family_tag} has no Fock structure")
    if tail_tol is None:
        tail_tol = default_tail_tol()
    mean = spec.mean_photons
    n_max = truncation_photon_number(mean, tail_tol, n_cap)
    weights = poisson_weights(mean, n_max)
    grams = tuple(
        symmetric.gram_matrix(symmetric.subspace_states(spec, n))
        for n in range(n_max + 1)
    )
    return SubspaceOverlapSeries(
        family_tag=spec.family_tag,
        n_max=n_max,
        weights=weights,
        per_n_gram=grams,
        tail_mass=float(1.0 - weights.sum()),
    )


def subspace_state_blocks(
    spec: SymmetricFamilySpec,
    tail_tol: float | None = None,
    n_cap: int = DEFAULT_N_CAP,
) -> tuple[np.ndarray, list[list[np.ndarray]]]:
    """Poisson weights plus the per-N pure state vectors of a family.

    Returns (weights, blocks) with blocks[N] the list of L state vectors in
    the N-photon subspace basis, label order matching spec.labels.
    """
    if tail_tol is None:
        tail_tol = default_tail_tol()
    n_max = truncation_photon_number(spec.mean_photons, tail_tol, n_cap)
    weights = poisson_weights(spec.mean_photons, n_max)
    blocks = [symmetric.subspace_states(spec, n) for n in range(n_max + 1)]
    return weights, blocks


def closed_form_gram_row(family_tag: str, photons: int) -> np.ndarray:
    """First Gram row of the N-photon subspace states, in closed form.

    Independent of the numerically computed Gram matrices: overlaps follow
    from multinomial sums of the per-mode phases.  All four states coincide
    with the vacuum at N = 0, so that row is all ones.
    """
    n = photons
    if n < 0:
        raise ValueError(f"negative photon number {n}")
    if family_tag == "two_mode":
        return np.array([1.0, 1.0 if n == 0 else 0.0], dtype=np.complex128)
    if n == 0:
        return np.ones(4, dtype=np.complex128)
    if family_tag == "three_mode":
        f = 3.0**-n
        g = f if n % 2 == 0 else -f
        return np.array([1.0, f, g, f], dtype=np.complex128)
    if family_tag == "four_mode":
        return np.array([1.0, 0.0, 0.0, 0.0], dtype=np.complex128)
    if family_tag == "phase_encoded":
        f = 2.0 ** (-n / 2.0) * np.exp(1j * n * np.pi / 4.0)
        return np.array([1.0, f, 0.0, np.conj(f)], dtype=np.complex128)
    raise ValueError(f"unknown coherent family {family_tag!r}")


# ---------------------------------------------------------------------------
# block-diagonal density matrices


@dataclass(frozen=True)
class BlockDiagonalMatrix:
    """Hermitian matrix stored as one dense block per photon number.

    Block N lives in the canonical N-photon subspace basis; off-block entries
    are identically zero, so they are never materialised unless `to_dense`
    is called for a small embedding.
    """

    modes: int
    blocks: tuple[np.ndarray, ...]

    @property
    def n_max(self) -> int:
        return len(self.blocks) - 1

    @property
    def dimension(self) -> int:
        return sum(b.shape[0] for b in self.blocks)

    def trace(self) -> float:
        return float(sum(np.trace(b).real for b in self.blocks))

    def to_dense(self, dimension_cap: int = 10_000) -> np.ndarray:
        """Embed into the direct-sum basis (blocks in photon-number order)."""
        dim = self.dimension
        if dim > dimension_cap:
            raise CapacityError(f"dense embedding of dimension {dim} > cap")
        out = np.zeros((dim, dim), dtype=np.complex128)
        offset = 0
        for block in self.blocks:
            d = block.shape[0]
            out[offset : offset + d, offset : offset + d] = block
            offset += d
        return out


def mixed_state_matrix(
    spec: SymmetricFamilySpec, which: str, n_max: int
) -> BlockDiagonalMatrix:
    """Phase-randomized density matrix of one family member, truncated at n_max.

    Block N equals p_N |psi_N><psi_N| with p_N the Poisson weight, so the
    trace is the retained mass 1 - tail.
    """
    if not spec.is_coherent:
        raise ValueError(f"{spec.family_tag} has no Fock structure")
    labels = spec.labels
    if which not in labels:
        raise ValueError(f"label {which!r} not in {labels}")
    k = labels.index(which)
    weights = poisson_weights(spec.mean_photons, n_max)
    blocks = []
    for n in range(n_max + 1):
        psi = symmetric.subspace_states(spec, n)[k]
        blocks.append(weights[n] * np.outer(psi, psi.conj()))
    return BlockDiagonalMatrix(spec.modes, tuple(blocks))


def coherent_subspace_decomposition(
    state: CoherentStateVector,
    tail_tol: float | None = None,
    n_cap: int = DEFAULT_N_CAP,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Generic per-N pure states of an arbitrary phase-randomized coherent state.

    Works for any amplitude vector, not just the named families: component N
    of the pure state is the coherent amplitude vector over the N-photon
    basis, normalized; its squared norm is the Poisson weight p_N.
    """
    if tail_tol is None:
        tail_tol = default_tail_tol()
    n_max = truncation_photon_number(state.mean_photons, tail_tol, n_cap)
    weights = poisson_weights(state.mean_photons, n_max)
    states = []
    for n in range(n_max + 1):
        basis = fock.enumerate_subspace(state.modes, n)
        vec = fock.subspace_amplitudes(state.amplitudes, basis)
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise ValueError(f"zero amplitude in the {n}-photon subspace")
        states.append(vec / norm)
    return weights, states


def phase_randomized_state(
    state: CoherentStateVector, n_max: int
) -> BlockDiagonalMatrix:
    """Phase-randomized density matrix of a generic coherent state."""
    weights = poisson_weights(state.mean_photons, n_max)
    blocks = []
    for n in range(n_max + 1):
        basis = fock.enumerate_subspace(state.modes, n)
        vec = fock.subspace_amplitudes(state.amplitudes, basis)
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            blocks.append(np.zeros((basis.dimension, basis.dimension), dtype=np.complex128))
            continue
        vec = vec / norm
        blocks.append(weights[n] * np.outer(vec, vec.conj()))
    return BlockDiagonalMatrix(state.modes, tuple(blocks))


# ---------------------------------------------------------------------------
# symmetry unitaries restricted to one subspace


def subspace_symmetry_unitary(family_tag: str, photons: int) -> np.ndarray:
    """Generating unitary of a coherent family, restricted to the N-photon block.

    Each is a signed mode permutation or a mode phase and therefore conserves
    total photon number; its fourth power (square for the two-mode family) is
    the identity on the block.
    """
    mode_counts = symmetric.COHERENT_FAMILY_MODES
    if family_tag not in mode_counts:
        raise ValueError(f"unknown coherent family {family_tag!r}")
    basis = fock.enumerate_subspace(mode_counts[family_tag], photons)
    dim = basis.dimension
    u = np.zeros((dim, dim), dtype=np.complex128)
    for col, occ in enumerate(basis.index_list):
        if family_tag == "two_mode":
            # sign flip of the second mode
            j, k = occ
            u[col, col] = -1.0 if k % 2 else 1.0
        elif family_tag == "three_mode":
            # |a,b,c> -> (-1)^b |a,c,b>
            a, b, c = occ
            row = basis.index((a, c, b))
            u[row, col] = -1.0 if b % 2 else 1.0
        elif family_tag == "four_mode":
            # cyclic mode shift |a,b,c,d> -> |b,c,d,a>
            a, b, c, d = occ
            row = basis.index((b, c, d, a))
            u[row, col] = 1.0
        else:  # phase_encoded: i^k phase on the second mode
            j, k = occ
            u[col, col] = _ipow(k)
    return u


def _ipow(k: int) -> complex:
    return (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)[k % 4]
