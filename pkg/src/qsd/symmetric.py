"""Symmetric state families and their Gram matrices.

A family {U^K |psi_0>} generated by a unitary with U^L = 1 has a circulant
Gram matrix, which the discrete Fourier transform diagonalises.  This module
builds the per-photon-number pure states of the coherent families, computes
Gram matrices numerically from state vectors, and evaluates the square-root
measurement success probability from Gram eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fock

#: Coherent families, in the cyclic label order their symmetry unitary induces.
COHERENT_FAMILY_MODES = {
    "two_mode": 2,
    "three_mode": 3,
    "four_mode": 4,
    "phase_encoded": 2,
}

FAMILY_TAGS = tuple(COHERENT_FAMILY_MODES) + ("qutrit", "ququart")

#: Tolerance for recognising the circulant pattern in a Gram matrix.
CIRCULANT_TOLERANCE = 1e-12

_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


class InconsistentGramError(ValueError):
    """A Gram matrix failed a positivity or reality requirement."""


@dataclass(frozen=True)
class SymmetricFamilySpec:
    """One of the six symmetric families, with its coherent amplitude |alpha|.

    `amplitude` is ignored for the finite-dimensional qutrit/ququart families.
    Labels follow the cyclic order of the generating unitary: ("0", "1") for
    the two-mode family and ("00", "01", "11", "10") for the four-state ones.
    """

    family_tag: str
    amplitude: float = 0.0

    def __post_init__(self) -> None:
        if self.family_tag not in FAMILY_TAGS:
            raise ValueError(f"unknown family {self.family_tag!r}")
        if self.amplitude < 0:
            raise ValueError(f"negative amplitude {self.amplitude}")

    @property
    def n_states(self) -> int:
        return 2 if self.family_tag == "two_mode" else 4

    @property
    def is_coherent(self) -> bool:
        return self.family_tag in COHERENT_FAMILY_MODES

    @property
    def modes(self) -> int:
        if not self.is_coherent:
            raise ValueError(f"{self.family_tag} has no mode structure")
        return COHERENT_FAMILY_MODES[self.family_tag]

    @property
    def labels(self) -> tuple[str, ...]:
        if self.family_tag == "two_mode":
            return ("0", "1")
        return ("00", "01", "11", "10")

    @property
    def mean_photons(self) -> float:
        return self.modes * self.amplitude**2

    def phase_exponents(self) -> tuple[tuple[int, ...], ...]:
        """Per-state, per-mode phase factors as powers of i.

        State k carries amplitude i^{t_m} * |alpha| in mode m.  Exponents are
        exact integers so number-basis phases stay bit-exact for any N.
        """
        tag = self.family_tag
        if tag == "two_mode":
            return ((0, 0), (0, 2))
        if tag == "three_mode":
            return ((0, 0, 0), (0, 0, 2), (0, 2, 2), (0, 2, 0))
        if tag == "four_mode":
            return ((0, 0, 0, 2), (0, 0, 2, 0), (0, 2, 0, 0), (2, 0, 0, 0))
        if tag == "phase_encoded":
            return ((0, 0), (0, 1), (0, 2), (0, 3))
        raise ValueError(f"{tag} has no mode structure")

    def amplitude_vectors(self) -> list[np.ndarray]:
        """Mode amplitude vectors of the coherent states, in label order."""
        alpha = self.amplitude
        return [
            np.array([_I_POWERS[t % 4] * alpha for t in exps])
            for exps in self.phase_exponents()
        ]

    def fixed_state_vectors(self) -> list[np.ndarray]:
        """Finite-dimensional state vectors of the qutrit/ququart families."""
        if self.family_tag == "qutrit":
            signs = [(1, 1, 1), (1, 1, -1), (1, -1, -1), (1, -1, 1)]
            return [np.array(s, dtype=np.complex128) / np.sqrt(3) for s in signs]
        if self.family_tag == "ququart":
            signs = [
                (1, 1, 1, -1),
                (1, 1, -1, 1),
                (1, -1, 1, 1),
                (-1, 1, 1, 1),
            ]
            return [np.array(s, dtype=np.complex128) / 2.0 for s in signs]
        raise ValueError(f"{self.family_tag} is a coherent family")


@dataclass(frozen=True)
class GramMatrix:
    """Pairwise-overlap matrix of a normalized state family.

    When `circulant` is set, entries[i][k] == generator_row[(k - i) mod L]
    exactly: the matrix was rebuilt from its first row after the cyclic
    pattern was detected within CIRCULANT_TOLERANCE.
    """

    size: int
    entries: np.ndarray
    circulant: bool
    generator_row: np.ndarray | None = field(default=None)


def subspace_states(spec: SymmetricFamilySpec, photons: int) -> list[np.ndarray]:
    """Normalized N-photon components of a coherent family, in basis order.

    All member states share the same per-mode magnitude, so within one
    photon-number subspace the state is independent of |alpha|: component
    phases come from the per-mode i-powers and magnitudes from 1/sqrt(prod n!),
    normalized numerically.
    """
    if not spec.is_coherent:
        raise ValueError(f"{spec.family_tag} has no Fock structure")
    if photons < 0:
        raise ValueError(f"negative photon number {photons}")
    basis = fock.enumerate_subspace(spec.modes, photons)
    occ = basis.occupation_array
    lf = fock.log_factorials(photons)
    log_mag = -0.5 * lf[occ].sum(axis=1)
    mag = np.exp(log_mag - log_mag.max())
    norm = np.linalg.norm(mag)
    states = []
    for exps in spec.phase_exponents():
        ipow = (occ @ np.array(exps, dtype=np.int64)) % 4
        phases = np.array(_I_POWERS)[ipow]
        states.append(mag * phases / norm)
    return states


def gram_matrix(states: Sequence[np.ndarray], norm_tol: float = 1e-10) -> GramMatrix:
    """Pairwise inner products <psi_i|psi_j>, with circulant detection."""
    size = len(states)
    dim = states[0].shape[0]
    for s in states:
        if s.shape != (dim,):
            raise ValueError("states must share one dimension")
        if abs(np.linalg.norm(s) - 1.0) > norm_tol:
            raise ValueError(f"state norm {np.linalg.norm(s):.12f} is not 1")
    entries = np.eye(size, dtype=np.complex128)
    for i in range(size):
        for j in range(i + 1, size):
            g = np.vdot(states[i], states[j])
            entries[i, j] = g
            entries[j, i] = g.conjugate()
    row = entries[0].copy()
    circulant = all(
        abs(entries[i, k] - row[(k - i) % size]) <= CIRCULANT_TOLERANCE
        for i in range(size)
        for k in range(size)
    )
    if circulant:
        # rebuild so the cyclic pattern holds exactly
        entries = np.array([[row[(k - i) % size] for k in range(size)] for i in range(size)])
        return GramMatrix(size, entries, True, row)
    return GramMatrix(size, entries, False, None)


def circulant_eigenvalues(
    g: GramMatrix, imag_tol: float = 1e-10, psd_tol: float = 1e-10
) -> np.ndarray:
    """Eigenvalues lambda_k = sum_l c_l omega^{kl} of a circulant Gram matrix.

    omega = exp(2 pi i / L); eigenvalues are returned in DFT index order
    k = 0..L-1.  A Hermitian PSD circulant must produce real non-negative
    values; residual imaginary parts below `imag_tol` are discarded and
    negatives within `psd_tol` of zero are clipped.
    """
    if not g.circulant:
        raise ValueError("Gram matrix is not circulant")
    size = g.size
    row = g.generator_row
    omega = np.exp(2j * np.pi / size)
    lam = np.array(
        [sum(row[l] * omega ** (k * l) for l in range(size)) for k in range(size)]
    )
    if np.max(np.abs(lam.imag)) >= imag_tol:
        raise InconsistentGramError(
            f"circulant eigenvalue has imaginary part {np.max(np.abs(lam.imag)):.3e}"
        )
    values = lam.real.copy()
    if values.min() < -psd_tol:
        raise InconsistentGramError(
            f"circulant eigenvalue {values.min():.3e} below -{psd_tol:.1e}"
        )
    # eigenvalues within the PSD tolerance of zero are numerically zero;
    # letting sqrt see their rounding noise would manufacture ~1e-8 of mass
    values[np.abs(values) < psd_tol] = 0.0
    return values


def gram_eigenvalues(g: GramMatrix, psd_tol: float = 1e-10) -> np.ndarray:
    """Eigenvalues of a Gram matrix: DFT route when circulant, dense otherwise."""
    if g.circulant:
        return circulant_eigenvalues(g, psd_tol=psd_tol)
    dec = fock.hermitian_eig(g.entries)
    values = dec.eigenvalues.copy()
    if values.size and values[-1] < -psd_tol:
        raise InconsistentGramError(
            f"Gram eigenvalue {values[-1]:.3e} below -{psd_tol:.1e}"
        )
    values[np.abs(values) < psd_tol] = 0.0
    return values


def srm_success_from_gram(g: GramMatrix) -> float:
    """Square-root-measurement success for L equiprobable pure states.

    Equals (1/L^2) (sum_k sqrt(lambda_k))^2 in terms of the Gram eigenvalues.
    """
    lam = gram_eigenvalues(g)
    total = float(np.sqrt(lam).sum())
    return (total / g.size) ** 2
