"""Entanglement and mixedness functionals for two-qubit states.

Entanglement side: the spin-flip spectrum, concurrence C, tangle tau = C^2,
and the entanglement of formation (a strictly increasing function of the
tangle, reported in bits).  Mixedness side: purity Tr[rho^2], the linear
entropy S_L = (4/3)(1 - Tr[rho^2]) ranging from 0 (pure) to 1 (maximally
mixed), and the von Neumann entropy in nats.  Negativity from the partial
transpose is carried along as an independent separability witness: for two
qubits it is nonzero exactly when the state is entangled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import psd_sqrt
from .states import DensityMatrix

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
# sigma_y (x) sigma_y: the anti-diagonal (-1, +1, +1, -1), real.
SPIN_FLIP_MAT = np.kron(_SIGMA_Y, _SIGMA_Y).real.astype(np.float64)


@dataclass(frozen=True)
class WoottersSpectrum:
    """The four spin-flip singular values, descending and non-negative."""

    lambdas: np.ndarray


@dataclass(frozen=True)
class MeasureReport:
    """All measures of one state.

    von_neumann is in nats, eof in bits; everything else is dimensionless.
    """

    purity: float
    linear_entropy: float
    von_neumann: float
    concurrence: float
    tangle: float
    eof: float
    negativity: float

    FIELDS = ("purity", "linear_entropy", "von_neumann", "concurrence", "tangle", "eof", "negativity")


def spin_flip(rho: DensityMatrix) -> np.ndarray:
    """The spin-flipped matrix (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y).

    Complex conjugation is taken in the computational basis.  The result is
    Hermitian PSD with the same spectrum as rho.
    """
    return SPIN_FLIP_MAT @ rho.mat.conj() @ SPIN_FLIP_MAT


def _lambdas(mat: np.ndarray) -> np.ndarray:
    # The lambdas are the square roots of the eigenvalues of the Hermitian
    # product sqrt(rho) rhotilde sqrt(rho) = A A^dag with
    # A = sqrt(rho) S conj(sqrt(rho)); taking singular values of A avoids the
    # sqrt blow-up of eigenvalue rounding noise on boundary-rank states.
    root = psd_sqrt(mat)
    flip_factor = root @ SPIN_FLIP_MAT @ root.conj()
    return np.linalg.svd(flip_factor, compute_uv=False)


def wootters_lambdas(rho: DensityMatrix) -> WoottersSpectrum:
    """Spin-flip singular values lambda_1 >= ... >= lambda_4 >= 0."""
    lam = _lambdas(rho.mat)
    lam.flags.writeable = False
    return WoottersSpectrum(lambdas=lam)


def concurrence(rho: DensityMatrix) -> float:
    lam = _lambdas(rho.mat)
    return max(float(lam[0] - lam[1] - lam[2] - lam[3]), 0.0)


def tangle(rho: DensityMatrix) -> float:
    """Concurrence squared; 1 for maximally entangled, 0 for separable."""
    c = concurrence(rho)
    return c * c


def binary_entropy(x: float) -> float:
    """Shannon entropy of a bit in bits, h(0) = h(1) = 0 by continuity."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def eof_from_tangle(tau: float) -> float:
    return binary_entropy((1.0 + math.sqrt(max(1.0 - tau, 0.0))) / 2.0)


def eof(rho: DensityMatrix) -> float:
    """Entanglement of formation in bits."""
    return eof_from_tangle(tangle(rho))


def purity(rho: DensityMatrix) -> float:
    mat = rho.mat
    return float(np.vdot(mat, mat).real)  # Tr[rho^2] for Hermitian rho


def linear_entropy(rho: DensityMatrix) -> float:
    return (4.0 / 3.0) * (1.0 - purity(rho))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-Tr[rho ln rho] in nats, with 0 ln 0 = 0."""
    evs = np.linalg.eigvalsh(rho.mat)
    total = 0.0
    for p in evs:
        # eigenvalues in [-PSD_CLAMP, 0] are boundary-rank rounding noise
        if p > 0.0:
            total -= float(p) * math.log(p)
    return total


def partial_transpose(rho: DensityMatrix) -> np.ndarray:
    """Transposition on the second qubit, in the computational basis."""
    return rho.mat.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def negativity(rho: DensityMatrix) -> float:
    """Sum of |negative eigenvalues| of the partial transpose.

    Independent of the spin-flip machinery; for two qubits positive
    negativity is equivalent to positive concurrence.
    """
    evs = np.linalg.eigvalsh(partial_transpose(rho))
    return abs(float(evs[evs < 0.0].sum()))  # abs also normalizes -0.0


def measure_report(rho: DensityMatrix) -> MeasureReport:
    pur = purity(rho)
    c = concurrence(rho)
    return MeasureReport(
        purity=pur,
        linear_entropy=(4.0 / 3.0) * (1.0 - pur),
        von_neumann=von_neumann_entropy(rho),
        concurrence=c,
        tangle=c * c,
        eof=eof_from_tangle(c * c),
        negativity=negativity(rho),
    )


def tangle_of_mat(mat: np.ndarray) -> float:
    """Tangle of a raw (already validated) matrix; hot-loop entry point."""
    lam = _lambdas(mat)
    c = max(float(lam[0] - lam[1] - lam[2] - lam[3]), 0.0)
    return c * c


def linear_entropy_of_mat(mat: np.ndarray) -> float:
    return (4.0 / 3.0) * (1.0 - float(np.vdot(mat, mat).real))


def tangle_batch(mats: np.ndarray) -> np.ndarray:
    """Vectorized tangle over a stack of density matrices of shape (..., 4, 4).

    Matches tangle() on each slice; used by exhaustive grid searches.
    """
    w, v = np.linalg.eigh(mats)
    np.clip(w, 0.0, None, out=w)
    roots = np.sqrt(w)
    vh = np.conj(np.swapaxes(v, -1, -2))
    root = (v * roots[..., None, :]) @ vh
    root = 0.5 * (root + np.conj(np.swapaxes(root, -1, -2)))
    flip_factor = root @ SPIN_FLIP_MAT.astype(np.complex128) @ np.conj(root)
    lam = np.linalg.svd(flip_factor, compute_uv=False)
    c = lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3]
    np.clip(c, 0.0, None, out=c)
    return c * c
