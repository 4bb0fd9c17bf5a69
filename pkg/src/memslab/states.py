"""Validated two-qubit density matrices and the named state families.

Basis ordering is the computational basis |00>, |01>, |10>, |11>.
Construction rejects unphysical input instead of repairing it: the frontier
certification in :mod:`memslab.frontier` depends on the sampler never being
silently "fixed up".  Only :func:`pure_from_vector` rescales its input, since
a vector normalization is unambiguous.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass

import numpy as np

from .linalg import HERM_TOL, PSD_CLAMP, NotHermitian, NotPSD, as_cmat

TRACE_TOL = 1e-10
NORM_TOL = 1e-12  # budget for the population/coherence sum of AnsatzParams


class TraceNotOne(ValueError):
    """Matrix trace differs from 1 beyond tolerance."""


class OutOfRange(ValueError):
    """A parameter lies outside its admissible interval."""


class ZeroVector(ValueError):
    """A state vector with vanishing norm cannot be normalized."""


class NormalizationViolated(ValueError):
    """Ansatz populations and coherence weight do not sum to one."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated 4x4 two-qubit state: Hermitian, unit trace, PSD.

    Instances are immutable; the wrapped array is read-only.  Build through
    :func:`make_density` or one of the family constructors.
    """

    mat: np.ndarray


def make_density(raw) -> DensityMatrix:
    """Validate ``raw`` as a physical two-qubit density matrix.

    Raises NotHermitian / TraceNotOne / NotPSD naming the violated invariant
    together with its magnitude.  No repair is attempted.
    """
    mat = as_cmat(raw)
    defect = float(np.linalg.norm(mat - mat.conj().T))
    if defect > HERM_TOL:
        raise NotHermitian(f"Hermiticity defect ||rho - rho^dag||_F = {defect:.3e} exceeds {HERM_TOL:.0e}")
    tr = complex(np.trace(mat))
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"|Tr rho - 1| = {abs(tr - 1.0):.3e} exceeds {TRACE_TOL:.0e}")
    low = float(np.linalg.eigvalsh(mat)[0])
    if low < -PSD_CLAMP:
        raise NotPSD(f"minimum eigenvalue {low:.3e} is below -{PSD_CLAMP:.0e}")
    mat = mat.copy()
    mat.flags.writeable = False
    return DensityMatrix(mat=mat)


class BellKind(enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


_BELL_VECTORS = {
    BellKind.PHI_PLUS: (1.0, 0.0, 0.0, 1.0),
    BellKind.PHI_MINUS: (1.0, 0.0, 0.0, -1.0),
    BellKind.PSI_PLUS: (0.0, 1.0, 1.0, 0.0),
    BellKind.PSI_MINUS: (0.0, 1.0, -1.0, 0.0),
}


def bell(kind: BellKind) -> DensityMatrix:
    """Rank-one projector onto the chosen Bell vector."""
    return pure_from_vector(np.array(_BELL_VECTORS[kind], dtype=np.complex128))


def maximally_mixed() -> DensityMatrix:
    return make_density(np.eye(4, dtype=np.complex128) / 4.0)


def pure_from_vector(psi) -> DensityMatrix:
    """Projector |psi><psi| / <psi|psi>; the only constructor that rescales."""
    vec = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if vec.shape != (4,):
        raise ValueError(f"expected 4 amplitudes, got {vec.shape}")
    norm = float(np.linalg.norm(vec))
    if norm < 1e-150:
        raise ZeroVector("state vector has vanishing norm")
    vec = vec / norm
    return make_density(np.outer(vec, vec.conj()))


def werner(gamma: float) -> DensityMatrix:
    """Mixture of the maximally mixed state with the Bell state |phi+>.

    rho = ((1 - gamma)/4) I + gamma |phi+><phi+|; entangled for gamma > 1/3.
    """
    if not 0.0 <= gamma <= 1.0:
        raise OutOfRange(f"werner weight gamma={gamma} outside [0, 1]")
    mat = np.eye(4, dtype=np.complex128) * ((1.0 - gamma) / 4.0)
    mat[0, 0] += gamma / 2.0
    mat[3, 3] += gamma / 2.0
    mat[0, 3] += gamma / 2.0
    mat[3, 0] += gamma / 2.0
    return make_density(mat)


def mems_population(gamma: float) -> float:
    """Corner population of the boundary family: gamma/2 above the branch
    point at gamma = 2/3, frozen at 1/3 below it."""
    return gamma / 2.0 if gamma >= 2.0 / 3.0 else 1.0 / 3.0


def mems(gamma: float) -> DensityMatrix:
    """Maximally entangled mixed state at coherence weight ``gamma``.

    Diagonal (g, 1-2g, 0, g) with corner coherences gamma/2, where
    g = mems_population(gamma).  This family attains the maximum tangle for
    each value of the linear entropy.
    """
    if not 0.0 <= gamma <= 1.0:
        raise OutOfRange(f"mems coherence gamma={gamma} outside [0, 1]")
    g = mems_population(gamma)
    mat = np.zeros((4, 4), dtype=np.complex128)
    mat[0, 0] = g
    mat[1, 1] = 1.0 - 2.0 * g
    mat[3, 3] = g
    mat[0, 3] = gamma / 2.0
    mat[3, 0] = gamma / 2.0
    return make_density(mat)


@dataclass(frozen=True)
class AnsatzParams:
    """Diagonal-plus-coherence parametrization (x, y, a, b, gamma).

    x and y pad the outer populations, a and b are the inner populations,
    and gamma is the |00><11| coherence weight.  All five are non-negative
    and sum to one (within NORM_TOL).
    """

    x: float
    y: float
    a: float
    b: float
    gamma: float

    def __post_init__(self):
        for name in ("x", "y", "a", "b", "gamma"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise OutOfRange(f"ansatz parameter {name}={value} outside [0, 1]")
        total = self.x + self.y + self.a + self.b + self.gamma
        if abs(total - 1.0) > NORM_TOL:
            raise NormalizationViolated(
                f"|x + y + a + b + gamma - 1| = {abs(total - 1.0):.3e} exceeds {NORM_TOL:.0e}"
            )


def ansatz(params: AnsatzParams) -> DensityMatrix:
    """Diagonal (x + gamma/2, a, b, y + gamma/2) with corner coherences gamma/2."""
    mat = np.zeros((4, 4), dtype=np.complex128)
    mat[0, 0] = params.x + params.gamma / 2.0
    mat[1, 1] = params.a
    mat[2, 2] = params.b
    mat[3, 3] = params.y + params.gamma / 2.0
    mat[0, 3] = params.gamma / 2.0
    mat[3, 0] = params.gamma / 2.0
    return make_density(mat)


# --- text matrix format -----------------------------------------------------
#
# Four data lines, each holding four whitespace-separated complex entries
# written as "re,im" (e.g. 0.5,0.0), row-major.  Blank lines and '#' comments
# are tolerated.  Written values round-trip exactly.


def format_matrix(mat) -> str:
    mat = as_cmat(mat)
    lines = []
    for row in mat:
        lines.append(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Parse the text matrix format into a raw 4x4 complex array.

    The result is unvalidated: feed it to make_density to obtain a state.
    """
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        fields = body.split()
        if len(fields) != 4:
            raise ValueError(f"line {lineno}: expected 4 entries, got {len(fields)}")
        row = []
        for field in fields:
            parts = field.split(",")
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: entry {field!r} is not 're,im'")
            try:
                row.append(complex(float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: entry {field!r}: {exc}") from None
        rows.append(row)
    if len(rows) != 4:
        raise ValueError(f"expected 4 matrix rows, got {len(rows)}")
    return as_cmat(rows)


def write_matrix_file(path, mat) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write(format_matrix(mat))


def read_matrix_file(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as handle:
        return parse_matrix(handle.read())


def digest(state: DensityMatrix) -> str:
    """Short stable hex digest of a state's raw bytes (witness bookkeeping)."""
    return hashlib.sha256(np.ascontiguousarray(state.mat).tobytes()).hexdigest()[:16]
