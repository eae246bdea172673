"""Paley equiangular tight frame: complex matrix, Gram matrix, integer Seidel form.

Columns are labeled canonically: column j (0-based, j < p) carries the field
element a = j, the last column is the standard basis vector e_1, and the
frame rows follow the quadratic residues in increasing order.  Any other
labeling is a column permutation and leaves every measured quantity
invariant; fixing one makes outputs byte-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import WrongResidueClass
from .field import FieldCtx

# dense storage only; (p+1)^2 entries are tiny at desk scale
MAX_DENSE_P = 1 << 12


@dataclass(frozen=True, eq=False)
class EtfMatrix:
    p: int
    data: np.ndarray  # complex128, (p+1)/2 x (p+1)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True, eq=False)
class SeidelMatrix:
    """Integer matrix S with Gram = I + S/sqrt(p).

    Entries are chi(a_i - a_j) on the p x p principal block, +1 on the border
    row/column, 0 on the diagonal.  All RIP work runs on this exact form.
    """

    p: int
    data: np.ndarray  # int8, (p+1) x (p+1)

    @property
    def dim(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class EtfVerifyReport:
    p: int
    tol: float
    unit_norm_dev: float
    equiangularity_dev: float
    tightness_dev: float
    passed: bool


def _require_1mod4(ctx: FieldCtx):
    if ctx.p % 4 != 1:
        raise WrongResidueClass(f"p={ctx.p} is 3 mod 4; the frame needs chi(-1)=+1")
    if ctx.p > MAX_DENSE_P:
        raise WrongResidueClass(f"p={ctx.p} exceeds the dense-matrix cap {MAX_DENSE_P}")


def build_etf(ctx: FieldCtx) -> EtfMatrix:
    """Construct the (p+1)/2 x (p+1) frame matrix.

    Row 0 is (1/sqrt(p), ..., 1/sqrt(p), 1); row k >= 1 holds
    sqrt(2/p) * psi(b_k * a_j) for the k-th quadratic residue b_k; the last
    column is e_1.
    """
    _require_1mod4(ctx)
    p = ctx.p
    m, n = (p + 1) // 2, p + 1
    qrs = np.array(ctx.qr_elements, dtype=np.int64)
    a = np.arange(p, dtype=np.int64)
    data = np.zeros((m, n), dtype=np.complex128)
    data[0, :p] = 1.0 / math.sqrt(p)
    data[0, p] = 1.0
    phases = (qrs[:, None] * a[None, :]) % p
    data[1:, :p] = math.sqrt(2.0 / p) * np.exp(2j * np.pi * phases / p)
    return EtfMatrix(p=p, data=data)


def gram(etf: EtfMatrix) -> np.ndarray:
    """Real Gram matrix G[i,j] = <phi_i, conj(phi_j)>.

    The complex product is verified to be real to 1e-9 before the real part
    is returned; G has unit diagonal and off-diagonal magnitude 1/sqrt(p).
    """
    g = etf.data.T @ np.conj(etf.data)
    assert np.abs(g.imag).max() < 1e-9, "Gram matrix unexpectedly non-real"
    return np.ascontiguousarray(g.real)


def seidel(ctx: FieldCtx) -> SeidelMatrix:
    """Exact integer Seidel matrix of the frame."""
    _require_1mod4(ctx)
    p = ctx.p
    idx = (np.arange(p)[:, None] - np.arange(p)[None, :]) % p
    s = np.zeros((p + 1, p + 1), dtype=np.int8)
    s[:p, :p] = ctx.chi_table[idx]
    s[:p, p] = 1
    s[p, :p] = 1
    return SeidelMatrix(p=p, data=s)


def verify_etf(etf: EtfMatrix, tol: float = 1e-9) -> EtfVerifyReport:
    """Measure unit-norm, equiangularity, and tightness deviations."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    phi = etf.data
    p = etf.p
    norms = np.linalg.norm(phi, axis=0)
    unit_dev = float(np.abs(norms**2 - 1.0).max())
    g = gram(etf)
    off = np.abs(g) - 1.0 / math.sqrt(p)
    np.fill_diagonal(off, 0.0)
    equi_dev = float(np.abs(off).max())
    frame_op = phi @ np.conj(phi.T)
    tight_dev = float(np.abs(frame_op - 2.0 * np.eye(etf.rows)).max())
    return EtfVerifyReport(
        p=p,
        tol=tol,
        unit_norm_dev=unit_dev,
        equiangularity_dev=equi_dev,
        tightness_dev=tight_dev,
        passed=max(unit_dev, equi_dev, tight_dev) <= tol,
    )


def etf_csv(etf: EtfMatrix) -> str:
    """CSV dump, one row per matrix row, complex entries as 're+imi'."""
    lines = []
    for row in etf.data:
        lines.append(",".join(f"{z.real:.12g}{z.imag:+.12g}i" for z in row))
    return "\n".join(lines) + "\n"


def seidel_csv(s: SeidelMatrix) -> str:
    return "\n".join(",".join(str(int(v)) for v in row) for row in s.data) + "\n"
