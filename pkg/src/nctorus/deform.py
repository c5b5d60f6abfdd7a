"""The deformed product on Fourier modes.

The oscillatory-integral product collapses exactly on characters to a
cocycle-twisted convolution:

    e_p x_h e_q = e(-hbar p . (J q)) e_{p+q},    e(t) = exp(2 pi i t),

so products of trigonometric polynomials are computed exactly as sparse
double loops over supports, never by discretizing the integral.  The
Poisson bracket and the scaled-commutator residual that drives the
classical-limit analysis live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError
from .lattice import (
    DEFAULT_MODE_CAP,
    FourierElement,
    TruncationOverflowError,
    _coalesce,
    partial_derivative,
    pointwise_mul,
)


@dataclass(frozen=True)
class SymplecticStructure:
    """Real skew-symmetric d x d matrix defining bracket and deformation.

    Inputs are antisymmetrized at construction; matrices violating
    skewness beyond 1e-12 are rejected.  Degenerate J is permitted.
    """

    J: np.ndarray = field()

    def __init__(self, J):
        J = np.asarray(J, dtype=np.float64)
        if J.ndim != 2 or J.shape[0] != J.shape[1]:
            raise ValueError("J must be a square matrix")
        defect = np.abs(J + J.T).max()
        if defect > 1e-12:
            raise ValueError(f"J is not skew-symmetric (defect {defect:.3g})")
        J = 0.5 * (J - J.T)
        J.setflags(write=False)
        object.__setattr__(self, "J", J)

    @classmethod
    def standard(cls, dim=2):
        """Block [[0, 1], [-1, 0]] structure (dim must be even)."""
        if dim % 2:
            raise ValueError("standard symplectic structure needs even dim")
        J = np.zeros((dim, dim))
        for i in range(0, dim, 2):
            J[i, i + 1] = 1.0
            J[i + 1, i] = -1.0
        return cls(J)

    @property
    def dim(self):
        return self.J.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SymplecticStructure):
            return NotImplemented
        return np.array_equal(self.J, other.J)


@dataclass(frozen=True)
class PlanckParam:
    """The deformation scale hbar; hbar = 0 selects the undeformed product."""

    hbar: float

    def __post_init__(self):
        if not np.isfinite(self.hbar):
            raise ValueError("hbar must be finite")


def _as_hbar(hbar):
    return hbar.hbar if isinstance(hbar, PlanckParam) else float(hbar)


def cocycle(p, q, hbar, J):
    """The twisting phase e(-hbar p . (J q)); unit modulus to roundoff."""
    h = _as_hbar(hbar)
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.shape[-1] != J.dim:
        raise DimensionMismatchError("mode/structure dimension mismatch")
    return complex(np.exp(-2j * np.pi * h * (p @ (J.J @ q))))


def deformed_mul(f, g, hbar, J, cap=DEFAULT_MODE_CAP):
    """The deformed product f x_h g as a twisted convolution.

    Bilinear and exact on trigonometric polynomials; at hbar = 0 it
    coincides with the pointwise product.
    """
    f._check_dim(g)
    if f.dim != J.dim:
        raise DimensionMismatchError("element/structure dimension mismatch")
    h = _as_hbar(hbar)
    if f.n_modes == 0 or g.n_modes == 0:
        return FourierElement.zero(f.dim)
    pairing = (f.modes @ J.J) @ g.modes.T  # (nf, ng) of p . (J q)
    phases = np.exp(-2j * np.pi * h * pairing)
    coeffs = (f.coeffs[:, None] * g.coeffs[None, :] * phases).reshape(-1)
    modes = (f.modes[:, None, :] + g.modes[None, :, :]).reshape(-1, f.dim)
    modes, coeffs = _coalesce(f.dim, modes, coeffs)
    if modes.shape[0] and np.abs(modes).max() > cap:
        raise TruncationOverflowError(
            f"deformed product support radius {np.abs(modes).max()} exceeds cap {cap}"
        )
    return FourierElement._raw(f.dim, modes, coeffs)


def commutator(f, g, hbar, J, cap=DEFAULT_MODE_CAP):
    """[f, g]_h = f x_h g - g x_h f."""
    return deformed_mul(f, g, hbar, J, cap) - deformed_mul(g, f, hbar, J, cap)


def poisson_bracket(f, g, J, cap=DEFAULT_MODE_CAP):
    """{f, g} = sum_jk J_jk (d_j f)(d_k g); on modes -4 pi^2 (p.Jq) e_{p+q}."""
    f._check_dim(g)
    out = FourierElement.zero(f.dim)
    dfs = [partial_derivative(f, j) for j in range(f.dim)]
    dgs = [partial_derivative(g, k) for k in range(g.dim)]
    for j in range(f.dim):
        for k in range(f.dim):
            Jjk = J.J[j, k]
            if Jjk == 0.0:
                continue
            out = out + Jjk * pointwise_mul(dfs[j], dgs[k], cap=cap)
    return out


def scaled_commutator_residual(H, g, hbar, J, cap=DEFAULT_MODE_CAP):
    """(pi / (i hbar)) [H, g]_h - {H, g}.

    The antisymmetrized residual whose smallness drives the classical
    limit; on fixed single-mode pairs its size decays like hbar^2.
    Requires hbar != 0.
    """
    h = _as_hbar(hbar)
    if h == 0.0:
        raise ZeroDivisionError("scaled commutator residual needs hbar != 0")
    scaled = (np.pi / (1j * h)) * commutator(H, g, h, J, cap)
    return scaled - poisson_bracket(H, g, J, cap)


def one_sided_residual(F, g, hbar, J, cap=DEFAULT_MODE_CAP):
    """(2 pi / (i hbar)) (F x_h g - F g) - {F, g}.

    The one-sided variant of the residual; decays like hbar^1 on fixed
    elements, one order slower than the antisymmetrized version.
    """
    h = _as_hbar(hbar)
    if h == 0.0:
        raise ZeroDivisionError("one-sided residual needs hbar != 0")
    diff = deformed_mul(F, g, h, J, cap) - pointwise_mul(F, g, cap=cap)
    return (2.0 * np.pi / (1j * h)) * diff - poisson_bracket(F, g, J, cap)
