"""Truncated Fourier series on the d-torus.

Elements are finitely supported maps from the mode lattice Z^d to
complex coefficients, i.e. trigonometric polynomials

    f(m) = sum_p c_p e(p . m),    e(t) = exp(2 pi i t),

with coordinates m taken mod 1.  This is the computable dense
subalgebra on which all deformed products, flows and norm estimates
in this package operate.  All values are immutable after construction
and every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AxisError,
    DimensionMismatchError,
    TruncationOverflowError,
    UnderResolvedGridError,
)

#: Coefficients below this magnitude are dropped (double-precision noise floor).
PRUNE_TOL = 1e-14

#: Default hard cap on the max-norm radius of stored modes.  Operations that
#: could silently generate larger supports raise instead; deliberate
#: truncation (pullback, Heisenberg evolution) reports discarded mass.
DEFAULT_MODE_CAP = 64

TWO_PI = 2.0 * np.pi


def _coalesce(dim, modes, coeffs, prune_tol=PRUNE_TOL):
    """Sum duplicate modes, prune tiny coefficients, sort lexicographically."""
    modes = np.asarray(modes, dtype=np.int64).reshape(-1, dim)
    coeffs = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    if modes.shape[0] != coeffs.shape[0]:
        raise ValueError("modes and coeffs length mismatch")
    if modes.shape[0] == 0:
        return modes, coeffs
    uniq, inverse = np.unique(modes, axis=0, return_inverse=True)
    summed = np.zeros(uniq.shape[0], dtype=np.complex128)
    np.add.at(summed, inverse.reshape(-1), coeffs)
    keep = np.abs(summed) > prune_tol
    return uniq[keep], summed[keep]


class FourierElement:
    """A trigonometric polynomial on T^d with sparse Fourier data.

    Parameters
    ----------
    dim : int
        Torus dimension d.
    terms : iterable of (mode, coefficient) or mapping, optional
        Modes are length-d integer tuples.  Duplicates are summed and
        coefficients below `PRUNE_TOL` are dropped.
    """

    __slots__ = ("dim", "modes", "coeffs")

    def __init__(self, dim, terms=()):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        if hasattr(terms, "items"):
            terms = list(terms.items())
        else:
            terms = list(terms)
        if terms:
            modes = [t[0] for t in terms]
            coeffs = [t[1] for t in terms]
        else:
            modes, coeffs = np.empty((0, dim), np.int64), np.empty(0, np.complex128)
        modes, coeffs = _coalesce(dim, modes, coeffs)
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "coeffs", coeffs)
        self.modes.setflags(write=False)
        self.coeffs.setflags(write=False)

    def __setattr__(self, name, value):
        raise AttributeError("FourierElement is immutable")

    @classmethod
    def _raw(cls, dim, modes, coeffs):
        """Wrap arrays that are already coalesced, pruned and sorted."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "dim", int(dim))
        object.__setattr__(obj, "modes", modes)
        object.__setattr__(obj, "coeffs", coeffs)
        modes.setflags(write=False)
        coeffs.setflags(write=False)
        return obj

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, dim=2):
        return cls(dim)

    @classmethod
    def unit(cls, dim=2):
        """The multiplicative unit: c_0 = 1, no other modes."""
        return cls(dim, [((0,) * dim, 1.0)])

    @classmethod
    def character(cls, p, coeff=1.0):
        """The single mode e_p, optionally scaled."""
        p = tuple(int(x) for x in p)
        return cls(len(p), [(p, coeff)])

    @classmethod
    def from_literal(cls, literal, dim=2):
        """Build from the textual literal form: a list of [[p...], re, im]."""
        terms = []
        for entry in literal:
            p, re, im = entry
            terms.append((tuple(int(x) for x in p), complex(re, im)))
        if terms:
            dim = len(terms[0][0])
        return cls(dim, terms)

    def to_literal(self):
        """Serialize to the canonical [[p...], re, im] list form."""
        return [
            [[int(x) for x in p], float(c.real), float(c.imag)]
            for p, c in zip(self.modes, self.coeffs)
        ]

    # -- basic queries ------------------------------------------------

    @property
    def n_modes(self):
        return self.modes.shape[0]

    def support_radius(self):
        """Max-norm radius of the support (0 for the zero element)."""
        if self.n_modes == 0:
            return 0
        return int(np.abs(self.modes).max())

    def coefficient(self, p):
        p = np.asarray(p, dtype=np.int64)
        hit = np.all(self.modes == p, axis=1)
        idx = np.nonzero(hit)[0]
        return complex(self.coeffs[idx[0]]) if idx.size else 0.0j

    def l1(self):
        return float(np.abs(self.coeffs).sum())

    def l2(self):
        return float(np.sqrt((np.abs(self.coeffs) ** 2).sum()))

    def is_real(self, tol=1e-10):
        """True iff c_{-p} = conj(c_p) for all p, i.e. f is real-valued."""
        diff = self - self.star()
        return diff.l1() <= tol

    def __eq__(self, other):
        if not isinstance(other, FourierElement):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.modes.shape == other.modes.shape
            and np.array_equal(self.modes, other.modes)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.dim, self.modes.tobytes(), self.coeffs.tobytes()))

    def __repr__(self):
        terms = ", ".join(
            f"{tuple(int(x) for x in p)}: {c:.6g}"
            for p, c in zip(self.modes[:8], self.coeffs[:8])
        )
        more = "" if self.n_modes <= 8 else f", ... ({self.n_modes} modes)"
        return f"FourierElement(d={self.dim}, {{{terms}{more}}})"

    # -- linear structure ---------------------------------------------

    def _check_dim(self, other):
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"dimension mismatch: {self.dim} vs {other.dim}"
            )

    def __add__(self, other):
        if not isinstance(other, FourierElement):
            return NotImplemented
        self._check_dim(other)
        modes = np.concatenate([self.modes, other.modes])
        coeffs = np.concatenate([self.coeffs, other.coeffs])
        return FourierElement._raw(self.dim, *_coalesce(self.dim, modes, coeffs))

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, scalar):
        if isinstance(scalar, FourierElement):
            return NotImplemented
        c = complex(scalar)
        return FourierElement._raw(
            self.dim, *_coalesce(self.dim, self.modes, self.coeffs * c)
        )

    __rmul__ = __mul__

    # -- algebra ------------------------------------------------------

    def star(self):
        """Involution f*: coefficients conj(c_{-p}) at mode p."""
        return FourierElement._raw(
            self.dim, *_coalesce(self.dim, -self.modes, np.conj(self.coeffs))
        )

    def eval_at(self, points):
        """Evaluate sum_p c_p e(p . m) at each point (coordinates mod 1).

        Parameters
        ----------
        points : array_like, shape (..., d)

        Returns
        -------
        ndarray of complex, shape (...)
        """
        pts = np.asarray(points, dtype=np.float64)
        squeeze = pts.ndim == 1
        pts = pts.reshape(-1, self.dim)
        if self.n_modes == 0:
            vals = np.zeros(pts.shape[0], dtype=np.complex128)
        else:
            phases = np.exp(2j * np.pi * (pts @ self.modes.T))
            vals = phases @ self.coeffs
        return vals[0] if squeeze else vals

    def truncate(self, radius):
        """Drop modes with |p|_inf > radius; return (element, dropped l1 mass)."""
        if self.n_modes == 0:
            return self, 0.0
        keep = np.abs(self.modes).max(axis=1) <= radius
        dropped = float(np.abs(self.coeffs[~keep]).sum())
        return FourierElement._raw(self.dim, self.modes[keep], self.coeffs[keep]), dropped


def add(f, g):
    """Coefficientwise sum of two elements on the same torus."""
    return f + g


def involution(f):
    """Complex conjugation: (f*)(m) = conj(f(m))."""
    return f.star()


def pointwise_mul(f, g, cap=DEFAULT_MODE_CAP):
    """Undeformed product f . g as convolution of coefficient maps.

    Exact on trigonometric polynomials.  Raises
    `TruncationOverflowError` if the result support exceeds `cap`.
    """
    f._check_dim(g)
    if f.n_modes == 0 or g.n_modes == 0:
        return FourierElement.zero(f.dim)
    modes = (f.modes[:, None, :] + g.modes[None, :, :]).reshape(-1, f.dim)
    coeffs = (f.coeffs[:, None] * g.coeffs[None, :]).reshape(-1)
    modes, coeffs = _coalesce(f.dim, modes, coeffs)
    if modes.shape[0] and np.abs(modes).max() > cap:
        raise TruncationOverflowError(
            f"product support radius {np.abs(modes).max()} exceeds cap {cap}"
        )
    return FourierElement._raw(f.dim, modes, coeffs)


def partial_derivative(f, axis):
    """Coordinate derivative along `axis` (0-based): c_p -> 2 pi i p_axis c_p."""
    if not 0 <= axis < f.dim:
        raise AxisError(f"axis {axis} out of range for d={f.dim}")
    coeffs = f.coeffs * (2j * np.pi * f.modes[:, axis])
    return FourierElement._raw(f.dim, *_coalesce(f.dim, f.modes, coeffs))


@dataclass(frozen=True)
class SeminormReport:
    """Result of a derivative seminorm computation.

    `grid_sup` is the supremum over a sampling grid of the pointwise
    norm of the symmetric k-linear derivative form; `l1_majorant` is
    the rigorous upper bound sum |c_p| (2 pi |p|_2)^k, which always
    dominates the grid value.
    """

    order: int
    grid_sup: float
    l1_majorant: float


def _uniform_grid(dim, resolution):
    axes = [np.arange(resolution) / resolution] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=-1)


def _derivative_form_sup(f, k, points):
    """Sup over `points` of the norm of the k-th derivative form of f."""
    n = points.shape[0]
    if f.n_modes == 0:
        return 0.0
    phases = np.exp(2j * np.pi * (points @ f.modes.T))  # (n, m)
    if k == 0:
        return float(np.abs(phases @ f.coeffs).max())
    if k == 1:
        # gradient vectors g(m) = sum c_p (2 pi i) p e(p.m); the norm of the
        # real-linear functional X -> g.X is the top singular value of the
        # stacked real/imaginary parts.
        grad = phases @ (f.coeffs[:, None] * (2j * np.pi * f.modes))  # (n, d)
        stacked = np.stack([grad.real, grad.imag], axis=1)  # (n, 2, d)
        svals = np.linalg.svd(stacked, compute_uv=False)
        return float(svals[:, 0].max())
    if k == 2:
        outer = f.modes[:, :, None] * f.modes[:, None, :]  # (m, d, d)
        weighted = f.coeffs[:, None, None] * ((2j * np.pi) ** 2) * outer
        hess = np.tensordot(phases, weighted, axes=([1], [0]))  # (n, d, d)
        svals = np.linalg.svd(hess, compute_uv=False)
        return float(svals[:, 0].max())
    # k >= 3: Banach-style diagonal supremum over a fixed fan of unit
    # directions; exact in the sampling limit for real symmetric forms.
    if f.dim == 2:
        angles = np.linspace(0.0, np.pi, 512, endpoint=False)
        dirs = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    else:
        rng = np.random.default_rng(0)
        raw = rng.standard_normal((512, f.dim))
        dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    proj = f.modes @ dirs.T  # (m, ndirs)
    weighted = f.coeffs[:, None] * ((2j * np.pi) ** k) * proj**k
    vals = phases @ weighted  # (n, ndirs)
    return float(np.abs(vals).max())


def seminorm(f, k, grid):
    """Derivative seminorm sup_m ||(D^k f)_m|| with an l1 certificate.

    Parameters
    ----------
    f : FourierElement
    k : int
        Derivative order, k >= 0.
    grid : int
        Per-axis sampling resolution; must be at least
        2 * (max mode magnitude) + 1 to avoid aliasing.
    """
    if k < 0:
        raise ValueError("order k must be >= 0")
    radius = f.support_radius()
    if grid < 2 * radius + 1:
        raise UnderResolvedGridError(
            f"grid {grid} under-resolves support radius {radius}"
        )
    points = _uniform_grid(f.dim, grid)
    grid_sup = _derivative_form_sup(f, k, points)
    p_norm = np.linalg.norm(f.modes, axis=1) if f.n_modes else np.zeros(0)
    l1_majorant = float((np.abs(f.coeffs) * (TWO_PI * p_norm) ** k).sum())
    return SeminormReport(order=k, grid_sup=grid_sup, l1_majorant=l1_majorant)


def parseval_mean_square(f, grid):
    """Mean of |f|^2 over a uniform grid (Parseval check helper)."""
    points = _uniform_grid(f.dim, grid)
    vals = f.eval_at(points)
    return float(np.mean(np.abs(vals) ** 2))
