"""Closed-form potentials with a bound state embedded in the continuum (BSEC).

Units are fixed so the stationary Schrödinger equation reads

    -psi'' + V(x) psi = E psi,        k = sqrt(E_bsec).

The half-axis potential supporting a single normalizable state at positive
energy E_bsec is built from the monotone auxiliary function

    u(x)  = 1 + (c^2/k^2) * (x/2 - sin(2kx)/(4k)),
    u'(x) = (c^2/k^2) * sin(kx)^2  >= 0,
    u''(x)= (c^2/k)   * sin(2kx),

as V = -2 (ln u)'' = -2 (u'' u - u'^2) / u^2 on x >= 0, continued by
V = 0 on x < 0 (optionally plus piecewise-constant segments).  The embedded
state is psi = c sin(kx) / (k u(x)) for x >= 0 and the free sine
c sin(kx) / k for x < 0; both branches match in value and slope at 0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BsecParams",
    "PiecewiseSegment",
    "PotentialKind",
    "PotentialModel",
    "u_factor",
    "eval_potential",
    "eval_bsec_wavefunction",
    "sample_on_grid",
]


@dataclass(frozen=True)
class BsecParams:
    """Pair (e_bsec, c) defining the solvable potential.

    e_bsec : embedded-state energy, > 0 (the state sits in the continuum).
    c      : slope of the embedded state at the origin, > 0.  A negative c
             is normalized to |c| (it only flips the overall sign of psi).
    """

    e_bsec: float
    c: float

    def __post_init__(self):
        if not np.isfinite(self.e_bsec) or self.e_bsec <= 0.0:
            raise ValueError(f"e_bsec must be positive and finite, got {self.e_bsec}")
        if not np.isfinite(self.c) or self.c == 0.0:
            raise ValueError(
                f"c must be nonzero and finite, got {self.c}; "
                "use PotentialModel.free() for the zero-potential limit"
            )
        if self.c < 0.0:
            object.__setattr__(self, "c", abs(self.c))

    @property
    def k(self) -> float:
        """Wavenumber of the embedded state, k = sqrt(e_bsec)."""
        return float(np.sqrt(self.e_bsec))


@dataclass(frozen=True)
class PiecewiseSegment:
    """Constant-potential segment on the negative half-axis."""

    x_start: float
    x_end: float
    height: float

    def __post_init__(self):
        if not (np.isfinite(self.x_start) and np.isfinite(self.x_end) and np.isfinite(self.height)):
            raise ValueError("segment fields must be finite")
        if self.x_start >= self.x_end:
            raise ValueError(f"segment needs x_start < x_end, got [{self.x_start}, {self.x_end}]")
        if self.x_end > 0.0:
            raise ValueError(f"segments must lie in x < 0, got x_end = {self.x_end}")


class PotentialKind(enum.Enum):
    FREE = "free"
    BSEC = "bsec"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class PotentialModel:
    """Whole-axis potential: free, pure BSEC, or BSEC plus left-side segments."""

    kind: PotentialKind
    params: BsecParams | None = None
    segments: tuple[PiecewiseSegment, ...] = field(default=())

    def __post_init__(self):
        if self.kind is PotentialKind.FREE:
            if self.params is not None or self.segments:
                raise ValueError("free model takes no parameters or segments")
        elif self.kind is PotentialKind.BSEC:
            if self.params is None:
                raise ValueError("bsec model requires BsecParams")
            if self.segments:
                raise ValueError("bsec model takes no segments; use composite")
        elif self.kind is PotentialKind.COMPOSITE:
            if self.params is None:
                raise ValueError("composite model requires BsecParams")
            segs = tuple(sorted(self.segments, key=lambda s: s.x_start))
            for a, b in zip(segs, segs[1:]):
                if b.x_start < a.x_end:
                    raise ValueError(
                        f"segments overlap: [{a.x_start}, {a.x_end}] and [{b.x_start}, {b.x_end}]"
                    )
            object.__setattr__(self, "segments", segs)

    @classmethod
    def free(cls) -> "PotentialModel":
        return cls(PotentialKind.FREE)

    @classmethod
    def bsec(cls, params: BsecParams) -> "PotentialModel":
        return cls(PotentialKind.BSEC, params)

    @classmethod
    def composite(cls, params: BsecParams, segments) -> "PotentialModel":
        return cls(PotentialKind.COMPOSITE, params, tuple(segments))

    @property
    def left_edge(self) -> float:
        """Leftmost point of potential support; the region below is free."""
        if self.kind is PotentialKind.COMPOSITE and self.segments:
            return min(s.x_start for s in self.segments)
        return 0.0


def _u_terms(x, p: BsecParams):
    """u, u', u'' of the denominator function on x >= 0 (no domain check)."""
    k, c = p.k, p.c
    ck2 = (c * c) / (k * k)
    u = 1.0 + ck2 * (x / 2.0 - np.sin(2.0 * k * x) / (4.0 * k))
    up = ck2 * np.sin(k * x) ** 2
    upp = (c * c / k) * np.sin(2.0 * k * x)
    return u, up, upp


def u_factor(x, p: BsecParams):
    """Denominator function u(x) on x >= 0; u >= 1 and nondecreasing.

    Accepts scalars or arrays; raises on negative positions.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("u_factor is defined on x >= 0")
    u, _, _ = _u_terms(x, p)
    return u if u.ndim else float(u)


def eval_potential(x, model: PotentialModel):
    """Potential V(x) of a model, vectorized over x.

    Bsec kind: analytically differentiated form -2 (u''u - u'^2)/u^2 on
    x >= 0, zero on x < 0.  Composite adds the segment heights on x < 0
    (half-open membership [x_start, x_end), so touching segments never
    double-count a shared endpoint).  Free is identically zero.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    v = np.zeros_like(x)
    if model.kind is not PotentialKind.FREE:
        pos = x >= 0.0
        if np.any(pos):
            u, up, upp = _u_terms(x[pos], model.params)
            v[pos] = -2.0 * (upp * u - up * up) / (u * u)
        for seg in model.segments:
            v[(x >= seg.x_start) & (x < seg.x_end)] += seg.height
    return float(v[0]) if scalar else v


def eval_bsec_wavefunction(x, p: BsecParams):
    """Embedded-state wavefunction on the whole axis, vectorized over x.

    Equals c sin(kx)/(k u(x)) on x >= 0 and the free sine c sin(kx)/k on
    x < 0; the branches agree in value and first derivative at the origin.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    k, c = p.k, p.c
    u, _, _ = _u_terms(np.maximum(x, 0.0), p)
    psi = np.where(x >= 0.0, c * np.sin(k * x) / (k * u), c * np.sin(k * x) / k)
    return float(psi[0]) if scalar else psi


def bsec_wavefunction_derivative(x, p: BsecParams):
    """Exact psi'(x) of the embedded state, vectorized over x."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    k, c = p.k, p.c
    u, up, _ = _u_terms(np.maximum(x, 0.0), p)
    inside = c * np.cos(k * x) / u - c * np.sin(k * x) * up / (k * u * u)
    dpsi = np.where(x >= 0.0, inside, c * np.cos(k * x))
    return float(dpsi[0]) if scalar else dpsi


def sample_on_grid(f, x_min: float, x_max: float, n: int):
    """Evaluate f on n uniform points covering [x_min, x_max] inclusively.

    Returns (x, f(x)) as arrays.  f may be any vectorized callable, e.g.
    ``lambda x: eval_potential(x, model)``.
    """
    if not (np.isfinite(x_min) and np.isfinite(x_max)) or x_min >= x_max:
        raise ValueError(f"need x_min < x_max, got [{x_min}, {x_max}]")
    n = int(n)
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    x = np.linspace(x_min, x_max, n)
    return x, np.asarray(f(x))
