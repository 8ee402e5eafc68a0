"""Epsilon-indexed nets of smooth functions on box domains.

Builtin one-dimensional families (tensor products give higher dimensions):

* ``GaussianPeak(p)``  - eps^(-p) * exp(-x^2); p may be negative for a
                         polynomially decaying net
* ``DeltaNet(p)``      - eps^(-p) * bump(x/eps), compact support (-eps, eps)
* ``Oscillatory()``    - exp(i*x/eps) * bump(x), complex valued
* ``SuperSmall()``     - exp(-1/eps) * bump(x), decays faster than any power
* ``PolyWeight(p, d)`` - eps^(-p) * x^d * exp(-x^2)
* ``Monomial(d)``      - x^d, eps-independent, finite boxes only (diagnostic)
* ``Tabulated``        - sampled values from CSV, finite differences only

where ``bump(y) = exp(-1/(1-y^2))`` on (-1, 1) and 0 outside.

The central quantity is the weighted sup-seminorm

    s_{alpha,beta}(eps) = max over the sampling grid of |x^beta d^alpha u_eps|

and ``seminorm_sweep`` tabulates its maximum over all multi-index pairs with
given totals |alpha| = q, |beta| = l for every eps of a geometric grid.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

GAUSS_RADIUS = 10.0

DERIVATIVE_MODES = ("analytic", "finite_difference", "spectral")


# ----------------------------------------------------------------------------
# domains and grids


@dataclass(frozen=True)
class Box:
    """Open box: product of open intervals, +-inf allowed."""

    intervals: tuple

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        if not ivs:
            raise ValueError("box needs at least one axis")
        for lo, hi in ivs:
            if math.isnan(lo) or math.isnan(hi) or not lo < hi:
                raise ValueError(f"invalid interval ({lo}, {hi})")
        object.__setattr__(self, "intervals", ivs)

    @property
    def dim(self) -> int:
        return len(self.intervals)

    @classmethod
    def full_line(cls, dim: int = 1) -> "Box":
        return cls(tuple((-math.inf, math.inf) for _ in range(dim)))

    @classmethod
    def half_line(cls) -> "Box":
        return cls(((0.0, math.inf),))

    def axis_is_full_line(self, d: int) -> bool:
        lo, hi = self.intervals[d]
        return math.isinf(lo) and math.isinf(hi)

    def is_full_space(self) -> bool:
        return all(self.axis_is_full_line(d) for d in range(self.dim))

    def straddles_zero(self, d: int = 0) -> bool:
        lo, hi = self.intervals[d]
        return lo < 0.0 < hi


@dataclass(frozen=True)
class EpsilonGrid:
    """Geometric grid eps_k = eps0 * ratio^k, k = 0..count-1."""

    eps0: float = 0.5
    ratio: float = 0.75
    count: int = 16

    def __post_init__(self):
        if not 0 < self.eps0 <= 1:
            raise ValueError("eps0 must lie in (0, 1]")
        if not 0 < self.ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        if self.count < 4:
            raise ValueError("need at least 4 epsilon points")

    @property
    def values(self) -> tuple:
        return tuple(self.eps0 * self.ratio ** k for k in range(self.count))


@dataclass(frozen=True)
class SampleGrid:
    """Uniform tensor sampling grid; axes are ascending 1-D node arrays."""

    axes: tuple
    spacings: tuple

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple:
        return tuple(len(a) for a in self.axes)

    def meshed(self):
        if self.dim == 1:
            return (self.axes[0],)
        return np.meshgrid(*self.axes, indexing="ij", sparse=True)


# ----------------------------------------------------------------------------
# the compactly supported bump and its derivatives

_BUMP_POLYS = [Polynomial([1.0])]


def _bump_poly(q: int) -> Polynomial:
    # d^q bump = P_q(y) / (1-y^2)^(2q) * bump with
    # P_{q+1} = P_q' D^2 + 4 q y P_q D - 2 y P_q,  D = 1 - y^2
    while len(_BUMP_POLYS) <= q:
        k = len(_BUMP_POLYS) - 1
        P = _BUMP_POLYS[-1]
        D = Polynomial([1.0, 0.0, -1.0])
        Y = Polynomial([0.0, 1.0])
        _BUMP_POLYS.append(P.deriv() * D ** 2 + 4 * k * Y * P * D - 2 * Y * P)
    return _BUMP_POLYS[q]


def bump_deriv(q: int, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    t = 1.0 - y * y
    # below the threshold exp(-1/t) underflows anyway; masking avoids inf*0
    inside = t > 1e-8
    out = np.zeros_like(y)
    if np.any(inside):
        ti = t[inside]
        core = np.exp(-1.0 / ti)
        if q == 0:
            out[inside] = core
        else:
            out[inside] = _bump_poly(q)(y[inside]) * ti ** (-2 * q) * core
    return out


def bump(y) -> np.ndarray:
    return bump_deriv(0, y)


def bump_stable_diff(y, d) -> np.ndarray:
    """bump(y+d) - bump(y) evaluated without catastrophic cancellation."""
    y = np.asarray(y, dtype=float)
    y2 = y + d
    f1 = bump(y)
    f2 = bump(y2)
    out = f2 - f1
    both = (np.abs(y) < 1.0) & (np.abs(y2) < 1.0)
    if np.any(both):
        ya = y[both]
        t1 = 1.0 - ya * ya
        # s = (y+d)^2 - y^2 kept symbolic in d; forming y+d first would
        # round the step into y's ulp and skew tiny-step differences
        s = d * (2.0 * ya + d)
        t2 = t1 - s
        arg = -s / (t1 * t2)
        out[both] = f1[both] * np.expm1(arg)
    return out


def _gauss_chain(polys: list) -> None:
    # extend the list of A_q with d/dx [A e^{-x^2}] = (A' - 2 x A) e^{-x^2}
    P = polys[-1]
    X = Polynomial([0.0, 1.0])
    polys.append(P.deriv() - 2 * X * P)


# ----------------------------------------------------------------------------
# builtin families


class Family1D:
    """Base class for one-dimensional net families."""

    name = "family"
    is_complex = False
    requires_finite_box = False
    ndim = 1

    def params(self) -> dict:
        return {}

    def label(self) -> str:
        ps = ",".join(f"{k}={v:g}" for k, v in sorted(self.params().items()))
        return f"{self.name}({ps})"

    def value(self, eps: float, x) -> np.ndarray:
        return self.deriv(eps, 0, x)

    def deriv(self, eps: float, q: int, x) -> np.ndarray:
        raise NotImplementedError

    def stable_diff(self, eps: float, x, h: float) -> np.ndarray:
        return self.value(eps, np.asarray(x) + h) - self.value(eps, x)

    # grid hints: (truncation radius, spacing cap or None)
    def spatial_hint(self, eps: float) -> tuple:
        return (GAUSS_RADIUS, 1.0 / 128.0)

    def fourier_hint(self, eps: float) -> tuple:
        return (GAUSS_RADIUS, None)

    def oscillation_scale(self, eps: float) -> float:
        return 1.0


class GaussianPeak(Family1D):
    """u_eps(x) = eps^(-p) exp(-x^2)."""

    name = "GaussianPeak"

    def __init__(self, p: float):
        self.p = float(p)
        self._polys = [Polynomial([1.0])]

    def params(self):
        return {"p": self.p}

    def _poly(self, q):
        while len(self._polys) <= q:
            _gauss_chain(self._polys)
        return self._polys[q]

    def deriv(self, eps, q, x):
        x = np.asarray(x, dtype=float)
        out = np.exp(-x * x)
        if q:
            out = self._poly(q)(x) * out
        return eps ** (-self.p) * out

    def stable_diff(self, eps, x, h):
        x = np.asarray(x, dtype=float)
        return eps ** (-self.p) * np.exp(-x * x) * np.expm1(-(2.0 * x + h) * h)


class PolyWeight(Family1D):
    """u_eps(x) = eps^(-p) x^d exp(-x^2)."""

    name = "PolyWeight"

    def __init__(self, p: float, d: int):
        if d < 0 or d != int(d):
            raise ValueError("d must be a non-negative integer")
        self.p = float(p)
        self.d = int(d)
        self._polys = [Polynomial.basis(self.d)]

    def params(self):
        return {"p": self.p, "d": self.d}

    def _poly(self, q):
        while len(self._polys) <= q:
            _gauss_chain(self._polys)
        return self._polys[q]

    def deriv(self, eps, q, x):
        x = np.asarray(x, dtype=float)
        return eps ** (-self.p) * self._poly(q)(x) * np.exp(-x * x)

    def stable_diff(self, eps, x, h):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        safe = np.abs(x) > 2.0 * abs(h)
        xs = x[safe]
        arg = self.d * np.log1p(h / xs) - (2.0 * xs + h) * h
        out[safe] = xs ** self.d * np.exp(-xs * xs) * np.expm1(arg)
        xu = x[~safe]
        out[~safe] = (xu + h) ** self.d * np.exp(-((xu + h) ** 2)) - xu ** self.d * np.exp(
            -xu * xu
        )
        return eps ** (-self.p) * out


class DeltaNet(Family1D):
    """u_eps(x) = eps^(-p) bump(x/eps); support shrinks with eps."""

    name = "DeltaNet"

    def __init__(self, p: float):
        self.p = float(p)

    def params(self):
        return {"p": self.p}

    def deriv(self, eps, q, x):
        x = np.asarray(x, dtype=float)
        return eps ** (-self.p - q) * bump_deriv(q, x / eps)

    def stable_diff(self, eps, x, h):
        x = np.asarray(x, dtype=float)
        return eps ** (-self.p) * bump_stable_diff(x / eps, h / eps)

    def spatial_hint(self, eps):
        return (eps, eps / 128.0)

    def fourier_hint(self, eps):
        return (4.0 * eps, eps / 256.0)

    def oscillation_scale(self, eps):
        return eps


class Oscillatory(Family1D):
    """u_eps(x) = exp(i x / eps) bump(x), complex modulation of a fixed bump."""

    name = "Oscillatory"
    is_complex = True

    def deriv(self, eps, q, x):
        x = np.asarray(x, dtype=float)
        phase = np.exp(1j * x / eps)
        acc = np.zeros_like(x, dtype=complex)
        for j in range(q + 1):
            acc += math.comb(q, j) * (1j / eps) ** (q - j) * bump_deriv(j, x)
        return phase * acc

    def stable_diff(self, eps, x, h):
        x = np.asarray(x, dtype=float)
        # exp(i h/eps) - 1 via half-angle to keep the real part accurate
        re = -2.0 * np.sin(h / (2.0 * eps)) ** 2
        im = np.sin(h / eps)
        eih_m1 = re + 1j * im
        return np.exp(1j * x / eps) * (eih_m1 * bump(x + h) + bump_stable_diff(x, h))

    def spatial_hint(self, eps):
        return (1.0, 1.0 / 128.0)

    def fourier_hint(self, eps):
        return (1.0, eps / 16.0)

    def oscillation_scale(self, eps):
        return eps


class SuperSmall(Family1D):
    """u_eps(x) = exp(-1/eps) bump(x); negligible at every order."""

    name = "SuperSmall"

    def deriv(self, eps, q, x):
        return math.exp(-1.0 / eps) * bump_deriv(q, x)

    def stable_diff(self, eps, x, h):
        return math.exp(-1.0 / eps) * bump_stable_diff(np.asarray(x, dtype=float), h)

    def spatial_hint(self, eps):
        return (1.0, 1.0 / 128.0)

    def fourier_hint(self, eps):
        return (1.0, None)


class Monomial(Family1D):
    """u_eps(x) = x^d, eps-independent; diagnostic family for finite boxes."""

    name = "Monomial"
    requires_finite_box = True

    def __init__(self, d: int):
        if d < 0 or d != int(d):
            raise ValueError("d must be a non-negative integer")
        self.d = int(d)

    def params(self):
        return {"d": self.d}

    def deriv(self, eps, q, x):
        x = np.asarray(x, dtype=float)
        if q > self.d:
            return np.zeros_like(x)
        coeff = math.perm(self.d, q)
        return coeff * x ** (self.d - q)

    def stable_diff(self, eps, x, h):
        x = np.asarray(x, dtype=float)
        # exact expansion of (x+h)^d - x^d
        acc = np.zeros_like(x)
        for j in range(self.d):
            acc += math.comb(self.d, j) * x ** j * h ** (self.d - j)
        return acc

    def spatial_hint(self, eps):
        return (math.inf, None)


class Tabulated(Family1D):
    """Net given by per-eps samples on uniform grids; finite differences only."""

    name = "Tabulated"

    def __init__(self, samples: dict, complex_valued: bool = False):
        # samples: eps -> (nodes ndarray, values ndarray)
        if not samples:
            raise ValueError("tabulated net needs at least one eps level")
        self._samples = {float(e): (np.asarray(x), np.asarray(v)) for e, (x, v) in samples.items()}
        self.is_complex = bool(complex_valued)

    def params(self):
        return {"levels": len(self._samples)}

    @property
    def available_eps(self) -> tuple:
        return tuple(sorted(self._samples, reverse=True))

    def grid_for(self, eps: float) -> SampleGrid:
        nodes, _ = self._samples[self._key(eps)]
        return SampleGrid(axes=(nodes,), spacings=(float(nodes[1] - nodes[0]),))

    def _key(self, eps):
        for e in self._samples:
            if abs(e - eps) <= 1e-12 * max(1.0, abs(e)):
                return e
        raise KeyError(f"eps={eps} not present in tabulated data")

    def value(self, eps, x):
        nodes, vals = self._samples[self._key(eps)]
        x = np.asarray(x, dtype=float)
        if x.shape != nodes.shape or not np.allclose(x, nodes, rtol=0, atol=1e-12):
            raise ValueError("tabulated nets can only be evaluated on their own grid")
        return vals.copy()

    def deriv(self, eps, q, x):
        raise ValueError("tabulated nets have no analytic derivatives")


class TensorProductFamily:
    """Product of one-dimensional factors, one per axis."""

    name = "TensorProduct"
    requires_finite_box = False

    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("need at least one factor")
        self.is_complex = any(f.is_complex for f in self.factors)
        self.requires_finite_box = any(f.requires_finite_box for f in self.factors)

    @property
    def ndim(self):
        return len(self.factors)

    def params(self):
        return {"factors": len(self.factors)}

    def label(self):
        return "Tensor[" + " x ".join(f.label() for f in self.factors) + "]"


def _normalize_index(idx, dim: int) -> tuple:
    if isinstance(idx, (int, np.integer)):
        if dim != 1:
            raise ValueError("scalar multi-index only valid in one dimension")
        idx = (int(idx),)
    idx = tuple(int(i) for i in idx)
    if len(idx) != dim or any(i < 0 for i in idx):
        raise ValueError(f"bad multi-index {idx} for dimension {dim}")
    return idx


def compositions(total: int, parts: int):
    """All tuples of `parts` non-negative ints summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in compositions(total - head, parts - 1):
            yield (head,) + rest


# ----------------------------------------------------------------------------
# nets


@dataclass(frozen=True)
class Net:
    """A family attached to a box domain and a derivative mode."""

    family: object
    domain: Box
    derivative_mode: str = "analytic"

    def __post_init__(self):
        if self.derivative_mode not in DERIVATIVE_MODES:
            raise ValueError(f"unknown derivative mode {self.derivative_mode!r}")
        ndim = getattr(self.family, "ndim", 1)
        if ndim != self.domain.dim:
            raise ValueError("family dimension does not match the box")
        if isinstance(self.family, Tabulated) and self.derivative_mode == "analytic":
            raise ValueError("analytic derivatives are not available for tabulated nets")
        if self.family.requires_finite_box:
            for lo, hi in self.domain.intervals:
                if math.isinf(lo) or math.isinf(hi):
                    raise ValueError(f"{self.family.name} needs a finite box")

    @property
    def label(self) -> str:
        dom = "R" if self.domain.is_full_space() else str(self.domain.intervals)
        return f"{self.family.label()}@{dom}/{self.derivative_mode}"

    @property
    def is_complex(self) -> bool:
        return self.family.is_complex


def reflect(net: Net, axis: int = 0) -> Net:
    """The net x -> u(-x_axis, x_other); seminorms on symmetric grids match."""
    fam = net.family
    if isinstance(fam, TensorProductFamily):
        factors = list(fam.factors)
        factors[axis] = _Reflected1D(factors[axis])
        new_fam = TensorProductFamily(factors)
    else:
        new_fam = _Reflected1D(fam)
    ivs = list(net.domain.intervals)
    lo, hi = ivs[axis]
    ivs[axis] = (-hi, -lo)
    return Net(family=new_fam, domain=Box(tuple(ivs)), derivative_mode=net.derivative_mode)


class _Reflected1D(Family1D):
    def __init__(self, base):
        self.base = base
        self.is_complex = base.is_complex
        self.requires_finite_box = base.requires_finite_box
        self.name = f"Reflected[{base.name}]"

    def params(self):
        return self.base.params()

    def label(self):
        return f"Reflected[{self.base.label()}]"

    def deriv(self, eps, q, x):
        x = np.asarray(x, dtype=float)
        return (-1.0) ** q * self.base.deriv(eps, q, -x)

    def stable_diff(self, eps, x, h):
        # u(x+h) - u(x) = base(-x-h) - base(-x)
        return self.base.stable_diff(eps, -np.asarray(x, dtype=float), -h)

    def spatial_hint(self, eps):
        return self.base.spatial_hint(eps)

    def fourier_hint(self, eps):
        return self.base.fourier_hint(eps)

    def oscillation_scale(self, eps):
        return self.base.oscillation_scale(eps)


# ----------------------------------------------------------------------------
# grid policy


def _axis_nodes(lo: float, hi: float, radius: float, spacing: float):
    """Uniform nodes on the truncation of (lo, hi) to radius.

    Truncation-introduced endpoints are sampled (values there are negligible
    by the tail criterion); finite original endpoints are left out since the
    box is open.
    """
    lo_t = max(lo, -radius)
    hi_t = min(hi, radius)
    if not lo_t < hi_t:
        raise ValueError("empty truncated interval")
    span = hi_t - lo_t
    if math.isinf(span):
        raise ValueError("cannot grid an infinite interval without a radius")
    if math.isinf(lo) and math.isinf(hi):
        # symmetric grid through 0
        half = max(4, int(math.ceil(radius / spacing)))
        h = radius / half
        nodes = h * np.arange(-half, half + 1)
        return nodes, h
    m = max(8, int(math.ceil(span / spacing)))
    h = span / m
    if math.isinf(lo):
        # hard upper end excluded, truncated lower end included
        nodes = hi - h * np.arange(m, 0, -1)
        return nodes, h
    if math.isinf(hi):
        nodes = lo + h * np.arange(1, m + 1)
        return nodes, h
    # finite open box: midpoint grid keeps both endpoints out
    nodes = lo + h * (np.arange(m) + 0.5)
    return nodes, h


@dataclass(frozen=True)
class GridPolicy:
    """Turns family hints plus the box into concrete sampling grids."""

    base_nodes: int = 4096
    min_core_nodes: int = 32
    fd_density: int = 64
    fourier_oversample: int = 8
    tail_rtol: float = 1e-14
    refine: float = 1.0

    def _spacing(self, span, cap, net, eps):
        s = span / self.base_nodes
        if cap is not None:
            s = min(s, cap)
        if net.derivative_mode != "analytic":
            for fam in _factors(net.family):
                s = min(s, fam.oscillation_scale(eps) / self.fd_density)
        return s / self.refine

    def spatial_grid(self, net: Net, eps: float) -> SampleGrid:
        fam = net.family
        if isinstance(fam, Tabulated):
            return fam.grid_for(eps)
        axes = []
        spacings = []
        for d, f in enumerate(_factors(fam)):
            radius, cap = f.spatial_hint(eps)
            lo, hi = net.domain.intervals[d]
            span = min(hi, radius) - max(lo, -radius)
            h = self._spacing(span, cap, net, eps)
            nodes, h = _axis_nodes(lo, hi, radius, h)
            axes.append(nodes)
            spacings.append(h)
            if net.derivative_mode != "analytic":
                # sampled modes must resolve the fastest feature
                core = f.oscillation_scale(eps)
                if core < 1.0 and 2 * core / h < self.min_core_nodes:
                    raise ValueError("grid too coarse for the family's feature scale")
        return SampleGrid(axes=tuple(axes), spacings=tuple(spacings))

    def fourier_grid(self, net: Net, eps: float) -> SampleGrid:
        fam = net.family
        if isinstance(fam, Tabulated):
            return fam.grid_for(eps)
        if net.domain.dim != 1:
            raise ValueError("fourier grids are one-dimensional here")
        radius, cap = fam.fourier_hint(eps)
        lo, hi = net.domain.intervals[0]
        span = 2 * radius
        h = self._spacing(span, cap, net, eps)
        nodes, h = _axis_nodes(lo, hi, radius, h)
        return SampleGrid(axes=(nodes,), spacings=(h,))


def _factors(family):
    if isinstance(family, TensorProductFamily):
        return family.factors
    return (family,)


DEFAULT_POLICY = GridPolicy()


# ----------------------------------------------------------------------------
# evaluation and derivatives


def evaluate(net: Net, eps: float, grid: SampleGrid) -> np.ndarray:
    """Sample u_eps on the grid; returns a tensor of shape grid.shape."""
    return derivative(net, eps, (0,) * grid.dim, grid)


def fd_weights(z: float, nodes: np.ndarray, m: int) -> np.ndarray:
    """Finite-difference weights for the m-th derivative at z on given nodes."""
    n = len(nodes)
    if m >= n:
        raise ValueError("need more nodes than the derivative order")
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = nodes[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - z
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def _fd_stencil_length(m: int) -> int:
    p = m + 5
    if p % 2 == 0:
        p += 1
    return p


def fd_derivative_1d(values: np.ndarray, h: float, m: int) -> np.ndarray:
    """m-th derivative of uniformly sampled values, centered order >= 4."""
    if m == 0:
        return values.copy()
    n = len(values)
    p = min(_fd_stencil_length(m), n if n % 2 else n - 1)
    if p <= m:
        raise ValueError("not enough samples for this derivative order")
    offsets = np.arange(p, dtype=float)
    half = p // 2
    wc = fd_weights(float(half), offsets, m) / h ** m
    windows = np.lib.stride_tricks.sliding_window_view(values, p)
    out = np.empty_like(values)
    out[half : n - half] = windows @ wc
    for i in range(half):
        w = fd_weights(float(i), offsets, m) / h ** m
        out[i] = values[:p] @ w
        w = fd_weights(float(p - 1 - i), offsets, m) / h ** m
        out[n - 1 - i] = values[n - p :] @ w
    return out


def spectral_derivative_1d(
    values: np.ndarray, h: float, m: int, boundary_rtol: float = 1e-8
) -> np.ndarray:
    """m-th derivative via FFT of the periodized samples.

    Only valid when the samples are negligible at both ends; asserted.
    """
    if m == 0:
        return values.copy()
    scale = np.abs(values).max()
    if scale > 0:
        edge = max(np.abs(values[0]), np.abs(values[-1]))
        if edge > boundary_rtol * scale:
            raise ValueError(
                "spectral derivatives need negligible boundary values "
                f"(edge/max = {edge / scale:.2e})"
            )
    n = len(values)
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=h)
    out = np.fft.ifft((1j * k) ** m * np.fft.fft(values))
    if not np.iscomplexobj(values):
        out = out.real
    return out


def derivative(net: Net, eps: float, alpha, grid: SampleGrid) -> np.ndarray:
    """Mixed partial d^alpha u_eps sampled on the grid."""
    alpha = _normalize_index(alpha, grid.dim)
    mode = net.derivative_mode
    fam = net.family

    if mode == "analytic":
        parts = []
        for d, f in enumerate(_factors(fam)):
            parts.append(f.deriv(eps, alpha[d], grid.axes[d]))
        return _outer(parts)

    # sampled modes: evaluate once, then differentiate along each axis
    if isinstance(fam, Tabulated):
        vals = fam.value(eps, grid.axes[0])
    else:
        parts = [f.value(eps, grid.axes[d]) for d, f in enumerate(_factors(fam))]
        vals = _outer(parts)
    for d, q in enumerate(alpha):
        if q == 0:
            continue
        vals = np.apply_along_axis(
            lambda row: (
                fd_derivative_1d(row, grid.spacings[d], q)
                if mode == "finite_difference"
                else spectral_derivative_1d(row, grid.spacings[d], q)
            ),
            d,
            vals,
        )
    return vals


def _outer(parts) -> np.ndarray:
    out = parts[0]
    for p in parts[1:]:
        out = np.multiply.outer(out, p)
    return out


def stable_diff_along(net: Net, eps: float, points: tuple, axis: int, h: float):
    """u(x + h e_axis) - u(x) for broadcastable point coordinate arrays.

    Uses the family's cancellation-free difference when available.
    """
    fams = _factors(net.family)
    if len(fams) == 1:
        return fams[0].stable_diff(eps, points[0], h)
    out = fams[axis].stable_diff(eps, points[axis], h)
    for d, f in enumerate(fams):
        if d != axis:
            out = out * f.value(eps, points[d])
    return out


# ----------------------------------------------------------------------------
# seminorms


@dataclass(frozen=True)
class SeminormValue:
    value: float
    argmax: tuple
    eps: float
    alpha: tuple
    beta: tuple


def _weight_tensor(grid: SampleGrid, beta: tuple) -> np.ndarray:
    parts = [np.abs(grid.axes[d]) ** beta[d] if beta[d] else np.ones_like(grid.axes[d]) for d in range(grid.dim)]
    return _outer(parts)


def seminorm(
    net: Net,
    eps: float,
    alpha,
    beta,
    grid: Optional[SampleGrid] = None,
    policy: GridPolicy = DEFAULT_POLICY,
) -> SeminormValue:
    """Grid maximum of |x^beta d^alpha u_eps| with its argmax node."""
    if grid is None:
        grid = policy.spatial_grid(net, eps)
    alpha = _normalize_index(alpha, grid.dim)
    beta = _normalize_index(beta, grid.dim)
    vals = np.abs(derivative(net, eps, alpha, grid))
    vals = vals * _weight_tensor(grid, beta)
    flat_idx = int(np.argmax(vals))
    idx = np.unravel_index(flat_idx, vals.shape)
    argmax = tuple(float(grid.axes[d][idx[d]]) for d in range(grid.dim))
    return SeminormValue(
        value=float(vals[idx]), argmax=argmax, eps=eps, alpha=alpha, beta=beta
    )


SCALE_KINDS = ("mixed", "derivative", "weight", "fourier_weight")


@dataclass(frozen=True)
class SeminormProfile:
    """Seminorm table s_{q,l}(eps_k) for one net and one scale.

    values[k, q, l] is the max over all |alpha| = q, |beta| = l of the grid
    seminorm at eps_k.  Single-order scales keep the trivial axis at size 1.
    """

    scale_kind: str
    net_label: str
    eps: tuple
    values: np.ndarray
    grid_meta: tuple
    mask: Optional[str] = None

    @property
    def max_q(self) -> int:
        return self.values.shape[1] - 1

    @property
    def max_l(self) -> int:
        return self.values.shape[2] - 1

    def series(self, q: int, l: int) -> np.ndarray:
        return self.values[:, q, l]


def _mask_for(grid: SampleGrid, mask: Optional[str]):
    if mask is None:
        return None
    axis0 = grid.axes[0]
    if mask == "axis0_positive":
        keep = axis0 > 0
    elif mask == "axis0_negative":
        keep = axis0 < 0
    else:
        raise ValueError(f"unknown mask {mask!r}")
    return keep


def _sweep_one_eps(net, eps, max_q, max_l, policy, scale, mask):
    grid = policy.spatial_grid(net, eps)
    dim = grid.dim
    keep = _mask_for(grid, mask)
    values = np.zeros((max_q + 1, max_l + 1))
    q_range = range(max_q + 1) if scale in ("mixed", "derivative") else (0,)
    l_range = range(max_l + 1) if scale in ("mixed", "weight") else (0,)

    weights = {
        beta: _weight_tensor(grid, beta)
        for l in l_range
        for beta in compositions(l, dim)
    }
    boundary_ratio = 0.0
    for q in q_range:
        for alpha in compositions(q, dim):
            dv = np.abs(derivative(net, eps, alpha, grid))
            for l in l_range:
                for beta in compositions(l, dim):
                    prod = dv * weights[beta]
                    if keep is not None:
                        prod = prod[keep]
                    m = float(prod.max()) if prod.size else 0.0
                    if m > values[q, l]:
                        values[q, l] = m
    # truncation tail check at the heaviest weight on the raw samples
    u = np.abs(evaluate(net, eps, grid))
    wmax = _weight_tensor(grid, (max_l,) + (0,) * (dim - 1))
    wu = u * wmax
    peak = float(wu.max())
    if peak > 0:
        edges = []
        if dim == 1:
            lo, hi = net.domain.intervals[0]
            if math.isinf(lo):
                edges.append(wu[0])
            if math.isinf(hi):
                edges.append(wu[-1])
        boundary_ratio = float(max(edges) / peak) if edges else 0.0
    meta = {
        "nodes": int(np.prod(grid.shape)),
        "spacing": [float(s) for s in grid.spacings],
        "lo": [float(a[0]) for a in grid.axes],
        "hi": [float(a[-1]) for a in grid.axes],
        "tail_ratio": boundary_ratio,
        "tail_ok": boundary_ratio <= policy.tail_rtol,
    }
    if scale == "derivative":
        values = values[:, :1]
    elif scale == "weight":
        values = values[:1, :]
    return values, meta


def seminorm_sweep(
    net: Net,
    eps_grid: EpsilonGrid,
    max_q: int = 4,
    max_l: int = 4,
    policy: GridPolicy = DEFAULT_POLICY,
    scale: str = "mixed",
    mask: Optional[str] = None,
    jobs: int = 1,
) -> SeminormProfile:
    """Tabulate s_{q,l}(eps) over the grid for the requested scale.

    scale="mixed" sweeps both orders; "derivative" keeps l = 0; "weight"
    keeps q = 0.  Results are reduced in eps order regardless of jobs.
    """
    if scale not in ("mixed", "derivative", "weight"):
        raise ValueError(f"unknown sweep scale {scale!r}")
    eps_values = eps_grid.values if isinstance(eps_grid, EpsilonGrid) else tuple(eps_grid)
    work = lambda e: _sweep_one_eps(net, e, max_q, max_l, policy, scale, mask)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, eps_values))
    else:
        results = [work(e) for e in eps_values]
    values = np.stack([r[0] for r in results])
    meta = tuple(r[1] for r in results)
    return SeminormProfile(
        scale_kind=scale,
        net_label=net.label,
        eps=tuple(eps_values),
        values=values,
        grid_meta=meta,
        mask=mask,
    )


# ----------------------------------------------------------------------------
# tabulated CSV ingest

_TAB_COLUMNS = ("eps", "x", "value_re", "value_im")


def load_tabulated(path, domain: Optional[Box] = None) -> Net:
    """Read a tabulated net from CSV with columns eps,x,value_re[,value_im].

    Strict: unknown or missing columns, non-numeric fields, ragged or
    non-uniform per-eps grids are all rejected.
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError("empty tabulated file")
        header = [h.strip() for h in header]
        if header == list(_TAB_COLUMNS[:3]):
            has_im = False
        elif header == list(_TAB_COLUMNS):
            has_im = True
        else:
            raise ValueError(
                f"expected columns {_TAB_COLUMNS[:3]} (value_im optional), got {header}"
            )
        for ln, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ValueError(f"line {ln}: expected {len(header)} fields, got {len(row)}")
            try:
                nums = [float(c) for c in row]
            except ValueError as exc:
                raise ValueError(f"line {ln}: non-numeric field ({exc})") from None
            rows.append(nums)
    if not rows:
        raise ValueError("tabulated file has no data rows")
    samples = {}
    by_eps = {}
    for nums in rows:
        by_eps.setdefault(nums[0], []).append(nums[1:])
    for e, recs in by_eps.items():
        recs.sort(key=lambda r: r[0])
        x = np.array([r[0] for r in recs])
        if len(x) < 8:
            raise ValueError(f"eps={e}: need at least 8 samples")
        if len(np.unique(x)) != len(x):
            raise ValueError(f"eps={e}: duplicate x nodes")
        dx = np.diff(x)
        if not np.allclose(dx, dx[0], rtol=1e-8, atol=0):
            raise ValueError(f"eps={e}: nodes are not uniformly spaced")
        if has_im:
            v = np.array([complex(r[1], r[2]) for r in recs])
        else:
            v = np.array([r[1] for r in recs])
        samples[e] = (x, v)
    fam = Tabulated(samples, complex_valued=has_im)
    if domain is None:
        domain = Box.full_line()
    return Net(family=fam, domain=domain, derivative_mode="finite_difference")
