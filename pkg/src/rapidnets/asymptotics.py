"""Growth-exponent estimation for seminorm series and membership verdicts.

A seminorm series s(eps) over a geometric eps grid is summarized by a
power-law fit  s(eps) ~ C * eps^(-N)  obtained from least squares on
(log eps, log s).  The fitted N is the growth exponent: positive N means
blow-up, negative N polynomial decay.  Series whose sliding-window slopes
keep steepening past m_max are classed superpolynomial instead of being
forced into a power law; identically zero series are flat_zero (exponent 0
by convention); series with under 4 usable points are flagged insufficient
and never produce an exponent.

Classification turns a fitted table into required orders per derivative /
weight order and asks a regular sequence set whether it dominates them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .regular_sets import (
    DominationResult,
    DoubleSeqWindow,
    RegularSetSpec,
    SeqWindow,
    dominates,
)
from .nets import SeminormProfile

ZERO_FLOOR = 1e-300
MIN_FIT_POINTS = 4
SLOPE_WINDOW = 4
SUPERPOLY_TOL = 1e-6
DEFAULT_M_MAX = 8

DECAY_CLASSES = ("polynomial", "superpolynomial", "flat_zero", "insufficient")

EXPONENT_CSV_COLUMNS = ("q", "l", "exponent", "residual", "decay_class")


def ceil_tenth(x: float) -> float:
    """Round up to the next tenth, with a tiny slack against float fuzz."""
    return math.ceil(round(x * 10.0, 9)) / 10.0


@dataclass(frozen=True)
class ExponentFit:
    """Power-law summary of one seminorm series."""

    decay_class: str
    exponent: Optional[float]
    residual: Optional[float]
    n_points: int
    window_slopes: tuple = ()

    @property
    def required_order(self) -> Optional[float]:
        """Smallest tabulated order eps^-N that dominates the series.

        flat_zero and superpolynomial series are dominated by order 0;
        insufficient series give None.
        """
        if self.decay_class in ("flat_zero", "superpolynomial"):
            return 0.0
        if self.decay_class == "insufficient":
            return None
        return max(0.0, ceil_tenth(self.exponent + self.residual))

    @property
    def is_null_like(self) -> bool:
        """True when the series vanishes faster than every power of eps."""
        return self.decay_class in ("flat_zero", "superpolynomial")


def window_slopes(log_eps: np.ndarray, log_s: np.ndarray, width: int = SLOPE_WINDOW):
    """Slopes d(log s)/d(log eps) over sliding windows, large eps first."""
    n = len(log_eps)
    out = []
    for start in range(0, n - width + 1):
        sl = slice(start, start + width)
        x = log_eps[sl] - log_eps[sl].mean()
        coef = np.polyfit(x, log_s[sl], 1)
        out.append(float(coef[0]))
    return tuple(out)


def fit_exponent(series, eps_values, m_max: int = DEFAULT_M_MAX) -> ExponentFit:
    """Fit s(eps) ~ C eps^(-N); returns the exponent N and fit diagnostics."""
    s_arr = np.asarray(tuple(series), dtype=float)
    eps_arr = np.asarray(tuple(eps_values), dtype=float)
    if eps_arr.shape != s_arr.shape or eps_arr.ndim != 1:
        raise ValueError("series and eps must be 1-D of equal length")
    if (s_arr < 0).any():
        raise ValueError("seminorm series must be non-negative")
    keep = s_arr > ZERO_FLOOR
    if not keep.any():
        return ExponentFit(decay_class="flat_zero", exponent=0.0, residual=0.0, n_points=0)
    if keep.sum() < MIN_FIT_POINTS:
        return ExponentFit(
            decay_class="insufficient", exponent=None, residual=None, n_points=int(keep.sum())
        )
    le = np.log(eps_arr[keep])
    ls = np.log(s_arr[keep])
    slopes = window_slopes(le, ls)
    if slopes and slopes[-1] >= m_max:
        rising = all(b >= a - SUPERPOLY_TOL for a, b in zip(slopes, slopes[1:]))
        if rising:
            return ExponentFit(
                decay_class="superpolynomial",
                exponent=None,
                residual=None,
                n_points=int(keep.sum()),
                window_slopes=slopes,
            )
    x = le - le.mean()
    coef = np.polyfit(x, ls, 1)
    fitted = np.polyval(coef, x)
    resid = float(np.sqrt(np.mean((ls - fitted) ** 2)))
    return ExponentFit(
        decay_class="polynomial",
        exponent=float(-coef[0]),
        residual=resid,
        n_points=int(keep.sum()),
        window_slopes=slopes,
    )


@dataclass(frozen=True)
class ExponentProfile:
    """Per-(q, l) exponent fits for one seminorm profile."""

    scale_kind: str
    net_label: str
    eps: tuple
    fits: tuple  # fits[q][l] -> ExponentFit
    m_max: int

    @property
    def max_q(self) -> int:
        return len(self.fits) - 1

    @property
    def max_l(self) -> int:
        return len(self.fits[0]) - 1

    def fit(self, q: int, l: int = 0) -> ExponentFit:
        return self.fits[q][l]

    def exponent_table(self) -> np.ndarray:
        out = np.full((self.max_q + 1, self.max_l + 1), np.nan)
        for q, row in enumerate(self.fits):
            for l, f in enumerate(row):
                if f.exponent is not None:
                    out[q, l] = f.exponent
        return out

    def order_table(self) -> np.ndarray:
        out = np.full((self.max_q + 1, self.max_l + 1), np.nan)
        for q, row in enumerate(self.fits):
            for l, f in enumerate(row):
                r = f.required_order
                out[q, l] = np.nan if r is None else r
        return out

    def class_table(self) -> tuple:
        return tuple(tuple(f.decay_class for f in row) for row in self.fits)

    def all_null_like(self) -> bool:
        return all(f.is_null_like for row in self.fits for f in row)

    def insufficient_cells(self) -> tuple:
        return tuple(
            (q, l)
            for q, row in enumerate(self.fits)
            for l, f in enumerate(row)
            if f.decay_class == "insufficient"
        )

    def to_rows(self) -> list:
        """One dict per (q, l) cell with the CSV export columns."""
        rows = []
        for q, row in enumerate(self.fits):
            for l, f in enumerate(row):
                rows.append(
                    {
                        "q": q,
                        "l": l,
                        "exponent": f.exponent,
                        "residual": f.residual,
                        "decay_class": f.decay_class,
                    }
                )
        return rows


def fit_profile(profile: SeminormProfile, m_max: int = DEFAULT_M_MAX) -> ExponentProfile:
    """Fit every (q, l) series of a seminorm profile."""
    fits = []
    for q in range(profile.values.shape[1]):
        row = []
        for l in range(profile.values.shape[2]):
            row.append(fit_exponent(profile.series(q, l), profile.eps, m_max=m_max))
        fits.append(tuple(row))
    return ExponentProfile(
        scale_kind=profile.scale_kind,
        net_label=profile.net_label,
        eps=profile.eps,
        fits=tuple(fits),
        m_max=m_max,
    )


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of testing a fitted profile against a regular sequence set.

    moderate / negligible are None (indeterminate) when some series had too
    few usable points; an indeterminate verdict is never reported moderate.
    """

    scale_kind: str
    net_label: str
    spec_kind: str
    arity: str
    moderate: Optional[bool]
    negligible: Optional[bool]
    window: tuple  # (max_q, max_l, (eps_min, eps_max))
    required_orders: Optional[object]
    domination: Optional[DominationResult]
    cell_classes: tuple
    notes: tuple = ()


def _required_window(expo: ExponentProfile):
    table = expo.order_table()
    if expo.scale_kind == "mixed":
        return DoubleSeqWindow(tuple(tuple(row) for row in table))
    if expo.scale_kind == "derivative":
        return SeqWindow(tuple(table[:, 0]))
    # weight and fourier_weight profiles vary in l only
    return SeqWindow(tuple(table[0, :]))


def classify(expo: ExponentProfile, spec: RegularSetSpec) -> MembershipVerdict:
    """Decide moderateness and negligibility of a fitted profile.

    The spec's arity must match the profile: double for the mixed scale,
    single for derivative / weight / fourier-weight scales.
    """
    want_arity = "double" if expo.scale_kind == "mixed" else "single"
    if spec.arity != want_arity:
        raise ValueError(
            f"{expo.scale_kind} scale needs a {want_arity}-index regular set, "
            f"got {spec.arity}"
        )
    classes = expo.class_table()
    window = (
        expo.max_q,
        expo.max_l,
        (min(expo.eps), max(expo.eps)),
    )
    bad = expo.insufficient_cells()
    if bad:
        return MembershipVerdict(
            scale_kind=expo.scale_kind,
            net_label=expo.net_label,
            spec_kind=spec.kind,
            arity=spec.arity,
            moderate=None,
            negligible=None,
            window=window,
            required_orders=None,
            domination=None,
            cell_classes=classes,
            notes=(f"insufficient data in cells {list(bad)}",),
        )
    orders = _required_window(expo)
    dom = dominates(spec, orders)
    negligible = expo.all_null_like()
    return MembershipVerdict(
        scale_kind=expo.scale_kind,
        net_label=expo.net_label,
        spec_kind=spec.kind,
        arity=spec.arity,
        moderate=dom.feasible,
        negligible=negligible,
        window=window,
        required_orders=orders,
        domination=dom,
        cell_classes=classes,
    )


def classify_profile(
    profile: SeminormProfile, spec: RegularSetSpec, m_max: int = DEFAULT_M_MAX
) -> MembershipVerdict:
    """Convenience: fit then classify in one call."""
    return classify(fit_profile(profile, m_max=m_max), spec)
