"""Empirical verification of the characterization results on builtin nets.

Three checks are provided, each producing a TheoremReport:

* ``check_intersection`` - membership in the mixed weighted-derivative scale
  against a double-index regular set equals the conjunction of derivative-
  only membership (row-zero projection) and weight-only membership
  (column-zero projection); per-cell fitted exponents must satisfy the
  subadditivity bound N(q,l) <= N(q,0) + N(0,l) + margin.
* ``check_fourier`` - same equality with the frequency-weight scale taking
  the derivative scale's place; needs a one-dimensional full-line domain.
* ``check_null`` - in each scale, superpolynomial decay of the order-zero
  seminorm is equivalent to superpolynomial decay at every order.

``taylor_derivative_bound`` exercises the first-order expansion bound

    |d_i u(x)| <= |u(x + h e_i) - u(x)| / h + (h/2) sup_seg |d_i^2 u|

with step h = eps^(N2 + m), which underlies the null characterizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .asymptotics import (
    DEFAULT_M_MAX,
    ExponentProfile,
    MembershipVerdict,
    ceil_tenth,
    classify,
    fit_profile,
)
from .fourier import FourierUnavailable, fourier_sweep
from .nets import (
    Box,
    DeltaNet,
    EpsilonGrid,
    GaussianPeak,
    GridPolicy,
    Net,
    Oscillatory,
    PolyWeight,
    SampleGrid,
    SeminormProfile,
    SuperSmall,
    seminorm_sweep,
    stable_diff_along,
    _factors,
)
from .regular_sets import (
    DoubleSeqWindow,
    RegularSetSpec,
    SeqWindow,
    project_col_zero,
    project_row_zero,
)

THEOREM_IDS = (
    "intersection_th10",
    "fourier_prop2",
    "null_prop1",
    "null_prop_star",
    "null_fourier",
    "schwartz_prop_star",
)

NULL_THEOREM_BY_SCALE = {
    "derivative": "null_prop1",
    "weight": "null_prop_star",
    "fourier_weight": "null_fourier",
    "mixed": "schwartz_prop_star",
}

REPORT_STATUSES = (
    "pass",
    "fail",
    "not_applicable",
    "indeterminate",
    "precondition_failed",
)


@dataclass(frozen=True)
class CheckConfig:
    """Shared knobs for all theorem checks."""

    eps_grid: EpsilonGrid = field(default_factory=EpsilonGrid)
    max_q: int = 4
    max_l: int = 4
    m_max: int = DEFAULT_M_MAX
    exponent_margin: float = 0.15
    policy: GridPolicy = field(default_factory=GridPolicy)
    jobs: int = 1
    taylor_orders: tuple = (1, 2)
    taylor_tol: float = 1e-9

    def snapshot(self) -> dict:
        return {
            "eps_grid": {
                "eps0": self.eps_grid.eps0,
                "ratio": self.eps_grid.ratio,
                "count": self.eps_grid.count,
            },
            "max_q": self.max_q,
            "max_l": self.max_l,
            "m_max": self.m_max,
            "exponent_margin": self.exponent_margin,
            "policy": {
                "base_nodes": self.policy.base_nodes,
                "min_core_nodes": self.policy.min_core_nodes,
                "fd_density": self.policy.fd_density,
                "fourier_oversample": self.policy.fourier_oversample,
                "tail_rtol": self.policy.tail_rtol,
                "refine": self.policy.refine,
            },
            "jobs": self.jobs,
            "taylor_orders": list(self.taylor_orders),
            "taylor_tol": self.taylor_tol,
        }


DEFAULT_CONFIG = CheckConfig()


@dataclass(frozen=True)
class CellCheck:
    """One per-cell exponent comparison lhs <= rhs + margin."""

    q: int
    l: int
    lhs: Optional[float]
    rhs: Optional[float]
    margin: float
    ok: bool
    skipped: bool = False

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "l": self.l,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "ok": self.ok,
            "skipped": self.skipped,
        }


def _verdict_dict(v: Optional[MembershipVerdict]) -> Optional[dict]:
    if v is None:
        return None
    dom = None
    if v.domination is not None:
        wp = v.domination.witness_params
        dom = {
            "feasible": v.domination.feasible,
            "witness_params": _plain(wp),
            "margin": _plain(v.domination.margin),
        }
    orders = None
    if v.required_orders is not None:
        w = v.required_orders
        orders = _plain(getattr(w, "values", w))
    return {
        "scale_kind": v.scale_kind,
        "net": v.net_label,
        "spec_kind": v.spec_kind,
        "arity": v.arity,
        "moderate": v.moderate,
        "negligible": v.negligible,
        "window": _plain(v.window),
        "required_orders": orders,
        "domination": dom,
        "cell_classes": _plain(v.cell_classes),
        "notes": list(v.notes),
    }


def _plain(obj):
    """Recursively convert numpy scalars/arrays and tuples to JSON types."""
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return repr(obj)
    if isinstance(obj, (SeqWindow, DoubleSeqWindow)):
        # sequence windows serialize as their value tables
        return _plain(obj.values)
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    return obj


@dataclass(frozen=True)
class TheoremReport:
    """Structured verdict on one characterization check for one net."""

    theorem_id: str
    net_label: str
    status: str
    agree: Optional[bool]
    lhs_verdict: Optional[MembershipVerdict]
    rhs_verdicts: tuple
    cells: tuple
    details: dict
    config: dict
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "net": self.net_label,
            "status": self.status,
            "pass": self.passed,
            "agree": self.agree,
            "lhs_verdict": _verdict_dict(self.lhs_verdict),
            "rhs_verdicts": [_verdict_dict(v) for v in self.rhs_verdicts],
            "cells": [c.to_dict() for c in self.cells],
            "details": _plain(self.details),
            "config": _plain(self.config),
            "notes": list(self.notes),
        }


# ----------------------------------------------------------------------------
# builtin suite


def builtin_suite() -> tuple:
    """Nets covering moderate, negligible, oscillatory and decaying behavior
    on the full line and the positive half-line."""
    r = Box.full_line()
    rp = Box.half_line()
    return (
        Net(GaussianPeak(1.0), r),
        Net(DeltaNet(1.0), r),
        Net(SuperSmall(), r),
        Net(Oscillatory(), r),
        Net(PolyWeight(2.0, 3), r),
        Net(GaussianPeak(-1.0), r),
        Net(GaussianPeak(1.0), rp),
        Net(SuperSmall(), rp),
    )


def fourier_applicable(net: Net) -> bool:
    return net.domain.dim == 1 and net.domain.axis_is_full_line(0)


# ----------------------------------------------------------------------------
# profile plumbing


def mixed_profile(net: Net, config: CheckConfig = DEFAULT_CONFIG) -> SeminormProfile:
    return seminorm_sweep(
        net,
        config.eps_grid,
        max_q=config.max_q,
        max_l=config.max_l,
        policy=config.policy,
        scale="mixed",
        jobs=config.jobs,
    )


def marginal_profile(mixed: SeminormProfile, scale: str) -> SeminormProfile:
    """Slice the l=0 column (derivative) or q=0 row (weight) of a mixed sweep.

    The single-order scales coincide with these margins cell by cell, so
    slicing is exact and avoids recomputing grids.
    """
    if mixed.scale_kind != "mixed":
        raise ValueError("can only slice a mixed profile")
    if scale == "derivative":
        values = mixed.values[:, :, :1]
    elif scale == "weight":
        values = mixed.values[:, :1, :]
    else:
        raise ValueError(f"no marginal for scale {scale!r}")
    return SeminormProfile(
        scale_kind=scale,
        net_label=mixed.net_label,
        eps=mixed.eps,
        values=values,
        grid_meta=mixed.grid_meta,
        mask=mixed.mask,
    )


def _indeterminate(theorem_id, net, verdicts, config, notes):
    return TheoremReport(
        theorem_id=theorem_id,
        net_label=net.label,
        status="indeterminate",
        agree=None,
        lhs_verdict=verdicts[0],
        rhs_verdicts=tuple(verdicts[1:]),
        cells=(),
        details={},
        config=config.snapshot(),
        notes=tuple(notes),
    )


def _subadditivity_cells(expo: ExponentProfile, margin: float) -> tuple:
    """Checks N(q,l) <= N(q,0) + N(0,l) + margin on polynomial cells.

    Exponents are clamped at zero first: the combination bounds act on
    nonnegative growth orders, while a fitted exponent can be negative
    when the net itself shrinks with eps.
    """
    cells = []
    for q in range(1, expo.max_q + 1):
        for l in range(1, expo.max_l + 1):
            f_ql = expo.fit(q, l)
            f_q0 = expo.fit(q, 0)
            f_0l = expo.fit(0, l)
            if any(
                f.decay_class != "polynomial" for f in (f_ql, f_q0, f_0l)
            ):
                cells.append(
                    CellCheck(q=q, l=l, lhs=None, rhs=None, margin=margin, ok=True, skipped=True)
                )
                continue
            lhs = max(0.0, f_ql.exponent)
            rhs = max(0.0, f_q0.exponent) + max(0.0, f_0l.exponent)
            cells.append(
                CellCheck(
                    q=q, l=l, lhs=lhs, rhs=rhs, margin=margin, ok=lhs <= rhs + margin
                )
            )
    return tuple(cells)


def _half_box_detail(net, config, full) -> Optional[dict]:
    """Seminorm sweeps restricted to the two x1 half-boxes, when they exist.

    The halves are maxima over subsets of the same grid, so each must stay
    below the full sweep; reported next to the verdict, never changing it.
    """
    if not net.domain.straddles_zero(0):
        return None
    out = {}
    ok = True
    for side, mask in (("positive", "axis0_positive"), ("negative", "axis0_negative")):
        prof = seminorm_sweep(
            net,
            config.eps_grid,
            max_q=config.max_q,
            max_l=config.max_l,
            policy=config.policy,
            scale="mixed",
            mask=mask,
            jobs=config.jobs,
        )
        within = bool(np.all(prof.values <= full.values * (1.0 + 1e-12) + 1e-300))
        ok = ok and within
        out[side] = {
            "max_value": float(prof.values.max()),
            "within_full": within,
        }
    out["full_max_value"] = float(full.values.max())
    out["all_within_full"] = ok
    return out


def check_intersection(
    net: Net,
    spec: RegularSetSpec,
    config: CheckConfig = DEFAULT_CONFIG,
    mixed: Optional[SeminormProfile] = None,
) -> TheoremReport:
    """Mixed-scale membership vs derivative-scale AND weight-scale membership."""
    if spec.arity != "double":
        raise ValueError("intersection check needs a double-index regular set")
    if mixed is None:
        mixed = mixed_profile(net, config)
    expo_mixed = fit_profile(mixed, m_max=config.m_max)
    expo_d = fit_profile(marginal_profile(mixed, "derivative"), m_max=config.m_max)
    expo_w = fit_profile(marginal_profile(mixed, "weight"), m_max=config.m_max)

    lhs = classify(expo_mixed, spec)
    rhs_d = classify(expo_d, project_row_zero(spec))
    rhs_w = classify(expo_w, project_col_zero(spec))

    if lhs.moderate is None or rhs_d.moderate is None or rhs_w.moderate is None:
        return _indeterminate(
            "intersection_th10", net, (lhs, rhs_d, rhs_w), config,
            ["indeterminate membership verdicts"],
        )

    agree_mod = lhs.moderate == (rhs_d.moderate and rhs_w.moderate)
    agree_neg = lhs.negligible == (rhs_d.negligible and rhs_w.negligible)
    agree = agree_mod and agree_neg
    cells = _subadditivity_cells(expo_mixed, config.exponent_margin)
    cells_ok = all(c.ok for c in cells)
    half = _half_box_detail(net, config, mixed)
    half_ok = half is None or half["all_within_full"]
    # Verdict agreement is the claim under test; exponent cells and half-box
    # tables localize where the pipelines drift but do not decide the outcome.
    status = "pass" if agree else "fail"
    details = {
        "agree_moderate": agree_mod,
        "agree_negligible": agree_neg,
        "cells_ok": cells_ok,
        "half_boxes_ok": half_ok,
        "exponents_mixed": expo_mixed.exponent_table(),
        "exponents_derivative": expo_d.exponent_table()[:, 0],
        "exponents_weight": expo_w.exponent_table()[0, :],
    }
    if half is not None:
        details["half_boxes"] = half
    notes = []
    if not cells_ok:
        bad = [(c.q, c.l) for c in cells if not c.ok]
        notes.append(f"exponent sub-additivity drift at cells {bad}")
    if not half_ok:
        notes.append("half-box seminorm exceeded full-box value")
    return TheoremReport(
        theorem_id="intersection_th10",
        net_label=net.label,
        status=status,
        agree=agree,
        lhs_verdict=lhs,
        rhs_verdicts=(rhs_d, rhs_w),
        cells=cells,
        details=details,
        config=config.snapshot(),
        notes=tuple(notes),
    )


def check_fourier(
    net: Net,
    spec: RegularSetSpec,
    config: CheckConfig = DEFAULT_CONFIG,
    mixed: Optional[SeminormProfile] = None,
    fourier: Optional[SeminormProfile] = None,
) -> TheoremReport:
    """Mixed-scale membership vs weight-scale AND frequency-weight membership."""
    if spec.arity != "double":
        raise ValueError("fourier check needs a double-index regular set")
    if not fourier_applicable(net):
        return TheoremReport(
            theorem_id="fourier_prop2",
            net_label=net.label,
            status="not_applicable",
            agree=None,
            lhs_verdict=None,
            rhs_verdicts=(),
            cells=(),
            details={"reason": "domain is not the full line"},
            config=config.snapshot(),
            notes=("frequency-side scales need a one-dimensional full-line domain",),
        )
    if mixed is None:
        mixed = mixed_profile(net, config)
    if fourier is None:
        fourier = fourier_sweep(
            net, config.eps_grid, max_l=config.max_l, policy=config.policy, jobs=config.jobs
        )
    expo_mixed = fit_profile(mixed, m_max=config.m_max)
    expo_d = fit_profile(marginal_profile(mixed, "derivative"), m_max=config.m_max)
    expo_w = fit_profile(marginal_profile(mixed, "weight"), m_max=config.m_max)
    expo_f = fit_profile(fourier, m_max=config.m_max)

    lhs = classify(expo_mixed, spec)
    rhs_w = classify(expo_w, project_col_zero(spec))
    rhs_f = classify(expo_f, project_row_zero(spec))

    if lhs.moderate is None or rhs_w.moderate is None or rhs_f.moderate is None:
        return _indeterminate(
            "fourier_prop2", net, (lhs, rhs_w, rhs_f), config,
            ["indeterminate membership verdicts"],
        )

    agree_mod = lhs.moderate == (rhs_w.moderate and rhs_f.moderate)
    agree_neg = lhs.negligible == (rhs_w.negligible and rhs_f.negligible)
    agree = agree_mod and agree_neg

    # smoothing step: frequency-weight growth at order l is controlled by
    # derivative growth at the same order
    cells = []
    for l in range(min(config.max_l, config.max_q) + 1):
        f_f = expo_f.fit(0, l)
        f_d = expo_d.fit(l, 0)
        if f_f.decay_class != "polynomial" or f_d.decay_class != "polynomial":
            cells.append(
                CellCheck(q=l, l=l, lhs=None, rhs=None, margin=config.exponent_margin,
                          ok=True, skipped=True)
            )
            continue
        cells.append(
            CellCheck(
                q=l,
                l=l,
                lhs=f_f.exponent,
                rhs=f_d.exponent,
                margin=config.exponent_margin,
                ok=f_f.exponent <= f_d.exponent + config.exponent_margin,
            )
        )
    cells = tuple(cells)
    cells_ok = all(c.ok for c in cells)
    status = "pass" if agree else "fail"
    tail_ok = all(m["tail_ok"] for m in fourier.grid_meta)
    details = {
        "agree_moderate": agree_mod,
        "agree_negligible": agree_neg,
        "cells_ok": cells_ok,
        "exponents_mixed": expo_mixed.exponent_table(),
        "exponents_weight": expo_w.exponent_table()[0, :],
        "exponents_fourier_weight": expo_f.exponent_table()[0, :],
        "exponents_derivative": expo_d.exponent_table()[:, 0],
        "spectral_tails_ok": tail_ok,
    }
    notes = []
    if not cells_ok:
        bad = [c.l for c in cells if not c.ok]
        notes.append(
            f"spectral-vs-spatial exponent drift at weight orders {bad} "
            "(pre-asymptotic eps window)"
        )
    return TheoremReport(
        theorem_id="fourier_prop2",
        net_label=net.label,
        status=status,
        agree=agree,
        lhs_verdict=lhs,
        rhs_verdicts=(rhs_w, rhs_f),
        cells=cells,
        details=details,
        config=config.snapshot(),
        notes=tuple(notes),
    )


def check_null(
    net: Net,
    scale: str,
    config: CheckConfig = DEFAULT_CONFIG,
    profile: Optional[SeminormProfile] = None,
) -> TheoremReport:
    """Order-zero superpolynomial decay vs decay at all orders, per scale."""
    theorem_id = NULL_THEOREM_BY_SCALE.get(scale)
    if theorem_id is None:
        raise ValueError(f"unknown scale {scale!r}")
    if scale == "fourier_weight" and not fourier_applicable(net):
        return TheoremReport(
            theorem_id=theorem_id,
            net_label=net.label,
            status="not_applicable",
            agree=None,
            lhs_verdict=None,
            rhs_verdicts=(),
            cells=(),
            details={"reason": "domain is not the full line"},
            config=config.snapshot(),
        )
    if profile is None:
        if scale == "fourier_weight":
            profile = fourier_sweep(
                net, config.eps_grid, max_l=config.max_l, policy=config.policy,
                jobs=config.jobs,
            )
        else:
            profile = seminorm_sweep(
                net,
                config.eps_grid,
                max_q=config.max_q,
                max_l=config.max_l,
                policy=config.policy,
                scale=scale,
                jobs=config.jobs,
            )
    expo = fit_profile(profile, m_max=config.m_max)
    if expo.insufficient_cells():
        return _indeterminate(
            theorem_id, net, (None,), config,
            [f"insufficient data in cells {list(expo.insufficient_cells())}"],
        )
    # the characterization assumes the net is moderate in this scale; the
    # unconstrained set accepts any finite exponent window
    arity = "double" if scale == "mixed" else "single"
    moderate = classify(expo, RegularSetSpec(kind="all", arity=arity))
    if not moderate.moderate:
        return TheoremReport(
            theorem_id=theorem_id,
            net_label=net.label,
            status="precondition_failed",
            agree=None,
            lhs_verdict=moderate,
            rhs_verdicts=(),
            cells=(),
            details={"reason": "net is not moderate in this scale"},
            config=config.snapshot(),
        )
    base = expo.fit(0, 0)
    order_zero_null = base.is_null_like
    all_orders_null = expo.all_null_like()
    agree = order_zero_null == all_orders_null
    details = {
        "scale": scale,
        "order_zero_null": order_zero_null,
        "all_orders_null": all_orders_null,
        "negligible": all_orders_null,
        "cell_classes": expo.class_table(),
        "order_zero_window_slopes": base.window_slopes,
    }
    return TheoremReport(
        theorem_id=theorem_id,
        net_label=net.label,
        status="pass" if agree else "fail",
        agree=agree,
        lhs_verdict=moderate,
        rhs_verdicts=(),
        cells=(),
        details=details,
        config=config.snapshot(),
    )


# ----------------------------------------------------------------------------
# the expansion bound


@dataclass(frozen=True)
class BoundReport:
    """Result of the difference-quotient bound over probe points."""

    net_label: str
    eps: float
    axis: int
    m: int
    n2: float
    step: float
    status: str  # "ok" | "step_unresolvable"
    max_violation: float
    n_probes: int
    argmax_point: Optional[tuple]
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "ok" and self.max_violation <= 1e-9

    def to_dict(self) -> dict:
        return {
            "net": self.net_label,
            "eps": self.eps,
            "axis": self.axis,
            "m": self.m,
            "n2": self.n2,
            "step": self.step,
            "status": self.status,
            "max_violation": self.max_violation,
            "n_probes": self.n_probes,
            "argmax_point": _plain(self.argmax_point),
            "note": self.note,
        }


def measure_second_derivative_order(net: Net, config: CheckConfig = DEFAULT_CONFIG) -> float:
    """N2: required growth order of the second-derivative seminorm."""
    prof = seminorm_sweep(
        net,
        config.eps_grid,
        max_q=2,
        max_l=0,
        policy=config.policy,
        scale="derivative",
        jobs=config.jobs,
    )
    f = fit_profile(prof, m_max=config.m_max).fit(2, 0)
    r = f.required_order
    if r is None:
        raise ValueError("cannot measure the second-derivative order")
    return r


def _segment_second_sup(net, eps, probes, others, axis, h, dim):
    """sup over [x, x+h] of |d_axis^2 u| per probe, scan plus refinement.

    Returns sampled maxima; dense endpoints-included scan followed by a
    bracketing refinement around each argmax so the sup is never
    underestimated beyond roundoff.
    """

    def second(points):
        # points: array of axis coordinates per probe (any shape)
        fams = _factors(net.family)
        if dim == 1:
            return np.abs(fams[axis].deriv(eps, 2, points))
        out = np.abs(fams[axis].deriv(eps, 2, points))
        for d, f in enumerate(fams):
            if d != axis:
                out = out * abs(complex(f.value(eps, np.array([others[d]]))[0]))
        return out

    n_scan = 65
    offs = np.linspace(0.0, h, n_scan)
    pts = probes[:, None] + offs[None, :]
    vals = second(pts)
    best = vals.max(axis=1)
    j = vals.argmax(axis=1)
    lo = probes + offs[np.maximum(j - 1, 0)]
    hi = probes + offs[np.minimum(j + 1, n_scan - 1)]
    for _ in range(60):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        v1 = second(m1)
        v2 = second(m2)
        best = np.maximum(best, np.maximum(v1, v2))
        shrink_hi = v1 > v2
        hi = np.where(shrink_hi, m2, hi)
        lo = np.where(shrink_hi, lo, m1)
    return best


def taylor_derivative_bound(
    net: Net,
    eps: float,
    axis: int = 0,
    m: int = 1,
    n2: Optional[float] = None,
    grid: Optional[SampleGrid] = None,
    config: CheckConfig = DEFAULT_CONFIG,
    n_probes: int = 65,
) -> BoundReport:
    """Check |d_i u| <= |difference quotient| + remainder at probe nodes."""
    if n2 is None:
        n2 = measure_second_derivative_order(net, config)
    if grid is None:
        grid = config.policy.spatial_grid(net, eps)
    dim = grid.dim
    if not 0 <= axis < dim:
        raise ValueError("axis out of range")
    h = eps ** (n2 + m)
    nodes = grid.axes[axis]
    spacing = grid.spacings[axis]
    if net.derivative_mode != "analytic":
        if h < 0.999 * spacing:
            return BoundReport(
                net_label=net.label, eps=eps, axis=axis, m=m, n2=n2, step=h,
                status="step_unresolvable", max_violation=float("nan"),
                n_probes=0, argmax_point=None,
                note="step below grid spacing; lower m or n2 window",
            )
        return _taylor_on_grid(net, eps, axis, m, n2, grid, h, n_probes)
    xmax = float(np.abs(nodes).max())
    if h <= 16.0 * np.finfo(float).eps * max(1.0, xmax):
        return BoundReport(
            net_label=net.label, eps=eps, axis=axis, m=m, n2=n2, step=h,
            status="step_unresolvable", max_violation=float("nan"),
            n_probes=0, argmax_point=None,
            note="step underflows float resolution at the probe scale",
        )
    hi_bound = net.domain.intervals[axis][1]
    usable = nodes[nodes + h < hi_bound]
    stride = max(1, len(usable) // n_probes)
    probes = usable[::stride]
    if len(probes) == 0:
        return BoundReport(
            net_label=net.label, eps=eps, axis=axis, m=m, n2=n2, step=h,
            status="step_unresolvable", max_violation=float("nan"),
            n_probes=0, argmax_point=None, note="no probe admits the step",
        )

    # pin the other coordinates at the |u| argmax of their own factors
    others = {}
    fams = _factors(net.family)
    for d in range(dim):
        if d == axis:
            continue
        vals_d = np.abs(fams[d].value(eps, grid.axes[d]))
        others[d] = float(grid.axes[d][int(np.argmax(vals_d))])

    if dim == 1:
        lhs = np.abs(fams[0].deriv(eps, 1, probes))
        points = (probes,)
    else:
        lhs = np.abs(fams[axis].deriv(eps, 1, probes))
        points = []
        for d in range(dim):
            if d == axis:
                points.append(probes)
            else:
                lhs = lhs * abs(complex(fams[d].value(eps, np.array([others[d]]))[0]))
                points.append(np.full_like(probes, others[d]))
        points = tuple(points)

    dq = np.abs(stable_diff_along(net, eps, points, axis, h)) / h
    sup2 = _segment_second_sup(net, eps, probes, others, axis, h, dim)
    viol = lhs - dq - 0.5 * h * sup2
    k = int(np.argmax(viol))
    return BoundReport(
        net_label=net.label,
        eps=eps,
        axis=axis,
        m=m,
        n2=n2,
        step=h,
        status="ok",
        max_violation=float(viol[k]),
        n_probes=len(probes),
        argmax_point=(float(probes[k]),),
    )


def _taylor_on_grid(net, eps, axis, m, n2, grid, h, n_probes):
    """Bound check for sampled nets: step rounded to a whole node count."""
    from .nets import evaluate, fd_derivative_1d

    nodes = grid.axes[0]
    sp = grid.spacings[0]
    vals = evaluate(net, eps, grid)
    k = max(1, int(round(h / sp)))
    h_eff = k * sp
    d1 = np.abs(fd_derivative_1d(vals, sp, 1))
    d2 = np.abs(fd_derivative_1d(vals, sp, 2))
    n = len(nodes)
    idx = np.arange(0, n - k)
    if len(idx) == 0:
        return BoundReport(
            net_label=net.label, eps=eps, axis=axis, m=m, n2=n2, step=h_eff,
            status="step_unresolvable", max_violation=float("nan"),
            n_probes=0, argmax_point=None, note="step exceeds the grid span",
        )
    stride = max(1, len(idx) // n_probes)
    idx = idx[::stride]
    lhs = d1[idx]
    dq = np.abs(vals[idx + k] - vals[idx]) / h_eff
    sup2 = np.array([d2[i : i + k + 1].max() for i in idx])
    viol = lhs - dq - 0.5 * h_eff * sup2
    j = int(np.argmax(viol))
    return BoundReport(
        net_label=net.label, eps=eps, axis=axis, m=m, n2=n2, step=h_eff,
        status="ok", max_violation=float(viol[j]), n_probes=len(idx),
        argmax_point=(float(nodes[idx[j]]),),
        note=f"on-grid differences, step = {k} nodes",
    )


@dataclass(frozen=True)
class TaylorSummary:
    """Expansion-bound results aggregated over eps, axes and step orders."""

    net_label: str
    n2: float
    tolerance: float
    max_violation: Optional[float]
    all_ok: bool
    reports: tuple

    @property
    def passed(self) -> bool:
        return self.all_ok

    def to_dict(self) -> dict:
        return {
            "net": self.net_label,
            "n2": self.n2,
            "tolerance": self.tolerance,
            "max_violation": self.max_violation,
            "pass": self.all_ok,
            "bounds": [r.to_dict() for r in self.reports],
        }


def check_taylor(net: Net, config: CheckConfig = DEFAULT_CONFIG) -> TaylorSummary:
    """Run the expansion bound for every eps, axis and m in the config."""
    n2 = measure_second_derivative_order(net, config)
    reports = []
    worst = -math.inf
    all_ok = True
    for eps in config.eps_grid.values:
        for axis in range(net.domain.dim):
            for m in config.taylor_orders:
                r = taylor_derivative_bound(
                    net, eps, axis=axis, m=m, n2=n2, config=config
                )
                reports.append(r)
                if r.status != "ok":
                    all_ok = False
                else:
                    worst = max(worst, r.max_violation)
                    all_ok = all_ok and r.max_violation <= config.taylor_tol
    return TaylorSummary(
        net_label=net.label,
        n2=n2,
        tolerance=config.taylor_tol,
        max_violation=None if worst == -math.inf else worst,
        all_ok=all_ok,
        reports=tuple(reports),
    )
