"""Finite windows of admissible growth-exponent sequences and domination checks.

A "sequence set" here is one of four families of non-negative integer-indexed
sequences, handled through finite windows N_0..N_M (single index) or
N_{q,l}, 0 <= q <= Q, 0 <= l <= L (double index):

* ``all``     - every sequence
* ``bounded`` - sequences bounded by some constant c
* ``affine``  - sequences dominated by a line a*m + b with a >= 0, b > 0
                (single index only)
* ``custom``  - finitely generated: explicit generator windows closed under
                index-shift-plus-constant, pointwise max and sup-convolution
                up to a configurable depth

Membership of a measured exponent window is always decided at window scale:
``dominates`` asks whether some element of the set lies above the window on
every index of the window, and returns a checked witness when one exists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

# strict positivity floor for the affine intercept
AFFINE_B_FLOOR = 1e-12

# (shift, add) pairs used when generating custom-set closures
_SHIFT_OPS = ((1, 0), (0, 1), (1, 1), (2, 0), (0, 2))


def _as_float_tuple(values) -> tuple:
    out = tuple(float(v) for v in values)
    if not out:
        raise ValueError("window must be non-empty")
    for v in out:
        if not np.isfinite(v):
            raise ValueError(f"window values must be finite, got {v}")
        if v < 0:
            raise ValueError(f"window values must be non-negative, got {v}")
    return out


@dataclass(frozen=True)
class SeqWindow:
    """Window N_0..N_M of a single-index exponent sequence."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", _as_float_tuple(self.values))

    @property
    def max_index(self) -> int:
        return len(self.values) - 1

    def __len__(self):
        return len(self.values)

    def __getitem__(self, m):
        return self.values[m]


@dataclass(frozen=True)
class DoubleSeqWindow:
    """Window N_{q,l} of a double-index exponent sequence, rows q, columns l."""

    values: tuple

    def __post_init__(self):
        rows = tuple(_as_float_tuple(r) for r in self.values)
        if not rows:
            raise ValueError("window must be non-empty")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("double window must be rectangular")
        object.__setattr__(self, "values", rows)

    @property
    def max_q(self) -> int:
        return len(self.values) - 1

    @property
    def max_l(self) -> int:
        return len(self.values[0]) - 1

    def row(self, q) -> tuple:
        return self.values[q]

    def __getitem__(self, ql):
        q, l = ql
        return self.values[q][l]

    def flat(self):
        return tuple(v for row in self.values for v in row)


VALID_KINDS = ("all", "bounded", "affine", "custom")
VALID_ARITIES = ("single", "double")


@dataclass(frozen=True)
class RegularSetSpec:
    """Description of one admissible sequence set.

    generators: for kind="custom" only; tuple of SeqWindow (single) or
    DoubleSeqWindow (double) generator windows.
    """

    kind: str
    arity: str = "single"
    generators: tuple = ()
    closure_depth: int = 3
    closure_budget: int = 512

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValueError(f"unknown kind {self.kind!r}, expected one of {VALID_KINDS}")
        if self.arity not in VALID_ARITIES:
            raise ValueError(f"unknown arity {self.arity!r}")
        if self.kind == "affine" and self.arity == "double":
            raise ValueError("affine sets are defined for single-index sequences only")
        if self.kind == "custom":
            if not self.generators:
                raise ValueError("custom spec needs at least one generator window")
            want = SeqWindow if self.arity == "single" else DoubleSeqWindow
            gens = tuple(
                g if isinstance(g, want) else want(tuple(g)) for g in self.generators
            )
            object.__setattr__(self, "generators", gens)
        elif self.generators:
            raise ValueError(f"kind={self.kind!r} takes no generators")
        if self.closure_depth < 0:
            raise ValueError("closure_depth must be >= 0")


@dataclass(frozen=True)
class DominationResult:
    """Outcome of a window-domination query.

    witness_params: bounded -> {"c": c}; affine -> {"a": a, "b": b};
    custom -> {"window": dominating element}; all -> None (the window itself
    is the witness).
    margin: minimum slack of the witness over the window.
    """

    feasible: bool
    witness_params: Optional[dict]
    margin: float


def affine_envelope(values: Sequence[float]):
    """Minimal affine majorant of a finite window, intercept first.

    Minimizes lexicographically (b, then a) over a >= 0, b >= 0 with
    a*m + b >= N_m for every window index m, then floors b at
    AFFINE_B_FLOOR to keep the intercept strictly positive.  The solution
    pins b at N_0 and takes the steepest slope required from there, which
    is the upper tangent line of the window seen from the leftmost point.

    Returns (a, b, margin).
    """
    vals = _as_float_tuple(values)
    b = vals[0]
    a = 0.0
    for m in range(1, len(vals)):
        need = (vals[m] - b) / m
        if need > a:
            a = need
    b_out = max(b, AFFINE_B_FLOOR)
    margin = min(a * m + b_out - vals[m] for m in range(len(vals)))
    return a, b_out, margin


def _shift_single(values: tuple, k: int, kp: int) -> tuple:
    # index shift clamped at the window edge; adds the constant everywhere
    top = len(values) - 1
    return tuple(values[min(m + k, top)] + kp for m in range(len(values)))


def _supconv_single(u: tuple, v: tuple) -> tuple:
    n = len(u)
    out = []
    for j in range(n):
        out.append(max(u[i] + v[j - i] for i in range(j + 1)))
    return tuple(out)


def _shift_double(rows: tuple, k: int, kp: int, kpp: int) -> tuple:
    tq = len(rows) - 1
    tl = len(rows[0]) - 1
    return tuple(
        tuple(rows[min(q + k, tq)][min(l + kp, tl)] + kpp for l in range(tl + 1))
        for q in range(tq + 1)
    )


def _supconv_double(u: tuple, v: tuple) -> tuple:
    nq, nl = len(u), len(u[0])
    out = []
    for q in range(nq):
        row = []
        for l in range(nl):
            row.append(
                max(
                    u[q1][l1] + v[q - q1][l - l1]
                    for q1 in range(q + 1)
                    for l1 in range(l + 1)
                )
            )
        out.append(tuple(row))
    return tuple(out)


def closure_windows(spec: RegularSetSpec) -> tuple:
    """Enumerate closure elements of a custom spec up to its depth/budget.

    Deterministic order: generators first, then each closure level in the
    order produced by the (shift, max, sup-convolution) operations.
    """
    if spec.kind != "custom":
        raise ValueError("closure_windows is defined for custom specs only")
    single = spec.arity == "single"
    raw = [g.values for g in spec.generators]
    seen = set(raw)
    frontier = list(raw)
    for _ in range(spec.closure_depth):
        if len(seen) >= spec.closure_budget:
            break
        new = []
        current = list(seen)
        for w in frontier:
            for k, kp in _SHIFT_OPS:
                cand = (
                    _shift_single(w, k, kp)
                    if single
                    else _shift_double(w, k, kp, k + kp)
                )
                if cand not in seen:
                    seen.add(cand)
                    new.append(cand)
                    if len(seen) >= spec.closure_budget:
                        break
            if len(seen) >= spec.closure_budget:
                break
        for u, v in itertools.combinations_with_replacement(current, 2):
            if len(seen) >= spec.closure_budget:
                break
            for cand in (
                (tuple(map(max, u, v)) if single else tuple(tuple(map(max, ru, rv)) for ru, rv in zip(u, v))),
                (_supconv_single(u, v) if single else _supconv_double(u, v)),
            ):
                if cand not in seen:
                    seen.add(cand)
                    new.append(cand)
        if not new:
            break
        frontier = new
    wrap = SeqWindow if single else DoubleSeqWindow
    ordered = raw + [w for w in sorted(seen - set(raw))]
    return tuple(wrap(w) for w in ordered)


def _window_flat(window):
    if isinstance(window, SeqWindow):
        return np.asarray(window.values)
    return np.asarray(window.flat())


def dominates(spec: RegularSetSpec, window) -> DominationResult:
    """Decide whether some element of the set lies above the window.

    The check is finite-window: it inspects only the indices present in the
    window.  Every reported witness is re-checked pointwise before being
    returned.
    """
    if spec.arity == "single" and not isinstance(window, SeqWindow):
        raise TypeError("single-arity spec needs a SeqWindow")
    if spec.arity == "double" and not isinstance(window, DoubleSeqWindow):
        raise TypeError("double-arity spec needs a DoubleSeqWindow")

    vals = _window_flat(window)

    if spec.kind == "all":
        # the window itself is an element of the set
        return DominationResult(feasible=True, witness_params=None, margin=0.0)

    if spec.kind == "bounded":
        c = float(vals.max())
        margin = float(c - vals.max())
        assert np.all(c >= vals)
        return DominationResult(feasible=True, witness_params={"c": c}, margin=margin)

    if spec.kind == "affine":
        a, b, margin = affine_envelope(window.values)
        assert all(
            a * m + b >= window.values[m] - 1e-9 for m in range(len(window.values))
        )
        return DominationResult(
            feasible=True, witness_params={"a": a, "b": b}, margin=float(margin)
        )

    # custom: scan the closure for a pointwise dominating element
    best = None
    best_margin = -np.inf
    for elem in closure_windows(spec):
        ev = _window_flat(elem)
        if ev.shape != vals.shape:
            continue
        slack = ev - vals
        m = float(slack.min())
        if m >= -1e-12 and m > best_margin:
            best, best_margin = elem, m
    if best is None:
        return DominationResult(feasible=False, witness_params=None, margin=float("-inf"))
    assert np.all(_window_flat(best) - vals >= -1e-12)
    return DominationResult(
        feasible=True,
        witness_params={"window": best},
        margin=max(best_margin, 0.0),
    )


def project_row_zero(spec: RegularSetSpec) -> RegularSetSpec:
    """Restrict a double-index spec to second index 0 (derivative orders)."""
    return _project(spec, fix_second=True)


def project_col_zero(spec: RegularSetSpec) -> RegularSetSpec:
    """Restrict a double-index spec to first index 0 (weight orders)."""
    return _project(spec, fix_second=False)


def _project(spec: RegularSetSpec, fix_second: bool) -> RegularSetSpec:
    if spec.arity != "double":
        raise ValueError("projection applies to double-arity specs")
    if spec.kind == "custom":
        gens = []
        for g in spec.generators:
            if fix_second:
                gens.append(SeqWindow(tuple(row[0] for row in g.values)))
            else:
                gens.append(SeqWindow(g.values[0]))
        return RegularSetSpec(
            kind="custom",
            arity="single",
            generators=tuple(gens),
            closure_depth=spec.closure_depth,
            closure_budget=spec.closure_budget,
        )
    return RegularSetSpec(kind=spec.kind, arity="single")


# ----------------------------------------------------------------------------
# axiom verification


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    status: str  # "passed" | "failed" | "unverified"
    trials: int
    failures: int
    witness_example: Optional[dict] = None
    note: str = ""


@dataclass(frozen=True)
class AxiomReport:
    spec_kind: str
    arity: str
    window_size: int
    trials: int
    checks: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.status == "passed" for c in self.checks)


def _sample_element(spec, size, rng):
    """Sample a window of an element together with its family parameters."""
    if spec.arity == "single":
        shape = (size,)
    else:
        shape = (size, size)
    if spec.kind == "all":
        w = np.round(rng.uniform(0.0, 10.0, shape), 3)
        return w, {}
    if spec.kind == "bounded":
        c = float(np.round(rng.uniform(1.0, 10.0), 3))
        w = np.round(rng.uniform(0.0, c, shape), 3)
        return w, {"c": c}
    if spec.kind == "affine":
        a = float(np.round(rng.uniform(0.0, 4.0), 3))
        b = float(np.round(rng.uniform(0.1, 4.0), 3))
        m = np.arange(size)
        line = a * m + b
        w = np.maximum(line - rng.uniform(0.0, b, size), 0.0)
        return w, {"a": a, "b": b}
    # custom: pick a closure element
    elems = closure_windows(spec)
    idx = int(rng.integers(0, len(elems)))
    return np.asarray(_window_flat(elems[idx]), dtype=float).reshape(shape), {}


def _find_custom_witness(spec, required, tol=1e-9):
    """Search the closure for an element above `required` (NaN = unconstrained)."""
    req = np.asarray(required, dtype=float)
    for elem in closure_windows(spec):
        ev = _window_flat(elem).reshape(req.shape)
        ok = np.all((ev + tol >= req) | np.isnan(req))
        if ok:
            return ev
    return None


def verify_axioms(
    spec: RegularSetSpec,
    window_size: int = 8,
    trials: int = 100,
    rng_seed: int = 0,
) -> AxiomReport:
    """Randomized finite-window verification of the three closure axioms.

    For the named kinds the witness is constructed analytically and checked
    pointwise; for custom kinds the closure is searched, and axioms whose
    witness search exhausts the budget are reported "unverified", never
    silently passed.
    """
    rng = np.random.default_rng(rng_seed)
    single = spec.arity == "single"
    checks = []
    names = ("shift", "max", "sup_convolution")
    for name in names:
        failures = 0
        unverified = 0
        example = None
        for _ in range(trials):
            res = _one_axiom_trial(spec, name, window_size, rng, single)
            if res["status"] == "failed":
                failures += 1
            elif res["status"] == "unverified":
                unverified += 1
            if example is None:
                example = res["witness"]
        if failures:
            status = "failed"
        elif unverified:
            status = "unverified"
        else:
            status = "passed"
        note = "" if not unverified else f"{unverified}/{trials} trials exhausted the closure budget"
        checks.append(
            AxiomCheck(
                name=name,
                status=status,
                trials=trials,
                failures=failures,
                witness_example=example,
                note=note,
            )
        )
    return AxiomReport(
        spec_kind=spec.kind,
        arity=spec.arity,
        window_size=window_size,
        trials=trials,
        checks=tuple(checks),
    )


def _one_axiom_trial(spec, name, size, rng, single):
    w1, p1 = _sample_element(spec, size, rng)
    w2, p2 = _sample_element(spec, size, rng)

    if name == "shift":
        k = int(rng.integers(0, 3))
        kp = int(rng.integers(0, 4))
        if single:
            # required: N'_m >= N_{m+k} + kp on the checkable range
            req = np.full(size, np.nan)
            req[: size - k] = w1[k:] + kp
            params = {"k": k, "k_prime": kp}
        else:
            kq = int(rng.integers(0, 3))
            req = np.full((size, size), np.nan)
            req[: size - k, : size - kq] = w1[k:, kq:] + kp
            params = {"k": k, "k_second": kq, "k_prime": kp}
        witness, wp = _axiom_witness(spec, name, (w1, p1), (w2, p2), params, size, single)
    elif name == "max":
        req = np.maximum(w1, w2)
        params = {}
        witness, wp = _axiom_witness(spec, name, (w1, p1), (w2, p2), params, size, single)
    else:  # sup_convolution
        if single:
            req = np.array(_supconv_single(tuple(w1), tuple(w2)))
        else:
            req = np.array(
                _supconv_double(
                    tuple(map(tuple, w1)), tuple(map(tuple, w2))
                )
            )
        params = {}
        witness, wp = _axiom_witness(spec, name, (w1, p1), (w2, p2), params, size, single)

    if witness is None:
        return {"status": "unverified", "witness": None}
    ok = np.all((witness + 1e-9 >= req) | np.isnan(req))
    return {
        "status": "ok" if ok else "failed",
        "witness": {"axiom_params": params, **wp} if ok else {"axiom_params": params, **wp, "failed": True},
    }


def _axiom_witness(spec, name, e1, e2, params, size, single):
    """Analytic witness construction per kind; closure search for custom."""
    w1, p1 = e1
    w2, p2 = e2
    m = np.arange(size, dtype=float)

    if spec.kind == "all":
        if name == "shift":
            k = params["k"]
            kp = params["k_prime"]
            if single:
                out = np.array(_shift_single(tuple(w1), k, kp), dtype=float)
            else:
                out = np.array(
                    _shift_double(tuple(map(tuple, w1)), k, params["k_second"], kp),
                    dtype=float,
                )
        elif name == "max":
            out = np.maximum(w1, w2)
        else:
            if single:
                out = np.array(_supconv_single(tuple(w1), tuple(w2)))
            else:
                out = np.array(_supconv_double(tuple(map(tuple, w1)), tuple(map(tuple, w2))))
        return out, {"witness_kind": "pointwise"}

    if spec.kind == "bounded":
        if name == "shift":
            c = float(w1.max()) + params["k_prime"]
        elif name == "max":
            c = float(max(w1.max(), w2.max()))
        else:
            c = float(w1.max() + w2.max())
        shape = (size,) if single else (size, size)
        return np.full(shape, c), {"witness_kind": "constant", "c": c}

    if spec.kind == "affine":
        a1, b1 = p1["a"], p1["b"]
        a2, b2 = p2["a"], p2["b"]
        if name == "shift":
            a, b = a1, a1 * params["k"] + b1 + params["k_prime"]
        elif name == "max":
            a, b = max(a1, a2), max(b1, b2)
        else:
            a, b = a1 + a2, b1 + b2
        return a * m + b, {"witness_kind": "line", "a": a, "b": b}

    # custom: search the closure
    if name == "shift":
        k = params["k"]
        kp = params["k_prime"]
        if single:
            req = np.full(size, np.nan)
            req[: size - k] = w1[k:] + kp
        else:
            kq = params["k_second"]
            req = np.full((size, size), np.nan)
            req[: size - k, : size - kq] = w1[k:, kq:] + kp
    elif name == "max":
        req = np.maximum(w1, w2)
    else:
        if single:
            req = np.array(_supconv_single(tuple(w1), tuple(w2)))
        else:
            req = np.array(_supconv_double(tuple(map(tuple, w1)), tuple(map(tuple, w2))))
    found = _find_custom_witness(spec, req)
    if found is None:
        return None, {}
    return found, {"witness_kind": "closure_element"}
