"""Config-driven batch runner for seminorm sweeps and theorem checks.

A config is a TOML file with an array of ``[[scenario]]`` tables.  Every
key is validated against the documented schema and unknown keys are
rejected; all violations are reported together with their field paths
before the run aborts.

Minimal example::

    schema_version = 1
    seed = 0

    [[scenario]]
    name = "gauss_all"
    checks = ["sweep", "classify", "intersection"]

      [scenario.net]
      family = "GaussianPeak"
      params = { p = 1.0 }
      domain = [[-inf, inf]]

      [scenario.regular_set]
      kind = "all"
      arity = "double"

``family = "suite"`` expands the scenario over every builtin suite net.
Exit codes: 0 all requested checks pass, 1 a check failed, 2 config or
I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python 3.10
    import tomli as tomllib

from importlib import resources

from .asymptotics import EXPONENT_CSV_COLUMNS, ExponentProfile, classify, fit_profile
from .characterize import (
    CheckConfig,
    builtin_suite,
    check_fourier,
    check_intersection,
    check_null,
    check_taylor,
    fourier_applicable,
    marginal_profile,
    mixed_profile,
)
from .fourier import fourier_sweep, transform
from .nets import (
    DERIVATIVE_MODES,
    Box,
    DeltaNet,
    EpsilonGrid,
    GaussianPeak,
    GridPolicy,
    Monomial,
    Net,
    Oscillatory,
    PolyWeight,
    SuperSmall,
    Tabulated,
    TensorProductFamily,
    load_tabulated,
)
from .regular_sets import (
    RegularSetSpec,
    project_col_zero,
    project_row_zero,
)

SCHEMA_VERSION = 1

VALID_CHECKS = ("sweep", "classify", "intersection", "fourier", "null", "taylor")

SPECTRUM_CSV_COLUMNS = ("eps", "xi", "abs", "re", "im")

_SIMPLE_FAMILIES = {
    "GaussianPeak": (GaussianPeak, {"p": "number"}),
    "DeltaNet": (DeltaNet, {"p": "number"}),
    "Oscillatory": (Oscillatory, {}),
    "SuperSmall": (SuperSmall, {}),
    "PolyWeight": (PolyWeight, {"p": "number", "d": "int"}),
    "Monomial": (Monomial, {"d": "int"}),
}

FAMILY_NAMES = tuple(sorted(_SIMPLE_FAMILIES)) + ("Tabulated", "TensorProduct", "suite")


# ----------------------------------------------------------------------------
# schema validation: collect every violation with its field path


class _Validator:
    def __init__(self):
        self.errors = []

    def fail(self, path, msg):
        self.errors.append(f"{path}: {msg}")

    def table(self, obj, path, allowed, required=()):
        if not isinstance(obj, dict):
            self.fail(path, f"expected a table, got {type(obj).__name__}")
            return False
        for k in sorted(obj):
            if k not in allowed:
                self.fail(f"{path}.{k}", "unknown key")
        for k in required:
            if k not in obj:
                self.fail(f"{path}.{k}", "required key missing")
        return True

    def number(self, obj, path, lo=None, hi=None):
        if isinstance(obj, bool) or not isinstance(obj, (int, float)):
            self.fail(path, f"expected a number, got {type(obj).__name__}")
            return False
        if lo is not None and obj < lo:
            self.fail(path, f"must be >= {lo}")
            return False
        if hi is not None and obj > hi:
            self.fail(path, f"must be <= {hi}")
            return False
        return True

    def integer(self, obj, path, lo=None, hi=None):
        if isinstance(obj, bool) or not isinstance(obj, int):
            self.fail(path, f"expected an integer, got {type(obj).__name__}")
            return False
        return self.number(obj, path, lo, hi)

    def string(self, obj, path, choices=None):
        if not isinstance(obj, str):
            self.fail(path, f"expected a string, got {type(obj).__name__}")
            return False
        if choices is not None and obj not in choices:
            self.fail(path, f"must be one of {sorted(choices)}, got {obj!r}")
            return False
        return True


def _validate_family(v: _Validator, net: dict, path: str, allow_suite: bool):
    fam = net.get("family")
    names = FAMILY_NAMES if allow_suite else tuple(n for n in FAMILY_NAMES if n != "suite")
    if not v.string(fam, f"{path}.family", choices=names):
        return
    params = net.get("params", {})
    ppath = f"{path}.params"
    if fam in _SIMPLE_FAMILIES:
        _, schema = _SIMPLE_FAMILIES[fam]
        if v.table(params, ppath, allowed=set(schema), required=tuple(schema)):
            for key, kind in schema.items():
                if key not in params:
                    continue
                if kind == "int":
                    v.integer(params[key], f"{ppath}.{key}", lo=0)
                else:
                    v.number(params[key], f"{ppath}.{key}")
    elif fam == "Tabulated":
        if v.table(params, ppath, allowed={"path"}, required=("path",)):
            v.string(params.get("path"), f"{ppath}.path")
    elif fam == "TensorProduct":
        if v.table(params, ppath, allowed={"factors"}, required=("factors",)):
            factors = params.get("factors")
            if not isinstance(factors, list) or not factors:
                v.fail(f"{ppath}.factors", "expected a non-empty array of factor tables")
            else:
                for i, f in enumerate(factors):
                    fpath = f"{ppath}.factors[{i}]"
                    if v.table(f, fpath, allowed={"family", "params"}, required=("family",)):
                        _validate_family(v, f, fpath, allow_suite=False)
                        if f.get("family") in ("TensorProduct", "Tabulated"):
                            v.fail(f"{fpath}.family", "cannot nest this family inside a product")
    elif fam == "suite":
        if params not in ({},) and params is not None:
            v.fail(ppath, 'family "suite" takes no params')
        for key in ("domain", "derivative_mode"):
            if key in net:
                v.fail(f"{path}.{key}", 'not allowed with family "suite" (suite nets are fixed)')


def _validate_domain(v: _Validator, dom, path):
    if not isinstance(dom, list) or not dom:
        v.fail(path, "expected a non-empty array of [lo, hi] pairs")
        return
    for i, iv in enumerate(dom):
        ipath = f"{path}[{i}]"
        if not isinstance(iv, list) or len(iv) != 2:
            v.fail(ipath, "expected [lo, hi]")
            continue
        lo, hi = iv
        if not v.number(lo, f"{ipath}[0]") or not v.number(hi, f"{ipath}[1]"):
            continue
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            v.fail(ipath, f"need lo < hi, got [{lo}, {hi}]")


def _validate_regular_set(v: _Validator, rs: dict, path: str):
    ok = v.table(
        rs,
        path,
        allowed={"kind", "arity", "generators", "closure_depth", "closure_budget"},
        required=("kind",),
    )
    if not ok:
        return
    kind = rs.get("kind")
    v.string(kind, f"{path}.kind", choices=("all", "bounded", "affine", "custom"))
    arity = rs.get("arity", "single")
    v.string(arity, f"{path}.arity", choices=("single", "double"))
    if kind == "affine" and arity == "double":
        v.fail(f"{path}.arity", "affine sets are single-index only")
    if kind == "custom":
        gens = rs.get("generators")
        if gens is None:
            v.fail(f"{path}.generators", "custom sets need generators")
        elif not isinstance(gens, list) or not gens:
            v.fail(f"{path}.generators", "expected a non-empty array")
        else:
            for i, g in enumerate(gens):
                gpath = f"{path}.generators[{i}]"
                if arity == "double":
                    if not isinstance(g, list) or not g or not all(isinstance(r, list) for r in g):
                        v.fail(gpath, "double-index generator must be an array of rows")
                        continue
                    width = len(g[0])
                    for r, row in enumerate(g):
                        if len(row) != width:
                            v.fail(f"{gpath}[{r}]", "ragged generator rows")
                        for c, x in enumerate(row):
                            v.number(x, f"{gpath}[{r}][{c}]", lo=0)
                else:
                    if not isinstance(g, list) or not g:
                        v.fail(gpath, "generator must be a non-empty array of numbers")
                        continue
                    for c, x in enumerate(g):
                        v.number(x, f"{gpath}[{c}]", lo=0)
    else:
        if "generators" in rs:
            v.fail(f"{path}.generators", f'only custom sets take generators (kind is "{kind}")')
    if "closure_depth" in rs:
        v.integer(rs["closure_depth"], f"{path}.closure_depth", lo=0, hi=8)
    if "closure_budget" in rs:
        v.integer(rs["closure_budget"], f"{path}.closure_budget", lo=1, hi=100000)


def _validate_scenario(v: _Validator, sc: dict, path: str, seen_names: set):
    ok = v.table(
        sc,
        path,
        allowed={
            "name", "checks", "net", "regular_set", "eps_grid",
            "orders", "policy", "fit", "taylor", "output",
        },
        required=("name", "checks", "net"),
    )
    if not ok:
        return
    name = sc.get("name")
    if v.string(name, f"{path}.name"):
        if not re.fullmatch(r"[A-Za-z0-9_\-]+", name or ""):
            v.fail(f"{path}.name", "use letters, digits, underscore, dash only")
        elif name in seen_names:
            v.fail(f"{path}.name", f"duplicate scenario name {name!r}")
        else:
            seen_names.add(name)
    checks = sc.get("checks")
    if not isinstance(checks, list) or not checks:
        v.fail(f"{path}.checks", "expected a non-empty array of check names")
        checks = []
    else:
        for i, c in enumerate(checks):
            v.string(c, f"{path}.checks[{i}]", choices=VALID_CHECKS)
    net = sc.get("net")
    if v.table(net, f"{path}.net", allowed={"family", "params", "domain", "derivative_mode"},
               required=("family",)):
        _validate_family(v, net, f"{path}.net", allow_suite=True)
        if "domain" in net:
            _validate_domain(v, net["domain"], f"{path}.net.domain")
        if "derivative_mode" in net:
            v.string(net["derivative_mode"], f"{path}.net.derivative_mode",
                     choices=DERIVATIVE_MODES)
        # checks must make sense for the net's domain
        if net.get("family") not in ("suite", None) and "fourier" in checks:
            dom = net.get("domain", [[-math.inf, math.inf]])
            full_line = (
                isinstance(dom, list) and len(dom) == 1
                and isinstance(dom[0], list) and len(dom[0]) == 2
                and all(isinstance(x, (int, float)) for x in dom[0])
                and math.isinf(dom[0][0]) and math.isinf(dom[0][1])
            )
            if not full_line:
                v.fail(f"{path}.checks", 'check "fourier" needs a one-dimensional full-line domain')
    rs = sc.get("regular_set", {"kind": "all", "arity": "double"})
    _validate_regular_set(v, rs, f"{path}.regular_set")
    arity = rs.get("arity", "single") if isinstance(rs, dict) else "single"
    if arity != "double":
        for c in ("intersection", "fourier"):
            if c in checks:
                v.fail(f"{path}.checks", f'check "{c}" needs a double-index regular_set')
    if "eps_grid" in sc and v.table(
        sc["eps_grid"], f"{path}.eps_grid", allowed={"eps0", "ratio", "count"}
    ):
        g = sc["eps_grid"]
        if "eps0" in g:
            v.number(g["eps0"], f"{path}.eps_grid.eps0", lo=1e-12, hi=1.0)
        if "ratio" in g:
            v.number(g["ratio"], f"{path}.eps_grid.ratio", lo=1e-6, hi=0.999999)
        if "count" in g:
            v.integer(g["count"], f"{path}.eps_grid.count", lo=4, hi=256)
    if "orders" in sc and v.table(
        sc["orders"], f"{path}.orders", allowed={"max_q", "max_l"}
    ):
        o = sc["orders"]
        if "max_q" in o:
            v.integer(o["max_q"], f"{path}.orders.max_q", lo=0, hi=8)
        if "max_l" in o:
            v.integer(o["max_l"], f"{path}.orders.max_l", lo=0, hi=8)
    if "policy" in sc and v.table(
        sc["policy"], f"{path}.policy",
        allowed={"base_nodes", "min_core_nodes", "fd_density", "fourier_oversample",
                 "tail_rtol", "refine"},
    ):
        p = sc["policy"]
        if "base_nodes" in p:
            v.integer(p["base_nodes"], f"{path}.policy.base_nodes", lo=64, hi=65536)
        if "min_core_nodes" in p:
            v.integer(p["min_core_nodes"], f"{path}.policy.min_core_nodes", lo=2, hi=4096)
        if "fd_density" in p:
            v.integer(p["fd_density"], f"{path}.policy.fd_density", lo=4, hi=4096)
        if "fourier_oversample" in p:
            v.integer(p["fourier_oversample"], f"{path}.policy.fourier_oversample", lo=1, hi=64)
        if "tail_rtol" in p:
            v.number(p["tail_rtol"], f"{path}.policy.tail_rtol", lo=0.0)
        if "refine" in p:
            v.number(p["refine"], f"{path}.policy.refine", lo=0.25, hi=64.0)
    if "fit" in sc and v.table(
        sc["fit"], f"{path}.fit", allowed={"m_max", "exponent_margin"}
    ):
        f = sc["fit"]
        if "m_max" in f:
            v.integer(f["m_max"], f"{path}.fit.m_max", lo=1, hi=64)
        if "exponent_margin" in f:
            v.number(f["exponent_margin"], f"{path}.fit.exponent_margin", lo=0.0)
    if "taylor" in sc and v.table(
        sc["taylor"], f"{path}.taylor", allowed={"orders", "tolerance"}
    ):
        t = sc["taylor"]
        if "orders" in t:
            if not isinstance(t["orders"], list) or not t["orders"]:
                v.fail(f"{path}.taylor.orders", "expected a non-empty array of integers")
            else:
                for i, m in enumerate(t["orders"]):
                    v.integer(m, f"{path}.taylor.orders[{i}]", lo=1, hi=8)
        if "tolerance" in t:
            v.number(t["tolerance"], f"{path}.taylor.tolerance", lo=0.0)
    if "output" in sc and v.table(sc["output"], f"{path}.output", allowed={"prefix"}):
        if "prefix" in sc["output"]:
            if v.string(sc["output"]["prefix"], f"{path}.output.prefix"):
                if not re.fullmatch(r"[A-Za-z0-9_\-]+", sc["output"]["prefix"]):
                    v.fail(f"{path}.output.prefix", "use letters, digits, underscore, dash only")


def validate_config(doc: dict) -> list:
    """All schema violations as 'field.path: message' strings; empty = valid."""
    v = _Validator()
    if not isinstance(doc, dict):
        return ["config: expected a TOML document"]
    v.table(doc, "config", allowed={"schema_version", "seed", "scenario"},
            required=("scenario",))
    if "schema_version" in doc:
        if v.integer(doc["schema_version"], "config.schema_version"):
            if doc["schema_version"] != SCHEMA_VERSION:
                v.fail("config.schema_version", f"supported version is {SCHEMA_VERSION}")
    if "seed" in doc:
        v.integer(doc["seed"], "config.seed", lo=0)
    scs = doc.get("scenario")
    if scs is not None:
        if not isinstance(scs, list) or not scs:
            v.fail("config.scenario", "expected a non-empty array of [[scenario]] tables")
        else:
            seen = set()
            for i, sc in enumerate(scs):
                _validate_scenario(v, sc, f"scenario[{i}]", seen)
    return v.errors


# ----------------------------------------------------------------------------
# config -> runtime objects


@dataclass(frozen=True)
class Scenario:
    name: str
    checks: tuple
    nets: tuple
    spec: RegularSetSpec
    config: CheckConfig
    prefix: str


def _build_family(net_table: dict, base_dir: Path):
    fam_name = net_table["family"]
    params = net_table.get("params", {})
    if fam_name in _SIMPLE_FAMILIES:
        cls, schema = _SIMPLE_FAMILIES[fam_name]
        kwargs = {k: (int(params[k]) if kind == "int" else float(params[k]))
                  for k, kind in schema.items()}
        return cls(**kwargs)
    if fam_name == "TensorProduct":
        factors = [_build_family(f, base_dir) for f in params["factors"]]
        return TensorProductFamily(factors)
    raise ValueError(f"cannot build family {fam_name!r} here")


def _build_nets(net_table: dict, base_dir: Path) -> tuple:
    fam_name = net_table["family"]
    if fam_name == "suite":
        return builtin_suite()
    if fam_name == "Tabulated":
        path = Path(net_table["params"]["path"])
        if not path.is_absolute():
            path = base_dir / path
        return (load_tabulated(path),)
    fam = _build_family(net_table, base_dir)
    ndim = getattr(fam, "ndim", 1)
    dom = net_table.get("domain")
    if dom is None:
        box = Box.full_line(ndim)
    else:
        box = Box(tuple((float(lo), float(hi)) for lo, hi in dom))
    mode = net_table.get("derivative_mode", "analytic")
    return (Net(family=fam, domain=box, derivative_mode=mode),)


def _build_spec(rs: dict) -> RegularSetSpec:
    kind = rs["kind"]
    arity = rs.get("arity", "single")
    gens = rs.get("generators", ())
    if kind == "custom":
        if arity == "double":
            gens = tuple(tuple(tuple(float(x) for x in row) for row in g) for g in gens)
        else:
            gens = tuple(tuple(float(x) for x in g) for g in gens)
    else:
        gens = ()
    return RegularSetSpec(
        kind=kind,
        arity=arity,
        generators=gens,
        closure_depth=int(rs.get("closure_depth", 3)),
        closure_budget=int(rs.get("closure_budget", 512)),
    )


def _build_scenarios(doc: dict, base_dir: Path, jobs: int) -> list:
    out = []
    for sc in doc["scenario"]:
        eg = sc.get("eps_grid", {})
        eps_grid = EpsilonGrid(
            eps0=float(eg.get("eps0", 0.5)),
            ratio=float(eg.get("ratio", 0.75)),
            count=int(eg.get("count", 16)),
        )
        o = sc.get("orders", {})
        p = sc.get("policy", {})
        policy = GridPolicy(
            base_nodes=int(p.get("base_nodes", 4096)),
            min_core_nodes=int(p.get("min_core_nodes", 32)),
            fd_density=int(p.get("fd_density", 64)),
            fourier_oversample=int(p.get("fourier_oversample", 8)),
            tail_rtol=float(p.get("tail_rtol", 1e-14)),
            refine=float(p.get("refine", 1.0)),
        )
        f = sc.get("fit", {})
        t = sc.get("taylor", {})
        config = CheckConfig(
            eps_grid=eps_grid,
            max_q=int(o.get("max_q", 4)),
            max_l=int(o.get("max_l", 4)),
            m_max=int(f.get("m_max", 8)),
            exponent_margin=float(f.get("exponent_margin", 0.15)),
            policy=policy,
            jobs=jobs,
            taylor_orders=tuple(int(m) for m in t.get("orders", (1, 2))),
            taylor_tol=float(t.get("tolerance", 1e-9)),
        )
        nets = _build_nets(sc["net"], base_dir)
        for net in nets:
            if isinstance(net.family, Tabulated):
                have = net.family.available_eps
                missing = [
                    e for e in eps_grid.values
                    if not any(abs(e - a) <= 1e-12 * max(1.0, a) for a in have)
                ]
                if missing:
                    raise ValueError(
                        f"scenario {sc['name']!r}: tabulated data has no samples "
                        f"for eps values {missing}; set eps_grid to the "
                        f"tabulated levels {list(have)}"
                    )
        out.append(
            Scenario(
                name=sc["name"],
                checks=tuple(sc["checks"]),
                nets=nets,
                spec=_build_spec(sc.get("regular_set", {"kind": "all", "arity": "double"})),
                config=config,
                prefix=sc.get("output", {}).get("prefix", sc["name"]),
            )
        )
    return out


# ----------------------------------------------------------------------------
# output helpers


def _slug(label: str) -> str:
    # keep sign info so GaussianPeak(p=1) and (p=-1) get distinct files
    label = label.replace("-", "m")
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_").lower()


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_exponent_csv(path: Path, expo: ExponentProfile) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(EXPONENT_CSV_COLUMNS)
        for row in expo.to_rows():
            w.writerow([_fmt_cell(row[c]) for c in EXPONENT_CSV_COLUMNS])


def write_spectrum_csv(path: Path, samples, max_rows: int = 4097) -> None:
    """Spectrum rows eps,xi,abs,re,im, downsampled to at most max_rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SPECTRUM_CSV_COLUMNS)
        for ss in samples:
            stride = max(1, len(ss.xi) // max_rows)
            for j in range(0, len(ss.xi), stride):
                z = ss.values[j]
                w.writerow(
                    [
                        repr(float(ss.eps)),
                        repr(float(ss.xi[j])),
                        repr(float(abs(z))),
                        repr(float(z.real)),
                        repr(float(z.imag)),
                    ]
                )


# ----------------------------------------------------------------------------
# scenario execution


def _classify_all(net, spec, config, mixed, fprof):
    """Verdicts for every scale the spec's arity supports."""
    out = []
    notes = []
    if spec.arity == "double":
        expo = fit_profile(mixed, m_max=config.m_max)
        out.append(classify(expo, spec))
        out.append(classify(fit_profile(marginal_profile(mixed, "derivative"),
                                        m_max=config.m_max), project_row_zero(spec)))
        out.append(classify(fit_profile(marginal_profile(mixed, "weight"),
                                        m_max=config.m_max), project_col_zero(spec)))
        if fprof is not None:
            out.append(classify(fit_profile(fprof, m_max=config.m_max),
                                project_row_zero(spec)))
    else:
        notes.append("single-index set: mixed scale not classified")
        out.append(classify(fit_profile(marginal_profile(mixed, "derivative"),
                                        m_max=config.m_max), spec))
        out.append(classify(fit_profile(marginal_profile(mixed, "weight"),
                                        m_max=config.m_max), spec))
        if fprof is not None:
            out.append(classify(fit_profile(fprof, m_max=config.m_max), spec))
    return out, notes


def _verdict_ok(v) -> bool:
    return v.moderate is not None


def _report_ok(report) -> bool:
    return report.status in ("pass", "not_applicable")


def _run_net(net, scenario: Scenario, out_dir: Path, lines: list):
    from .characterize import _verdict_dict

    config = scenario.config
    checks = scenario.checks
    entry = {"net": net.label, "csv": {}}
    ok = True

    needs_mixed = bool(set(checks) & {"sweep", "classify", "intersection", "fourier", "null"})
    mixed = mixed_profile(net, config) if needs_mixed else None
    fprof = None
    if ("fourier" in checks or "null" in checks or "classify" in checks) and fourier_applicable(net):
        if "fourier" in checks or "null" in checks:
            fprof = fourier_sweep(net, config.eps_grid, max_l=config.max_l,
                                  policy=config.policy, jobs=config.jobs)

    slug = _slug(net.label)
    stem = f"{scenario.prefix}_{slug}"

    if "sweep" in checks:
        expo = fit_profile(mixed, m_max=config.m_max)
        path = out_dir / f"{stem}_mixed_exponents.csv"
        write_exponent_csv(path, expo)
        entry["csv"]["mixed_exponents"] = path.name
        f00 = expo.fit(0, 0)
        if f00.decay_class == "superpolynomial":
            shown = "spp"
        elif f00.decay_class == "flat_zero":
            shown = "zero"
        elif f00.exponent is None:
            shown = "?"
        else:
            shown = f"{f00.exponent:.2f}"
        lines.append((scenario.name, net.label, "sweep", f"N00={shown}"))
        if fprof is not None:
            fpath = out_dir / f"{stem}_fourier_weight_exponents.csv"
            write_exponent_csv(fpath, fit_profile(fprof, m_max=config.m_max))
            entry["csv"]["fourier_weight_exponents"] = fpath.name
        tails = all(m.get("tail_ok", True) for m in mixed.grid_meta)
        if not tails:
            entry["notes"] = ["truncation tail above threshold in some sweeps"]

    if "classify" in checks:
        verdicts, notes = _classify_all(net, scenario.spec, config, mixed, fprof)
        entry["verdicts"] = [_verdict_dict(v) for v in verdicts]
        if notes:
            entry.setdefault("notes", []).extend(notes)
        for v in verdicts:
            mod = "?" if v.moderate is None else str(v.moderate)
            neg = "?" if v.negligible is None else str(v.negligible)
            lines.append(
                (scenario.name, net.label, f"classify/{v.scale_kind}",
                 f"moderate={mod} negligible={neg}")
            )
        ok = ok and all(_verdict_ok(v) for v in verdicts)

    reports = []
    if "intersection" in checks:
        r = check_intersection(net, scenario.spec, config, mixed=mixed)
        reports.append(r)
        lines.append((scenario.name, net.label, r.theorem_id, r.status))
        ok = ok and _report_ok(r)
    if "fourier" in checks:
        r = check_fourier(net, scenario.spec, config, mixed=mixed, fourier=fprof)
        reports.append(r)
        lines.append((scenario.name, net.label, r.theorem_id, r.status))
        ok = ok and _report_ok(r)
        if r.status != "not_applicable":
            ss = transform(net, config.eps_grid.values[0], policy=config.policy)
            spath = out_dir / f"{stem}_spectrum.csv"
            write_spectrum_csv(spath, [ss])
            entry["csv"]["spectrum"] = spath.name
    if "null" in checks:
        for scale in ("mixed", "derivative", "weight", "fourier_weight"):
            if scale == "mixed":
                prof = mixed
            elif scale == "fourier_weight":
                prof = fprof  # may be None; check_null computes or skips
            else:
                prof = marginal_profile(mixed, scale)
            r = check_null(net, scale, config, profile=prof)
            reports.append(r)
            lines.append((scenario.name, net.label, f"{r.theorem_id}", r.status))
            ok = ok and _report_ok(r)
    if reports:
        entry["reports"] = [r.to_dict() for r in reports]

    if "taylor" in checks:
        summary = check_taylor(net, config)
        entry["taylor"] = summary.to_dict()
        shown = "-" if summary.max_violation is None else f"{summary.max_violation:.2e}"
        lines.append(
            (scenario.name, net.label, "taylor",
             f"{'pass' if summary.passed else 'fail'} (max viol {shown})")
        )
        ok = ok and summary.passed

    entry["pass"] = ok
    return entry, ok


def run_scenarios(scenarios, out_dir: Path, no_timestamp: bool, seed: int,
                  jobs: int, config_name: str, stream) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = []
    scenario_sections = []
    overall = True
    for scenario in scenarios:
        t0 = time.perf_counter()
        net_entries = []
        sc_ok = True
        for net in scenario.nets:
            entry, ok = _run_net(net, scenario, out_dir, lines)
            net_entries.append(entry)
            sc_ok = sc_ok and ok
        section = {
            "name": scenario.name,
            "pass": sc_ok,
            "checks": list(scenario.checks),
            "regular_set": {
                "kind": scenario.spec.kind,
                "arity": scenario.spec.arity,
            },
            "config": scenario.config.snapshot(),
            "nets": net_entries,
        }
        if not no_timestamp:
            section["timing_seconds"] = round(time.perf_counter() - t0, 3)
        scenario_sections.append(section)
        overall = overall and sc_ok

    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config_name,
        "seed": seed,
        "jobs": jobs,
        "overall_pass": overall,
        "scenarios": scenario_sections,
    }
    if not no_timestamp:
        report["generated_at"] = datetime.now(timezone.utc).isoformat()
    report_path = out_dir / "run_report.json"
    with open(report_path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")

    widths = [0, 0, 0]
    for ln in lines:
        for i in range(3):
            widths[i] = max(widths[i], len(ln[i]))
    print(f"{'scenario':<{widths[0]}}  {'net':<{widths[1]}}  "
          f"{'check':<{widths[2]}}  result", file=stream)
    for ln in lines:
        print(f"{ln[0]:<{widths[0]}}  {ln[1]:<{widths[1]}}  "
              f"{ln[2]:<{widths[2]}}  {ln[3]}", file=stream)
    print(f"\noverall: {'PASS' if overall else 'FAIL'}  "
          f"(report: {report_path})", file=stream)
    return 0 if overall else 1


# ----------------------------------------------------------------------------
# presets and entry points


def _presets_root():
    return resources.files("rapidnets") / "presets"


def preset_names() -> list:
    root = _presets_root()
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".cfg"))


def _preset_description(name: str) -> str:
    text = (_presets_root() / name).read_text()
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("#"):
            return line.lstrip("# ").strip()
        if line:
            break
    return ""


def list_presets(stream=None) -> int:
    if stream is None:
        stream = sys.stdout
    for name in preset_names():
        print(f"{name:<28} {_preset_description(name)}", file=stream)
    return 0


def _resolve_config(arg: str):
    p = Path(arg)
    if p.exists():
        return p.read_text(), str(p), p.resolve().parent
    for candidate in (arg, arg + ".cfg"):
        root = _presets_root()
        entry = root / candidate
        if entry.is_file():
            return entry.read_text(), candidate, Path.cwd()
    raise FileNotFoundError(f"no such config file or preset: {arg}")


def run(config_arg: str, out_dir="rapidnets_out", jobs: int = 1,
        no_timestamp: bool = False, stream=None) -> int:
    """Execute a config; returns the process exit code."""
    if stream is None:
        stream = sys.stdout
    try:
        text, config_name, base_dir = _resolve_config(config_arg)
        doc = tomllib.loads(text)
    except (OSError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except tomllib.TOMLDecodeError as exc:
        print(f"error: config does not parse: {exc}", file=sys.stderr)
        return 2
    errors = validate_config(doc)
    if errors:
        print(f"error: invalid config ({len(errors)} problem(s)):", file=sys.stderr)
        for e in errors:
            print(f"  {e}", file=sys.stderr)
        return 2
    try:
        scenarios = _build_scenarios(doc, base_dir, jobs)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run_scenarios(
            scenarios,
            Path(out_dir),
            no_timestamp=no_timestamp,
            seed=int(doc.get("seed", 0)),
            jobs=jobs,
            config_name=config_name,
            stream=stream,
        )
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rapidnets",
        description="Batch runner for seminorm sweeps and characterization checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute a TOML config or bundled preset")
    p_run.add_argument("config", help="config path or preset name")
    p_run.add_argument("--jobs", type=int, default=1, metavar="N",
                       help="worker threads per sweep (default 1)")
    p_run.add_argument("--no-timestamp", action="store_true",
                       help="omit timestamps and timing from outputs")
    p_run.add_argument("--out", default="rapidnets_out", metavar="DIR",
                       help="output directory (default rapidnets_out)")
    sub.add_parser("list-presets", help="list bundled scenario presets")
    args = parser.parse_args(argv)
    if args.command == "list-presets":
        return list_presets()
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    return run(args.config, out_dir=args.out, jobs=args.jobs,
               no_timestamp=args.no_timestamp)


if __name__ == "__main__":
    sys.exit(main())
