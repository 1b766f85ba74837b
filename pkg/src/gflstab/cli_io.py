"""Config parsing, CSV/SVG emission, and the command-line surface."""
import argparse
import dataclasses
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import lyap_ablm, lyap_atrm, lyap_zubov, reset_ctl, sd_trm
from .circuit import (CircuitParams, equilibria, network_equivalents, scr,
                      swing_params)
from .dynsim import ReducedState, Scenario, real_cct, simulate
from .errors import ConfigError, GflstabError


@dataclass
class RunConfig:
    """Everything one experiment needs, defaulting to the test system."""

    params: CircuitParams = field(default_factory=CircuitParams)
    t_fault: float = 0.2
    t_clear: float = 0.4235
    dt: float = 1e-4
    t_end: float = 8.0
    divergence_bound: float = 200.0
    settle_tol: tuple = (1e-3, 1e-2)
    lvrt_exit_voltage: float = 0.9
    zubov_m: int = 16
    zubov_m_t: int = 16
    zubov_phi: tuple = (0.1, 0.1)
    atrm_k0: float = 0.8
    atrm_weights: tuple = (1.0, 0.01)
    atrm_schedule: tuple = (2, 6)
    ablm_variant: str = "ray"


# section -> key -> (target, field, kind); target "p" patches CircuitParams
_SCHEMA = {
    "base": {"s_base": ("p", "s_base", float),
             "u_base": ("p", "u_base", float),
             "f0": ("p", "omega0", "f0")},
    "circuit": {k: ("p", k, float) for k in
                ("r_g", "x_g", "r_c", "x_c", "r_l", "x_l", "r_f_ohm",
                 "u_g")},
    "pll": {"k_i": ("p", "k_i", float), "k_p": ("p", "k_p", float)},
    "converter": {"i_c": ("p", "i_c", float),
                  "phi_i": ("p", "phi_i", float)},
    "fault": {"t_fault": ("c", "t_fault", float),
              "t_clear": ("c", "t_clear", float)},
    "sim": {"dt": ("c", "dt", float), "t_end": ("c", "t_end", float),
            "divergence_bound": ("c", "divergence_bound", float),
            "settle_tol": ("c", "settle_tol", "floats2"),
            "lvrt_exit_voltage": ("c", "lvrt_exit_voltage", float)},
    "zubov": {"m": ("c", "zubov_m", int), "m_t": ("c", "zubov_m_t", int),
              "phi": ("c", "zubov_phi", "floats2")},
    "atrm": {"k0": ("c", "atrm_k0", float),
             "weights": ("c", "atrm_weights", "floats2"),
             "schedule": ("c", "atrm_schedule", "ints")},
    "ablm": {"variant": ("c", "ablm_variant", "variant")},
}


def _convert(raw, kind, line):
    try:
        if kind is float:
            return float(raw)
        if kind is int:
            v = float(raw)
            if v != int(v):
                raise ValueError("not an integer")
            return int(v)
        if kind == "f0":
            return 2.0 * math.pi * float(raw)
        if kind == "floats2":
            parts = raw.replace(",", " ").split()
            if len(parts) != 2:
                raise ValueError("expected two numbers")
            return (float(parts[0]), float(parts[1]))
        if kind == "ints":
            parts = raw.replace(",", " ").split()
            if not parts:
                raise ValueError("expected integers")
            return tuple(int(x) for x in parts)
        if kind == "variant":
            if raw not in ("ray", "trapezoid"):
                raise ValueError("variant must be ray or trapezoid")
            return raw
    except ValueError as exc:
        raise ConfigError(f"bad value {raw!r}: {exc}", line=line) from None
    raise ConfigError(f"unhandled kind {kind}", line=line)


def parse_config(text):
    """Parse [section] / key = value / # comment text into a RunConfig.

    Every key is validated as it is assigned, so errors carry the line
    that caused them; an empty file yields the full test-system defaults.
    """
    cfg = RunConfig()
    section = None
    clear_line = None
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]",
                                  line=lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}",
                              line=lineno)
        if section is None:
            raise ConfigError("key outside any [section]", line=lineno)
        key, _, raw = line.partition("=")
        key = key.strip().lower()
        raw = raw.strip()
        if key not in _SCHEMA[section]:
            raise ConfigError(f"unknown key {key!r} in [{section}]",
                              line=lineno)
        target, fname, kind = _SCHEMA[section][key]
        value = _convert(raw, kind, lineno)
        if target == "p":
            try:
                cfg.params = dataclasses.replace(cfg.params,
                                                 **{fname: value})
            except ValueError as exc:
                raise ConfigError(str(exc), line=lineno) from None
        else:
            setattr(cfg, fname, value)
            if fname == "t_clear":
                clear_line = lineno
    if not 0 <= cfg.t_fault <= cfg.t_clear:
        raise ConfigError("need 0 <= t_fault <= t_clear", line=clear_line)
    if cfg.dt <= 0:
        raise ConfigError("dt must be positive")
    if not cfg.t_clear <= cfg.t_end:
        raise ConfigError("need t_clear <= t_end")
    return cfg


def serialize_config(cfg):
    """Canonical config text; parse(serialize(cfg)) reproduces cfg."""
    p = cfg.params
    out = []

    def sec(name, pairs):
        out.append(f"[{name}]")
        for k, v in pairs:
            out.append(f"{k} = {v}")
        out.append("")

    sec("base", [("s_base", repr(p.s_base)), ("u_base", repr(p.u_base)),
                 ("f0", repr(p.omega0 / (2.0 * math.pi)))])
    sec("circuit", [(k, repr(getattr(p, k))) for k in
                    ("r_g", "x_g", "r_c", "x_c", "r_l", "x_l", "r_f_ohm",
                     "u_g")])
    sec("pll", [("k_i", repr(p.k_i)), ("k_p", repr(p.k_p))])
    sec("converter", [("i_c", repr(p.i_c)), ("phi_i", repr(p.phi_i))])
    sec("fault", [("t_fault", repr(cfg.t_fault)),
                  ("t_clear", repr(cfg.t_clear))])
    sec("sim", [("dt", repr(cfg.dt)), ("t_end", repr(cfg.t_end)),
                ("divergence_bound", repr(cfg.divergence_bound)),
                ("settle_tol", "%r %r" % cfg.settle_tol),
                ("lvrt_exit_voltage", repr(cfg.lvrt_exit_voltage))])
    sec("zubov", [("m", repr(cfg.zubov_m)), ("m_t", repr(cfg.zubov_m_t)),
                  ("phi", "%r %r" % cfg.zubov_phi)])
    sec("atrm", [("k0", repr(cfg.atrm_k0)),
                 ("weights", "%r %r" % cfg.atrm_weights),
                 ("schedule", " ".join(str(x) for x in cfg.atrm_schedule))])
    sec("ablm", [("variant", cfg.ablm_variant)])
    return "\n".join(out)


def scenario_from_config(cfg):
    return Scenario(params=cfg.params, t_fault=cfg.t_fault,
                    t_clear=cfg.t_clear, t_end=cfg.t_end, dt=cfg.dt,
                    omega_divergence_bound=cfg.divergence_bound,
                    settle_tol=cfg.settle_tol,
                    lvrt_exit_voltage=cfg.lvrt_exit_voltage)


def fmt(x):
    """House float format: 9 significant digits."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.9g}"
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(x) for x in row) + "\n")


# fixed palette; index order = series order
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#7f7f7f")


def _ticks(lo, hi, target=8):
    span = hi - lo
    if span <= 0:
        raise ValueError("empty window")
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * span:
        ticks.append(round(t, 12))
        t += step
    return ticks


def emit_svg(series, window, title="phase plane", width=800, height=600):
    """Standalone phase-plane SVG: polylines, ticks, legend.

    series is a list of (label, points) with points an (n, 2) array of
    (delta, omega).  Output bytes depend only on the arguments.
    """
    d_lo, d_hi, w_lo, w_hi = window
    if not (d_hi > d_lo and w_hi > w_lo):
        raise ValueError("empty window")
    ml, mr, mt, mb = 60, 160, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    def px(d):
        return ml + (d - d_lo) / (d_hi - d_lo) * pw

    def py(w):
        return mt + (w_hi - w) / (w_hi - w_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{ml}" y="24" font-family="sans-serif" font-size="16">'
        f'{title}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
        f'stroke="black"/>',
    ]
    for t in _ticks(d_lo, d_hi):
        x = px(t)
        parts.append(f'<line x1="{x:.2f}" y1="{mt + ph}" x2="{x:.2f}" '
                     f'y2="{mt + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{mt + ph + 18}" '
                     f'font-family="sans-serif" font-size="11" '
                     f'text-anchor="middle">{t:g}</text>')
    for t in _ticks(w_lo, w_hi):
        y = py(t)
        parts.append(f'<line x1="{ml - 5}" y1="{y:.2f}" x2="{ml}" '
                     f'y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{ml - 8}" y="{y + 4:.2f}" '
                     f'font-family="sans-serif" font-size="11" '
                     f'text-anchor="end">{t:g}</text>')
    parts.append(f'<text x="{ml + pw / 2}" y="{height - 10}" '
                 f'font-family="sans-serif" font-size="13" '
                 f'text-anchor="middle">delta (rad)</text>')
    parts.append(f'<text x="16" y="{mt + ph / 2}" '
                 f'font-family="sans-serif" font-size="13" '
                 f'transform="rotate(-90 16 {mt + ph / 2})" '
                 f'text-anchor="middle">omega (rad/s)</text>')
    for idx, (label, pts) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        pts = np.asarray(pts, dtype=float)
        inside = ((pts[:, 0] >= d_lo) & (pts[:, 0] <= d_hi)
                  & (pts[:, 1] >= w_lo) & (pts[:, 1] <= w_hi))
        coords = " ".join(f"{px(d):.2f},{py(w):.2f}"
                          for d, w in pts[inside])
        parts.append(f'<polyline fill="none" stroke="{color}" '
                     f'stroke-width="1.5" points="{coords}"/>')
        ly = mt + 20 + 18 * idx
        lx = ml + pw + 12
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" '
                     f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 28}" y="{ly}" '
                     f'font-family="sans-serif" font-size="12">'
                     f'{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _method_cert(cfg, method, sp, sep):
    if method in ("ablm", "ablm_ray", "ablm_trapezoid"):
        variant = cfg.ablm_variant
        if method.endswith("_ray"):
            variant = "ray"
        elif method.endswith("_trapezoid"):
            variant = "trapezoid"
        return lyap_ablm.build_ablm(sp, variant)
    if method == "zubov":
        return lyap_zubov.build_zubov(sp, sep, m=cfg.zubov_m,
                                      m_t=cfg.zubov_m_t,
                                      phi_weights=cfg.zubov_phi)
    if method == "atrm":
        return lyap_atrm.build_atrm(sp, sep, schedule=cfg.atrm_schedule,
                                    k0=cfg.atrm_k0,
                                    weights=cfg.atrm_weights)
    raise ConfigError(f"unknown method {method!r}")


def certificate_csv(cert):
    """Header line describing the certificate, then its coefficients."""
    if isinstance(cert, lyap_ablm.AblmCertificate):
        return (f"method=ablm_{cert.variant},v_cr={fmt(cert.v_cr)},"
                f"sep={fmt(cert.sep)},uep={fmt(cert.uep)}\n")
    if isinstance(cert, lyap_zubov.ZubovCertificate):
        head = (f"method=zubov,m={cert.m},m_t={cert.m_t},"
                f"phi={fmt(cert.phi_weights[0])}:{fmt(cert.phi_weights[1])},"
                f"c_zu={fmt(cert.c_zu)},sep={fmt(cert.sep)}\n")
        return head + cert.v.dump_csv()
    if isinstance(cert, lyap_atrm.AtrmCertificate):
        head = (f"method=atrm,schedule="
                f"{':'.join(str(m) for m in cert.degree_schedule)},"
                f"k0={fmt(cert.k0)},t_s={fmt(cert.t_s)},"
                f"status={cert.status},"
                f"expansions={cert.expansions_done},sep={fmt(cert.sep)}\n")
        return head + cert.v.dump_csv()
    raise ConfigError(f"unsupported certificate {type(cert).__name__}")


def _trajectory_rows(rec, f0_hz):
    events = {}
    for t, name in rec.events:
        events.setdefault(round(t, 9), []).append(name)
    rows = []
    for t, d, w, uq, um in rec.samples:
        names = events.get(round(float(t), 9))
        rows.append((float(t), float(d), float(w),
                     f0_hz + float(w) / (2.0 * math.pi), float(uq),
                     float(um), ";".join(names) if names else ""))
    return rows


_TRAJ_HEADER = ("t_s", "delta_rad", "omega_rad_s", "freq_hz", "u_cq_pu",
                "u_c_mag_pu", "event")


def cmd_equilibria(cfg, out):
    ne = network_equivalents(cfg.params)
    sp = swing_params(ne, cfg.params)
    eq = equilibria(sp)
    print(f"delta_sep = {fmt(eq.delta_sep)}")
    print(f"delta_uep = {fmt(eq.delta_uep)}")
    print(f"scr = {fmt(scr(ne))}")
    write_csv(os.path.join(out, "equilibria.csv"),
              ("delta_sep_rad", "delta_uep_rad", "scr"),
              [(eq.delta_sep, eq.delta_uep, scr(ne))])
    return 0


def cmd_simulate(cfg, out):
    rec = simulate(scenario_from_config(cfg))
    f0_hz = cfg.params.omega0 / (2.0 * math.pi)
    write_csv(os.path.join(out, "trajectory.csv"), _TRAJ_HEADER,
              _trajectory_rows(rec, f0_hz))
    print(f"verdict = {rec.verdict}")
    return 0


def cmd_oracle_cct(cfg, out):
    cct = real_cct(cfg.params, dt=cfg.dt)
    print(f"real_cct = {fmt(cct)}")
    write_csv(os.path.join(out, "cct_real.csv"),
              ("rf_ohm", "real_cct_s"), [(cfg.params.r_f_ohm, cct)])
    return 0


def _boundary_rows(curves):
    rows = []
    for c in curves:
        for idx, (d, w) in enumerate(c.points):
            rows.append((c.uep_branch, c.side, idx, float(d), float(w)))
    return rows


def cmd_sd_trm(cfg, out):
    ne = network_equivalents(cfg.params)
    sp = swing_params(ne, cfg.params)
    curves = sd_trm.trm_boundary(sp)
    write_csv(os.path.join(out, "boundary.csv"),
              ("branch_k", "side", "idx", "delta_rad", "omega_rad_s"),
              _boundary_rows(curves))
    print(f"curves = {len(curves)}")
    return 0


def cmd_sd_band(cfg, out):
    ne = network_equivalents(cfg.params)
    sp = swing_params(ne, cfg.params)
    curves = sd_trm.trm_boundary(sp)
    form = sd_trm.classify_sd_form(curves, ne, cfg.params)
    print(f"form = {form.form}")
    print(f"omega_cr = {fmt(form.omega_cr) if form.omega_cr is not None else 'none'}")
    band = form.band if form.band is not None else ("", "")
    write_csv(os.path.join(out, "band.csv"),
              ("form", "omega_cr", "band_lo", "band_hi"),
              [(form.form,
                form.omega_cr if form.omega_cr is not None else "",
                band[0], band[1])])
    return 0


def cmd_sweep(cfg, out, param, values):
    try:
        vals = tuple(float(v) for v in values.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"--values must be numbers, got {values!r}")
    if not vals:
        raise ConfigError("--values is empty")
    results, failures = sd_trm.sweep_parameter(cfg.params, param, vals)
    rows = []
    for v in vals:
        if v in failures:
            rows.append((param, v, "no_equilibrium", "", ""))
            continue
        write_csv(os.path.join(out, f"boundary_{param}_{fmt(v)}.csv"),
                  ("branch_k", "side", "idx", "delta_rad", "omega_rad_s"),
                  _boundary_rows(results[v]))
        central = [c for c in results[v] if c.uep_branch == 0]
        rows.append((param, v, "ok",
                     max(c.points[:, 0].max() for c in central),
                     max(c.points[:, 1].max() for c in central)))
    write_csv(os.path.join(out, f"sweep_{param}.csv"),
              ("param", "value", "status", "central_max_delta",
               "central_max_omega"), rows)
    print(f"swept {len(vals)} values, {len(failures)} failures")
    return 0


def _post_fault_frame(cfg):
    ne = network_equivalents(cfg.params)
    sp = swing_params(ne, cfg.params)
    eq = equilibria(sp)
    return ne, sp, eq


def cmd_lyap_build(cfg, out, method):
    _, sp, eq = _post_fault_frame(cfg)
    cert = _method_cert(cfg, method, sp, eq.delta_sep)
    path = os.path.join(out, f"certificate_{method}.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(certificate_csv(cert))
    print(f"wrote {path}")
    return 0


def cmd_lyap_judge(cfg, out, method, delta, omega):
    _, sp, eq = _post_fault_frame(cfg)
    cert = _method_cert(cfg, method, sp, eq.delta_sep)
    x = ReducedState(delta, omega)
    if method.startswith("ablm"):
        verdict = lyap_ablm.judge(x, cert)
    elif method == "zubov":
        verdict = lyap_zubov.judge(x, cert)
    else:
        verdict = lyap_atrm.judge(x, cert)
    print(f"verdict = {verdict.kind}")
    return 0 if verdict.kind == "stable" else 4


def cmd_lyap_cct(cfg, out, method):
    _, sp, eq = _post_fault_frame(cfg)
    cert = _method_cert(cfg, method, sp, eq.delta_sep)
    if method.startswith("ablm"):
        est = lyap_ablm.estimate_cct(cert, cfg.params, dt=cfg.dt)
    elif method == "zubov":
        est = lyap_zubov.estimate_cct(cert, cfg.params, dt=cfg.dt)
    else:
        est = lyap_atrm.estimate_cct(cert, cfg.params, dt=cfg.dt)
    print(f"est_cct = {fmt(est)}")
    write_csv(os.path.join(out, f"cct_{method}.csv"),
              ("rf_ohm", "method", "est_cct_s"),
              [(cfg.params.r_f_ohm, method, est)])
    return 0


def cmd_reset_demo(cfg, out, mode, omega_target):
    try:
        policy = reset_ctl.ResetPolicy(mode, omega_target=omega_target)
    except ValueError as exc:
        raise ConfigError(str(exc))
    _, sp, eq = _post_fault_frame(cfg)
    cert = lyap_zubov.build_zubov(sp, eq.delta_sep, m=cfg.zubov_m,
                                  m_t=cfg.zubov_m_t,
                                  phi_weights=cfg.zubov_phi)
    base, controlled, events = reset_ctl.reset_demo(
        scenario_from_config(cfg), policy, cert)
    f0_hz = cfg.params.omega0 / (2.0 * math.pi)
    write_csv(os.path.join(out, "demo_base.csv"), _TRAJ_HEADER,
              _trajectory_rows(base, f0_hz))
    write_csv(os.path.join(out, "demo_reset.csv"), _TRAJ_HEADER,
              _trajectory_rows(controlled, f0_hz))
    print(f"base = {base.verdict}")
    print(f"reset = {controlled.verdict}")
    print(f"events = {len(events)}")
    return 0


TABLE_METHODS = ("ablm_ray", "ablm_trapezoid", "zubov", "atrm")
TABLE_RF = (3.0, 1.0, 0.5, 0.1)


def cmd_tables(cfg, out):
    _, sp, eq = _post_fault_frame(cfg)
    certs = {m: _method_cert(cfg, m, sp, eq.delta_sep)
             for m in TABLE_METHODS}
    rows = []
    for rf in TABLE_RF:
        real = real_cct(cfg.params, rf_ohm=rf, dt=cfg.dt)
        for method in TABLE_METHODS:
            cert = certs[method]
            if method.startswith("ablm"):
                est = lyap_ablm.estimate_cct(cert, cfg.params, rf,
                                             dt=cfg.dt)
            elif method == "zubov":
                est = lyap_zubov.estimate_cct(cert, cfg.params, rf,
                                              dt=cfg.dt)
            else:
                est = lyap_atrm.estimate_cct(cert, cfg.params, rf,
                                             dt=cfg.dt)
            err = (est - real) / real * 100.0 if math.isfinite(real) \
                else math.nan
            rows.append((rf, real, method, est, err))
    write_csv(os.path.join(out, "cct.csv"),
              ("rf_ohm", "real_cct_s", "method", "est_cct_s", "err_pct"),
              rows)
    print(f"wrote {os.path.join(out, 'cct.csv')} ({len(rows)} rows)")
    return 0


def cmd_plot(cfg, out):
    _, sp, eq = _post_fault_frame(cfg)
    curves = sd_trm.trm_boundary(sp)
    series = [(f"boundary k={c.uep_branch} {c.side}",
               c.points) for c in curves]
    cert = lyap_zubov.build_zubov(sp, eq.delta_sep, m=cfg.zubov_m,
                                  m_t=cfg.zubov_m_t,
                                  phi_weights=cfg.zubov_phi)
    thetas = (np.arange(257) + 0.5) / 257 * 2.0 * math.pi
    rho = lyap_atrm.radial_profile(cert.v, cert.c_zu, thetas)
    found = rho < 50.0
    level = np.column_stack([eq.delta_sep + rho * np.cos(thetas),
                             rho * np.sin(thetas)])[found]
    series.append(("zubov level set", level))
    rec = simulate(scenario_from_config(cfg))
    series.append(("trajectory", rec.samples[:, 1:3]))
    window = sd_trm.default_window(sp)
    svg = emit_svg(series, window)
    path = os.path.join(out, "phase.svg")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    print(f"wrote {path}")
    return 0


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="gflstab",
        description="Transient stability toolkit for PLL-synchronized "
                    "grid-following converters")
    ap.add_argument("--config", default=None, help="config file path")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--seed-free", action="store_true",
                    help="reserved; all algorithms are deterministic")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("equilibria", "simulate", "oracle-cct", "sd-trm",
                 "sd-band", "tables", "plot"):
        sub.add_parser(name)
    sw = sub.add_parser("sweep")
    sw.add_argument("--param", required=True,
                    choices=("k_i", "k_p", "i_cd"))
    sw.add_argument("--values", required=True,
                    help="comma or space separated numbers")
    for name in ("lyap-build", "lyap-cct"):
        sp_ = sub.add_parser(name)
        sp_.add_argument("--method", required=True,
                         choices=("ablm", "ablm_ray", "ablm_trapezoid",
                                  "zubov", "atrm"))
    lj = sub.add_parser("lyap-judge")
    lj.add_argument("--method", required=True,
                    choices=("ablm", "ablm_ray", "ablm_trapezoid",
                             "zubov", "atrm"))
    lj.add_argument("--delta", type=float, required=True)
    lj.add_argument("--omega", type=float, required=True)
    rd = sub.add_parser("reset-demo")
    rd.add_argument("--mode", required=True,
                    choices=("none", "omega_reset", "omega_delta_reset"))
    rd.add_argument("--omega-target", type=float, default=0.0)
    return ap


def cli(argv=None):
    """Entry point; returns the process exit code."""
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        if args.config is not None:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
        else:
            cfg = RunConfig()
        os.makedirs(args.out, exist_ok=True)
        cmd = args.command
        if cmd == "equilibria":
            return cmd_equilibria(cfg, args.out)
        if cmd == "simulate":
            return cmd_simulate(cfg, args.out)
        if cmd == "oracle-cct":
            return cmd_oracle_cct(cfg, args.out)
        if cmd == "sd-trm":
            return cmd_sd_trm(cfg, args.out)
        if cmd == "sd-band":
            return cmd_sd_band(cfg, args.out)
        if cmd == "sweep":
            return cmd_sweep(cfg, args.out, args.param, args.values)
        if cmd == "lyap-build":
            return cmd_lyap_build(cfg, args.out, args.method)
        if cmd == "lyap-judge":
            return cmd_lyap_judge(cfg, args.out, args.method, args.delta,
                                  args.omega)
        if cmd == "lyap-cct":
            return cmd_lyap_cct(cfg, args.out, args.method)
        if cmd == "reset-demo":
            return cmd_reset_demo(cfg, args.out, args.mode,
                                  args.omega_target)
        if cmd == "tables":
            return cmd_tables(cfg, args.out)
        if cmd == "plot":
            return cmd_plot(cfg, args.out)
        raise ConfigError(f"unknown command {cmd!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except GflstabError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(cli())


if __name__ == "__main__":
    main()
