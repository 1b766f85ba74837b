"""Config parsing, CSV/SVG emission, and the command-line surface."""
import math
import re

import pytest

from gflstab.cli_io import (RunConfig, certificate_csv, cli, emit_svg, fmt,
                            parse_config, serialize_config, write_csv)
from gflstab.errors import ConfigError

FULL_CONFIG = """
# full-surface config
[base]
f0 = 50
[circuit]
x_c = 0.6
r_f_ohm = 3.0
[pll]
k_i = 60
k_p = 5
[converter]
i_c = 0.9
[fault]
t_fault = 0.1
t_clear = 0.3
[sim]
dt = 0.001
t_end = 2.0
settle_tol = 1e-3 1e-2
[zubov]
m = 8
m_t = 10
phi = 0.2, 0.3
[atrm]
k0 = 0.5
weights = 2.0 0.05
schedule = 2 4 6
[ablm]
variant = trapezoid
"""


def test_empty_config_is_default():
    assert parse_config("") == RunConfig()


def test_full_config_parse():
    cfg = parse_config(FULL_CONFIG)
    assert cfg.params.omega0 == pytest.approx(100.0 * math.pi)
    assert cfg.params.x_c == 0.6
    assert cfg.params.r_f_ohm == 3.0
    assert cfg.params.k_i == 60.0
    assert cfg.params.i_c == 0.9
    assert (cfg.t_fault, cfg.t_clear) == (0.1, 0.3)
    assert cfg.dt == 0.001 and cfg.t_end == 2.0
    assert cfg.settle_tol == (1e-3, 1e-2)
    assert (cfg.zubov_m, cfg.zubov_m_t) == (8, 10)
    assert cfg.zubov_phi == (0.2, 0.3)
    assert cfg.atrm_k0 == 0.5
    assert cfg.atrm_weights == (2.0, 0.05)
    assert cfg.atrm_schedule == (2, 4, 6)
    assert cfg.ablm_variant == "trapezoid"


@pytest.mark.parametrize("text,line", [
    ("[magic]", 1),
    ("[pll]\nk_q = 1", 2),
    ("[pll]\nk_i = fast", 2),
    ("[pll]\nk_i = -1", 2),
    ("k_i = 5", 1),
    ("[zubov]\nm = 2.5", 2),
    ("[fault]\nt_fault = 0.5\nt_clear = 0.3", 3),
])
def test_errors_carry_the_offending_line(text, line):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.line == line


def test_cross_field_checks():
    with pytest.raises(ConfigError):
        parse_config("[sim]\ndt = -1")
    with pytest.raises(ConfigError):
        parse_config("[sim]\nt_end = 0.1")


def test_serialize_round_trip():
    for cfg in (RunConfig(), parse_config(FULL_CONFIG)):
        text = serialize_config(cfg)
        assert parse_config(text) == cfg
        assert serialize_config(parse_config(text)) == text


def test_fmt_house_style():
    assert fmt(math.pi) == "3.14159265"
    assert fmt(0.1) == "0.1"
    assert fmt(float("inf")) == "inf"
    assert fmt(float("-inf")) == "-inf"
    assert fmt(2) == "2"
    assert fmt("ok") == "ok"


def test_write_csv(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(str(path), ("a", "b"), [(1.0, math.pi), (2, "x")])
    assert path.read_text() == "a,b\n1,3.14159265\n2,x\n"


def test_svg_is_deterministic_and_clipped():
    series = [("stable", [[0.0, 0.0], [0.5, 0.5]]),
              ("unstable", [[0.1, 0.2], [0.3, 0.4], [5.0, 5.0]])]
    window = (-1.0, 1.0, -1.0, 1.0)
    svg = emit_svg(series, window)
    assert svg == emit_svg(series, window)
    polys = re.findall(r'<polyline[^>]*points="([^"]*)"', svg)
    assert len(polys) == 2
    assert len(polys[0].split()) == 2
    # the out-of-window point is dropped
    assert len(polys[1].split()) == 2
    assert ">stable<" in svg and ">unstable<" in svg


def test_svg_rejects_empty_window():
    with pytest.raises(ValueError):
        emit_svg([], (0.0, 0.0, -1.0, 1.0))


def test_certificate_csv_headers(ray36, zubov36, atrm36):
    assert certificate_csv(ray36).startswith(
        "method=ablm_ray,v_cr=86.5379211,sep=0.457894228,uep=2.67905627\n")
    ztext = certificate_csv(zubov36)
    assert ztext.startswith(
        "method=zubov,m=16,m_t=16,phi=0.1:0.1,c_zu=0.842789932,"
        "sep=0.457894228\n")
    assert "\ni,j,c\n" in "\n" + ztext
    atext = certificate_csv(atrm36)
    assert atext.startswith(
        "method=atrm,schedule=2:6,k0=0.8,t_s=0.0012,status=budget,"
        "expansions=1,sep=0.457894228\n")
    with pytest.raises(ConfigError):
        certificate_csv(object())


def test_cli_equilibria(tmp_path, capsys):
    assert cli(["--out", str(tmp_path), "equilibria"]) == 0
    out = capsys.readouterr().out
    assert "delta_sep = 0.457894228" in out
    assert "delta_uep = 2.67905627" in out
    head = (tmp_path / "equilibria.csv").read_text().splitlines()[0]
    assert head == "delta_sep_rad,delta_uep_rad,scr"


def test_cli_judge_exit_codes(tmp_path):
    base = ["--out", str(tmp_path), "lyap-judge", "--method", "ablm"]
    assert cli(base + ["--delta", "0.4579", "--omega", "0.0"]) == 0
    assert cli(base + ["--delta", "0.4579", "--omega", "40.0"]) == 4


def test_cli_config_errors(tmp_path, capsys):
    missing = tmp_path / "nope.cfg"
    assert cli(["--config", str(missing), "equilibria"]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("[pll]\nk_i = -1\n")
    assert cli(["--config", str(bad), "equilibria"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_cli_bad_option_values(tmp_path, capsys):
    """Malformed numeric options exit 2 with a clean message."""
    assert cli(["--out", str(tmp_path), "sweep", "--param", "k_i",
                "--values", "garbage"]) == 2
    assert "--values" in capsys.readouterr().err
    assert cli(["--out", str(tmp_path), "sweep", "--param", "k_i",
                "--values", ","]) == 2
    assert "empty" in capsys.readouterr().err
    assert cli(["--out", str(tmp_path), "reset-demo", "--mode",
                "omega_reset", "--omega-target", "inf"]) == 2
    assert "finite" in capsys.readouterr().err


def test_cli_numerical_failure(tmp_path, capsys):
    cfgp = tmp_path / "hot.cfg"
    cfgp.write_text("[converter]\ni_c = 10\n")
    assert cli(["--config", str(cfgp), "equilibria"]) == 3
    assert "numerical failure" in capsys.readouterr().err


def test_cli_simulate_trajectory_schema(tmp_path):
    cfgp = tmp_path / "fast.cfg"
    cfgp.write_text("[sim]\ndt = 0.001\nt_end = 1.0\n"
                    "[fault]\nt_fault = 0.2\nt_clear = 0.4\n")
    assert cli(["--config", str(cfgp), "--out", str(tmp_path),
                "simulate"]) == 0
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert lines[0] == ("t_s,delta_rad,omega_rad_s,freq_hz,u_cq_pu,"
                        "u_c_mag_pu,event")
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[3]) == pytest.approx(50.0)
    joined = "\n".join(lines)
    assert "fault_on" in joined and "fault_clear" in joined


def test_cli_tables_reproducible(tmp_path):
    """Same config, two runs, byte-identical CCT table."""
    cfgp = tmp_path / "coarse.cfg"
    cfgp.write_text("[sim]\ndt = 0.001\n[zubov]\nm = 8\nm_t = 8\n")
    outs = []
    for sub in ("a", "b"):
        d = tmp_path / sub
        assert cli(["--config", str(cfgp), "--out", str(d), "tables"]) == 0
        outs.append((d / "cct.csv").read_bytes())
    assert outs[0] == outs[1]
    lines = outs[0].decode().splitlines()
    assert lines[0] == "rf_ohm,real_cct_s,method,est_cct_s,err_pct"
    assert len(lines) == 17


def test_cli_boundary_and_band(tmp_path, capsys):
    assert cli(["--out", str(tmp_path), "sd-band"]) == 0
    out = capsys.readouterr().out
    assert "form = partial_overlap" in out
    head = (tmp_path / "band.csv").read_text().splitlines()
    assert head[0] == "form,omega_cr,band_lo,band_hi"
    assert head[1].startswith("partial_overlap,-3,")


def test_cli_plot_and_certificate(tmp_path):
    cfgp = tmp_path / "coarse.cfg"
    cfgp.write_text("[sim]\ndt = 0.001\nt_end = 2.0\n"
                    "[zubov]\nm = 8\nm_t = 8\n")
    args = ["--config", str(cfgp), "--out", str(tmp_path)]
    assert cli(args + ["plot"]) == 0
    svg = (tmp_path / "phase.svg").read_text()
    assert svg.startswith("<svg ") and svg.rstrip().endswith("</svg>")
    assert cli(args + ["lyap-build", "--method", "atrm"]) == 0
    cert_text = (tmp_path / "certificate_atrm.csv").read_text()
    assert cert_text.startswith("method=atrm,schedule=2:6,")
