import json

import numpy as np
import pytest

from pampa import cli, run as run_mod
from pampa.config import load_config, preset_names
from pampa.errors import ConfigError

PAPER_PRESETS = {
    # label: (a, b, n, bc, t_final, gamma, oscillation, integrator)
    "advection_smooth": (0.0, 1.0, 200, "periodic", 1.0, None, "none", "ssp_ms3"),
    "jiang_shu": (-1.0, 1.0, 400, "periodic", 2.0, None, "none", "ssp_ms3"),
    "burgers_steepening": (-1.0, 1.0, 400, "periodic", 0.5, None, "none", "ssp_ms3"),
    "euler_smooth": (0.0, 2.0 * np.pi, 200, "periodic", 0.1, 1.4, "none", "ssp_ms3"),
    "sod": (-5.0, 5.0, 200, "outflow", 1.3, 1.4, "mp", "ssp_rk3"),
    "blast_waves": (0.0, 1.0, 800, "reflective", 0.038, 1.4, "oe", "ssp_rk3"),
    "double_rarefaction": (-1.0, 1.0, 400, "outflow", 0.6, 1.4, "mp", "ssp_rk3"),
    "shu_osher": (-5.0, 5.0, 640, "outflow", 1.8, 1.4, "oe", "ssp_rk3"),
    "sedov": (-2.0, 2.0, 801, "outflow", 0.001, 1.4, "mp", "ssp_rk3"),
    "leblanc": (0.0, 9.0, 800, "outflow", 6.0, 5.0 / 3.0, "mp", "ssp_rk3"),
    "mhd_shock_tube": (0.0, 1.0, 800, "outflow", 0.2, 5.0 / 3.0, "oe", "ssp_rk3"),
    "mhd_leblanc": (-10.0, 10.0, 2000, "outflow", 3e-5, 1.4, "mp", "ssp_rk3"),
}


def test_preset_list_complete():
    assert set(preset_names()) == set(PAPER_PRESETS)


@pytest.mark.parametrize("name", sorted(PAPER_PRESETS))
def test_preset_fidelity(name):
    a, b, n, bc, t_final, gamma, osc, integ = PAPER_PRESETS[name]
    cfg = load_config(name)
    assert (cfg.a, cfg.b) == pytest.approx((a, b), rel=1e-15)
    assert cfg.n == n
    assert cfg.bc == bc
    assert cfg.t_final == pytest.approx(t_final, rel=1e-15)
    if gamma is not None:
        assert cfg.gamma == pytest.approx(gamma, rel=1e-15)
    assert cfg.oscillation == osc
    assert cfg.integrator == integ
    assert cfg.cfl == 0.1


def test_preset_initial_conditions_spot_values():
    # left/right primitive states as stated by the benchmarks
    cfg = load_config("sod")
    from pampa.presets import IC_REGISTRY

    ic = IC_REGISTRY[cfg.ic]
    assert np.allclose(ic(cfg, np.array([-1.0]))[0], [1.0, 0.0, 1.0])
    assert np.allclose(ic(cfg, np.array([2.0]))[0], [0.125, 0.0, 0.1])
    assert np.allclose(ic(cfg, np.array([0.0]))[0], [1.0, 0.0, 1.0])  # x <= 0

    cfg = load_config("leblanc")
    ic = IC_REGISTRY[cfg.ic]
    g = cfg.gamma
    assert np.allclose(ic(cfg, np.array([1.0]))[0], [1.0, 0.0, 0.1 * (g - 1)])
    assert np.allclose(ic(cfg, np.array([5.0]))[0], [1e-3, 0.0, 1e-7 * (g - 1)])

    cfg = load_config("mhd_leblanc")
    ic = IC_REGISTRY[cfg.ic]
    assert cfg.bx == 0.0
    assert np.allclose(ic(cfg, np.array([-1.0]))[0],
                       [2.0, 0.0, 0.0, 0.0, 5000.0, 5000.0, 1e9])
    assert np.allclose(ic(cfg, np.array([1.0]))[0],
                       [1e-3, 0.0, 0.0, 0.0, 5000.0, 5000.0, 1.0])

    cfg = load_config("mhd_shock_tube")
    ic = IC_REGISTRY[cfg.ic]
    assert cfg.bx == pytest.approx(0.7)
    assert np.allclose(ic(cfg, np.array([0.2]))[0],
                       [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    assert np.allclose(ic(cfg, np.array([0.8]))[0],
                       [0.3, 0.0, 0.0, 1.0, 1.0, 0.0, 0.2])


def test_sedov_center_cell_energy():
    cfg = load_config("sedov")
    scheme = run_mod.build_scheme(cfg)
    field = run_mod.initial_field(cfg, scheme)
    dx = scheme.grid.cell_sizes[0]
    c = cfg.n // 2
    assert field.avgs[c, 2] == pytest.approx(3.2e6 * dx, rel=1e-14)
    others = np.delete(field.avgs[:, 2], c)
    assert np.allclose(others, 1e-12, rtol=1e-12)
    # the centre cell is truly centred (odd cell count)
    assert scheme.grid.cell_centers[c] == pytest.approx(0.0, abs=1e-13)


def test_jiang_shu_constants():
    from pampa.presets import _jiang_shu

    # G1 combination at x = z: (2 e^{-beta delta^2} + 4)/6 with
    # beta = ln2/(36 delta^2), delta = 0.005 -> exponent = -ln2/36
    expected = (2.0 * np.exp(-np.log(2.0) / 36.0) + 4.0) / 6.0
    assert _jiang_shu(np.array([-0.7]))[0] == pytest.approx(expected, rel=1e-14)
    # square pulse and the triangle apex
    assert _jiang_shu(np.array([-0.3]))[0] == 1.0
    assert _jiang_shu(np.array([0.1]))[0] == 1.0
    assert _jiang_shu(np.array([0.85]))[0] == 0.0


def test_config_overrides_and_validation():
    cfg = load_config("sod")
    assert cfg.with_overrides(n=100).n == 100
    with pytest.raises(ConfigError):
        cfg.with_overrides(cfl=0.2)
    with pytest.raises(ConfigError):
        load_config("no_such_preset")
    with pytest.raises(ConfigError):
        cfg.with_overrides(oscillation="weird")


def test_config_file_round_trip(tmp_path):
    text = """
[system]
kind = burgers
u_min = -1.0
u_max = 2.0
[grid]
a = -1.0
b = 1.0
n = 40
bc = periodic
[time]
t_final = 0.1
integrator = ssp_ms3
cfl = 0.05
[limiter]
oscillation = mp
[ic]
name = burgers_square
"""
    path = tmp_path / "custom.ini"
    path.write_text(text)
    cfg = load_config(str(path))
    assert cfg.label == "custom"
    assert cfg.system == "burgers" and cfg.cfl == 0.05


def test_cli_run_and_determinism(tmp_path):
    out1 = tmp_path / "r1"
    out2 = tmp_path / "r2"
    args = ["run", "sod", "--n", "40", "--t-final", "0.2"]
    assert cli.main(args + ["--out", str(out1)]) == 0
    assert cli.main(args + ["--out", str(out2)]) == 0
    for name in ("cells.csv", "nodes.csv", "diagnostics.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    meta = json.loads((out1 / "meta.json").read_text())
    assert meta["config"]["n"] == 40


def test_cli_run_svg_and_snapshots(tmp_path):
    out = tmp_path / "svg_run"
    rc = cli.main(["run", "sod", "--n", "40", "--t-final", "0.2",
                   "--svg", "--snapshots", "10", "--out", str(out)])
    assert rc == 0
    assert (out / "density.svg").exists()
    assert (out / "pressure.svg").exists()
    snaps = sorted((out / "snapshots").glob("cells_*.csv"))
    assert snaps


def test_cli_convergence(tmp_path, capsys):
    out = tmp_path / "conv.csv"
    rc = cli.main(["convergence", "advection_smooth", "--N", "20,40",
                   "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,err_avg,order_avg,err_point,order_point"
    assert len(lines) == 3
    # halving sanity on a third-order scheme: doubling n divides the error
    # by roughly 8 (loose at this coarse pair)
    row40 = lines[2].split(",")
    assert float(row40[2]) > 1.5


def test_cli_reference_run(tmp_path):
    # constant regions away from any wave stay exactly constant through the
    # first-order solver (finite propagation: one cell per step)
    cfg = load_config("burgers_steepening").with_overrides(t_final=0.01)
    centers, U, prim = run_mod.reference_solution(cfg, 100)
    far = np.abs(centers) > 0.6
    assert np.all(U[far, 0] == -1.0)
    rc = cli.main(["reference", "sod", "--n", "60", "--out", str(tmp_path / "ref")])
    assert rc == 0
    assert (tmp_path / "ref" / "reference.csv").exists()
    meta = json.loads((tmp_path / "ref" / "reference_meta.json").read_text())
    assert meta["reference_cells"] == 60


def test_reference_metadata_notes_published_resolution(tmp_path):
    cfg = load_config("shu_osher").with_overrides(n=64, t_final=0.01)
    run_mod.write_reference_csv(cfg, 100, tmp_path)
    meta = json.loads((tmp_path / "reference_meta.json").read_text())
    assert "300000" in meta["note"].replace(",", "")


def test_cli_verify_suites():
    assert cli.main(["verify", "thm43", "--eps", "0.1"]) == 0
    assert cli.main(["verify", "splitting", "--system", "euler",
                     "--samples", "5000", "--seed", "42"]) == 0
    assert cli.main(["verify", "limiters", "--system", "advection",
                     "--samples", "5000"]) == 0
    assert cli.main(["verify", "sweep", "--preset", "burgers_steepening"]) in (0,)


def test_cli_presets_listing(capsys):
    assert cli.main(["presets"]) == 0
    out = capsys.readouterr().out
    assert "sod" in out and "mhd_leblanc" in out


def test_cli_rejects_bad_config():
    assert cli.main(["run", "definitely_not_a_preset"]) == 2
