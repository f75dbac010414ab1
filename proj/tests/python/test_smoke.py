import math
import os
import pathlib

import numpy as np
import pytest

import tgplab

CONFIG_DIR = pathlib.Path(os.environ.get("TGP_CONFIG_DIR", pathlib.Path(__file__).parents[2] / "configs"))

GP = """
law.theta.variant = gp
law.theta.kernel.terms = 1:1
law.xi.variant = gp
law.xi.kernel.terms = 1:1
mesh.n = 8
"""


@pytest.fixture
def system():
    return tgplab.assemble(tgplab.ModelConfig.parse(GP))


def test_kernel_functions():
    k = tgplab.PronyKernel([(2.0, 1.0), (1.0, 3.0)])
    assert len(k) == 2
    assert tgplab.evaluate_g(k, 0.0) == pytest.approx(2.0 + 1.0 / 3.0)
    assert tgplab.evaluate_mu(k, 1.0) == pytest.approx(2 * math.exp(-1) + math.exp(-3))
    assert tgplab.total_mass(tgplab.normalize_unit_mass(k)) == pytest.approx(1.0, abs=1e-14)
    assert tgplab.rescale(tgplab.PronyKernel([(1.0, 1.0)]), 0.5).terms == [(4.0, 2.0)]
    assert tgplab.dafermos_rate(k) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        tgplab.PronyKernel([(1.0, -1.0)])


def test_config_echo_round_trip():
    c = tgplab.ModelConfig.parse(GP)
    assert c.cells == 8
    again = tgplab.ModelConfig.parse(c.echo())
    assert again.echo() == c.echo()
    with pytest.raises(ValueError, match="nope"):
        tgplab.ModelConfig.parse(GP + "nope = 1\n")


def test_energy_and_dissipation_identity(system):
    rng = np.random.default_rng(3)
    for _ in range(5):
        u = rng.standard_normal(system.dim)
        au = tgplab.apply_generator(system, u)
        lhs = u @ system.gram @ au
        assert lhs == pytest.approx(-tgplab.dissipation(system, u), rel=1e-10, abs=1e-12)
        assert tgplab.energy(system, u) > 0.0


def test_spectrum(system):
    lam = np.asarray(tgplab.eigenvalues(system))
    assert lam.size == system.dim
    a = tgplab.spectral_abscissa(system)
    assert a == pytest.approx(lam.real.max())
    assert a < 0.0
    assert tgplab.resolvent_norm(system, 1.0) >= 1.0 / np.abs(1j - lam).min() * (1 - 1e-9)


def test_midpoint_and_simulate(system):
    u0 = np.real(tgplab.dominant_mode(system))
    u1 = tgplab.step_midpoint(system, u0, 0.01)
    assert tgplab.energy(system, u1) <= tgplab.energy(system, u0)
    out = tgplab.simulate(system, u0, 0.01, 20.0)
    assert len(out["times"]) == len(out["energies"])
    assert np.all(np.diff(out["energies"]) <= 1e-14)


def test_cli(tmp_path):
    status, out, _ = tgplab.run_cli(["--version"])
    assert status == 0 and out.strip() == tgplab.__version__
    csv = tmp_path / "spec.csv"
    status, out, err = tgplab.run_cli(["spectrum", "--config", str(CONFIG_DIR / "base.cfg"), "--out", str(csv)])
    assert status == 0, err
    assert csv.read_text().startswith("re,im\n")
    assert (tmp_path / "spec.jsonl").exists()
    status, _, err = tgplab.run_cli(["spectrum", "--config", str(tmp_path / "absent.cfg")])
    assert status == 2 and "absent.cfg" in err
