import pytest

from planar_dipoles.units import PhysicalParams, convert_units


def test_field_coupling_one_debye_one_kv_per_cm():
    # μE = 3.33564e-30 C·m × 1e5 V/m over hc·(1 cm⁻¹) = 1.98645e-23 J
    omega, _ = convert_units(PhysicalParams(1.0, 1.0, 10.0, 1.0))
    assert omega == pytest.approx(3.33564e-25 / 1.98645e-23, rel=1e-5)
    assert omega == pytest.approx(0.0168, abs=5e-5)


def test_dipole_coupling_ten_nm():
    # μ²/(4πϵ0 r³) = 1.0006e-25 J at r = 10 nm
    _, coupling = convert_units(PhysicalParams(1.0, 1.0, 10.0, 1.0))
    assert coupling == pytest.approx(0.00503, abs=1e-5)


def test_distance_scaling():
    _, near = convert_units(PhysicalParams(2.5, 3.0, 4.0, 0.5))
    _, far = convert_units(PhysicalParams(2.5, 3.0, 8.0, 0.5))
    assert near / far == pytest.approx(8.0, rel=1e-14)


@pytest.mark.parametrize("bad", [(0, 1, 1, 1), (1, -1, 1, 1), (1, 1, 0, 1), (1, 1, 1, float("nan"))])
def test_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        PhysicalParams(*bad)
