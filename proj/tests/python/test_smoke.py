import cmath
import math

import pytest

import clf_kit


def test_domain_basics():
    ball = clf_kit.Domain("ball")
    assert ball.tag == "ball"
    assert ball.rho([1, 0]) == pytest.approx(0.0)
    assert ball.gradient([1, 0]) == [pytest.approx(1.0), pytest.approx(0.0)]
    p = ball.boundary_point(seed=3, index=2)
    assert abs(ball.rho(p)) < 1e-12


def test_kernel_and_quasimetric():
    ball = clf_kit.Domain("ball")
    assert clf_kit.clf_kernel(ball, [1, 0], [0.5, 0]) == pytest.approx(4.0)
    assert clf_kit.quasimetric(ball, [1, 0], [1j, 0]) == pytest.approx(math.sqrt(2.0))


def test_reproduction_and_mass():
    ell = clf_kit.Domain("ellipsoid(2,1)")
    assert clf_kit.dS_mass(ell) == pytest.approx(1.0, abs=1e-4)
    ball = clf_kit.Domain("ball")
    value = clf_kit.reproduce_monomial(ball, 2, 1, [0.3, 0.2j])
    assert abs(value - 0.018j) < 1e-6


def test_area_integral_is_finite():
    ball = clf_kit.Domain("ball")
    v = clf_kit.area_integral_smooth(ball, 0, [1, 0])
    assert math.isfinite(v) and v > 0


def test_probe_runs_and_reports():
    reports = clf_kit.run_probe("measures", "ellipsoid(2,1)")
    assert len(reports) == 1
    r = reports[0]
    assert r["probe"].startswith("surface")
    assert r["pass"] is True
    assert "code_hash" in r


def test_config_errors():
    with pytest.raises(clf_kit.ConfigError):
        clf_kit.validate_config({"probes": []})
    with pytest.raises(ValueError):
        clf_kit.validate_config({"probes": ["measures"], "l": 3})
    with pytest.raises(clf_kit.ConfigError):
        clf_kit.run_probe("measures", "ball", unknown_key=1)
    clf_kit.validate_config({"probes": ["measures"], "p": [2, 4], "domains": ["ball"]})
    assert "area-bmo" in clf_kit.probe_names()
