import json
import math

import pytest

import zlab


def test_eval_at_a_zero():
    value, err = zlab.eval("zeta", complex(0.5, 14.134725))
    assert abs(value) < 1e-5
    assert err >= 0


def test_family_at_two():
    value, _ = zlab.eval("family", 2, tau=0.0)
    assert abs(value - (1 + math.sqrt(5) / 25) * math.pi**2 / 6) < 1e-12


def test_pole_raises_value_error():
    with pytest.raises(ValueError):
        zlab.eval("zeta", 1)


def test_functional_equation():
    assert zlab.fe_residual("family", complex(0.3, 20), tau=0.4) < 1e-9


def test_count_and_zeros():
    assert zlab.count("zeta", [-1, 2, 1, 50]) == 10
    zs = zlab.zeros("zeta", [0, 1, 10, 30])
    assert [round(z["rho"].imag, 6) for z in zs] == [14.134725, 21.02204, 25.010858]


def test_speiser():
    assert zlab.speiser_compare("zeta", complex(0.5, 14.134725), 0.3) == (0, 0)


def test_trace():
    tr = zlab.trace(complex(0.5, math.pi / math.log(5)), 0.0, 0.1)
    assert tr["status"] in ("stays_on_line", "leaves_at")
    assert tr["samples"][-1][0] == 0.1


def test_run_matches_cli_output():
    out = zlab.run("count", rect=[-1, 2, 1, 50])
    assert out == "10\n"
    report = json.loads(zlab.run("eval", s=[2, 0], function="family"))
    assert report["deriv"] == 0


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
