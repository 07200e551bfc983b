import pytest

import sasano_cert


def test_prove_reaches_not_integrable():
    report = sasano_cert.prove()
    assert report["status"] == "pass"
    verdict = next(s for s in report["sections"] if s["name"] == "verdict")
    assert verdict["payload"]["aggregate"] == "NotIntegrable"
    assert verdict["payload"]["identity_component"] == "SL2 x SL2"


def test_prove_alternate_tower_and_partial_run():
    assert sasano_cert.prove(alpha_wasow=True)["status"] == "pass"
    partial = sasano_cert.prove(stop_after="reduction")
    assert partial["sections"][-1]["name"] == "reduction"
    assert "| verdict | pass |" in sasano_cert.prove_markdown()
    with pytest.raises(sasano_cert.InputError):
        sasano_cert.prove(stop_after="nowhere")


def test_verify_seed():
    assert sasano_cert.verify_seed()["status"] == "pass"
    assert sasano_cert.verify_seed("1/2,1/8,1/8")["status"] == "fail"
    image = {
        "params": ["-2/5", "3/5", "1/10"],
        "components": {"x": "-2/5*t", "y": "0", "z": "-1/t", "w": "-2/5*t"},
    }
    assert sasano_cert.verify_seed(solution=image)["status"] == "pass"
    with pytest.raises(ValueError):
        sasano_cert.verify_seed("1,1,1")


def test_orbit_and_parameters():
    report, nodes = sasano_cert.orbit(1)
    assert report["status"] == "pass"
    assert len(nodes) == 4
    assert all(n["verified"] for n in nodes)
    assert sasano_cert.act_on_params(0, "2/5,1/5,1/10") == ["-2/5", "3/5", "1/10"]
    assert sasano_cert.matsuda_row("2/5,1/5,1/10") == 1
    assert sasano_cert.matsuda_row("1/3,0,1/3") is None


def test_classification_values():
    assert sasano_cert.whittaker_parameters() == [("1/2", "1/6"), ("1/2", "1/6")]
    assert sasano_cert.stokes_triviality("1/2", "1/6") == (False, False)
    assert sasano_cert.stokes_triviality("2/3", "1/6") == (True, False)
    assert sasano_cert.stokes_triviality("2/3", "1/6", with_zero=False) == (False, False)
    rows = sasano_cert.nve_matrix()
    assert len(rows) == 4 and rows[0][1] == "-8/5*t"
