import json

import numpy as np
import pytest

import simplicial_filters as sf
from simplicial_filters import io
from simplicial_filters.cli import main
from simplicial_filters.design import ChebyshevFilter


def test_canonical_json_reruns_identical(tmp_path):
    payload = {"a": [1, 2.5, -0.1], "b": {"x": 1e-17, "y": True, "z": None}}
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    io.dump_json(payload, p1)
    io.dump_json(payload, p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert json.loads(p1.read_text()) == payload


def test_float_format_is_lossless():
    for x in (0.1, 1 / 3, 1e-300, 7.2345678901234567e12):
        assert float(io.format_float(x)) == x


def test_complex_roundtrip(tmp_path, toy):
    path = tmp_path / "sc.json"
    io.save_complex(toy, path)
    assert io.load_complex(path) == toy
    data = json.loads(path.read_text())
    assert data["vertex_count"] == 7


def test_complex_infer_flag(tmp_path, toy):
    path = tmp_path / "sc.json"
    payload = {
        "vertex_count": toy.vertex_count,
        "edges": [list(e) for e in toy.edges],
        "infer_triangles": True,
    }
    path.write_text(json.dumps(payload))
    sc = io.load_complex(path)
    assert sc.triangles == toy.triangles


def test_signal_roundtrip(tmp_path, toy, rng):
    flow = rng.standard_normal(toy.n_edges)
    path = tmp_path / "f.csv"
    io.save_signal(flow, path)
    np.testing.assert_array_equal(io.load_signal(path), flow)


def test_signal_endpoint_form_flips_sign(tmp_path, toy):
    # value quoted against the reversed pair flips onto the reference
    lines = ["u,v,value"]
    flow = np.arange(1.0, toy.n_edges + 1)
    for i, (u, v) in enumerate(toy.edges):
        if i % 2:
            lines.append(f"{v},{u},{-flow[i]}")
        else:
            lines.append(f"{u},{v},{flow[i]}")
    path = tmp_path / "f.csv"
    path.write_text("\n".join(lines) + "\n")
    np.testing.assert_allclose(io.load_signal(path, toy), flow, atol=0)


def test_market_roundtrip(tmp_path):
    market = sf.demo_market()
    path = tmp_path / "m.csv"
    io.save_market(market, path)
    back = io.load_market(path)
    assert back.currency_names == market.currency_names
    np.testing.assert_allclose(back.rate, market.rate, atol=0)


def test_market_roundtrip_with_holes(tmp_path):
    rate = np.array([
        [1.0, 1.2, np.nan],
        [1 / 1.2, 1.0, 2.0],
        [np.nan, 0.5, 1.0],
    ])
    market = sf.ExchangeMarket(("A", "B", "C"), rate)
    path = tmp_path / "m.csv"
    io.save_market(market, path)
    back = io.load_market(path)
    assert np.isnan(back.rate[0, 2]) and np.isnan(back.rate[2, 0])
    assert back.rate[1, 2] == 2.0


def test_filter_roundtrip(tmp_path):
    coeffs = sf.FilterCoefficients(0.5, (1.0, -0.25), (0.75,))
    path = tmp_path / "h.json"
    io.save_filter(coeffs, path)
    assert io.load_filter(path) == coeffs


def test_chebyshev_filter_roundtrip(tmp_path):
    spec = sf.ResponseSpec(
        10.0,
        sf.response_inverse_shift(0.1, 5.5),
        sf.response_inverse_shift(0.1, 4.0),
    )
    filt = sf.chebyshev_design(spec, 5.5, 4.0, 12, 9)
    path = tmp_path / "h.json"
    io.save_filter(filt, path)
    back = io.load_filter(path)
    assert isinstance(back, ChebyshevFilter)
    np.testing.assert_array_equal(back.c_lower, filt.c_lower)
    np.testing.assert_array_equal(back.c_upper, filt.c_upper)
    assert back.omega_lower == filt.omega_lower
    assert back.g0 == filt.g0


def test_response_spec_loading(tmp_path):
    path = tmp_path / "spec.json"
    io.dump_json({
        "g0": 2.0,
        "gradient": {"family": "logistic", "k": 10.0, "lambda0": 1.0,
                     "max": 6.0},
        "curl": {"family": "table", "points": [[0.0, 2.0], [4.0, 0.0]]},
    }, path)
    spec = io.load_response_spec(path)
    assert spec.g0 == 2.0
    assert spec.gradient(1.0) == pytest.approx(0.5 * 2 / 2, abs=0.51)
    assert spec.curl(2.0) == pytest.approx(1.0)
    io.dump_json({"g0": 1.0, "gradient": {"family": "bogus"}}, path)
    with pytest.raises(sf.DataError):
        io.load_response_spec(path)


def test_spectrum_json(tmp_path, toy):
    path = tmp_path / "spec.json"
    io.save_spectrum(sf.hodge_spectrum(toy), path)
    data = json.loads(path.read_text())
    assert data["n_harmonic"] == 1
    assert len(data["lambda_gradient"]) == 6
    assert len(data["lambda_curl"]) == 3


def run_cli(args):
    return main(list(args))


def test_cli_info_and_exit_codes(tmp_path, toy, capsys):
    sc_path = tmp_path / "sc.json"
    io.save_complex(toy, sc_path)
    assert run_cli(["info", "--sc", str(sc_path)]) == 0
    out = capsys.readouterr().out
    assert "N1=10" in out and "D_G=6" in out
    # missing file -> data error
    assert run_cli(["info", "--sc", str(tmp_path / "nope.json")]) == 2
    # unknown command -> usage error
    assert run_cli(["frobnicate"]) == 1
    # malformed complex -> data error
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertex_count": 3, "edges": [[0, 9]]}')
    assert run_cli(["info", "--sc", str(bad)]) == 2


def test_cli_pipeline_byte_identical(tmp_path, toy, capsys):
    sc_path = tmp_path / "sc.json"
    io.save_complex(toy, sc_path)
    flow = sf.hodge_spectrum(toy).basis @ np.ones(toy.n_edges)
    sig_path = tmp_path / "flow.csv"
    io.save_signal(flow, sig_path)

    spec_path = tmp_path / "target.json"
    io.dump_json({
        "g0": 0.0,
        "gradient": {"family": "constant", "value": 1.0, "max": 5.5},
        "curl": {"family": "constant", "value": 0.0, "max": 4.0},
    }, spec_path)

    filt_path = tmp_path / "filt.json"
    args = ["design", "--spec", str(spec_path), "--method", "ls",
            "--sc", str(sc_path), "--order-lower", "6", "--order-upper", "3",
            "--out", str(filt_path)]
    assert run_cli(args) == 0
    first = filt_path.read_bytes()
    assert run_cli(args) == 0
    assert filt_path.read_bytes() == first

    out_path = tmp_path / "out.csv"
    assert run_cli(["filter", "--sc", str(sc_path), "--filter", str(filt_path),
                    "--signal", str(sig_path), "--out", str(out_path)]) == 0
    got = io.load_signal(out_path)
    spec = sf.hodge_spectrum(toy)
    np.testing.assert_allclose(got, spec.u_gradient @ (spec.u_gradient.T @ flow),
                               atol=1e-6)
    capsys.readouterr()


def test_cli_decompose_and_spectrum(tmp_path, toy, rng, capsys):
    sc_path = tmp_path / "sc.json"
    io.save_complex(toy, sc_path)
    sig_path = tmp_path / "flow.csv"
    io.save_signal(rng.standard_normal(toy.n_edges), sig_path)
    dec_path = tmp_path / "dec.json"
    assert run_cli(["decompose", "--sc", str(sc_path), "--signal",
                    str(sig_path), "--out", str(dec_path)]) == 0
    data = json.loads(dec_path.read_text())
    total = (np.asarray(data["gradient"]) + np.asarray(data["curl"])
             + np.asarray(data["harmonic"]))
    np.testing.assert_allclose(total, io.load_signal(sig_path), atol=1e-10)
    spec_path = tmp_path / "spectrum.json"
    assert run_cli(["spectrum", "--sc", str(sc_path), "--out",
                    str(spec_path)]) == 0
    capsys.readouterr()


def test_cli_extract_denoise(tmp_path, toy, capsys):
    sc_path = tmp_path / "sc.json"
    io.save_complex(toy, sc_path)
    flow = sf.hodge_spectrum(toy).basis @ np.ones(toy.n_edges)
    sig_path = tmp_path / "flow.csv"
    io.save_signal(flow, sig_path)
    out_path = tmp_path / "g.csv"
    assert run_cli(["extract", "--sc", str(sc_path), "--signal", str(sig_path),
                    "--which", "gradient", "--method", "ls",
                    "--out", str(out_path)]) == 0
    assert "nrmse=" in capsys.readouterr().out
    den_path = tmp_path / "d.csv"
    assert run_cli(["denoise", "--sc", str(sc_path), "--signal", str(sig_path),
                    "--mu", "0.5", "--out", str(den_path)]) == 0
    expect = sf.denoise(toy, flow, 0.5, "hodge_laplacian", "exact")
    np.testing.assert_allclose(io.load_signal(den_path), expect, atol=1e-10)
    capsys.readouterr()


def test_cli_pagerank(tmp_path, toy, capsys):
    sc_path = tmp_path / "sc.json"
    io.save_complex(toy, sc_path)
    assert run_cli(["pagerank", "--sc", str(sc_path), "--gamma", "0.05",
                    "--edge", "3"]) == 0
    assert "norm_total=" in capsys.readouterr().out
    csv_path = tmp_path / "pr.csv"
    assert run_cli(["pagerank", "--sc", str(sc_path), "--gamma", "0.05",
                    "--all", "--out", str(csv_path)]) == 0
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0] == ("edge_index,u,v,norm_total,norm_H,norm_G,norm_C,"
                        "rel_H,rel_G,rel_C")
    assert len(lines) == toy.n_edges + 1
    # both --edge and --all is a usage error
    assert run_cli(["pagerank", "--sc", str(sc_path), "--edge", "0",
                    "--all", "--out", str(csv_path)]) == 1
    capsys.readouterr()


def test_cli_arbitrage(tmp_path, capsys):
    market_path = tmp_path / "market.csv"
    io.save_market(sf.demo_market(), market_path)
    assert run_cli(["arbitrage", "check", "--market", str(market_path)]) == 0
    out = capsys.readouterr().out
    assert "flagged=6" in out
    fixed_path = tmp_path / "fixed.csv"
    assert run_cli(["arbitrage", "correct", "--market", str(market_path),
                    "--out", str(fixed_path)]) == 0
    assert run_cli(["arbitrage", "check", "--market", str(fixed_path)]) == 0
    assert "flagged=0" in capsys.readouterr().out


def test_cli_fixtures_generate(tmp_path, capsys):
    out_path = tmp_path / "road.json"
    assert run_cli(["fixtures", "generate", "--nodes", "30", "--edges", "45",
                    "--seed", "3", "--out", str(out_path)]) == 0
    sc = io.load_complex(out_path)
    assert sc.vertex_count == 30 and sc.n_edges == 45
    # impossible edge budget -> data error
    assert run_cli(["fixtures", "generate", "--nodes", "30", "--edges", "5",
                    "--seed", "3", "--out", str(out_path)]) == 2
    capsys.readouterr()


def test_cli_response_csv(tmp_path, toy, capsys):
    sc_path = tmp_path / "sc.json"
    io.save_complex(toy, sc_path)
    filt_path = tmp_path / "h.json"
    io.save_filter(sf.FilterCoefficients(1.0, (0.5,), (0.25,)), filt_path)
    resp_path = tmp_path / "resp.csv"
    assert run_cli(["response", "--sc", str(sc_path), "--filter",
                    str(filt_path), "--out", str(resp_path)]) == 0
    lines = resp_path.read_text().strip().split("\n")
    assert lines[0] == "lambda,type,response"
    assert len(lines) == 1 + 1 + 6 + 3
    lam, kind, val = lines[1].split(",")
    assert kind == "H" and float(val) == pytest.approx(1.0)
    capsys.readouterr()
