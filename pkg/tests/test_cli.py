import csv
import io
import json
import math

import jsonschema
import pytest

from heckebcz import cli, make_context
from heckebcz.output import load_schema


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    rc = cli.run(list(argv), out, err)
    return rc, out.getvalue(), err.getvalue()


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(body))


def meta(text):
    out = {}
    for line in text.splitlines():
        if line.startswith("# "):
            k, v = line[2:].split(": ", 1)
            out[k] = json.loads(v)
    return out


def test_enumerate_examples():
    rc, out, _ = call("enumerate", "--q", "3", "--tau", "5", "--interval", "0,1")
    assert rc == 0
    r = rows(out)
    assert len(r) == 11
    assert [x["y_exact"] + ":" + x["x_exact"] for x in r[:3]] == ["0/1:1/1", "1/1:5/1", "1/1:4/1"]
    assert meta(out) == {"q": 3, "tau": "5/1", "interval": ["0/1", "1/1"]}
    rc, out, _ = call("enumerate", "--q", "5", "--tau", "1", "--interval", "0,2")
    assert rc == 0 and len(rows(out)) == 2


def test_enumerate_exact_columns_roundtrip():
    ctx = make_context(5)
    rc, out, _ = call("enumerate", "--q", "5", "--tau", "8", "--interval", "0;1,1/2")
    assert rc == 0
    r = rows(out)
    hi = ctx.num("1,1/2")
    for x in r:
        vx, vy = ctx.num(x["x_exact"]), ctx.num(x["y_exact"])
        assert float(vx) == float(x["x_float"])
        assert vy <= hi * vx
        assert 2 <= int(x["region_index"]) <= 4


def test_enumerate_tau_below_one_is_empty():
    rc, out, _ = call("enumerate", "--q", "4", "--tau", "1/2")
    assert rc == 0 and rows(out) == []


@pytest.mark.parametrize("argv", [
    ["enumerate", "--q", "2", "--tau", "5"],
    ["enumerate", "--q", "3", "--tau", "0"],
    ["enumerate", "--q", "3", "--tau", "5", "--interval", "1,0"],
    ["enumerate", "--q", "3", "--tau", "x"],
    ["orbit", "--q", "5", "--a", "2", "--b", "0"],
    ["orbit", "--q", "5", "--a", "1"],
    ["stats", "slope-gap", "--q", "3"],
    ["stats", "mean-roof", "--q", "3", "--method", "montecarlo"],
    ["stats", "dirichlet", "--q", "3"],
])
def test_errors_exit_2(argv):
    rc, out, err = call(*argv)
    assert rc == 2
    assert err.startswith("heckebcz: error:")


def test_orbit_examples():
    rc, out, _ = call("orbit", "--q", "3", "--a", "1", "--b", "1", "--n", "3")
    r = rows(out)
    assert rc == 0 and len(r) == 3
    assert len({(x["a"], x["b"], x["k"]) for x in r}) == 1
    rc, out, _ = call("orbit", "--q", "5", "--a", "1", "--b", "1", "--n", "1")
    (x,) = rows(out)
    assert (x["region"], x["k"]) == ("4", "1")


def test_mean_roof_quadrature():
    rc, out, _ = call("stats", "mean-roof", "--q", "3", "--tol", "1e-6")
    (x,) = rows(out)
    assert abs(float(x["value"]) - math.pi ** 2 / 3) < 1e-5


def test_mean_roof_montecarlo():
    rc, out, _ = call("stats", "mean-roof", "--q", "5", "--method", "montecarlo",
                      "--samples", "2e5", "--seed", "1")
    (x,) = rows(out)
    assert rc == 0 and x["method"] == "montecarlo"
    assert abs(float(x["value"]) - 3.659850585233) < float(x["error_bound"])
    assert meta(out)["seed"] == 1


def test_cent_dist_table():
    rc, out, _ = call("stats", "cent-dist", "--q", "5", "--grid", "0:0.1:5",
                      "--samples", "2e5", "--seed", "7")
    r = rows(out)
    assert rc == 0 and len(r) == 51
    vals = [float(x["limiting"]) for x in r]
    assert vals[0] == 1.0
    assert all(u >= v for u, v in zip(vals, vals[1:]))
    assert float(r[-1]["t"]) == 5.0


def test_slope_gap_with_empirical():
    rc, out, _ = call("stats", "slope-gap", "--q", "3", "--grid", "0,1,2,4", "--samples",
                      "1e5", "--seed", "2", "--empirical-tau", "60")
    r = rows(out)
    assert rc == 0 and [x["t"] for x in r] == ["0", "1", "2", "4"]
    assert float(r[0]["empirical"]) == 1.0
    m = meta(out)
    assert m["sweep_count"] == 1 + sum(math.gcd(a, b) == 1 for a in range(1, 61) for b in range(1, a + 1))
    assert m["sup_distance"] < 0.1


def test_dirichlet_rows():
    rc, out, _ = call("stats", "dirichlet", "--q", "3", "--alpha", "7050459/9901099",
                      "--count", "5")
    r = rows(out)
    assert rc == 0 and len(r) == 5
    assert all(x["pass"] == "true" for x in r)
    rc, out, _ = call("stats", "dirichlet", "--q", "5", "--alpha", "1", "--count", "3")
    r = rows(out)
    assert r[-1]["exact"] == "true" and r[-1]["x_exact"] == r[-1]["y_exact"] == "0,1/1"


def test_count_triangle():
    rc, out, _ = call("stats", "count-triangle", "--q", "3", "--tau", "100")
    (x,) = rows(out)
    assert rc == 0 and x["count"] == "3045"
    assert 0.95 <= float(x["ratio"]) <= 1.05
    rc, out, _ = call("stats", "count-triangle", "--q", "3", "--tau", "100", "--open-far")
    assert rows(out)[0]["count"] == "3005"
    rc, _, err = call("stats", "count-triangle", "--q", "3", "--e1", "1,1", "--e2", "2,2")
    assert rc == 2 and "degenerate" in err


def test_square_equi_and_svg(tmp_path):
    svg = tmp_path / "cloud.svg"
    rc, out, _ = call("stats", "square-equi", "--q", "5", "--tau", "30", "--grid-n", "4",
                      "--svg", str(svg))
    r = rows(out)
    assert rc == 0 and len(r) == 16
    counts = {(int(x["row"]), int(x["col"])): int(x["count"]) for x in r}
    assert sum(counts.values()) == meta(out)["total"]
    assert counts[0, 0] == counts[3, 3] == counts[0, 3] == counts[3, 0]
    text = svg.read_text()
    assert text.startswith("<svg") or text.startswith("<?xml")
    assert text.count("<circle") == meta(out)["total"]


def test_ford_svg(tmp_path):
    path = tmp_path / "ford.svg"
    rc, _, _ = call("stats", "ford-svg", "--q", "5", "--tau", "10", "--interval", "0,lam",
                    "--output", str(path))
    assert rc == 0
    text = path.read_text()
    assert "<circle" in text and text.rstrip().endswith("</svg>")


def test_json_matches_schema():
    schema = load_schema()
    for argv in (["enumerate", "--q", "4", "--tau", "6"],
                 ["orbit", "--q", "7", "--a", "1/2", "--b", "1", "--n", "4"],
                 ["stats", "dirichlet", "--q", "5", "--alpha", "3/7", "--count", "3"],
                 ["selftest"]):
        rc, out, _ = call(*argv, "--format", "json")
        assert rc == 0
        doc = json.loads(out)
        jsonschema.validate(doc, schema)
        assert all(len(row) == len(doc["columns"]) for row in doc["rows"])


def test_csv_float_roundtrip():
    rc, out, _ = call("enumerate", "--q", "7", "--tau", "9")
    for x in rows(out):
        v = float(x["slope_float"])
        assert float(repr(v)) == v
        assert float(x["y_float"]) / float(x["x_float"]) == pytest.approx(v, rel=1e-15)


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"q": 5, "tau": "1", "interval": "0,2", "format": "json"}))
    rc, out, _ = call("--config", str(cfg), "enumerate")
    doc = json.loads(out)
    assert rc == 0 and doc["meta"]["q"] == 5 and len(doc["rows"]) == 2
    rc, out, _ = call("--config", str(cfg), "enumerate", "--q", "3", "--tau", "5",
                      "--interval", "0,1", "--format", "csv")
    assert len(rows(out)) == 11
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rc, _, err = call("--config", str(bad), "enumerate")
    assert rc == 2


def test_output_file(tmp_path):
    path = tmp_path / "out.csv"
    rc, out, _ = call("enumerate", "--q", "3", "--tau", "5", "-o", str(path))
    assert rc == 0 and out == ""
    assert len(rows(path.read_text())) == 11


def test_selftest():
    rc, out, _ = call("selftest")
    assert rc == 0
    assert all(x["ok"] == "true" for x in rows(out))


def test_parsers():
    ctx = make_context(5)
    assert cli.parse_count("1e6") == 10**6
    assert cli.parse_grid("0:0.5:2").tolist() == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert list(cli.parse_grid("1,2.5,3")) == [1.0, 2.5, 3.0]
    with pytest.raises(cli.CliError):
        cli.parse_grid("1,3,2.5")
    assert cli.parse_interval(ctx, "0;1,1/2") == (0, ctx.num("1,1/2"))
    assert cli.parse_exact(ctx, "lam") == ctx.lam
    with pytest.raises(cli.CliError):
        cli.parse_count("many")
    with pytest.raises(cli.CliError):
        cli.parse_interval(ctx, "1")
