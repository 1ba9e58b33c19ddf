import numpy as np
import pytest

from pointerlab import cli


def run(argv):
    return cli.main(argv)


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, rows


def test_density_writes_csv_and_pgm(tmp_path):
    out = str(tmp_path / "map")
    rc = run(["density", "--model", "trotter90", "--weakness", "0.15",
              "--n", "6", "--res", "96", "--out", out])
    assert rc == 0
    header, rows = read_csv(out + ".csv")
    assert header == ["z", "x", "density"]
    assert len(rows) == 96 * 96
    vals = np.array([[float(c) for c in r] for r in rows])
    assert np.all(vals[:, 2] >= 0)
    # midpoint Riemann mass over the shipped window
    z = np.unique(vals[:, 0])
    cell = (z[1] - z[0]) ** 2
    assert np.sum(vals[:, 2]) * cell == pytest.approx(1.0, abs=1e-3)

    pgm = (tmp_path / "map.pgm").read_bytes()
    assert pgm.startswith(b"P5\n# pointerlab meta: ")
    head, _, rest = pgm.partition(b"65535\n")
    assert b"96 96" in head
    assert b"max_density=" in head
    assert len(rest) == 2 * 96 * 96


def test_density_byte_determinism(tmp_path):
    args = ["density", "--model", "trotter45", "--theta-i", "1.2",
            "--weakness", "0.3", "--n", "4", "--res", "48"]
    run(args + ["--out", str(tmp_path / "a")])
    run(args + ["--out", str(tmp_path / "b")])
    for ext in (".csv", ".pgm"):
        assert ((tmp_path / ("a" + ext)).read_bytes()
                == (tmp_path / ("b" + ext)).read_bytes())


def test_curve_csv_format(tmp_path):
    out = str(tmp_path / "curve.csv")
    rc = run(["curve", "--model", "trotter90", "--n", "6",
              "--theta-i", "1.5", "--theta-i", "0.0",
              "--wmin", "0.2", "--wmax", "0.8", "--wcount", "3",
              "--out", out])
    assert rc == 0
    header, rows = read_csv(out)
    assert header == ["weakness", "theta_i", "f_avg"]
    assert len(rows) == 6
    keys = [(float(r[1]), float(r[0])) for r in rows]
    assert keys == sorted(keys)
    assert all(0.45 <= float(r[2]) <= 0.76 for r in rows)


def test_compare_deviations_decrease(tmp_path):
    out = str(tmp_path / "cmp.csv")
    rc = run(["compare", "--n-list", "1,4,16", "--weakness", "0.3",
              "--out", out])
    assert rc == 0
    header, rows = read_csv(out)
    assert header == ["n", "max_abs_deviation"]
    devs = {int(r[0]): float(r[1]) for r in rows}
    assert devs[1] > devs[4] > devs[16]


def test_compare_weak_regime_tiny_deviation(tmp_path):
    out = str(tmp_path / "cmpw.csv")
    run(["compare", "--n-list", "2", "--weakness", "10", "--out", out])
    _, rows = read_csv(out)
    assert float(rows[0][1]) < 1e-3


def test_oracle_check_passes():
    assert run(["oracle-check", "--points", "5"]) == 0


def test_oracle_check_deterministic_report(capsys):
    run(["oracle-check", "--points", "3", "--seed", "42"])
    first = capsys.readouterr().out
    run(["oracle-check", "--points", "3", "--seed", "42"])
    assert capsys.readouterr().out == first


def test_usage_error_exit_code(tmp_path):
    rc = run(["density", "--model", "continuous", "--weakness", "-0.5",
              "--res", "8", "--out", str(tmp_path / "x")])
    assert rc == 2
    rc = run(["compare", "--n-list", "0,2", "--out", str(tmp_path / "y.csv")])
    assert rc == 2


def test_failed_run_leaves_no_partial_files(tmp_path):
    run(["density", "--model", "continuous", "--weakness", "-0.5",
         "--res", "8", "--out", str(tmp_path / "x")])
    assert list(tmp_path.iterdir()) == []
