"""Smoke test for the compiled `quasifree` extension module."""

import json

import quasifree as qf


def main():
    k = qf.constants_report()
    assert abs(k["a"] - 0.0941248) < 1e-6, k
    assert abs(k["c1"] - 0.001543) < 1e-6, k

    gamma = [[0.3, 0.1j], [-0.1j, 0.6]]
    for beta in (0.1, 1.0, 3.0):
        closed = qf.hf_generating_function(gamma, beta)
        oracle = qf.oracle_generating_function(gamma, beta)
        assert abs(closed - oracle) < 1e-12, (beta, closed, oracle)
    sectors = qf.hf_sector_distribution(gamma)
    assert abs(sum(sectors) - 1.0) < 1e-12
    assert qf.mixed_vacuum_bound(0.0) == 1.0

    reports = qf.run_verify("wick", dim=3, trials=10, seed=1)
    assert all(c["passed"] for r in reports for c in r["checks"]), reports

    table = qf.energy_table([1e2, 2e7, 1e8])
    z1 = table["thresholds"]["z1_tilde"]
    rows = table["rows"]
    assert rows[0]["below_threshold"] and rows[0]["pz_lower"] is None
    assert 0.99 < rows[1]["pz_lower"] <= rows[2]["pz_lower"] <= 1.0
    for r in rows:
        assert abs(r["e_lower"] / r["z"] ** (5 / 3) + k["c2"]) < 1e-12

    p = qf.pair_probability_lower_bound(2 * z1, nu={"kind": "gaussian", "sigma": 1.0})
    assert p is not None and 0.0 < p <= 1.0
    assert qf.pair_probability_lower_bound(1.0) is None

    print(json.dumps({"a": k["a"], "z1_tilde": z1, "pz_at_2e7": rows[1]["pz_lower"]}))
    print("smoke test passed")


if __name__ == "__main__":
    main()
