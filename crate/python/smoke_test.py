"""Smoke test for the `kendall` extension module.

Build and run:
    maturin develop -m crates/python/Cargo.toml --release
    python python/smoke_test.py
"""

import math

import kendall


def close(a, b, tol=1e-12):
    return abs(a - b) < tol


def main():
    x = [1.5, 2.5, 0.5, 4.0]
    k = kendall.kendall_transform(x)
    assert len(k) == 12 and k.n == 4
    assert k[0] == "A" and k.relation(1, 0) == "D"
    assert k.counts() == (6, 6, 0, 0)
    assert close(kendall.entropy(k), math.log(2))
    assert kendall.pair_at(5, 3) == (2, 1) and kendall.pair_index(2, 1, 3) == 5

    # monotone maps leave the transform unchanged
    assert kendall.kendall_transform([math.exp(v) for v in x]) == k
    assert kendall.kendall_transform([1.0, None, 2.0]).counts()[3] == 4

    y = [3.0, 1.0, 4.0, 2.0, 7.0, 5.0]
    z = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
    tau, conc, disc = kendall.kendall_tau(y, z)
    mi = kendall.mutual_information(kendall.kendall_transform(y), kendall.kendall_transform(z))
    assert close(mi, kendall.mi_from_tau(tau))
    assert close(kendall.mi_from_tau(0.5), 0.1308120359411370)

    auc, u = kendall.auroc([0.1, 0.4, 0.35, 0.8], [False, False, True, True])
    assert close(auc, 0.75) and u == 1.0

    assert kendall.copeland_inverse(k) == [2.0, 3.0, 1.0, 4.0]
    cycle = kendall.KendallSequence(3, ["A", "D", "D", "A", "A", "D"])
    assert kendall.copeland_inverse(cycle) == [2.0, 2.0, 2.0]
    votes = [(0.9, 0.05, 0.05)] + [(1.0, 1.0, 1.0)] * 5
    assert kendall.weighted_copeland(3, votes) == [1.0, 3.0, 2.0]

    merged = kendall.merge_transformed([kendall.kendall_transform([1, 2]), kendall.kendall_transform([2, 1])])
    assert len(merged) == 12 and merged.counts()[3] == 8

    jittered = kendall.jitter_ties([1.0, 1.0, 2.0], 7, 0.1)
    assert len(set(jittered)) == 3 and jittered[2] == 2.0

    ranking = kendall.rank_features({"copy": z, "noise": y}, z)
    assert ranking[0][0] == "copy" and close(ranking[0][1], math.log(2))
    assert kendall.rank_features({"f": z}, ["a", "a", "b", "b", "c", "c"])[0][0] == "f"

    sims = kendall.simulate_bivariate(0.9, 100, 5, seed=1)
    assert list(sims) == ["kendall", "width3", "width5", "gauss"]
    assert all(len(v) == 5 for v in sims.values())
    assert sims == kendall.simulate_bivariate(0.9, 100, 5, seed=1)

    for bad in (lambda: kendall.mi_from_tau(1.5), lambda: kendall.kendall_transform([1.0])):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
