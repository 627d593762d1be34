"""Smoke test for the isoforge_py extension.

Build and install first:  pip install --no-build-isolation -e crates/py
"""

from fractions import Fraction

import isoforge_py as iso


def main():
    q8 = iso.Group.zoo("quaternion")
    c = q8.classify()
    assert (c.case, len(c.hull_e), c.kappa_in_hull) == ("C", 8, True), c
    assert q8.is_isomorphic(iso.Group.zoo("IS:1"))
    assert q8.exponent() == 4

    s3 = iso.Group.zoo("sym:3")
    assert s3.classify().case == "A"
    assert s3.admits_left_rigid()
    left = s3.left_action()
    assert len(left.hull()) == 6
    report = left.rigid_metric(epsilon=Fraction(1, 10), scheme="paper", verify=True)
    assert report.exact and report.verified and report.corridor_ok, report
    assert report.realized_group_order == 6
    assert report.metric.isometry_order() == 6
    round_trip = iso.Metric.from_text(report.metric.to_text())
    assert round_trip.rows() == report.metric.rows()

    z4 = iso.Group.zoo("cyclic:4")
    r = z4.left_action().rigid_metric()
    assert not r.exact and r.realized_group_order == 8, r

    d = iso.Metric([[0, 1, Fraction(11, 10)], [1, 0, "6/5"], [Fraction(11, 10), "6/5", 0]])
    assert d.isometry_order() == 1
    assert d.get(1, 2) == Fraction(6, 5)
    assert iso.Metric.discrete(3).isometry_order() == 6

    try:
        iso.Metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    except ValueError as e:
        assert "triangle" in str(e)
    else:
        raise AssertionError("triangle violation accepted")

    try:
        iso.Group.zoo("sym:4").left_action().hull(budget=1)
    except iso.BudgetExceeded:
        pass
    else:
        raise AssertionError("budget not enforced")

    frac = iso.density(points=4, trials=50, seed=1)
    assert isinstance(frac, Fraction) and 0 <= frac <= 1
    assert dict(iso.case_sizes()) == {"A": 1, "B": 2, "C": 8}
    print("smoke test ok:", c, report, f"density={frac}")


if __name__ == "__main__":
    main()
