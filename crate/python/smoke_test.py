"""Smoke test for the pycretan extension module.

Build and install first:  pip install --no-build-isolation ./crates/py
Then run:                 python3 python/smoke_test.py
"""

import json

import pycretan as pc


def main():
    roots = pc.solve_quadratic(pc.Scalar("1"), pc.Scalar("-6"), pc.Scalar("6"))
    assert [str(r) for r in roots] == ["(3-1*sqrt(3))/6", "(3+1*sqrt(3))/6"], roots

    ms = pc.sbibd_two_level(pc.Design.registry(45))
    assert sorted(str(m.omega) for m in ms) == ["225/16", "81/4"]
    for m in ms:
        cert = m.verify()
        assert cert.passed and cert.gram_exact_zero and cert.radius_within_order, cert

    cm13 = pc.sbibd_two_level(pc.Design.singer(2, 3))
    assert any(abs(float(m.omega) - 9.60) < 0.005 for m in cm13)

    d21 = pc.sbibd_two_level(pc.Design.singer(2, 4))
    assert sorted(m.params["b"] for m in d21) == ["-1/2", "-1/6"]

    assert pc.Design.registry(37).complement().params == (37, 28, 21)
    assert pc.sbibd_two_level(pc.Design.registry(37).complement()) == []

    assert str(pc.regular_hadamard_border(3).omega) == "1"
    try:
        pc.regular_hadamard_border(5)
    except pc.MissingFixtureError:
        pass
    else:
        raise AssertionError("the m = 5 fixture is not shipped")

    a, b = pc.basic_family(5), pc.sbibd_two_level(pc.Design.qr(7))[0]
    k = pc.kronecker(a, b)
    assert str(k.omega) == str(a.omega * b.omega) and k.verify().passed

    b9 = pc.det_bounds(9)
    assert b9["hadamard"] == 19683 and abs(b9["barba"] - 16888.24) < 0.01

    f = pc.construct(45, "sbibd")
    back = pc.MatrixFile.parse(f.to_text())
    assert back.to_text() == f.to_text() and back.verify()
    assert f.render("svg").startswith("<svg")
    assert pc.construct(10, "conference").mode == "complex"
    assert pc.construct(9, "gh").verify()

    diff = pc.catalog_diff(199)
    assert diff["Conflict"] == []
    assert [o for _, o in diff["Substituted"]] == [81, 171, 195]
    rows = pc.catalog_rows(21)
    assert [r[0] for r in rows] == list(range(3, 22, 2))
    assert json.loads(pc.catalog_json(15))["rows"][0]["order"] == 3

    print("pycretan smoke test passed")


if __name__ == "__main__":
    main()
