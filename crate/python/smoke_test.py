"""Smoke test for the frobkit_py extension.

Build and install first:

    pip install --no-build-isolation -e crates/py
"""

import sys

import frobkit_py as fk


def main():
    g = fk.Group.metacyclic(17, 8, 2)
    assert g.order == 136 and len(g) == 136
    assert g.exponent == 136
    assert g.mul(1, g.inv(1)) == 0

    structures = fk.frobenius_structures(g)
    assert [len(s["kernel"]) for s in structures] == [17]
    assert structures[0]["checks"]["kernel_nilpotent"]

    v = fk.certify(g, "Q")
    assert v["outcome"] == "NotRetractRational"
    assert [s["rule"] for s in v["trace"]] == ["N-AB", "N-DESC"]
    assert "N-DESC" in fk.certify(g, "Q", text=True)

    c8 = fk.Group.cyclic(8)
    assert fk.certify(c8, "Qzeta:8")["outcome"] == "RetractRational"

    assert fk.schur_multiplier(fk.Group.abelian([2, 2])) == [2]
    assert fk.schur_multiplier(fk.Group.quaternion(8)) == []
    b = fk.b0(fk.Group.dihedral(4), method="full")
    assert b["invariants"]["factors"] == []

    assert fk.z_group(fk.Group.metacyclic(7, 3, 2))
    assert not fk.gz_group(fk.Group.abelian([2, 2]))
    assert fk.complement_criterion(fk.Group.sl2(5))["is_frobenius_complement"]

    s3 = fk.Group(3, [[1, 0, 2], [1, 2, 0]])
    assert s3.order == 6
    assert fk.Group.from_json(s3.to_json("S3")).order == 6

    assert fk.smith_diagonal([[2, 0], [0, 3]]) == [1, 6]
    gens, orders = fk.kernel_mod_n([[2, 0]], 4)
    assert sorted(orders) == [2, 4]

    try:
        fk.certify(c8, "Fq:7")
    except ValueError:
        pass
    else:
        raise AssertionError("finite fields must be rejected")

    reports = fk.verify_paper(11)
    assert all(c["passed"] for r in reports for c in r["checks"])
    print("frobkit_py smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
