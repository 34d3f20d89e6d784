"""Smoke test for the orthinv Python extension.

Build and install first:

    pip install --no-build-isolation ./crates/python
"""

import orthinv


def main() -> None:
    assert orthinv.group_order("o2minus", 7) == 16
    assert orthinv.group_order("plus", 3) == 4
    assert len(orthinv.group_elements("so2plus", 5)) == 4

    assert orthinv.reynolds("o2plus", 5, "x1*y1") == "3*x1*y1 + 3*x2*y2"
    f5 = orthinv.transfer("o2minus", 3, "x1^3*y1")
    assert orthinv.is_invariant("o2minus", 3, f5)
    assert orthinv.hilbert_dims("product", 3, 8) == [1, 0, 2, 0, 5, 0, 8, 0, 14]
    assert len(orthinv.fixed_space("o2minus", 3, 2)) == 3

    report = orthinv.verify("lemma31", 7)
    assert report["overall"] == "PASS"
    assert report["extras"]["s_invariant"] == 128

    for bad in (lambda: orthinv.group_order("plus", 4), lambda: orthinv.reynolds("o2plus", 5, "x1*^y1")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print(f"orthinv {orthinv.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
