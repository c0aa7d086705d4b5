"""Smoke test for the `monotone` extension module."""

from fractions import Fraction
import math

import monotone

IDENTITY = 'kind = "linear"\nn = 1\nbasis = [["1", "1"]]\n'
ROTATION = 'kind = "linear"\nn = 2\nbasis = [[1, 0, 0, 1], [0, 1, -1, 0]]\n'
VERTICAL = 'kind = "affine"\nn = 1\nbasis = [["0", "1"]]\ntranslation = [["2"], ["0"]]\n'


def main() -> None:
    ident = monotone.Operator.from_document(IDENTITY)
    assert ident.kind == "linear" and ident.n == 1
    assert ident.is_monotone() and ident.is_maximal_monotone()
    assert not ident.is_skew()
    assert ident.fitz("1,3") == Fraction(4)
    assert ident.fitz([Fraction(1, 3), 0]) == Fraction(1, 36)
    assert abs(ident.fitz([1, 3], mode="float") - 4.0) < 1e-12
    assert ident.in_enlargement("0,1", "1/4")
    assert not ident.in_enlargement([0, 1], 0.2)

    verdict = ident.decide()
    assert verdict["verdict"] == "enlargeable", verdict
    assert verdict["witness"] == "1,-1" and verdict["eps"] == 1

    rot = monotone.Operator.from_document(ROTATION)
    assert rot.is_skew() and rot.is_self_cancelling()
    assert rot.decide()["verdict"] == "non-enlargeable"
    assert rot.decide(mode="float")["verdict"] == "non-enlargeable"
    assert rot.vdash().contains([1, 0, 0, 1])

    vert = monotone.Operator.from_document(VERTICAL)
    assert vert.fitz("1,0") == math.inf
    assert monotone.Operator.from_document(vert.to_document()).contains("2,7")

    try:
        ident.fitz("1,2,3")
    except ValueError:
        pass
    else:
        raise AssertionError("dimension mismatch should raise ValueError")

    print("monotone smoke test: ok")


if __name__ == "__main__":
    main()
