"""Smoke test for the idemsum extension module."""

import json

import idemsum


def main():
    f5 = idemsum.Field(5)
    a = idemsum.Matrix(f5, [[2, 1, 0], [0, 3, 4], [1, 0, 0]])
    cert = idemsum.decompose(a, mode="sum5", seed=1)
    assert cert.verify(a)
    assert len(cert) <= idemsum.bounds(3, f5)[1]
    assert all(q.is_idempotent() for q in cert.parts)

    again = idemsum.Cert.from_json(cert.to_json())
    assert again.verify(a)
    assert json.loads(cert.to_json())["pipeline"] == cert.pipeline

    f3 = idemsum.Field(3)
    eye = idemsum.Matrix.identity(f3, 2)
    assert len(idemsum.decompose(eye)) == 1
    assert idemsum.min_count(eye) == 1
    assert idemsum.is_sum(eye) and idemsum.is_diff2(eye)

    f4 = idemsum.Field(2, 2)
    try:
        idemsum.decompose(idemsum.Matrix(f4, [[2]]))
    except idemsum.IdemsumError as e:
        assert "TraceNotInPrimeField" in str(e), e
    else:
        raise AssertionError("trace outside the prime field accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
