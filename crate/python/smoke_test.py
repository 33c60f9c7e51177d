"""Smoke test for the `precover` extension module.

Build and install first, for example:

    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/precover-*.whl
"""

import json

import precover


def main():
    z2 = precover.Module.cyclic(4, 2)
    r = precover.Module.free(4, 1)
    assert precover.hom_order(z2, r) == 2
    assert precover.ext1(z2, z2).elementary_divisors() == [2]
    assert precover.ext1(z2, r).order == 1

    stalk = precover.Complex.stalk(0, z2)
    assert not stalk.is_exact()
    assert precover.ext1_ch(stalk, stalk).order == 2

    pc = precover.epic_precover(stalk, "free")
    assert pc.level == "PROVEN", pc.certificate
    assert pc.map.is_epic()
    assert pc.map.source.support() == (-1, 0)
    assert pc.complex.term(0).order == 2

    pe = precover.monic_preenvelope(stalk, "free")
    assert pe.map.is_monic()
    assert pe.map.target.support() == (0, 1)

    disk = precover.Complex.disk(0, z2)
    assert precover.decompose(disk, "all")[0][0] == 0
    try:
        precover.decompose(disk, "free")
    except precover.PrecoverError as e:
        assert "cycle" in str(e)
    else:
        raise AssertionError("free decomposition of D^0(Z/2) should fail")

    again = precover.ChainMap.from_json(pc.map.to_json())
    cert = precover.certify_map(again, "precover", "free")
    assert cert["level"] == "PROVEN"

    bad = precover.ChainMap.from_json(json.dumps({
        "source": json.loads(disk.to_json()),
        "target": json.loads(precover.Complex.disk(0, r).to_json()),
        "components": {"-1": [[2]], "0": [[2]]},
    }))
    assert precover.certify_map(bad, "special-precover", "free")["level"] == "FAILED"

    levels = precover.examples()
    assert levels and all(v != "FAILED" for v in levels.values()), levels
    print("smoke test passed:", len(levels), "fixtures,", pc.level)


if __name__ == "__main__":
    main()
