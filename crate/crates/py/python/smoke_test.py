"""Smoke test for the covsym extension module.

Build and run from the workspace root:

    cargo build --release -p covsym-py --features extension-module
    cp target/release/libcovsym_py.so crates/py/python/covsym.so
    python3 crates/py/python/smoke_test.py
"""

import cmath
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import covsym  # noqa: E402


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    ctx = covsym.CalculusConstants(3, 1.3, 8)
    assert ctx.degrees() == [0, 2, 4, 6, 8]
    d, c = ctx.d(), ctx.c()
    assert close(abs(d) ** 2 * c, 1.0, 1e-9)
    for l in ctx.degrees():
        assert close(abs(d * ctx.e_ell(l)), 1.0, 1e-9)

    assert close(covsym.eta_ell(3, 2, -5), 2 / 15, 1e-14)
    assert covsym.harmonic_dim(3, 4) == 9
    assert covsym.harmonic_dim(4, 2) == 9
    assert close(covsym.d_sigma(3, 1.3), d, 1e-15)
    mu = complex(-1.5, 1.3)
    assert close(covsym.e_mu(3, mu) * covsym.e_mu(3, -mu - 3), covsym.c_mu(3, mu), 1e-12)

    phi2 = covsym.k_invariant_idempotent(ctx, 2)
    phi4 = covsym.k_invariant_idempotent(ctx, 4)
    assert covsym.star_product(ctx, phi2, phi2).distance(phi2) <= 1e-11
    assert covsym.star_product(ctx, phi2, phi4).norm() <= 1e-11
    assert covsym.involution(ctx, phi2).distance(phi2) <= 1e-11
    assert close(phi2.norm() ** 2, 5.0, 1e-10)

    f = [complex(1, 1) / 2, 0.5, complex(0, -0.5), 0, 0]
    norm = math.sqrt(sum(abs(z) ** 2 for z in f))
    f = [z / norm for z in f]
    e = covsym.idempotent_rank_one(ctx, 2, f)
    assert covsym.star_product(ctx, e, e).distance(e) <= 1e-11
    assert close(covsym.hs_norm(ctx, e), e.norm(), 1e-12)

    g = covsym.Symbol(3, 1.3).with_block(2, 0, [[1], [0], [cmath.exp(0.3j)], [0], [2]])
    ident = covsym.truncated_identity(ctx, [0, 2])
    assert covsym.star_product(ctx, ident, g).distance(g) <= 1e-12
    back = covsym.Symbol.from_json(g.to_json())
    assert back.distance(g) == 0.0
    assert back.keys() == [(2, 0)]

    theta = covsym.theta_symbol(3, 1.3, 2)
    assert covsym.k_project(theta) == {2: 1.0}
    assert close(covsym.inner_product(theta, theta), 5.0, 0.0)

    try:
        covsym.CalculusConstants(3, 0.0, 8)
    except ValueError as err:
        assert "sigma" in str(err)
    else:
        raise AssertionError("sigma = 0 accepted")
    try:
        covsym.star_product(ctx, g, covsym.Symbol(3, 0.7))
    except ValueError:
        pass
    else:
        raise AssertionError("context mismatch accepted")

    rows = covsym.run_suite(l_max=4, seed=3)
    failed = [r for r in rows if not r[4]]
    assert not failed, failed
    assert {r[0] for r in rows} == set(range(1, 11))

    print(f"covsym smoke test: ok ({len(rows)} suite checks passed)")


if __name__ == "__main__":
    main()
