#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mafd/blaschke.hpp"
#include "mafd/errors.hpp"
#include "mafd/rng.hpp"

using namespace mafd;

namespace {

Projection random_projection(Rng& rng, int p, int k) {
    return Projection::from_columns(rng.orthonormal_columns(p, k));
}

AnalyticMatrixFn random_poly(Rng& rng, int p, int q, int n, int degree) {
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(p, q, n);
    for (int m = 0; m <= degree && m < n; ++m) f.coeffs[m] = rng.matrix(p, q, 0.7);
    return f;
}

} // namespace

TEST_CASE("mobius factor") {
    for (const cdouble z : {cdouble(0.2, 0.1), cdouble(-0.5, 0.3)})
        CHECK(std::abs(mobius(cdouble(0.0, 0.0), z) - z) < 1e-15);

    const cdouble w(0.3, 0.4);
    CHECK(std::abs(mobius(w, w)) < 1e-15);
    CHECK(std::abs(std::abs(mobius(cdouble(0.5, 0.0), cdouble(0.0, 1.0))) - 1.0) < 1e-15);

    CHECK_THROWS_AS(mobius(cdouble(0.5, 0.0), cdouble(2.0, 0.0)), PoleHit);
}

TEST_CASE("factor evaluation") {
    Rng rng(1);
    const int p = 3;

    const BlaschkeFactor full{cdouble(0.0, 0.0), Projection::full(p)};
    const cdouble z(0.3, -0.2);
    CHECK((factor_eval(full, z) - z * CMatrix::identity(p)).frobenius_norm() < 1e-15);

    const BlaschkeFactor b{cdouble(0.4, 0.1), random_projection(rng, p, 2)};
    const CMatrix at_w = factor_eval(b, b.w);
    CHECK((at_w - (CMatrix::identity(p) - b.P.matrix)).frobenius_norm() < 1e-13);

    for (int g = 0; g < 16; ++g) {
        const cdouble bz = std::polar(1.0, 2.0 * M_PI * (g + 0.37) / 16);
        const CMatrix m = factor_eval(b, bz);
        CHECK((m.adjoint() * m - CMatrix::identity(p)).frobenius_norm() < 1e-13);
    }
}

TEST_CASE("factor inverse") {
    Rng rng(2);
    const int p = 2;
    const BlaschkeFactor full{cdouble(0.0, 0.0), Projection::full(p)};
    CHECK((factor_inverse_eval(full, cdouble(0.5, 0.0)) - 2.0 * CMatrix::identity(p))
              .frobenius_norm() < 1e-14);

    const BlaschkeFactor b{cdouble(0.3, -0.2), random_projection(rng, p, 1)};
    const cdouble z(0.0, 0.7);
    CHECK((factor_eval(b, z) * factor_inverse_eval(b, z) - CMatrix::identity(p))
              .frobenius_norm() < 1e-12);

    const BlaschkeFactor none{cdouble(0.3, 0.0), Projection::zero(p)};
    CHECK((factor_inverse_eval(none, cdouble(0.1, 0.1)) - CMatrix::identity(p))
              .frobenius_norm() == 0.0);

    CHECK_THROWS_AS(factor_inverse_eval(b, b.w), ZeroHit);
}

TEST_CASE("normalized factor") {
    Rng rng(3);
    const int p = 3;
    const BlaschkeFactor half{cdouble(0.5, 0.0), Projection::full(p)};
    CHECK((normalized_factor_eval(half, cdouble(0.0, 0.0)) - 0.5 * CMatrix::identity(p))
              .frobenius_norm() < 1e-14);

    const BlaschkeFactor b{cdouble(-0.2, 0.6), random_projection(rng, p, 2)};
    const CMatrix u = normalizing_unitary(b);
    CHECK((u.adjoint() * u - CMatrix::identity(p)).frobenius_norm() < 1e-13);

    for (int rep = 0; rep < 5; ++rep) {
        const cdouble z = rng.disk_point(0.9);
        CHECK((normalized_factor_eval(b, z) - factor_eval(b, z) * u).frobenius_norm() < 1e-13);

        // same reproducing kernel as the plain factor
        const cdouble w2 = rng.disk_point(0.9);
        const CMatrix nz = normalized_factor_eval(b, z);
        const CMatrix nw = normalized_factor_eval(b, w2);
        CMatrix k = CMatrix::identity(p) - nz * nw.adjoint();
        k *= 1.0 / (1.0 - z * std::conj(w2));
        CHECK((k - kernel_eval(b, z, w2)).frobenius_norm() < 1e-12);
    }

    const BlaschkeFactor zero{cdouble(0.0, 0.0), Projection::full(p)};
    CHECK_THROWS_AS(normalized_factor_eval(zero, cdouble(0.1, 0.0)), ZeroPointForbidden);
}

TEST_CASE("kernel closed form, difference quotient and reproducing identity") {
    Rng rng(4);
    const int p = 3;
    const BlaschkeFactor b{rng.disk_point(0.8), random_projection(rng, p, 1)};

    const CMatrix k00 = kernel_eval(b, cdouble(0.0, 0.0), cdouble(0.0, 0.0));
    CHECK((k00 - (1.0 - std::norm(b.w)) * b.P.matrix).frobenius_norm() < 1e-14);

    for (int rep = 0; rep < 20; ++rep) {
        const cdouble z = rng.disk_point(0.9);
        const cdouble w = rng.disk_point(0.9);
        CMatrix dq = CMatrix::identity(p) - factor_eval(b, z) * factor_eval(b, w).adjoint();
        dq *= 1.0 / (1.0 - z * std::conj(w));
        CHECK((dq - kernel_eval(b, z, w)).frobenius_norm() < 1e-12);
    }

    // [F, K(., w0) X] = [P F(w0), X] = X* P F(w0), via the coefficient series.
    const int n = 128;
    const AnalyticMatrixFn f = random_poly(rng, p, 2, n, 30);
    const CMatrix x = rng.matrix(p, 2);
    AnalyticMatrixFn kfun = AnalyticMatrixFn::zero(p, 2, n);
    const CMatrix px = b.P.matrix * x;
    cdouble pw = 1.0;
    const double c = 1.0 - std::norm(b.w);
    for (int m = 0; m < n; ++m) {
        kfun.coeffs[m] = (c / (1.0 - b.w * std::conj(b.w)) * pw) * px;
        pw *= std::conj(b.w);
    }
    const CMatrix lhs = inner(f, kfun);
    const CMatrix rhs = x.adjoint() * (b.P.matrix * eval(f, b.w, 1.0));
    CHECK((lhs - rhs).frobenius_norm() < 1e-8 * std::max(1.0, rhs.frobenius_norm()));
}

TEST_CASE("deflate closed forms") {
    Rng rng(5);
    const int p = 3;
    const int q = 2;
    const int n = 64;
    const cdouble w(0.35, -0.2);
    const Projection proj = random_projection(rng, p, 1);
    const BlaschkeFactor b{w, proj};

    // H = b_w (P X) deflates to the constant P X
    const CMatrix x = rng.matrix(p, q);
    const CMatrix px = proj.matrix * x;
    AnalyticMatrixFn h = AnalyticMatrixFn::zero(p, q, n);
    h.coeffs[0] = -w * px;
    cdouble wp = 1.0;
    for (int m = 1; m < n; ++m) {
        h.coeffs[m] = ((1.0 - std::norm(w)) * wp) * px;
        wp *= std::conj(w);
    }
    const AnalyticMatrixFn g = deflate(h, b);
    CHECK((g.coeffs[0] - px).frobenius_norm() < 1e-12);
    double rest = 0.0;
    for (int m = 1; m < n; ++m) rest += g.coeffs[m].frobenius_norm();
    CHECK(rest < 1e-10);

    // scalar h(z) = z with w = 0, P = 1 divides down to the constant 1
    AnalyticMatrixFn zfn = AnalyticMatrixFn::zero(1, 1, 8);
    zfn.coeffs[1](0, 0) = 1.0;
    const BlaschkeFactor scalar{cdouble(0.0, 0.0), Projection::full(1)};
    const AnalyticMatrixFn one = deflate(zfn, scalar);
    CHECK(std::abs(one.coeffs[0](0, 0) - cdouble(1.0)) < 1e-15);
    CHECK(std::abs(one.coeffs[1](0, 0)) < 1e-15);

    // H = (z - w) X with P = I gives G = (1 - z conj(w)) X
    AnalyticMatrixFn lin = AnalyticMatrixFn::zero(p, q, n);
    lin.coeffs[0] = -w * x;
    lin.coeffs[1] = x;
    const AnalyticMatrixFn glin = deflate(lin, BlaschkeFactor{w, Projection::full(p)});
    CHECK((glin.coeffs[0] - x).frobenius_norm() < 1e-13);
    CHECK((glin.coeffs[1] + std::conj(w) * x).frobenius_norm() < 1e-13);
}

TEST_CASE("deflate preserves energy and rejects bad preconditions") {
    Rng rng(6);
    const int p = 3;
    const int n = 256;
    for (int rep = 0; rep < 6; ++rep) {
        const AnalyticMatrixFn f = random_poly(rng, p, 2, n, 40);
        const BlaschkeFactor b{rng.disk_point(0.8),
                               random_projection(rng, p, rng.uniform_int(1, p))};
        // build H with P H(w) = 0 by subtracting the projected atom
        const CMatrix m = b.P.matrix * eval(f, b.w, 1.0);
        AnalyticMatrixFn atom = AnalyticMatrixFn::zero(p, 2, n);
        cdouble pw = 1.0;
        for (int mm = 0; mm < n; ++mm) {
            atom.coeffs[mm] = ((1.0 - std::norm(b.w)) * pw) * m;
            pw *= std::conj(b.w);
        }
        const AnalyticMatrixFn h = sub(f, atom);

        MulDiag diag;
        const AnalyticMatrixFn g = deflate(h, b, &diag);
        CHECK(std::abs(energy(g) - energy(h)) <= 1e-8 * energy(h) + diag.remainder_effect);

        // round trip: B G + atom reconstructs F
        AnalyticMatrixFn back = factor_apply(b, g);
        for (int mm = 0; mm < n; ++mm) back.coeffs[mm] += atom.coeffs[mm];
        CHECK(energy(sub(back, f)) < 1e-16 * energy(f));

        CHECK_THROWS_AS(deflate(f, b), PreconditionViolated);
    }
}

TEST_CASE("chain application") {
    Rng rng(7);
    const int p = 3;
    const int n = 128;
    const AnalyticMatrixFn f = random_poly(rng, p, 2, n, 20);

    CHECK(energy(sub(chain_apply({}, f), f)) == 0.0);

    // single z I factor shifts the coefficients by one
    const BlaschkeChain shift{BlaschkeFactor{cdouble(0.0, 0.0), Projection::full(p)}};
    const AnalyticMatrixFn shifted = chain_apply(shift, f);
    CHECK(shifted.coeffs[0].frobenius_norm() == 0.0);
    for (int m = 1; m < n; ++m)
        CHECK((shifted.coeffs[m] - f.coeffs[m - 1]).frobenius_norm() == 0.0);

    BlaschkeChain chain;
    for (int u = 0; u < 3; ++u)
        chain.push_back(BlaschkeFactor{rng.disk_point(0.7), random_projection(rng, p, 1)});
    MulDiag diag;
    const AnalyticMatrixFn out = chain_apply(chain, f, &diag);
    CHECK(std::abs(energy(out) + diag.discarded_energy - energy(f)) < 1e-9 * energy(f));

    // orientation: first factor applied leftmost
    const cdouble z(0.3, 0.3);
    const CMatrix expect = factor_eval(chain[0], z) * factor_eval(chain[1], z) *
                           factor_eval(chain[2], z) * eval(f, z, 1.0);
    CHECK((eval(out, z, 1.0) - expect).frobenius_norm() <
          1e-9 * std::max(1.0, expect.frobenius_norm()));
}

TEST_CASE("state-space Blaschke products") {
    // C = [1], A = [0] gives B(z) = z
    CMatrix c1(1, 1), a0(1, 1);
    c1(0, 0) = 1.0;
    const StateSpaceBlaschke triv = beurling_lax(c1, a0);
    for (const cdouble z : {cdouble(0.3, 0.1), cdouble(-0.7, 0.2)})
        CHECK(std::abs(triv.eval(z)(0, 0) - z) < 1e-14);

    // scalar pole at 0.5 matches the Moebius factor in modulus on the circle
    CMatrix ah(1, 1);
    ah(0, 0) = 0.5;
    const StateSpaceBlaschke half = beurling_lax(c1, ah);
    for (int g = 0; g < 64; ++g) {
        const cdouble z = std::polar(1.0, 2.0 * M_PI * g / 64);
        CHECK(std::abs(std::abs(half.eval(z)(0, 0)) -
                       std::abs(mobius(cdouble(0.5, 0.0), z))) < 1e-12);
    }

    Rng rng(8);
    for (int rep = 0; rep < 8; ++rep) {
        const int nstate = rng.uniform_int(1, 6);
        CMatrix a = rng.matrix(nstate, nstate);
        const double rho = spectral_radius_estimate(a);
        if (rho > 0.0) a *= cdouble(rng.uniform(0.3, 0.85) / rho, 0.0);
        const CMatrix c = rng.matrix(3, nstate);
        const StateSpaceBlaschke ss = beurling_lax(c, a);

        for (int g = 0; g < 16; ++g) {
            const cdouble z = std::polar(1.0, 2.0 * M_PI * g / 16);
            const CMatrix bz = ss.eval(z);
            CHECK((bz.adjoint() * bz - CMatrix::identity(3)).frobenius_norm() < 1e-10);
        }
        for (int pair = 0; pair < 10; ++pair) {
            const cdouble z = rng.disk_point(0.9);
            const cdouble w = rng.disk_point(0.9);
            CMatrix rhs = CMatrix::identity(3) - ss.eval(z) * ss.eval(w).adjoint();
            rhs *= 1.0 / (1.0 - z * std::conj(w));
            CHECK((ss.kernel(z, w) - rhs).frobenius_norm() <
                  1e-10 * std::max(1.0, rhs.frobenius_norm()));
        }
    }

    // unobservable pair is rejected
    CMatrix a2(2, 2), c2(1, 2);
    a2(0, 0) = 0.5;
    a2(1, 1) = 0.5;
    c2(0, 0) = 1.0;
    CHECK_THROWS_AS(beurling_lax(c2, a2), UnobservablePair);
}
