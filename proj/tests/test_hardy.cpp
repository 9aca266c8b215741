#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mafd/errors.hpp"
#include "mafd/hardy.hpp"
#include "mafd/matcore.hpp"
#include "mafd/rng.hpp"

using namespace mafd;

namespace {

AnalyticMatrixFn random_poly(Rng& rng, int p, int q, int n, int degree) {
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(p, q, n);
    for (int m = 0; m <= degree && m < n; ++m) f.coeffs[m] = rng.matrix(p, q, 0.7);
    return f;
}

// Boundary-integral oracle for [F, G]: trapezoid rule on the unit circle
// with 4N points, evaluated by plain per-point Horner sums.
CMatrix inner_quadrature_oracle(const AnalyticMatrixFn& f, const AnalyticMatrixFn& g) {
    const int m = 4 * f.N;
    CMatrix acc(f.q, f.q);
    for (int s = 0; s < m; ++s) {
        const cdouble z = std::polar(1.0, 2.0 * M_PI * s / m);
        CMatrix fv(f.p, f.q), gv(f.p, f.q);
        for (int i = 0; i < f.p; ++i)
            for (int j = 0; j < f.q; ++j) {
                cdouble af = f.coeffs[f.N - 1](i, j);
                cdouble ag = g.coeffs[f.N - 1](i, j);
                for (int n = f.N - 2; n >= 0; --n) {
                    af = f.coeffs[n](i, j) + z * af;
                    ag = g.coeffs[n](i, j) + z * ag;
                }
                fv(i, j) = af;
                gv(i, j) = ag;
            }
        acc += gv.adjoint() * fv;
    }
    acc *= cdouble(1.0 / m, 0.0);
    return acc;
}

} // namespace

TEST_CASE("inner on elementary coefficient placements") {
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(2, 2, 8);
    f.coeffs[1](0, 0) = 1.0; // z * E11
    const GramMatrix ff = inner(f, f);
    CHECK(std::abs(ff(0, 0) - cdouble(1.0)) < 1e-15);
    CHECK(std::abs(ff(1, 1)) < 1e-15);

    AnalyticMatrixFn g = AnalyticMatrixFn::zero(2, 2, 8);
    g.coeffs[2](0, 0) = 1.0; // z^2 * E11, disjoint frequency
    CHECK(inner(f, g).frobenius_norm() < 1e-15);

    AnalyticMatrixFn bad = AnalyticMatrixFn::zero(2, 3, 8);
    CHECK_THROWS_AS(inner(f, bad), ShapeMismatch);
}

TEST_CASE("inner matches the boundary quadrature oracle and is conjugate symmetric") {
    Rng rng(11);
    const int n = 64;
    const AnalyticMatrixFn f = random_poly(rng, 3, 2, n, 40);
    const AnalyticMatrixFn g = random_poly(rng, 3, 2, n, 40);

    const GramMatrix direct = inner(f, g);
    const CMatrix oracle = inner_quadrature_oracle(f, g);
    CHECK((direct - oracle).frobenius_norm() < 1e-8 * std::max(1.0, oracle.frobenius_norm()));

    const GramMatrix swapped = inner(g, f);
    CHECK((direct - swapped.adjoint()).frobenius_norm() < 1e-13);

    // [F,F] is Hermitian PSD
    const std::vector<double> ev = herm_eigvalues(inner(f, f));
    CHECK(ev.back() > -1e-12);
}

TEST_CASE("energy") {
    AnalyticMatrixFn z = AnalyticMatrixFn::zero(2, 2, 8);
    CHECK(energy(z) == 0.0);

    z.coeffs[1](0, 0) = 1.0;
    CHECK(energy(z) == doctest::Approx(1.0));

    AnalyticMatrixFn f = AnalyticMatrixFn::zero(2, 2, 8);
    f.coeffs[0] = CMatrix::identity(2);
    f.coeffs[1] = CMatrix::identity(2);
    CHECK(energy(f) == doctest::Approx(4.0));
    CHECK(energy(f) == doctest::Approx(inner(f, f).trace().real()));
}

TEST_CASE("eval basics and the Szego closed form") {
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(2, 1, 8);
    f.coeffs[0](0, 0) = 2.0;
    f.coeffs[0](1, 0) = cdouble(0.0, 1.0);
    CHECK((eval(f, cdouble(0.37, 0.2)) - f.coeffs[0]).frobenius_norm() < 1e-15);

    f.coeffs[1](0, 0) = 5.0;
    CHECK((eval(f, cdouble(0.0, 0.0)) - f.coeffs[0]).frobenius_norm() < 1e-15);

    const cdouble a(0.3, 0.0);
    const AnalyticMatrixFn e = szego_fn(a, 256);
    CHECK(std::abs(eval(e, a)(0, 0) - cdouble(1.0 / std::sqrt(1.0 - 0.09))) < 1e-10);

    CHECK_THROWS_AS(eval(f, cdouble(0.99, 0.0)), PointOutsideSearchDisk);
}

TEST_CASE("szego_fn energy and reproducing property") {
    const AnalyticMatrixFn e0 = szego_fn(cdouble(0.0, 0.0), 16);
    CHECK(std::abs(e0.coeffs[0](0, 0) - cdouble(1.0)) < 1e-15);
    for (int m = 1; m < 16; ++m) CHECK(std::abs(e0.coeffs[m](0, 0)) < 1e-15);

    const AnalyticMatrixFn eh = szego_fn(cdouble(0.5, 0.0), 64);
    CHECK(energy(eh) == doctest::Approx(1.0 - std::pow(0.25, 64)).epsilon(1e-12));

    Rng rng(3);
    const AnalyticMatrixFn f = random_poly(rng, 1, 1, 64, 40);
    for (int rep = 0; rep < 10; ++rep) {
        const cdouble w = rng.disk_point(0.9);
        const AnalyticMatrixFn ew = szego_fn(w, 64, 1.0);
        const cdouble lhs = inner(f, ew)(0, 0);
        const cdouble rhs = std::sqrt(1.0 - std::norm(w)) * eval(f, w, 1.0)(0, 0);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("axpy and linearity of the inner product") {
    Rng rng(17);
    const int n = 32;
    const AnalyticMatrixFn f = random_poly(rng, 2, 2, n, 20);
    const AnalyticMatrixFn g = random_poly(rng, 2, 2, n, 20);
    const AnalyticMatrixFn h = random_poly(rng, 2, 2, n, 20);

    const AnalyticMatrixFn zero = AnalyticMatrixFn::zero(2, 2, n);
    CHECK(energy(sub(axpy(cdouble(0.0), f, g), g)) == 0.0);
    CHECK(energy(sub(axpy(cdouble(1.0), f, zero), f)) == 0.0);

    const cdouble alpha(0.7, -1.3);
    const CMatrix lhs = inner(axpy(alpha, f, g), h);
    const CMatrix rhs = alpha * inner(f, h) + inner(g, h);
    CHECK((lhs - rhs).frobenius_norm() < 1e-12 * std::max(1.0, rhs.frobenius_norm()));
}

TEST_CASE("orthogonal functions have additive energy") {
    Rng rng(23);
    AnalyticMatrixFn lo = AnalyticMatrixFn::zero(2, 2, 64);
    AnalyticMatrixFn hi = AnalyticMatrixFn::zero(2, 2, 64);
    for (int m = 0; m < 6; ++m) lo.coeffs[m] = rng.matrix(2, 2);
    for (int m = 10; m < 20; ++m) hi.coeffs[m] = rng.matrix(2, 2);
    CHECK(inner(lo, hi).frobenius_norm() == 0.0);
    CHECK(std::abs(energy(axpy(cdouble(1.0), lo, hi)) - energy(lo) - energy(hi)) <
          1e-10 * (energy(lo) + energy(hi)));
}

TEST_CASE("pointwise projected energy never beats the total energy") {
    Rng rng(31);
    const AnalyticMatrixFn f = random_poly(rng, 3, 2, 128, 64);
    const double e = energy(f);
    for (int jr = 0; jr < 8; ++jr) {
        const double r = kDefaultRMax * (jr + 1) / 8.0;
        for (int ja = 0; ja < 16; ++ja) {
            const cdouble w = std::polar(r, 2.0 * M_PI * ja / 16);
            const CMatrix fw = eval(f, w);
            const double cap = e + eval_tail_bound(f, std::abs(w));
            for (int draw = 0; draw < 5; ++draw) {
                const int k = rng.uniform_int(1, 3);
                const CMatrix xi = rng.orthonormal_columns(3, k);
                const CMatrix pf = xi.adjoint() * fw;
                double v = 0.0;
                for (size_t i = 0; i < pf.size(); ++i) v += std::norm(pf.data()[i]);
                CHECK((1.0 - std::norm(w)) * v <= cap + 1e-10 * (1.0 + e));
            }
        }
    }
}

TEST_CASE("boundary and circle samples agree with Horner evaluation") {
    Rng rng(41);
    const AnalyticMatrixFn f = random_poly(rng, 2, 2, 64, 50);

    const std::vector<CMatrix> bs = boundary_samples(f, 128);
    for (int s = 0; s < 128; s += 17) {
        const cdouble z = std::polar(1.0, 2.0 * M_PI * s / 128);
        CMatrix direct(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                cdouble acc = f.coeffs[63](i, j);
                for (int n = 62; n >= 0; --n) acc = f.coeffs[n](i, j) + z * acc;
                direct(i, j) = acc;
            }
        CHECK((bs[s] - direct).frobenius_norm() < 1e-11 * std::max(1.0, direct.frobenius_norm()));
    }

    const double r = 0.83;
    const std::vector<CMatrix> cs = circle_samples(f, r, 32);
    for (int a = 0; a < 32; a += 5) {
        const cdouble w = std::polar(r, 2.0 * M_PI * a / 32);
        CHECK((cs[a] - eval(f, w)).frobenius_norm() < 1e-11);
    }
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(AnalyticMatrixFn::zero(2, 2, 100), InvalidParams); // not a power of two
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(2, 2, 8);
    f.coeffs[3](1, 1) = cdouble(NAN, 0.0);
    CHECK_THROWS_AS(f.validate(), InvalidParams);
}
