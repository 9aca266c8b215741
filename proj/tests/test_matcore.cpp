#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mafd/errors.hpp"
#include "mafd/matcore.hpp"
#include "mafd/rng.hpp"

using namespace mafd;

namespace {

CMatrix real2(double a, double b, double c, double d) {
    CMatrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

} // namespace

TEST_CASE("herm_eig on diagonal and symmetric 2x2 inputs") {
    const EigResult d = herm_eig(real2(3, 0, 0, 1));
    CHECK(d.values[0] == doctest::Approx(3.0));
    CHECK(d.values[1] == doctest::Approx(1.0));
    CHECK((d.vectors - CMatrix::identity(2)).frobenius_norm() == doctest::Approx(0.0));

    const EigResult s = herm_eig(real2(2, 1, 1, 2));
    CHECK(s.values[0] == doctest::Approx(3.0));
    CHECK(s.values[1] == doctest::Approx(1.0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // top eigenvector is (1,1)/sqrt(2) up to phase
    const cdouble ratio = s.vectors(0, 0) / s.vectors(1, 0);
    CHECK(std::abs(ratio - cdouble(1.0)) < 1e-12);
    CHECK(std::abs(std::abs(s.vectors(0, 0)) - inv_sqrt2) < 1e-12);
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
    Rng rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + rep % 8;
        const CMatrix q = hermitian_part(rng.matrix(n, n, 2.0));
        const EigResult e = herm_eig(q);
        for (int i = 1; i < n; ++i) CHECK(e.values[i - 1] >= e.values[i]);

        CMatrix vv = e.vectors.adjoint() * e.vectors;
        vv -= CMatrix::identity(n);
        CHECK(vv.frobenius_norm() < 1e-12);

        CMatrix rec(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cdouble acc = 0.0;
                for (int k = 0; k < n; ++k)
                    acc += e.vectors(i, k) * e.values[k] * std::conj(e.vectors(j, k));
                rec(i, j) = acc;
            }
        CHECK((rec - q).frobenius_norm() < 1e-10 * std::max(1.0, q.frobenius_norm()));

        // eigenvalue-only variant agrees exactly
        const std::vector<double> vals = herm_eigvalues(q);
        for (int i = 0; i < n; ++i) CHECK(vals[i] == e.values[i]);
    }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    CMatrix m = real2(1, 2, 0, 1);
    CHECK_THROWS_AS(herm_eig(m), NonHermitianInput);
}

TEST_CASE("top_k_projection picks spectral projections with deterministic ties") {
    const Projection p1 = top_k_projection(real2(3, 0, 0, 1), 1);
    CHECK(p1.rank == 1);
    CHECK(std::abs(p1.matrix(0, 0) - cdouble(1.0)) < 1e-14);
    CHECK(std::abs(p1.matrix(1, 1)) < 1e-14);

    // exact tie: lowest index wins
    const Projection tie = top_k_projection(CMatrix::identity(2), 1);
    CHECK(std::abs(tie.matrix(0, 0) - cdouble(1.0)) < 1e-14);
    CHECK(std::abs(tie.matrix(1, 1)) < 1e-14);

    const Projection sym = top_k_projection(real2(2, 1, 1, 2), 1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(sym.matrix(i, j) - cdouble(0.5)) < 1e-12);

    CHECK_THROWS_AS(top_k_projection(CMatrix::identity(2), 0), RankOutOfRange);
    CHECK_THROWS_AS(top_k_projection(CMatrix::identity(2), 3), RankOutOfRange);
}

TEST_CASE("top_k_projection maximizes the projected trace over random projections") {
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const int p = rng.uniform_int(2, 6);
        const int k = rng.uniform_int(1, p);
        const CMatrix q = hermitian_part(rng.matrix(p, p, 1.5));
        const Projection best = top_k_projection(q, k);
        best.validate();
        const double best_trace = (best.matrix * q).trace().real();

        double lambda_sum = 0.0;
        const EigResult e = herm_eig(q);
        for (int i = 0; i < k; ++i) lambda_sum += e.values[i];
        CHECK(best_trace == doctest::Approx(lambda_sum).epsilon(1e-12));

        for (int draw = 0; draw < 100; ++draw) {
            const Projection r = Projection::from_columns(rng.orthonormal_columns(p, k));
            CHECK((r.matrix * q).trace().real() <= best_trace + 1e-10);
        }
    }
}

TEST_CASE("solve_stein closed forms") {
    CMatrix a(1, 1), c(1, 1);
    a(0, 0) = 0.0;
    c(0, 0) = 1.0;
    CHECK(std::abs(solve_stein(a, c).gramian(0, 0) - cdouble(1.0)) < 1e-14);

    a(0, 0) = 0.5;
    const SteinResult half = solve_stein(a, c);
    // geometric series oracle: sum 0.25^u = 4/3
    const CMatrix series = stein_series_oracle(a, c);
    CHECK(std::abs(series(0, 0) - cdouble(4.0 / 3.0)) < 1e-13);
    CHECK(std::abs(half.gramian(0, 0) - series(0, 0)) < 1e-13);
    CHECK(!half.singular);

    const SteinResult id = solve_stein(CMatrix(2, 2), CMatrix::identity(2));
    CHECK((id.gramian - CMatrix::identity(2)).frobenius_norm() < 1e-13);
}

TEST_CASE("solve_stein residual on random stable systems") {
    Rng rng(99);
    for (int rep = 0; rep < 12; ++rep) {
        const int n = rng.uniform_int(1, 8);
        CMatrix a = rng.matrix(n, n);
        const double rho = spectral_radius_estimate(a);
        if (rho > 0.0) a *= cdouble(rng.uniform(0.2, 0.9) / rho, 0.0);
        const CMatrix c = rng.matrix(rng.uniform_int(1, 4), n);
        const SteinResult st = solve_stein(a, c);
        CHECK(hermitian_defect(st.gramian) < 1e-12 * std::max(1.0, st.gramian.frobenius_norm()));
        const CMatrix res = st.gramian - a.adjoint() * st.gramian * a - c.adjoint() * c;
        CHECK(res.frobenius_norm() <= 1e-10 * (c.adjoint() * c).frobenius_norm());

        const CMatrix series = stein_series_oracle(a, c);
        CHECK((st.gramian - series).frobenius_norm() <
              1e-8 * std::max(1.0, series.frobenius_norm()));
    }
}

TEST_CASE("solve_stein rejects unstable matrices and flags singular gramians") {
    CMatrix a(1, 1), c(1, 1);
    a(0, 0) = 1.0;
    c(0, 0) = 1.0;
    CHECK_THROWS_AS(solve_stein(a, c), SpectralRadiusTooLarge);

    // unobservable pair: C sees only the first state
    CMatrix a2(2, 2), c2(1, 2);
    a2(0, 0) = 0.5;
    a2(1, 1) = 0.5;
    c2(0, 0) = 1.0;
    const SteinResult st = solve_stein(a2, c2);
    CHECK(st.singular);
}

TEST_CASE("spectral radius estimate tracks known spectra") {
    Rng rng(5);
    CMatrix d(3, 3);
    d(0, 0) = 0.7;
    d(1, 1) = cdouble(0.1, 0.4);
    d(2, 2) = -0.2;
    CHECK(spectral_radius_estimate(d) == doctest::Approx(0.7).epsilon(1e-6));

    // rotation-like complex pair
    CMatrix r(2, 2);
    r(0, 0) = 0.0;
    r(0, 1) = 0.6;
    r(1, 0) = -0.6;
    r(1, 1) = 0.0;
    CHECK(spectral_radius_estimate(r) == doctest::Approx(0.6).epsilon(1e-6));

    CHECK(spectral_radius_estimate(CMatrix(4, 4)) == doctest::Approx(0.0));
}
