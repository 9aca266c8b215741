#include "mafd/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mafd/errors.hpp"

namespace mafd {

namespace {

double offdiag_norm(const CMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace

namespace {

// Cyclic complex Jacobi; diagonalizes a in place and accumulates the
// rotations into *v when given. Fixed sweep order keeps runs reproducible.
void jacobi_core(CMatrix& a, CMatrix* v) {
    const int n = a.rows();
    const double stop = 1e-15 * std::max(a.frobenius_norm(), 1e-300);
    for (int sweep = 0; sweep < 64 && offdiag_norm(a) > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const cdouble m = a(p, r);
                const double mu = std::abs(m);
                if (mu < 1e-300) continue;
                const cdouble phase = m / mu;
                const double app = a(p, p).real();
                const double arr = a(r, r).real();
                const double tau = (arr - app) / (2.0 * mu);
                const double sgn = tau >= 0.0 ? 1.0 : -1.0;
                const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cdouble s = phase * (t * c);
                // A <- U* A U with the (p,r) plane rotation U=[[c, s],[-conj(s), c]]
                for (int j = 0; j < n; ++j) {
                    const cdouble x = a(j, p);
                    const cdouble y = a(j, r);
                    a(j, p) = c * x - std::conj(s) * y;
                    a(j, r) = s * x + c * y;
                }
                for (int j = 0; j < n; ++j) {
                    const cdouble x = a(p, j);
                    const cdouble y = a(r, j);
                    a(p, j) = c * x - s * y;
                    a(r, j) = std::conj(s) * x + c * y;
                }
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(r, r) = a(r, r).real();
                if (v) {
                    for (int j = 0; j < n; ++j) {
                        const cdouble x = (*v)(j, p);
                        const cdouble y = (*v)(j, r);
                        (*v)(j, p) = c * x - std::conj(s) * y;
                        (*v)(j, r) = s * x + c * y;
                    }
                }
            }
        }
    }
}

void check_hermitian(const CMatrix& q) {
    if (q.rows() != q.cols()) throw ShapeMismatch("herm_eig: matrix not square");
    if (hermitian_defect(q) > 1e-10 * std::max(1.0, q.frobenius_norm()))
        throw NonHermitianInput("herm_eig: input is not Hermitian within tolerance");
}

} // namespace

EigResult herm_eig(const CMatrix& q) {
    check_hermitian(q);
    const int n = q.rows();
    CMatrix a = hermitian_part(q);
    CMatrix v = CMatrix::identity(n);
    jacobi_core(a, &v);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

    EigResult out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

std::vector<double> herm_eigvalues(const CMatrix& q) {
    check_hermitian(q);
    const int n = q.rows();
    CMatrix a = hermitian_part(q);
    jacobi_core(a, nullptr);
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = a(i, i).real();
    std::stable_sort(vals.begin(), vals.end(), std::greater<double>());
    return vals;
}

void Projection::validate() const {
    const CMatrix& p = matrix;
    if (p.rows() != p.cols()) throw InvalidParams("Projection: matrix not square");
    if (rank < 0 || rank > p.rows()) throw InvalidParams("Projection: rank out of range");
    if (hermitian_defect(p) > 1e-12)
        throw InvalidParams("Projection: not Hermitian within 1e-12");
    if ((p * p - p).frobenius_norm() > 1e-12)
        throw InvalidParams("Projection: not idempotent within 1e-12");
    if (std::abs(p.trace().real() - rank) > 1e-10 || std::abs(p.trace().imag()) > 1e-10)
        throw InvalidParams("Projection: trace does not match rank");
}

Projection Projection::from_columns(const CMatrix& v) {
    Projection p;
    p.rank = v.cols();
    p.matrix = hermitian_part(v * v.adjoint());
    return p;
}

Projection top_k_projection(const CMatrix& q, int k) {
    const int p = q.rows();
    if (k < 1 || k > p) throw RankOutOfRange("top_k_projection: rank must be in [1, p]");
    EigResult eig = herm_eig(q);
    CMatrix v(p, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < p; ++i) v(i, j) = eig.vectors(i, j);
    return Projection::from_columns(v);
}

double spectral_radius_estimate(const CMatrix& a) {
    if (a.rows() != a.cols()) throw ShapeMismatch("spectral_radius_estimate: matrix not square");
    const int n = a.rows();
    if (n == 0) return 0.0;
    std::vector<cdouble> v(n);
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = cdouble(1.0 + 0.01 * i, 0.1 * (i + 1)); // fixed asymmetric start
        nrm += std::norm(v[i]);
    }
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;

    const int burn = 64;
    const int total = 320;
    double logsum = 0.0;
    int counted = 0;
    std::vector<cdouble> w(n);
    for (int it = 0; it < total; ++it) {
        for (int i = 0; i < n; ++i) {
            cdouble s = 0.0;
            for (int j = 0; j < n; ++j) s += a(i, j) * v[j];
            w[i] = s;
        }
        double wn = 0.0;
        for (const auto& x : w) wn += std::norm(x);
        wn = std::sqrt(wn);
        if (wn < 1e-150) return 0.0; // (numerically) nilpotent direction
        for (int i = 0; i < n; ++i) v[i] = w[i] / wn;
        if (it >= burn) {
            logsum += std::log(wn);
            ++counted;
        }
    }
    return std::exp(logsum / counted);
}

SteinResult solve_stein(const CMatrix& a, const CMatrix& c) {
    if (a.rows() != a.cols()) throw ShapeMismatch("solve_stein: A not square");
    if (c.cols() != a.rows()) throw ShapeMismatch("solve_stein: C columns must match A");
    const int n = a.rows();

    const double rho = spectral_radius_estimate(a);
    if (rho >= 1.0 - 1e-6)
        throw SpectralRadiusTooLarge("solve_stein: spectral radius estimate >= 1 - 1e-6");

    const CMatrix ctc = c.adjoint() * c;

    // Row-major vectorization of P - A*PA = C*C.
    const int nn = n * n;
    CMatrix sys(nn, nn);
    CMatrix rhs(nn, 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int row = i * n + j;
            rhs(row, 0) = ctc(i, j);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    sys(row, k * n + l) = (i == k && j == l ? cdouble(1.0) : cdouble(0.0)) -
                                          std::conj(a(k, i)) * a(l, j);
        }
    }
    CMatrix x = solve_linear(sys, rhs);
    CMatrix p(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = x(i * n + j, 0);
    p = hermitian_part(p);

    SteinResult out;
    out.gramian = p;
    EigResult eig = herm_eig(p);
    const double lmax = eig.values.front();
    const double lmin = eig.values.back();
    out.rcond = lmax > 0.0 ? lmin / lmax : 0.0;
    out.singular = !(out.rcond > 1e-12);
    return out;
}

CMatrix stein_series_oracle(const CMatrix& a, const CMatrix& c, double tol, int max_terms) {
    CMatrix term = c.adjoint() * c;
    CMatrix sum = term;
    CMatrix apow = a; // A^{u}
    for (int u = 1; u < max_terms; ++u) {
        term = apow.adjoint() * (c.adjoint() * c) * apow;
        sum += term;
        if (term.frobenius_norm() <= tol * std::max(1.0, sum.frobenius_norm())) break;
        apow = apow * a;
    }
    return hermitian_part(sum);
}

} // namespace mafd
