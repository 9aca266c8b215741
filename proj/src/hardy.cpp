#include "mafd/hardy.hpp"

#include <cmath>

#include "mafd/errors.hpp"
#include "mafd/fft.hpp"

namespace mafd {

AnalyticMatrixFn AnalyticMatrixFn::zero(int p, int q, int n) {
    if (p < 1 || q < 1) throw InvalidParams("AnalyticMatrixFn: p, q must be positive");
    if (!is_power_of_two(n)) throw InvalidParams("AnalyticMatrixFn: N must be a power of two");
    AnalyticMatrixFn f;
    f.p = p;
    f.q = q;
    f.N = n;
    f.coeffs.assign(n, CMatrix(p, q));
    return f;
}

void AnalyticMatrixFn::validate() const {
    if (p < 1 || q < 1) throw InvalidParams("AnalyticMatrixFn: p, q must be positive");
    if (!is_power_of_two(N)) throw InvalidParams("AnalyticMatrixFn: N must be a power of two");
    if (static_cast<int>(coeffs.size()) != N)
        throw ShapeMismatch("AnalyticMatrixFn: coefficient count differs from N");
    for (const auto& c : coeffs) {
        if (c.rows() != p || c.cols() != q)
            throw ShapeMismatch("AnalyticMatrixFn: coefficient shape mismatch");
        if (!c.all_finite()) throw InvalidParams("AnalyticMatrixFn: non-finite coefficient");
    }
}

namespace {

void require_same_shape(const AnalyticMatrixFn& f, const AnalyticMatrixFn& g) {
    if (f.p != g.p || f.q != g.q || f.N != g.N)
        throw ShapeMismatch("AnalyticMatrixFn: operand shapes differ");
}

} // namespace

GramMatrix inner(const AnalyticMatrixFn& f, const AnalyticMatrixFn& g) {
    require_same_shape(f, g);
    CMatrix acc(f.q, f.q);
    for (int n = 0; n < f.N; ++n) {
        const CMatrix& fn = f.coeffs[n];
        const CMatrix& gn = g.coeffs[n];
        for (int a = 0; a < f.q; ++a)
            for (int b = 0; b < f.q; ++b) {
                cdouble s = 0.0;
                for (int i = 0; i < f.p; ++i) s += std::conj(gn(i, a)) * fn(i, b);
                acc(a, b) += s;
            }
    }
    return acc;
}

double energy(const AnalyticMatrixFn& f) {
    double s = 0.0;
    for (const auto& c : f.coeffs)
        for (size_t i = 0; i < c.size(); ++i) s += std::norm(c.data()[i]);
    return s;
}

CMatrix eval(const AnalyticMatrixFn& f, cdouble w, double r_max) {
    if (std::abs(w) > r_max + 1e-12) // small grace for polar-coordinate rounding
        throw PointOutsideSearchDisk("eval: |w| exceeds the search radius");
    CMatrix acc = f.coeffs[f.N - 1];
    for (int n = f.N - 2; n >= 0; --n) {
        const CMatrix& c = f.coeffs[n];
        for (size_t i = 0; i < acc.size(); ++i) acc.data()[i] = c.data()[i] + w * acc.data()[i];
    }
    return acc;
}

double eval_tail_bound(const AnalyticMatrixFn& f, double r) {
    if (r >= 1.0) return INFINITY;
    if (r <= 0.0) return 0.0;
    return std::sqrt(energy(f)) * std::pow(r, f.N) / std::sqrt(1.0 - r * r);
}

AnalyticMatrixFn axpy(cdouble alpha, const AnalyticMatrixFn& f, const AnalyticMatrixFn& g) {
    require_same_shape(f, g);
    AnalyticMatrixFn out = g;
    if (alpha == cdouble(0.0, 0.0)) return out;
    for (int n = 0; n < f.N; ++n) {
        CMatrix& o = out.coeffs[n];
        const CMatrix& fc = f.coeffs[n];
        for (size_t i = 0; i < o.size(); ++i) o.data()[i] += alpha * fc.data()[i];
    }
    return out;
}

AnalyticMatrixFn sub(const AnalyticMatrixFn& f, const AnalyticMatrixFn& g) {
    require_same_shape(f, g);
    AnalyticMatrixFn out = f;
    for (int n = 0; n < f.N; ++n) out.coeffs[n] -= g.coeffs[n];
    return out;
}

AnalyticMatrixFn scale(const AnalyticMatrixFn& f, cdouble s) {
    AnalyticMatrixFn out = f;
    for (auto& c : out.coeffs) c *= s;
    return out;
}

AnalyticMatrixFn lmul(const CMatrix& a, const AnalyticMatrixFn& f) {
    if (a.cols() != f.p) throw ShapeMismatch("lmul: inner dimensions differ");
    AnalyticMatrixFn out = AnalyticMatrixFn::zero(a.rows(), f.q, f.N);
    for (int n = 0; n < f.N; ++n) out.coeffs[n] = a * f.coeffs[n];
    return out;
}

AnalyticMatrixFn szego_fn(cdouble w, int n, double r_max) {
    if (std::abs(w) > r_max + 1e-12)
        throw PointOutsideSearchDisk("szego_fn: |w| exceeds the search radius");
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(1, 1, n);
    const double c0 = std::sqrt(1.0 - std::norm(w));
    cdouble pw = 1.0;
    for (int k = 0; k < n; ++k) {
        f.coeffs[k](0, 0) = c0 * pw;
        pw *= std::conj(w);
    }
    return f;
}

std::vector<CMatrix> boundary_samples(const AnalyticMatrixFn& f, int m) {
    if (!is_power_of_two(m) || m < f.N)
        throw InvalidParams("boundary_samples: m must be a power of two >= N");
    std::vector<CMatrix> out(m, CMatrix(f.p, f.q));
    std::vector<cdouble> buf(m);
    for (int i = 0; i < f.p; ++i) {
        for (int j = 0; j < f.q; ++j) {
            std::fill(buf.begin(), buf.end(), cdouble(0.0, 0.0));
            for (int n = 0; n < f.N; ++n) buf[n] = f.coeffs[n](i, j);
            fft_radix2(buf, true);
            for (int s = 0; s < m; ++s) out[s](i, j) = buf[s];
        }
    }
    return out;
}

std::vector<CMatrix> circle_samples(const AnalyticMatrixFn& f, double r, int angles) {
    if (!is_power_of_two(angles)) throw InvalidParams("circle_samples: angles must be a power of two");
    std::vector<double> pw(f.N);
    double rp = 1.0;
    for (int n = 0; n < f.N; ++n) {
        pw[n] = rp;
        rp *= r;
    }
    std::vector<CMatrix> out(angles, CMatrix(f.p, f.q));
    std::vector<cdouble> buf(angles);
    for (int i = 0; i < f.p; ++i) {
        for (int j = 0; j < f.q; ++j) {
            std::fill(buf.begin(), buf.end(), cdouble(0.0, 0.0));
            for (int n = 0; n < f.N; ++n) buf[n & (angles - 1)] += f.coeffs[n](i, j) * pw[n];
            fft_radix2(buf, true);
            for (int a = 0; a < angles; ++a) out[a](i, j) = buf[a];
        }
    }
    return out;
}

} // namespace mafd
