#include "mafd/cmatrix.hpp"

#include <cmath>
#include <cstdlib>

#include "mafd/errors.hpp"

namespace mafd {

CMatrix::CMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, cdouble(0.0, 0.0)) {
    if (rows < 0 || cols < 0) throw InvalidParams("CMatrix: negative dimension");
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("CMatrix +=: shape mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("CMatrix -=: shape mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cdouble s) {
    for (auto& v : data_) v *= s;
    return *this;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

cdouble CMatrix::trace() const {
    cdouble t = 0.0;
    int n = rows_ < cols_ ? rows_ : cols_;
    for (int i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool CMatrix::all_finite() const {
    for (const auto& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(CMatrix a, cdouble s) { return a *= s; }
CMatrix operator*(cdouble s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeMismatch("CMatrix *: inner dimensions differ");
    CMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            cdouble aik = a(i, k);
            if (aik == cdouble(0.0, 0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

CMatrix hermitian_part(const CMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeMismatch("hermitian_part: matrix not square");
    CMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

double hermitian_defect(const CMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeMismatch("hermitian_defect: matrix not square");
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s += std::norm(m(i, j) - std::conj(m(j, i)));
    return std::sqrt(s);
}

CMatrix solve_linear(CMatrix a, CMatrix b) {
    if (a.rows() != a.cols()) throw ShapeMismatch("solve_linear: A not square");
    if (a.rows() != b.rows()) throw ShapeMismatch("solve_linear: rhs rows differ");
    const int n = a.rows();
    const int m = b.cols();
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) throw Error("solve_linear: singular system");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (int j = 0; j < m; ++j) std::swap(b(col, j), b(piv, j));
        }
        cdouble d = a(col, col);
        for (int r = col + 1; r < n; ++r) {
            cdouble f = a(r, col) / d;
            if (f == cdouble(0.0, 0.0)) continue;
            a(r, col) = 0.0;
            for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
            for (int j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        cdouble d = a(col, col);
        for (int j = 0; j < m; ++j) {
            cdouble s = b(col, j);
            for (int k = col + 1; k < n; ++k) s -= a(col, k) * b(k, j);
            b(col, j) = s / d;
        }
    }
    return b;
}

CMatrix inverse(const CMatrix& a) { return solve_linear(a, CMatrix::identity(a.rows())); }

} // namespace mafd
