#pragma once

#include <complex>
#include <vector>

namespace mafd {

using cdouble = std::complex<double>;

/// Dense complex matrix, row-major storage. Sizes in this library are small
/// (p, q <= ~16, state dimensions <= ~64), so everything is plain loops.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols);

    static CMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cdouble& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const cdouble& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    cdouble* data() { return data_.data(); }
    const cdouble* data() const { return data_.data(); }
    size_t size() const { return data_.size(); }

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cdouble s);

    CMatrix adjoint() const;
    cdouble trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cdouble> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(CMatrix a, cdouble s);
CMatrix operator*(cdouble s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);

/// (M + M*)/2; requires a square matrix.
CMatrix hermitian_part(const CMatrix& m);

/// ||M - M*||_F
double hermitian_defect(const CMatrix& m);

/// Solves A X = B for square A by LU with partial pivoting.
/// Pivoting order is deterministic (max modulus, lowest row on ties).
CMatrix solve_linear(CMatrix a, CMatrix b);

CMatrix inverse(const CMatrix& a);

} // namespace mafd
