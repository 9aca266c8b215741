#pragma once

#include <vector>

#include "mafd/cmatrix.hpp"

namespace mafd {

inline constexpr double kDefaultRMax = 0.98;
inline constexpr int kDefaultCoeffLen = 1024;

/// Element of the matrix Hardy space, stored as its first N Taylor
/// coefficients (N a power of two). The coefficient representation is
/// canonical; boundary samples are derived views.
struct AnalyticMatrixFn {
    int p = 0;
    int q = 0;
    int N = 0;
    std::vector<CMatrix> coeffs; // coeffs[n] is the p x q coefficient of z^n

    static AnalyticMatrixFn zero(int p, int q, int n);

    /// Throws InvalidParams/ShapeMismatch if the shape bookkeeping is broken
    /// or a coefficient is non-finite.
    void validate() const;
};

using GramMatrix = CMatrix; // q x q value of [F, G]

/// [F, G] = sum_n G_n* F_n. Conjugate symmetry: inner(F,G) = inner(G,F)*.
GramMatrix inner(const AnalyticMatrixFn& f, const AnalyticMatrixFn& g);

/// Tr [F, F] = sum of squared coefficient entries.
double energy(const AnalyticMatrixFn& f);

/// Horner evaluation at |w| <= r_max (PointOutsideSearchDisk otherwise).
CMatrix eval(const AnalyticMatrixFn& f, cdouble w, double r_max = kDefaultRMax);

/// Geometric bound on what an infinite tail beyond N could contribute to an
/// evaluation at radius r: ||F|| r^N / sqrt(1 - r^2).
double eval_tail_bound(const AnalyticMatrixFn& f, double r);

/// alpha * F + G, coefficientwise.
AnalyticMatrixFn axpy(cdouble alpha, const AnalyticMatrixFn& f, const AnalyticMatrixFn& g);

AnalyticMatrixFn sub(const AnalyticMatrixFn& f, const AnalyticMatrixFn& g);

AnalyticMatrixFn scale(const AnalyticMatrixFn& f, cdouble s);

/// Constant left factor: (A F)(z) = A * F(z).
AnalyticMatrixFn lmul(const CMatrix& a, const AnalyticMatrixFn& f);

/// Normalized Szego kernel e_w as a scalar coefficient sequence:
/// coefficient n is sqrt(1-|w|^2) * conj(w)^n.
AnalyticMatrixFn szego_fn(cdouble w, int n, double r_max = kDefaultRMax);

/// Values F(e^{2*pi*i*j/m}) for j = 0..m-1 via zero-padded inverse FFT.
/// m must be a power of two with m >= N.
std::vector<CMatrix> boundary_samples(const AnalyticMatrixFn& f, int m);

/// Values F(r e^{2*pi*i*a/angles}) for a = 0..angles-1. angles must be a
/// power of two; used by the selection sweep.
std::vector<CMatrix> circle_samples(const AnalyticMatrixFn& f, double r, int angles);

} // namespace mafd
