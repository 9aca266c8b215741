#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mafd/cmatrix.hpp"

namespace mafd {

/// Deterministic random source. Values are derived from raw mt19937_64 bits
/// so streams do not depend on the standard library's distribution
/// implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(gen_() % static_cast<uint64_t>(hi - lo + 1));
    }

    /// Standard normal via Box-Muller.
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    cdouble cgaussian() { return cdouble(gaussian(), gaussian()); }

    /// Uniform over the closed disk of radius r (area measure).
    cdouble disk_point(double r) {
        double rad = r * std::sqrt(uniform());
        double ang = 2.0 * M_PI * uniform();
        return std::polar(rad, ang);
    }

    CMatrix matrix(int rows, int cols, double scale = 1.0) {
        CMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = scale * cgaussian();
        return m;
    }

    /// p x k matrix with orthonormal columns (modified Gram-Schmidt on
    /// Gaussian draws). Requires k <= p.
    CMatrix orthonormal_columns(int p, int k) {
        CMatrix v = matrix(p, k);
        for (int j = 0; j < k; ++j) {
            for (int prev = 0; prev < j; ++prev) {
                cdouble dot = 0.0;
                for (int i = 0; i < p; ++i) dot += std::conj(v(i, prev)) * v(i, j);
                for (int i = 0; i < p; ++i) v(i, j) -= dot * v(i, prev);
            }
            double nrm = 0.0;
            for (int i = 0; i < p; ++i) nrm += std::norm(v(i, j));
            nrm = std::sqrt(nrm);
            for (int i = 0; i < p; ++i) v(i, j) /= nrm;
        }
        return v;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace mafd
