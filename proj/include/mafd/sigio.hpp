#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mafd/afd.hpp"
#include "mafd/cmatrix.hpp"
#include "mafd/hardy.hpp"

namespace mafd {

/// Real p x q samples at t_j = 2*pi*j / n_samples; n_samples a power of two.
struct RealMatrixSignal {
    int p = 0;
    int q = 0;
    int n_samples = 0;
    std::vector<std::vector<double>> samples; // per sample, p*q row-major

    static RealMatrixSignal zero(int p, int q, int n_samples);
    void validate() const;
    double& at(int sample, int i, int j) { return samples[sample][static_cast<size_t>(i) * q + j]; }
    double at(int sample, int i, int j) const { return samples[sample][static_cast<size_t>(i) * q + j]; }
};

/// Mean over samples of Tr(f(t)^T f(t)); equals the two-sided spectral
/// energy by the DFT Parseval identity.
double signal_energy(const RealMatrixSignal& s);

/// Entrywise DFT with the 1/n normalization, bins 0..n-1 (bin m >= n/2
/// carries frequency m - n).
std::vector<CMatrix> two_sided_spectrum(const RealMatrixSignal& s);

struct AnalyticParts {
    AnalyticMatrixFn f_plus; // coefficients 0 .. n/2 - 1
    CMatrix f0;              // the constant coefficient
};

/// Nonnegative-frequency half of a two-sided spectrum. Enforces conjugate
/// symmetry (including a real Nyquist bin) within 1e-10; throws
/// NotRealSpectrum otherwise. The Nyquist bin is excluded from f_plus.
AnalyticParts analytic_part_from_spectrum(const std::vector<CMatrix>& spectrum);

AnalyticParts analytic_part(const RealMatrixSignal& s);

/// Samples of F_+(e^{it}) + conj(F_+(e^{it})) - F0 at n_samples points.
/// Requires n_samples >= 2 N and a real F0 (imaginary residue beyond 1e-10
/// raises NotRealSpectrum; below that it is discarded).
RealMatrixSignal real_reconstruct(const AnalyticMatrixFn& f_plus, const CMatrix& f0,
                                  int n_samples);

using LoadedSignal = std::variant<RealMatrixSignal, AnalyticMatrixFn>;

/// JSON files. Schema: { "kind": "real_signal" | "analytic_fn", "p", "q",
/// "n", "data", "schema_version": 1 } with complex entries as [re, im].
LoadedSignal load_signal(const std::string& path);
void save_signal(const RealMatrixSignal& s, const std::string& path);
void save_signal(const AnalyticMatrixFn& f, const std::string& path);

/// Result files carry the terms, the energy ledger and the selection
/// configuration that produced them.
void save_result(const DecompositionResult& r, const SelectionConfig& cfg,
                 const std::string& path);

struct LoadedResult {
    DecompositionResult result;
    SelectionConfig config;
};

LoadedResult load_result(const std::string& path);

} // namespace mafd
