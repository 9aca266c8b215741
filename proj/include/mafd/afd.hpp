#pragma once

#include <vector>

#include "mafd/blaschke.hpp"
#include "mafd/hardy.hpp"
#include "mafd/matcore.hpp"

namespace mafd {

/// Search and stopping parameters for the adaptive decomposition.
///
/// The selection search is deterministic: a polar coarse grid (Chebyshev
/// radii in (0, r_max], uniform angles, plus w = 0) followed by refine_iters
/// rounds of 3x3 local pattern search whose spacing shrinks by refine_shrink
/// each round. stop_rel_energy is relative to the initial energy; min_gain
/// is the absolute energy floor for the search and, scaled by the initial
/// energy, the smallest accepted per-step gain.
struct SelectionConfig {
    std::vector<int> rank_schedule; // empty = rank 1 every step
    double r_max = 0.98;
    int n_radii = 24;
    int n_angles = 64;
    int refine_iters = 3;
    double refine_shrink = 0.25;
    double stop_rel_energy = 1e-6;
    int max_terms = 200;
    double min_gain = 1e-12;
    int threads = 1; // grid evaluation only; never changes results

    int rank_at(int step) const;
    void validate() const; // throws InvalidParams
};

/// One greedy atom: selected point, projection, matrix coefficient
/// M = P F(w) and its energy contribution (1-|w|^2) Tr(M*M).
struct DecompositionTerm {
    cdouble w;
    Projection P;
    CMatrix M;
    double gain = 0.0;
};

struct DecompositionResult {
    int p = 0;
    int q = 0;
    int N = 0;
    std::vector<DecompositionTerm> terms;
    double initial_energy = 0.0;
    double residual_energy = 0.0;
    std::vector<double> per_step_residuals; // residual energy after each step
    std::vector<double> truncation_ledger;  // per-step discarded-energy bounds
    double separability_sum = 0.0;          // sum of (1 - |w_k|)
};

struct Objective {
    double value = 0.0;
    Projection P;
};

/// (1-|w|^2) * (sum of the top-k eigenvalues of F(w) F(w)*) together with
/// the maximizing rank-k projection.
Objective objective(const AnalyticMatrixFn& f, cdouble w, int k, double r_max = kDefaultRMax);

struct Selection {
    cdouble w;
    Projection P;
    double value = 0.0;
};

/// Deterministic two-stage search for the maximum of the objective over the
/// closed disk of radius cfg.r_max. Throws ZeroFunction when
/// energy(F) <= cfg.min_gain.
Selection max_selection(const AnalyticMatrixFn& f, int k, const SelectionConfig& cfg);

struct SplitResult {
    AnalyticMatrixFn atom;      // M e_w(z) sqrt(1-|w|^2)
    AnalyticMatrixFn remainder; // H = F - atom, with P H(w) = 0
    CMatrix M;                  // P F(w)
};

SplitResult split(const AnalyticMatrixFn& f, cdouble w, const Projection& p);

struct StepResult {
    DecompositionTerm term;
    AnalyticMatrixFn next;      // reduced remainder F_{k+1}
    double ledger_entry = 0.0;  // truncation/remainder bound for this step
};

/// One greedy step: select, split, deflate.
StepResult step(const AnalyticMatrixFn& f, int step_index, const SelectionConfig& cfg);

/// Full greedy decomposition; stops on relative residual energy, the term
/// budget, a vanishing gain, or exact termination.
DecompositionResult decompose(const AnalyticMatrixFn& f, const SelectionConfig& cfg = {});

/// k-th reconstructed term function T_k = B_0 ... B_{k-1} applied to the
/// k-th atom. Pairwise orthogonal across k up to coefficient truncation.
AnalyticMatrixFn term_function(const DecompositionResult& r, int k, int n);

/// Sum of all term functions; energy(F - reconstruct) tracks the residual
/// energy up to the accumulated truncation ledger.
AnalyticMatrixFn reconstruct(const DecompositionResult& r, int n);

/// Per-step record kept by the scalar oracle.
struct ScalarStepTrace {
    cdouble a;                       // selected point
    cdouble coeff;                   // <f_k, e_{a_k}>
    double residual = 0.0;           // energy of the next reduced remainder
    double equivalence_defect = 0.0; // max pairwise gap of the three coefficient forms
};

/// Independent scalar adaptive decomposition (p = q = 1, projection forced
/// to 1). Also maintains the standard remainder and checks that
/// <f_k, e_{a_k}>, <g_k, B_k> and <f, B_k> agree within 1e-8 each step.
DecompositionResult scalar_afd(const AnalyticMatrixFn& f, const SelectionConfig& cfg = {},
                               std::vector<ScalarStepTrace>* trace = nullptr);

} // namespace mafd
