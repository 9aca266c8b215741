#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mafd/afd.hpp"
#include "mafd/sigio.hpp"

namespace mafd {

/// One named invariant check with its measured residual and tolerance.
struct Check {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

inline Check make_check(std::string name, double measured, double tolerance,
                        std::string detail = {}) {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.tolerance = tolerance;
    c.pass = measured <= tolerance;
    c.detail = std::move(detail);
    return c;
}

inline bool all_pass(const std::vector<Check>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

/// Randomized (seeded, deterministic) suites for the library invariants
/// that need no input data: matrix core, Hardy arithmetic, Blaschke
/// factors and the state-space construction.
std::vector<Check> verify_core(uint64_t seed);

/// Invariants of a finished decomposition that are checkable from the
/// result alone: projection validity, the gain formula, monotone residuals,
/// the energy ledger and pairwise term orthogonality.
std::vector<Check> verify_result(const DecompositionResult& r);

/// Decomposes the given signal and additionally checks the invariants that
/// need the input function: per-step energy conservation, grid optimality
/// of each selection, the scalar reduction (p = q = 1) and, for real
/// signals, the DFT Parseval identity and the round trip.
std::vector<Check> verify_signal(const LoadedSignal& sig, const SelectionConfig& cfg);

} // namespace mafd
