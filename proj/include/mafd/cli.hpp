#pragma once

#include <cstdint>
#include <string>

#include "mafd/afd.hpp"

namespace mafd::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;        // unreadable/ill-formed input
inline constexpr int kExitPrecondition = 3; // bad parameters or preconditions
inline constexpr int kExitInvariant = 4;    // a verification check failed

struct SynthOptions {
    std::string kind; // atom | atom-sum | random-poly | real-trig | constant
    std::string out;
    int p = 2;
    int q = 1;
    int n = kDefaultCoeffLen; // coefficient length or sample count
    int degree = 8;
    int count = 3; // atoms in an atom-sum
    double w_re = 0.3;
    double w_im = 0.0;
    double amplitude = 1.0;
    uint64_t seed = 1;
};

struct DecomposeOptions {
    std::string in;
    std::string out;
    bool verbose = false; // per-term progress lines on stdout
    SelectionConfig config;
};

struct ReconstructOptions {
    std::string result;
    std::string out;
    int n = 0;            // output length; 0 = use the result's N
    bool real_out = false; // emit a real signal via the conjugate mirror
};

struct VerifyOptions {
    std::string in; // result or signal file; empty = core suites only
    std::string report;
    std::string format = "json"; // json | csv
    uint64_t seed = 1;
    SelectionConfig config;
};

int cmd_synth(const SynthOptions& opt);
int cmd_decompose(const DecomposeOptions& opt);
int cmd_reconstruct(const ReconstructOptions& opt);
int cmd_verify(const VerifyOptions& opt);

} // namespace mafd::cli
