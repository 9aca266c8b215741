#include "mafd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "mafd/errors.hpp"
#include "mafd/fft.hpp"
#include "mafd/rng.hpp"
#include "mafd/sigio.hpp"
#include "mafd/verify.hpp"

namespace mafd::cli {

namespace {

int map_exception(const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const SchemaVersionMismatch*>(&e))
        return kExitParse;
    return kExitPrecondition;
}

AnalyticMatrixFn synth_atom(Rng& rng, const SynthOptions& opt) {
    const cdouble a(opt.w_re, opt.w_im);
    if (std::abs(a) >= 1.0) throw InvalidParams("synth: atom point must lie inside the disk");
    const CMatrix u = rng.orthonormal_columns(opt.p, 1);
    CMatrix v = rng.matrix(opt.q, 1);
    v *= cdouble(opt.amplitude / std::max(v.frobenius_norm(), 1e-300), 0.0);
    const CMatrix uv = u * v.adjoint();
    const AnalyticMatrixFn e = szego_fn(a, opt.n, 1.0);
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(opt.p, opt.q, opt.n);
    for (int m = 0; m < opt.n; ++m) f.coeffs[m] = e.coeffs[m](0, 0) * uv;
    return f;
}

AnalyticMatrixFn synth_atom_sum(Rng& rng, const SynthOptions& opt) {
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(opt.p, opt.q, opt.n);
    for (int c = 0; c < opt.count; ++c) {
        const cdouble a = rng.disk_point(0.8);
        const CMatrix u = rng.orthonormal_columns(opt.p, 1);
        CMatrix v = rng.matrix(opt.q, 1);
        v *= cdouble(opt.amplitude / std::max(v.frobenius_norm(), 1e-300), 0.0);
        const CMatrix uv = u * v.adjoint();
        const AnalyticMatrixFn e = szego_fn(a, opt.n, 1.0);
        for (int m = 0; m < opt.n; ++m) f.coeffs[m] += e.coeffs[m](0, 0) * uv;
    }
    return f;
}

AnalyticMatrixFn synth_random_poly(Rng& rng, const SynthOptions& opt) {
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(opt.p, opt.q, opt.n);
    for (int m = 0; m <= opt.degree && m < opt.n; ++m)
        f.coeffs[m] = rng.matrix(opt.p, opt.q, opt.amplitude * 0.5);
    return f;
}

AnalyticMatrixFn synth_constant(const SynthOptions& opt) {
    AnalyticMatrixFn f = AnalyticMatrixFn::zero(opt.p, opt.q, opt.n);
    for (int i = 0; i < std::min(opt.p, opt.q); ++i) f.coeffs[0](i, i) = opt.amplitude;
    return f;
}

RealMatrixSignal synth_real_trig(Rng& rng, const SynthOptions& opt) {
    if (2 * opt.degree >= opt.n)
        throw InvalidParams("synth: real-trig degree must be below n/2");
    RealMatrixSignal s = RealMatrixSignal::zero(opt.p, opt.q, opt.n);
    std::vector<CMatrix> an(opt.degree + 1), bn(opt.degree + 1);
    for (int d = 0; d <= opt.degree; ++d) {
        an[d] = CMatrix(opt.p, opt.q);
        bn[d] = CMatrix(opt.p, opt.q);
        for (int i = 0; i < opt.p; ++i)
            for (int j = 0; j < opt.q; ++j) {
                an[d](i, j) = opt.amplitude * rng.gaussian() * 0.5;
                bn[d](i, j) = d == 0 ? 0.0 : opt.amplitude * rng.gaussian() * 0.5;
            }
    }
    for (int t = 0; t < opt.n; ++t) {
        const double time = 2.0 * M_PI * t / opt.n;
        for (int i = 0; i < opt.p; ++i)
            for (int j = 0; j < opt.q; ++j) {
                double v = an[0](i, j).real();
                for (int d = 1; d <= opt.degree; ++d)
                    v += an[d](i, j).real() * std::cos(d * time) +
                         bn[d](i, j).real() * std::sin(d * time);
                s.at(t, i, j) = v;
            }
    }
    return s;
}

} // namespace

int cmd_synth(const SynthOptions& opt) {
    try {
        if (opt.out.empty()) throw InvalidParams("synth: --out is required");
        if (opt.p < 1 || opt.q < 1) throw InvalidParams("synth: p, q must be positive");
        if (!is_power_of_two(opt.n)) throw InvalidParams("synth: n must be a power of two");
        Rng rng(opt.seed);
        if (opt.kind == "atom") {
            save_signal(synth_atom(rng, opt), opt.out);
        } else if (opt.kind == "atom-sum") {
            save_signal(synth_atom_sum(rng, opt), opt.out);
        } else if (opt.kind == "random-poly") {
            save_signal(synth_random_poly(rng, opt), opt.out);
        } else if (opt.kind == "constant") {
            save_signal(synth_constant(opt), opt.out);
        } else if (opt.kind == "real-trig") {
            save_signal(synth_real_trig(rng, opt), opt.out);
        } else {
            throw InvalidParams("synth: unknown kind '" + opt.kind + "'");
        }
        return kExitOk;
    } catch (const std::exception& e) {
        return map_exception(e);
    }
}

int cmd_decompose(const DecomposeOptions& opt) {
    try {
        const LoadedSignal sig = load_signal(opt.in);
        AnalyticMatrixFn f;
        if (std::holds_alternative<RealMatrixSignal>(sig))
            f = analytic_part(std::get<RealMatrixSignal>(sig)).f_plus;
        else
            f = std::get<AnalyticMatrixFn>(sig);
        const DecompositionResult res = decompose(f, opt.config);
        save_result(res, opt.config, opt.out);
        if (opt.verbose) {
            for (size_t k = 0; k < res.terms.size(); ++k) {
                const auto& t = res.terms[k];
                std::printf("term %3zu  w=(% .6f,% .6f)  rank=%d  gain=%.6e  residual=%.6e\n",
                            k, t.w.real(), t.w.imag(), t.P.rank, t.gain,
                            res.per_step_residuals[k]);
            }
        }
        std::cout << "terms=" << res.terms.size() << " initial=" << res.initial_energy
                  << " residual=" << res.residual_energy << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        return map_exception(e);
    }
}

int cmd_reconstruct(const ReconstructOptions& opt) {
    try {
        const LoadedResult lr = load_result(opt.result);
        const int n = opt.n > 0 ? opt.n : lr.result.N;
        const AnalyticMatrixFn f = reconstruct(lr.result, opt.real_out ? n / 2 : n);
        if (opt.real_out) {
            CMatrix f0(f.p, f.q);
            for (int i = 0; i < f.p; ++i)
                for (int j = 0; j < f.q; ++j) f0(i, j) = f.coeffs[0](i, j).real();
            save_signal(real_reconstruct(f, f0, n), opt.out);
        } else {
            save_signal(f, opt.out);
        }
        return kExitOk;
    } catch (const std::exception& e) {
        return map_exception(e);
    }
}

namespace {

void write_report(const std::vector<Check>& checks, const VerifyOptions& opt) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!opt.report.empty()) {
        file.open(opt.report, std::ios::app);
        if (!file) throw Error("verify: cannot open report file");
        os = &file;
    }
    for (const auto& c : checks) {
        if (opt.format == "csv") {
            (*os) << c.name << ',' << c.measured << ',' << c.tolerance << ','
                  << (c.pass ? "pass" : "fail") << '\n';
        } else {
            char buf[512];
            std::snprintf(buf, sizeof(buf),
                          "{\"check\":\"%s\",\"measured\":%.17g,\"tolerance\":%.17g,"
                          "\"pass\":%s}",
                          c.name.c_str(), c.measured, c.tolerance, c.pass ? "true" : "false");
            (*os) << buf << '\n';
        }
    }
}

} // namespace

int cmd_verify(const VerifyOptions& opt) {
    std::vector<Check> checks;
    try {
        if (opt.format != "json" && opt.format != "csv")
            throw InvalidParams("verify: format must be json or csv");
        checks = verify_core(opt.seed);
        if (!opt.in.empty()) {
            // Sniff the file kind: results get the result checks, signals a
            // full decomposition replay.
            bool handled = false;
            try {
                const LoadedResult lr = load_result(opt.in);
                const std::vector<Check> rc = verify_result(lr.result);
                checks.insert(checks.end(), rc.begin(), rc.end());
                handled = true;
            } catch (const ParseError&) {
                // fall through to signal files
            }
            if (!handled) {
                const LoadedSignal sig = load_signal(opt.in);
                const std::vector<Check> sc = verify_signal(sig, opt.config);
                checks.insert(checks.end(), sc.begin(), sc.end());
            }
        }
        write_report(checks, opt);
        return all_pass(checks) ? kExitOk : kExitInvariant;
    } catch (const std::exception& e) {
        return map_exception(e);
    }
}

} // namespace mafd::cli
