#include "mafd/sigio.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mafd/errors.hpp"
#include "mafd/fft.hpp"

namespace mafd {

using json = nlohmann::ordered_json;

RealMatrixSignal RealMatrixSignal::zero(int p, int q, int n_samples) {
    RealMatrixSignal s;
    s.p = p;
    s.q = q;
    s.n_samples = n_samples;
    s.samples.assign(n_samples, std::vector<double>(static_cast<size_t>(p) * q, 0.0));
    s.validate();
    return s;
}

void RealMatrixSignal::validate() const {
    if (p < 1 || q < 1) throw InvalidParams("RealMatrixSignal: p, q must be positive");
    if (!is_power_of_two(n_samples))
        throw InvalidParams("RealMatrixSignal: n_samples must be a power of two");
    if (static_cast<int>(samples.size()) != n_samples)
        throw ShapeMismatch("RealMatrixSignal: sample count mismatch");
    for (const auto& s : samples) {
        if (static_cast<int>(s.size()) != p * q)
            throw ShapeMismatch("RealMatrixSignal: sample shape mismatch");
        for (double v : s)
            if (!std::isfinite(v)) throw InvalidParams("RealMatrixSignal: non-finite sample");
    }
}

double signal_energy(const RealMatrixSignal& s) {
    double acc = 0.0;
    for (const auto& sample : s.samples)
        for (double v : sample) acc += v * v;
    return acc / s.n_samples;
}

std::vector<CMatrix> two_sided_spectrum(const RealMatrixSignal& s) {
    s.validate();
    const int n = s.n_samples;
    std::vector<CMatrix> spec(n, CMatrix(s.p, s.q));
    std::vector<cdouble> buf(n);
    for (int i = 0; i < s.p; ++i) {
        for (int j = 0; j < s.q; ++j) {
            for (int t = 0; t < n; ++t) buf[t] = s.at(t, i, j);
            fft_radix2(buf, false);
            for (int m = 0; m < n; ++m) spec[m](i, j) = buf[m] / static_cast<double>(n);
        }
    }
    return spec;
}

AnalyticParts analytic_part_from_spectrum(const std::vector<CMatrix>& spectrum) {
    const int n = static_cast<int>(spectrum.size());
    if (n < 2 || !is_power_of_two(n))
        throw InvalidParams("analytic_part: spectrum length must be a power of two >= 2");
    const int p = spectrum[0].rows();
    const int q = spectrum[0].cols();

    double scale = 0.0;
    for (const auto& m : spectrum) scale = std::max(scale, m.max_abs());
    const double tol = 1e-10 * std::max(1.0, scale);

    // Conjugate symmetry of a real signal; the Nyquist bin must be real and
    // bin 0 as well.
    double defect = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) defect = std::max(defect, std::abs(spectrum[0](i, j).imag()));
    for (int m = 1; m <= n / 2; ++m) {
        const CMatrix& a = spectrum[m];
        const CMatrix& b = spectrum[(n - m) % n];
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < q; ++j)
                defect = std::max(defect, std::abs(b(i, j) - std::conj(a(i, j))));
    }
    if (defect > tol)
        throw NotRealSpectrum("analytic_part: spectrum lacks conjugate symmetry");

    AnalyticParts out;
    out.f_plus = AnalyticMatrixFn::zero(p, q, n / 2);
    for (int m = 0; m < n / 2; ++m) out.f_plus.coeffs[m] = spectrum[m];
    out.f0 = spectrum[0];
    return out;
}

AnalyticParts analytic_part(const RealMatrixSignal& s) {
    return analytic_part_from_spectrum(two_sided_spectrum(s));
}

RealMatrixSignal real_reconstruct(const AnalyticMatrixFn& f_plus, const CMatrix& f0,
                                  int n_samples) {
    f_plus.validate();
    if (f0.rows() != f_plus.p || f0.cols() != f_plus.q)
        throw ShapeMismatch("real_reconstruct: F0 shape mismatch");
    if (!is_power_of_two(n_samples) || n_samples < 2 * f_plus.N)
        throw InvalidParams("real_reconstruct: n_samples must be a power of two >= 2N");

    double residue = 0.0;
    for (size_t i = 0; i < f0.size(); ++i) residue = std::max(residue, std::abs(f0.data()[i].imag()));
    if (residue > 1e-10 * std::max(1.0, f0.max_abs()))
        throw NotRealSpectrum("real_reconstruct: F0 has a non-negligible imaginary part");

    const std::vector<CMatrix> vals = boundary_samples(f_plus, n_samples);
    RealMatrixSignal out = RealMatrixSignal::zero(f_plus.p, f_plus.q, n_samples);
    for (int t = 0; t < n_samples; ++t)
        for (int i = 0; i < f_plus.p; ++i)
            for (int j = 0; j < f_plus.q; ++j) {
                const cdouble v = vals[t](i, j);
                out.at(t, i, j) = v.real() + v.real() - f0(i, j).real();
            }
    return out;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

constexpr int kSchemaVersion = 1;

json complex_to_json(cdouble v) { return json::array({v.real(), v.imag()}); }

cdouble complex_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(std::string("expected [re, im] pair in field '") + field + "'");
    return cdouble(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j, int rows, int cols, const char* field) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw ParseError(std::string("field '") + field + "': wrong row count");
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ParseError(std::string("field '") + field + "': wrong column count");
        for (int c = 0; c < cols; ++c) m(i, c) = complex_from_json(row[c], field);
    }
    return m;
}

json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw ParseError("'" + path + "': top level is not an object");
    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
        throw ParseError("'" + path + "': missing schema_version");
    if (doc["schema_version"].get<int>() != kSchemaVersion)
        throw SchemaVersionMismatch("'" + path + "': unsupported schema_version");
    return doc;
}

void write_document(const json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << doc.dump(1) << '\n';
}

int require_count(const json& doc, const char* field) {
    if (!doc.contains(field) || !doc[field].is_number_integer())
        throw ParseError(std::string("missing integer field '") + field + "'");
    return doc[field].get<int>();
}

double require_number(const json& doc, const char* field) {
    if (!doc.contains(field) || !doc[field].is_number())
        throw ParseError(std::string("missing numeric field '") + field + "'");
    return doc[field].get<double>();
}

json config_to_json(const SelectionConfig& cfg) {
    json j;
    j["rank_schedule"] = cfg.rank_schedule;
    j["r_max"] = cfg.r_max;
    j["coarse_grid"] = json::array({cfg.n_radii, cfg.n_angles});
    j["refine_iters"] = cfg.refine_iters;
    j["refine_shrink"] = cfg.refine_shrink;
    j["stop_rel_energy"] = cfg.stop_rel_energy;
    j["max_terms"] = cfg.max_terms;
    j["min_gain"] = cfg.min_gain;
    return j;
}

SelectionConfig config_from_json(const json& j) {
    SelectionConfig cfg;
    if (j.contains("rank_schedule")) cfg.rank_schedule = j["rank_schedule"].get<std::vector<int>>();
    cfg.r_max = require_number(j, "r_max");
    if (!j.contains("coarse_grid") || !j["coarse_grid"].is_array() || j["coarse_grid"].size() != 2)
        throw ParseError("config: missing coarse_grid [radii, angles]");
    cfg.n_radii = j["coarse_grid"][0].get<int>();
    cfg.n_angles = j["coarse_grid"][1].get<int>();
    cfg.refine_iters = require_count(j, "refine_iters");
    cfg.refine_shrink = require_number(j, "refine_shrink");
    cfg.stop_rel_energy = require_number(j, "stop_rel_energy");
    cfg.max_terms = require_count(j, "max_terms");
    cfg.min_gain = require_number(j, "min_gain");
    return cfg;
}

} // namespace

LoadedSignal load_signal(const std::string& path) {
    const json doc = load_document(path);
    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw ParseError("'" + path + "': missing kind");
    const std::string kind = doc["kind"].get<std::string>();
    const int p = require_count(doc, "p");
    const int q = require_count(doc, "q");
    const int n = require_count(doc, "n");
    if (!doc.contains("data") || !doc["data"].is_array())
        throw ParseError("'" + path + "': missing data array");
    const json& data = doc["data"];

    if (kind == "real_signal") {
        if (!is_power_of_two(n)) throw InvalidParams("'" + path + "': n must be a power of two");
        if (static_cast<int>(data.size()) != n)
            throw ParseError("'" + path + "': data length differs from n");
        RealMatrixSignal s;
        s.p = p;
        s.q = q;
        s.n_samples = n;
        s.samples.assign(n, std::vector<double>(static_cast<size_t>(p) * q, 0.0));
        for (int t = 0; t < n; ++t) {
            const json& sample = data[t];
            if (!sample.is_array() || static_cast<int>(sample.size()) != p)
                throw ParseError("'" + path + "': sample row count mismatch");
            for (int i = 0; i < p; ++i) {
                const json& row = sample[i];
                if (!row.is_array() || static_cast<int>(row.size()) != q)
                    throw ParseError("'" + path + "': sample column count mismatch");
                for (int j = 0; j < q; ++j) {
                    if (!row[j].is_number()) throw ParseError("'" + path + "': non-numeric sample");
                    s.at(t, i, j) = row[j].get<double>();
                }
            }
        }
        s.validate();
        return s;
    }
    if (kind == "analytic_fn") {
        if (!is_power_of_two(n)) throw InvalidParams("'" + path + "': n must be a power of two");
        if (static_cast<int>(data.size()) != n)
            throw ParseError("'" + path + "': data length differs from n");
        AnalyticMatrixFn f = AnalyticMatrixFn::zero(p, q, n);
        for (int m = 0; m < n; ++m) f.coeffs[m] = matrix_from_json(data[m], p, q, "data");
        f.validate();
        return f;
    }
    throw ParseError("'" + path + "': unknown kind '" + kind + "'");
}

void save_signal(const RealMatrixSignal& s, const std::string& path) {
    s.validate();
    json doc;
    doc["kind"] = "real_signal";
    doc["p"] = s.p;
    doc["q"] = s.q;
    doc["n"] = s.n_samples;
    json data = json::array();
    for (int t = 0; t < s.n_samples; ++t) {
        json sample = json::array();
        for (int i = 0; i < s.p; ++i) {
            json row = json::array();
            for (int j = 0; j < s.q; ++j) row.push_back(s.at(t, i, j));
            sample.push_back(std::move(row));
        }
        data.push_back(std::move(sample));
    }
    doc["data"] = std::move(data);
    doc["schema_version"] = kSchemaVersion;
    write_document(doc, path);
}

void save_signal(const AnalyticMatrixFn& f, const std::string& path) {
    f.validate();
    json doc;
    doc["kind"] = "analytic_fn";
    doc["p"] = f.p;
    doc["q"] = f.q;
    doc["n"] = f.N;
    json data = json::array();
    for (int m = 0; m < f.N; ++m) data.push_back(matrix_to_json(f.coeffs[m]));
    doc["data"] = std::move(data);
    doc["schema_version"] = kSchemaVersion;
    write_document(doc, path);
}

void save_result(const DecompositionResult& r, const SelectionConfig& cfg,
                 const std::string& path) {
    json doc;
    doc["kind"] = "afd_result";
    doc["p"] = r.p;
    doc["q"] = r.q;
    doc["N"] = r.N;
    doc["initial_energy"] = r.initial_energy;
    doc["residual_energy"] = r.residual_energy;
    json terms = json::array();
    for (const auto& t : r.terms) {
        json jt;
        jt["w"] = complex_to_json(t.w);
        jt["P"] = matrix_to_json(t.P.matrix);
        jt["M"] = matrix_to_json(t.M);
        jt["gain"] = t.gain;
        terms.push_back(std::move(jt));
    }
    doc["terms"] = std::move(terms);
    doc["per_step_residuals"] = r.per_step_residuals;
    doc["truncation_ledger"] = r.truncation_ledger;
    doc["separability_sum"] = r.separability_sum;
    doc["config"] = config_to_json(cfg);
    doc["schema_version"] = kSchemaVersion;
    write_document(doc, path);
}

LoadedResult load_result(const std::string& path) {
    const json doc = load_document(path);
    if (!doc.contains("kind") || doc["kind"] != "afd_result")
        throw ParseError("'" + path + "': not an afd_result file");
    LoadedResult out;
    DecompositionResult& r = out.result;
    r.p = require_count(doc, "p");
    r.q = require_count(doc, "q");
    r.N = require_count(doc, "N");
    r.initial_energy = require_number(doc, "initial_energy");
    r.residual_energy = require_number(doc, "residual_energy");
    if (!doc.contains("terms") || !doc["terms"].is_array())
        throw ParseError("'" + path + "': missing terms");
    for (const json& jt : doc["terms"]) {
        DecompositionTerm t;
        if (!jt.contains("w")) throw ParseError("'" + path + "': term missing w");
        t.w = complex_from_json(jt["w"], "w");
        if (!jt.contains("P")) throw ParseError("'" + path + "': term missing P");
        t.P.matrix = matrix_from_json(jt["P"], r.p, r.p, "P");
        t.P.rank = static_cast<int>(std::lround(t.P.matrix.trace().real()));
        if (!jt.contains("M")) throw ParseError("'" + path + "': term missing M");
        t.M = matrix_from_json(jt["M"], r.p, r.q, "M");
        t.gain = require_number(jt, "gain");
        r.terms.push_back(std::move(t));
    }
    if (doc.contains("per_step_residuals"))
        r.per_step_residuals = doc["per_step_residuals"].get<std::vector<double>>();
    if (doc.contains("truncation_ledger"))
        r.truncation_ledger = doc["truncation_ledger"].get<std::vector<double>>();
    r.separability_sum = require_number(doc, "separability_sum");
    if (!doc.contains("config")) throw ParseError("'" + path + "': missing config");
    out.config = config_from_json(doc["config"]);
    return out;
}

} // namespace mafd
