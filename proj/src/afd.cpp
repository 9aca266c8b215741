#include "mafd/afd.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "mafd/errors.hpp"
#include "mafd/fft.hpp"

namespace mafd {

int SelectionConfig::rank_at(int step) const {
    if (rank_schedule.empty()) return 1;
    const int idx = std::min<int>(step, static_cast<int>(rank_schedule.size()) - 1);
    return rank_schedule[idx];
}

void SelectionConfig::validate() const {
    if (!(r_max > 0.0 && r_max < 1.0)) throw InvalidParams("SelectionConfig: r_max must be in (0,1)");
    if (n_radii < 2 || n_angles < 2) throw InvalidParams("SelectionConfig: grid sizes must be >= 2");
    if (refine_iters < 0) throw InvalidParams("SelectionConfig: refine_iters must be >= 0");
    if (!(refine_shrink > 0.0 && refine_shrink < 1.0))
        throw InvalidParams("SelectionConfig: refine_shrink must be in (0,1)");
    if (!(stop_rel_energy > 0.0)) throw InvalidParams("SelectionConfig: stop_rel_energy must be positive");
    if (max_terms < 1) throw InvalidParams("SelectionConfig: max_terms must be >= 1");
    if (!(min_gain > 0.0)) throw InvalidParams("SelectionConfig: min_gain must be positive");
    if (threads < 1) throw InvalidParams("SelectionConfig: threads must be >= 1");
    for (int k : rank_schedule)
        if (k < 1) throw InvalidParams("SelectionConfig: ranks must be >= 1");
}

namespace {

double topk_sum(const std::vector<double>& vals, int k) {
    double s = 0.0;
    for (int i = 0; i < k && i < static_cast<int>(vals.size()); ++i) s += vals[i];
    return s;
}

constexpr int kSweepDimCap = 16;

// Allocation-free objective evaluation for the selection sweep. Works on the
// smaller Gram square of G (same nonzero spectrum as G G*) with the same
// Jacobi rotations as herm_eig; for 1x1 inputs the value is bit-identical to
// the full objective path.
double sweep_objective(const CMatrix& g, cdouble w, int k) {
    const int p = g.rows();
    const int q = g.cols();
    const int m = std::min(p, q);
    if (m > kSweepDimCap) {
        const CMatrix full = g * g.adjoint();
        return (1.0 - std::norm(w)) * topk_sum(herm_eigvalues(full), k);
    }

    cdouble a[kSweepDimCap * kSweepDimCap];
    if (q <= p) {
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) {
                cdouble s = 0.0;
                for (int l = 0; l < p; ++l) s += std::conj(g(l, i)) * g(l, j);
                a[i * m + j] = s;
            }
    } else {
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                cdouble s = 0.0;
                for (int l = 0; l < q; ++l) s += g(i, l) * std::conj(g(j, l));
                a[i * m + j] = s;
            }
    }

    double norm2 = 0.0;
    for (int i = 0; i < m * m; ++i) norm2 += std::norm(a[i]);
    const double stop = 1e-15 * std::max(std::sqrt(norm2), 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (i != j) off += std::norm(a[i * m + j]);
        if (std::sqrt(off) <= stop) break;
        for (int pp = 0; pp < m - 1; ++pp) {
            for (int rr = pp + 1; rr < m; ++rr) {
                const cdouble mm = a[pp * m + rr];
                const double mu = std::abs(mm);
                if (mu < 1e-300) continue;
                const cdouble phase = mm / mu;
                const double app = a[pp * m + pp].real();
                const double arr = a[rr * m + rr].real();
                const double tau = (arr - app) / (2.0 * mu);
                const double sgn = tau >= 0.0 ? 1.0 : -1.0;
                const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cdouble s = phase * (t * c);
                for (int j = 0; j < m; ++j) {
                    const cdouble x = a[j * m + pp];
                    const cdouble y = a[j * m + rr];
                    a[j * m + pp] = c * x - std::conj(s) * y;
                    a[j * m + rr] = s * x + c * y;
                }
                for (int j = 0; j < m; ++j) {
                    const cdouble x = a[pp * m + j];
                    const cdouble y = a[rr * m + j];
                    a[pp * m + j] = c * x - s * y;
                    a[rr * m + j] = std::conj(s) * x + c * y;
                }
                a[pp * m + rr] = 0.0;
                a[rr * m + pp] = 0.0;
                a[pp * m + pp] = a[pp * m + pp].real();
                a[rr * m + rr] = a[rr * m + rr].real();
            }
        }
    }

    double vals[kSweepDimCap];
    for (int i = 0; i < m; ++i) vals[i] = a[i * m + i].real();
    std::stable_sort(vals, vals + m, std::greater<double>());
    double sum = 0.0;
    for (int i = 0; i < k && i < m; ++i) sum += vals[i];
    return (1.0 - std::norm(w)) * sum;
}

std::vector<double> chebyshev_radii(const SelectionConfig& cfg) {
    std::vector<double> radii(cfg.n_radii);
    for (int j = 0; j < cfg.n_radii; ++j)
        radii[j] = cfg.r_max * 0.5 * (1.0 - std::cos(M_PI * (j + 1) / cfg.n_radii));
    return radii;
}

} // namespace

Objective objective(const AnalyticMatrixFn& f, cdouble w, int k, double r_max) {
    if (k < 1 || k > f.p) throw RankOutOfRange("objective: rank must be in [1, p]");
    const CMatrix g = eval(f, w, r_max);
    const CMatrix q = g * g.adjoint();
    const EigResult eig = herm_eig(q);
    Objective out;
    out.value = (1.0 - std::norm(w)) * topk_sum(eig.values, k);
    CMatrix cols(f.p, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < f.p; ++i) cols(i, j) = eig.vectors(i, j);
    out.P = Projection::from_columns(cols);
    return out;
}

namespace {

// Objective on the full coarse grid, row index = radius, column = angle.
// Uses a folded FFT along each circle when the angle count is a power of
// two; plain Horner otherwise. Values do not depend on the thread count.
std::vector<double> coarse_grid_values(const AnalyticMatrixFn& f, int k,
                                       const SelectionConfig& cfg,
                                       const std::vector<double>& radii) {
    const int nr = cfg.n_radii;
    const int na = cfg.n_angles;
    std::vector<double> values(static_cast<size_t>(nr) * na);

    auto run_rows = [&](int lo, int hi) {
        for (int j = lo; j < hi; ++j) {
            const double r = radii[j];
            if (is_power_of_two(na)) {
                const std::vector<CMatrix> ring = circle_samples(f, r, na);
                for (int a = 0; a < na; ++a) {
                    const cdouble w = std::polar(r, 2.0 * M_PI * a / na);
                    values[static_cast<size_t>(j) * na + a] = sweep_objective(ring[a], w, k);
                }
            } else {
                for (int a = 0; a < na; ++a) {
                    const cdouble w = std::polar(r, 2.0 * M_PI * a / na);
                    values[static_cast<size_t>(j) * na + a] =
                        sweep_objective(eval(f, w, cfg.r_max), w, k);
                }
            }
        }
    };

    const int nthreads = std::min(cfg.threads, nr);
    if (nthreads <= 1) {
        run_rows(0, nr);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (nr + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(nr, lo + chunk);
            if (lo < hi) pool.emplace_back(run_rows, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return values;
}

} // namespace

Selection max_selection(const AnalyticMatrixFn& f, int k, const SelectionConfig& cfg) {
    cfg.validate();
    if (k < 1 || k > f.p) throw RankOutOfRange("max_selection: rank must be in [1, p]");
    if (energy(f) <= cfg.min_gain) throw ZeroFunction("max_selection: no energy to select");

    const std::vector<double> radii = chebyshev_radii(cfg);

    // Coarse stage. w = 0 is scanned first, then radius-major / angle-minor;
    // strict improvement keeps the earliest point, which is the documented
    // tie-break (smallest radius, then smallest angle index).
    double best_val = sweep_objective(eval(f, cdouble(0.0, 0.0), cfg.r_max), cdouble(0.0, 0.0), k);
    double best_r = 0.0;
    double best_th = 0.0;

    const std::vector<double> grid = coarse_grid_values(f, k, cfg, radii);
    for (int j = 0; j < cfg.n_radii; ++j) {
        for (int a = 0; a < cfg.n_angles; ++a) {
            const double v = grid[static_cast<size_t>(j) * cfg.n_angles + a];
            if (v > best_val) {
                best_val = v;
                best_r = radii[j];
                best_th = 2.0 * M_PI * a / cfg.n_angles;
            }
        }
    }

    // Local refinement: per round, pattern search on a 3x3 polar stencil at
    // fixed spacing until no neighbor improves, then shrink the spacing.
    auto eval_at = [&](double r, double th) {
        const cdouble w = std::polar(r, th);
        return sweep_objective(eval(f, w, cfg.r_max), w, k);
    };
    best_val = eval_at(best_r, best_th); // rebase on the refinement evaluator
    double dr = cfg.r_max / cfg.n_radii;
    double dth = 2.0 * M_PI / cfg.n_angles;
    for (int round = 0; round < cfg.refine_iters; ++round) {
        dr *= cfg.refine_shrink;
        dth *= cfg.refine_shrink;
        for (int move = 0; move < 32; ++move) {
            double cand_val = best_val;
            double cand_r = best_r;
            double cand_th = best_th;
            for (int a = -1; a <= 1; ++a) {
                for (int b = -1; b <= 1; ++b) {
                    if (a == 0 && b == 0) continue;
                    const double rr = std::clamp(best_r + a * dr, 0.0, cfg.r_max);
                    const double tt = best_th + b * dth;
                    const double v = eval_at(rr, tt);
                    if (v > cand_val) {
                        cand_val = v;
                        cand_r = rr;
                        cand_th = tt;
                    }
                }
            }
            if (cand_r == best_r && cand_th == best_th) break;
            best_r = cand_r;
            best_th = cand_th;
            best_val = cand_val;
        }
    }

    const cdouble w = std::polar(best_r, best_th);
    Objective obj = objective(f, w, k, cfg.r_max);
    return Selection{w, obj.P, obj.value};
}

SplitResult split(const AnalyticMatrixFn& f, cdouble w, const Projection& p) {
    if (p.dim() != f.p) throw ShapeMismatch("split: projection dimension differs from p");
    const CMatrix fw = eval(f, w, 1.0);
    CMatrix m = p.matrix * fw;

    SplitResult out;
    out.atom = AnalyticMatrixFn::zero(f.p, f.q, f.N);
    const double c = 1.0 - std::norm(w);
    cdouble pw = 1.0;
    for (int n = 0; n < f.N; ++n) {
        CMatrix& coeff = out.atom.coeffs[n];
        const cdouble s = c * pw;
        for (size_t i = 0; i < m.size(); ++i) coeff.data()[i] = s * m.data()[i];
        pw *= std::conj(w);
    }
    out.remainder = sub(f, out.atom);
    out.M = std::move(m);
    return out;
}

StepResult step(const AnalyticMatrixFn& f, int step_index, const SelectionConfig& cfg) {
    const Selection sel = max_selection(f, cfg.rank_at(step_index), cfg);
    SplitResult sp = split(f, sel.w, sel.P);

    const BlaschkeFactor factor{sel.w, sel.P};
    MulDiag diag;
    AnalyticMatrixFn next = deflate(sp.remainder, factor, &diag, std::sqrt(energy(f)));

    StepResult out;
    out.term.w = sel.w;
    out.term.P = sel.P;
    out.term.M = std::move(sp.M);
    double msq = 0.0;
    for (size_t i = 0; i < out.term.M.size(); ++i) msq += std::norm(out.term.M.data()[i]);
    out.term.gain = (1.0 - std::norm(sel.w)) * msq;
    const double tail = std::abs(sel.w) > 0.0
                            ? out.term.gain * std::pow(std::abs(sel.w), 2.0 * f.N)
                            : 0.0;
    out.ledger_entry = diag.remainder_effect + diag.discarded_energy + tail;
    out.next = std::move(next);
    return out;
}

DecompositionResult decompose(const AnalyticMatrixFn& f, const SelectionConfig& cfg) {
    cfg.validate();
    f.validate();
    const double e0 = energy(f);
    if (!(e0 > 0.0)) throw ZeroFunction("decompose: input has no energy");

    DecompositionResult res;
    res.p = f.p;
    res.q = f.q;
    res.N = f.N;
    res.initial_energy = e0;

    AnalyticMatrixFn fk = f;
    double residual = e0;
    int k = 0;
    while (static_cast<int>(res.terms.size()) < cfg.max_terms &&
           residual > cfg.stop_rel_energy * e0) {
        StepResult st;
        try {
            st = step(fk, k, cfg);
        } catch (const ZeroFunction&) {
            break; // exact termination: no projection extracts anything
        }
        if (st.term.gain <= cfg.min_gain * e0) break;
        fk = std::move(st.next);
        residual = energy(fk);
        res.separability_sum += 1.0 - std::abs(st.term.w);
        res.per_step_residuals.push_back(residual);
        res.truncation_ledger.push_back(st.ledger_entry);
        res.terms.push_back(std::move(st.term));
        ++k;
    }
    res.residual_energy = residual;
    return res;
}

namespace {

AnalyticMatrixFn atom_function(const DecompositionTerm& t, int p, int q, int n) {
    AnalyticMatrixFn atom = AnalyticMatrixFn::zero(p, q, n);
    const double c = 1.0 - std::norm(t.w);
    cdouble pw = 1.0;
    for (int m = 0; m < n; ++m) {
        CMatrix& coeff = atom.coeffs[m];
        const cdouble s = c * pw;
        for (size_t i = 0; i < t.M.size(); ++i) coeff.data()[i] = s * t.M.data()[i];
        pw *= std::conj(t.w);
    }
    return atom;
}

} // namespace

AnalyticMatrixFn term_function(const DecompositionResult& r, int k, int n) {
    if (k < 0 || k >= static_cast<int>(r.terms.size()))
        throw InvalidParams("term_function: index out of range");
    AnalyticMatrixFn out = atom_function(r.terms[k], r.p, r.q, n);
    for (int u = k - 1; u >= 0; --u)
        out = factor_apply(BlaschkeFactor{r.terms[u].w, r.terms[u].P}, out);
    return out;
}

AnalyticMatrixFn reconstruct(const DecompositionResult& r, int n) {
    if (r.p < 1 || r.q < 1) throw ShapeMismatch("reconstruct: result has no shape");
    // Horner over the factor chain:
    // sum_k B_0..B_{k-1} atom_k = atom_0 + B_0 (atom_1 + B_1 (...)).
    const int count = static_cast<int>(r.terms.size());
    AnalyticMatrixFn acc = AnalyticMatrixFn::zero(r.p, r.q, n);
    for (int k = count - 1; k >= 0; --k) {
        if (k < count - 1)
            acc = factor_apply(BlaschkeFactor{r.terms[k].w, r.terms[k].P}, acc);
        AnalyticMatrixFn atom = atom_function(r.terms[k], r.p, r.q, n);
        for (int m = 0; m < n; ++m) acc.coeffs[m] += atom.coeffs[m];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Scalar oracle. A standalone implementation on plain coefficient vectors;
// shares only the FFT primitive with the matrix engine.
// ---------------------------------------------------------------------------

namespace {

double vec_energy(const std::vector<cdouble>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return s;
}

cdouble vec_horner(const std::vector<cdouble>& v, cdouble w) {
    cdouble acc = v.back();
    for (int n = static_cast<int>(v.size()) - 2; n >= 0; --n) acc = v[n] + w * acc;
    return acc;
}

cdouble vec_inner(const std::vector<cdouble>& f, const std::vector<cdouble>& g) {
    // <f, g> = sum conj(g_n) f_n
    cdouble s = 0.0;
    for (size_t n = 0; n < f.size(); ++n) s += std::conj(g[n]) * f[n];
    return s;
}

// f / (1 - z conj(a)), truncated to the input length.
std::vector<cdouble> vec_mul_inv_cauchy(const std::vector<cdouble>& f, cdouble a) {
    std::vector<cdouble> t(f.size());
    const cdouble abar = std::conj(a);
    t[0] = f[0];
    for (size_t n = 1; n < f.size(); ++n) t[n] = f[n] + abar * t[n - 1];
    return t;
}

std::vector<cdouble> vec_mul_szego(const std::vector<cdouble>& f, cdouble a) {
    std::vector<cdouble> t = vec_mul_inv_cauchy(f, a);
    const double s = std::sqrt(1.0 - std::norm(a));
    for (auto& x : t) x *= s;
    return t;
}

std::vector<cdouble> vec_mul_blaschke(const std::vector<cdouble>& f, cdouble a) {
    const std::vector<cdouble> t = vec_mul_inv_cauchy(f, a);
    std::vector<cdouble> s(f.size());
    s[0] = -a * t[0];
    for (size_t n = 1; n < f.size(); ++n) s[n] = t[n - 1] - a * t[n];
    return s;
}

// (f with f(a) ~ 0) / b_a via synthetic division by (z - a) followed by
// multiplication with (1 - z conj(a)); returns the dropped remainder.
std::vector<cdouble> vec_div_blaschke(const std::vector<cdouble>& f, cdouble a, cdouble* rem_out) {
    const int n = static_cast<int>(f.size());
    std::vector<cdouble> quot(n, cdouble(0.0, 0.0));
    if (n >= 2) {
        quot[n - 2] = f[n - 1];
        for (int k = n - 2; k >= 1; --k) quot[k - 1] = f[k] + a * quot[k];
    }
    cdouble rem = f[0];
    if (n >= 2) rem += a * quot[0];
    if (rem_out) *rem_out = rem;

    const cdouble abar = std::conj(a);
    std::vector<cdouble> out(n, cdouble(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        if (k <= n - 2) out[k] += quot[k];
        if (k >= 1) out[k] -= abar * quot[k - 1];
    }
    return out;
}

// Mirror of max_selection for the scalar objective (1-|w|^2)|f(w)|^2. The
// grid, scan order and refinement match the matrix engine so that both paths
// select the same points on scalar inputs.
cdouble scalar_select(const std::vector<cdouble>& f, const SelectionConfig& cfg) {
    auto value_at = [&](cdouble w) { return (1.0 - std::norm(w)) * std::norm(vec_horner(f, w)); };

    double best_val = value_at(cdouble(0.0, 0.0));
    double best_r = 0.0;
    double best_th = 0.0;

    const int n = static_cast<int>(f.size());
    const int na = cfg.n_angles;
    for (int j = 0; j < cfg.n_radii; ++j) {
        const double r = cfg.r_max * 0.5 * (1.0 - std::cos(M_PI * (j + 1) / cfg.n_radii));
        if (is_power_of_two(na)) {
            std::vector<cdouble> buf(na, cdouble(0.0, 0.0));
            double pw = 1.0;
            for (int m = 0; m < n; ++m) {
                buf[m & (na - 1)] += f[m] * pw;
                pw *= r;
            }
            fft_radix2(buf, true);
            for (int a = 0; a < na; ++a) {
                const cdouble w = std::polar(r, 2.0 * M_PI * a / na);
                const double v = (1.0 - std::norm(w)) * std::norm(buf[a]);
                if (v > best_val) {
                    best_val = v;
                    best_r = r;
                    best_th = 2.0 * M_PI * a / na;
                }
            }
        } else {
            for (int a = 0; a < na; ++a) {
                const cdouble w = std::polar(r, 2.0 * M_PI * a / na);
                const double v = value_at(w);
                if (v > best_val) {
                    best_val = v;
                    best_r = r;
                    best_th = 2.0 * M_PI * a / na;
                }
            }
        }
    }

    best_val = value_at(std::polar(best_r, best_th));
    double dr = cfg.r_max / cfg.n_radii;
    double dth = 2.0 * M_PI / cfg.n_angles;
    for (int round = 0; round < cfg.refine_iters; ++round) {
        dr *= cfg.refine_shrink;
        dth *= cfg.refine_shrink;
        for (int move = 0; move < 32; ++move) {
            double cand_val = best_val;
            double cand_r = best_r;
            double cand_th = best_th;
            for (int a = -1; a <= 1; ++a) {
                for (int b = -1; b <= 1; ++b) {
                    if (a == 0 && b == 0) continue;
                    const double rr = std::clamp(best_r + a * dr, 0.0, cfg.r_max);
                    const double tt = best_th + b * dth;
                    const double v = value_at(std::polar(rr, tt));
                    if (v > cand_val) {
                        cand_val = v;
                        cand_r = rr;
                        cand_th = tt;
                    }
                }
            }
            if (cand_r == best_r && cand_th == best_th) break;
            best_r = cand_r;
            best_th = cand_th;
            best_val = cand_val;
        }
    }
    return std::polar(best_r, best_th);
}

} // namespace

DecompositionResult scalar_afd(const AnalyticMatrixFn& f0, const SelectionConfig& cfg,
                               std::vector<ScalarStepTrace>* trace) {
    cfg.validate();
    f0.validate();
    if (f0.p != 1 || f0.q != 1) throw ShapeMismatch("scalar_afd: requires p = q = 1");
    const int n = f0.N;

    std::vector<cdouble> f(n), forig(n), g(n), prod(n, cdouble(0.0, 0.0));
    for (int m = 0; m < n; ++m) f[m] = forig[m] = g[m] = f0.coeffs[m](0, 0);
    prod[0] = 1.0;

    const double e0 = vec_energy(f);
    if (!(e0 > 0.0)) throw ZeroFunction("scalar_afd: input has no energy");

    DecompositionResult res;
    res.p = 1;
    res.q = 1;
    res.N = n;
    res.initial_energy = e0;

    double residual = e0;
    while (static_cast<int>(res.terms.size()) < cfg.max_terms &&
           residual > cfg.stop_rel_energy * e0) {
        if (vec_energy(f) <= cfg.min_gain) break;
        const cdouble a = scalar_select(f, cfg);
        const cdouble fa = vec_horner(f, a);
        const double gain = (1.0 - std::norm(a)) * std::norm(fa);
        if (gain <= cfg.min_gain * e0) break;

        const double sq = std::sqrt(1.0 - std::norm(a));
        const cdouble c1 = sq * fa; // <f_k, e_a>

        // Takenaka-Malmquist function for this step and the two other
        // coefficient forms of the same expansion weight.
        const std::vector<cdouble> bk = vec_mul_szego(prod, a);
        const cdouble c2 = vec_inner(g, bk);
        const cdouble c3 = vec_inner(forig, bk);
        const double defect = std::max({std::abs(c1 - c2), std::abs(c1 - c3), std::abs(c2 - c3)});
        if (defect > 1e-8 * std::max(1.0, std::sqrt(e0)))
            throw Error("scalar_afd: expansion-coefficient identity violated");

        for (int m = 0; m < n; ++m) g[m] -= c3 * bk[m];

        std::vector<cdouble> h = f;
        cdouble apw = 1.0;
        for (int m = 0; m < n; ++m) {
            h[m] -= c1 * (sq * apw);
            apw *= std::conj(a);
        }
        cdouble rem;
        f = vec_div_blaschke(h, a, &rem);
        prod = vec_mul_blaschke(prod, a);

        residual = vec_energy(f);

        DecompositionTerm term;
        term.w = a;
        term.P = Projection::full(1);
        term.M = CMatrix(1, 1);
        term.M(0, 0) = fa;
        term.gain = gain;

        const double tail = std::abs(a) > 0.0 ? gain * std::pow(std::abs(a), 2.0 * n) : 0.0;
        const double rn = std::abs(rem);
        res.truncation_ledger.push_back(tail + rn * rn + 2.0 * rn * std::abs(h[0]));
        res.per_step_residuals.push_back(residual);
        res.separability_sum += 1.0 - std::abs(a);
        res.terms.push_back(std::move(term));
        if (trace) trace->push_back(ScalarStepTrace{a, c1, residual, defect});
    }
    res.residual_energy = residual;
    return res;
}

} // namespace mafd
