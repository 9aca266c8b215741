#include "mafd/blaschke.hpp"

#include <cmath>

#include "mafd/errors.hpp"

namespace mafd {

cdouble mobius(cdouble w, cdouble z) {
    const cdouble den = 1.0 - z * std::conj(w);
    if (std::abs(den) < 1e-14) throw PoleHit("mobius: z at the pole of b_w");
    return (z - w) / den;
}

CMatrix factor_eval(const BlaschkeFactor& b, cdouble z) {
    const cdouble bw = mobius(b.w, z);
    const int p = b.P.dim();
    CMatrix out = CMatrix::identity(p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) out(i, j) += (bw - 1.0) * b.P.matrix(i, j);
    return out;
}

CMatrix factor_inverse_eval(const BlaschkeFactor& b, cdouble z) {
    const cdouble bw = mobius(b.w, z);
    if (std::abs(bw) < 1e-14) throw ZeroHit("factor_inverse_eval: z at the zero of b_w");
    const int p = b.P.dim();
    CMatrix out = CMatrix::identity(p);
    const cdouble g = 1.0 / bw - 1.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) out(i, j) += g * b.P.matrix(i, j);
    return out;
}

CMatrix normalizing_unitary(const BlaschkeFactor& b) {
    if (std::abs(b.w) < 1e-15)
        throw ZeroPointForbidden("normalizing_unitary: defined only for w != 0");
    const int p = b.P.dim();
    const cdouble g = -1.0 - std::abs(b.w) / b.w;
    CMatrix out = CMatrix::identity(p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) out(i, j) += g * b.P.matrix(i, j);
    return out;
}

CMatrix normalized_factor_eval(const BlaschkeFactor& b, cdouble z) {
    if (std::abs(b.w) < 1e-15)
        throw ZeroPointForbidden("normalized_factor_eval: defined only for w != 0");
    const cdouble den = 1.0 - z * std::conj(b.w);
    if (std::abs(den) < 1e-14) throw PoleHit("normalized_factor_eval: z at the pole");
    const cdouble g = (std::abs(b.w) / b.w) * (b.w - z) / den - 1.0;
    const int p = b.P.dim();
    CMatrix out = CMatrix::identity(p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) out(i, j) += g * b.P.matrix(i, j);
    return out;
}

CMatrix kernel_eval(const BlaschkeFactor& b, cdouble z, cdouble w) {
    const cdouble den = (1.0 - z * std::conj(b.w)) * (1.0 - b.w * std::conj(w));
    const cdouble g = (1.0 - std::norm(b.w)) / den;
    CMatrix out = b.P.matrix;
    out *= g;
    return out;
}

CMatrix chain_eval(const BlaschkeChain& chain, cdouble z) {
    if (chain.empty()) throw InvalidParams("chain_eval: empty chain has no dimension");
    CMatrix out = factor_eval(chain.front(), z);
    for (size_t u = 1; u < chain.size(); ++u) out = out * factor_eval(chain[u], z);
    return out;
}

CMatrix chain_kernel_eval(const BlaschkeChain& chain, cdouble z, cdouble w) {
    const CMatrix bz = chain_eval(chain, z);
    const CMatrix bw = chain_eval(chain, w);
    const int p = bz.rows();
    CMatrix num = CMatrix::identity(p) - bz * bw.adjoint();
    const cdouble den = 1.0 - z * std::conj(w);
    num *= 1.0 / den;
    return num;
}

AnalyticMatrixFn factor_apply(const BlaschkeFactor& b, const AnalyticMatrixFn& f, MulDiag* diag) {
    if (b.P.dim() != f.p) throw ShapeMismatch("factor_apply: factor dimension differs from p");
    const int n = f.N;
    const cdouble w = b.w;
    const cdouble wbar = std::conj(w);

    // B f = (I-P) f + P (b_w f); the convolution with b_w is done as
    // t = (P f)/(1 - z wbar) followed by s = (z - w) t, which yields the
    // exact first N coefficients of the product.
    AnalyticMatrixFn out = AnalyticMatrixFn::zero(f.p, f.q, n);
    std::vector<CMatrix> t(n);
    for (int k = 0; k < n; ++k) {
        CMatrix pf = b.P.matrix * f.coeffs[k];
        out.coeffs[k] = f.coeffs[k] - pf;
        if (k == 0) {
            t[0] = std::move(pf);
        } else {
            t[k] = std::move(pf);
            const CMatrix& prev = t[k - 1];
            for (size_t i = 0; i < t[k].size(); ++i) t[k].data()[i] += wbar * prev.data()[i];
        }
    }
    for (int k = n - 1; k >= 1; --k) {
        CMatrix& o = out.coeffs[k];
        const CMatrix& tk = t[k];
        const CMatrix& tk1 = t[k - 1];
        for (size_t i = 0; i < o.size(); ++i) o.data()[i] += tk1.data()[i] - w * tk.data()[i];
    }
    {
        CMatrix& o = out.coeffs[0];
        for (size_t i = 0; i < o.size(); ++i) o.data()[i] += -w * t[0].data()[i];
    }
    if (diag) {
        // B is inner, so the exact product has the energy of f; whatever is
        // missing was pushed past the coefficient horizon.
        const double lost = energy(f) - energy(out);
        diag->discarded_energy += std::max(0.0, lost);
    }
    return out;
}

AnalyticMatrixFn chain_apply(const BlaschkeChain& chain, const AnalyticMatrixFn& f, MulDiag* diag) {
    AnalyticMatrixFn out = f;
    for (size_t u = chain.size(); u-- > 0;) out = factor_apply(chain[u], out, diag);
    return out;
}

AnalyticMatrixFn deflate(const AnalyticMatrixFn& h, const BlaschkeFactor& b, MulDiag* diag,
                         double scale) {
    if (b.P.dim() != h.p) throw ShapeMismatch("deflate: factor dimension differs from p");
    const int n = h.N;
    const cdouble w = b.w;
    const cdouble wbar = std::conj(w);

    const double hnorm = std::max(std::sqrt(energy(h)), scale);
    const CMatrix hw = eval(h, w, 1.0);
    const CMatrix phw = b.P.matrix * hw;
    if (phw.frobenius_norm() > kDeflationTolScale * std::max(hnorm, 1e-300))
        throw PreconditionViolated("deflate: P H(w) is not negligible");

    // Split off P H and divide it by (z - w): descending synthetic division
    // (stable for |w| < 1), remainder = value of P H at w.
    std::vector<CMatrix> hp(n);
    AnalyticMatrixFn out = AnalyticMatrixFn::zero(h.p, h.q, n);
    for (int k = 0; k < n; ++k) {
        hp[k] = b.P.matrix * h.coeffs[k];
        out.coeffs[k] = h.coeffs[k] - hp[k];
    }
    std::vector<CMatrix> quot(n, CMatrix(h.p, h.q)); // degree <= n-2 used
    if (n >= 2) {
        quot[n - 2] = hp[n - 1];
        for (int k = n - 2; k >= 1; --k) {
            quot[k - 1] = hp[k];
            const CMatrix& qk = quot[k];
            for (size_t i = 0; i < quot[k - 1].size(); ++i)
                quot[k - 1].data()[i] += w * qk.data()[i];
        }
    }
    CMatrix rem = hp[0];
    if (n >= 2)
        for (size_t i = 0; i < rem.size(); ++i) rem.data()[i] += w * quot[0].data()[i];

    if (diag) {
        const double rn = rem.frobenius_norm();
        diag->remainder_leak += rn;
        diag->remainder_effect += rn * rn + 2.0 * rn * hp[0].frobenius_norm();
    }

    // Multiply the quotient by (1 - z wbar); degree stays below N.
    for (int k = 0; k < n; ++k) {
        CMatrix& o = out.coeffs[k];
        if (k <= n - 2)
            for (size_t i = 0; i < o.size(); ++i) o.data()[i] += quot[k].data()[i];
        if (k >= 1)
            for (size_t i = 0; i < o.size(); ++i) o.data()[i] -= wbar * quot[k - 1].data()[i];
    }
    return out;
}

StateSpaceBlaschke::StateSpaceBlaschke(CMatrix c, CMatrix a, CMatrix gramian, double rcond)
    : c_(std::move(c)), a_(std::move(a)), gram_(std::move(gramian)), rcond_(rcond) {
    gram_inv_ = inverse(gram_);
    const CMatrix ima = CMatrix::identity(a_.rows()) - a_.adjoint();
    right_ = gram_inv_ * solve_linear(ima, c_.adjoint());
}

CMatrix StateSpaceBlaschke::eval(cdouble z) const {
    const int n = a_.rows();
    CMatrix iza = CMatrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) iza(i, j) -= z * a_(i, j);
    const CMatrix x = solve_linear(iza, right_);
    CMatrix out = CMatrix::identity(c_.rows());
    out -= (1.0 - z) * (c_ * x);
    return out;
}

CMatrix StateSpaceBlaschke::kernel(cdouble z, cdouble w) const {
    const int n = a_.rows();
    CMatrix iza = CMatrix::identity(n);
    CMatrix iwa = CMatrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            iza(i, j) -= z * a_(i, j);
            iwa(i, j) -= std::conj(w) * std::conj(a_(j, i)); // (I - wA)^*
        }
    const CMatrix left = solve_linear(iza, CMatrix::identity(n));
    const CMatrix rightres = solve_linear(iwa, c_.adjoint());
    return c_ * left * gram_inv_ * rightres;
}

StateSpaceBlaschke beurling_lax(const CMatrix& c, const CMatrix& a) {
    SteinResult st = solve_stein(a, c);
    if (st.singular)
        throw UnobservablePair("beurling_lax: observability gramian singular beyond 1e-12");
    return StateSpaceBlaschke(c, a, st.gramian, st.rcond);
}

} // namespace mafd
