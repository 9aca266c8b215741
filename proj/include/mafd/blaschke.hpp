#pragma once

#include <vector>

#include "mafd/cmatrix.hpp"
#include "mafd/hardy.hpp"
#include "mafd/matcore.hpp"

namespace mafd {

/// Scalar Moebius factor b_w(z) = (z - w) / (1 - z conj(w)).
/// Throws PoleHit when z is numerically at the pole 1/conj(w).
cdouble mobius(cdouble w, cdouble z);

/// Matrix Blaschke factor (I - P) + P b_w(z); unitary on the circle,
/// degree = rank(P).
struct BlaschkeFactor {
    cdouble w;
    Projection P;
};

CMatrix factor_eval(const BlaschkeFactor& b, cdouble z);

/// (I - P) + P / b_w(z); throws ZeroHit when z is numerically at w.
CMatrix factor_inverse_eval(const BlaschkeFactor& b, cdouble z);

/// Constant right unitary U = I - P - (|w|/w) P relating the normalized
/// factor to the plain one. Requires w != 0 (ZeroPointForbidden).
CMatrix normalizing_unitary(const BlaschkeFactor& b);

/// Normalized variant (I - P) + P (|w|/w)(w - z)/(1 - z conj(w)), equal to
/// factor_eval(b, z) * normalizing_unitary(b). Same reproducing kernel.
CMatrix normalized_factor_eval(const BlaschkeFactor& b, cdouble z);

/// Reproducing kernel of H2 ominus B H2 in closed form:
/// (1-|w0|^2) / ((1 - z conj(w0)) (1 - w0 conj(w))) * P.
CMatrix kernel_eval(const BlaschkeFactor& b, cdouble z, cdouble w);

/// Ordered product of factors; index 0 is applied leftmost, i.e. the chain
/// evaluates to B_0(z) B_1(z) ... B_{k-1}(z).
using BlaschkeChain = std::vector<BlaschkeFactor>;

CMatrix chain_eval(const BlaschkeChain& chain, cdouble z);

/// Kernel of the full chain product via the difference quotient
/// (I - B(z)B(w)*) / (1 - z conj(w)); valid for z, w in the open disk.
CMatrix chain_kernel_eval(const BlaschkeChain& chain, cdouble z, cdouble w);

/// Per-call truncation bookkeeping for coefficient-domain products and
/// divisions. Accumulated into the decomposition ledger by callers.
struct MulDiag {
    double discarded_energy = 0.0; // energy pushed past index N by a product
    double remainder_leak = 0.0;   // Frobenius norm of the division remainder
    double remainder_effect = 0.0; // bound on the energy perturbation of dropping it
};

/// Coefficient-domain left multiplication by one factor; keeps the exact
/// first N coefficients and records what was pushed past the horizon.
AnalyticMatrixFn factor_apply(const BlaschkeFactor& b, const AnalyticMatrixFn& f,
                              MulDiag* diag = nullptr);

AnalyticMatrixFn chain_apply(const BlaschkeChain& chain, const AnalyticMatrixFn& f,
                             MulDiag* diag = nullptr);

inline constexpr double kDeflationTolScale = 1e-8;

/// Exact Blaschke deflation B^{-1} H for H with P H(w) ~= 0:
/// G = (I-P) H + P H / b_w, computed by synthetic division by (z - w)
/// followed by multiplication with (1 - z conj(w)). Energy preserving up to
/// the recorded remainder. Throws PreconditionViolated when
/// ||P H(w)||_F > 1e-8 max(||H||, scale); scale < 0 means ||H|| (callers
/// that just subtracted an atom pass the norm of the original function).
AnalyticMatrixFn deflate(const AnalyticMatrixFn& h, const BlaschkeFactor& b,
                         MulDiag* diag = nullptr, double scale = -1.0);

/// Finite Blaschke product attached to an observable stable pair (C, A):
/// B(z) = I - (1 - z) C (I - zA)^{-1} P^{-1} (I - A)^{-*} C*,
/// P the observability gramian from the Stein equation.
class StateSpaceBlaschke {
public:
    StateSpaceBlaschke(CMatrix c, CMatrix a, CMatrix gramian, double rcond);

    CMatrix eval(cdouble z) const;

    /// Left side of the kernel identity:
    /// C (I - zA)^{-1} P^{-1} (I - wA)^{-*} C*.
    CMatrix kernel(cdouble z, cdouble w) const;

    int output_dim() const { return c_.rows(); }
    int state_dim() const { return a_.rows(); }
    const CMatrix& gramian() const { return gram_; }
    double gramian_rcond() const { return rcond_; }

private:
    CMatrix c_;
    CMatrix a_;
    CMatrix gram_;
    CMatrix gram_inv_;
    CMatrix right_; // P^{-1} (I - A)^{-*} C*
    double rcond_;
};

/// Builds the evaluator; throws UnobservablePair when the gramian is
/// singular beyond 1e-12 relative, SpectralRadiusTooLarge when rho(A) >= 1.
StateSpaceBlaschke beurling_lax(const CMatrix& c, const CMatrix& a);

} // namespace mafd
