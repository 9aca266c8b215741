#pragma once

#include <vector>

#include "mafd/cmatrix.hpp"

namespace mafd {

struct EigResult {
    std::vector<double> values; // descending
    CMatrix vectors;            // orthonormal columns, vectors.col(i) <-> values[i]
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
/// The sweep order is fixed (row-major over the strict upper triangle), so
/// results are reproducible; equal eigenvalues keep the order the sweep
/// produced. Throws NonHermitianInput if ||Q - Q*||_F > 1e-10 * max(1, ||Q||_F).
EigResult herm_eig(const CMatrix& q);

/// Eigenvalues only (descending), same rotations as herm_eig and therefore
/// bit-identical values. Used by the selection sweep.
std::vector<double> herm_eigvalues(const CMatrix& q);

/// Hermitian idempotent of known rank.
struct Projection {
    int rank = 0;
    CMatrix matrix;

    int dim() const { return matrix.rows(); }

    /// Enforces the defining tolerances: Hermitian and idempotent within
    /// 1e-12, trace within 1e-10 of rank. Throws InvalidParams otherwise.
    void validate() const;

    /// Builds V V* from orthonormal columns (symmetrized).
    static Projection from_columns(const CMatrix& v);

    static Projection zero(int dim) { return Projection{0, CMatrix(dim, dim)}; }
    static Projection full(int dim) { return Projection{dim, CMatrix::identity(dim)}; }
};

/// Rank-k spectral projection onto the top-k eigenvectors of Hermitian Q.
/// Maximizes Tr(P Q) over rank-k orthogonal projections; among equal
/// eigenvalues the lowest-index eigenvectors win, so the result is
/// deterministic (the attained trace is invariant to the choice either way).
Projection top_k_projection(const CMatrix& q, int k);

/// Power-iteration estimate of the spectral radius. Exact enough to gate the
/// Stein solver; not a general-purpose eigenvalue routine.
double spectral_radius_estimate(const CMatrix& a);

struct SteinResult {
    CMatrix gramian;    // Hermitian PSD solution P of P - A*PA = C*C
    double rcond = 0.0; // lambda_min / lambda_max of the gramian
    bool singular = false;
};

/// Solves the discrete Stein equation P - A*PA = C*C by a direct linear
/// solve on the vectorized system. Requires rho(A) < 1 - 1e-6
/// (SpectralRadiusTooLarge otherwise). A numerically singular gramian is
/// flagged, not fatal.
SteinResult solve_stein(const CMatrix& a, const CMatrix& c);

/// Series oracle sum_{u>=0} A^{*u} C*C A^u, truncated when the term norm
/// falls below tol relative to the partial sum. Test/verification use.
CMatrix stein_series_oracle(const CMatrix& a, const CMatrix& c, double tol = 1e-16,
                            int max_terms = 100000);

} // namespace mafd
