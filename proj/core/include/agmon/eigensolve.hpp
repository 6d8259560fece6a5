#pragma once

#include <cstdint>
#include <vector>

#include "agmon/assemble.hpp"

namespace agmon {

struct EigenPair {
    double lambda = 0.0;
    CVector vector;          ///< unit 2-norm
    double residual = 0.0;   ///< ||A u - lambda u|| / ||u||
};

struct GapQuery {
    double lo = 0.0;
    double hi = 0.0;
    int max_pairs = 64;      ///< the lowest max_pairs eigenvalues of the window are returned
    double tol = 1e-8;       ///< residual bound
    std::uint64_t seed = 0;  ///< start block and shift perturbations
    int max_iterations = 500;
};

struct DenseEigen {
    RVector values;     ///< ascending
    CMatrix vectors;    ///< orthonormal columns; empty if not requested
};

/// All eigenpairs of a Hermitian matrix; throws NotHermitian if ||M - M^*|| > 1e-10 ||M||.
DenseEigen dense_hermitian_eig(const CMatrix& m, bool compute_vectors = true);

/// Number of eigenvalues of A strictly below sigma (Sylvester inertia of an LDL^* factorization).
/// Throws FactorizationSingular when sigma is numerically an eigenvalue.
std::size_t count_below(const SparseMatrix& a, double sigma);

/// Eigenpairs of a Hermitian sparse operator inside (q.lo, q.hi), ascending.
/// Throws NoEigenvalueInWindow, FactorizationSingular, ConvergenceFailure, NotHermitian.
std::vector<EigenPair> gap_eigenpairs(const SparseMatrix& a, const GapQuery& q);
std::vector<EigenPair> gap_eigenpairs(const AssembledOperator& a, const GapQuery& q);

/// Inverse iteration at the fixed shift p.lambda. Recovers the exponentially small tail of a
/// localized eigenvector down to the underflow range, which the block iteration leaves at roundoff.
EigenPair refine_eigenvector(const SparseMatrix& a, const EigenPair& p, int steps = 2);

/// ||A u - lambda u|| / ||u|| by a fresh matvec.
double residual_norm(const SparseMatrix& a, const CVector& u, double lambda);

}  // namespace agmon
