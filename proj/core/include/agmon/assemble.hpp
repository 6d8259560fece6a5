#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "agmon/clifford.hpp"
#include "agmon/fields.hpp"
#include "agmon/spectra.hpp"

namespace agmon {

/// Uniform tensor grid on [-L, L]^n with x_i = -L + i * h.
struct Grid {
    int dim = 1;
    double half_width = 1.0;
    int points_per_axis = 8;
    int block = 1;

    double spacing() const { return 2.0 * half_width / (points_per_axis - 1); }
    std::size_t nodes() const;
    std::size_t unknowns() const { return nodes() * static_cast<std::size_t>(block); }
    /// Throws InvalidArgument unless 1 <= n <= 3, points >= 8, L > 0, block >= 1.
    void validate() const;

    Point point(std::size_t node) const;
    /// Multi-index of a node, axis 0 fastest.
    std::array<int, 3> index(std::size_t node) const;
};

enum class Family { Schrodinger, MoisilTheodorescu, Dirac };
std::string to_string(Family f);

struct AssembledOperator {
    SparseMatrix matrix;
    Grid grid;
    bool hermitian = false;
    Family family = Family::Schrodinger;
    bool periodic = false;

    Eigen::Index rows() const { return matrix.rows(); }
    /// max |A - A^*| over entries.
    double hermiticity_defect() const;
    /// Largest number of stored entries in a row.
    int max_row_nonzeros() const;
    /// One "row col re im" line per stored entry, 0-based, row-major order.
    void write_coo(std::ostream& os) const;
};

struct AssemblyOptions {
    bool periodic = false;            ///< wrap neighbours instead of Dirichlet truncation
    unsigned threads = 1;
    double coarseness_limit = 1.0;    ///< GridTooCoarse threshold (Schrodinger)
};

/// H = (i d_j - a_j) rho^{jk} (i d_k - a_k) E + Phi, Dirichlet on the box.
/// Diagonal terms use forward covariant differences with midpoint rho and
/// Peierls phases; mixed terms use centred covariant differences.
AssembledOperator assemble_schrodinger(const MetricField& rho, const VectorField& a, const MatrixField& phi, const Grid& grid,
                                       const AssemblyOptions& opt = {});

/// sum_j a_j D_j e_j + M^phi with D_j discretized by centred differences.
AssembledOperator assemble_mt(const VectorField& a, const std::function<Quaternion(const Point&)>& phi, const Grid& grid,
                              const AssemblyOptions& opt = {});

/// (c/2) gamma_k (phi^{jk} P_j + P_j phi^{jk}) + gamma_0 c^2 m - e Phi, P_j = (h/i) d_j + (e/c) A_j.
/// Works for n <= 3 using gamma_1..gamma_n.
AssembledOperator assemble_dirac(const MetricField& rho, const VectorField& A, const ScalarField& phi, const PhysicalConstants& k,
                                 const DiracBasis& basis, const Grid& grid, const AssemblyOptions& opt = {});

/// Discrete momentum sin(xi h) / h and second-difference symbol (2 - 2 cos(xi h)) / h^2.
inline double discrete_momentum(double xi, double h) { return std::sin(xi * h) / h; }
inline double discrete_laplace_symbol(double xi, double h) { return (2.0 - 2.0 * std::cos(xi * h)) / (h * h); }

}  // namespace agmon
