#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agmon/clifford.hpp"
#include "agmon/common.hpp"

namespace agmon {

/// Regularity class of a coefficient: bounded uniformly continuous, slowly
/// oscillating, or slowly oscillating with vanishing first derivatives.
enum class FieldClass { Cbu, SO, SO1 };

/// Closed range [lo, hi] of the partial limits of a real scalar at infinity.
struct LimitRange {
    double lo = 0.0;
    double hi = 0.0;
    bool is_point() const { return lo == hi; }
};

class ScalarField {
public:
    using Fn = std::function<cplx(const Point&)>;

    ScalarField() = default;
    ScalarField(int dim, Fn fn, FieldClass cls = FieldClass::SO1, std::optional<LimitRange> limits = std::nullopt)
        : dim_(dim), fn_(std::move(fn)), class_(cls), limits_(limits) {}

    static ScalarField constant(int dim, cplx value);

    cplx operator()(const Point& x) const { return fn_(x); }
    double real(const Point& x) const { return fn_(x).real(); }
    int dim() const { return dim_; }
    FieldClass field_class() const { return class_; }
    /// Declared partial-limit range, when the family knows it.
    const std::optional<LimitRange>& declared_limits() const { return limits_; }

    /// radii R, 2R, 4R must shrink by at least 10% per doubling (up to tol). Returns the per-radius maxima.
    /// radii R, 2R, 4R must not increase beyond tol. Returns the per-radius maxima.
    std::vector<double> derivative_decay_profile(double base_radius, int sphere_samples) const;
    bool check_slow_oscillation(double base_radius = 16.0, int sphere_samples = 0, double tol = 1e-9) const;

private:
    int dim_ = 1;
    Fn fn_;
    FieldClass class_ = FieldClass::SO1;
    std::optional<LimitRange> limits_;
};

/// N x N matrix potential Phi(x).
class MatrixField {
public:
    using Fn = std::function<CMatrix(const Point&)>;

    MatrixField() = default;
    MatrixField(int dim, int block, Fn fn, bool hermitian) : dim_(dim), block_(block), fn_(std::move(fn)), hermitian_(hermitian) {}

    static MatrixField constant(int dim, const CMatrix& value);
    static MatrixField diagonal(std::vector<ScalarField> entries);
    static MatrixField scalar_times_identity(const ScalarField& s, int block);

    CMatrix operator()(const Point& x) const { return fn_(x); }
    int dim() const { return dim_; }
    int block() const { return block_; }
    bool hermitian() const { return hermitian_; }

    /// max ||Phi(x) - Phi(x)^*|| over the given points.
    double hermiticity_defect(const std::vector<Point>& samples) const;

private:
    int dim_ = 1;
    int block_ = 1;
    Fn fn_;
    bool hermitian_ = true;
};

/// Inverse metric rho^{jk}(x), real symmetric n x n.
class MetricField {
public:
    using Fn = std::function<RMatrix(const Point&)>;

    MetricField() = default;
    MetricField(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

    static MetricField identity(int dim);
    static MetricField constant(const RMatrix& rho);
    static MetricField scalar(const ScalarField& s);

    RMatrix operator()(const Point& x) const { return fn_(x); }
    int dim() const { return dim_; }

    /// Smallest eigenvalue of rho over the sample points (the positivity constant).
    double min_eigenvalue(const std::vector<Point>& samples) const;

private:
    int dim_ = 1;
    Fn fn_;
};

/// Real vector potential a(x) in R^n.
class VectorField {
public:
    using Fn = std::function<RVector(const Point&)>;

    VectorField() = default;
    VectorField(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

    static VectorField zero(int dim);
    static VectorField from_components(std::vector<ScalarField> comps);

    RVector operator()(const Point& x) const { return fn_(x); }
    int dim() const { return dim_; }

private:
    int dim_ = 1;
    Fn fn_;
};

/// Constant-coefficient data of one limit operator.
struct LimitPoint {
    RVector magnetic;                        ///< a^g (Schrodinger) or A^g (Dirac)
    RMatrix rho;                             ///< rho_g, SPD
    CMatrix potential;                       ///< Phi^g; 1x1 for the Dirac scalar potential
    std::optional<Quaternion> quaternion;    ///< phi^g for Moisil-Theodorescu operators
    RVector principal;                       ///< a_j^g of Moisil-Theodorescu operators
    RVector grad_v;                          ///< (grad v)^g; empty when no weight is attached
    std::string label;

    int dim() const { return static_cast<int>(rho.rows()); }
    double scalar_potential() const { return potential(0, 0).real(); }
};

enum class Provenance { Declared, RaySampled };

struct LimitSet {
    std::vector<LimitPoint> points;
    Provenance provenance = Provenance::Declared;

    /// Checks non-emptiness, SPD of every rho_g and, when requested, Hermitian Phi_g.
    void validate(bool require_hermitian) const;
    std::size_t size() const { return points.size(); }
};

/// A one-parameter family of limit points Phi = base + s * direction, s in [lo, hi];
/// the representation of an interval of partial limits.
struct LimitFamily {
    LimitPoint base;
    CMatrix direction;
    double lo = 0.0;
    double hi = 0.0;

    /// Discretizes the family with `samples` equispaced parameters (endpoints included).
    std::vector<LimitPoint> discretize(int samples = 33) const;
};

/// The coefficient bundle sampled along rays. Any member may be left empty.
struct CoefficientBundle {
    std::optional<VectorField> magnetic;
    std::optional<MetricField> rho;
    std::optional<MatrixField> potential;
    std::optional<VectorField> principal;          ///< MT a_j(x)
    std::function<Quaternion(const Point&)> quaternion; ///< MT phi(x)
    std::function<RVector(const Point&)> grad_v;   ///< weight gradient
};

struct RaySample {
    RVector direction;
    double defect = 0.0;   ///< |E_last - E_prev| relative, after extrapolation
    bool converged = true;
};

struct RaySamplingResult {
    LimitSet limits;
    std::vector<RaySample> diagnostics;
};

/// Extrapolates every coefficient along x = r * omega. Aitken's delta-squared
/// process is applied to the last three samples; convergence is declared when
/// consecutive extrapolants agree to `rel_tol`. Throws NonConvergent on the first
/// failing direction unless `throw_on_failure` is false.
RaySamplingResult sample_limits_along_rays(const CoefficientBundle& fields, int dim, const std::vector<RVector>& directions,
                                           const std::vector<double>& radii, double rel_tol = 1e-6,
                                           bool throw_on_failure = true);

/// Deterministic quasi-uniform points on S^{n-1}: {+-1} for n = 1, equispaced
/// angles for n = 2, a Fibonacci lattice for n = 3.
std::vector<RVector> sphere_points(int dim, int count);

/// Default shell radii 2^k, k = 4..12.
std::vector<double> default_shell_radii();

/// Limit of a sequence of shell statistics. If the last three values move
/// monotonically with contracting increments, Aitken's extrapolant is returned;
/// otherwise the tail is treated as oscillating and the extreme value over all
/// shells is returned (min for liminf, max for limsup).
double tail_liminf(const std::vector<double>& shell_values);
double tail_limsup(const std::vector<double>& shell_values);

struct DPhiEstimate {
    double value = 0.0;
    std::vector<double> radii;
    std::vector<double> shell_minima;
};

/// d_Phi = liminf_{x->inf} (smallest eigenvalue of Phi(x)), by shell sampling.
/// sphere_samples <= 0 selects 64 * n.
DPhiEstimate d_phi(const MatrixField& phi, const std::vector<double>& radii = default_shell_radii(),
                   int sphere_samples = 0);

/// rho^sup = liminf_{x->inf} sup_omega (rho(x) omega.omega)^{1/2}.
double rho_sup(const MetricField& rho, const std::vector<double>& radii = default_shell_radii(), int sphere_samples = 0);

/// Symmetric positive square root of an SPD matrix; throws MetricNotSPD.
RMatrix spd_sqrt(const RMatrix& rho);

}  // namespace agmon
