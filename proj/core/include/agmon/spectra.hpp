#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agmon/clifford.hpp"
#include "agmon/fields.hpp"
#include "agmon/weights.hpp"

namespace agmon {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval of the real line; lo = -inf or hi = +inf gives a half-line.
struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool contains(double x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed intervals, kept sorted with overlapping or touching
/// components merged.
class SpectrumSet {
public:
    SpectrumSet() = default;
    explicit SpectrumSet(std::vector<Interval> components);

    static SpectrumSet whole_line() { return SpectrumSet({Interval{}}); }
    static SpectrumSet half_line_from(double lo) { return SpectrumSet({Interval{lo, kInf}}); }

    const std::vector<Interval>& components() const { return components_; }
    bool empty() const { return components_.empty(); }
    bool contains(double x) const;
    bool is_whole_line() const;
    /// Bounded open gaps between consecutive components.
    std::vector<std::pair<double, double>> gaps() const;
    SpectrumSet united(const SpectrumSet& other) const;

    friend bool operator==(const SpectrumSet&, const SpectrumSet&) = default;

private:
    std::vector<Interval> components_;
};

struct PhysicalConstants {
    double h = 1.0;  ///< Planck constant
    double c = 1.0;  ///< speed of light
    double m = 1.0;  ///< electron mass
    double e = 1.0;  ///< electron charge

    static PhysicalConstants natural() { return {}; }
    void validate() const;
    double rest_energy() const { return m * c * c; }
};

enum class BoundKind { SchrodingerRate, SchrodingerGradient, MtRate, DiracExample };
std::string to_string(BoundKind k);

/// Largest admissible decay rate (or gradient bound) for an eigenvalue.
/// An empty c_max means the bound is infeasible at this lambda.
struct DecayBoundReport {
    double lambda = 0.0;
    BoundKind kind = BoundKind::SchrodingerRate;
    std::optional<double> c_max;
    std::map<std::string, double> inputs;

    bool feasible() const { return c_max.has_value(); }
};

/// Strict-inequality verdict with its slack. margin > 0 iff admissible.
struct Admissibility {
    bool admissible = false;
    double margin = 0.0;
    double bound = 0.0;      ///< right-hand side of the inequality
    double estimate = 0.0;   ///< sampled left-hand side
};

/// Tolerance under which a strict inequality is considered to fail.
inline constexpr double kStrictTol = 1e-9;

// --- Schrodinger ---------------------------------------------------------------

/// (xi^T rho_g xi) E + Phi_g
CMatrix schrodinger_symbol(const LimitPoint& p, const RVector& xi);
/// rho_g^{jk} (xi_j + i t g_j)(xi_k + i t g_k) E + Phi_g with g = (grad v)^g.
CMatrix schrodinger_conjugated_symbol(const LimitPoint& p, const RVector& xi, double t = 1.0);
/// rho_g xi.xi E + (Phi_g - |(grad v)^g|^2_rho E)
CMatrix schrodinger_conjugated_real_part(const LimitPoint& p, const RVector& xi);

/// Union over limit points of [mu_j^g, +inf); throws NotHermitian.
SpectrumSet schrodinger_ess_spectrum(const LimitSet& limits);

/// c_max = sqrt(d_Phi - lambda) / rho_sup for weights e^{c<x>}; infeasible when lambda >= d_Phi.
DecayBoundReport schrodinger_decay_bound(double lambda, double d_phi, double rho_sup);
/// Bound sqrt(d_Phi - lambda) on limsup |grad v|_rho for general weights.
DecayBoundReport schrodinger_gradient_bound(double lambda, double d_phi);

Admissibility schrodinger_weight_admissible(const Weight& w, const MetricField& rho, double lambda, double d_phi,
                                            const std::vector<double>& radii = default_shell_radii());

// --- Moisil-Theodorescu -------------------------------------------------------

/// sum_j a_j (i xi_j) L(e_j) + R(phi); throws NonVectorQuaternion.
Eigen::Matrix4cd mt_symbol(const RVector& a, const Quaternion& phi, const RVector& xi);
/// Same with xi_j replaced by xi_j + i t g_j.
Eigen::Matrix4cd mt_conjugated_symbol(const RVector& a, const Quaternion& phi, const RVector& xi, const RVector& g, double t);
/// Companion factor with the sign of R(phi) flipped.
Eigen::Matrix4cd mt_check_symbol(const RVector& a, const Quaternion& phi, const RVector& xi, const RVector& g, double t);
/// Scalar value of the product mt_conjugated_symbol * mt_check_symbol.
cplx mt_product_scalar(const RVector& a, const Quaternion& phi, const RVector& xi, const RVector& g, double t);

/// Box of xi values for symbol scans. points_per_axis <= 0 selects the default
/// (65 for n <= 2, 25 for n = 3); even counts are bumped so xi = 0 is a node.
/// half_width <= 0 derives the box from the tail bound.
struct XiGrid {
    int points_per_axis = 0;
    double half_width = 0.0;
};

struct FredholmWitness {
    std::size_t point = 0;
    RVector xi;
    double t = 0.0;
    double value = 0.0;
};

struct FredholmResult {
    bool fredholm = false;
    double min_value = 0.0;
    FredholmWitness witness;  ///< minimizer over the scan (the failing point when !fredholm)
};

/// inf over limit points and xi of |sum a_j^2 xi_j^2 + sum phi_j^2| > tol.
/// Throws DegenerateCoefficient if some |a_j^g| <= tol.
FredholmResult mt_fredholm_check(const LimitSet& limits, const XiGrid& grid = {}, double tol = 1e-8);

/// liminf_{x->inf} sum_j (phi_j(x)^2 - a_j(x)^2 (d_j v)^2), by shell sampling.
Admissibility mt_weight_admissible(const VectorField& a, const std::function<Quaternion(const Point&)>& phi, const Weight& w,
                                   const std::vector<double>& radii = default_shell_radii());
/// Supremum of c for which the radial weight c<x> satisfies the MT decay condition.
DecayBoundReport mt_decay_bound(const VectorField& a, const std::function<Quaternion(const Point&)>& phi,
                                const std::vector<double>& radii = default_shell_radii());

// --- Dirac ---------------------------------------------------------------------

/// Gauge-reduced symbol c h gamma_k phi_g^{jk} xi_j + gamma_0 m c^2 - e Phi_g E.
/// Throws MetricNotSPD.
Eigen::Matrix4cd dirac_symbol(const LimitPoint& p, const PhysicalConstants& k, const DiracBasis& basis, const RVector& xi);
/// c h gamma_k phi_g^{jk} (xi_j + i t g_j) + gamma_0 m c^2 (no potential term).
Eigen::Matrix4cd dirac_conjugated_symbol(const LimitPoint& p, const PhysicalConstants& k, const DiracBasis& basis,
                                         const RVector& xi, double t);
/// (lambda_-, lambda_+) = -e Phi_g -+ (c^2 h^2 xi.rho_g xi + m^2 c^4)^{1/2}, each of multiplicity 2.
std::pair<double, double> dirac_eigs(const LimitPoint& p, const PhysicalConstants& k, const RVector& xi);
/// (-inf, -e Phi_inf - mc^2] U [-e Phi_sup + mc^2, +inf)
SpectrumSet dirac_ess_spectrum(double phi_inf, double phi_sup, const PhysicalConstants& k);
/// [Phi_inf, Phi_sup] inside the open interval (-mc^2/e, mc^2/e).
bool dirac_fredholm(double phi_inf, double phi_sup, const PhysicalConstants& k);
/// gamma_{g,t}(xi, lambda) = c^2h^2 xi.rho xi - c^2h^2 t^2 g.rho g + m^2c^4 - (e Phi_g + lambda)^2
double dirac_conjugated_gamma(const LimitPoint& p, const PhysicalConstants& k, double t, double lambda, const RVector& xi);
/// Open gap (-e Phi_inf - mc^2, -e Phi_sup + mc^2); empty optional when there is none.
std::optional<std::pair<double, double>> dirac_gap(double phi_inf, double phi_sup, const PhysicalConstants& k);

/// limsup |grad v|_rho < (1/ch) sqrt(m^2c^4 - (e Phi_sup + lambda)^2). Throws LambdaNotInGap.
Admissibility dirac_weight_admissible(const Weight& w, const MetricField& rho, const PhysicalConstants& k, double lambda,
                                      double phi_inf, double phi_sup,
                                      const std::vector<double>& radii = default_shell_radii());
/// a_max = sqrt(m^2c^4 - (e Phi_sup + lambda)^2) / (c h rho_sup). Throws LambdaNotInGap.
DecayBoundReport dirac_decay_bound(double lambda, double phi_inf, double phi_sup, double rho_sup,
                                   const PhysicalConstants& k);

// --- Conjugated family scan ----------------------------------------------------

enum class OperatorKind { SchrodingerMinusLambda, MoisilTheodorescu, DiracMinusLambda };

struct FamilyScanConfig {
    OperatorKind kind = OperatorKind::SchrodingerMinusLambda;
    double lambda = 0.0;
    PhysicalConstants constants{};
    DiracBasis basis = dirac_basis_standard();
    std::vector<double> t_grid;  ///< empty selects 21 points on [-1, 1] (Dirac: [0, 1])
    XiGrid xi{};
    double rel_tol = 1e-8;       ///< invertible iff sigma_min > rel_tol * max(sigma_max, size of the symbol terms)
    unsigned threads = 1;
};

struct ScanWitness {
    std::size_t point = 0;
    double t = 0.0;
    RVector xi;
    double sigma_min = 0.0;
    double ratio = 0.0;   ///< sigma_min / max(sigma_max, size of the symbol terms)
};

struct ScanResult {
    bool invertible = false;
    ScanWitness worst;         ///< evaluation with the smallest sigma_min / sigma_max
    std::size_t evaluations = 0;
};

std::vector<double> default_t_grid(OperatorKind kind);

/// Pairs each limit point with the limiting weight gradient along each sampled
/// direction, so that grad_v is populated for the conjugated symbols.
LimitSet attach_weight_limits(const LimitSet& base, const Weight& w, int directions = 0);

/// Scans the conjugated limit symbols over t_grid x limit points x xi-box and
/// reports whether all of them are invertible. Outside the box invertibility
/// follows from the growth of the principal part.
ScanResult family_invertibility_scan(const LimitSet& limits, const FamilyScanConfig& cfg);

/// Matrix of the conjugated limit symbol scanned by family_invertibility_scan.
CMatrix conjugated_limit_symbol(const LimitPoint& p, const FamilyScanConfig& cfg, const RVector& xi, double t);

/// Smallest and largest singular values.
std::pair<double, double> singular_range(const CMatrix& m);

}  // namespace agmon
