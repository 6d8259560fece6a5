#pragma once

#include <string>
#include <vector>

#include "agmon/assemble.hpp"
#include "agmon/spectra.hpp"
#include "agmon/weights.hpp"

namespace agmon {

struct RadialProfile {
    std::vector<double> radii;        ///< |x| of the shell maximiser, increasing
    std::vector<double> sup_abs;      ///< max over the shell of the C^N block norm
    std::vector<int> shell_counts;
};

/// Shells of width 2h; empty shells are skipped.
RadialProfile radial_profile(const CVector& u, const Grid& grid);

struct FitWindow {
    double r_min = 0.0;
    double r_max = 0.0;
};

/// Default window [0.3 L, 0.8 L].
inline FitWindow default_fit_window(const Grid& g) { return {0.3 * g.half_width, 0.8 * g.half_width}; }

struct DecayFit {
    double c_measured = 0.0;   ///< slope of -log(sup_abs) against r
    double r2 = 0.0;
    FitWindow window;          ///< window actually used
    bool underflow = false;    ///< window was shrunk to stay above the numerical floor
    int shells = 0;
};

/// Least-squares fit over shells in the window. Shells below 10 eps max(sup_abs)
/// shrink the window (reported through `underflow`); fewer than 6 remaining
/// shells throw WindowTooSmall.
DecayFit fit_decay_exponent(const RadialProfile& p, const FitWindow& window);

enum class Verdict { Certified, Inconclusive, Violated };
std::string to_string(Verdict v);

struct DecayCertificate {
    double lambda = 0.0;
    double c_predicted = 0.0;
    double c_measured = 0.0;
    FitWindow fit_window;
    double fit_r2 = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;
};

inline constexpr double kMinFitR2 = 0.98;

/// certified iff fit.r2 >= 0.98 and c_measured >= (1 - slack) c_max; inconclusive
/// on a poor fit or infeasible report.
DecayCertificate certify(const DecayFit& fit, const DecayBoundReport& report, double slack = 0.1);

struct CgnrOptions {
    double tol = 1e-11;          ///< on ||A^* r|| / ||A^* f||
    int max_iterations = 5000;
    int stagnation_window = 200; ///< iterations without a 2x reduction count as stagnation
};

struct CgnrResult {
    CVector x;
    int iterations = 0;
    double relative_residual = 0.0;   ///< ||f - A x|| / ||f||
};

/// Conjugate gradients on the normal equations with column-norm (diagonal) preconditioning.
/// Throws SolverStagnation.
CgnrResult cgnr_solve(const SparseMatrix& a, const CVector& f, const CgnrOptions& opt = {});

struct MtDecayOptions {
    double slack = 0.1;
    FitWindow window{};          ///< r_max <= 0 selects the default window
    CgnrOptions solver{};
    unsigned threads = 1;
};

struct MtDecayOutcome {
    DecayCertificate certificate;
    DecayBoundReport bound;
    Admissibility admissibility;
    RadialProfile profile;
    CgnrResult solve;
};

/// Solves A u = f on the grid, profiles |u| and certifies the decay against the
/// admissible MT rate. An inadmissible weight yields an inconclusive certificate
/// without solving. f must vanish for |x| > L / 4.
MtDecayOutcome mt_decay_experiment(const VectorField& a, const std::function<Quaternion(const Point&)>& phi,
                                   const std::function<Eigen::Vector4cd(const Point&)>& f, const Grid& grid, const Weight& w,
                                   const MtDecayOptions& opt = {});

/// Smooth bump (1 - |x|^2 / R^2)^3 e_0 supported in |x| <= R.
std::function<Eigen::Vector4cd(const Point&)> bump_source(double radius);

}  // namespace agmon
