#include <gtest/gtest.h>

#include "agmon/decay.hpp"
#include "agmon/eigensolve.hpp"
#include "oracles.hpp"

using namespace agmon;

namespace {

CVector sample(const Grid& g, const std::function<double(double)>& f) {
    CVector u(static_cast<Eigen::Index>(g.unknowns()));
    for (std::size_t n = 0; n < g.nodes(); ++n) u(static_cast<Eigen::Index>(n)) = f(g.point(n).norm());
    return u / u.norm();
}

RadialProfile synthetic(double r0, double r1, int count, const std::function<double(double)>& f) {
    RadialProfile p;
    for (int i = 0; i < count; ++i) {
        const double r = r0 + (r1 - r0) * i / (count - 1);
        p.radii.push_back(r);
        p.sup_abs.push_back(f(r));
        p.shell_counts.push_back(1);
    }
    return p;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    Eigen::MatrixXd design(x.size(), 2);
    Eigen::VectorXd rhs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        design(static_cast<Eigen::Index>(i), 0) = 1.0;
        design(static_cast<Eigen::Index>(i), 1) = x[i];
        rhs(static_cast<Eigen::Index>(i)) = y[i];
    }
    return design.colPivHouseholderQr().solve(rhs)(1);
}

DecayFit good_fit(double c, double r2 = 1.0) {
    DecayFit f;
    f.c_measured = c;
    f.r2 = r2;
    f.window = {1.0, 2.0};
    f.shells = 10;
    return f;
}

DecayBoundReport bound(double c_max) {
    DecayBoundReport r;
    r.c_max = c_max;
    return r;
}

int rank(Verdict v) { return v == Verdict::Violated ? 0 : v == Verdict::Inconclusive ? 1 : 2; }

double well_rate(double half_width, int points) {
    const MatrixField phi(1, 1, [](const Point& x) { return CMatrix::Constant(1, 1, 2.0 - 3.0 / (1.0 + x.squaredNorm())); }, true);
    const auto op = assemble_schrodinger(MetricField::identity(1), VectorField::zero(1), phi, Grid{1, half_width, points, 1});
    GapQuery q{-1.0, 1.9};
    q.max_pairs = 1;
    const auto pairs = gap_eigenpairs(op, q);
    const auto fit = fit_decay_exponent(radial_profile(refine_eigenvector(op.matrix, pairs[0]).vector, op.grid), default_fit_window(op.grid));
    return std::abs(fit.c_measured - std::sqrt(2.0 - pairs[0].lambda));
}

}  // namespace

TEST(RadialProfile, SpikeVanishesBeyondFirstShell) {
    const Grid g{2, 4.0, 17, 1};
    CVector u = CVector::Zero(static_cast<Eigen::Index>(g.unknowns()));
    u(8 + 17 * 8) = 1.0;
    const auto p = radial_profile(u, g);
    ASSERT_GT(p.radii.size(), 3u);
    EXPECT_EQ(p.sup_abs[0], 1.0);
    EXPECT_EQ(p.radii[0], 0.0);
    for (std::size_t i = 1; i < p.sup_abs.size(); ++i) EXPECT_EQ(p.sup_abs[i], 0.0);
    int total = 0;
    for (int c : p.shell_counts) total += c;
    EXPECT_EQ(static_cast<std::size_t>(total), g.nodes());
    for (std::size_t i = 1; i < p.radii.size(); ++i) EXPECT_GT(p.radii[i], p.radii[i - 1]);
}

TEST(RadialProfile, ExponentialIsSampledAtShellMaximisers) {
    const Grid g{2, 8.0, 65, 1};
    const CVector u = sample(g, [](double r) { return std::exp(-0.7 * r); });
    const double scale = std::abs(u(32 + 65 * 32));
    const auto p = radial_profile(u, g);
    for (std::size_t i = 0; i < p.radii.size(); ++i) EXPECT_NEAR(p.sup_abs[i], scale * std::exp(-0.7 * p.radii[i]), 1e-14);
}

TEST(RadialProfile, UsesBlockNorm) {
    const Grid g{1, 2.0, 9, 2};
    CVector u = CVector::Zero(18);
    u(8) = 0.6;
    u(9) = cplx(0.0, 0.8);
    const auto p = radial_profile(u, g);
    EXPECT_NEAR(p.sup_abs[0], 1.0, 1e-15);
}

TEST(FitDecay, PureExponentialIsExact) {
    const auto p = synthetic(1.0, 9.0, 40, [](double r) { return 3.0 * std::exp(-0.7 * r); });
    const auto fit = fit_decay_exponent(p, {0.0, 10.0});
    EXPECT_NEAR(fit.c_measured, 0.7, 1e-12);
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);
    EXPECT_FALSE(fit.underflow);
    EXPECT_EQ(fit.shells, 40);
}

TEST(FitDecay, GridExponentialIsExact) {
    const Grid g{2, 8.0, 65, 1};
    const auto fit = fit_decay_exponent(radial_profile(sample(g, [](double r) { return std::exp(-0.7 * r); }), g), default_fit_window(g));
    EXPECT_NEAR(fit.c_measured, 0.7, 1e-12);
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);
}

TEST(FitDecay, PolynomialPrefactorMatchesRegressionOracle) {
    auto f = [](double r) { return r * std::exp(-r); };
    const auto p = synthetic(10.0, 20.0, 21, f);
    std::vector<double> ys;
    for (double r : p.radii) ys.push_back(r - std::log(r));
    const double oracle_slope = least_squares_slope(p.radii, ys);
    const auto fit = fit_decay_exponent(p, {10.0, 20.0});
    EXPECT_NEAR(fit.c_measured, oracle_slope, 1e-12);
    EXPECT_NEAR(fit.c_measured, 1.0 - 1.0 / 14.4, 5e-3);
    // The prefactor costs about 1 / (c r) of the slope, so it fades further out.
    const auto far = fit_decay_exponent(synthetic(50.0, 100.0, 21, f), {50.0, 100.0});
    EXPECT_NEAR(far.c_measured, 1.0, 0.02);
}

TEST(FitDecay, ConstantProfileHasZeroRate) {
    const auto fit = fit_decay_exponent(synthetic(0.0, 5.0, 10, [](double) { return 0.25; }), {0.0, 5.0});
    EXPECT_EQ(fit.c_measured, 0.0);
}

TEST(FitDecay, TooFewShells) {
    EXPECT_THROW(fit_decay_exponent(synthetic(0.0, 5.0, 5, [](double r) { return std::exp(-r); }), {0.0, 5.0}), WindowTooSmall);
    EXPECT_THROW(fit_decay_exponent(synthetic(0.0, 5.0, 50, [](double r) { return std::exp(-r); }), {6.0, 9.0}), WindowTooSmall);
}

TEST(FitDecay, UnderflowShrinksWindow) {
    const auto p = synthetic(0.0, 60.0, 61, [](double r) { return std::exp(-r); });
    const auto fit = fit_decay_exponent(p, {0.0, 60.0});
    EXPECT_TRUE(fit.underflow);
    const double floor = 10.0 * std::numeric_limits<double>::epsilon();
    EXPECT_LE(fit.window.r_max, -std::log(floor));
    EXPECT_GE(fit.window.r_max, -std::log(floor) - 1.0);
    EXPECT_NEAR(fit.c_measured, 1.0, 1e-12);
}

TEST(Certify, Examples) {
    EXPECT_EQ(certify(good_fit(0.98), bound(1.0), 0.1).verdict, Verdict::Certified);
    EXPECT_EQ(certify(good_fit(0.5), bound(1.0), 0.1).verdict, Verdict::Violated);
    EXPECT_EQ(certify(good_fit(5.0, 0.9), bound(1.0), 0.1).verdict, Verdict::Inconclusive);
    EXPECT_EQ(certify(good_fit(0.5, 0.9), bound(1.0), 0.1).verdict, Verdict::Inconclusive);
    const auto c = certify(good_fit(1.0), DecayBoundReport{}, 0.1);
    EXPECT_EQ(c.verdict, Verdict::Inconclusive);
    EXPECT_FALSE(c.reason.empty());
}

TEST(Certify, CarriesFitData) {
    auto report = bound(1.2);
    report.lambda = 0.3;
    const auto c = certify(good_fit(1.1, 0.995), report, 0.1);
    EXPECT_EQ(c.lambda, 0.3);
    EXPECT_EQ(c.c_predicted, 1.2);
    EXPECT_EQ(c.c_measured, 1.1);
    EXPECT_EQ(c.fit_r2, 0.995);
    EXPECT_EQ(c.fit_window.r_max, 2.0);
}

TEST(Certify, MonotoneInMeasuredRate) {
    for (double r2 : {0.5, 0.99}) {
        for (double slack : {0.0, 0.1, 0.3}) {
            int prev = -1;
            for (double c = 0.0; c <= 2.0; c += 0.01) {
                const int now = rank(certify(good_fit(c, r2), bound(1.0), slack).verdict);
                EXPECT_GE(now, prev);
                prev = now;
            }
        }
    }
}

TEST(Cgnr, SolvesNonHermitianSystem) {
    const int n = 60;
    CMatrix dense = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        dense(i, i) = 3.0 + oracle::uniform();
        if (i + 1 < n) dense(i, i + 1) = oracle::cuniform();
        if (i > 2) dense(i, i - 3) = oracle::cuniform();
    }
    const SparseMatrix a = dense.sparseView();
    CVector f(n);
    for (int i = 0; i < n; ++i) f(i) = oracle::cuniform();
    const auto res = cgnr_solve(a, f);
    const CVector direct = dense.partialPivLu().solve(f);
    EXPECT_LE((res.x - direct).norm() / direct.norm(), 1e-9);
    EXPECT_LE(res.relative_residual, 1e-9);
    EXPECT_GT(res.iterations, 0);
}

TEST(Cgnr, IterationLimitThrows) {
    const auto op = assemble_schrodinger(MetricField::identity(2), VectorField::zero(2), MatrixField::constant(2, CMatrix::Zero(1, 1)),
                                         Grid{2, 1.0, 30, 1});
    CgnrOptions opt;
    opt.max_iterations = 3;
    EXPECT_THROW(cgnr_solve(op.matrix, CVector::Ones(op.rows()), opt), SolverStagnation);
}

TEST(WellDecay, ExponentImprovesWithBoxSize) {
    EXPECT_LT(well_rate(40.0, 4001), well_rate(20.0, 2001));
}

TEST(MtDecay, InadmissibleWeightIsRefused) {
    const VectorField a(3, [](const Point&) { return RVector(RVector::Ones(3)); });
    const auto phi = [](const Point&) { return 2.0 * Quaternion::basis(1); };
    const auto out = mt_decay_experiment(a, phi, bump_source(1.0), Grid{3, 6.0, 13, 4}, make_radial_weight(3.0, 3));
    EXPECT_EQ(out.certificate.verdict, Verdict::Inconclusive);
    EXPECT_FALSE(out.certificate.reason.empty());
    EXPECT_FALSE(out.admissibility.admissible);
    EXPECT_EQ(out.solve.iterations, 0);
}

TEST(MtDecay, SourceMustBeCentral) {
    const VectorField a(3, [](const Point&) { return RVector(RVector::Ones(3)); });
    const auto phi = [](const Point&) { return 2.0 * Quaternion::basis(1); };
    EXPECT_THROW(mt_decay_experiment(a, phi, bump_source(3.0), Grid{3, 6.0, 13, 4}, make_radial_weight(1.0, 3)), InvalidArgument);
}
