#include <gtest/gtest.h>

#include "agmon/spectra.hpp"
#include "oracles.hpp"

using namespace agmon;

namespace {

LimitPoint schrodinger_point(const RMatrix& rho, const CMatrix& phi) {
    LimitPoint p;
    p.rho = rho;
    p.potential = phi;
    p.magnetic = RVector::Zero(rho.rows());
    return p;
}

LimitPoint mt_point(const RVector& a, const Quaternion& phi) {
    LimitPoint p = schrodinger_point(RMatrix::Identity(3, 3), CMatrix::Zero(1, 1));
    p.principal = a;
    p.quaternion = phi;
    return p;
}

LimitPoint dirac_point(const RMatrix& rho, double phi) {
    return schrodinger_point(rho, CMatrix::Constant(1, 1, phi));
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

CMatrix diag(std::initializer_list<double> d) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double v : d) m(i, i) = v, ++i;
    return m;
}

Quaternion random_vector_quaternion(bool real) {
    if (real) return Quaternion::vector(oracle::uniform(), oracle::uniform(), oracle::uniform());
    return Quaternion::vector(oracle::cuniform(), oracle::cuniform(), oracle::cuniform());
}

}  // namespace

// --- SpectrumSet

TEST(SpectrumSet, NormalizationMergesAndSorts) {
    const SpectrumSet s({Interval{3.0, 5.0}, Interval{-1.0, 1.0}, Interval{1.0, 2.0}, Interval{4.0, kInf}});
    ASSERT_EQ(s.components().size(), 2u);
    EXPECT_EQ(s.components()[0], (Interval{-1.0, 2.0}));
    EXPECT_EQ(s.components()[1], (Interval{3.0, kInf}));
    EXPECT_EQ(SpectrumSet(s.components()), s);
    EXPECT_EQ(s.gaps().size(), 1u);
    EXPECT_TRUE(s.contains(4.5));
    EXPECT_FALSE(s.contains(2.5));
}

TEST(SpectrumSet, NormalizationIsOrderIndependent) {
    std::vector<Interval> parts;
    for (int i = 0; i < 12; ++i) {
        const double lo = oracle::uniform(-10, 10);
        parts.push_back({lo, lo + oracle::uniform(0, 3)});
    }
    const SpectrumSet a(parts);
    std::reverse(parts.begin(), parts.end());
    EXPECT_EQ(SpectrumSet(parts), a);
    for (std::size_t i = 1; i < a.components().size(); ++i) EXPECT_LT(a.components()[i - 1].hi, a.components()[i].lo);
}

// --- Schrodinger

TEST(Schrodinger, SymbolExamples) {
    const auto p0 = schrodinger_point(RMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
    EXPECT_EQ(schrodinger_symbol(p0, (RVector(2) << 1, 1).finished()), 2.0 * CMatrix::Identity(2, 2));
    const auto p1 = schrodinger_point((RVector(2) << 1, 4).finished().asDiagonal(), diag({1, 2}));
    EXPECT_EQ(schrodinger_symbol(p1, RVector::Zero(2)), diag({1, 2}));
    EXPECT_EQ(schrodinger_symbol(p1, (RVector(2) << 1, 1).finished()), diag({6, 7}));
}

TEST(Schrodinger, ConjugatedSymbolWithoutWeightReduces) {
    auto p = schrodinger_point(oracle::spd(2), oracle::hermitian(2));
    const RVector xi = oracle::rvec(2);
    EXPECT_LE(max_abs(schrodinger_conjugated_symbol(p, xi) - schrodinger_symbol(p, xi)), 1e-15);
    p.grad_v = RVector::Zero(2);
    EXPECT_LE(max_abs(schrodinger_conjugated_symbol(p, xi) - schrodinger_symbol(p, xi)), 1e-15);
}

TEST(Schrodinger, ConjugatedRealPartExample) {
    auto p = schrodinger_point(RMatrix::Identity(2, 2), 2.0 * CMatrix::Identity(1, 1));
    p.grad_v = (RVector(2) << 0.3, 0.0).finished();
    const RVector xi = (RVector(2) << 0.4, -1.2).finished();
    EXPECT_NEAR(schrodinger_conjugated_real_part(p, xi)(0, 0).real(), xi.squaredNorm() + 2.0 - 0.09, 1e-15);
}

TEST(Schrodinger, HermitianPartIdentity) {
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 3;
        auto p = schrodinger_point(oracle::spd(n), oracle::hermitian(2));
        p.grad_v = oracle::rvec(n);
        const RVector xi = oracle::rvec(n, -3, 3);
        const CMatrix s = schrodinger_conjugated_symbol(p, xi);
        EXPECT_LE(max_abs(0.5 * (s + s.adjoint()) - schrodinger_conjugated_real_part(p, xi)), 1e-12);
    }
}

TEST(Schrodinger, EssentialSpectrum) {
    EXPECT_EQ(schrodinger_ess_spectrum({{schrodinger_point(RMatrix::Identity(1, 1), diag({1, 2}))}}), SpectrumSet::half_line_from(1.0));
    EXPECT_EQ(schrodinger_ess_spectrum({{schrodinger_point(RMatrix::Identity(2, 2), 2.0 * CMatrix::Identity(3, 3))}}),
              SpectrumSet::half_line_from(2.0));
    LimitFamily fam{schrodinger_point(RMatrix::Identity(1, 1), 3.0 * CMatrix::Identity(1, 1)), CMatrix::Identity(1, 1), -1.0, 1.0};
    EXPECT_EQ(schrodinger_ess_spectrum({fam.discretize()}), SpectrumSet::half_line_from(2.0));
    CMatrix bad = CMatrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    EXPECT_THROW(schrodinger_ess_spectrum({{schrodinger_point(RMatrix::Identity(1, 1), bad)}}), NotHermitian);
}

TEST(Schrodinger, EssentialSpectrumIsSingleHalfLine) {
    for (int trial = 0; trial < 20; ++trial) {
        LimitSet set;
        double lowest = kInf;
        for (int g = 0; g < 4; ++g) {
            const CMatrix h = oracle::hermitian(3);
            Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
            lowest = std::min(lowest, es.eigenvalues()(0));
            set.points.push_back(schrodinger_point(RMatrix::Identity(2, 2), h));
        }
        const auto s = schrodinger_ess_spectrum(set);
        ASSERT_EQ(s.components().size(), 1u);
        EXPECT_NEAR(s.components()[0].lo, lowest, 1e-12);
        EXPECT_EQ(s.components()[0].hi, kInf);
    }
}

TEST(Schrodinger, DecayBound) {
    EXPECT_DOUBLE_EQ(*schrodinger_decay_bound(1.0, 2.0, 1.0).c_max, 1.0);
    EXPECT_DOUBLE_EQ(*schrodinger_decay_bound(0.0, 4.0, 2.0).c_max, 1.0);
    EXPECT_FALSE(schrodinger_decay_bound(2.5, 2.0, 1.0).feasible());
    EXPECT_EQ(schrodinger_decay_bound(1.0, 2.0, 1.0).inputs.at("d_phi"), 2.0);
    EXPECT_DOUBLE_EQ(*schrodinger_gradient_bound(1.0, 5.0).c_max, 2.0);
}

TEST(Schrodinger, WeightAdmissibility) {
    const auto rho = MetricField::identity(2);
    const auto ok = schrodinger_weight_admissible(make_radial_weight(0.5, 2), rho, 1.0, 2.0);
    EXPECT_TRUE(ok.admissible);
    EXPECT_NEAR(ok.margin, 0.5, 1e-9);
    EXPECT_FALSE(schrodinger_weight_admissible(make_radial_weight(1.0, 2), rho, 1.0, 2.0).admissible);
    const auto l = sphere_function_quadratic(0.8, Eigen::Vector3d::Zero(), Eigen::Vector3d(0.1, 0.0, 0.0).asDiagonal());
    EXPECT_TRUE(schrodinger_weight_admissible(make_sphere_weight(l), MetricField::identity(3), 1.0, 2.0).admissible);
}

// --- Moisil-Theodorescu

TEST(MoisilTheodorescu, MainSymbolSquaresToScalar) {
    const RVector a = RVector::Ones(3);
    const Quaternion zero = Quaternion::vector(0.0, 0.0, 0.0);
    const RVector xi = (RVector(3) << 1, 0, 0).finished();
    const Eigen::Matrix4cd s = mt_symbol(a, zero, xi);
    EXPECT_LE(max_abs(s * s - Eigen::Matrix4cd::Identity()), 1e-15);
    for (int trial = 0; trial < 100; ++trial) {
        const RVector ar = oracle::rvec(3, 0.5, 2.0), x = oracle::rvec(3, -2, 2);
        const Eigen::Matrix4cd m = mt_symbol(ar, zero, x);
        EXPECT_LE(max_abs(m * m - ar.cwiseAbs2().dot(x.cwiseAbs2()) * Eigen::Matrix4cd::Identity()), 1e-13);
    }
}

TEST(MoisilTheodorescu, SymbolAtZeroIsRightMultiplication) {
    const Quaternion phi = 2.0 * Quaternion::basis(1);
    EXPECT_EQ(mt_symbol(RVector::Ones(3), phi, RVector::Zero(3)), right_mat(phi));
    EXPECT_THROW(mt_symbol(RVector::Ones(3), Quaternion(1.0, 0.0, 0.0, 0.0), RVector::Zero(3)), NonVectorQuaternion);
}

TEST(MoisilTheodorescu, Factorization) {
    for (int trial = 0; trial < 300; ++trial) {
        const RVector a = oracle::rvec(3, -2, 2), xi = oracle::rvec(3, -3, 3), g = oracle::rvec(3);
        const Quaternion phi = random_vector_quaternion(trial % 2 == 0);
        const Eigen::Matrix4cd a0 = mt_symbol(a, Quaternion::vector(0.0, 0.0, 0.0), xi);
        const Eigen::Matrix4cd m = right_mat(phi);
        const cplx expect = a.cwiseAbs2().dot(xi.cwiseAbs2()) + phi.vector_square_sum();
        EXPECT_LE(max_abs((a0 + m) * (a0 - m) - expect * Eigen::Matrix4cd::Identity()), 1e-12);
        const double t = oracle::uniform();
        const Eigen::Matrix4cd prod = mt_conjugated_symbol(a, phi, xi, g, t) * mt_check_symbol(a, phi, xi, g, t);
        EXPECT_LE(max_abs(prod - mt_product_scalar(a, phi, xi, g, t) * Eigen::Matrix4cd::Identity()), 1e-12);
    }
}

TEST(MoisilTheodorescu, FredholmCheck) {
    const auto yes = mt_fredholm_check({{mt_point(RVector::Ones(3), 2.0 * Quaternion::basis(1))}});
    EXPECT_TRUE(yes.fredholm);
    EXPECT_NEAR(yes.min_value, 4.0, 1e-15);
    EXPECT_LE(yes.witness.xi.norm(), 1e-15);

    const auto no = mt_fredholm_check({{mt_point(RVector::Ones(3), Quaternion::vector(0.0, 0.0, 0.0))}});
    EXPECT_FALSE(no.fredholm);
    EXPECT_LE(no.witness.xi.norm(), 1e-15);

    RVector degenerate = RVector::Ones(3);
    degenerate(1) = 0.0;
    EXPECT_THROW(mt_fredholm_check({{mt_point(degenerate, Quaternion::basis(1))}}), DegenerateCoefficient);
}

TEST(MoisilTheodorescu, ComplexPotentialScanMatchesFineOracle) {
    const RVector a = (RVector(3) << 1.0, 0.7, 1.3).finished();
    const Quaternion phi = Quaternion::vector(cplx(1.0, 1.0), 0.0, 0.0);
    const auto res = mt_fredholm_check({{mt_point(a, phi)}}, XiGrid{21, 3.0});
    // 10x finer brute force over the same box.
    double fine = kInf;
    const int m = 201;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; k += 10) {
                const RVector xi = (RVector(3) << -3 + 6.0 * i / (m - 1), -3 + 6.0 * j / (m - 1), -3 + 6.0 * k / (m - 1)).finished();
                fine = std::min(fine, std::abs(a.cwiseAbs2().dot(xi.cwiseAbs2()) + phi.vector_square_sum()));
            }
    EXPECT_TRUE(res.fredholm);
    EXPECT_NEAR(res.min_value, fine, 1e-12);
    EXPECT_NEAR(res.min_value, 2.0, 1e-12);
}

TEST(MoisilTheodorescu, WeightAdmissibility) {
    const auto a = VectorField(3, [](const Point&) { return RVector(RVector::Ones(3)); });
    const auto phi = [](const Point&) { return Quaternion::vector(2.0, 0.0, 0.0); };
    const auto one = mt_weight_admissible(a, phi, make_radial_weight(1.0, 3));
    EXPECT_TRUE(one.admissible);
    EXPECT_NEAR(one.margin, 3.0, 1e-6);
    EXPECT_FALSE(mt_weight_admissible(a, phi, make_radial_weight(2.0, 3)).admissible);
    const auto zero = [](const Point&) { return Quaternion::vector(0.0, 0.0, 0.0); };
    EXPECT_FALSE(mt_weight_admissible(a, zero, make_radial_weight(0.1, 3)).admissible);
    EXPECT_NEAR(*mt_decay_bound(a, phi).c_max, 2.0, 1e-12);
}

// --- Dirac

TEST(Dirac, SymbolExamples) {
    const auto k = PhysicalConstants::natural();
    const auto b = dirac_basis_standard();
    const auto p = dirac_point(RMatrix::Identity(3, 3), 0.0);
    EXPECT_EQ(dirac_symbol(p, k, b, RVector::Zero(3)), b.gamma[0]);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(dirac_symbol(p, k, b, (RVector(3) << 1, 0, 0).finished()));
    const double r2 = std::sqrt(2.0);
    EXPECT_NEAR(es.eigenvalues()(0), -r2, 1e-14);
    EXPECT_NEAR(es.eigenvalues()(1), -r2, 1e-14);
    EXPECT_NEAR(es.eigenvalues()(2), r2, 1e-14);
    EXPECT_NEAR(es.eigenvalues()(3), r2, 1e-14);
}

TEST(Dirac, Factorization) {
    const auto b = dirac_basis_standard();
    for (int trial = 0; trial < 300; ++trial) {
        const PhysicalConstants k{oracle::uniform(0.5, 2), oracle::uniform(0.5, 2), oracle::uniform(0.5, 2), oracle::uniform(0.5, 2)};
        const double phi = oracle::uniform(-1, 1);
        const auto p = dirac_point(oracle::spd(3), phi);
        const RVector xi = oracle::rvec(3, -2, 2);
        const Eigen::Matrix4cd d0 = dirac_symbol(p, k, b, xi) + k.e * phi * Eigen::Matrix4cd::Identity();
        const Eigen::Matrix4cd lhs = (d0 - k.e * phi * Eigen::Matrix4cd::Identity()) * (d0 + k.e * phi * Eigen::Matrix4cd::Identity());
        const double scale = k.c * k.c * k.h * k.h * xi.dot(p.rho * xi) + std::pow(k.rest_energy(), 2) - std::pow(k.e * phi, 2);
        EXPECT_LE(max_abs(lhs - scale * Eigen::Matrix4cd::Identity()), 1e-12 * std::max(1.0, std::abs(scale)));
    }
}

TEST(Dirac, EigenvaluesMatchDenseSolverWithMultiplicityTwo) {
    const auto b = dirac_basis_standard();
    EXPECT_EQ(dirac_eigs(dirac_point(RMatrix::Identity(3, 3), 0.0), PhysicalConstants::natural(), RVector::Zero(3)),
              std::make_pair(-1.0, 1.0));
    EXPECT_EQ(dirac_eigs(dirac_point(RMatrix::Identity(3, 3), 0.5), PhysicalConstants::natural(), RVector::Zero(3)),
              std::make_pair(-1.5, 0.5));
    for (int trial = 0; trial < 200; ++trial) {
        const PhysicalConstants k{oracle::uniform(0.5, 2), oracle::uniform(0.5, 2), oracle::uniform(0.5, 2), oracle::uniform(0.5, 2)};
        auto p = dirac_point(oracle::spd(3), oracle::uniform(-1, 1));
        const RVector xi = oracle::rvec(3, -2, 2);
        const auto [lm, lp] = dirac_eigs(p, k, xi);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(dirac_symbol(p, k, b, xi));
        const auto& ev = es.eigenvalues();
        EXPECT_NEAR(ev(0), lm, 1e-10);
        EXPECT_NEAR(ev(1), lm, 1e-10);
        EXPECT_NEAR(ev(2), lp, 1e-10);
        EXPECT_NEAR(ev(3), lp, 1e-10);
        p.magnetic = oracle::rvec(3, -5, 5);
        EXPECT_EQ(dirac_eigs(p, k, xi), std::make_pair(lm, lp));
        EXPECT_LE(max_abs(dirac_symbol(p, k, b, xi) - es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint()), 1e-12);
    }
}

TEST(Dirac, EssentialSpectrumAndGap) {
    const auto k = PhysicalConstants::natural();
    EXPECT_EQ(dirac_ess_spectrum(0.0, 0.0, k), SpectrumSet({Interval{-kInf, -1.0}, Interval{1.0, kInf}}));
    const auto s = dirac_ess_spectrum(-0.3, 0.4, k);
    ASSERT_EQ(s.components().size(), 2u);
    EXPECT_EQ(s.components()[0].hi, -0.7);
    EXPECT_EQ(s.components()[1].lo, 0.6);
    EXPECT_TRUE(dirac_ess_spectrum(-1.0, 1.0, k).is_whole_line());
    EXPECT_FALSE(dirac_gap(-1.0, 1.0, k).has_value());
}

TEST(Dirac, FredholmPredicate) {
    const auto k = PhysicalConstants::natural();
    EXPECT_TRUE(dirac_fredholm(0.0, 0.0, k));
    EXPECT_FALSE(dirac_fredholm(1.5, 1.5, k));
    EXPECT_FALSE(dirac_fredholm(0.0, 1.0, k));
    EXPECT_FALSE(dirac_fredholm(-1.0, 0.0, k));
    EXPECT_TRUE(dirac_fredholm(-0.999, 0.999, k));
}

TEST(Dirac, ConjugatedGamma) {
    const auto k = PhysicalConstants::natural();
    auto p = dirac_point(RMatrix::Identity(3, 3), 0.0);
    EXPECT_DOUBLE_EQ(dirac_conjugated_gamma(p, k, 0.0, 0.0, RVector::Zero(3)), 1.0);
    p.grad_v = (RVector(3) << 0.5, 0.0, 0.0).finished();
    EXPECT_DOUBLE_EQ(dirac_conjugated_gamma(p, k, 1.0, 0.5, RVector::Zero(3)), 0.5);
}

TEST(Dirac, ConjugatedGammaMatchesMatrixProduct) {
    const auto b = dirac_basis_standard();
    for (int trial = 0; trial < 300; ++trial) {
        const PhysicalConstants k{oracle::uniform(0.5, 2), oracle::uniform(0.5, 2), oracle::uniform(0.5, 2), oracle::uniform(0.5, 2)};
        auto p = dirac_point(oracle::spd(3), oracle::uniform(-1, 1));
        p.grad_v = oracle::rvec(3);
        const double t = oracle::uniform(0, 1), lambda = oracle::uniform(-1, 1);
        const RVector xi = oracle::rvec(3, -2, 2);
        const Eigen::Matrix4cd m = dirac_conjugated_symbol(p, k, b, xi, t);
        const double mu = k.e * p.scalar_potential() + lambda;
        const Eigen::Matrix4cd prod = (m - mu * Eigen::Matrix4cd::Identity()) * (m + mu * Eigen::Matrix4cd::Identity());
        const cplx s = prod(0, 0);
        const double gamma = dirac_conjugated_gamma(p, k, t, lambda, xi);
        EXPECT_LE(max_abs(prod - s * Eigen::Matrix4cd::Identity()), 1e-12 * std::max(1.0, std::abs(s)));
        EXPECT_NEAR(s.real(), gamma, 1e-12 * std::max(1.0, std::abs(gamma)));
    }
}

TEST(Dirac, DecayBoundAndAdmissibility) {
    const auto k = PhysicalConstants::natural();
    EXPECT_DOUBLE_EQ(*dirac_decay_bound(0.0, 0.0, 0.0, 1.0, k).c_max, 1.0);
    EXPECT_NEAR(*dirac_decay_bound(0.8, 0.0, 0.0, 1.0, k).c_max, 0.6, 1e-15);
    EXPECT_THROW(dirac_decay_bound(1.2, 0.0, 0.0, 1.0, k), LambdaNotInGap);
    EXPECT_THROW(dirac_weight_admissible(make_radial_weight(0.5, 3), MetricField::identity(3), k, -1.5, 0.0, 0.0), LambdaNotInGap);
    EXPECT_TRUE(dirac_weight_admissible(make_radial_weight(0.5, 3), MetricField::identity(3), k, 0.0, 0.0, 0.0).admissible);
    EXPECT_FALSE(dirac_weight_admissible(make_radial_weight(0.6, 3), MetricField::identity(3), k, 0.8, 0.0, 0.0).admissible);
}

// --- Family scan

TEST(FamilyScan, SchrodingerAdmissibleWeight) {
    LimitSet base{{schrodinger_point(RMatrix::Identity(2, 2), 2.0 * CMatrix::Identity(1, 1))}};
    const auto limits = attach_weight_limits(base, make_radial_weight(0.5, 2), 8);
    FamilyScanConfig cfg;
    cfg.lambda = 1.0;
    for (double t = 0.0; t <= 1.0 + 1e-12; t += 0.05) cfg.t_grid.push_back(t);
    const auto coarse = family_invertibility_scan(limits, cfg);
    EXPECT_TRUE(coarse.invertible);
    cfg.xi.points_per_axis = 10 * 64 + 1;
    cfg.t_grid = {0.0, 1.0};
    const auto fine = family_invertibility_scan(attach_weight_limits(base, make_radial_weight(0.5, 2), 1), cfg);
    EXPECT_TRUE(fine.invertible);
    // Worst case sits at xi = 0, t = 1 where the symbol is 2 - 0.25 - 1.
    EXPECT_LE(coarse.worst.xi.norm(), 1e-12);
    EXPECT_NEAR(coarse.worst.sigma_min, 0.75, 1e-12);
    EXPECT_NEAR(fine.worst.sigma_min, coarse.worst.sigma_min, 1e-12);
}

TEST(FamilyScan, SchrodingerWeightAtExactBoundFails) {
    LimitSet base{{schrodinger_point(RMatrix::Identity(2, 2), 2.0 * CMatrix::Identity(1, 1))}};
    FamilyScanConfig cfg;
    cfg.lambda = 1.0;
    const auto res = family_invertibility_scan(attach_weight_limits(base, make_radial_weight(1.0, 2), 8), cfg);
    EXPECT_FALSE(res.invertible);
    EXPECT_NEAR(std::abs(res.worst.t), 1.0, 1e-15);
    EXPECT_LE(res.worst.xi.norm(), 1e-12);
}

TEST(FamilyScan, MoisilTheodorescuWithoutPotentialFails) {
    FamilyScanConfig cfg;
    cfg.kind = OperatorKind::MoisilTheodorescu;
    cfg.xi.points_per_axis = 9;
    const auto res = family_invertibility_scan({{mt_point(RVector::Ones(3), Quaternion::vector(0.0, 0.0, 0.0))}}, cfg);
    EXPECT_FALSE(res.invertible);
    EXPECT_LE(res.worst.xi.norm(), 1e-12);

    LimitSet ok = attach_weight_limits({{mt_point(RVector::Ones(3), 2.0 * Quaternion::basis(1))}}, make_radial_weight(1.0, 3), 6);
    EXPECT_TRUE(family_invertibility_scan(ok, cfg).invertible);
}

TEST(FamilyScan, DiracRadialWeights) {
    LimitSet base{{dirac_point(RMatrix::Identity(3, 3), 0.0)}};
    FamilyScanConfig cfg;
    cfg.kind = OperatorKind::DiracMinusLambda;
    cfg.lambda = 0.8;
    cfg.xi.points_per_axis = 13;
    EXPECT_TRUE(family_invertibility_scan(attach_weight_limits(base, make_radial_weight(0.5, 3), 6), cfg).invertible);
    const auto bad = family_invertibility_scan(attach_weight_limits(base, make_radial_weight(0.6, 3), 6), cfg);
    EXPECT_FALSE(bad.invertible);
    EXPECT_EQ(bad.worst.t, 1.0);
}

TEST(FamilyScan, ResultIndependentOfThreads) {
    LimitSet base{{schrodinger_point(RMatrix::Identity(2, 2), 2.0 * CMatrix::Identity(1, 1))}};
    const auto limits = attach_weight_limits(base, make_radial_weight(0.7, 2), 5);
    FamilyScanConfig cfg;
    cfg.lambda = 1.0;
    const auto one = family_invertibility_scan(limits, cfg);
    cfg.threads = 3;
    const auto three = family_invertibility_scan(limits, cfg);
    EXPECT_EQ(one.worst.ratio, three.worst.ratio);
    EXPECT_EQ(one.worst.point, three.worst.point);
    EXPECT_EQ(one.worst.t, three.worst.t);
    EXPECT_EQ(one.evaluations, three.evaluations);
}
