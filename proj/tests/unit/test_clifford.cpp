#include <gtest/gtest.h>

#include "agmon/clifford.hpp"
#include "oracles.hpp"

using namespace agmon;

namespace {

// Hamilton product in scalar/vector form: (a0, a)(b0, b) = (a0 b0 - a.b, a0 b + b0 a + a x b).
Quaternion hamilton(const Quaternion& a, const Quaternion& b) {
    const cplx a0 = a[0], b0 = b[0];
    const std::array<cplx, 3> av{a[1], a[2], a[3]}, bv{b[1], b[2], b[3]};
    const cplx dot = av[0] * bv[0] + av[1] * bv[1] + av[2] * bv[2];
    const std::array<cplx, 3> cross{av[1] * bv[2] - av[2] * bv[1], av[2] * bv[0] - av[0] * bv[2], av[0] * bv[1] - av[1] * bv[0]};
    Quaternion r;
    r[0] = a0 * b0 - dot;
    for (int k = 0; k < 3; ++k) r[k + 1] = a0 * bv[static_cast<std::size_t>(k)] + b0 * av[static_cast<std::size_t>(k)] + cross[static_cast<std::size_t>(k)];
    return r;
}

Quaternion random_quaternion() {
    return {oracle::cuniform(), oracle::cuniform(), oracle::cuniform(), oracle::cuniform()};
}

Quaternion random_integer_quaternion() {
    auto k = [] { return cplx(std::round(oracle::uniform(-5, 5)), std::round(oracle::uniform(-5, 5))); };
    return {k(), k(), k(), k()};
}

double distance(const Quaternion& a, const Quaternion& b) { return (a.coefficients() - b.coefficients()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Clifford, BasisRelations) {
    const auto e1 = Quaternion::basis(1), e2 = Quaternion::basis(2), e3 = Quaternion::basis(3);
    EXPECT_EQ(quat_mul(e1, e2), e3);
    EXPECT_EQ(quat_mul(e2, e3), e1);
    EXPECT_EQ(quat_mul(e3, e1), e2);
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(quat_mul(Quaternion::basis(k), Quaternion::basis(k)), Quaternion::scalar(-1.0));
    EXPECT_EQ(quat_mul(e2, e1), -1.0 * e3);
}

TEST(Clifford, UnitElement) {
    const auto q = random_quaternion();
    EXPECT_EQ(quat_mul(Quaternion::scalar(1.0), q), q);
    EXPECT_EQ(quat_mul(q, Quaternion::scalar(1.0)), q);
}

TEST(Clifford, StructureConstantsMatchHamiltonProduct) {
    const auto& table = structure_constants();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const auto expect = hamilton(Quaternion::basis(i), Quaternion::basis(j));
            const auto& sc = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            EXPECT_EQ(sc.sign * Quaternion::basis(sc.index), expect) << i << "," << j;
        }
}

TEST(Clifford, ProductMatchesOracle) {
    const Quaternion a = Quaternion::basis(1) + Quaternion::basis(2);
    const Quaternion b = Quaternion::basis(1) - Quaternion::basis(2);
    EXPECT_EQ(quat_mul(a, b), hamilton(a, b));
    EXPECT_EQ(quat_mul(a, b), Quaternion(0.0, 0.0, 0.0, -2.0));
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = random_quaternion(), y = random_quaternion();
        EXPECT_LE(distance(quat_mul(x, y), hamilton(x, y)), 1e-15);
    }
}

TEST(Clifford, AssociativityExactOnIntegers) {
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_integer_quaternion(), b = random_integer_quaternion(), c = random_integer_quaternion();
        EXPECT_EQ(quat_mul(quat_mul(a, b), c), quat_mul(a, quat_mul(b, c)));
    }
}

TEST(Clifford, AssociativityFloating) {
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_quaternion(), b = random_quaternion(), c = random_quaternion();
        EXPECT_LE(distance(quat_mul(quat_mul(a, b), c), quat_mul(a, quat_mul(b, c))), 1e-14);
    }
}

TEST(Clifford, SquareOfVectorQuaternion) {
    EXPECT_EQ(quat_square_vector(2.0 * Quaternion::basis(1)), cplx(-4.0));
    EXPECT_EQ(quat_square_vector(Quaternion::vector(1.0, 1.0, 1.0)), cplx(-3.0));
    const Quaternion phi = Quaternion::vector(0.0, cplx(1.0, 1.0), 0.0);
    EXPECT_LE(std::abs(quat_square_vector(phi) - cplx(0.0, -2.0)), 1e-15);
    EXPECT_LE(std::abs(quat_square_vector(phi) - hamilton(phi, phi)[0]), 1e-15);
    EXPECT_THROW(quat_square_vector(Quaternion(1.0, 1.0, 0.0, 0.0)), NonVectorQuaternion);
}

TEST(Clifford, LeftMatricesAreRealSkew) {
    const auto rep = QuaternionMatrixRep::standard();
    EXPECT_EQ(rep.left_mats[0], Eigen::Matrix4d::Identity());
    for (int j = 1; j <= 3; ++j) {
        const Eigen::Matrix4d g = rep.left_mats[static_cast<std::size_t>(j)];
        EXPECT_EQ(g.transpose(), -g);
        EXPECT_EQ(g * g, -Eigen::Matrix4d::Identity());
    }
}

TEST(Clifford, MatricesRepresentProducts) {
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = random_quaternion(), u = random_quaternion(), phi = random_quaternion();
        EXPECT_LE((left_mat(q) * u.coefficients() - hamilton(q, u).coefficients()).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LE((right_mat(phi) * u.coefficients() - hamilton(u, phi).coefficients()).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Clifford, LeftAndRightCommute) {
    for (int trial = 0; trial < 100; ++trial) {
        const auto phi = random_quaternion();
        for (int j = 0; j < 4; ++j) {
            const Eigen::Matrix4cd l = left_basis_mat(j).cast<cplx>();
            EXPECT_LE((l * right_mat(phi) - right_mat(phi) * l).cwiseAbs().maxCoeff(), 1e-15);
        }
    }
}

TEST(Clifford, RightMatrixReversesOrder) {
    for (int trial = 0; trial < 100; ++trial) {
        const auto phi = random_quaternion(), psi = random_quaternion();
        EXPECT_LE((right_mat(phi) * right_mat(psi) - right_mat(quat_mul(psi, phi))).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Clifford, DiracAnticommutation) {
    const auto b = dirac_basis_standard();
    EXPECT_EQ(b.anticommutation_defect(), 0.0);
    EXPECT_EQ(b.gamma[0] * b.gamma[1] + b.gamma[1] * b.gamma[0], Eigen::Matrix4cd::Zero());
    EXPECT_EQ(b.gamma[2] * b.gamma[2], Eigen::Matrix4cd::Identity());
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
            const Eigen::Matrix4cd ac = b.gamma[static_cast<std::size_t>(j)] * b.gamma[static_cast<std::size_t>(k)] +
                                        b.gamma[static_cast<std::size_t>(k)] * b.gamma[static_cast<std::size_t>(j)];
            const Eigen::Matrix4cd expect = (j == k ? 2.0 : 0.0) * Eigen::Matrix4cd::Identity();
            EXPECT_EQ(ac, expect) << j << "," << k;
        }
        EXPECT_EQ(b.gamma[static_cast<std::size_t>(j)].adjoint(), b.gamma[static_cast<std::size_t>(j)]);
    }
}

TEST(Clifford, ChiralityAnticommutesWithAllGammas) {
    const auto b = dirac_basis_standard();
    const Eigen::Matrix4cd g5 = b.chirality();
    for (const auto& g : b.gamma) EXPECT_EQ(g5 * g + g * g5, Eigen::Matrix4cd::Zero());
}
