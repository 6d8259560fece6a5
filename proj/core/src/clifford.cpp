#include "agmon/clifford.hpp"

namespace agmon {

namespace {

std::array<std::array<StructureConstant, 4>, 4> build_table() {
    std::array<std::array<StructureConstant, 4>, 4> t{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            StructureConstant s{1, 0};
            if (i == 0) {
                s = {1, j};
            } else if (j == 0) {
                s = {1, i};
            } else if (i == j) {
                s = {-1, 0};
            } else {
                // e1e2 = e3 and its cyclic shifts; reversed order flips the sign.
                const bool cyclic = (j - i + 3) % 3 == 1;
                s = {cyclic ? 1 : -1, 6 - i - j};
            }
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
        }
    }
    return t;
}

}  // namespace

Quaternion Quaternion::basis(int k) {
    Quaternion q;
    q[k] = 1.0;
    return q;
}

Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

Quaternion operator*(cplx s, const Quaternion& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }

Quaternion operator*(const Quaternion& a, const Quaternion& b) { return quat_mul(a, b); }

const std::array<std::array<StructureConstant, 4>, 4>& structure_constants() {
    static const auto table = build_table();
    return table;
}

Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
    const auto& t = structure_constants();
    Quaternion out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const auto& s = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            out[s.index] += static_cast<double>(s.sign) * a[i] * b[j];
        }
    }
    return out;
}

cplx quat_square_vector(const Quaternion& phi) {
    if (!phi.is_vector()) throw NonVectorQuaternion("quat_square_vector: scalar part must vanish");
    return quat_mul(phi, phi)[0];
}

Eigen::Matrix4d left_basis_mat(int k) {
    const auto& t = structure_constants();
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    // Column j holds the coefficients of e_k e_j.
    for (int j = 0; j < 4; ++j) {
        const auto& s = t[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        m(s.index, j) = s.sign;
    }
    return m;
}

Eigen::Matrix4cd left_mat(const Quaternion& q) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < 4; ++k) m += q[k] * left_basis_mat(k).cast<cplx>();
    return m;
}

Eigen::Matrix4cd right_mat(const Quaternion& phi) {
    const auto& t = structure_constants();
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    // Column j holds the coefficients of e_j phi.
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
            const auto& s = t[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            m(s.index, j) += static_cast<double>(s.sign) * phi[k];
        }
    }
    return m;
}

QuaternionMatrixRep QuaternionMatrixRep::standard() {
    QuaternionMatrixRep rep;
    for (int k = 0; k < 4; ++k) rep.left_mats[static_cast<std::size_t>(k)] = left_basis_mat(k);
    return rep;
}

double DiracBasis::anticommutation_defect() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t k = 0; k < 4; ++k) {
            Eigen::Matrix4cd m = gamma[j] * gamma[k] + gamma[k] * gamma[j];
            if (j == k) m -= 2.0 * identity;
            worst = std::max(worst, m.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

Eigen::Matrix4cd DiracBasis::chirality() const { return gamma[0] * gamma[1] * gamma[2] * gamma[3]; }

DiracBasis dirac_basis_standard() {
    const cplx i = kI;
    std::array<Eigen::Matrix2cd, 3> pauli;
    pauli[0] << 0, 1, 1, 0;
    pauli[1] << 0, -i, i, 0;
    pauli[2] << 1, 0, 0, -1;

    DiracBasis b;
    b.gamma[0] = Eigen::Matrix4cd::Zero();
    b.gamma[0].diagonal() << 1, 1, -1, -1;
    for (std::size_t k = 0; k < 3; ++k) {
        Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
        g.topRightCorner<2, 2>() = -i * pauli[k];
        g.bottomLeftCorner<2, 2>() = i * pauli[k];
        b.gamma[k + 1] = g;
    }
    return b;
}

}  // namespace agmon
