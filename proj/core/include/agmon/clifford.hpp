#pragma once

#include <array>

#include "agmon/common.hpp"

namespace agmon {

/// Complex quaternion q0 + q1 e1 + q2 e2 + q3 e3 with complex coefficients.
/// The imaginary unit i commutes with every basis element.
struct Quaternion {
    std::array<cplx, 4> c{};

    Quaternion() = default;
    Quaternion(cplx q0, cplx q1, cplx q2, cplx q3) : c{q0, q1, q2, q3} {}

    static Quaternion scalar(cplx s) { return {s, 0.0, 0.0, 0.0}; }
    static Quaternion vector(cplx q1, cplx q2, cplx q3) { return {0.0, q1, q2, q3}; }
    /// Basis element: k = 0 gives 1, k = 1..3 give e_k.
    static Quaternion basis(int k);

    cplx operator[](int k) const { return c[static_cast<std::size_t>(k)]; }
    cplx& operator[](int k) { return c[static_cast<std::size_t>(k)]; }

    bool is_vector(double tol = 0.0) const { return std::abs(c[0]) <= tol; }
    /// sum_j q_j^2 over the vector part (no conjugation).
    cplx vector_square_sum() const { return c[1] * c[1] + c[2] * c[2] + c[3] * c[3]; }

    Eigen::Vector4cd coefficients() const { return {c[0], c[1], c[2], c[3]}; }
    static Quaternion from_coefficients(const Eigen::Vector4cd& v) { return {v(0), v(1), v(2), v(3)}; }

    friend Quaternion operator+(const Quaternion& a, const Quaternion& b);
    friend Quaternion operator-(const Quaternion& a, const Quaternion& b);
    friend Quaternion operator*(cplx s, const Quaternion& a);
    friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
    friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Entry of the multiplication table: e_i e_j = sign * e_index.
struct StructureConstant {
    int sign;
    int index;
};

/// The 4x4 multiplication table of {1, e1, e2, e3}, generated from
/// e1e2 = e3, e2e3 = e1, e3e1 = e2, e_k^2 = -1 and anticommutation.
const std::array<std::array<StructureConstant, 4>, 4>& structure_constants();

Quaternion quat_mul(const Quaternion& a, const Quaternion& b);

/// phi^2 for a vector quaternion, which is the scalar -(phi1^2 + phi2^2 + phi3^2).
/// Throws NonVectorQuaternion when the scalar part is non-zero.
cplx quat_square_vector(const Quaternion& phi);

/// Real 4x4 matrix of left multiplication by basis element k (E4, gamma_1..3).
Eigen::Matrix4d left_basis_mat(int k);

/// Matrix of u -> q u in the coefficient basis.
Eigen::Matrix4cd left_mat(const Quaternion& q);

/// Matrix of u -> u phi (the right multiplication M^phi) in the coefficient basis.
Eigen::Matrix4cd right_mat(const Quaternion& phi);

/// Left multiplication matrices of the basis {1, e1, e2, e3}.
struct QuaternionMatrixRep {
    std::array<Eigen::Matrix4d, 4> left_mats;

    static QuaternionMatrixRep standard();
    Eigen::Matrix4cd right(const Quaternion& phi) const { return right_mat(phi); }
};

/// Euclidean Dirac matrices: gamma_j gamma_k + gamma_k gamma_j = 2 delta_jk E.
struct DiracBasis {
    std::array<Eigen::Matrix4cd, 4> gamma;
    Eigen::Matrix4cd identity = Eigen::Matrix4cd::Identity();

    /// Largest entry of gamma_j gamma_k + gamma_k gamma_j - 2 delta_jk E over all 16 pairs.
    double anticommutation_defect() const;
    /// gamma_0 gamma_1 gamma_2 gamma_3; anticommutes with every gamma_k.
    Eigen::Matrix4cd chirality() const;
};

/// Dirac representation: gamma_0 = diag(1,1,-1,-1), gamma_k = [[0, -i s_k], [i s_k, 0]].
DiracBasis dirac_basis_standard();

}  // namespace agmon
