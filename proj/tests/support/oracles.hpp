#pragma once

#include <random>

#include "agmon/common.hpp"

namespace oracle {

using agmon::cplx;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240917);
    return gen;
}

inline double uniform(double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

inline cplx cuniform() { return {uniform(), uniform()}; }

inline agmon::RVector rvec(int n, double lo = -1.0, double hi = 1.0) {
    agmon::RVector v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
}

/// Random SPD matrix with eigenvalues in [lo, hi].
inline agmon::RMatrix spd(int n, double lo = 0.5, double hi = 2.0) {
    agmon::RMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = uniform();
    Eigen::HouseholderQR<agmon::RMatrix> qr(a);
    const agmon::RMatrix q = qr.householderQ();
    agmon::RVector d(n);
    for (int i = 0; i < n; ++i) d(i) = uniform(lo, hi);
    return q * d.asDiagonal() * q.transpose();
}

inline agmon::CMatrix hermitian(int n) {
    agmon::CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cuniform();
    return 0.5 * (a + a.adjoint());
}

}  // namespace oracle
