#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace agmon {

using cplx = std::complex<double>;

using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// A point of R^n. Dimension is carried by the vector size.
using Point = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// Errors. Every failure mode named by a contract gets its own type so callers
// can dispatch on it; all derive from agmon::Error.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define AGMON_DECLARE_ERROR(Name)                 \
    class Name : public Error {                   \
    public:                                       \
        using Error::Error;                       \
    }

AGMON_DECLARE_ERROR(NonVectorQuaternion);
AGMON_DECLARE_ERROR(NotHermitian);
AGMON_DECLARE_ERROR(NonPositiveRate);
AGMON_DECLARE_ERROR(NonPositiveSphereFunction);
AGMON_DECLARE_ERROR(DegenerateCoefficient);
AGMON_DECLARE_ERROR(MetricNotSPD);
AGMON_DECLARE_ERROR(LambdaNotInGap);
AGMON_DECLARE_ERROR(GridTooCoarse);
AGMON_DECLARE_ERROR(FactorizationSingular);
AGMON_DECLARE_ERROR(NoEigenvalueInWindow);
AGMON_DECLARE_ERROR(ConvergenceFailure);
AGMON_DECLARE_ERROR(WindowTooSmall);
AGMON_DECLARE_ERROR(SolverStagnation);
AGMON_DECLARE_ERROR(InvalidArgument);

#undef AGMON_DECLARE_ERROR

/// Raised by ray sampling when a field has no limit along some direction.
class NonConvergent : public Error {
public:
    NonConvergent(const std::string& what, std::size_t direction_index)
        : Error(what), direction_(direction_index) {}
    std::size_t direction() const noexcept { return direction_; }

private:
    std::size_t direction_;
};

/// <x> = (1 + |x|^2)^{1/2}
inline double japanese_bracket(const Point& x) { return std::sqrt(1.0 + x.squaredNorm()); }

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work is split
/// into contiguous chunks; callers write into per-index slots so results do not
/// depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, count);
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, w, &body, &failures] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

}  // namespace agmon
