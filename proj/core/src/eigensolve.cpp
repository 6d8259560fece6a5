#include "agmon/eigensolve.hpp"

#include <optional>
#include <random>

namespace agmon {

namespace {

constexpr std::size_t kMaxBlockCount = 16;
constexpr int kMaxDepth = 10;
constexpr int kSplitBudget = 150;

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower>;

double inf_norm(const SparseMatrix& a) {
    RVector rows = RVector::Zero(a.rows());
    for (Eigen::Index k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) rows(it.row()) += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

SparseMatrix shifted(const SparseMatrix& a, double sigma) {
    SparseMatrix id(a.rows(), a.cols());
    id.setIdentity();
    return a - cplx(sigma) * id;
}

// Factorizes A - sigma I; returns the number of negative pivots or throws FactorizationSingular.
std::size_t factor(Ldlt& solver, const SparseMatrix& a, double sigma, double scale) {
    solver.compute(shifted(a, sigma));
    if (solver.info() != Eigen::Success) throw FactorizationSingular("LDL factorization failed at the shift");
    const auto d = solver.vectorD();
    std::size_t neg = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double v = std::real(d(i));
        if (!(std::abs(v) > 1e-14 * scale)) throw FactorizationSingular("shift coincides with an eigenvalue");
        if (v < 0.0) ++neg;
    }
    return neg;
}

class Context {
public:
    Context(const SparseMatrix& a, const GapQuery& q) : a_(a), q_(q), rng_(q.seed), scale_(std::max(1.0, inf_norm(a))) {}

    // Inertia at sigma, nudging the shift when it hits an eigenvalue.
    std::pair<std::size_t, double> count(double sigma, double width) {
        for (int attempt = 0;; ++attempt) {
            try {
                Ldlt solver;
                return {factor(solver, a_, sigma, scale_), sigma};
            } catch (const FactorizationSingular&) {
                if (attempt >= 8) throw;
                std::uniform_real_distribution<double> jitter(-1.0, 1.0);
                sigma += 1e-7 * std::max(width, 1e-12 * scale_) * jitter(rng_);
            }
        }
    }

    void solve_window(double lo, double hi, std::size_t below_lo, std::size_t below_hi, std::vector<EigenPair>& out,
                      int depth = 0) {
        const std::size_t cnt = below_hi - below_lo;
        if (cnt == 0 || static_cast<int>(out.size()) >= q_.max_pairs) return;
        const double width = hi - lo;
        const bool splittable = width > 1e-12 * scale_ && depth < kMaxDepth;
        auto split = [&] {
            const auto [below_mid, mid] = count(0.5 * (lo + hi), width);
            solve_window(lo, mid, below_lo, below_mid, out, depth + 1);
            solve_window(mid, hi, below_mid, below_hi, out, depth + 1);
        };
        if (cnt > kMaxBlockCount && splittable) return split();
        // Slow contraction means an eigenvalue sits far from the shift; a narrower window moves the shift closer.
        auto pairs = iterate(lo, hi, cnt, splittable ? std::min(q_.max_iterations, kSplitBudget) : q_.max_iterations);
        if (!pairs) {
            if (!splittable) throw ConvergenceFailure("shift-invert iteration did not converge within " +
                                                      std::to_string(q_.max_iterations) + " iterations");
            return split();
        }
        for (auto& p : *pairs) {
            if (static_cast<int>(out.size()) >= q_.max_pairs) break;
            out.push_back(std::move(p));
        }
    }

private:
    std::optional<std::vector<EigenPair>> iterate(double lo, double hi, std::size_t cnt, int budget) {
        const Eigen::Index n = a_.rows();
        const Eigen::Index b = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(cnt + std::max<std::size_t>(4, cnt)));
        const double width = hi - lo;

        Ldlt solver;
        double sigma = 0.5 * (lo + hi);
        for (int attempt = 0;; ++attempt) {
            try {
                factor(solver, a_, sigma, scale_);
                break;
            } catch (const FactorizationSingular&) {
                if (attempt >= 8) throw;
                std::uniform_real_distribution<double> jitter(-1.0, 1.0);
                sigma += 1e-3 * width * jitter(rng_);
            }
        }
        const SparseMatrix shifted_a = shifted(a_, sigma);

        std::normal_distribution<double> normal;
        CMatrix x(n, b);
        for (Eigen::Index j = 0; j < b; ++j)
            for (Eigen::Index i = 0; i < n; ++i) x(i, j) = cplx(normal(rng_), normal(rng_));

        std::vector<double> previous;
        for (int it = 0; it < budget; ++it) {
            CMatrix y = solver.solve(x);
            y += solver.solve(CMatrix(x - shifted_a * y));
            Eigen::HouseholderQR<CMatrix> qr(y);
            const CMatrix qm = qr.householderQ() * CMatrix::Identity(n, b);
            const CMatrix aq = a_ * qm;
            CMatrix h = qm.adjoint() * aq;
            h = 0.5 * (h + h.adjoint()).eval();
            Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
            x = qm * es.eigenvectors();
            const CMatrix ax = aq * es.eigenvectors();

            std::vector<double> current;
            std::vector<EigenPair> pairs;
            bool residuals_ok = true;
            for (Eigen::Index j = 0; j < b; ++j) {
                const double theta = es.eigenvalues()(j);
                if (!(lo < theta && theta < hi)) continue;
                EigenPair p;
                p.lambda = theta;
                p.vector = x.col(j).normalized();
                p.residual = (ax.col(j) - theta * x.col(j)).norm() / x.col(j).norm();
                residuals_ok = residuals_ok && p.residual <= q_.tol;
                current.push_back(theta);
                pairs.push_back(std::move(p));
            }
            bool settled = current.size() == cnt && previous.size() == cnt;
            for (std::size_t i = 0; settled && i < cnt; ++i)
                settled = std::abs(current[i] - previous[i]) <= 1e-10 * std::max(1.0, std::abs(current[i]));
            if (settled && residuals_ok) return pairs;
            previous = std::move(current);
        }
        return std::nullopt;
    }

    const SparseMatrix& a_;
    const GapQuery& q_;
    std::mt19937_64 rng_;
    double scale_;
};

}  // namespace

DenseEigen dense_hermitian_eig(const CMatrix& m, bool compute_vectors) {
    if (m.rows() != m.cols()) throw InvalidArgument("matrix must be square");
    const double norm = m.norm();
    if ((m - m.adjoint()).norm() > 1e-10 * norm) throw NotHermitian("matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, compute_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("dense Hermitian eigensolver failed");
    DenseEigen out;
    out.values = es.eigenvalues();
    if (compute_vectors) out.vectors = es.eigenvectors();
    return out;
}

std::size_t count_below(const SparseMatrix& a, double sigma) {
    Ldlt solver;
    return factor(solver, a, sigma, std::max(1.0, inf_norm(a)));
}

double residual_norm(const SparseMatrix& a, const CVector& u, double lambda) {
    return (a * u - lambda * u).norm() / u.norm();
}

EigenPair refine_eigenvector(const SparseMatrix& a, const EigenPair& p, int steps) {
    const double scale = std::max(1.0, inf_norm(a));
    Ldlt solver;
    double sigma = p.lambda;
    for (int attempt = 0;; ++attempt) {
        try {
            factor(solver, a, sigma, scale);
            break;
        } catch (const FactorizationSingular&) {
            if (attempt >= 8) throw;
            sigma += 1e-13 * scale * (attempt + 1);
        }
    }
    EigenPair out = p;
    for (int k = 0; k < steps; ++k) out.vector = solver.solve(out.vector).normalized();
    out.residual = residual_norm(a, out.vector, out.lambda);
    return out;
}

std::vector<EigenPair> gap_eigenpairs(const SparseMatrix& a, const GapQuery& q) {
    if (!(q.lo < q.hi)) throw InvalidArgument("gap window needs lo < hi");
    if (a.rows() != a.cols()) throw InvalidArgument("operator must be square");
    const double scale = std::max(1.0, inf_norm(a));
    const SparseMatrix defect = SparseMatrix(a.adjoint()) - a;
    for (Eigen::Index k = 0; k < defect.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(defect, k); it; ++it)
            if (std::abs(it.value()) > 1e-10 * scale) throw NotHermitian("gap_eigenpairs needs a Hermitian operator");

    Context ctx(a, q);
    const double width = q.hi - q.lo;
    const auto [below_lo, lo] = ctx.count(q.lo, width);
    const auto [below_hi, hi] = ctx.count(q.hi, width);
    if (below_hi <= below_lo) throw NoEigenvalueInWindow("no eigenvalue inside the window");
    std::vector<EigenPair> out;
    ctx.solve_window(lo, hi, below_lo, below_hi, out);
    return out;
}

std::vector<EigenPair> gap_eigenpairs(const AssembledOperator& a, const GapQuery& q) {
    if (!a.hermitian) throw NotHermitian("operator is not flagged Hermitian");
    return gap_eigenpairs(a.matrix, q);
}

}  // namespace agmon
