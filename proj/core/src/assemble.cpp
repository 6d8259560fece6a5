#include "agmon/assemble.hpp"

#include <optional>
#include <ostream>

namespace agmon {

namespace {

using Triplet = Eigen::Triplet<cplx>;

// Neighbour of `node` shifted by `step` along `axis`, or nullopt outside the box.
std::optional<std::size_t> neighbour(const Grid& g, std::size_t node, int axis, int step, bool periodic) {
    auto idx = g.index(node);
    int i = idx[static_cast<std::size_t>(axis)] + step;
    const int p = g.points_per_axis;
    if (i < 0 || i >= p) {
        if (!periodic) return std::nullopt;
        i = ((i % p) + p) % p;
    }
    idx[static_cast<std::size_t>(axis)] = i;
    std::size_t out = 0;
    for (int d = g.dim - 1; d >= 0; --d) out = out * static_cast<std::size_t>(p) + static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
    return out;
}

Point shifted(const Grid& g, const Point& x, int axis, double amount) {
    Point y = x;
    y(axis) += amount * g.spacing();
    return y;
}

// Per-node triplet lists gathered in node order so the result does not depend on threads.
template <typename RowFn>
SparseMatrix build(const Grid& g, unsigned threads, RowFn&& row) {
    std::vector<std::vector<Triplet>> per_node(g.nodes());
    parallel_for(g.nodes(), threads, [&](std::size_t node) { row(node, per_node[node]); });
    std::size_t total = 0;
    for (const auto& v : per_node) total += v.size();
    std::vector<Triplet> all;
    all.reserve(total);
    for (auto& v : per_node) all.insert(all.end(), v.begin(), v.end());
    const auto n = static_cast<Eigen::Index>(g.unknowns());
    SparseMatrix m(n, n);
    m.setFromTriplets(all.begin(), all.end());
    m.makeCompressed();
    return m;
}

void add_block(std::vector<Triplet>& out, std::size_t row_node, std::size_t col_node, int block, const CMatrix& b) {
    const auto r0 = static_cast<Eigen::Index>(row_node) * block;
    const auto c0 = static_cast<Eigen::Index>(col_node) * block;
    for (int i = 0; i < block; ++i)
        for (int j = 0; j < block; ++j)
            if (b(i, j) != cplx(0.0)) out.emplace_back(r0 + i, c0 + j, b(i, j));
}

void add_scalar(std::vector<Triplet>& out, std::size_t row_node, std::size_t col_node, int block, cplx v) {
    const auto r0 = static_cast<Eigen::Index>(row_node) * block;
    const auto c0 = static_cast<Eigen::Index>(col_node) * block;
    for (int i = 0; i < block; ++i) out.emplace_back(r0 + i, c0 + i, v);
}

double coarseness(const Grid& g, const MetricField& rho, const VectorField& a) {
    const double h = g.spacing();
    double amax = 0.0, var = 0.0;
    std::vector<double> root(g.nodes());
    for (std::size_t n = 0; n < g.nodes(); ++n) {
        const Point x = g.point(n);
        amax = std::max(amax, a(x).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<RMatrix> es(rho(x), Eigen::EigenvaluesOnly);
        root[n] = std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
    }
    for (std::size_t n = 0; n < g.nodes(); ++n)
        for (int d = 0; d < g.dim; ++d)
            if (auto m = neighbour(g, n, d, 1, false)) var = std::max(var, std::abs(root[*m] - root[n]) / root[n]);
    return h * amax + var;
}

}  // namespace

std::size_t Grid::nodes() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(points_per_axis);
    return n;
}

void Grid::validate() const {
    if (dim < 1 || dim > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
    if (points_per_axis < 8) throw InvalidArgument("grid needs at least 8 points per axis");
    if (!(half_width > 0.0)) throw InvalidArgument("grid half width must be positive");
    if (block < 1) throw InvalidArgument("block size must be positive");
}

std::array<int, 3> Grid::index(std::size_t node) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = 0; d < dim; ++d) {
        idx[static_cast<std::size_t>(d)] = static_cast<int>(node % static_cast<std::size_t>(points_per_axis));
        node /= static_cast<std::size_t>(points_per_axis);
    }
    return idx;
}

Point Grid::point(std::size_t node) const {
    const auto idx = index(node);
    Point x(dim);
    for (int d = 0; d < dim; ++d) x(d) = -half_width + idx[static_cast<std::size_t>(d)] * spacing();
    return x;
}

std::string to_string(Family f) {
    switch (f) {
        case Family::Schrodinger: return "schrodinger";
        case Family::MoisilTheodorescu: return "mt";
        case Family::Dirac: return "dirac";
    }
    return "unknown";
}

double AssembledOperator::hermiticity_defect() const {
    const SparseMatrix diff = SparseMatrix(matrix.adjoint()) - matrix;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

int AssembledOperator::max_row_nonzeros() const {
    std::vector<int> count(static_cast<std::size_t>(matrix.rows()), 0);
    for (Eigen::Index k = 0; k < matrix.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) ++count[static_cast<std::size_t>(it.row())];
    return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

void AssembledOperator::write_coo(std::ostream& os) const {
    const Eigen::SparseMatrix<cplx, Eigen::RowMajor> rm(matrix);
    char buf[128];
    for (Eigen::Index r = 0; r < rm.outerSize(); ++r)
        for (decltype(rm)::InnerIterator it(rm, r); it; ++it) {
            std::snprintf(buf, sizeof buf, "%td %td %.17g %.17g\n", static_cast<std::ptrdiff_t>(it.row()),
                          static_cast<std::ptrdiff_t>(it.col()), it.value().real(), it.value().imag());
            os << buf;
        }
}

AssembledOperator assemble_schrodinger(const MetricField& rho, const VectorField& a, const MatrixField& phi, const Grid& grid,
                                       const AssemblyOptions& opt) {
    grid.validate();
    if (rho.dim() != grid.dim || a.dim() != grid.dim || phi.dim() != grid.dim)
        throw InvalidArgument("field dimensions do not match the grid");
    if (phi.block() != grid.block) throw InvalidArgument("potential block size does not match the grid");
    if (coarseness(grid, rho, a) > opt.coarseness_limit)
        throw GridTooCoarse("grid spacing too large for the magnetic potential or metric variation");

    const double h = grid.spacing();
    const int n = grid.dim;
    const int blk = grid.block;

    auto row = [&](std::size_t node, std::vector<Triplet>& out) {
        const Point x = grid.point(node);
        cplx diag = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int s : {-1, 1}) {
                const Point mid = shifted(grid, x, j, 0.5 * s);
                const double w = rho(mid)(j, j) / (h * h);
                diag += w;
                if (auto m = neighbour(grid, node, j, s, opt.periodic)) {
                    const cplx phase = std::exp(kI * (s * h * a(mid)(j)));
                    add_scalar(out, node, *m, blk, -w * phase);
                }
            }
        }
        // -C_j rho^{jk} C_k, centred covariant differences, j != k.
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (j == k) continue;
                for (int sj : {-1, 1}) {
                    auto y = neighbour(grid, node, j, sj, opt.periodic);
                    if (!y) continue;
                    const Point xy = shifted(grid, x, j, sj);
                    const cplx uj = std::exp(kI * (sj * h * a(shifted(grid, x, j, 0.5 * sj))(j)));
                    const double r = rho(xy)(j, k);
                    if (r == 0.0) continue;
                    for (int sk : {-1, 1}) {
                        auto z = neighbour(grid, *y, k, sk, opt.periodic);
                        if (!z) continue;
                        const cplx uk = std::exp(kI * (sk * h * a(shifted(grid, xy, k, 0.5 * sk))(k)));
                        add_scalar(out, node, *z, blk, -static_cast<double>(sj * sk) / (4.0 * h * h) * uj * r * uk);
                    }
                }
            }
        }
        CMatrix b = phi(x);
        b.diagonal().array() += diag;
        add_block(out, node, node, blk, b);
    };

    AssembledOperator op;
    op.matrix = build(grid, opt.threads, row);
    op.grid = grid;
    op.hermitian = phi.hermitian();
    op.family = Family::Schrodinger;
    op.periodic = opt.periodic;
    return op;
}

AssembledOperator assemble_mt(const VectorField& a, const std::function<Quaternion(const Point&)>& phi, const Grid& grid_in,
                              const AssemblyOptions& opt) {
    Grid grid = grid_in;
    grid.block = 4;
    grid.validate();
    if (grid.dim != 3) throw InvalidArgument("Moisil-Theodorescu operators need n = 3");
    if (a.dim() != 3) throw InvalidArgument("principal coefficients need three components");
    const double h = grid.spacing();
    std::array<CMatrix, 3> left;
    for (int j = 0; j < 3; ++j) left[static_cast<std::size_t>(j)] = left_basis_mat(j + 1).cast<cplx>();

    auto row = [&](std::size_t node, std::vector<Triplet>& out) {
        const Point x = grid.point(node);
        const Quaternion q = phi(x);
        if (!q.is_vector()) throw NonVectorQuaternion("phi must be a vector quaternion at every grid point");
        const RVector av = a(x);
        add_block(out, node, node, 4, right_mat(q));
        for (int j = 0; j < 3; ++j)
            for (int s : {-1, 1})
                if (auto m = neighbour(grid, node, j, s, opt.periodic))
                    add_block(out, node, *m, 4, (s * av(j) / (2.0 * h)) * left[static_cast<std::size_t>(j)]);
    };

    AssembledOperator op;
    op.matrix = build(grid, opt.threads, row);
    op.grid = grid;
    op.hermitian = false;
    op.family = Family::MoisilTheodorescu;
    op.periodic = opt.periodic;
    return op;
}

AssembledOperator assemble_dirac(const MetricField& rho, const VectorField& A, const ScalarField& phi, const PhysicalConstants& k,
                                 const DiracBasis& basis, const Grid& grid_in, const AssemblyOptions& opt) {
    Grid grid = grid_in;
    grid.block = 4;
    grid.validate();
    k.validate();
    if (rho.dim() != grid.dim || A.dim() != grid.dim) throw InvalidArgument("field dimensions do not match the grid");
    const double h = grid.spacing();
    const int n = grid.dim;

    auto gamma_of = [&](const RVector& coeffs) {
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        for (int i = 0; i < n; ++i) m += coeffs(i) * basis.gamma[static_cast<std::size_t>(i + 1)];
        return m;
    };

    auto row = [&](std::size_t node, std::vector<Triplet>& out) {
        const Point x = grid.point(node);
        const RMatrix root = spd_sqrt(rho(x));
        Eigen::Matrix4cd diag = gamma_of(k.e * (root * A(x))) + k.rest_energy() * basis.gamma[0];
        diag -= k.e * phi(x).real() * Eigen::Matrix4cd::Identity();
        add_block(out, node, node, 4, diag);
        for (int j = 0; j < n; ++j)
            for (int s : {-1, 1})
                if (auto m = neighbour(grid, node, j, s, opt.periodic)) {
                    const RMatrix rm = spd_sqrt(rho(shifted(grid, x, j, 0.5 * s)));
                    const cplx coef = -kI * static_cast<double>(s) * k.c * k.h / (2.0 * h);
                    add_block(out, node, *m, 4, coef * gamma_of(rm.row(j).transpose()));
                }
    };

    AssembledOperator op;
    op.matrix = build(grid, opt.threads, row);
    op.grid = grid;
    op.hermitian = true;
    op.family = Family::Dirac;
    op.periodic = opt.periodic;
    return op;
}

}  // namespace agmon
