#include "agmon/spectra.hpp"

#include <algorithm>

namespace agmon {

namespace {

// zeta^T rho zeta without conjugation.
cplx quadratic(const RMatrix& rho, const CVector& z) { return z.transpose() * rho.cast<cplx>() * z; }

CVector complexify(const RVector& xi, const RVector& g, double t) {
    CVector z = xi.cast<cplx>();
    if (g.size() == xi.size()) z += kI * t * g.cast<cplx>();
    return z;
}

double min_eig(const RMatrix& m) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

RVector weight_gradient(const LimitPoint& p) {
    return p.grad_v.size() == p.dim() ? p.grad_v : RVector(RVector::Zero(p.dim()));
}

void require_mt_data(const LimitPoint& p) {
    if (p.principal.size() != 3 || !p.quaternion)
        throw InvalidArgument("limit point '" + p.label + "' lacks Moisil-Theodorescu coefficients");
}

int odd_points(int requested, int dim) {
    int pts = requested > 0 ? requested : (dim <= 2 ? 64 : 24);
    if (pts % 2 == 0) ++pts;
    return std::max(pts, 3);
}

// Visits every node of the P^n box [-R, R]^n.
template <typename Fn>
void for_each_node(int dim, int pts, double half, Fn&& fn) {
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(pts);
    RVector xi(dim);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int d = 0; d < dim; ++d) {
            const auto k = static_cast<double>(rem % static_cast<std::size_t>(pts));
            rem /= static_cast<std::size_t>(pts);
            xi(d) = -half + 2.0 * half * k / static_cast<double>(pts - 1);
        }
        fn(xi);
    }
}

double tail_radius(const LimitPoint& p, const FamilyScanConfig& cfg, double t) {
    const RVector g = weight_gradient(p);
    switch (cfg.kind) {
        case OperatorKind::SchrodingerMinusLambda: {
            const double phi_norm = p.potential.size() ? p.potential.operatorNorm() : 0.0;
            const double need = std::abs(cfg.lambda) + phi_norm + t * t * g.dot(p.rho * g);
            return std::sqrt(std::max(0.0, need) / min_eig(p.rho));
        }
        case OperatorKind::MoisilTheodorescu: {
            const RVector a2 = p.principal.cwiseAbs2();
            const double need = t * t * a2.dot(g.cwiseAbs2()) + std::abs(p.quaternion->vector_square_sum());
            return std::sqrt(2.0 * need / a2.minCoeff());
        }
        case OperatorKind::DiracMinusLambda: {
            const auto& k = cfg.constants;
            const double mu = k.e * p.scalar_potential() + cfg.lambda;
            const double chh = k.c * k.c * k.h * k.h;
            const double need = mu * mu - k.rest_energy() * k.rest_energy() + chh * t * t * g.dot(p.rho * g);
            return std::sqrt(std::max(0.0, need) / (chh * min_eig(p.rho)));
        }
    }
    return 0.0;
}

// Size of the individual terms of the symbol, so that scalar symbols get a
// meaningful relative singularity measure.
double symbol_scale(const LimitPoint& p, const FamilyScanConfig& cfg, const RVector& xi, double t) {
    const RVector g = weight_gradient(p);
    switch (cfg.kind) {
        case OperatorKind::SchrodingerMinusLambda:
            return p.rho.norm() * (xi.squaredNorm() + t * t * g.squaredNorm()) + p.potential.norm() + std::abs(cfg.lambda);
        case OperatorKind::MoisilTheodorescu:
            return p.principal.cwiseAbs().dot(xi.cwiseAbs() + std::abs(t) * g.cwiseAbs()) + p.quaternion->coefficients().norm();
        case OperatorKind::DiracMinusLambda: {
            const auto& k = cfg.constants;
            return k.c * k.h * std::sqrt(p.rho.norm()) * (xi.norm() + std::abs(t) * g.norm()) + k.rest_energy() +
                   std::abs(k.e * p.scalar_potential() + cfg.lambda);
        }
    }
    return 1.0;
}

}  // namespace

// --- SpectrumSet ---------------------------------------------------------------

SpectrumSet::SpectrumSet(std::vector<Interval> components) {
    for (const auto& c : components)
        if (!(c.lo <= c.hi)) throw InvalidArgument("spectrum component with lo > hi");
    std::sort(components.begin(), components.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
    for (const auto& c : components) {
        if (!components_.empty() && c.lo <= components_.back().hi) {
            components_.back().hi = std::max(components_.back().hi, c.hi);
        } else {
            components_.push_back(c);
        }
    }
}

bool SpectrumSet::contains(double x) const {
    return std::any_of(components_.begin(), components_.end(), [x](const Interval& c) { return c.contains(x); });
}

bool SpectrumSet::is_whole_line() const {
    return components_.size() == 1 && components_.front().lo == -kInf && components_.front().hi == kInf;
}

std::vector<std::pair<double, double>> SpectrumSet::gaps() const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i < components_.size(); ++i) out.emplace_back(components_[i - 1].hi, components_[i].lo);
    return out;
}

SpectrumSet SpectrumSet::united(const SpectrumSet& other) const {
    auto all = components_;
    all.insert(all.end(), other.components_.begin(), other.components_.end());
    return SpectrumSet(std::move(all));
}

void PhysicalConstants::validate() const {
    if (!(h > 0.0 && c > 0.0 && m > 0.0 && e > 0.0)) throw InvalidArgument("physical constants must be positive");
}

std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::SchrodingerRate: return "schrodinger_rate";
        case BoundKind::SchrodingerGradient: return "schrodinger_gradient";
        case BoundKind::MtRate: return "mt_rate";
        case BoundKind::DiracExample: return "dirac_example";
    }
    return "unknown";
}

// --- Schrodinger -------------------------------------------------------------

CMatrix schrodinger_symbol(const LimitPoint& p, const RVector& xi) {
    const auto n = p.potential.rows();
    return xi.dot(p.rho * xi) * CMatrix::Identity(n, n) + p.potential;
}

CMatrix schrodinger_conjugated_symbol(const LimitPoint& p, const RVector& xi, double t) {
    const auto n = p.potential.rows();
    return quadratic(p.rho, complexify(xi, weight_gradient(p), t)) * CMatrix::Identity(n, n) + p.potential;
}

CMatrix schrodinger_conjugated_real_part(const LimitPoint& p, const RVector& xi) {
    const auto n = p.potential.rows();
    const RVector g = weight_gradient(p);
    return (xi.dot(p.rho * xi) - g.dot(p.rho * g)) * CMatrix::Identity(n, n) + p.potential;
}

SpectrumSet schrodinger_ess_spectrum(const LimitSet& limits) {
    limits.validate(true);
    std::vector<Interval> parts;
    for (const auto& p : limits.points) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(p.potential, Eigen::EigenvaluesOnly);
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) parts.push_back({es.eigenvalues()(j), kInf});
    }
    return SpectrumSet(std::move(parts));
}

DecayBoundReport schrodinger_decay_bound(double lambda, double d_phi, double rho_sup) {
    if (!(rho_sup > 0.0)) throw InvalidArgument("rho_sup must be positive");
    DecayBoundReport r;
    r.lambda = lambda;
    r.kind = BoundKind::SchrodingerRate;
    r.inputs = {{"d_phi", d_phi}, {"rho_sup", rho_sup}};
    if (lambda < d_phi) r.c_max = std::sqrt(d_phi - lambda) / rho_sup;
    return r;
}

DecayBoundReport schrodinger_gradient_bound(double lambda, double d_phi) {
    DecayBoundReport r;
    r.lambda = lambda;
    r.kind = BoundKind::SchrodingerGradient;
    r.inputs = {{"d_phi", d_phi}};
    if (lambda < d_phi) r.c_max = std::sqrt(d_phi - lambda);
    return r;
}

Admissibility schrodinger_weight_admissible(const Weight& w, const MetricField& rho, double lambda, double d_phi,
                                            const std::vector<double>& radii) {
    Admissibility a;
    a.estimate = grad_norm_limsup(w, rho, radii);
    a.bound = lambda < d_phi ? std::sqrt(d_phi - lambda) : 0.0;
    a.margin = a.bound - a.estimate;
    a.admissible = lambda < d_phi && a.margin > kStrictTol * std::max(1.0, a.bound);
    return a;
}

// --- Moisil-Theodorescu --------------------------------------------------------

Eigen::Matrix4cd mt_conjugated_symbol(const RVector& a, const Quaternion& phi, const RVector& xi, const RVector& g, double t) {
    if (!phi.is_vector()) throw NonVectorQuaternion("mt symbol: phi must be a vector quaternion");
    const CVector z = complexify(xi, g, t);
    Eigen::Matrix4cd m = right_mat(phi);
    for (int j = 0; j < 3; ++j) m += a(j) * (kI * z(j)) * left_basis_mat(j + 1).cast<cplx>();
    return m;
}

Eigen::Matrix4cd mt_symbol(const RVector& a, const Quaternion& phi, const RVector& xi) {
    return mt_conjugated_symbol(a, phi, xi, RVector(), 0.0);
}

Eigen::Matrix4cd mt_check_symbol(const RVector& a, const Quaternion& phi, const RVector& xi, const RVector& g, double t) {
    return mt_conjugated_symbol(a, phi, xi, g, t) - 2.0 * right_mat(phi);
}

cplx mt_product_scalar(const RVector& a, const Quaternion& phi, const RVector& xi, const RVector& g, double t) {
    const CVector z = complexify(xi, g, t);
    cplx s = phi.vector_square_sum();
    for (int j = 0; j < 3; ++j) s += a(j) * a(j) * z(j) * z(j);
    return s;
}

FredholmResult mt_fredholm_check(const LimitSet& limits, const XiGrid& grid, double tol) {
    if (limits.points.empty()) throw InvalidArgument("limit set must not be empty");
    FredholmResult out;
    out.min_value = kInf;
    for (std::size_t i = 0; i < limits.points.size(); ++i) {
        const auto& p = limits.points[i];
        require_mt_data(p);
        for (int j = 0; j < 3; ++j)
            if (std::abs(p.principal(j)) <= tol)
                throw DegenerateCoefficient("limit point '" + p.label + "': a_" + std::to_string(j + 1) + " vanishes");
        if (!p.quaternion->is_vector()) throw NonVectorQuaternion("limit point '" + p.label + "': phi has a scalar part");
        const RVector a2 = p.principal.cwiseAbs2();
        const cplx phi2 = p.quaternion->vector_square_sum();
        const double half = grid.half_width > 0.0 ? grid.half_width
                                                  : 1.1 * std::max(1.0, std::sqrt(2.0 * std::abs(phi2) / a2.minCoeff()));
        const int pts = odd_points(grid.points_per_axis, 3);
        for_each_node(3, pts, half, [&](const RVector& xi) {
            const double v = std::abs(a2.dot(xi.cwiseAbs2()) + phi2);
            if (v < out.min_value) {
                out.min_value = v;
                out.witness = {i, xi, 0.0, v};
            }
        });
    }
    out.fredholm = out.min_value > tol;
    return out;
}

Admissibility mt_weight_admissible(const VectorField& a, const std::function<Quaternion(const Point&)>& phi, const Weight& w,
                                   const std::vector<double>& radii) {
    const auto dirs = sphere_points(3, 64 * 3);
    std::vector<double> shell;
    double scale = 1.0;
    for (double r : radii) {
        double lo = kInf;
        for (const auto& d : dirs) {
            const Point x = r * d;
            const RVector av = a(x);
            const RVector g = w.grad_v(x);
            const Quaternion q = phi(x);
            double s = q.vector_square_sum().real();
            scale = std::max(scale, std::abs(s));
            for (int j = 0; j < 3; ++j) s -= av(j) * av(j) * g(j) * g(j);
            lo = std::min(lo, s);
        }
        shell.push_back(lo);
    }
    Admissibility out;
    out.estimate = tail_liminf(shell);
    out.bound = 0.0;
    out.margin = out.estimate;
    out.admissible = out.margin > kStrictTol * scale;
    return out;
}

DecayBoundReport mt_decay_bound(const VectorField& a, const std::function<Quaternion(const Point&)>& phi,
                                const std::vector<double>& radii) {
    const auto dirs = sphere_points(3, 64 * 3);
    std::vector<double> shell;
    for (double r : radii) {
        double lo = kInf;
        for (const auto& d : dirs) {
            const Point x = r * d;
            const RVector av = a(x);
            double denom = 0.0;
            for (int j = 0; j < 3; ++j) denom += av(j) * av(j) * d(j) * d(j);
            lo = std::min(lo, phi(x).vector_square_sum().real() / denom);
        }
        shell.push_back(lo);
    }
    DecayBoundReport r;
    r.kind = BoundKind::MtRate;
    const double ratio = tail_liminf(shell);
    r.inputs = {{"phi2_over_a2", ratio}};
    if (ratio > 0.0) r.c_max = std::sqrt(ratio);
    return r;
}

// --- Dirac ---------------------------------------------------------------------

Eigen::Matrix4cd dirac_conjugated_symbol(const LimitPoint& p, const PhysicalConstants& k, const DiracBasis& basis,
                                         const RVector& xi, double t) {
    const int n = p.dim();
    if (n < 1 || n > 3) throw InvalidArgument("Dirac symbols need 1 <= n <= 3");
    const RMatrix phi = spd_sqrt(p.rho);
    const CVector z = phi.cast<cplx>() * complexify(xi, weight_gradient(p), t);
    Eigen::Matrix4cd m = k.rest_energy() * basis.gamma[0];
    for (int j = 0; j < n; ++j) m += k.c * k.h * z(j) * basis.gamma[static_cast<std::size_t>(j + 1)];
    return m;
}

Eigen::Matrix4cd dirac_symbol(const LimitPoint& p, const PhysicalConstants& k, const DiracBasis& basis, const RVector& xi) {
    LimitPoint bare = p;
    bare.grad_v.resize(0);
    return dirac_conjugated_symbol(bare, k, basis, xi, 0.0) - k.e * p.scalar_potential() * Eigen::Matrix4cd::Identity();
}

std::pair<double, double> dirac_eigs(const LimitPoint& p, const PhysicalConstants& k, const RVector& xi) {
    const double root = std::sqrt(k.c * k.c * k.h * k.h * xi.dot(p.rho * xi) + k.rest_energy() * k.rest_energy());
    const double shift = -k.e * p.scalar_potential();
    return {shift - root, shift + root};
}

SpectrumSet dirac_ess_spectrum(double phi_inf, double phi_sup, const PhysicalConstants& k) {
    if (phi_inf > phi_sup) throw InvalidArgument("phi_inf must not exceed phi_sup");
    return SpectrumSet({Interval{-kInf, -k.e * phi_inf - k.rest_energy()}, Interval{-k.e * phi_sup + k.rest_energy(), kInf}});
}

bool dirac_fredholm(double phi_inf, double phi_sup, const PhysicalConstants& k) {
    if (phi_inf > phi_sup) throw InvalidArgument("phi_inf must not exceed phi_sup");
    const double edge = k.rest_energy() / k.e;
    return -edge < phi_inf && phi_sup < edge;
}

double dirac_conjugated_gamma(const LimitPoint& p, const PhysicalConstants& k, double t, double lambda, const RVector& xi) {
    const RVector g = weight_gradient(p);
    const double chh = k.c * k.c * k.h * k.h;
    const double mu = k.e * p.scalar_potential() + lambda;
    return chh * xi.dot(p.rho * xi) - chh * t * t * g.dot(p.rho * g) + k.rest_energy() * k.rest_energy() - mu * mu;
}

std::optional<std::pair<double, double>> dirac_gap(double phi_inf, double phi_sup, const PhysicalConstants& k) {
    const double lo = -k.e * phi_inf - k.rest_energy();
    const double hi = -k.e * phi_sup + k.rest_energy();
    if (lo < hi) return std::make_pair(lo, hi);
    return std::nullopt;
}

Admissibility dirac_weight_admissible(const Weight& w, const MetricField& rho, const PhysicalConstants& k, double lambda,
                                      double phi_inf, double phi_sup, const std::vector<double>& radii) {
    const auto gap = dirac_gap(phi_inf, phi_sup, k);
    if (!gap || !(gap->first < lambda && lambda < gap->second))
        throw LambdaNotInGap("lambda lies outside the gap of the essential spectrum");
    const double mu = k.e * phi_sup + lambda;
    const double rad = k.rest_energy() * k.rest_energy() - mu * mu;
    Admissibility a;
    a.bound = rad > 0.0 ? std::sqrt(rad) / (k.c * k.h) : 0.0;
    a.estimate = grad_norm_limsup(w, rho, radii);
    a.margin = a.bound - a.estimate;
    a.admissible = rad > 0.0 && a.margin > kStrictTol * std::max(1.0, a.bound);
    return a;
}

DecayBoundReport dirac_decay_bound(double lambda, double phi_inf, double phi_sup, double rho_sup,
                                   const PhysicalConstants& k) {
    const auto gap = dirac_gap(phi_inf, phi_sup, k);
    if (!gap || !(gap->first < lambda && lambda < gap->second))
        throw LambdaNotInGap("lambda lies outside the gap of the essential spectrum");
    if (!(rho_sup > 0.0)) throw InvalidArgument("rho_sup must be positive");
    DecayBoundReport r;
    r.lambda = lambda;
    r.kind = BoundKind::DiracExample;
    r.inputs = {{"phi_inf", phi_inf}, {"phi_sup", phi_sup}, {"rho_sup", rho_sup}};
    const double mu = k.e * phi_sup + lambda;
    const double rad = k.rest_energy() * k.rest_energy() - mu * mu;
    if (rad > 0.0) r.c_max = std::sqrt(rad) / (k.c * k.h * rho_sup);
    return r;
}

// --- Family scan ---------------------------------------------------------------

std::vector<double> default_t_grid(OperatorKind kind) {
    const double lo = kind == OperatorKind::DiracMinusLambda ? 0.0 : -1.0;
    std::vector<double> t;
    for (int i = 0; i <= 20; ++i) t.push_back(lo + (1.0 - lo) * i / 20.0);
    return t;
}

LimitSet attach_weight_limits(const LimitSet& base, const Weight& w, int directions) {
    const auto dirs = sphere_points(w.dim(), directions > 0 ? directions : 16 * w.dim());
    LimitSet out;
    out.provenance = base.provenance;
    for (const auto& p : base.points) {
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            LimitPoint q = p;
            q.grad_v = w.grad_limit(dirs[d]);
            q.label = p.label + "/dir" + std::to_string(d);
            out.points.push_back(std::move(q));
        }
    }
    return out;
}

CMatrix conjugated_limit_symbol(const LimitPoint& p, const FamilyScanConfig& cfg, const RVector& xi, double t) {
    switch (cfg.kind) {
        case OperatorKind::SchrodingerMinusLambda: {
            const auto n = p.potential.rows();
            return schrodinger_conjugated_symbol(p, xi, t) - cfg.lambda * CMatrix::Identity(n, n);
        }
        case OperatorKind::MoisilTheodorescu:
            require_mt_data(p);
            return mt_conjugated_symbol(p.principal, *p.quaternion, xi, weight_gradient(p), t);
        case OperatorKind::DiracMinusLambda: {
            const double mu = cfg.constants.e * p.scalar_potential() + cfg.lambda;
            return dirac_conjugated_symbol(p, cfg.constants, cfg.basis, xi, t) - mu * Eigen::Matrix4cd::Identity();
        }
    }
    throw InvalidArgument("unknown operator kind");
}

std::pair<double, double> singular_range(const CMatrix& m) {
    if (m.rows() == 1 && m.cols() == 1) return {std::abs(m(0, 0)), std::abs(m(0, 0))};
    if (m.rows() == 4 && m.cols() == 4) {
        const Eigen::Matrix4cd m4 = m;
        Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m4);
        const auto& s = svd.singularValues();
        return {s(3), s(0)};
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    return {s(s.size() - 1), s(0)};
}

ScanResult family_invertibility_scan(const LimitSet& limits, const FamilyScanConfig& cfg) {
    if (limits.points.empty()) throw InvalidArgument("limit set must not be empty");
    if (cfg.kind == OperatorKind::DiracMinusLambda) cfg.constants.validate();
    const auto t_grid = cfg.t_grid.empty() ? default_t_grid(cfg.kind) : cfg.t_grid;

    struct Slot {
        ScanWitness worst;
        std::size_t evaluations = 0;
    };
    const std::size_t jobs = limits.points.size() * t_grid.size();
    std::vector<Slot> slots(jobs);

    parallel_for(jobs, cfg.threads, [&](std::size_t job) {
        const std::size_t pi = job / t_grid.size();
        const double t = t_grid[job % t_grid.size()];
        const auto& p = limits.points[pi];
        const int dim = p.dim();
        const double half = cfg.xi.half_width > 0.0 ? cfg.xi.half_width : 1.1 * std::max(1.0, tail_radius(p, cfg, t));
        const int pts = odd_points(cfg.xi.points_per_axis, dim);
        Slot& slot = slots[job];
        slot.worst.ratio = kInf;
        for_each_node(dim, pts, half, [&](const RVector& xi) {
            const auto [smin, smax] = singular_range(conjugated_limit_symbol(p, cfg, xi, t));
            const double scale = std::max(smax, symbol_scale(p, cfg, xi, t));
            const double ratio = scale > 0.0 ? smin / scale : 0.0;
            ++slot.evaluations;
            if (ratio < slot.worst.ratio) slot.worst = {pi, t, xi, smin, ratio};
        });
    });

    ScanResult out;
    out.worst.ratio = kInf;
    for (const auto& s : slots) {
        out.evaluations += s.evaluations;
        if (s.worst.ratio < out.worst.ratio) out.worst = s.worst;
    }
    out.invertible = out.worst.ratio > cfg.rel_tol;
    return out;
}

}  // namespace agmon
