#include "agmon/decay.hpp"

#include <limits>
#include <map>

namespace agmon {

RadialProfile radial_profile(const CVector& u, const Grid& grid) {
    const double width = 2.0 * grid.spacing();
    const int blk = grid.block;
    std::map<long, std::pair<double, double>> shells;  // shell -> (sup, radius of maximiser)
    std::map<long, int> counts;
    for (std::size_t node = 0; node < grid.nodes(); ++node) {
        const double r = grid.point(node).norm();
        const long s = static_cast<long>(std::floor(r / width));
        const double v = u.segment(static_cast<Eigen::Index>(node) * blk, blk).norm();
        auto [it, fresh] = shells.try_emplace(s, v, r);
        if (!fresh && v > it->second.first) it->second = {v, r};
        ++counts[s];
    }
    RadialProfile p;
    for (const auto& [s, entry] : shells) {
        const double r = entry.second;
        if (!p.radii.empty() && r <= p.radii.back()) continue;
        p.radii.push_back(r);
        p.sup_abs.push_back(entry.first);
        p.shell_counts.push_back(counts[s]);
    }
    return p;
}

DecayFit fit_decay_exponent(const RadialProfile& p, const FitWindow& window) {
    double peak = 0.0;
    for (double v : p.sup_abs) peak = std::max(peak, v);
    const double floor = 10.0 * std::numeric_limits<double>::epsilon() * peak;

    DecayFit fit;
    fit.window = window;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        const double r = p.radii[i];
        if (r < window.r_min || r > window.r_max) continue;
        if (!(p.sup_abs[i] > floor)) {
            fit.underflow = true;
            fit.window.r_max = xs.empty() ? window.r_min : xs.back();
            break;
        }
        xs.push_back(r);
        ys.push_back(-std::log(p.sup_abs[i]));
    }
    fit.shells = static_cast<int>(xs.size());
    if (xs.size() < 6) throw WindowTooSmall("fit window holds " + std::to_string(xs.size()) + " shells, need 6");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.c_measured = sxy / sxx;
    const double intercept = my - fit.c_measured * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + fit.c_measured * xs[i]);
        ss_res += e * e;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "certified";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Violated: return "violated";
    }
    return "unknown";
}

DecayCertificate certify(const DecayFit& fit, const DecayBoundReport& report, double slack) {
    DecayCertificate c;
    c.lambda = report.lambda;
    c.c_measured = fit.c_measured;
    c.fit_window = fit.window;
    c.fit_r2 = fit.r2;
    if (!report.feasible()) {
        c.reason = "decay bound infeasible at this lambda";
        return c;
    }
    c.c_predicted = *report.c_max;
    if (fit.r2 < kMinFitR2) {
        c.reason = "fit quality below threshold";
        return c;
    }
    const double need = (1.0 - slack) * c.c_predicted;
    c.verdict = fit.c_measured >= need ? Verdict::Certified : Verdict::Violated;
    c.reason = c.verdict == Verdict::Certified ? "measured rate reaches the admissible rate"
                                               : "measured rate below the admissible rate";
    return c;
}

CgnrResult cgnr_solve(const SparseMatrix& a, const CVector& f, const CgnrOptions& opt) {
    // Column scaling D^{-1/2}: solves (A D^{-1/2}) y = f, x = D^{-1/2} y.
    RVector col2 = RVector::Zero(a.cols());
    for (Eigen::Index k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) col2(it.col()) += std::norm(it.value());
    RVector dinv(a.cols());
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        if (!(col2(i) > 0.0)) throw SolverStagnation("operator has an empty column");
        dinv(i) = 1.0 / std::sqrt(col2(i));
    }
    const SparseMatrix b = a * dinv.cast<cplx>().asDiagonal();
    const SparseMatrix bh = b.adjoint();

    CVector y = CVector::Zero(a.cols());
    CVector r = f;
    CVector s = bh * r;
    CVector p = s;
    const double s0 = s.norm();
    CgnrResult out;
    if (s0 == 0.0) {
        out.x = CVector::Zero(a.cols());
        return out;
    }
    double gamma = s.squaredNorm();
    double best = 1.0;
    int best_it = 0;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        const CVector q = b * p;
        const double alpha = gamma / q.squaredNorm();
        y += alpha * p;
        r -= alpha * q;
        s = bh * r;
        const double g_new = s.squaredNorm();
        const double rel = std::sqrt(g_new) / s0;
        out.iterations = it;
        if (rel <= opt.tol) break;
        if (rel < 0.5 * best) {
            best = rel;
            best_it = it;
        } else if (it - best_it > opt.stagnation_window) {
            throw SolverStagnation("CGNR stagnated at relative normal residual " + std::to_string(rel));
        }
        if (it == opt.max_iterations) throw SolverStagnation("CGNR reached the iteration limit");
        p = s + (g_new / gamma) * p;
        gamma = g_new;
    }
    out.x = dinv.cast<cplx>().asDiagonal() * y;
    out.relative_residual = (f - a * out.x).norm() / f.norm();
    return out;
}

std::function<Eigen::Vector4cd(const Point&)> bump_source(double radius) {
    return [radius](const Point& x) {
        Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
        const double s = x.squaredNorm() / (radius * radius);
        if (s < 1.0) v(0) = std::pow(1.0 - s, 3);
        return v;
    };
}

MtDecayOutcome mt_decay_experiment(const VectorField& a, const std::function<Quaternion(const Point&)>& phi,
                                   const std::function<Eigen::Vector4cd(const Point&)>& f, const Grid& grid_in, const Weight& w,
                                   const MtDecayOptions& opt) {
    Grid grid = grid_in;
    grid.block = 4;
    grid.validate();
    MtDecayOutcome out;
    out.admissibility = mt_weight_admissible(a, phi, w);
    out.bound = mt_decay_bound(a, phi);
    if (!out.admissibility.admissible) {
        out.certificate.reason = "weight is not admissible for this operator";
        if (out.bound.feasible()) out.certificate.c_predicted = *out.bound.c_max;
        return out;
    }

    CVector rhs(static_cast<Eigen::Index>(grid.unknowns()));
    for (std::size_t node = 0; node < grid.nodes(); ++node) {
        const Point x = grid.point(node);
        const Eigen::Vector4cd v = f(x);
        if (x.norm() > 0.25 * grid.half_width && v.norm() > 0.0)
            throw InvalidArgument("source must be supported in |x| <= L/4");
        rhs.segment<4>(static_cast<Eigen::Index>(node) * 4) = v;
    }

    AssemblyOptions aopt;
    aopt.threads = opt.threads;
    const auto op = assemble_mt(a, phi, grid, aopt);
    out.solve = cgnr_solve(op.matrix, rhs, opt.solver);
    out.profile = radial_profile(out.solve.x, grid);
    const FitWindow window = opt.window.r_max > 0.0 ? opt.window : default_fit_window(grid);
    const DecayFit fit = fit_decay_exponent(out.profile, window);
    out.certificate = certify(fit, out.bound, opt.slack);
    return out;
}

}  // namespace agmon
