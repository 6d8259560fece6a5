#include "agmon/fields.hpp"

#include <limits>
#include <numbers>

namespace agmon {

namespace {

std::vector<Point> probe_points(int dim) {
    std::vector<Point> pts;
    pts.push_back(Point::Zero(dim));
    for (double r : {0.5, 3.0, 40.0, 1000.0})
        for (const auto& w : sphere_points(dim, 8)) pts.push_back(r * w);
    return pts;
}

// Aitken's delta-squared extrapolant of s0, s1, s2; falls back to s2 when the
// increments do not contract.
cplx aitken(cplx s0, cplx s1, cplx s2) {
    const cplx d1 = s1 - s0;
    const cplx d2 = s2 - s1;
    const cplx denom = d2 - d1;
    if (std::abs(d2) >= std::abs(d1) || std::abs(denom) == 0.0) return s2;
    return s2 - d2 * d2 / denom;
}

double tail_extreme(const std::vector<double>& v, bool lower) {
    if (v.empty()) throw InvalidArgument("tail statistic of an empty sequence");
    const auto extreme = lower ? *std::min_element(v.begin(), v.end()) : *std::max_element(v.begin(), v.end());
    if (v.size() < 3) return extreme;
    const double v0 = v[v.size() - 3], v1 = v[v.size() - 2], v2 = v.back();
    const double d1 = v1 - v0, d2 = v2 - v1;
    if (d1 == 0.0 && d2 == 0.0) return v2;
    const bool monotone = (d1 > 0.0 && d2 >= 0.0) || (d1 < 0.0 && d2 <= 0.0);
    if (!monotone || std::abs(d2) > std::abs(d1)) return extreme;
    if (d2 == d1) return v2;
    return v2 - d2 * d2 / (d2 - d1);
}

CVector flatten(const CoefficientBundle& f, const Point& x) {
    std::vector<cplx> out;
    if (f.magnetic) {
        const RVector a = (*f.magnetic)(x);
        for (Eigen::Index i = 0; i < a.size(); ++i) out.emplace_back(a(i));
    }
    if (f.rho) {
        const RMatrix r = (*f.rho)(x);
        for (Eigen::Index i = 0; i < r.size(); ++i) out.emplace_back(r.data()[i]);
    }
    if (f.potential) {
        const CMatrix p = (*f.potential)(x);
        for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(p.data()[i]);
    }
    if (f.principal) {
        const RVector a = (*f.principal)(x);
        for (Eigen::Index i = 0; i < a.size(); ++i) out.emplace_back(a(i));
    }
    if (f.quaternion) {
        const Quaternion q = f.quaternion(x);
        for (int k = 0; k < 4; ++k) out.push_back(q[k]);
    }
    if (f.grad_v) {
        const RVector g = f.grad_v(x);
        for (Eigen::Index i = 0; i < g.size(); ++i) out.emplace_back(g(i));
    }
    return Eigen::Map<CVector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

LimitPoint unflatten(const CoefficientBundle& f, const Point& probe, const CVector& v, int dim) {
    LimitPoint p;
    Eigen::Index pos = 0;
    auto take = [&](Eigen::Index count) {
        CVector seg = v.segment(pos, count);
        pos += count;
        return seg;
    };
    if (f.magnetic) p.magnetic = take((*f.magnetic)(probe).size()).real();
    if (f.rho) {
        const RMatrix shape = (*f.rho)(probe);
        const CVector seg = take(shape.size());
        p.rho = Eigen::Map<const CMatrix>(seg.data(), shape.rows(), shape.cols()).real();
        p.rho = 0.5 * (p.rho + p.rho.transpose()).eval();
    } else {
        p.rho = RMatrix::Identity(dim, dim);
    }
    if (f.potential) {
        const CMatrix shape = (*f.potential)(probe);
        const CVector seg = take(shape.size());
        p.potential = Eigen::Map<const CMatrix>(seg.data(), shape.rows(), shape.cols());
    }
    if (f.principal) p.principal = take((*f.principal)(probe).size()).real();
    if (f.quaternion) p.quaternion = Quaternion::from_coefficients(take(4));
    if (f.grad_v) p.grad_v = take(f.grad_v(probe).size()).real();
    if (p.magnetic.size() == 0) p.magnetic = RVector::Zero(dim);
    return p;
}

}  // namespace

// --- ScalarField -----------------------------------------------------------

ScalarField ScalarField::constant(int dim, cplx value) {
    const double re = value.real();
    std::optional<LimitRange> lim;
    if (value.imag() == 0.0) lim = LimitRange{re, re};
    return ScalarField(dim, [value](const Point&) { return value; }, FieldClass::SO1, lim);
}

std::vector<double> ScalarField::derivative_decay_profile(double base_radius, int sphere_samples) const {
    const int samples = sphere_samples > 0 ? sphere_samples : 16 * dim_;
    const auto dirs = sphere_points(dim_, samples);
    std::vector<double> maxima;
    for (double r : {base_radius, 2.0 * base_radius, 4.0 * base_radius}) {
        double worst = 0.0;
        const double step = 1e-4 * (1.0 + r);
        for (const auto& w : dirs) {
            const Point x = r * w;
            double g2 = 0.0;
            for (int j = 0; j < dim_; ++j) {
                Point xp = x, xm = x;
                xp(j) += step;
                xm(j) -= step;
                g2 += std::norm((fn_(xp) - fn_(xm)) / (2.0 * step));
            }
            worst = std::max(worst, std::sqrt(g2));
        }
        maxima.push_back(worst);
    }
    return maxima;
}

bool ScalarField::check_slow_oscillation(double base_radius, int sphere_samples, double tol) const {
    if (class_ != FieldClass::SO1) return true;
    const auto p = derivative_decay_profile(base_radius, sphere_samples);
    for (std::size_t k = 1; k < p.size(); ++k)
        if (p[k] > 0.9 * p[k - 1] + tol) return false;
    return true;
}

// --- MatrixField -----------------------------------------------------------

MatrixField MatrixField::constant(int dim, const CMatrix& value) {
    const bool herm = (value - value.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, value.cwiseAbs().maxCoeff());
    return MatrixField(dim, static_cast<int>(value.rows()), [value](const Point&) { return value; }, herm);
}

MatrixField MatrixField::diagonal(std::vector<ScalarField> entries) {
    if (entries.empty()) throw InvalidArgument("diagonal matrix field needs at least one entry");
    const int dim = entries.front().dim();
    const int block = static_cast<int>(entries.size());
    MatrixField f(dim, block, [entries](const Point& x) {
        CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(entries.size()));
        for (std::size_t i = 0; i < entries.size(); ++i)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i](x);
        return m;
    }, true);
    f.hermitian_ = f.hermiticity_defect(probe_points(dim)) == 0.0;
    return f;
}

MatrixField MatrixField::scalar_times_identity(const ScalarField& s, int block) {
    MatrixField f(s.dim(), block, [s, block](const Point& x) {
        return CMatrix(s(x) * CMatrix::Identity(block, block));
    }, true);
    f.hermitian_ = f.hermiticity_defect(probe_points(s.dim())) == 0.0;
    return f;
}

double MatrixField::hermiticity_defect(const std::vector<Point>& samples) const {
    double worst = 0.0;
    for (const auto& x : samples) {
        const CMatrix m = fn_(x);
        worst = std::max(worst, (m - m.adjoint()).cwiseAbs().maxCoeff());
    }
    return worst;
}

// --- MetricField -----------------------------------------------------------

MetricField MetricField::identity(int dim) {
    return MetricField(dim, [dim](const Point&) { return RMatrix(RMatrix::Identity(dim, dim)); });
}

MetricField MetricField::constant(const RMatrix& rho) {
    return MetricField(static_cast<int>(rho.rows()), [rho](const Point&) { return rho; });
}

MetricField MetricField::scalar(const ScalarField& s) {
    const int dim = s.dim();
    return MetricField(dim, [s, dim](const Point& x) { return RMatrix(s.real(x) * RMatrix::Identity(dim, dim)); });
}

double MetricField::min_eigenvalue(const std::vector<Point>& samples) const {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& x : samples) {
        Eigen::SelfAdjointEigenSolver<RMatrix> es(fn_(x), Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues()(0));
    }
    return lo;
}

// --- VectorField -----------------------------------------------------------

VectorField VectorField::zero(int dim) {
    return VectorField(dim, [dim](const Point&) { return RVector(RVector::Zero(dim)); });
}

VectorField VectorField::from_components(std::vector<ScalarField> comps) {
    if (comps.empty()) throw InvalidArgument("vector field needs components");
    const int dim = comps.front().dim();
    return VectorField(dim, [comps](const Point& x) {
        RVector v(static_cast<Eigen::Index>(comps.size()));
        for (std::size_t i = 0; i < comps.size(); ++i) v(static_cast<Eigen::Index>(i)) = comps[i].real(x);
        return v;
    });
}

// --- Limit data ------------------------------------------------------------

void LimitSet::validate(bool require_hermitian) const {
    if (points.empty()) throw InvalidArgument("limit set must not be empty");
    for (const auto& p : points) {
        if (p.rho.size() > 0) {
            Eigen::SelfAdjointEigenSolver<RMatrix> es(p.rho, Eigen::EigenvaluesOnly);
            if (!(es.eigenvalues()(0) > 0.0)) throw MetricNotSPD("limit point '" + p.label + "': rho_g is not positive definite");
        }
        if (require_hermitian && p.potential.size() > 0) {
            const double scale = 1.0 + p.potential.cwiseAbs().maxCoeff();
            if ((p.potential - p.potential.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
                throw NotHermitian("limit point '" + p.label + "': Phi_g is not Hermitian");
        }
    }
}

std::vector<LimitPoint> LimitFamily::discretize(int samples) const {
    if (samples < 2) samples = 2;
    std::vector<LimitPoint> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double s = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
        LimitPoint p = base;
        p.potential = base.potential + s * direction;
        p.label = base.label + "[s=" + std::to_string(s) + "]";
        out.push_back(std::move(p));
    }
    return out;
}

RaySamplingResult sample_limits_along_rays(const CoefficientBundle& fields, int dim, const std::vector<RVector>& directions,
                                           const std::vector<double>& radii, double rel_tol, bool throw_on_failure) {
    if (radii.size() < 2) throw InvalidArgument("ray sampling needs at least two radii");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1])) throw InvalidArgument("ray sampling radii must be strictly increasing");
    if (directions.empty()) throw InvalidArgument("ray sampling needs at least one direction");

    RaySamplingResult result;
    result.limits.provenance = Provenance::RaySampled;
    for (std::size_t d = 0; d < directions.size(); ++d) {
        const RVector w = directions[d].normalized();
        std::vector<CVector> samples;
        for (double r : radii) samples.push_back(flatten(fields, r * w));

        std::vector<CVector> est;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (i < 2) {
                est.push_back(samples[i]);
                continue;
            }
            CVector e(samples[i].size());
            for (Eigen::Index c = 0; c < e.size(); ++c) e(c) = aitken(samples[i - 2](c), samples[i - 1](c), samples[i](c));
            est.push_back(e);
        }
        const CVector& last = est.back();
        const CVector& prev = est[est.size() - 2];
        const double scale = std::max(1.0, last.size() ? last.cwiseAbs().maxCoeff() : 0.0);
        const double defect = last.size() ? (last - prev).cwiseAbs().maxCoeff() / scale : 0.0;

        RaySample diag{w, defect, defect <= rel_tol};
        result.diagnostics.push_back(diag);
        if (!diag.converged && throw_on_failure) {
            throw NonConvergent("coefficients do not converge along direction " + std::to_string(d) +
                                    " (relative defect " + std::to_string(defect) + ")",
                                d);
        }
        LimitPoint p = unflatten(fields, radii.back() * w, last, dim);
        p.label = "ray" + std::to_string(d);
        result.limits.points.push_back(std::move(p));
    }
    return result;
}

std::vector<RVector> sphere_points(int dim, int count) {
    std::vector<RVector> pts;
    if (dim == 1) {
        pts.push_back(RVector::Constant(1, 1.0));
        pts.push_back(RVector::Constant(1, -1.0));
        return pts;
    }
    if (count < 1) count = 1;
    if (dim == 2) {
        for (int k = 0; k < count; ++k) {
            const double a = 2.0 * std::numbers::pi * k / count;
            pts.push_back((RVector(2) << std::cos(a), std::sin(a)).finished());
        }
        return pts;
    }
    if (dim == 3) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            const double z = 1.0 - (2.0 * k + 1.0) / count;
            const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double a = golden * k;
            pts.push_back((RVector(3) << rad * std::cos(a), rad * std::sin(a), z).finished());
        }
        return pts;
    }
    throw InvalidArgument("sphere_points supports dimensions 1, 2 and 3");
}

std::vector<double> default_shell_radii() {
    std::vector<double> r;
    for (int k = 4; k <= 12; ++k) r.push_back(std::ldexp(1.0, k));
    return r;
}

double tail_liminf(const std::vector<double>& shell_values) { return tail_extreme(shell_values, true); }
double tail_limsup(const std::vector<double>& shell_values) { return tail_extreme(shell_values, false); }

DPhiEstimate d_phi(const MatrixField& phi, const std::vector<double>& radii, int sphere_samples) {
    if (!phi.hermitian()) throw NotHermitian("d_phi requires a Hermitian matrix potential");
    const int dim = phi.dim();
    const auto dirs = sphere_points(dim, sphere_samples > 0 ? sphere_samples : 64 * dim);
    DPhiEstimate out;
    out.radii = radii;
    for (double r : radii) {
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& w : dirs) {
            const CMatrix m = phi(r * w);
            const double scale = 1.0 + m.cwiseAbs().maxCoeff();
            if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
                throw NotHermitian("d_phi: Phi(x) is not Hermitian at a sampled point");
            Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
            lo = std::min(lo, es.eigenvalues()(0));
        }
        out.shell_minima.push_back(lo);
    }
    out.value = tail_liminf(out.shell_minima);
    return out;
}

double rho_sup(const MetricField& rho, const std::vector<double>& radii, int sphere_samples) {
    const int dim = rho.dim();
    const auto dirs = sphere_points(dim, sphere_samples > 0 ? sphere_samples : 64 * dim);
    std::vector<double> shell;
    for (double r : radii) {
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& w : dirs) {
            Eigen::SelfAdjointEigenSolver<RMatrix> es(rho(r * w), Eigen::EigenvaluesOnly);
            lo = std::min(lo, std::sqrt(std::max(0.0, es.eigenvalues()(dim - 1))));
        }
        shell.push_back(lo);
    }
    return tail_liminf(shell);
}

RMatrix spd_sqrt(const RMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (rho + rho.transpose()));
    const RVector ev = es.eigenvalues();
    if (!(ev(0) > 0.0)) throw MetricNotSPD("metric is not symmetric positive definite");
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace agmon
