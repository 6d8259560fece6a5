#include "agmon/weights.hpp"

#include <limits>

namespace agmon {

namespace {

class ConstantSphere final : public SphereFunction {
public:
    ConstantSphere(int dim, double value) : dim_(dim), value_(value) {}
    int dim() const override { return dim_; }
    double value(const RVector&) const override { return value_; }
    RVector tangential_gradient(const RVector&) const override { return RVector::Zero(dim_); }

private:
    int dim_;
    double value_;
};

class TwoPointSphere final : public SphereFunction {
public:
    TwoPointSphere(double plus, double minus) : plus_(plus), minus_(minus) {}
    int dim() const override { return 1; }
    double value(const RVector& w) const override { return w(0) >= 0.0 ? plus_ : minus_; }
    RVector tangential_gradient(const RVector&) const override { return RVector::Zero(1); }

private:
    double plus_, minus_;
};

class FourierSphere final : public SphereFunction {
public:
    FourierSphere(double a0, std::vector<double> c, std::vector<double> s) : a0_(a0), cos_(std::move(c)), sin_(std::move(s)) {}
    int dim() const override { return 2; }

    double value(const RVector& w) const override {
        const double th = std::atan2(w(1), w(0));
        double l = a0_;
        for (std::size_t k = 0; k < cos_.size(); ++k) l += cos_[k] * std::cos(static_cast<double>(k + 1) * th);
        for (std::size_t k = 0; k < sin_.size(); ++k) l += sin_[k] * std::sin(static_cast<double>(k + 1) * th);
        return l;
    }

    RVector tangential_gradient(const RVector& w) const override {
        const double th = std::atan2(w(1), w(0));
        double dl = 0.0;
        for (std::size_t k = 0; k < cos_.size(); ++k) {
            const double m = static_cast<double>(k + 1);
            dl -= m * cos_[k] * std::sin(m * th);
        }
        for (std::size_t k = 0; k < sin_.size(); ++k) {
            const double m = static_cast<double>(k + 1);
            dl += m * sin_[k] * std::cos(m * th);
        }
        return (RVector(2) << -dl * std::sin(th), dl * std::cos(th)).finished();
    }

private:
    double a0_;
    std::vector<double> cos_, sin_;
};

class QuadraticSphere final : public SphereFunction {
public:
    QuadraticSphere(double c, const Eigen::Vector3d& b, const Eigen::Matrix3d& q) : c_(c), b_(b), q_(q) {}
    int dim() const override { return 3; }

    double value(const RVector& w) const override {
        const Eigen::Vector3d o = w.head<3>();
        return c_ + b_.dot(o) + o.dot(q_ * o);
    }

    RVector tangential_gradient(const RVector& w) const override {
        const Eigen::Vector3d o = w.head<3>();
        const Eigen::Vector3d g = b_ + (q_ + q_.transpose()) * o;
        return RVector(g - o * o.dot(g));
    }

private:
    double c_;
    Eigen::Vector3d b_;
    Eigen::Matrix3d q_;
};

}  // namespace

std::shared_ptr<const SphereFunction> sphere_function_1d(double plus, double minus) {
    return std::make_shared<TwoPointSphere>(plus, minus);
}

std::shared_ptr<const SphereFunction> sphere_function_fourier(double a0, std::vector<double> cos_coeffs,
                                                              std::vector<double> sin_coeffs) {
    return std::make_shared<FourierSphere>(a0, std::move(cos_coeffs), std::move(sin_coeffs));
}

std::shared_ptr<const SphereFunction> sphere_function_quadratic(double c, const Eigen::Vector3d& b,
                                                                const Eigen::Matrix3d& q) {
    return std::make_shared<QuadraticSphere>(c, b, q);
}

std::shared_ptr<const SphereFunction> sphere_function_constant(int dim, double value) {
    return std::make_shared<ConstantSphere>(dim, value);
}

RVector Weight::grad_limit(const RVector& omega) const {
    const RVector w = omega.normalized();
    switch (kind_) {
        case WeightKind::RadialLinear:
            return rate_ * w;
        case WeightKind::SphereFunction:
            return sphere_->value(w) * w + sphere_->tangential_gradient(w);
        case WeightKind::Custom:
            break;
    }
    return grad_(1e8 * w);
}

RMatrix Weight::hessian(const Point& x) const {
    const double eps = 1e-5 * (1.0 + x.norm());
    RMatrix h(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
        Point xp = x, xm = x;
        xp(j) += eps;
        xm(j) -= eps;
        h.col(j) = (grad_(xp) - grad_(xm)) / (2.0 * eps);
    }
    return 0.5 * (h + h.transpose());
}

ClassRCheck Weight::check_class_r(const std::vector<double>& radii, int sphere_samples) const {
    ClassRCheck out;
    out.radii = radii;
    const auto dirs = sphere_points(dim_, sphere_samples > 0 ? sphere_samples : 16 * dim_);
    out.grows_to_infinity = true;
    std::vector<double> prev_v(dirs.size(), -std::numeric_limits<double>::infinity());
    for (double r : radii) {
        double worst = 0.0;
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const Point x = r * dirs[d];
            worst = std::max(worst, hessian(x).cwiseAbs().maxCoeff());
            const double val = v_(x);
            if (!(val > prev_v[d])) out.grows_to_infinity = false;
            prev_v[d] = val;
        }
        out.hessian_max.push_back(worst);
    }
    bool decaying = true;
    for (std::size_t k = 1; k < out.hessian_max.size(); ++k)
        if (out.hessian_max[k] > out.hessian_max[k - 1] + 1e-8) decaying = false;
    out.passed = decaying && out.grows_to_infinity;
    return out;
}

Weight make_radial_weight(double c, int dim) {
    if (!(c > 0.0)) throw NonPositiveRate("radial weight rate must be positive");
    Weight w(dim, [c](const Point& x) { return c * japanese_bracket(x); },
             [c](const Point& x) { return RVector(c * x / japanese_bracket(x)); }, WeightKind::RadialLinear);
    w.rate_ = c;
    return w;
}

Weight make_sphere_weight(std::shared_ptr<const SphereFunction> l, double smoothing_radius) {
    if (!l) throw InvalidArgument("sphere weight needs a sphere function");
    if (!(smoothing_radius > 0.0)) throw InvalidArgument("smoothing radius must be positive");
    const int dim = l->dim();
    for (const auto& w : sphere_points(dim, 256))
        if (!(l->value(w) > 0.0)) throw NonPositiveSphereFunction("sphere function must be positive on S^{n-1}");

    const double big_r = smoothing_radius;
    // Radial profile g with g(0) = 0, g = r for r >= R, C^2 across r = R.
    auto g = [big_r](double r) {
        if (r >= big_r) return r;
        const double s = r / big_r;
        return big_r * s * s * (3.0 - 3.0 * s + s * s);
    };
    auto dg = [big_r](double r) {
        if (r >= big_r) return 1.0;
        const double s = r / big_r;
        return s * (6.0 - 9.0 * s + 4.0 * s * s);
    };

    auto value = [l, g](const Point& x) {
        const double r = x.norm();
        if (r == 0.0) return 0.0;
        return l->value(x / r) * g(r);
    };
    auto grad = [l, g, dg, dim](const Point& x) {
        const double r = x.norm();
        if (r == 0.0) return RVector(RVector::Zero(dim));
        const RVector w = x / r;
        return RVector(dg(r) * l->value(w) * w + (g(r) / r) * l->tangential_gradient(w));
    };
    Weight out(dim, value, grad, WeightKind::SphereFunction, smoothing_radius);
    out.sphere_ = std::move(l);
    return out;
}

double rho_grad_norm(const Weight& w, const MetricField& rho, const Point& x) {
    const RVector g = w.grad_v(x);
    return std::sqrt(std::max(0.0, g.dot(rho(x) * g)));
}

double grad_norm_limsup(const Weight& w, const MetricField& rho, const std::vector<double>& radii, int sphere_samples) {
    const auto dirs = sphere_points(w.dim(), sphere_samples > 0 ? sphere_samples : 64 * w.dim());
    std::vector<double> shell;
    for (double r : radii) {
        double hi = 0.0;
        for (const auto& d : dirs) hi = std::max(hi, rho_grad_norm(w, rho, r * d));
        shell.push_back(hi);
    }
    return tail_limsup(shell);
}

}  // namespace agmon
