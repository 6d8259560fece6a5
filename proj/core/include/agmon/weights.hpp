#pragma once

#include <memory>
#include <vector>

#include "agmon/fields.hpp"

namespace agmon {

/// A positive smooth function l on S^{n-1}, together with its tangential
/// gradient (the gradient of the degree-0 extension l(x/|x|) at |x| = 1).
class SphereFunction {
public:
    virtual ~SphereFunction() = default;
    virtual int dim() const = 0;
    virtual double value(const RVector& omega) const = 0;
    virtual RVector tangential_gradient(const RVector& omega) const = 0;
};

/// n = 1: the two values l(+1), l(-1).
std::shared_ptr<const SphereFunction> sphere_function_1d(double plus, double minus);
/// n = 2: l(theta) = a0 + sum_k (cos_k cos k theta + sin_k sin k theta), k = 1, 2, ...
std::shared_ptr<const SphereFunction> sphere_function_fourier(double a0, std::vector<double> cos_coeffs,
                                                              std::vector<double> sin_coeffs);
/// n = 3: l(omega) = c + b.omega + omega^T Q omega restricted to the sphere.
std::shared_ptr<const SphereFunction> sphere_function_quadratic(double c, const Eigen::Vector3d& b,
                                                                const Eigen::Matrix3d& q);
/// Constant l = value in any dimension.
std::shared_ptr<const SphereFunction> sphere_function_constant(int dim, double value);

enum class WeightKind { RadialLinear, SphereFunction, Custom };

/// Result of the slowly-oscillating (class R) check on a weight.
struct ClassRCheck {
    bool passed = false;
    std::vector<double> radii;
    std::vector<double> hessian_max;  ///< max |d^2 v / dx_i dx_j| on each shell
    bool grows_to_infinity = false;   ///< v increases along every sampled ray
};

/// Exponential weight w = exp v with an explicit gradient.
class Weight {
public:
    using ValueFn = std::function<double(const Point&)>;
    using GradFn = std::function<RVector(const Point&)>;

    Weight(int dim, ValueFn v, GradFn grad, WeightKind kind, double smoothing_radius = 0.0)
        : dim_(dim), v_(std::move(v)), grad_(std::move(grad)), kind_(kind), smoothing_radius_(smoothing_radius) {}

    double v(const Point& x) const { return v_(x); }
    RVector grad_v(const Point& x) const { return grad_(x); }
    int dim() const { return dim_; }
    WeightKind kind() const { return kind_; }
    double smoothing_radius() const { return smoothing_radius_; }
    /// Rate c of a radial weight c<x>; 0 for other kinds.
    double rate() const { return rate_; }
    const std::shared_ptr<const SphereFunction>& sphere() const { return sphere_; }

    /// Limit of grad v along the ray r * omega, r -> infinity.
    RVector grad_limit(const RVector& omega) const;

    /// Hessian by central differences of the analytic gradient.
    RMatrix hessian(const Point& x) const;

    ClassRCheck check_class_r(const std::vector<double>& radii = default_shell_radii(), int sphere_samples = 0) const;

private:
    friend Weight make_radial_weight(double c, int dim);
    friend Weight make_sphere_weight(std::shared_ptr<const SphereFunction> l, double smoothing_radius);

    int dim_;
    ValueFn v_;
    GradFn grad_;
    WeightKind kind_;
    double smoothing_radius_;
    double rate_ = 0.0;
    std::shared_ptr<const SphereFunction> sphere_;
};

/// v(x) = c <x>; throws NonPositiveRate unless c > 0.
Weight make_radial_weight(double c, int dim);

/// v = l(x/|x|) |x| outside the smoothing radius, blended to v(0) = 0 inside by
/// the C^2 profile g(r) = R (3 s^2 - 3 s^3 + s^4), s = r / R.
/// Throws NonPositiveSphereFunction if l is not positive on sampled points.
Weight make_sphere_weight(std::shared_ptr<const SphereFunction> l, double smoothing_radius = 1.0);

/// |grad v(x)|_rho = (rho^{jk}(x) d_j v d_k v)^{1/2}
double rho_grad_norm(const Weight& w, const MetricField& rho, const Point& x);

/// limsup_{x -> inf} |grad v(x)|_{rho(x)} from per-shell maxima.
double grad_norm_limsup(const Weight& w, const MetricField& rho, const std::vector<double>& radii = default_shell_radii(),
                        int sphere_samples = 0);

}  // namespace agmon
